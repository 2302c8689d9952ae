"""Command-line front end.

Exit codes: 0 success, 1 invalid input or usage, 2 an invariant failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Sequence

from .boolfn import BoolFn, format_set, indices_of, io_split, mask_of
from .errors import HotkitError, InvariantError, UsageError
from .mobius import MobiusCoeffs, to_boolfn, transform
from .poset import check_properties, maximal_chains, structure_poset, to_dot
from .typeterm import TypeTerm, chain_of, eval_term, format_term, is_type_function, parse, type_catalog

COMB = "causally ordered (comb)"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 by default; usage problems are 1 here
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Source:
    fn: BoolFn
    term: TypeTerm | None
    text: str


def _parse_indices(text: str, n: int | None = None) -> int:
    text = text.strip().strip("{}")
    if not text:
        return 0
    try:
        idx = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None
    return mask_of(idx, n)


def _parse_dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad dimension list {text!r}") from None
    if not dims:
        raise UsageError("empty dimension list")
    return dims


def load_function(path: str) -> tuple[BoolFn, TypeTerm | None]:
    """Read a function file: {"n", "support"}, {"n", "coeffs"} or {"term"}."""
    try:
        with (sys.stdin if path == "-" else open(path, encoding="utf-8")) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    if "fn" in data and isinstance(data["fn"], dict):
        data = data["fn"]
    if "term" in data and "support" not in data:
        t = parse(str(data["term"]))
        return eval_term(t), t
    if "support" in data:
        return BoolFn.from_json(data), None
    if "coeffs" in data:
        return to_boolfn(MobiusCoeffs.from_json(data)), None
    raise UsageError(f"{path}: need one of 'support', 'coeffs' or 'term'")


def _source(args) -> Source:
    if args.term is not None and args.fn is not None:
        raise UsageError("give either --term or --fn, not both")
    if args.term is not None:
        t = parse(args.term)
        return Source(eval_term(t), t, args.term)
    if args.fn is not None:
        f, t = load_function(args.fn)
        return Source(f, t, args.fn)
    raise UsageError("missing input: pass --term or --fn")


# ---------------------------------------------------------------------------
# analysis report
# ---------------------------------------------------------------------------

def _poset_summary(f: BoolFn) -> dict:
    P = structure_poset(f)
    chains = maximal_chains(P, reduced=True)
    return {
        "elements": len(P.elements),
        "reduced_elements": len(P.reduced_elements),
        "rank": P.top_rank,
        "maximal_chains": len(chains),
        "chains": [P.label_trace(c) for c in chains],
        "free_inputs": list(indices_of(P.free_inputs)),
        "free_outputs": list(indices_of(P.free_outputs)),
    }


def analysis_report(src: Source) -> dict:
    """Everything the analyze subcommand prints, derived from the function alone."""
    from .normalform import synthesize
    from .signalling import signalling_matrix
    from .subtypes import is_monotone_subtype

    f = src.fn
    split = io_split(f)
    c = transform(f)
    is_type = is_type_function(f)
    regular = is_monotone_subtype(f)
    report: dict = {
        "input": {"term": src.text if src.term is not None else None,
                  "canonical": format_term(src.term) if src.term is not None else None, "fn": f.to_json()},
        "n": f.n,
        "inputs": list(split.input_indices),
        "outputs": list(split.output_indices),
        "mobius": str(c),
        "type_function": is_type,
        "regular_subtype": regular,
        "chain_type": chain_of(f) is not None,
        "structure": COMB if chain_of(f) is not None else ("general" if is_type else None),
        "poset": None,
        "signalling": None,
        "normal_form": None,
        "checks": {},
    }
    checks = report["checks"]
    if is_type:
        report["poset"] = _poset_summary(f)
        P = structure_poset(f)
        bad = check_properties(P)
        checks["mobius coefficients in {-1,0,1}"] = "pass" if all(v in (-1, 1) for v in c.coeffs.values()) else "fail"
        checks["poset properties"] = "pass" if not bad else "fail: " + bad[0]
        try:
            nf = synthesize(f)
        except InvariantError as exc:
            checks["normal form"] = f"fail: {exc}"
        else:
            report["normal_form"] = {"render": nf.render(), "leaves": nf.distinct_leaves(), "json": nf.to_json()}
            checks["normal form"] = "pass"
    if regular:
        try:
            M = signalling_matrix(f)
        except InvariantError as exc:
            checks["signalling criteria agree"] = f"fail: {exc}"
        else:
            report["signalling"] = M.to_json()
            report["_signalling_text"] = M.render()
            if is_type:
                checks["signalling criteria agree"] = "pass"
    return report


def format_report(r: dict, mode: str = "text") -> str:
    if mode == "json":
        return _dumps({k: v for k, v in r.items() if not k.startswith("_")})
    lines = []
    if r["input"]["term"]:
        lines.append(f"term:       {r['input']['term']}")
    lines.append(f"n:          {r['n']}")
    lines.append(f"inputs:     {format_set(mask_of(r['inputs']))}")
    lines.append(f"outputs:    {format_set(mask_of(r['outputs']))}")
    lines.append(f"mobius:     {r['mobius']}")
    kind = "type function" if r["type_function"] else ("regular subtype" if r["regular_subtype"] else
                                                        "not a regular subtype")
    lines.append(f"kind:       {kind}")
    if r["chain_type"]:
        lines.append(f"structure:  {COMB}")
    if r["poset"]:
        p = r["poset"]
        lines.append(f"poset:      {p['elements']} elements, {p['reduced_elements']} reduced, rank {p['rank']}, "
                     f"{p['maximal_chains']} maximal chain{'s' if p['maximal_chains'] != 1 else ''}")
        for ch in p["chains"]:
            lines.append(f"  chain     {ch}")
        if p["free_inputs"]:
            lines.append(f"  free inputs  {format_set(mask_of(p['free_inputs']))}")
        if p["free_outputs"]:
            lines.append(f"  free outputs {format_set(mask_of(p['free_outputs']))}")
    if r.get("_signalling_text"):
        lines.append("signalling:")
        lines.extend("  " + x for x in r["_signalling_text"].splitlines())
        no = [f"{p['i']}->{p['j']}" for p in r["signalling"]["pairs"] if not p["signals"]]
        if no:
            lines.append("  no signalling: " + ", ".join(no))
    if r["normal_form"]:
        lines.append(f"normal form ({r['normal_form']['leaves']} leaves):")
        lines.append("  " + r["normal_form"]["render"])
    if r["checks"]:
        lines.append("checks:")
        for k, v in r["checks"].items():
            lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_parse(args, out) -> int:
    src = _source(args)
    f = src.fn
    data = {"term": format_term(src.term) if src.term is not None else None, "n": f.n,
            "fn": f.to_json(), "mobius": transform(f).to_json(), "expansion": str(transform(f))}
    if args.json:
        out.write(_dumps(data))
    else:
        if data["term"]:
            out.write(f"{data['term']}\n")
        out.write(f"{data['expansion']}\n")
    return 0


def cmd_analyze(args, out) -> int:
    r = analysis_report(_source(args))
    out.write(format_report(r, "json" if args.json else "text"))
    return 2 if any(str(v).startswith("fail") for v in r["checks"].values()) else 0


def _require_n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    return args.n


def cmd_enumerate_types(args, out) -> int:
    n = _require_n(args)
    fns = type_catalog(n).functions()
    if args.outputs is not None:
        O = _parse_indices(args.outputs, n)
        fns = [f for f in fns if io_split(f).outputs == O]
    rows = [{"fn": f.to_json(), "mobius": str(transform(f)), "outputs": list(io_split(f).output_indices),
             "chain_type": chain_of(f) is not None} for f in fns]
    if args.json:
        out.write(_dumps({"n": n, "outputs": None if args.outputs is None else list(indices_of(O)),
                          "count": len(rows), "types": rows}))
    else:
        out.write(f"{len(rows)} type functions on n={n}\n")
        for row in rows:
            mark = "  chain" if row["chain_type"] else ""
            out.write(f"  {format_set(mask_of(row['outputs'])):<14} {row['mobius']}{mark}\n")
    return 0


def cmd_enumerate_regular(args, out) -> int:
    from .subtypes import enumerate_regular
    n = _require_n(args)
    if args.outputs is None:
        raise UsageError("--outputs is required")
    lat = enumerate_regular(n, _parse_indices(args.outputs, n), allow_large=args.allow_large)
    if args.json:
        out.write(_dumps(lat.to_json()))
        return 0
    out.write(f"n={n} outputs {format_set(lat.O)}: {len(lat)} regular subtypes, "
              f"{len(lat.types)} type functions, {len(lat.chain_types())} chain types\n")
    out.write(f"basic strings: {', '.join(str(s) for s in lat.basic) or '(none)'}\n")
    out.write("generators:\n")
    for g in lat.generators:
        out.write(f"  {transform(g)}\n")
    if args.members:
        out.write("members:\n")
        for f in lat.members:
            out.write(f"  {transform(f)}\n")
    return 0


def cmd_signalling(args, out) -> int:
    from .signalling import signalling_matrix
    M = signalling_matrix(_source(args).fn)
    out.write(_dumps(M.to_json()) if args.json else M.render() + "\n")
    return 0


def cmd_hasse(args, out) -> int:
    f = _source(args).fn
    if not is_type_function(f):
        raise UsageError("structure posets are drawn for type functions only")
    P = structure_poset(f)
    reduced = not args.full
    if args.dot:
        out.write(to_dot(P, reduced_only=reduced))
    elif args.json:
        out.write(_dumps(P.to_json()))
    else:
        for T in P.members(reduced):
            lab = format_set(P.labels[T]) if P.labels[T] else "-"
            out.write(f"{format_set(T):<22} rank {P.rank[T]}  labels {lab}\n")
        for a, b in P.covers(reduced):
            out.write(f"{format_set(a)} < {format_set(b)}\n")
    return 0


def cmd_normal_form(args, out) -> int:
    from .normalform import minimax_status, synthesize
    src = _source(args)
    nf = synthesize(src.fn, src.term)
    if args.json:
        out.write(_dumps({**nf.to_json(), "minimax": minimax_status(nf)}))
    else:
        out.write(nf.render() + "\n")
        out.write(f"{nf.distinct_leaves()} distinct leaves, minimax {minimax_status(nf)}\n")
    return 0


def cmd_verify(args, out) -> int:
    from .verify import run_suites
    results = run_suites(args.suite or ["all"], max_n=args.max_n, samples=args.samples, seed=args.seed)
    if args.json:
        out.write(_dumps({"ok": all(r.ok for r in results), "checks": [r.to_json() for r in results]}))
    else:
        for r in results:
            out.write(r.line() + "\n")
        passed = sum(r.ok for r in results)
        out.write(f"{passed}/{len(results)} checks passed\n")
    return 0 if all(r.ok for r in results) else 2


def cmd_choi_verify(args, out) -> int:
    from .choiverify import verify_identities
    from .verify import _types
    if args.dims is not None:
        dims = _parse_dims(args.dims)
    elif args.n is not None:
        dims = (2,) * args.n
    else:
        raise UsageError("pass --dims or --n")
    n = len(dims)
    if args.all_types and (args.term is not None or args.fn is not None):
        raise UsageError("--all-types cannot be combined with --term or --fn")
    if args.term is not None or args.fn is not None:
        fns = [_source(args).fn]
        if fns[0].n != n:
            raise UsageError(f"function has n={fns[0].n}, dimensions describe {n} systems")
        tensor_pairs = []
    else:
        if n > 3:
            raise UsageError("without --term/--fn the exhaustive check is limited to 3 systems")
        fns = type_catalog(n).functions()
        tensor_pairs = [(f, g) for a in range(1, n) for f in _types(a) for g in _types(n - a)]
    rep = verify_identities(dims, fns, None, tensor_pairs, seed=args.seed, tolerance=args.tolerance)
    out.write(_dumps(rep.to_json()) if args.json else rep.render() + "\n")
    return 0 if rep.ok else 2


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hotkit", description="Type functions of higher-order quantum maps.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    def with_input(sp):
        sp.add_argument("--term", help='type term, e.g. "(A2 -> A1) * (A4 -> A3)"')
        sp.add_argument("--fn", metavar="FILE", help="JSON function file ('-' for stdin)")

    def with_json(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    sp = sub.add_parser("parse", help="parse a term and print its Moebius expansion")
    with_input(sp), with_json(sp)
    sp.set_defaults(run=cmd_parse)

    sp = sub.add_parser("analyze", help="full report for one function")
    with_input(sp), with_json(sp)
    sp.set_defaults(run=cmd_analyze)

    sp = sub.add_parser("enumerate-types", help="list the type functions on n systems")
    sp.add_argument("--n", type=int)
    sp.add_argument("--outputs", help="keep only this output set, e.g. 1,3")
    with_json(sp)
    sp.set_defaults(run=cmd_enumerate_types)

    sp = sub.add_parser("enumerate-regular", help="the lattice of regular subtypes for an output set")
    sp.add_argument("--n", type=int)
    sp.add_argument("--outputs")
    sp.add_argument("--members", action="store_true", help="print every member")
    sp.add_argument("--allow-large", action="store_true", help="permit n >= 5")
    with_json(sp)
    sp.set_defaults(run=cmd_enumerate_regular)

    sp = sub.add_parser("signalling", help="signalling matrix of a regular subtype")
    with_input(sp), with_json(sp)
    sp.set_defaults(run=cmd_signalling)

    sp = sub.add_parser("hasse", help="structure poset (reduced by default)")
    with_input(sp), with_json(sp)
    sp.add_argument("--dot", action="store_true", help="Graphviz DOT output")
    sp.add_argument("--full", action="store_true", help="all elements, not only the reduced poset")
    sp.set_defaults(run=cmd_hasse)

    sp = sub.add_parser("normal-form", help="a join of meets of chain types")
    with_input(sp), with_json(sp)
    sp.set_defaults(run=cmd_normal_form)

    sp = sub.add_parser("verify", help="run the verification suites")
    sp.add_argument("--suite", action="append", help="suite name or 'all' (repeatable)")
    sp.add_argument("--max-n", type=int, default=4)
    sp.add_argument("--samples", type=int, default=0, help="random cases on max-n + 1 systems")
    sp.add_argument("--seed", type=int, default=0)
    with_json(sp)
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("choi-verify", help="numerical check of the projection identities")
    with_input(sp)
    sp.add_argument("--dims", help="local dimensions, e.g. 2,2,3")
    sp.add_argument("--all-types", action="store_true",
                    help="every type function on the given systems (the default without --term/--fn)")
    sp.add_argument("--n", type=int, help="number of qubits (when --dims is omitted)")
    sp.add_argument("--tolerance", type=float, default=1e-9)
    sp.add_argument("--seed", type=int, default=0)
    with_json(sp)
    sp.set_defaults(run=cmd_choi_verify)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args, out)
    except InvariantError as exc:
        err.write(f"hotkit: invariant failed: {exc}\n")
        return 2
    except HotkitError as exc:
        err.write(f"hotkit: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
