"""Reproducible checks of the main results, grouped into named suites.

Each check returns a CheckResult with a case count and the first few
failures.  ``run_suites`` drives them for the ``verify`` subcommand; the
acceptance tests call the same functions with their own expected values.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

from .boolfn import (BoolFn, all_functions, all_permutations, causal, causal_rev, complement, full_mask, indices_of,
                     io_split, par, permute, tensor)
from .catalog import (EXAMPLES, G_CHAINS, H_CHAINS, K_CHAINS, PM_GLOBAL_CHAINS, adapter_pm,
                      adapter_pm_global, f_ns, f_pm, pm_global)
from .errors import UsageError
from .mobius import transform
from .normalform import NormalForm, eval_normal_form, minimax_status, synthesize
from .poset import check_properties, maximal_chains, poset_op_check, reconstruct, structure_poset
from .signalling import criteria_agree, e_ij, no_signal_from_reduced
from .subtypes import (OutputOrder, basic_strings, enumerate_regular, f_s, is_monotone,
                       is_monotone_subtype, is_monotone_subtype_pairs, lattice_closure,
                       monotone_subtypes, two_condition_check, types_with_output_set)
from .typeterm import is_chain_type, is_type_function, type_catalog

MAX_FAILURES = 10


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    failed: int = 0
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.cases > 0

    def record(self, ok: bool, detail: str | Callable[[], str] = "") -> None:
        self.cases += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(detail() if callable(detail) else detail)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status} {self.name}: {self.cases - self.failed}/{self.cases} cases ({self.seconds:.2f}s)"
        if self.failures:
            out += "; first failure: " + self.failures[0]
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "cases": self.cases, "failed": self.failed,
                "failures": list(self.failures), "seconds": round(self.seconds, 3)}


def _timed(name: str):
    def wrap(fn):
        def run(*args, **kwargs) -> CheckResult:
            res = CheckResult(name)
            t0 = time.perf_counter()
            fn(res, *args, **kwargs)
            res.seconds = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _types(n: int) -> list[BoolFn]:
    return type_catalog(n, allow_large=True).functions()


# ---------------------------------------------------------------------------
# counts, regular subtypes, Moebius, signalling
# ---------------------------------------------------------------------------

@_timed("regular subtype counts")
def check_counts(res: CheckResult, expected: dict | None = None) -> None:
    """Sizes of the regular lattices for O = {1,3} at n = 3 and 4."""
    expected = expected or {
        (3, "size"): 5,
        (4, "size"): 50,
        (4, "chains"): 14,
        (4, "basic"): ["1100", "1001", "0110", "0011", "1101", "0111"],
    }
    for n in (3, 4):
        lat = enumerate_regular(n, (1, 3))
        got = {"size": len(lat), "chains": len(lat.chain_types()), "basic": [str(s) for s in lat.basic]}
        for key in ("size", "chains", "basic"):
            if (n, key) not in expected:
                continue
            want = expected[(n, key)]
            have = got[key]
            if key == "basic":
                ok = sorted(have) == sorted(want)
            else:
                ok = have == want
            res.record(ok, f"n={n} {key}: got {have}, expected {want}")


@_timed("regular = monotone")
def check_regular(res: CheckResult, max_n: int = 4) -> None:
    """Lattice closure of T_{n,O} against brute-force monotone subtypes, every O."""
    for n in range(1, max_n + 1):
        for O in range(1 << n):
            closure = lattice_closure(types_with_output_set(n, O, allow_large=True))
            brute = monotone_subtypes(n, O, allow_large=True)
            res.record(closure == brute,
                       lambda: f"n={n} O={indices_of(O)}: closure {len(closure)}, monotone {len(brute)}")


@_timed("signalling criteria agree")
def check_signalling(res: CheckResult, max_n: int = 5) -> None:
    """f(e^{i,j}) = 0 iff the pair rank is even, and the reduced-poset reading agrees."""
    for n in range(1, max_n + 1):
        for f in _types(n):
            split = io_split(f)
            bad = criteria_agree(f)
            P = structure_poset(f)
            for i in split.input_indices:
                for j in split.output_indices:
                    ok = (i, j) not in bad and no_signal_from_reduced(P, i, j) == (f(e_ij(n, i, j)) == 0)
                    res.record(ok, lambda: f"{f!r}: pair ({i},{j})")


@_timed("moebius integrality and posets")
def check_mobius(res: CheckResult, max_n: int = 5) -> None:
    """Coefficients in {-1,0,1}, graded poset with even top rank, exact reconstruction."""
    for n in range(1, max_n + 1):
        for f in _types(n):
            c = transform(f)
            P = structure_poset(f)
            problems = []
            if any(v not in (-1, 1) for v in c.coeffs.values()):
                problems.append("coefficient outside {-1,0,1}")
            if not P.valid:
                problems.append("; ".join(P.diagnostics))
            if P.top_rank % 2:
                problems.append(f"odd top rank {P.top_rank}")
            if reconstruct(P) != c:
                problems.append("reconstruction differs")
            res.record(not problems, lambda: f"{f!r}: {', '.join(problems)}")


@_timed("causal product of types")
def check_causal_product(res: CheckResult, max_total: int = 5) -> None:
    """f < g is a type iff f or g is a chain type (a + b <= max_total)."""
    for total in range(2, max_total + 1):
        for a in range(1, total):
            F, G = _types(a), _types(total - a)
            fc = [is_chain_type(f) for f in F]
            gc = [is_chain_type(g) for g in G]
            for f, cf in zip(F, fc):
                for g, cg in zip(G, gc):
                    h = causal(f, g)
                    got = is_type_function(h)
                    res.record(got == (cf or cg),
                               lambda: f"{f!r} < {g!r}: type={got}, chains=({cf},{cg})")


# ---------------------------------------------------------------------------
# golden examples
# ---------------------------------------------------------------------------

# (function, [(i, j, signals)]) for the worked examples; a2 branches are
# {1,3,6 | 2,4,5}, {8 | 7}, {10 | 9}, with 11 on top and 12 at the bottom
def _a2_relations() -> list[tuple[int, int, bool]]:
    rel = [(1, 2, True), (1, 4, False), (3, 4, True), (3, 2, False), (1, 5, False), (3, 5, False)]
    branches = {1: (1, 3, 6), 2: (8,), 3: (10,)}
    outs = {1: (2, 4, 5), 2: (7,), 3: (9,)}
    for b, ins in branches.items():
        for i in ins:
            for c, js in outs.items():
                if c != b:
                    rel.extend((i, j, True) for j in js)
                elif i not in (1, 3):
                    rel.extend((i, j, False) for j in js)
    rel.extend((11, j, True) for j in (2, 4, 5, 7, 9, 12))
    rel.extend((i, 12, True) for i in (1, 3, 6, 8, 10, 11))
    return rel


GOLDEN_SIGNALLING = {
    "f_ns": [(2, 1, True), (4, 3, True), (2, 3, False), (4, 1, False)],
    "f_pm": [(2, 1, False), (4, 3, False), (2, 3, True), (4, 1, True)],
    "a1": [(1, 2, True), (6, 2, True), (8, 2, True), (1, 5, True), (1, 7, True),
           (3, 4, True), (6, 4, True), (8, 4, True), (3, 5, True), (3, 7, True),
           (1, 4, False), (3, 2, False), (6, 7, True), (6, 5, False), (8, 5, True), (8, 7, False)],
    "a2": _a2_relations(),
}

GOLDEN_INPUTS = {"a1": (1, 3, 6, 8), "a2": (1, 3, 6, 8, 10, 11)}


@_timed("golden signalling tables")
def check_golden_signalling(res: CheckResult, table: dict | None = None) -> None:
    for name, rel in (table or GOLDEN_SIGNALLING).items():
        f = EXAMPLES[name]()
        for i, j, want in rel:
            have = f(e_ij(f.n, i, j)) == 1
            res.record(have == want, f"{name}: {i}{'~>' if want else ' cannot signal to '}{j} expected")
        if name in GOLDEN_INPUTS:
            have = io_split(f).input_indices
            res.record(have == GOLDEN_INPUTS[name], f"{name}: inputs {have}")


def golden_forms() -> dict[str, tuple[BoolFn, NormalForm, str]]:
    """Worked normal forms: name -> (target, form, expected minimax status)."""
    a1_terms = [[H_CHAINS[(1, a)], H_CHAINS[(2, a)]] for a in (1, 2, 3)]
    a2_terms = [[G_CHAINS[(i, 1)], G_CHAINS[(i, 2)]] for i in (1, 2, 3)]
    a2_four = [[G_CHAINS[(1, 1)], G_CHAINS[(1, 2)]], [K_CHAINS[2]], [K_CHAINS[3]]]
    raw = {
        "f_ns": (f_ns(), 4, [["∅-1-2-3-4", "∅-3-4-1-2"]], "holds"),
        "f_pm": (f_pm(), 4, [["2-1-4"], ["4-3-2"]], "holds"),
        "pm_global": (pm_global(), 6, [[c] for c in PM_GLOBAL_CHAINS], "holds"),
        "a1": (adapter_pm(), 8, a1_terms, "holds"),
        "a2": (adapter_pm_global(), 12, a2_terms, "holds"),
        "a2_four_leaves": (adapter_pm_global(), 12, a2_four, "not-a-grid"),
    }
    return {k: (f, NormalForm.from_labels(n, terms), st) for k, (f, n, terms, st) in raw.items()}


@_timed("normal-form goldens")
def check_normal_forms(res: CheckResult) -> None:
    for name, (f, nf, status) in golden_forms().items():
        res.record(eval_normal_form(nf) == f, f"{name}: form does not evaluate to its target")
        got = minimax_status(nf)
        res.record(got == status, f"{name}: minimax {got}, expected {status}")


@_timed("synthesis bound")
def check_synthesis(res: CheckResult, max_n: int = 4) -> None:
    """synthesize re-evaluates to f with at most as many leaves as reduced maximal chains."""
    for n in range(1, max_n + 1):
        for f in _types(n):
            try:
                nf = synthesize(f)
            except Exception as exc:  # noqa: BLE001 - report any failure as a case
                res.record(False, f"{f!r}: {exc}")
                continue
            bound = len(maximal_chains(structure_poset(f), reduced=True))
            res.record(eval_normal_form(nf) == f and nf.distinct_leaves() <= bound,
                       lambda: f"{f!r}: {nf.distinct_leaves()} leaves, bound {bound}")


@_timed("choi identities")
def check_choi(res: CheckResult, max_n: int = 3, sampled_n: int | None = 4, samples: int = 50,
               seed: int = 0, tolerance: float = 1e-9) -> None:
    """Projection identities on qubits: exhaustive up to max_n, sampled pairs at sampled_n."""
    from .choiverify import verify_identities

    def report(n, fns, pairs, tensor_pairs):
        rep = verify_identities((2,) * n, fns, pairs, tensor_pairs, seed=seed, tolerance=tolerance)
        for row in rep.rows.values():
            if row.cases:
                res.record(row.ok, f"n={n} {row.name}: residual {row.max_residual:.2e}")
        res.cases += sum(r.cases for r in rep.rows.values()) - sum(1 for r in rep.rows.values() if r.cases)

    for n in range(1, max_n + 1):
        fns = _types(n)
        tp = [(f, g) for a in range(1, n) for f in _types(a) for g in _types(n - a)]
        report(n, fns, None, tp)
    if sampled_n:
        rng = random.Random(seed)
        all_f = _types(sampled_n)
        fns = rng.sample(all_f, min(len(all_f), 2 * samples // 3 + 1))
        pairs = [tuple(rng.sample(all_f, 2)) for _ in range(samples)]
        tp = []
        for _ in range(max(4, samples // 5)):
            a = rng.randrange(1, sampled_n)
            tp.append((rng.choice(_types(a)), rng.choice(_types(sampled_n - a))))
        report(sampled_n, fns, pairs, tp)


# ---------------------------------------------------------------------------
# lemma-level property suites
# ---------------------------------------------------------------------------

def random_f(rng: random.Random, n: int) -> BoolFn:
    return BoolFn(n, (rng.getrandbits((1 << n) - 1) << 1) | 1)


def random_regular(rng: random.Random, n: int, O: int | None = None) -> BoolFn:
    """A join of meets of random types sharing one output set."""
    while True:
        O_ = rng.randrange(1 << n) if O is None else O
        pool = _types_by_outputs(n).get(O_)
        if pool:
            break
        if O is not None:
            raise UsageError(f"no types with outputs {indices_of(O)}")
    acc = None
    for _ in range(rng.randint(1, 3)):
        m = rng.choice(pool)
        for _ in range(rng.randint(0, 2)):
            m = m & rng.choice(pool)
        acc = m if acc is None else acc | m
    return acc


_BY_OUT: dict[int, dict[int, list[BoolFn]]] = {}


def _types_by_outputs(n: int) -> dict[int, list[BoolFn]]:
    if n not in _BY_OUT:
        d: dict[int, list[BoolFn]] = {}
        for f in _types(n):
            d.setdefault(io_split(f).outputs, []).append(f)
        _BY_OUT[n] = d
    return _BY_OUT[n]


def _splits(total: int) -> Iterator[tuple[int, int]]:
    return ((a, total - a) for a in range(1, total))


@_timed("causal product algebra")
def check_causal_algebra(res: CheckResult, max_n: int = 4, samples: int = 0, sample_n: int = 5,
                         seed: int = 0) -> None:
    """Duality, associativity, tensor/par as meet/join of the two orders, distributivity."""

    def one(f1, f2):
        c12 = causal(f1, f2)
        c21 = _other_order(f1, f2)
        res.record(complement(c12) == causal(complement(f1), complement(f2)),
                   lambda: f"dual: {f1!r}, {f2!r}")
        res.record(tensor(f1, f2) == (c12 & c21), lambda: f"tensor as meet: {f1!r}, {f2!r}")
        res.record(par(f1, f2) == (c12 | c21), lambda: f"par as join: {f1!r}, {f2!r}")

    def three(f1, f2, f3):
        res.record(causal(causal(f1, f2), f3) == causal(f1, causal(f2, f3)),
                   lambda: f"associativity: {f1!r}, {f2!r}, {f3!r}")

    def four(f1, f2, f3, f4):
        left = causal(f1 | f2, f3 | f4)
        res.record(left == (causal(f1, f3) | causal(f2, f4)) and left == (causal(f1, f4) | causal(f2, f3)),
                   lambda: f"join distributes: {f1!r}, {f2!r}, {f3!r}, {f4!r}")
        left = causal(f1 & f2, f3 & f4)
        res.record(left == (causal(f1, f3) & causal(f2, f4)) and left == (causal(f1, f4) & causal(f2, f3)),
                   lambda: f"meet distributes: {f1!r}, {f2!r}, {f3!r}, {f4!r}")
        # f1 & f2 <= f1 and f3 & f4 <= f3 give the extended tensor identity
        g1, g2 = f1 & f2, f3 & f4
        res.record(tensor(g1, g2) == (causal(g1, f3) & _other_order(f1, g2)),
                   lambda: f"extended tensor: {g1!r} <= {f1!r}, {g2!r} <= {f3!r}")

    for total in range(2, max_n + 1):
        for a, b in _splits(total):
            for f1 in all_functions(a):
                for f2 in all_functions(b):
                    one(f1, f2)
        for a in range(1, total - 1):
            for b in range(1, total - a):
                for f1, f2, f3 in itertools.product(all_functions(a), all_functions(b),
                                                    all_functions(total - a - b)):
                    three(f1, f2, f3)
    for a, b in (ab for total in range(2, max_n + 1) for ab in _splits(total)):
        A, B = list(all_functions(a)), list(all_functions(b))
        for f1, f2, f3, f4 in itertools.product(A, A, B, B):
            four(f1, f2, f3, f4)
    rng = random.Random(seed)
    for _ in range(samples):
        a = rng.randrange(1, sample_n)
        b = sample_n - a
        one(random_f(rng, a), random_f(rng, b))
        f1, f2, f3, f4 = random_f(rng, a), random_f(rng, a), random_f(rng, b), random_f(rng, b)
        four(f1, f2, f3, f4)
        if a > 1:
            c = rng.randrange(1, a)
            three(random_f(rng, c), random_f(rng, a - c), random_f(rng, b))


def _other_order(f1: BoolFn, f2: BoolFn) -> BoolFn:
    """f2 < f1 with f1 still on the first block."""
    return causal_rev(f1, f2)


@_timed("subtype closure")
def check_subtype_closure(res: CheckResult, max_n: int = 4, samples: int = 0, sample_n: int = 5,
                          seed: int = 0) -> None:
    """Monotone subtypes are closed under the type operations; equivalent characterisations agree."""

    def equiv(f):
        a = is_monotone_subtype(f)
        fs = complement(f)
        b = is_monotone(f) and is_monotone(fs)
        res.record(a == b, lambda: f"monotone subtype vs f, f* monotone: {f!r}")
        res.record(a == two_condition_check(f), lambda: f"two-condition check: {f!r}")
        if f.n <= 4:
            res.record(a == is_monotone_subtype_pairs(f), lambda: f"pair oracle: {f!r}")

    def unary(f, sigma):
        split = io_split(f)
        g = complement(f)
        res.record(is_monotone_subtype(g) and io_split(g).outputs == split.inputs,
                   lambda: f"dual: {f!r}")
        h = permute(f, sigma)
        res.record(is_monotone_subtype(h), lambda: f"permutation {sigma}: {f!r}")

    def binary_same(f, g):
        res.record(is_monotone_subtype(f & g) and is_monotone_subtype(f | g),
                   lambda: f"meet/join: {f!r}, {g!r}")

    def binary(f, g):
        O = io_split(f).outputs | (io_split(g).outputs << f.n)
        for op in (tensor, par, causal, _other_order):
            h = op(f, g)
            res.record(is_monotone_subtype(h) and io_split(h).outputs == O,
                       lambda: f"{op.__name__}: {f!r}, {g!r}")

    regular = {n: [f for O in range(1 << n) for f in enumerate_regular(n, O).members]
               for n in range(1, max_n + 1)}
    for n in range(1, max_n + 1):
        for f in all_functions(n):
            equiv(f)
        perms = list(all_permutations(n))
        for k, f in enumerate(regular[n]):
            unary(f, perms[k % len(perms)])
        for O in range(1 << n):
            members = enumerate_regular(n, O).members
            for f, g in itertools.combinations(members, 2):
                binary_same(f, g)
        for a, b in _splits(n):
            for f in regular[a]:
                for g in regular[b]:
                    binary(f, g)
    rng = random.Random(seed)
    perms = list(all_permutations(sample_n))
    for _ in range(samples):
        f = random_regular(rng, sample_n)
        equiv(f if rng.random() < 0.5 else random_f(rng, sample_n))
        unary(f, rng.choice(perms))
        binary_same(f, random_regular(rng, sample_n, io_split(f).outputs))
        a = rng.randrange(1, sample_n)
        binary(random_regular(rng, a), random_regular(rng, sample_n - a))


@_timed("structure poset lemmas")
def check_poset_lemmas(res: CheckResult, max_n: int = 4, samples: int = 0, sample_n: int = 5,
                       seed: int = 0) -> None:
    """Order properties of reduced posets and their behaviour under the type operations."""

    def props(f):
        bad = check_properties(structure_poset(f))
        res.record(not bad, lambda: f"{f!r}: {bad[0]}")

    def op(f, g, name):
        r = poset_op_check(f, g, name)
        res.record(r.ok, lambda: f"{name} [{r.case}] {f!r}, {g!r}: {r.mismatch}")

    for n in range(1, max_n + 1):
        perms = list(all_permutations(n))
        for k, f in enumerate(_types(n)):
            props(f)
            op(f, None, "complement")
            op(f, perms[k % len(perms)], "permute")
        for a, b in _splits(n):
            for f in _types(a):
                for g in _types(b):
                    op(f, g, "tensor")
                    if is_chain_type(f) or is_chain_type(g):
                        op(f, g, "causal")
    if not samples:
        return
    rng = random.Random(seed)
    T = _types(sample_n)
    perms = list(all_permutations(sample_n))
    for k in range(samples):
        kind = k % 4
        if kind == 0:
            props(rng.choice(T))
        elif kind == 1:
            op(rng.choice(T), rng.choice(perms), "permute")
        elif kind == 2:
            op(rng.choice(T), None, "complement")
        else:
            a = rng.randrange(1, sample_n)
            f, g = rng.choice(_types(a)), rng.choice(_types(sample_n - a))
            op(f, g, "tensor")
            if is_chain_type(f) or is_chain_type(g):
                op(f, g, "causal")


def _no(f: BoolFn, i: int, j: int) -> bool:
    return f(e_ij(f.n, i, j)) == 0


@_timed("signalling under operations")
def check_signalling_ops(res: CheckResult, max_n: int = 4, samples: int = 0, sample_n: int = 5,
                         seed: int = 0) -> None:
    """How no-signalling relations transform under dual, permutation, products, meet and join."""

    def unary(f, sigma):
        split = io_split(f)
        fd = complement(f)
        fs = permute(f, sigma)
        inv = {v: k for k, v in enumerate(sigma, start=1)}
        for i in split.input_indices:
            for j in split.output_indices:
                res.record(_no(f, i, j) == (not _no(fd, j, i)), lambda: f"dual {f!r} ({i},{j})")
                res.record(_no(f, i, j) == _no(fs, inv[i], inv[j]), lambda: f"perm {sigma} {f!r} ({i},{j})")

    def binary(f1, f2):
        m = f1.n
        s1, s2 = io_split(f1), io_split(f2)
        t, c = tensor(f1, f2), causal(f1, f2)
        for h, name in ((t, "tensor"), (c, "causal")):
            for i in s1.input_indices:
                for j in s1.output_indices:
                    res.record(_no(f1, i, j) == _no(h, i, j), lambda: f"{name} first block {f1!r},{f2!r}")
            for i in s2.input_indices:
                for j in s2.output_indices:
                    res.record(_no(f2, i, j) == _no(h, i + m, j + m),
                               lambda: f"{name} second block {f1!r},{f2!r}")
            for i in s1.input_indices:
                for j in s2.output_indices:
                    res.record(_no(h, i, j + m), lambda: f"{name}: {i} ~> {j + m} in {f1!r},{f2!r}")
            for i in s2.input_indices:
                for j in s1.output_indices:
                    want = name == "tensor"
                    res.record(_no(h, i + m, j) == want, lambda: f"{name}: {i + m} vs {j} in {f1!r},{f2!r}")

    def lattice(f, g):
        split = io_split(f)
        for i in split.input_indices:
            for j in split.output_indices:
                res.record(_no(f & g, i, j) == (_no(f, i, j) or _no(g, i, j)), lambda: f"meet {f!r},{g!r}")
                res.record(_no(f | g, i, j) == (_no(f, i, j) and _no(g, i, j)), lambda: f"join {f!r},{g!r}")

    for n in range(1, max_n + 1):
        perms = list(all_permutations(n))
        for O in range(1 << n):
            members = enumerate_regular(n, O).members
            for k, f in enumerate(members):
                unary(f, perms[k % len(perms)])
            for f, g in itertools.combinations(members, 2):
                lattice(f, g)
        for a, b in _splits(n):
            A = [f for O in range(1 << a) for f in enumerate_regular(a, O).members]
            B = [f for O in range(1 << b) for f in enumerate_regular(b, O).members]
            for f in A:
                for g in B:
                    binary(f, g)
    rng = random.Random(seed)
    perms = list(all_permutations(sample_n))
    for _ in range(samples):
        f = random_regular(rng, sample_n)
        unary(f, rng.choice(perms))
        lattice(f, random_regular(rng, sample_n, io_split(f).outputs))
        a = rng.randrange(1, sample_n)
        binary(random_regular(rng, a), random_regular(rng, sample_n - a))


@_timed("basic strings generate f_s")
def check_fs_basic(res: CheckResult, max_n: int = 4, samples: int = 0, sample_n: int = 5,
                   seed: int = 0) -> None:
    """f_s is the meet of the basic f_t with t <=_O s, and f_{s v t} = f_s & f_t."""

    def one(n, O, s, t):
        order = OutputOrder(n, O)
        basic = [b.bits for b in basic_strings(n, O)]
        below = [b for b in basic if order.leq(b, s)]
        fs = f_s(n, O, s)
        acc = BoolFn(n, (1 << (1 << n)) - 1)
        for b in below:
            acc = acc & f_s(n, O, b)
        res.record(bool(below) and acc == fs, lambda: f"n={n} O={indices_of(O)} s={s}: meet of basics")
        res.record(f_s(n, O, order.join(s, t)) == (fs & f_s(n, O, t)),
                   lambda: f"n={n} O={indices_of(O)} s={s} t={t}: join rule")

    for n in range(2, max_n + 1):
        for O in range(1, full_mask(n)):
            free = OutputOrder(n, O).free_strings()
            for s in free:
                for t in free:
                    one(n, O, s, t)
    rng = random.Random(seed)
    for _ in range(samples):
        O = rng.randrange(1, full_mask(sample_n))
        free = OutputOrder(sample_n, O).free_strings()
        one(sample_n, O, rng.choice(free), rng.choice(free))


LEMMA_CHECKS = (check_causal_algebra, check_subtype_closure, check_poset_lemmas,
                check_signalling_ops, check_fs_basic)


def check_lemmas(max_n: int = 4, samples: int = 10_000, sample_n: int = 5, seed: int = 0) -> list[CheckResult]:
    return [c(max_n=max_n, samples=samples, sample_n=sample_n, seed=seed) for c in LEMMA_CHECKS]


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

SUITES = ("counts", "regular", "mobius", "signalling", "causal", "golden", "normalform", "lemmas", "choi")


def run_suite(name: str, max_n: int = 4, samples: int = 0, seed: int = 0) -> list[CheckResult]:
    """Run one suite; ``max_n`` bounds every exhaustive loop, ``samples`` adds random n = max_n + 1 cases."""
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    if max_n < 1:
        raise UsageError("--max-n must be at least 1")
    if name == "counts":
        return [check_counts()]
    if name == "regular":
        return [check_regular(min(max_n, 4))]
    if name == "mobius":
        return [check_mobius(max_n)]
    if name == "signalling":
        return [check_signalling(max_n)]
    if name == "causal":
        return [check_causal_product(max(2, max_n))]
    if name == "golden":
        return [check_golden_signalling()]
    if name == "normalform":
        return [check_normal_forms(), check_synthesis(min(max_n, 5))]
    if name == "lemmas":
        return check_lemmas(min(max_n, 4), samples, min(max_n, 4) + 1, seed)
    return [check_choi(min(max_n, 3), 4 if max_n >= 4 else None, seed=seed)]


def run_suites(names: Iterable[str], max_n: int = 4, samples: int = 0, seed: int = 0) -> list[CheckResult]:
    names = list(names)
    if "all" in names:
        names = list(SUITES)
    out: list[CheckResult] = []
    for name in names:
        out.extend(run_suite(name, max_n, samples, seed))
    return out
