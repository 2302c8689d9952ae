"""Normal forms: joins of meets of chain types.

A leaf is a chain type written as its label sequence, e.g. ``∅-2-6-5-8-7-1-4-3``
or ``∅-12-8-7-{1,6}-4-3-{2,5}-11``: the chain sets are the cumulative unions.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .boolfn import (BoolFn, basis_table, causal, causal_rev, complement, indices_of, io_split, mask_of,
                     relabel, tensor)
from .errors import InvariantError, UsageError
from .poset import format_labels, maximal_chains, structure_poset
from .typeterm import (ChainSpec, Dual, Tensor, TypeTerm, chain_of, chain_type, eval_term, leaves,
                       map_leaves, witness_term)

EMPTY_TOKENS = ("∅", "0", "{}", "Ø")


# ---------------------------------------------------------------------------
# label chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabelChain:
    groups: tuple[int, ...]
    starts_empty: bool = True

    @classmethod
    def parse(cls, text: str) -> "LabelChain":
        tokens = _split_labels(text)
        starts_empty = bool(tokens) and tokens[0] in EMPTY_TOKENS
        if starts_empty:
            tokens = tokens[1:]
        groups = []
        for tok in tokens:
            body = tok[1:-1] if tok.startswith("{") and tok.endswith("}") else tok
            try:
                idx = [int(x) for x in body.split(",") if x.strip()]
            except ValueError:
                raise UsageError(f"bad label group {tok!r} in {text!r}") from None
            if not idx:
                raise UsageError(f"empty label group in {text!r}; only the first node may be the empty set")
            groups.append(mask_of(idx))
        seen = 0
        for g in groups:
            if g & seen:
                raise UsageError(f"label sets in {text!r} overlap")
            seen |= g
        if not groups and not starts_empty:
            raise UsageError("label chain is empty")
        return cls(tuple(groups), starts_empty)

    def __str__(self) -> str:
        parts = ["∅"] if self.starts_empty else []
        parts += [format_labels(g) for g in self.groups]
        return "-".join(parts)

    def to_json(self) -> list[list[int]]:
        out = [[]] if self.starts_empty else []
        return out + [list(indices_of(g)) for g in self.groups]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "LabelChain":
        data = list(data)
        starts_empty = bool(data) and len(data[0]) == 0
        rest = data[1:] if starts_empty else data
        return cls(tuple(mask_of(g) for g in rest), starts_empty)


def _split_labels(text: str) -> list[str]:
    tokens = re.findall(r"\{[^}]*\}|[^-\s]+", text.strip())
    if not tokens:
        raise UsageError("empty label chain")
    return tokens


def chain_from_labels(lc: LabelChain | str, n: int) -> ChainSpec:
    """Cumulative unions of the label groups; indices not mentioned are free outputs."""
    if isinstance(lc, str):
        lc = LabelChain.parse(lc)
    sets = [0] if lc.starts_empty else []
    acc = 0
    for g in lc.groups:
        if g >> n:
            raise UsageError(f"label chain {lc} mentions indices beyond {n}")
        acc |= g
        sets.append(acc)
    if (len(sets) - 1) % 2:
        raise UsageError(f"label chain {lc} has odd length {len(sets) - 1}; a chain type needs even length")
    return ChainSpec(n, tuple(sets))


def labels_of_chain(c: ChainSpec) -> LabelChain:
    starts_empty = c.sets[0] == 0
    groups = [] if starts_empty else [c.sets[0]]
    groups += [b & ~a for a, b in zip(c.sets, c.sets[1:])]
    return LabelChain(tuple(groups), starts_empty)


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """f = join over terms of the meet of the listed leaves."""

    n: int
    leaves: tuple[ChainSpec, ...]
    terms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for k, leaf in enumerate(self.leaves):
            if leaf.n != self.n:
                raise UsageError(f"leaf {k} lives on n={leaf.n}, form on n={self.n}")
        if not self.terms:
            raise UsageError("a normal form needs at least one term")
        for t in self.terms:
            if not t:
                raise UsageError("empty meet in a normal form")
            for k in t:
                if not 0 <= k < len(self.leaves):
                    raise UsageError(f"term refers to missing leaf {k}")

    @classmethod
    def from_labels(cls, n: int, terms: Sequence[Sequence[str]]) -> "NormalForm":
        """Build from label-chain text, e.g. [["∅-1-2-3-4", "∅-3-4-1-2"]]."""
        ids: dict[str, int] = {}
        leaves: list[ChainSpec] = []
        out = []
        for term in terms:
            row = []
            for text in term:
                spec = chain_from_labels(text, n)
                key = str(labels_of_chain(spec))
                if key not in ids:
                    ids[key] = len(leaves)
                    leaves.append(spec)
                row.append(ids[key])
            out.append(tuple(row))
        return cls(n, tuple(leaves), tuple(out))

    def leaf_functions(self) -> list[BoolFn]:
        out = []
        for k, leaf in enumerate(self.leaves):
            try:
                out.append(chain_type(leaf))
            except (UsageError, InvariantError) as exc:
                raise UsageError(f"leaf {k} ({labels_of_chain(leaf)}) is not a chain type: {exc}") from None
        return out

    @property
    def is_grid(self) -> bool:
        return len({len(t) for t in self.terms}) == 1

    def distinct_leaves(self) -> int:
        return len({k for t in self.terms for k in t})

    def render(self) -> str:
        parts = []
        for t in self.terms:
            body = " ∧ ".join(str(labels_of_chain(self.leaves[k])) for k in t)
            parts.append(f"({body})" if len(t) > 1 and len(self.terms) > 1 else body)
        return " ∨ ".join(parts)

    def to_json(self) -> dict:
        return {"shape": "join-of-meets", "n": self.n,
                "terms": [list(t) for t in self.terms],
                "leaves": [labels_of_chain(c).to_json() for c in self.leaves]}

    @classmethod
    def from_json(cls, data: dict) -> "NormalForm":
        try:
            if data.get("shape", "join-of-meets") != "join-of-meets":
                raise UsageError(f"unsupported shape {data['shape']!r}")
            n = int(data["n"])
            leaves = tuple(chain_from_labels(LabelChain.from_json(x), n) for x in data["leaves"])
            terms = tuple(tuple(int(k) for k in t) for t in data["terms"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed normal form: {exc}") from None
        return cls(n, leaves, terms)


def eval_normal_form(nf: NormalForm) -> BoolFn:
    fns = nf.leaf_functions()
    full = (1 << (1 << nf.n)) - 1
    acc = 0
    for t in nf.terms:
        m = full
        for k in t:
            m &= fns[k].table
        acc |= m
    return BoolFn(nf.n, acc)


def eval_meet_of_joins(nf: NormalForm) -> BoolFn:
    """Swap the operations on the same A x B grid: meet over b of the join over a."""
    if not nf.is_grid:
        raise UsageError("meet-of-joins needs every term to have the same number of leaves")
    fns = nf.leaf_functions()
    width = len(nf.terms[0])
    acc = (1 << (1 << nf.n)) - 1
    for b in range(width):
        col = 0
        for t in nf.terms:
            col |= fns[t[b]].table
        acc &= col
    return BoolFn(nf.n, acc)


def verify_minimax(nf: NormalForm) -> bool:
    """Join-of-meets equals meet-of-joins (requires a full grid)."""
    return eval_meet_of_joins(nf) == eval_normal_form(nf)


def minimax_status(nf: NormalForm) -> str:
    if not nf.is_grid:
        return "not-a-grid"
    return "holds" if verify_minimax(nf) else "fails"


def check_leaves(nf: NormalForm, target: BoolFn) -> list[str]:
    """Problems with a form for the given target (empty when all is well)."""
    out = []
    split = io_split(target)
    for k, f in enumerate(nf.leaf_functions()):
        if io_split(f) != split:
            out.append(f"leaf {k} ({labels_of_chain(nf.leaves[k])}) has outputs "
                       f"{io_split(f).output_indices}, target {split.output_indices}")
    if eval_normal_form(nf) != target:
        out.append("form does not evaluate to the target")
    return out


# ---------------------------------------------------------------------------
# synthesis from a term
# ---------------------------------------------------------------------------

# symbolic forms: a tuple of clauses, each a frozenset of leaf tables
Clauses = tuple[frozenset, ...]


@dataclass(frozen=True)
class _Form:
    n: int
    fn: BoolFn
    dnf: Clauses       # join of meets
    cnf: Clauses       # meet of joins


def _absorb(clauses: Iterable[frozenset]) -> Clauses:
    uniq = sorted(set(clauses), key=lambda c: (len(c), sorted(c)))
    kept: list[frozenset] = []
    for c in uniq:
        if not any(k <= c for k in kept):
            kept.append(c)
    return tuple(kept)


def _single(f: BoolFn) -> _Form:
    c = (frozenset([f.table]),)
    return _Form(f.n, f, c, c)


def _map_leaves(clauses: Clauses, fn) -> Clauses:
    return _absorb(frozenset(fn(t) for t in c) for c in clauses)


def _is_point(f: BoolFn) -> bool:
    """Reduced poset of a single element, i.e. f = p_T."""
    c = chain_of(f)
    return c is not None and len(c.sets) == 1


def _synth(t: TypeTerm) -> _Form:
    f = eval_term_local(t)
    if chain_of(f) is not None:
        return _single(f)
    if isinstance(t, Dual):
        inner = _synth(t.child)
        comp = lambda tab: complement(BoolFn(inner.n, tab)).table
        return _Form(f.n, f, _map_leaves(inner.cnf, comp), _map_leaves(inner.dnf, comp))
    assert isinstance(t, Tensor)
    left, right = _synth(t.left), _synth(t.right)
    m, k = left.n, right.n
    if _is_point(right.fn) or _is_point(left.fn):
        def lift(tab: int, side: str) -> int:
            if side == "L":
                return tensor(BoolFn(m, tab), right.fn).table
            return tensor(left.fn, BoolFn(k, tab)).table
        side, src = ("L", left) if _is_point(right.fn) else ("R", right)
        return _Form(f.n, f, _map_leaves(src.dnf, lambda x: lift(x, side)),
                     _map_leaves(src.cnf, lambda x: lift(x, side)))
    alpha2 = complement(BoolFn(k, basis_table(k, io_split(right.fn).outputs)))
    alpha1 = complement(BoolFn(m, basis_table(m, io_split(left.fn).outputs)))
    a = lambda tab: causal(BoolFn(m, tab), alpha2).table
    b = lambda tab: causal_rev(alpha1, BoolFn(k, tab)).table
    ldnf, lcnf = _map_leaves(left.dnf, a), _map_leaves(left.cnf, a)
    rdnf, rcnf = _map_leaves(right.dnf, b), _map_leaves(right.cnf, b)
    dnf = _absorb(x | y for x, y in itertools.product(ldnf, rdnf))
    cnf = _absorb(lcnf + rcnf)
    return _Form(f.n, f, dnf, cnf)


def eval_term_local(t: TypeTerm) -> BoolFn:
    """Evaluate a subterm in its own coordinates: leaves in left-to-right order."""
    order = leaves(t)
    ranks = {v: r for r, v in enumerate(sorted(order), start=1)}
    return eval_term(map_leaves(t, lambda i: ranks[i]))


def _normalize_term(t: TypeTerm) -> TypeTerm:
    """Relabel leaves so that each tensor node covers consecutive indices."""
    pos = {v: k for k, v in enumerate(leaves(t), start=1)}
    return map_leaves(t, lambda i: pos[i])


def synthesize(f: BoolFn, term: TypeTerm | None = None) -> NormalForm:
    """Normal form built recursively along a term of f; leaves are chain types."""
    if term is None:
        term = witness_term(f)
    order = leaves(term)
    local = _normalize_term(term)
    form = _synth(local)
    # local index k sits at global index order[k-1]
    to_global = lambda tab: relabel(BoolFn(f.n, tab), order).table
    dnf = _map_leaves(form.dnf, to_global)
    tables = sorted({x for c in dnf for x in c},
                    key=lambda tab: chain_of(BoolFn(f.n, tab)).sets)
    ids = {tab: k for k, tab in enumerate(tables)}
    leaves_out = tuple(chain_of(BoolFn(f.n, tab)) for tab in tables)
    terms = tuple(sorted(tuple(sorted(ids[x] for x in c)) for c in dnf))
    nf = NormalForm(f.n, leaves_out, terms)
    if eval_normal_form(nf) != f:
        raise InvariantError("synthesized form does not evaluate to its target")
    bound = len(maximal_chains(structure_poset(f), reduced=True))
    if nf.distinct_leaves() > bound:
        raise InvariantError(f"{nf.distinct_leaves()} distinct leaves exceed {bound} maximal chains")
    return nf


# ---------------------------------------------------------------------------
# candidate chains read off the reduced poset
# ---------------------------------------------------------------------------

def candidate_chains(f: BoolFn) -> list[ChainSpec]:
    """Chain types that follow one maximal chain and splice in the others.

    For each maximal chain C of the reduced poset, labels of elements outside
    C are inserted just below the first element of C containing them (so
    common parts above stay on top), or appended when none does.  A trailing
    output group that breaks the even length is dropped and becomes a free
    output.  Results with the wrong inputs and outputs are discarded; the
    rest are suggestions to combine and check with eval_normal_form.
    """
    P = structure_poset(f)
    chains = maximal_chains(P, reduced=True)
    split = io_split(f)
    out: dict[tuple[int, ...], ChainSpec] = {}
    for k, first in enumerate(chains):
        slots: list[list[int]] = [[] for _ in first] + [[]]
        used = 0
        for T in first:
            used |= P.labels[T]
        for other in chains[:k] + chains[k + 1:]:
            for X in other:
                lab = P.labels[X] & ~used
                if not lab:
                    continue
                pos = next((p for p, Y in enumerate(first) if X & ~Y == 0), len(first))
                slots[pos].append(lab)
                used |= lab
        seq: list[int] = []
        for p, T in enumerate(first):
            seq.extend(slots[p])
            if P.labels[T]:
                seq.append(P.labels[T])
        seq.extend(slots[-1])
        sets = [0] if 0 in P.reduced else []
        acc = 0
        for g in seq:
            acc |= g
            sets.append(acc)
        if (len(sets) - 1) % 2 and len(sets) > 1 and seq and seq[-1] & split.outputs == seq[-1]:
            sets.pop()
        if (len(sets) - 1) % 2:
            continue
        spec = ChainSpec(f.n, tuple(sets))
        if io_split(chain_type(spec)) == split:
            out[spec.sets] = spec
    return [out[k] for k in sorted(out)]
