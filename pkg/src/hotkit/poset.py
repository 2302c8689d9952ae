"""Structure posets: the Moebius support of a type function ordered by inclusion.

Elements are subset masks.  The full poset carries a rank (longest chain
from a minimal element), the label sets and a flag for membership in the
reduced poset (the empty set, if present, plus every element with a label).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .boolfn import BoolFn, causal, complement, full_mask, indices_of, inverse_perm, io_split, permute, tensor
from .errors import InvariantError, UsageError
from .mobius import MobiusCoeffs, to_boolfn, transform

EMPTY = "∅"


def _subset(a: int, b: int) -> bool:
    return a & ~b == 0


def _strict(a: int, b: int) -> bool:
    return a != b and a & ~b == 0


def _popcount(x: int) -> int:
    return bin(x).count("1")


def format_labels(mask: int) -> str:
    idx = indices_of(mask)
    if len(idx) == 1:
        return str(idx[0])
    return "{" + ",".join(map(str, idx)) + "}"


@dataclass(frozen=True)
class StructurePoset:
    n: int
    coeffs: MobiusCoeffs
    elements: tuple[int, ...]
    rank: dict[int, int] = field(repr=False)
    labels: dict[int, int] = field(repr=False)
    reduced: frozenset[int] = field(repr=False)
    diagnostics: tuple[str, ...] = ()

    # -- basic shape -------------------------------------------------------

    @property
    def valid(self) -> bool:
        return not self.diagnostics

    @property
    def top_rank(self) -> int:
        return max(self.rank.values()) if self.rank else 0

    @cached_property
    def reduced_elements(self) -> tuple[int, ...]:
        return tuple(T for T in self.elements if T in self.reduced)

    def members(self, reduced: bool = False) -> tuple[int, ...]:
        return self.reduced_elements if reduced else self.elements

    @cached_property
    def free_inputs(self) -> int:
        acc = full_mask(self.n)
        for T in self.elements:
            acc &= T
        return acc

    @cached_property
    def free_outputs(self) -> int:
        acc = 0
        for L in self.labels.values():
            acc |= L
        return full_mask(self.n) & ~acc

    def holders(self, i: int) -> list[int]:
        """The elements whose label set contains i."""
        bit = 1 << (i - 1)
        return [T for T in self.elements if self.labels[T] & bit]

    def minimal(self, reduced: bool = False) -> list[int]:
        pts = self.members(reduced)
        return [T for T in pts if not any(_strict(S, T) for S in pts)]

    def maximal(self, reduced: bool = False) -> list[int]:
        pts = self.members(reduced)
        return [T for T in pts if not any(_strict(T, S) for S in pts)]

    # -- order relations ---------------------------------------------------

    def covers(self, reduced: bool = False) -> list[tuple[int, int]]:
        """Cover pairs (S, T), S covered by T, sorted."""
        return self._covers_reduced if reduced else self._covers_full

    @cached_property
    def _covers_full(self) -> list[tuple[int, int]]:
        return _covers(self.elements)

    @cached_property
    def _covers_reduced(self) -> list[tuple[int, int]]:
        return _covers(self.reduced_elements)

    def down(self, S: int, reduced: bool = True) -> list[int]:
        return [X for X in self.members(reduced) if _subset(X, S)]

    def up(self, S: int, reduced: bool = True) -> list[int]:
        return [X for X in self.members(reduced) if _subset(S, X)]

    def meet(self, S: int, T: int, reduced: bool = False) -> int | None:
        """Greatest common lower bound inside the (full or reduced) poset."""
        lower = [X for X in self.members(reduced) if _subset(X, S) and _subset(X, T)]
        return _greatest(lower)

    def join(self, S: int, T: int, reduced: bool = False) -> int | None:
        upper = [X for X in self.members(reduced) if _subset(S, X) and _subset(T, X)]
        return _least(upper)

    # -- output ------------------------------------------------------------

    def label_trace(self, chain: Sequence[int]) -> str:
        parts = []
        for T in chain:
            parts.append(EMPTY if T == 0 else format_labels(self.labels[T]) if self.labels[T] else format_labels(T))
        return "-".join(parts)

    def to_json(self) -> dict:
        pos = {T: k for k, T in enumerate(self.elements)}
        return {
            "n": self.n,
            "rank": self.top_rank,
            "elements": [{"T": list(indices_of(T)), "rank": self.rank[T],
                          "labels": list(indices_of(self.labels[T])),
                          "reduced": T in self.reduced} for T in self.elements],
            "edges": [[pos[a], pos[b]] for a, b in self.covers()],
        }


def _covers(points: Sequence[int]) -> list[tuple[int, int]]:
    out = []
    for T in points:
        below = sorted((S for S in points if _strict(S, T)), key=_popcount, reverse=True)
        kept: list[int] = []
        for S in below:
            if not any(_subset(S, K) for K in kept):
                kept.append(S)
        out.extend((S, T) for S in kept)
    return sorted(out)


def _greatest(points: list[int]) -> int | None:
    for X in points:
        if all(_subset(Y, X) for Y in points):
            return X
    return None


def _least(points: list[int]) -> int | None:
    for X in points:
        if all(_subset(X, Y) for Y in points):
            return X
    return None


def structure_poset(f: BoolFn) -> StructurePoset:
    """Build the poset and record which of the type-function invariants fail."""
    c = transform(f)
    elements = tuple(sorted(c.coeffs))
    by_size = sorted(elements, key=lambda T: (_popcount(T), T))
    rank: dict[int, int] = {}
    labels: dict[int, int] = {}
    for T in by_size:
        below = [S for S in by_size if _strict(S, T)]
        rank[T] = max((rank[S] + 1 for S in below), default=0)
        union = 0
        for S in below:
            union |= S
        labels[T] = T & ~union
    reduced = frozenset(T for T in elements if T == 0 or labels[T])
    diag = _diagnose(f.n, c, elements, rank, labels)
    return StructurePoset(f.n, c, elements, rank, labels, reduced, tuple(diag))


def _diagnose(n, c, elements, rank, labels) -> list[str]:
    out = []
    if not elements:
        return ["empty Moebius support"]
    top = max(rank.values())
    for S, T in _covers(elements):
        if rank[T] != rank[S] + 1:
            out.append(f"not graded: cover {format_labels(S)} < {format_labels(T)} skips a rank")
            break
    for T in elements:
        if not any(_strict(T, U) for U in elements) and rank[T] != top:
            out.append(f"not graded: maximal element {format_labels(T)} has rank {rank[T]} < {top}")
            break
    if top % 2:
        out.append(f"top rank {top} is odd")
    for T in elements:
        if c[T] != (-1) ** rank[T]:
            out.append(f"coefficient {c[T]} at {format_labels(T)} differs from (-1)^rank")
            break
    return out


def check(P: StructurePoset) -> StructurePoset:
    if P.diagnostics:
        raise InvariantError("not a valid type structure: " + "; ".join(P.diagnostics))
    return P


def reconstruct(P: StructurePoset) -> MobiusCoeffs:
    """sum over the poset of (-1)^rank p_T."""
    return MobiusCoeffs(P.n, {T: (-1) ** P.rank[T] for T in P.elements})


# ---------------------------------------------------------------------------
# ranks of indices and pairs
# ---------------------------------------------------------------------------

def _poset(f: BoolFn | StructurePoset) -> StructurePoset:
    return f if isinstance(f, StructurePoset) else structure_poset(f)


def _check_index(P: StructurePoset, i: int) -> None:
    if not 1 <= i <= P.n:
        raise UsageError(f"index {i} outside [1..{P.n}]")


def index_rank(f: BoolFn | StructurePoset, i: int) -> int:
    P = _poset(f)
    _check_index(P, i)
    ranks = {P.rank[T] for T in P.holders(i)}
    if not ranks:
        return P.top_rank + 1
    if len(ranks) > 1:
        raise InvariantError(f"index {i} labels elements of ranks {sorted(ranks)}")
    return ranks.pop()


def pair_rank(f: BoolFn | StructurePoset, i: int, j: int) -> int:
    """max rank of S meet T over label holders of i and j; -1 when no meet exists."""
    P = _poset(f)
    _check_index(P, i)
    _check_index(P, j)
    if i == j:
        raise UsageError("pair rank needs two different indices")
    Ti, Tj = P.holders(i), P.holders(j)
    if not Ti or not Tj:
        return min(index_rank(P, i), index_rank(P, j))
    best = -1
    for S in Ti:
        for T in Tj:
            X = P.meet(S, T)
            if X is not None:
                best = max(best, P.rank[X])
    return best


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

def maximal_chains(P: StructurePoset, reduced: bool = False) -> list[tuple[int, ...]]:
    """All maximal chains, each listed bottom-up, sorted lexicographically."""
    succ: dict[int, list[int]] = {}
    for a, b in P.covers(reduced):
        succ.setdefault(a, []).append(b)
    out: list[tuple[int, ...]] = []

    def walk(path: list[int]):
        nxt = succ.get(path[-1])
        if not nxt:
            out.append(tuple(path))
            return
        for b in nxt:
            path.append(b)
            walk(path)
            path.pop()

    for m in P.minimal(reduced):
        walk([m])
    return sorted(out)


def is_chain(points: Iterable[int]) -> bool:
    pts = sorted(points, key=_popcount)
    return all(_strict(a, b) for a, b in zip(pts, pts[1:]))


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------

def to_dot(P: StructurePoset, reduced_only: bool = False, name: str = "P") -> str:
    """Hasse diagram; blue/red = labelled even/odd rank, black = empty set, gray = unlabelled."""
    pts = P.members(reduced_only)
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle, style=filled, fontcolor=white];"]
    for T in pts:
        if T == 0:
            color, text = "black", EMPTY
        elif P.labels[T]:
            color = "blue" if P.rank[T] % 2 == 0 else "red"
            text = ",".join(map(str, indices_of(P.labels[T])))
        else:
            color, text = "gray", ""
        lines.append(f'  v{T} [label="{text}", fillcolor={color}, tooltip="{{{",".join(map(str, indices_of(T)))}}} rank {P.rank[T]}"];')
    for a, b in P.covers(reduced_only):
        lines.append(f"  v{a} -> v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# constructions on reduced posets, used as an oracle against direct computation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpCheck:
    op: str
    ok: bool
    case: str = ""
    mismatch: str = ""


def labelled_reduced(P: StructurePoset) -> dict[int, int]:
    return {T: P.labels[T] for T in P.reduced_elements}


def _compare(op: str, case: str, expected: dict[int, int], actual: dict[int, int],
             labels_of: Iterable[int] | None = None) -> OpCheck:
    if set(expected) != set(actual):
        extra = sorted(set(actual) - set(expected))
        missing = sorted(set(expected) - set(actual))
        return OpCheck(op, False, case, f"elements differ: unexpected {[indices_of(x) for x in extra]}, "
                                          f"missing {[indices_of(x) for x in missing]}")
    keys = expected if labels_of is None else labels_of
    for T in keys:
        if expected[T] != actual[T]:
            return OpCheck(op, False, case, f"labels of {indices_of(T)}: expected {indices_of(expected[T])}, "
                                            f"got {indices_of(actual[T])}")
    return OpCheck(op, True, case)


def _relabel_mask(mask: int, images: Sequence[int]) -> int:
    out = 0
    for i in indices_of(mask):
        out |= 1 << (images[i - 1] - 1)
    return out


def poset_op_check(f: BoolFn, g: BoolFn | Sequence[int] | None, op: str) -> OpCheck:
    """Compare the predicted reduced poset of op(f, g) with the one computed directly.

    op is one of ``permute`` (g is the permutation), ``complement`` (g unused),
    ``tensor`` and ``causal`` (h = f < g).
    """
    Pf = structure_poset(f)
    if op == "permute":
        sigma = tuple(g)
        h = permute(f, sigma)
        inv = inverse_perm(sigma)
        exp = {_relabel_mask(T, inv): _relabel_mask(L, inv) for T, L in labelled_reduced(Pf).items()}
        return _compare(op, "", exp, labelled_reduced(structure_poset(h)))

    if op == "complement":
        h = complement(f)
        Ph = structure_poset(h)
        m = full_mask(f.n)
        if Pf.free_outputs or Ph.free_outputs:
            case, flip = "free outputs", {0, m}
        else:
            case, flip = "no free outputs", {0}
        exp_set = set(Pf.reduced_elements) ^ flip
        actual = labelled_reduced(Ph)
        exp = {T: actual.get(T, -1) if T in flip else Pf.labels[T] for T in exp_set}
        return _compare(op, case, exp, actual)

    if op not in ("tensor", "causal"):
        raise UsageError(f"unknown operation {op!r}")
    if not isinstance(g, BoolFn):
        raise UsageError(f"{op} needs a second function")
    Pg = structure_poset(g)
    m = f.n
    F0, G0 = labelled_reduced(Pf), labelled_reduced(Pg)
    minF, minG = set(Pf.minimal(True)), set(Pg.minimal(True))

    if op == "tensor":
        h = tensor(f, g)
        exp = {}
        for S, LS in F0.items():
            for T, LT in G0.items():
                if S not in minF and T not in minG:
                    continue
                if S not in minF:
                    lab = LS
                elif T not in minG:
                    lab = LT << m
                else:
                    lab = LS | (LT << m)
                exp[S | (T << m)] = lab
        return _compare(op, "", exp, labelled_reduced(structure_poset(h)))

    h = causal(f, g)
    top = full_mask(m)

    def lift(U: int) -> int:
        return top | (U << m)

    if top in F0:
        case = "top of f reduced"
        exp = {S: L for S, L in F0.items() if S != top}
        minima = minG
        extra = F0[top]
        g_part = G0
    elif 0 in G0:
        case = "bottom of g reduced"
        exp = dict(F0)
        g_part = {U: L for U, L in G0.items() if U != 0}
        minima = {U for U in g_part if not any(_strict(V, U) for V in g_part)}
        extra = Pf.free_outputs
    else:
        exp = dict(F0)
        g_part = G0
        minima = set()
        extra = 0
        if Pf.free_outputs:
            case = "free outputs inserted"
            exp[top] = Pf.free_outputs
        else:
            case = "ordinal sum"
    for U, L in g_part.items():
        lab = L << m
        if U in minima:
            lab |= extra
        exp[lift(U)] = lab
    return _compare(op, case, exp, labelled_reduced(structure_poset(h)))


# ---------------------------------------------------------------------------
# structural properties of reduced posets
# ---------------------------------------------------------------------------

def _comparable(a: int, b: int) -> bool:
    return _subset(a, b) or _subset(b, a)


def check_properties(P: StructurePoset) -> list[str]:
    """Order-theoretic facts every type function's poset satisfies; returns violations."""
    bad: list[str] = []
    R = P.reduced_elements
    full = set(P.elements)
    for k, S in enumerate(R):
        for T in R[k + 1:]:
            if _comparable(S, T):
                continue
            common_down = [X for X in R if _subset(X, S) and _subset(X, T)]
            common_up = [X for X in R if _subset(S, X) and _subset(T, X)]
            if not is_chain(common_down) or not is_chain(common_up):
                bad.append(f"incomparable {indices_of(S)}, {indices_of(T)} share a non-chain bound set")
    for S in R:
        dn, upset = P.down(S), P.up(S)
        if not is_chain(dn) and not is_chain(upset):
            bad.append(f"{indices_of(S)}: neither down-set nor up-set is a chain")
        if is_chain(dn) and len(dn) - 1 != P.rank[S]:
            bad.append(f"{indices_of(S)}: down-chain length {len(dn) - 1} != rank {P.rank[S]}")
    for k, S in enumerate(R):
        for T in R[k:]:
            X = P.meet(S, T)
            if X is not None and X not in P.reduced:
                bad.append(f"meet of {indices_of(S)}, {indices_of(T)} is not reduced")
            lower = [Y for Y in R if _subset(Y, S) and _subset(Y, T)]
            upper = [Y for Y in R if _subset(S, Y) and _subset(T, Y)]
            if bool(lower) != (P.meet(S, T, reduced=True) is not None):
                bad.append(f"{indices_of(S)}, {indices_of(T)}: lower bound without meet")
            if bool(upper) != (P.join(S, T, reduced=True) is not None):
                bad.append(f"{indices_of(S)}, {indices_of(T)}: upper bound without join")
    lattice = all(P.meet(S, T, True) is not None and P.join(S, T, True) is not None
                  for S in R for T in R)
    bounded = bool(R) and _greatest(list(R)) is not None and _least(list(R)) is not None
    if lattice != bounded:
        bad.append(f"lattice={lattice} but bounded={bounded}")
    chain_like = set(R) == full
    if chain_like != is_chain(P.elements):
        bad.append("reduced == full disagrees with total order")
    # labels cover every index except the free outputs and ranks decide inputs
    covered = 0
    for L in P.labels.values():
        covered |= L
    if covered != full_mask(P.n) & ~P.free_outputs:
        bad.append("label sets do not cover the non-free indices")
    inputs = io_split_from_coeffs(P)
    for i in range(1, P.n + 1):
        try:
            r = index_rank(P, i)
        except InvariantError as exc:
            bad.append(str(exc))
            continue
        if (r % 2 == 0) != bool(inputs >> (i - 1) & 1):
            bad.append(f"index {i}: rank parity disagrees with input/output")
    for m in P.minimal():
        if P.free_inputs & ~P.labels[m]:
            bad.append(f"free inputs do not label minimal element {indices_of(m)}")
    return bad


def io_split_from_coeffs(P: StructurePoset) -> int:
    """Input mask read off the poset's own function."""
    return io_split(to_boolfn(P.coeffs)).inputs
