"""Signalling relations i ~> j between an input i and an output j.

Two independent criteria: the value f(e^{i,j}) for regular subtypes, and the
parity of the pair rank in the structure poset for type functions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .boolfn import BoolFn, io_split
from .errors import InvariantError, UsageError
from .poset import StructurePoset, index_rank, pair_rank, structure_poset
from .subtypes import is_monotone_subtype
from .typeterm import is_type_function


def _check_pair(f: BoolFn, i: int, j: int) -> None:
    split = io_split(f)
    if not 1 <= i <= f.n or not split.inputs >> (i - 1) & 1:
        raise UsageError(f"{i} is not an input of this function (inputs {split.input_indices})")
    if not 1 <= j <= f.n or not split.outputs >> (j - 1) & 1:
        raise UsageError(f"{j} is not an output of this function (outputs {split.output_indices})")


def e_ij(n: int, i: int, j: int) -> int:
    return (1 << (i - 1)) | (1 << (j - 1))


def no_signal(f: BoolFn, i: int, j: int) -> bool:
    """i cannot signal to j iff f(e^{i,j}) = 0 (regular subtypes only)."""
    if not is_monotone_subtype(f):
        raise UsageError("the evaluation criterion applies to regular (monotone) subtypes only")
    _check_pair(f, i, j)
    return f(e_ij(f.n, i, j)) == 0


def no_signal_by_rank(f: BoolFn | StructurePoset, i: int, j: int, *, fn: BoolFn | None = None) -> bool:
    """i cannot signal to j iff the pair rank is even (-1 counts as odd)."""
    if isinstance(f, StructurePoset):
        P = f
        if fn is None:
            raise UsageError("pass the function alongside its poset")
        f = fn
    else:
        P = None
    if not is_type_function(f):
        raise UsageError("the rank criterion applies to type functions only")
    _check_pair(f, i, j)
    P = P or structure_poset(f)
    r = pair_rank(P, i, j)
    return r >= 0 and r % 2 == 0


def no_signal_by_comparison(P: StructurePoset, i: int, j: int) -> bool | None:
    """Decide from comparable label holders: no signal iff the input's element is lower.

    Returns None when no holders of i and j are comparable (or j is free).
    """
    Ti, Tj = P.holders(i), P.holders(j)
    if not Tj:
        return True
    for S in Ti:
        for T in Tj:
            if S & ~T == 0:
                return True
            if T & ~S == 0:
                return False
    return None


def no_signal_by_lower_chain(P: StructurePoset, i: int, j: int) -> bool:
    """Longest chain below some holder pair has even length (empty chain counts -1)."""
    best = -1
    for S in P.holders(i):
        for T in P.holders(j):
            below = [X for X in P.elements if X & ~S == 0 and X & ~T == 0]
            if below:
                top = max(P.rank[X] for X in below)
                # the common down-set is a chain when the meet exists; its length is the top rank
                best = max(best, top)
    return best >= 0 and best % 2 == 0


def no_signal_from_reduced(P: StructurePoset, i: int, j: int) -> bool:
    """Free output, then comparable holders, then the longest common lower chain."""
    if not P.holders(j):
        return True
    by_cmp = no_signal_by_comparison(P, i, j)
    if by_cmp is not None:
        return by_cmp
    return no_signal_by_lower_chain(P, i, j)


@dataclass(frozen=True)
class SignallingMatrix:
    n: int
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    signals: dict[tuple[int, int], bool]
    pair_ranks: dict[tuple[int, int], int] | None = None

    def __getitem__(self, key: tuple[int, int]) -> bool:
        return self.signals[key]

    def to_json(self) -> dict:
        pairs = []
        for i in self.inputs:
            for j in self.outputs:
                pairs.append({"i": i, "j": j, "signals": self.signals[(i, j)],
                              "pair_rank": None if self.pair_ranks is None else self.pair_ranks[(i, j)]})
        return {"n": self.n, "inputs": list(self.inputs), "outputs": list(self.outputs), "pairs": pairs}

    def render(self) -> str:
        """Grid with inputs as rows; '~>' signals, '.' does not; pair rank in brackets."""
        cells = {}
        for (i, j), s in self.signals.items():
            cell = "~>" if s else "."
            if self.pair_ranks is not None:
                cell += f"[{self.pair_ranks[(i, j)]}]"
            cells[(i, j)] = cell
        width = 1 + max([len(c) for c in cells.values()] + [len(str(j)) for j in self.outputs] + [1])
        lines = ["in\\out".ljust(7) + "".join(str(j).rjust(width) for j in self.outputs)]
        for i in self.inputs:
            lines.append(str(i).ljust(7) + "".join(cells[(i, j)].rjust(width) for j in self.outputs))
        return "\n".join(lines)


def signalling_matrix(f: BoolFn) -> SignallingMatrix:
    """Evaluation-criterion matrix; for type functions the rank criterion is cross-checked."""
    if not is_monotone_subtype(f):
        raise UsageError("signalling is defined here for regular (monotone) subtypes only")
    split = io_split(f)
    ins, outs = split.input_indices, split.output_indices
    signals = {(i, j): f(e_ij(f.n, i, j)) == 1 for i in ins for j in outs}
    ranks = None
    if is_type_function(f):
        P = structure_poset(f)
        ranks = {}
        for (i, j), s in signals.items():
            r = pair_rank(P, i, j)
            ranks[(i, j)] = r
            by_rank = not (r >= 0 and r % 2 == 0)
            if by_rank != s:
                raise InvariantError(f"criteria disagree for {i} ~> {j}: value says {s}, pair rank {r}")
    return SignallingMatrix(f.n, ins, outs, signals, ranks)


def criteria_agree(f: BoolFn) -> list[tuple[int, int]]:
    """Pairs (i, j) where the value and rank criteria disagree (type functions)."""
    P = structure_poset(f)
    split = io_split(f)
    bad = []
    for i in split.input_indices:
        for j in split.output_indices:
            by_value = f(e_ij(f.n, i, j)) == 0
            r = pair_rank(P, i, j)
            if by_value != (r >= 0 and r % 2 == 0):
                bad.append((i, j))
    return bad


def rank_bound_holds(P: StructurePoset, i: int, j: int) -> bool:
    return pair_rank(P, i, j) <= min(index_rank(P, i), index_rank(P, j))
