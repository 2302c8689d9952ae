"""Subtypes, the order <=_O and the lattice of regular subtypes.

Throughout, phi(s) = s XOR I turns <=_O into plain subset order on masks:
s <=_O t  iff  phi(s) is a subset of phi(t).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from . import _kernels
from .boolfn import (BitString, BoolFn, _check_n, basis_pT, format_set,
                     full_mask, indices_of, io_split, mask_of, string_text, var_table)
from .errors import InvariantError, UsageError
from .mobius import MobiusCoeffs, to_boolfn, transform
from .typeterm import is_chain_type, type_catalog


def _as_mask(s: BitString | str | int, n: int) -> int:
    if isinstance(s, BitString):
        if s.n != n:
            raise UsageError(f"string of length {s.n} used with n={n}")
        return s.bits
    if isinstance(s, str):
        b = BitString.parse(s)
        if b.n != n:
            raise UsageError(f"string {s!r} has length {b.n}, expected {n}")
        return b.bits
    s = int(s)
    if s < 0 or s >> n:
        raise UsageError(f"string mask {s} outside {{0,1}}^{n}")
    return s


@dataclass(frozen=True)
class OutputOrder:
    """s <=_O t: raised on O, lowered on the inputs I = [n] minus O."""

    n: int
    O: int

    def __post_init__(self):
        _check_n(self.n)
        if self.O < 0 or self.O >> self.n:
            raise UsageError(f"output set {self.O:#x} not inside [{self.n}]")

    @classmethod
    def of(cls, n: int, outputs: Iterable[int]) -> "OutputOrder":
        return cls(n, mask_of(outputs, n))

    @property
    def I(self) -> int:
        return full_mask(self.n) & ~self.O

    def phi(self, s: int) -> int:
        return s ^ self.I

    def leq(self, s, t) -> bool:
        a, b = self.phi(_as_mask(s, self.n)), self.phi(_as_mask(t, self.n))
        return a & ~b == 0

    def join(self, s: int, t: int) -> int:
        return self.phi(self.phi(s) | self.phi(t))

    def meet(self, s: int, t: int) -> int:
        return self.phi(self.phi(s) & self.phi(t))

    def opposite(self) -> "OutputOrder":
        return OutputOrder(self.n, self.I)

    def up_table(self, s: int) -> np.ndarray:
        """Indicator over all strings of the principal upset U_s."""
        t = np.arange(1 << self.n)
        p = self.phi(s)
        return ((t ^ self.I) & p) == p

    def down_table(self, s: int) -> np.ndarray:
        t = np.arange(1 << self.n)
        return ((t ^ self.I) & ~self.phi(s)) == 0

    def cover_pairs(self) -> tuple[np.ndarray, np.ndarray]:
        """(lo, hi) for every single-coordinate step upwards."""
        lo, hi = [], []
        s = np.arange(1 << self.n)
        for i in range(self.n):
            bit = 1 << i
            base = s[(s & bit) == 0]
            if self.O & bit:
                lo.append(base)
                hi.append(base | bit)
            else:
                lo.append(base | bit)
                hi.append(base)
        return np.concatenate(lo), np.concatenate(hi)

    def free_strings(self) -> list[int]:
        """(D_theta u U_theta)^C: some input bit and some output bit set."""
        return [s for s in range(1 << self.n) if s & self.O and s & self.I]


def _order_of(f: BoolFn) -> OutputOrder:
    return OutputOrder(f.n, io_split(f).outputs)


# ---------------------------------------------------------------------------
# monotone subtypes
# ---------------------------------------------------------------------------

def _shift_monotone(f: BoolFn, O: int) -> bool:
    """Word-parallel scan of the single-bit steps of <=_O."""
    T = f.table
    for i in range(1, f.n + 1):
        v = var_table(f.n, i)
        sh = 1 << (i - 1)
        if O >> (i - 1) & 1:
            # f(s0s') = 1 forces f(s1s') = 1
            if ((T & ~v) << sh) & ~T:
                return False
        else:
            # f(s1s') = 1 forces f(s0s') = 1
            if ((T & v) >> sh) & ~T:
                return False
    return True


def is_monotone(f: BoolFn, O: int | None = None) -> bool:
    """f monotone for <=_O (default O = O_f)."""
    return _shift_monotone(f, io_split(f).outputs if O is None else O)


def is_monotone_subtype(f: BoolFn) -> bool:
    """supp f is a <=_{O_f} upset meeting D_theta only in theta."""
    order = _order_of(f)
    if not _shift_monotone(f, order.O):
        return False
    vals = f.values().astype(bool)
    dtheta = order.down_table(0)
    return int(np.count_nonzero(vals & dtheta)) == 1


def is_monotone_subtype_pairs(f: BoolFn) -> bool:
    """Reference check over every comparable pair of strings."""
    order = _order_of(f)
    vals = f.values()
    size = 1 << f.n
    for s in range(size):
        if not vals[s]:
            continue
        if s and order.leq(s, 0):
            return False
        for t in range(size):
            if not vals[t] and order.leq(s, t):
                return False
    return True


def two_condition_check(f: BoolFn) -> bool:
    """Rising on an output coordinate and falling on an input coordinate keep f = 1."""
    O = io_split(f).outputs
    vals = f.values()
    for s in range(1 << f.n):
        if not vals[s]:
            continue
        for i in range(f.n):
            bit = 1 << i
            if O & bit and not s & bit and not vals[s | bit]:
                return False
            if not O & bit and s & bit and not vals[s & ~bit]:
                return False
    return True


# ---------------------------------------------------------------------------
# basic strings and f_s
# ---------------------------------------------------------------------------

def basic_strings(n: int, O: int) -> list[BitString]:
    """Strings with one output bit set, some input bit set, at most one input bit clear."""
    order = OutputOrder(n, O)
    I = order.I
    if not O or not I:
        return []
    out = []
    for s in order.free_strings():
        if bin(s & O).count("1") == 1 and bin(I & ~s).count("1") <= 1:
            out.append(BitString(n, s))
    return sorted(out, key=str, reverse=True)


def f_s(n: int, O: int, s: BitString | str | int) -> BoolFn:
    """The monotone subtype with support U_s u U_theta."""
    order = OutputOrder(n, O)
    m = _as_mask(s, n)
    if order.leq(m, 0) and m != 0:
        raise UsageError(f"{string_text(m, n)} lies below theta for <=_O")
    vals = order.up_table(m) | order.up_table(0)
    return BoolFn.from_values(vals.astype(np.uint8))


def generators(n: int, O: int) -> list[BoolFn]:
    """1 - p{j} + p{I+j} and p{i} - p{i,j} + p{I+j} for j in O, i in I."""
    order = OutputOrder(n, O)
    I = order.I
    if not O or not I:
        return [basis_pT(n, I)]
    out: dict[int, BoolFn] = {}
    for j in indices_of(O):
        J = 1 << (j - 1)
        f = to_boolfn(MobiusCoeffs(n, {0: 1, J: -1, I | J: 1}))
        out[f.table] = f
        for i in indices_of(I):
            c: dict[int, int] = {}
            for T, v in (((1 << (i - 1)), 1), ((1 << (i - 1)) | J, -1), (I | J, 1)):
                c[T] = c.get(T, 0) + v
            g = to_boolfn(MobiusCoeffs(n, c))
            out[g.table] = g
    return [out[k] for k in sorted(out)]


# ---------------------------------------------------------------------------
# lattice closure and the regular-subtype lattice
# ---------------------------------------------------------------------------

def lattice_closure(seed: Iterable[BoolFn]) -> frozenset[BoolFn]:
    """Smallest set containing seed and closed under meet and join."""
    members: dict[int, BoolFn] = {}
    queue = []
    n = None
    for f in seed:
        if n is None:
            n = f.n
        elif f.n != n:
            raise UsageError("closure seed mixes different n")
        if f.table not in members:
            members[f.table] = f
            queue.append(f.table)
    while queue:
        x = queue.pop()
        for y in list(members):
            for z in (x & y, x | y):
                if z not in members:
                    members[z] = BoolFn(n, z)
                    queue.append(z)
    return frozenset(members.values())


def monotone_subtypes(n: int, O: int, *, allow_large: bool = False) -> frozenset[BoolFn]:
    """All monotone subtypes with output set O, by brute force over the free strings."""
    order = OutputOrder(n, O)
    if n > _kernels.MAX_PACKED_N:
        raise UsageError(f"brute-force enumeration needs n <= {_kernels.MAX_PACKED_N}")
    if n >= 5 and not allow_large:
        raise UsageError("monotone-subtype enumeration for n >= 5 needs allow_large")
    base = 0
    # U_theta is always in the support; D_theta minus theta never is
    up0 = order.up_table(0)
    for s in np.nonzero(up0)[0]:
        base |= 1 << int(s)
    free = np.array(order.free_strings(), dtype=np.int64)
    lo, hi = order.cover_pairs()
    total = 1 << len(free)
    out: list[int] = []
    chunk = 1 << 16
    for start in range(0, total, chunk):
        count = min(chunk, total - start)
        cand = _kernels.expand_free_bits(base, free, start, count)
        keep = _kernels.respects_pairs(cand, lo, hi)
        out.extend(int(t) for t in cand[keep])
    return frozenset(BoolFn(n, t) for t in out)


@dataclass(frozen=True)
class RegularLattice:
    n: int
    O: int
    members: tuple[BoolFn, ...]
    generators: tuple[BoolFn, ...]
    basic: tuple[BitString, ...]
    types: tuple[BoolFn, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.members)

    def chain_types(self) -> list[BoolFn]:
        return [f for f in self.types if is_chain_type(f)]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "outputs": list(indices_of(self.O)),
            "count": len(self.members),
            "type_functions": len(self.types),
            "chain_types": len(self.chain_types()),
            "basic_strings": [str(s) for s in self.basic],
            "generators": [{"fn": g.to_json(), "mobius": str(transform(g))} for g in self.generators],
            "members": [f.to_json() for f in self.members],
        }


def types_with_output_set(n: int, O: int, *, allow_large: bool = False) -> list[BoolFn]:
    cat = type_catalog(n, allow_large=allow_large)
    return [f for f in cat.functions() if io_split(f).outputs == O]


@lru_cache(maxsize=None)
def _enumerate_regular(n: int, O: int, allow_large: bool) -> RegularLattice:
    OutputOrder(n, O)
    types = types_with_output_set(n, O, allow_large=allow_large)
    closure = lattice_closure(types)
    brute = monotone_subtypes(n, O, allow_large=allow_large)
    if closure != brute:
        raise InvariantError(
            f"regular subtypes for n={n}, O={format_set(O)}: closure has {len(closure)}, "
            f"monotone subtypes {len(brute)}")
    gens = generators(n, O)
    if lattice_closure(gens) != closure:
        raise InvariantError(f"generators do not produce the regular lattice for O={format_set(O)}")
    members = tuple(sorted(closure, key=lambda f: f.table))
    return RegularLattice(n, O, members, tuple(gens), tuple(basic_strings(n, O)),
                          tuple(sorted(types, key=lambda f: f.table)))


def enumerate_regular(n: int, O: int | Iterable[int], *, allow_large: bool = False) -> RegularLattice:
    """Regular subtypes with output set O, computed twice (closure and brute force) and compared."""
    if not isinstance(O, int):
        O = mask_of(O, n)
    return _enumerate_regular(n, O, allow_large)


def nonunit_mobius_witnesses(n: int, *, allow_large: bool = False) -> list[tuple[BoolFn, MobiusCoeffs]]:
    """Regular subtypes whose Moebius coefficients leave {-1, 0, 1}."""
    out = []
    for O in range(1 << n):
        for f in enumerate_regular(n, O, allow_large=allow_large).members:
            c = transform(f)
            if any(abs(v) > 1 for v in c.coeffs.values()):
                out.append((f, c))
    return out
