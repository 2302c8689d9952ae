"""Binary strings and the boolean algebra of functions with f(theta) = 1.

Strings of length n are packed into an int with bit i-1 holding s_i; the
textual form writes s_1 first.  A function is a 2^n-bit truth table held in
a Python int (bit s is f(s)), so lattice operations are single bitwise ops.
Subsets of [n] use the same mask encoding as strings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import UsageError

MAX_N = 16


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_N:
        raise UsageError(f"system count must be in 1..{MAX_N}, got {n!r}")


def mask_of(indices: Iterable[int], n: int | None = None) -> int:
    """Pack 1-based indices into a bit mask."""
    m = 0
    for i in indices:
        i = int(i)
        if i < 1 or (n is not None and i > n):
            raise UsageError(f"index {i} outside [1, {n}]")
        m |= 1 << (i - 1)
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    """1-based indices of the set bits, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, indices_of(mask))) + "}"


def full_mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True, order=True)
class BitString:
    n: int
    bits: int

    def __post_init__(self):
        _check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise UsageError(f"bits {self.bits:#x} do not fit in n={self.n}")

    @classmethod
    def parse(cls, text: str) -> "BitString":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise UsageError(f"not a binary string: {text!r}")
        bits = sum(1 << k for k, ch in enumerate(text) if ch == "1")
        return cls(len(text), bits)

    @classmethod
    def theta(cls, n: int) -> "BitString":
        return cls(n, 0)

    @classmethod
    def e(cls, n: int, *indices: int) -> "BitString":
        """e^i or e^{i,j}: exactly the given positions set."""
        if len(set(indices)) != len(indices):
            raise UsageError("repeated index in e^{...}")
        return cls(n, mask_of(indices, n))

    def __getitem__(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise UsageError(f"index {i} outside [1, {self.n}]")
        return (self.bits >> (i - 1)) & 1

    def __str__(self) -> str:
        return "".join("1" if self.bits >> k & 1 else "0" for k in range(self.n))


def string_text(bits: int, n: int) -> str:
    return "".join("1" if bits >> k & 1 else "0" for k in range(n))


def parse_string(text: str, n: int | None = None) -> int:
    s = BitString.parse(text)
    if n is not None and s.n != n:
        raise UsageError(f"string {text!r} has length {s.n}, expected {n}")
    return s.bits


# ---------------------------------------------------------------------------
# word-parallel helpers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _full_table(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def var_table(n: int, i: int) -> int:
    """Truth table of s -> s_i (i is 1-based)."""
    period = 1 << i              # 2^(i-1) zeros followed by 2^(i-1) ones
    half = period >> 1
    block = ((1 << half) - 1) << half
    repunit = _full_table(n) // ((1 << period) - 1)
    return block * repunit


@lru_cache(maxsize=None)
def _repunit(m: int, k: int) -> int:
    """sum over s2 in {0,1}^k of 1 << (s2 * 2^m)."""
    return _full_table(m + k) // _full_table(m)


def _spread(table: int, m: int) -> int:
    """sum over s2 with bit s2 of `table` set of 1 << (s2 * 2^m)."""
    width = 1 << m
    out = 0
    s2 = 0
    while table:
        if table & 1:
            out |= 1 << (s2 * width)
        table >>= 1
        s2 += 1
    return out


def _table_to_bits(table: int, n: int) -> np.ndarray:
    size = 1 << n
    raw = table.to_bytes(max(1, size // 8 + (size % 8 > 0)), "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]


def _bits_to_table(bits: np.ndarray) -> int:
    packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


# ---------------------------------------------------------------------------
# BoolFn
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoolFn:
    """f: {0,1}^n -> {0,1} with f(theta) = 1, stored as a truth-table int."""

    n: int
    table: int

    def __post_init__(self):
        _check_n(self.n)
        if self.table < 0 or self.table > _full_table(self.n):
            raise UsageError("truth table wider than 2^n bits")
        if not self.table & 1:
            raise UsageError("f(theta) must be 1")

    # -- constructors -------------------------------------------------------
    @classmethod
    def one(cls, n: int) -> "BoolFn":
        _check_n(n)
        return cls(n, _full_table(n))

    @classmethod
    def bottom(cls, n: int) -> "BoolFn":
        return cls(n, 1)

    @classmethod
    def from_support(cls, n: int, strings: Iterable[str | int]) -> "BoolFn":
        _check_n(n)
        t = 0
        for s in strings:
            bits = parse_string(s, n) if isinstance(s, str) else int(s)
            if bits >> n:
                raise UsageError(f"string {bits} does not fit in n={n}")
            t |= 1 << bits
        return cls(n, t)

    @classmethod
    def from_values(cls, values: Sequence[int] | np.ndarray) -> "BoolFn":
        v = np.asarray(values)
        size = v.shape[0]
        n = size.bit_length() - 1
        if size != 1 << n or n < 1:
            raise UsageError(f"value vector length {size} is not 2^n")
        if np.any((v != 0) & (v != 1)):
            raise UsageError("values outside {0,1}")
        return cls(n, _bits_to_table(v))

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], int]) -> "BoolFn":
        _check_n(n)
        return cls(n, sum(1 << s for s in range(1 << n) if fn(s)))

    # -- evaluation ---------------------------------------------------------
    def __call__(self, s: BitString | str | int) -> int:
        if isinstance(s, BitString):
            if s.n != self.n:
                raise UsageError(f"string of length {s.n} given to function of n={self.n}")
            bits = s.bits
        elif isinstance(s, str):
            bits = parse_string(s, self.n)
        else:
            bits = int(s)
            if bits < 0 or bits >> self.n:
                raise UsageError(f"string {bits} does not fit in n={self.n}")
        return (self.table >> bits) & 1

    def values(self) -> np.ndarray:
        """0/1 uint8 vector of length 2^n indexed by string mask."""
        return _table_to_bits(self.table, self.n)

    def support(self) -> list[int]:
        return [s for s in range(1 << self.n) if self.table >> s & 1]

    def support_strings(self) -> list[str]:
        return [string_text(s, self.n) for s in self.support()]

    def __len__(self) -> int:
        return bin(self.table).count("1")

    # -- order and lattice --------------------------------------------------
    def _same_n(self, other: "BoolFn") -> None:
        if not isinstance(other, BoolFn):
            raise UsageError(f"expected BoolFn, got {type(other).__name__}")
        if other.n != self.n:
            raise UsageError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __le__(self, other: "BoolFn") -> bool:
        self._same_n(other)
        return self.table & ~other.table == 0

    def __ge__(self, other: "BoolFn") -> bool:
        return other <= self

    def __lt__(self, other: "BoolFn") -> bool:
        return self <= other and self.table != other.table

    def __gt__(self, other: "BoolFn") -> bool:
        return other < self

    def __and__(self, other: "BoolFn") -> "BoolFn":
        self._same_n(other)
        return BoolFn(self.n, self.table & other.table)

    def __or__(self, other: "BoolFn") -> "BoolFn":
        self._same_n(other)
        return BoolFn(self.n, self.table | other.table)

    def __invert__(self) -> "BoolFn":
        return complement(self)

    def __repr__(self) -> str:
        supp = ",".join(self.support_strings()) if self.n <= 4 else f"{len(self)} strings"
        return f"BoolFn(n={self.n}, support={{{supp}}})"

    # -- json ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "support": self.support_strings()}

    @classmethod
    def from_json(cls, data: dict) -> "BoolFn":
        try:
            n = int(data["n"])
            support = data["support"]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed BoolFn record: {exc}") from None
        return cls.from_support(n, support)


def one(n: int) -> BoolFn:
    return BoolFn.one(n)


def bottom(n: int) -> BoolFn:
    return BoolFn.bottom(n)


def evaluate(f: BoolFn, s: BitString) -> int:
    return f(s)


def basis_table(n: int, T: int) -> int:
    t = _full_table(n)
    for i in indices_of(T):
        t &= ~var_table(n, i)
    return t


def basis_pT(n: int, T: Iterable[int] | int) -> BoolFn:
    """p_T(s) = prod_{i in T} (1 - s_i)."""
    _check_n(n)
    if isinstance(T, (int, np.integer)):
        mask = int(T)
        if mask < 0 or mask >> n:
            raise UsageError(f"subset mask {mask:#x} not inside [{n}]")
    else:
        mask = mask_of(T, n)
    return BoolFn(n, basis_table(n, mask))


def complement(f: BoolFn) -> BoolFn:
    """f* = 1 - f + p_n."""
    return BoolFn(f.n, (~f.table & _full_table(f.n)) | 1)


def tensor(f: BoolFn, g: BoolFn) -> BoolFn:
    """(f (x) g)(s1 s2) = f(s1) g(s2)."""
    _check_n(f.n + g.n)
    return BoolFn(f.n + g.n, f.table * _spread(g.table, f.n))


def par(f: BoolFn, g: BoolFn) -> BoolFn:
    return complement(tensor(complement(f), complement(g)))


def causal(f: BoolFn, g: BoolFn) -> BoolFn:
    """f < g on [m] + [k]: f(s1) if s1 != theta else g(s2)."""
    m = f.n
    _check_n(m + g.n)
    return BoolFn(m + g.n, (f.table & ~1) * _repunit(m, g.n) | _spread(g.table, m))


def causal_rev(f: BoolFn, g: BoolFn) -> BoolFn:
    """g < f on [m] + [k]: g(s2) if s2 != theta else f(s1)."""
    m = f.n
    _check_n(m + g.n)
    return BoolFn(m + g.n, f.table | _full_table(m) * _spread(g.table & ~1, m))


_OPS = {
    "meet": None,
    "join": None,
    "tensor": tensor,
    "par": par,
    "causal_left": causal,
    "causal_right": causal_rev,
}

OPERATIONS = tuple(_OPS)


def combine(f: BoolFn, g: BoolFn, op: str) -> BoolFn:
    """Single dispatch point for the binary operations."""
    if op == "meet":
        return f & g
    if op == "join":
        return f | g
    try:
        fn = _OPS[op]
    except KeyError:
        raise UsageError(f"unknown operation {op!r}; expected one of {OPERATIONS}") from None
    return fn(f, g)


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------

def _check_perm(sigma: Sequence[int], n: int) -> tuple[int, ...]:
    sigma = tuple(int(x) for x in sigma)
    if len(sigma) != n or sorted(sigma) != list(range(1, n + 1)):
        raise UsageError(f"{sigma} is not a permutation of [1..{n}]")
    return sigma


@lru_cache(maxsize=4096)
def perm_source_index(sigma: tuple[int, ...]) -> np.ndarray:
    """src[s] = sigma(s) as a mask, so (f o sigma)(s) = f(src[s])."""
    n = len(sigma)
    s = np.arange(1 << n, dtype=np.int64)
    src = np.zeros_like(s)
    for j, image in enumerate(sigma):
        src |= ((s >> j) & 1) << (image - 1)
    src.setflags(write=False)
    return src


def permute(f: BoolFn, sigma: Sequence[int]) -> BoolFn:
    """(f o sigma)(s) = f(sigma(s)) with sigma(s) = s o sigma^{-1}.

    `sigma` lists the images sigma(1), ..., sigma(n).  Index i of f becomes
    index sigma^{-1}(i) of the result.
    """
    sigma = _check_perm(sigma, f.n)
    src = perm_source_index(sigma)
    return BoolFn(f.n, _bits_to_table(f.values()[src]))


def inverse_perm(sigma: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for j, image in enumerate(sigma, start=1):
        inv[image - 1] = j
    return tuple(inv)


def relabel(f: BoolFn, mapping: Sequence[int] | dict[int, int]) -> BoolFn:
    """Move index i of f to position mapping[i] (mapping is 1-based)."""
    if isinstance(mapping, dict):
        targets = tuple(mapping[i] for i in range(1, f.n + 1))
    else:
        targets = tuple(mapping)
    return permute(f, inverse_perm(_check_perm(targets, f.n)))


def apply_perm_to_mask(mask: int, mapping: Sequence[int]) -> int:
    """Image of an index set under i -> mapping[i-1]."""
    return mask_of(mapping[i - 1] for i in indices_of(mask))


# ---------------------------------------------------------------------------
# input / output split and subtypes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IOSplit:
    n: int
    inputs: int
    outputs: int

    def __post_init__(self):
        if self.inputs & self.outputs or self.inputs | self.outputs != full_mask(self.n):
            raise UsageError("inputs and outputs must partition [n]")

    @property
    def input_indices(self) -> tuple[int, ...]:
        return indices_of(self.inputs)

    @property
    def output_indices(self) -> tuple[int, ...]:
        return indices_of(self.outputs)


def io_split(f: BoolFn) -> IOSplit:
    """I_f = {i : f(e^i) = 0}, O_f = complement."""
    outputs = 0
    for i in range(f.n):
        if f.table >> (1 << i) & 1:
            outputs |= 1 << i
    return IOSplit(f.n, full_mask(f.n) & ~outputs, outputs)


def outputs_of(f: BoolFn) -> int:
    return io_split(f).outputs


def inputs_of(f: BoolFn) -> int:
    return io_split(f).inputs


def is_subtype(f: BoolFn) -> bool:
    """p_{I_f} <= f <= p_{O_f}^*."""
    split = io_split(f)
    lower = basis_table(f.n, split.inputs)
    upper = complement(BoolFn(f.n, basis_table(f.n, split.outputs))).table
    return lower & ~f.table == 0 and f.table & ~upper == 0


def all_functions(n: int) -> Iterator[BoolFn]:
    """Every element of F_n (use for n <= 4)."""
    size = 1 << n
    for rest in range(1 << (size - 1)):
        yield BoolFn(n, (rest << 1) | 1)


def all_permutations(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(1, n + 1))
