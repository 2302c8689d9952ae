"""Moebius transform between truth tables and p_T-basis coefficients."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .boolfn import BoolFn, _check_n, format_set, indices_of, mask_of
from .errors import NotBooleanError, ParseError, UsageError


@dataclass(frozen=True)
class MobiusCoeffs:
    """Sparse map T -> c_T with f = sum_T c_T p_T (zero entries dropped)."""

    n: int
    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        _check_n(self.n)
        clean = {}
        for T, c in dict(self.coeffs).items():
            T, c = int(T), int(c)
            if T < 0 or T >> self.n:
                raise UsageError(f"subset mask {T:#x} not inside [{self.n}]")
            if c:
                clean[T] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    def __getitem__(self, T: int) -> int:
        return self.coeffs.get(T, 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, MobiusCoeffs) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, tuple(self.coeffs.items())))

    def support(self) -> list[int]:
        return list(self.coeffs)

    def dense(self) -> np.ndarray:
        out = np.zeros(1 << self.n, dtype=np.int64)
        for T, c in self.coeffs.items():
            out[T] = c
        return out

    @classmethod
    def from_dense(cls, n: int, arr: np.ndarray) -> "MobiusCoeffs":
        nz = np.nonzero(arr)[0]
        return cls(n, {int(T): int(arr[T]) for T in nz})

    @classmethod
    def from_sets(cls, n: int, items: Mapping[Iterable[int], int] | Iterable[tuple[Iterable[int], int]]) -> "MobiusCoeffs":
        pairs = items.items() if isinstance(items, Mapping) else items
        acc: dict[int, int] = {}
        for T, c in pairs:
            m = mask_of(T, n)
            acc[m] = acc.get(m, 0) + int(c)
        return cls(n, acc)

    def __str__(self) -> str:
        return render(self)

    def to_json(self) -> dict:
        return {"n": self.n,
                "coeffs": [{"T": list(indices_of(T)), "c": c} for T, c in self.coeffs.items()]}

    @classmethod
    def from_json(cls, data: dict) -> "MobiusCoeffs":
        try:
            n = int(data["n"])
            pairs = [(rec["T"], rec["c"]) for rec in data["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed Moebius record: {exc}") from None
        return cls.from_sets(n, pairs)


def transform(f: BoolFn) -> MobiusCoeffs:
    return MobiusCoeffs.from_dense(f.n, transform_values(f.values(), f.n))


def transform_values(values: np.ndarray, n: int) -> np.ndarray:
    """Dense coefficients of any integer-valued function on {0,1}^n."""
    return _kernels.mobius_forward(np.asarray(values, dtype=np.int64), n)


def transform_direct(values: np.ndarray, n: int) -> np.ndarray:
    """Reference transform by the explicit alternating sum (4^n work).

    c_T = sum over s with s_j = 1 for every j outside T of
          (-1)^(number of j in T with s_j = 1) * f(s)
    """
    values = np.asarray(values, dtype=np.int64)
    full = (1 << n) - 1
    out = np.zeros(1 << n, dtype=np.int64)
    for T in range(1 << n):
        outside = full & ~T
        total = 0
        # strings with all of `outside` set: outside | (any subset of T)
        sub = T
        while True:
            s = outside | sub
            sign = -1 if bin(sub).count("1") & 1 else 1
            total += sign * int(values[s])
            if sub == 0:
                break
            sub = (sub - 1) & T
        out[T] = total
    return out


def inverse(c: MobiusCoeffs) -> np.ndarray:
    """Integer table s -> sum_T c_T p_T(s)."""
    return _kernels.mobius_inverse(c.dense(), c.n)


def inverse_direct(c: MobiusCoeffs) -> np.ndarray:
    size = 1 << c.n
    out = np.zeros(size, dtype=np.int64)
    s = np.arange(size)
    for T, coef in c.coeffs.items():
        out += coef * ((s & T) == 0)
    return out


def to_boolfn(c: MobiusCoeffs) -> BoolFn:
    """Evaluate the expansion; anything outside {0,1} or f(theta) != 1 is an error."""
    vals = inverse(c)
    bad = np.nonzero((vals != 0) & (vals != 1))[0]
    if bad.size:
        s = int(bad[0])
        raise NotBooleanError(f"expansion {render(c)} takes value {int(vals[s])} at string mask {s}")
    if vals[0] != 1:
        raise NotBooleanError(f"expansion {render(c)} is 0 at theta")
    return BoolFn.from_values(vals)


# ---------------------------------------------------------------------------
# text form:  1 - p{1} + p{1,2}
# ---------------------------------------------------------------------------

def render(c: MobiusCoeffs) -> str:
    if not c.coeffs:
        return "0"
    parts = []
    for T, coef in c.coeffs.items():
        mag = abs(coef)
        if T == 0:
            body = str(mag)
        else:
            body = "p" + format_set(T)
            if mag != 1:
                body = f"{mag}*{body}"
        sign = "-" if coef < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*?\s*)?(p\s*\{([^}]*)\})?")


def parse_expansion(text: str, n: int) -> MobiusCoeffs:
    """Parse a signed sum such as ``1 - p{1} + p{1,2}``."""
    pos = 0
    acc: dict[int, int] = {}
    first = True
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TERM.match(stripped, pos)
        sign, num, ptok, inner = m.groups()
        if (not sign and not first) or (num is None and ptok is None):
            raise ParseError("expected a signed term", pos, text)
        coef = int(num) if num is not None else 1
        if sign == "-":
            coef = -coef
        T = 0
        if ptok is not None:
            items = [x.strip() for x in inner.split(",") if x.strip()]
            try:
                T = mask_of((int(x) for x in items), n)
            except ValueError:
                raise ParseError(f"bad index list {{{inner}}}", m.start(4), text) from None
        acc[T] = acc.get(T, 0) + coef
        pos = m.end()
        first = False
    if first:
        raise ParseError("empty expansion", 0, text)
    return MobiusCoeffs(n, acc)


def from_expansion(text: str, n: int) -> BoolFn:
    return to_boolfn(parse_expansion(text, n))


def coefficient_values(c: MobiusCoeffs) -> set[int]:
    return set(c.coeffs.values())
