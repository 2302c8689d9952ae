"""Type terms, their type functions, chain types and the sets T_n.

Grammar (ASCII)::

    term   := tensor ["->" term]          right associative
    tensor := unary ("*" unary)*
    unary  := "~" unary | atom
    atom   := "A" digits | "(" term ")"

``x -> y`` is sugar for ``~(x * ~y)``.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

from . import _kernels
from .boolfn import (BoolFn, _check_n, _full_table, _spread, complement, indices_of,
                     inverse_perm, mask_of, perm_source_index, relabel, tensor)
from .errors import InvariantError, NotBooleanError, ParseError, UndecidedError, UsageError
from .mobius import MobiusCoeffs, to_boolfn, transform

DEFAULT_MAX_N = 5


def max_enumeration_n() -> int:
    """Enumeration guard; HOTKIT_MAX_N overrides the default of 5."""
    raw = os.environ.get("HOTKIT_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"HOTKIT_MAX_N must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# syntax tree
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    index: int
    span: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Dual:
    child: "TypeTerm"
    span: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Tensor:
    left: "TypeTerm"
    right: "TypeTerm"
    span: tuple[int, int] = field(default=(0, 0), compare=False, repr=False)


TypeTerm = Union[Leaf, Dual, Tensor]


def leaves(t: TypeTerm) -> list[int]:
    """Leaf indices in left-to-right order."""
    if isinstance(t, Leaf):
        return [t.index]
    if isinstance(t, Dual):
        return leaves(t.child)
    return leaves(t.left) + leaves(t.right)


def map_leaves(t: TypeTerm, fn) -> TypeTerm:
    if isinstance(t, Leaf):
        return Leaf(fn(t.index))
    if isinstance(t, Dual):
        return Dual(map_leaves(t.child, fn))
    return Tensor(map_leaves(t.left, fn), map_leaves(t.right, fn))


def dual(t: TypeTerm) -> TypeTerm:
    return t.child if isinstance(t, Dual) else Dual(t)


def arrow(x: TypeTerm, y: TypeTerm) -> TypeTerm:
    return Dual(Tensor(x, dual(y)))


def format_term(t: TypeTerm) -> str:
    return _fmt(t, 0)


def _fmt(t: TypeTerm, ctx: int) -> str:
    # ctx: 0 = anywhere, 1 = operand of *, 2 = operand of ~ / left of ->
    if isinstance(t, Leaf):
        return f"A{t.index}"
    if isinstance(t, Dual):
        inner = t.child
        if isinstance(inner, Tensor) and isinstance(inner.right, Dual):
            text = f"{_fmt(inner.left, 2)} -> {_fmt(inner.right.child, 0)}"
            return f"({text})" if ctx else text
        return "~" + _fmt(inner, 2)
    text = f"{_fmt(t.left, 1)} * {_fmt(t.right, 2)}"
    return f"({text})" if ctx == 2 else text


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(A\d+)|(->)|([~*()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ParseError("non-ASCII character", bad, text)
    out = []
    pos = 0
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        if not m:
            at = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[at]!r}", at, text)
        atom, arr, sym = m.groups()
        start = m.start(1) if atom else m.start(2) if arr else m.start(3)
        if atom:
            out.append(("atom", atom, start))
        else:
            out.append((arr or sym, arr or sym, start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0

    def peek(self) -> str:
        return self.toks[self.k][0]

    def take(self, kind: str):
        tok = self.toks[self.k]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2], self.text)
        self.k += 1
        return tok

    def term(self) -> TypeTerm:
        start = self.toks[self.k][2]
        lhs = self.tensor()
        if self.peek() == "->":
            self.take("->")
            rhs = self.term()
            return Dual(Tensor(lhs, dual(rhs)), span=(start, self.toks[self.k][2]))
        return lhs

    def tensor(self) -> TypeTerm:
        start = self.toks[self.k][2]
        lhs = self.unary()
        while self.peek() == "*":
            self.take("*")
            lhs = Tensor(lhs, self.unary(), span=(start, self.toks[self.k][2]))
        return lhs

    def unary(self) -> TypeTerm:
        if self.peek() == "~":
            start = self.take("~")[2]
            return Dual(self.unary(), span=(start, self.toks[self.k][2]))
        return self.atom()

    def atom(self) -> TypeTerm:
        kind, value, pos = self.toks[self.k]
        if kind == "atom":
            self.k += 1
            return Leaf(int(value[1:]), span=(pos, pos + len(value)))
        if kind == "(":
            self.take("(")
            inner = self.term()
            self.take(")")
            return inner
        what = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"expected an atom or '(', found {what}", pos, self.text)


def _leaf_nodes(t: TypeTerm) -> Iterator[Leaf]:
    if isinstance(t, Leaf):
        yield t
    elif isinstance(t, Dual):
        yield from _leaf_nodes(t.child)
    else:
        yield from _leaf_nodes(t.left)
        yield from _leaf_nodes(t.right)


def parse(text: str) -> TypeTerm:
    """Parse a term and check that it uses A1..An exactly once each."""
    p = _Parser(text)
    t = p.term()
    p.take("eof")
    seen: dict[int, Leaf] = {}
    for leaf in _leaf_nodes(t):
        if leaf.index < 1:
            raise ParseError("elementary systems are numbered from 1", leaf.span[0], text)
        if leaf.index in seen:
            raise ParseError(f"A{leaf.index} occurs more than once", leaf.span[0], text)
        seen[leaf.index] = leaf
    n = len(seen)
    missing = sorted(set(range(1, n + 1)) - set(seen))
    if missing:
        raise UsageError(f"term over {n} systems must use A1..A{n}; missing A{missing[0]}")
    _check_n(n)
    return t


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _eval_local(t: TypeTerm) -> BoolFn:
    if isinstance(t, Leaf):
        return BoolFn.one(1)
    if isinstance(t, Dual):
        return complement(_eval_local(t.child))
    return tensor(_eval_local(t.left), _eval_local(t.right))


def eval_term(t: TypeTerm | str) -> BoolFn:
    """Type function of a term: A -> 1_1, dual -> f*, tensor -> f (x) g."""
    if isinstance(t, str):
        t = parse(t)
    order = leaves(t)
    if sorted(order) != list(range(1, len(order) + 1)):
        raise UsageError("term must use A1..An exactly once each")
    return relabel(_eval_local(t), order)


# ---------------------------------------------------------------------------
# chain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainSpec:
    """Strict chain S_0 < S_1 < ... < S_N of subsets of [n], N even."""

    n: int
    sets: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        sets = tuple(int(s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        if not sets:
            raise UsageError("a chain needs at least one set")
        if (len(sets) - 1) % 2:
            raise UsageError(f"chain length N={len(sets) - 1} must be even")
        for a, b in zip(sets, sets[1:]):
            if a & ~b or a == b:
                raise UsageError("chain sets must be strictly increasing")
        if sets[-1] >> self.n:
            raise UsageError(f"chain leaves [{self.n}]")

    @property
    def length(self) -> int:
        return len(self.sets) - 1

    @classmethod
    def from_sets(cls, n: int, sets: Sequence[Sequence[int]]) -> "ChainSpec":
        return cls(n, tuple(mask_of(s, n) for s in sets))

    def coeffs(self) -> MobiusCoeffs:
        return MobiusCoeffs(self.n, {S: (-1) ** k for k, S in enumerate(self.sets)})

    def steps(self) -> list[int]:
        """T_0 = S_0, T_k = S_k minus S_{k-1}, T_{N+1} = rest of [n]."""
        out = [self.sets[0]]
        out += [b & ~a for a, b in zip(self.sets, self.sets[1:])]
        out.append(((1 << self.n) - 1) & ~self.sets[-1])
        return out

    def inputs(self) -> int:
        return _alternating(self.steps(), 0)

    def outputs(self) -> int:
        return _alternating(self.steps(), 1)


def _alternating(steps: list[int], parity: int) -> int:
    m = 0
    for k, T in enumerate(steps):
        if k % 2 == parity:
            m |= T
    return m


def chain_type(c: ChainSpec) -> BoolFn:
    """f = sum_i (-1)^i p_{S_i}."""
    try:
        return to_boolfn(c.coeffs())
    except NotBooleanError as exc:  # pragma: no cover - theory says impossible
        raise InvariantError(f"malformed chain {c}: {exc}") from None


def chain_of(f: BoolFn) -> ChainSpec | None:
    """The chain spec if f is a chain type, else None."""
    c = transform(f)
    items = sorted(c.coeffs.items(), key=lambda kv: (bin(kv[0]).count("1"), kv[0]))
    sets = [T for T, _ in items]
    for k, (T, coef) in enumerate(items):
        if coef != (-1) ** k:
            return None
    if not sets or (len(sets) - 1) % 2:
        return None
    for a, b in zip(sets, sets[1:]):
        if a & ~b or a == b:
            return None
    return ChainSpec(f.n, tuple(sets))


def is_chain_type(f: BoolFn) -> bool:
    return chain_of(f) is not None


def all_chain_types(n: int) -> set[BoolFn]:
    """Every strict even-length chain in 2^n, evaluated (independent oracle)."""
    _check_n(n)
    full = (1 << n) - 1
    out: set[BoolFn] = set()

    def extend(chain: list[int]):
        if (len(chain) - 1) % 2 == 0:
            out.add(chain_type(ChainSpec(n, tuple(chain))))
        last = chain[-1]
        rest = full & ~last
        sub = rest
        while sub:
            chain.append(last | sub)
            extend(chain)
            chain.pop()
            sub = (sub - 1) & rest

    for S0 in range(1 << n):
        extend([S0])
    return out


# ---------------------------------------------------------------------------
# enumeration of T_n
# ---------------------------------------------------------------------------

class TypeCatalog:
    """The set T_n as packed tables plus one derivation per element."""

    def __init__(self, n: int, tables: np.ndarray, prov: list[tuple]):
        self.n = n
        self.tables = tables
        self.prov = prov
        self.index = {int(t): k for k, t in enumerate(tables)}
        self._terms: dict[int, TypeTerm] = {}

    def __len__(self) -> int:
        return len(self.tables)

    def __contains__(self, f: BoolFn) -> bool:
        return f.n == self.n and f.table in self.index

    def functions(self) -> list[BoolFn]:
        return [BoolFn(self.n, int(t)) for t in self.tables]

    def witness(self, f: BoolFn) -> TypeTerm:
        """A term whose type function is f."""
        k = self.index.get(f.table)
        if f.n != self.n or k is None:
            raise UsageError(f"{f!r} is not in T_{self.n}")
        return self._term(k)

    def _term(self, k: int) -> TypeTerm:
        if k in self._terms:
            return self._terms[k]
        rec = self.prov[k]
        if rec[0] == "leaf":
            t: TypeTerm = Leaf(1)
        elif rec[0] == "dual":
            t = dual(self._term(rec[1]))
        else:
            _, m, fi, gi, perm = rec
            left = _catalog(m)._term(fi)
            right = map_leaves(_catalog(self.n - m)._term(gi), lambda i: i + m)
            inv = inverse_perm(perm)
            t = map_leaves(Tensor(left, right), lambda i: inv[i - 1])
        self._terms[k] = t
        return t


def _complement_packed(tables: np.ndarray, n: int) -> np.ndarray:
    full = np.uint64(_full_table(n))
    return (~tables & full) | np.uint64(1)


@lru_cache(maxsize=None)
def _catalog(n: int) -> TypeCatalog:
    if n > _kernels.MAX_PACKED_N:
        raise UsageError(f"enumeration of T_n is limited to n <= {_kernels.MAX_PACKED_N}")
    if n == 1:
        return TypeCatalog(1, np.array([1, 3], dtype=np.uint64), [("dual", 1), ("leaf",)])

    chunks, codes = [], []
    perms = list(itertools.permutations(range(1, n + 1)))
    for m in range(1, n // 2 + 1):
        F, G = _catalog(m), _catalog(n - m)
        fi, gi = np.meshgrid(np.arange(len(F)), np.arange(len(G)), indexing="ij")
        fi, gi = fi.ravel(), gi.ravel()
        spread = np.array([_spread(int(t), m) for t in G.tables], dtype=np.uint64)
        products = F.tables[fi] * spread[gi]
        for p_id, perm in enumerate(perms):
            chunks.append(_kernels.permute_tables(products, perm_source_index(perm)))
            codes.append(np.stack([np.full(len(products), m), fi, gi,
                                   np.full(len(products), p_id)], axis=1))
    prod_tables = np.concatenate(chunks)
    prod_codes = np.concatenate(codes)
    uniq, first = np.unique(prod_tables, return_index=True)
    comp = _complement_packed(uniq, n)
    extra = np.setdiff1d(comp, uniq)
    tables = np.union1d(uniq, extra)

    pos = {int(t): k for k, t in enumerate(uniq)}
    prov: list[tuple] = []
    for t in tables:
        t = int(t)
        if t in pos:
            m, fi_, gi_, p_id = (int(x) for x in prod_codes[first[pos[t]]])
            prov.append(("prod", m, fi_, gi_, perms[p_id]))
        else:
            prov.append(("dual_of", int(_complement_packed(np.array([t], dtype=np.uint64), n)[0])))
    index = {int(t): k for k, t in enumerate(tables)}
    prov = [("dual", index[r[1]]) if r[0] == "dual_of" else r for r in prov]
    cat = TypeCatalog(n, tables, prov)
    _check_closed(cat)
    return cat


def _check_closed(cat: TypeCatalog) -> None:
    comp = _complement_packed(cat.tables, cat.n)
    if not np.isin(comp, cat.tables).all():  # pragma: no cover
        raise InvariantError(f"T_{cat.n} not closed under complement")


def _guard(n: int, allow_large: bool) -> None:
    _check_n(n)
    limit = max_enumeration_n()
    if n > limit and not allow_large:
        raise UndecidedError(
            f"enumerating T_{n} exceeds the guard n <= {limit}; set HOTKIT_MAX_N or allow_large")


def type_catalog(n: int, *, allow_large: bool = False) -> TypeCatalog:
    _guard(n, allow_large)
    return _catalog(n)


def enumerate_types(n: int, *, allow_large: bool = False) -> frozenset[BoolFn]:
    """The exact set T_n, built from products of smaller types, permutations and duals."""
    return frozenset(type_catalog(n, allow_large=allow_large).functions())


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

def is_type_function(f: BoolFn, method: str = "auto") -> bool:
    """Membership in T_n.

    ``enumerate`` consults the enumerated set and refuses beyond the guard;
    ``factor`` searches for a tensor factorisation of f or f* into types;
    ``auto`` enumerates within the guard and factors above it.
    """
    if method not in ("auto", "enumerate", "factor"):
        raise UsageError(f"unknown method {method!r}")
    if method == "factor":
        return decompose(f) is not None
    if f.n <= min(max_enumeration_n(), _kernels.MAX_PACKED_N):
        return f in _catalog(f.n)
    if method == "enumerate":
        raise UndecidedError(f"T_{f.n} membership undecided: n exceeds the enumeration guard")
    return decompose(f) is not None


def witness_term(f: BoolFn) -> TypeTerm:
    """A term evaluating to f; raises UsageError when f is not a type function."""
    if f.n <= min(max_enumeration_n(), _kernels.MAX_PACKED_N):
        return _catalog(f.n).witness(f)
    t = decompose(f)
    if t is None:
        raise UsageError(f"{f!r} is not a type function")
    return t


def _restrict(values: np.ndarray, n: int, mask: int) -> BoolFn:
    """x over the positions of `mask` (ascending) -> f(x deposited into mask)."""
    pos = indices_of(mask)
    k = len(pos)
    x = np.arange(1 << k)
    s = np.zeros_like(x)
    for j, i in enumerate(pos):
        s |= ((x >> j) & 1) << (i - 1)
    return BoolFn.from_values(values[s])


def decompose(f: BoolFn) -> TypeTerm | None:
    """Search for a derivation of f from 1_1 by tensor, permutation and dual."""
    return _decompose(f.n, f.table)


@lru_cache(maxsize=200_000)
def _decompose(n: int, table: int) -> TypeTerm | None:
    if n == 1:
        return Leaf(1) if table == 3 else Dual(Leaf(1))
    f = BoolFn(n, table)
    for g, wrap in ((f, False), (complement(f), True)):
        t = _factor(g)
        if t is not None:
            return dual(t) if wrap else t
    return None


def _factor(f: BoolFn) -> TypeTerm | None:
    n = f.n
    vals = f.values()
    idx = np.arange(1 << n)
    full = (1 << n) - 1
    # A always holds index 1; B is the non-empty rest
    for rest in range(1, 1 << (n - 1)):
        B = rest << 1
        A = full & ~B
        if not np.array_equal(vals, vals[idx & A] & vals[idx & B]):
            continue
        fa, fb = _restrict(vals, n, A), _restrict(vals, n, B)
        ta = _decompose(fa.n, fa.table)
        if ta is None:
            continue
        tb = _decompose(fb.n, fb.table)
        if tb is None:
            continue
        pa, pb = indices_of(A), indices_of(B)
        return Tensor(map_leaves(ta, lambda i: pa[i - 1]), map_leaves(tb, lambda i: pb[i - 1]))
    return None
