"""Numerical check of the projection representation on small qudit systems.

Operators on H = H_1 (x) ... (x) H_n are expanded in a real orthonormal basis
of hermitian matrices (I/sqrt(d) plus generalized Gell-Mann), so every
superoperator projection is a real symmetric matrix of size prod d_i^2.

P_s is the tensor product of local projections P_{i,0}(X) = Tr[X] I/d_i and
their complements; P_f sums P_s over the support of f.  The trace-and-replace
maps Pi_T are built separately by acting on operators, which gives an
independent route to the Moebius identity P_f = sum_T fhat_T Pi_T.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .boolfn import BoolFn, complement, indices_of, io_split, tensor
from .errors import UsageError
from .mobius import transform

DEFAULT_CAP = 4096
BUILD_TOL = 1e-10
IDENTITY_TOL = 1e-9


def hermitian_basis(d: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """d^2 hermitian d x d matrices, orthonormal for Tr[A B]; the first is I/sqrt(d)."""
    if d < 2:
        raise UsageError("local dimensions must be at least 2")
    mats = [np.eye(d, dtype=complex) / np.sqrt(d)]
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1 / np.sqrt(2)
            mats.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j / np.sqrt(2)
            m[k, j] = 1j / np.sqrt(2)
            mats.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        mats.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    basis = np.array(mats)
    if rng is not None:
        # rotate the traceless part so the matrices are not aligned with coordinates
        q, r = np.linalg.qr(rng.standard_normal((d * d - 1, d * d - 1)))
        q = q * np.sign(np.diag(r))
        basis[1:] = np.einsum("ab,bij->aij", q, basis[1:])
    return basis


def _superop_matrix(basis: np.ndarray, images: np.ndarray) -> np.ndarray:
    """M[a, b] = Tr[B_a Phi(B_b)] with images[b] = Phi(B_b)."""
    return np.real(np.einsum("aji,bij->ab", basis, images))


@dataclass
class ChoiSpace:
    dims: tuple[int, ...]
    seed: int | None = None
    cap: int = DEFAULT_CAP
    bases: list | None = None
    _ps: dict = field(default_factory=dict, repr=False)
    _pi: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if not self.dims:
            raise UsageError("need at least one system")
        if any(d < 2 for d in self.dims):
            raise UsageError("local dimensions must be at least 2")
        if self.size > self.cap:
            raise UsageError(f"superoperator dimension {self.size} exceeds the cap {self.cap}")
        if self.bases is None:
            rng = None if self.seed is None else np.random.default_rng(self.seed)
            self.bases = [hermitian_basis(d, rng) for d in self.dims]
        elif [len(B) for B in self.bases] != [d * d for d in self.dims]:
            raise UsageError("basis sizes do not match the dimensions")
        self.local0 = []
        for d, B in zip(self.dims, self.bases):
            traces = np.einsum("bii->b", B)
            images = traces[:, None, None] * np.eye(d)[None] / d
            self.local0.append(_superop_matrix(B, images))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod([d * d for d in self.dims]))

    @property
    def hilbert_dim(self) -> int:
        return int(np.prod(self.dims))

    def restrict(self, lo: int, hi: int) -> "ChoiSpace":
        """Systems lo+1..hi with the same local bases."""
        return ChoiSpace(self.dims[lo:hi], cap=self.cap, bases=self.bases[lo:hi])

    def identity(self) -> np.ndarray:
        return np.eye(self.size)

    def P_local(self, i: int, bit: int) -> np.ndarray:
        P0 = self.local0[i - 1]
        return P0 if bit == 0 else np.eye(len(P0)) - P0

    def P_s(self, s: int) -> np.ndarray:
        if s not in self._ps:
            mats = [self.P_local(i + 1, (s >> i) & 1) for i in range(self.n)]
            self._ps[s] = reduce(np.kron, mats)
        return self._ps[s]

    def P_f(self, f: BoolFn) -> np.ndarray:
        if f.n != self.n:
            raise UsageError(f"function on {f.n} systems, space has {self.n}")
        out = np.zeros((self.size, self.size))
        for s in f.support():
            out += self.P_s(s)
        return out

    # -- trace and replace, acting on operators ------------------------------

    def _product_basis(self, idx: np.ndarray) -> np.ndarray:
        """Operators B_b for the listed flat indices b, shaped (k, d1..dn, d1..dn)."""
        sizes = [d * d for d in self.dims]
        digits = np.array(np.unravel_index(idx, sizes)).T
        ops = []
        for row in digits:
            op = reduce(np.kron, [self.bases[k][a] for k, a in enumerate(row)])
            ops.append(op.reshape(self.dims + self.dims))
        return np.array(ops)

    def _trace_replace(self, X: np.ndarray, T: int) -> np.ndarray:
        n = self.n
        for k in indices_of(T):
            ax_r, ax_c = k, k + n  # axis 0 is the batch
            d = self.dims[k - 1]
            tr = np.trace(X, axis1=ax_r, axis2=ax_c)
            tr = np.expand_dims(np.expand_dims(tr, ax_r), ax_c)
            shape = [1] * X.ndim
            shape[ax_r] = shape[ax_c] = d
            X = tr * (np.eye(d) / d).reshape(shape)
        return X

    def _coefficients(self, Y: np.ndarray) -> np.ndarray:
        """Expand a batch of operators in the product basis: c_a = Tr[B_a Y]."""
        n = self.n
        cur = Y
        for k in range(n):
            B = self.bases[k]
            # contract row axis 1 and column axis 1 + (n - k) of what remains
            col = 1 + (n - k)
            cur = np.moveaxis(cur, (1, col), (-2, -1))
            cur = np.einsum("...ij,aji->...a", cur, B)
        return np.real(cur.reshape(len(Y), -1))

    def Pi(self, T: int) -> np.ndarray:
        """Pi_T(X) = Tr_T[X] (x) I_T / d_T as a matrix in the product basis."""
        if T not in self._pi:
            cols = []
            for start in range(0, self.size, 256):
                idx = np.arange(start, min(self.size, start + 256))
                X = self._product_basis(idx)
                cols.append(self._coefficients(self._trace_replace(X, T)))
            self._pi[T] = np.concatenate(cols).T
        return self._pi[T]

    def mobius_bridge(self, f: BoolFn) -> np.ndarray:
        out = np.zeros((self.size, self.size))
        for T, c in transform(f).coeffs.items():
            out += c * self.Pi(T)
        return out

    def rank_formula(self, f: BoolFn) -> int:
        total = 0
        for s in f.support():
            prod = 1
            for i, d in enumerate(self.dims):
                if s >> i & 1:
                    prod *= d * d - 1
            total += prod
        return total

    def normalization(self, f: BoolFn) -> int:
        """c_f: product of the input dimensions."""
        return int(np.prod([self.dims[i - 1] for i in io_split(f).input_indices], dtype=np.int64))


def opnorm(A: np.ndarray) -> float:
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


@dataclass
class IdentityRow:
    name: str
    cases: int = 0
    max_residual: float = 0.0
    tolerance: float = IDENTITY_TOL

    @property
    def ok(self) -> bool:
        return self.max_residual <= self.tolerance

    def add(self, residual: float) -> None:
        self.cases += 1
        self.max_residual = max(self.max_residual, residual)


@dataclass
class IdentityReport:
    dims: tuple[int, ...]
    rows: dict[str, IdentityRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows.values())

    def render(self) -> str:
        lines = [f"dims {','.join(map(str, self.dims))}",
                 f"{'identity':<28}{'cases':>7}{'max residual':>15}  status"]
        for r in self.rows.values():
            lines.append(f"{r.name:<28}{r.cases:>7}{r.max_residual:>15.3e}  {'pass' if r.ok else 'FAIL'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "ok": self.ok,
                "identities": [{"name": r.name, "cases": r.cases, "max_residual": r.max_residual,
                                "tolerance": r.tolerance, "ok": r.ok} for r in self.rows.values()]}


ROW_NAMES = ("idempotent", "symmetric", "rank", "meet = product", "join", "complement",
             "tensor", "mobius bridge", "commute")


def verify_identities(dims: Sequence[int], functions: Iterable[BoolFn],
                      pairs: Iterable[tuple[BoolFn, BoolFn]] | None = None,
                      tensor_pairs: Iterable[tuple[BoolFn, BoolFn]] = (),
                      *, seed: int | None = 0, tolerance: float = IDENTITY_TOL,
                      build_tolerance: float = BUILD_TOL) -> IdentityReport:
    """Check the projection identities on the given functions and pairs.

    ``functions`` get idempotence, symmetry, rank, complement and the Moebius
    bridge; ``pairs`` get meet, join and commutation (all pairs of
    ``functions`` when omitted); ``tensor_pairs`` (f, g) with f.n + g.n equal
    to the number of systems get P_{f (x) g} = P_f (x) P_g.
    """
    space = ChoiSpace(tuple(dims), seed=seed)
    rows = {name: IdentityRow(name, tolerance=build_tolerance if name in ("idempotent", "symmetric") else tolerance)
            for name in ROW_NAMES}
    rows["rank"].tolerance = 0.5
    fns = list(functions)
    cache: dict[int, np.ndarray] = {}

    def P(f: BoolFn) -> np.ndarray:
        if f.table not in cache:
            cache[f.table] = space.P_f(f)
        return cache[f.table]

    Id = space.identity()
    Ptheta = space.P_s(0)
    for f in fns:
        Pf = P(f)
        rows["idempotent"].add(opnorm(Pf @ Pf - Pf))
        rows["symmetric"].add(opnorm(Pf - Pf.T))
        rows["rank"].add(abs(np.trace(Pf) - space.rank_formula(f)))
        rows["complement"].add(opnorm(P(complement(f)) - (Id - Pf + Ptheta)))
        rows["mobius bridge"].add(opnorm(Pf - space.mobius_bridge(f)))
    if pairs is None:
        pairs = itertools.combinations_with_replacement(fns, 2)
    for f, g in pairs:
        Pf, Pg = P(f), P(g)
        prod = Pf @ Pg
        rows["meet = product"].add(opnorm(P(f & g) - prod))
        rows["join"].add(opnorm(P(f | g) - (Pf + Pg - prod)))
        rows["commute"].add(opnorm(prod - Pg @ Pf))
    for f, g in tensor_pairs:
        if f.n + g.n != space.n:
            raise UsageError("tensor pair must cover all systems")
        left, right = space.restrict(0, f.n), space.restrict(f.n, space.n)
        rows["tensor"].add(opnorm(space.P_f(tensor(f, g)) - np.kron(left.P_f(f), right.P_f(g))))
    return IdentityReport(tuple(dims), rows)


def numeric_rank(P: np.ndarray, tol: float = 1e-8) -> int:
    return int(np.linalg.matrix_rank(P, tol=tol))
