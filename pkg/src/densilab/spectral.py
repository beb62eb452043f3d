"""Self-adjoint matrices and their spectral calculus.

Provides the ``SymMatrix`` wrapper, a cyclic Jacobi eigendecomposition with
eigenvalue clustering, strict expansiveness/positivity predicates (exact for
integer inputs), fractional powers ``A^t`` and the absolute-value map
``A -> A'`` that replaces every eigenvalue by its modulus.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import intmath
from .errors import BadParameter, NotExpansive, NotPositive, NotSymmetric, ParseError

DEFAULT_TOL = 1e-12
CLUSTER_RTOL = 1e-8
_MAX_SWEEPS = 64
_INT_LIMIT = float(1 << 53)


def _is_integral(arr: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(arr)) and np.all(np.abs(arr) < _INT_LIMIT)
                and np.all(arr == np.rint(arr)))


@dataclass(frozen=True)
class SymMatrix:
    """A real symmetric matrix; ``exact`` marks integer entries stored exactly."""

    entries: np.ndarray = field(repr=False)
    exact: bool

    @classmethod
    def from_rows(cls, rows, tol: float = DEFAULT_TOL) -> "SymMatrix":
        arr = np.asarray(rows, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise BadParameter(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise BadParameter("matrix entries must be finite")
        scale = max(1.0, float(np.linalg.norm(arr)))
        if np.linalg.norm(arr - arr.T) > tol * scale:
            raise NotSymmetric(f"matrix is not symmetric within tol={tol:g}")
        exact = _is_integral(arr)
        arr = np.rint(arr) if exact else (arr + arr.T) / 2.0
        arr = arr.copy()
        arr.setflags(write=False)
        return cls(entries=arr, exact=exact)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def int_rows(self) -> list[list[int]]:
        if not self.exact:
            raise BadParameter("matrix entries are not exact integers")
        return [[int(x) for x in row] for row in self.entries]

    def is_diagonal(self) -> bool:
        return bool(np.all(self.entries == np.diag(np.diag(self.entries))))

    def to_json(self) -> dict:
        rows = self.int_rows() if self.exact else [[float(x) for x in r] for r in self.entries]
        return {"dim": self.dim, "rows": rows}

    @classmethod
    def from_json(cls, obj) -> "SymMatrix":
        if isinstance(obj, (str, bytes)):
            try:
                obj = json.loads(obj)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid matrix JSON: {e}") from e
        if not isinstance(obj, dict) or "dim" not in obj or "rows" not in obj:
            raise ParseError('matrix JSON must be {"dim": d, "rows": [[...]]}')
        rows = obj["rows"]
        try:
            arr = np.asarray(rows, dtype=float)
        except (TypeError, ValueError) as e:
            raise ParseError(f"matrix rows are not numeric: {e}") from e
        if arr.ndim != 2 or arr.shape != (obj["dim"], obj["dim"]):
            raise ParseError(f"rows shape {arr.shape} does not match dim={obj['dim']}")
        return cls.from_rows(arr)


def sym_matrix(rows, tol: float = DEFAULT_TOL) -> SymMatrix:
    return SymMatrix.from_rows(rows, tol=tol)


def sym_diag(*values) -> SymMatrix:
    return SymMatrix.from_rows(np.diag(np.asarray(values, dtype=float)))


@dataclass(frozen=True)
class DiagonalMap:
    """Diagonal positive map with entries in ascending order."""

    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise BadParameter("DiagonalMap needs at least one entry")
        if any(v <= 0 for v in self.values):
            raise NotPositive("DiagonalMap entries must be positive")
        if list(self.values) != sorted(self.values):
            raise BadParameter("DiagonalMap entries must be ascending")

    def power(self, t: float) -> "DiagonalMap":
        return DiagonalMap(tuple(v**t for v in self.values))

    def as_sym_matrix(self) -> SymMatrix:
        return SymMatrix.from_rows(np.diag(self.values))


@dataclass(frozen=True)
class SpectralDecomposition:
    """A = sum_i beta_i P_i with beta_i the distinct (clustered) eigenvalues."""

    eigenvalues: np.ndarray  # all d eigenvalues, ascending
    basis: np.ndarray  # orthonormal columns aligned with ``eigenvalues``
    distinct: np.ndarray  # k cluster representatives, ascending
    multiplicities: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def eigenspace_basis(self, i: int) -> np.ndarray:
        start = sum(self.multiplicities[:i])
        return self.basis[:, start:start + self.multiplicities[i]]

    def projector(self, i: int) -> np.ndarray:
        b = self.eigenspace_basis(i)
        return b @ b.T

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.T

    def apply_function(self, f) -> np.ndarray:
        vals = np.array([f(v) for v in self.eigenvalues])
        m = (self.basis * vals) @ self.basis.T
        return (m + m.T) / 2.0


def _jacobi(arr: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps until the off-diagonal Frobenius norm is below tol*||A||."""
    a = np.array(arr, dtype=float)
    d = a.shape[0]
    v = np.eye(d)
    scale = float(np.linalg.norm(a))
    if scale == 0.0 or d == 1:
        return np.diag(a).copy(), v
    threshold = max(tol, 1e-15) * scale
    offdiag = ~np.eye(d, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        off = math.sqrt(float(np.sum(a[offdiag] ** 2)))
        if off <= threshold:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= 1e-18 * scale:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap, aq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap, aq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    vals = np.diag(a).copy()
    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    v = v[:, order]
    # deterministic sign convention: largest-magnitude component positive
    for j in range(d):
        col = v[:, j]
        k = int(np.argmax(np.abs(col)))
        if col[k] < 0:
            v[:, j] = -col
    return vals, v


def _cluster(vals: np.ndarray, rtol: float) -> list[list[int]]:
    groups: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        prev = vals[groups[-1][-1]]
        cur = vals[i]
        if cur - prev <= rtol * max(1.0, abs(prev), abs(cur)):
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def decompose(a: SymMatrix, tol: float = DEFAULT_TOL,
              cluster_rtol: float = CLUSTER_RTOL) -> SpectralDecomposition:
    """Eigendecomposition with nearby eigenvalues merged into one eigenspace."""
    if not isinstance(a, SymMatrix):
        a = SymMatrix.from_rows(a, tol=tol)
    vals, basis = _jacobi(a.entries, tol)
    groups = _cluster(vals, cluster_rtol)
    distinct = np.array([float(np.mean(vals[g])) for g in groups])
    mults = tuple(len(g) for g in groups)
    return SpectralDecomposition(eigenvalues=vals, basis=basis,
                                 distinct=distinct, multiplicities=mults)


def _char_poly(a: SymMatrix) -> list[int]:
    return intmath.char_poly_int(a.int_rows())


def is_expansive(a: SymMatrix) -> bool:
    """True iff every eigenvalue has |lambda| > 1 (exact test for integer inputs)."""
    if a.exact:
        poly = _char_poly(a)
        if intmath._poly_eval_int(poly, 1) == 0 or intmath._poly_eval_int(poly, -1) == 0:
            return False
        return intmath.count_real_roots_in(poly, Fraction(-1), Fraction(1)) == 0
    vals, _ = _jacobi(a.entries, DEFAULT_TOL)
    return bool(np.min(np.abs(vals)) > 1.0)


def is_positive(a: SymMatrix) -> bool:
    """True iff every eigenvalue is strictly positive (exact test for integer inputs)."""
    if a.exact:
        poly = _char_poly(a)
        bound = intmath.cauchy_root_bound(poly)
        return intmath.count_real_roots_in(poly, -bound, Fraction(0)) == 0
    vals, _ = _jacobi(a.entries, DEFAULT_TOL)
    return bool(np.min(vals) > 0.0)


def power(a: SymMatrix, t: float, tol: float = DEFAULT_TOL) -> SymMatrix:
    """Fractional power A^t through the spectral calculus; requires A positive."""
    if not is_positive(a):
        raise NotPositive("fractional powers need a positive spectrum")
    if a.exact and a.is_diagonal() and float(t).is_integer() and t >= 0:
        ip = int(t)
        vals = [int(x) ** ip for x in np.diag(a.entries)]
        return SymMatrix.from_rows(np.diag(np.asarray(vals, dtype=float)), tol=tol)
    dec = decompose(a, tol)
    return SymMatrix.from_rows(dec.apply_function(lambda v: v**t), tol=max(tol, 1e-9))


def absolutize(a: SymMatrix, tol: float = DEFAULT_TOL) -> SymMatrix:
    """The positive map A' with the same eigenspaces and eigenvalues |lambda_i|.

    Requires A expansive, so A' is positive expansive and A'^t is well defined.
    """
    if not is_expansive(a):
        raise NotExpansive("absolute-value map needs an expansive matrix")
    if a.exact and a.is_diagonal():
        return SymMatrix.from_rows(np.abs(a.entries), tol=tol)
    dec = decompose(a, tol)
    return SymMatrix.from_rows(dec.apply_function(abs), tol=max(tol, 1e-9))


def exact_integer_spectrum(a: SymMatrix) -> list[tuple[int, int]] | None:
    """Eigenvalues with multiplicities when they are provably integers, else None."""
    if not a.exact:
        return None
    if a.is_diagonal():
        counts: dict[int, int] = {}
        for x in np.diag(a.entries):
            counts[int(x)] = counts.get(int(x), 0) + 1
        return sorted(counts.items())
    return intmath.integer_spectrum(a.int_rows())
