"""Deciding when two self-adjoint expansive maps share the same density family.

Two such maps agree exactly when some positive power of the absolute-value map
of one equals that of the other.  The decision therefore diagonalizes both
absolutized maps in a common orthonormal basis and compares the per-direction
exponents t_i = log b_i / log a_i.  For integer inputs with integer spectra
the comparison is certified exactly through multiplicative dependence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import intmath
from .density import Region
from .errors import BadParameter, SingularMatrix
from .spectral import (DEFAULT_TOL, SymMatrix, _jacobi, absolutize, decompose,
                       exact_integer_spectrum)

CERT_EXACT = "ExactInteger"
CERT_NUMERIC = "Numeric"
OBSTRUCTION_NSD = "NotSimultaneouslyDiagonalizable"
OBSTRUCTION_MISMATCH = "ExponentMismatch"

EXPONENT_RTOL = 1e-9


@dataclass(frozen=True)
class Obstruction:
    kind: str
    i: int | None = None
    l: int | None = None
    t_i: float | None = None
    t_l: float | None = None

    def to_json(self) -> dict:
        if self.kind == OBSTRUCTION_NSD:
            return {"kind": self.kind}
        return {"kind": self.kind, "i": self.i, "l": self.l,
                "t_i": self.t_i, "t_l": self.t_l}


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    exponent: float | None
    common_basis: np.ndarray | None
    obstruction: Obstruction | None
    certification: str

    def to_json(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "t": self.exponent,
            "basis": None if self.common_basis is None
            else [[float(x) for x in row] for row in self.common_basis],
            "obstruction": None if self.obstruction is None else self.obstruction.to_json(),
            "certification": self.certification,
        }


def simultaneous_diagonalization(a1: SymMatrix, a2: SymMatrix,
                                 tol: float = 1e-9) -> np.ndarray | None:
    """A common orthonormal eigenbasis of two symmetric matrices, or None.

    Exists iff the matrices commute: the test is ||A1 A2 - A2 A1|| against
    tol * ||A1|| * ||A2||, then each eigenspace of A1 is rediagonalized for A2
    and every resulting vector is verified to be an eigenvector of both.
    """
    if a1.dim != a2.dim:
        raise BadParameter("matrices must have the same dimension")
    m1, m2 = a1.entries, a2.entries
    n1 = max(1.0, float(np.linalg.norm(m1)))
    n2 = max(1.0, float(np.linalg.norm(m2)))
    if np.linalg.norm(m1 @ m2 - m2 @ m1) > tol * n1 * n2:
        return None
    dec1 = decompose(a1)
    cols = []
    for i in range(len(dec1.multiplicities)):
        block = dec1.eigenspace_basis(i)
        sub = block.T @ m2 @ block
        sub = (sub + sub.T) / 2.0
        _, vecs = _jacobi(sub, DEFAULT_TOL)
        cols.append(block @ vecs)
    basis = np.hstack(cols)
    for u in basis.T:
        for m, n in ((m1, n1), (m2, n2)):
            r = m @ u
            lam = float(u @ r)
            if np.linalg.norm(r - lam * u) > tol * n:
                return None
    return basis


def _abs_integer_multiset(a: SymMatrix) -> list[int] | None:
    spec = exact_integer_spectrum(a)
    if spec is None:
        return None
    out: list[int] = []
    for val, mult in spec:
        out.extend([abs(int(val))] * mult)
    return sorted(out)


def aligned_integer_pairs(a1: SymMatrix, a2: SymMatrix,
                          basis: np.ndarray) -> list[tuple[int, int]] | None:
    """Per-direction pairs (|lambda_i^(1)|, |lambda_i^(2)|) as exact integers.

    Requires both spectra to be provably integral; the float Rayleigh quotient
    along each common-basis vector picks the member of the exact multiset.
    """
    pools = []
    mats = []
    for a in (a1, a2):
        pool = _abs_integer_multiset(a)
        if pool is None:
            return None
        pools.append(pool)
        mats.append(np.asarray(absolutize(a).entries, dtype=float))
    pairs: list[list[int]] = [[], []]
    for side in range(2):
        m = mats[side]
        remaining = list(pools[side])
        for u in basis.T:
            val = float(u @ m @ u)
            k = int(np.argmin([abs(val - c) for c in remaining]))
            cand = remaining[k]
            if abs(val - cand) > 1e-6 * max(1.0, cand):
                return None
            remaining.pop(k)
            pairs[side].append(cand)
    return list(zip(pairs[0], pairs[1]))


def _exact_exponent_decision(pairs: list[tuple[int, int]]):
    """Exact verdict from integer eigenvalue pairs, when number theory permits.

    Returns (decided, equivalent, t, mismatch_indices).  Undecidable cases --
    multiplicatively independent pairs without common bases on both sides --
    return decided=False and fall back to the floating comparison.
    """
    fracs: list[Fraction | None] = []
    for a, b in pairs:
        md = intmath.multiplicative_dependence(a, b)
        fracs.append(None if md is None else Fraction(md[2], md[1]))
    distinct = sorted(set(pairs))
    if len(distinct) == 1:
        a, b = distinct[0]
        t = float(fracs[0]) if fracs[0] is not None else math.log(b) / math.log(a)
        return True, True, t, None
    if all(f is not None for f in fracs):
        first = fracs[0]
        for k, f in enumerate(fracs[1:], start=1):
            if f != first:
                return True, False, None, (0, k)
        return True, True, float(first), None
    if any(f is not None for f in fracs):
        i = next(k for k, f in enumerate(fracs) if f is not None)
        l = next(k for k, f in enumerate(fracs) if f is None)
        return True, False, None, (min(i, l), max(i, l))
    # all exponents irrational: exact comparison needs common bases on both sides
    avals = [p[0] for p in pairs]
    bvals = [p[1] for p in pairs]
    apow = [intmath.perfect_power(v) for v in avals]
    bpow = [intmath.perfect_power(v) for v in bvals]
    if len({p[0] for p in apow}) != 1 or len({p[0] for p in bpow}) != 1:
        return False, False, None, None
    abase = apow[0][0]
    bbase = bpow[0][0]
    n = [p[1] for p in apow]
    m = [p[1] for p in bpow]
    for k in range(1, len(pairs)):
        if m[k] * n[0] != m[0] * n[k]:
            return True, False, None, (0, k)
    t = (m[0] / n[0]) * math.log(bbase) / math.log(abase)
    return True, True, t, None


def decide_equivalence(a1: SymMatrix, a2: SymMatrix, tol: float = 1e-9,
                       exponent_rtol: float = EXPONENT_RTOL) -> EquivalenceVerdict:
    """Do two self-adjoint expansive maps define the same density family?

    Yes exactly when the absolutized maps admit a common eigenbasis and the
    per-direction exponents log|lambda_i^(2)| / log|lambda_i^(1)| agree.
    """
    ap1 = absolutize(a1, min(tol, DEFAULT_TOL))
    ap2 = absolutize(a2, min(tol, DEFAULT_TOL))
    basis = simultaneous_diagonalization(ap1, ap2, tol=tol)
    if basis is None:
        return EquivalenceVerdict(False, None, None,
                                  Obstruction(OBSTRUCTION_NSD), CERT_NUMERIC)
    lam1 = np.array([float(u @ ap1.entries @ u) for u in basis.T])
    lam2 = np.array([float(u @ ap2.entries @ u) for u in basis.T])
    tvec = np.log(lam2) / np.log(lam1)

    certification = CERT_NUMERIC
    pairs = aligned_integer_pairs(a1, a2, basis) if (a1.exact and a2.exact) else None
    if pairs is not None:
        decided, equivalent, t_exact, mismatch = _exact_exponent_decision(pairs)
        if decided:
            certification = CERT_EXACT
            if equivalent:
                return EquivalenceVerdict(True, float(t_exact), basis, None, certification)
            if mismatch is None:
                i, l = _worst_pair(tvec)
            else:
                i, l = mismatch
            return EquivalenceVerdict(
                False, None, basis,
                Obstruction(OBSTRUCTION_MISMATCH, i, l, float(tvec[i]), float(tvec[l])),
                certification)

    spread_tol = exponent_rtol * max(1.0, float(np.max(np.abs(tvec))))
    if float(np.max(tvec) - np.min(tvec)) <= spread_tol:
        return EquivalenceVerdict(True, float(np.mean(tvec)), basis, None, certification)
    i, l = _worst_pair(tvec)
    return EquivalenceVerdict(
        False, None, basis,
        Obstruction(OBSTRUCTION_MISMATCH, i, l, float(tvec[i]), float(tvec[l])),
        certification)


def _worst_pair(tvec: np.ndarray) -> tuple[int, int]:
    i = int(np.argmin(tvec))
    l = int(np.argmax(tvec))
    return (i, l) if i < l else (l, i)


def conjugate_map(c, a) -> np.ndarray:
    """C^{-1} A C for an invertible C; generally not symmetric."""
    c = np.asarray(c, dtype=float)
    arr = a.entries if isinstance(a, SymMatrix) else np.asarray(a, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape != arr.shape:
        raise BadParameter("conjugator and map must be square matrices of equal size")
    if np.linalg.det(c) == 0.0:
        raise SingularMatrix("conjugator must be invertible")
    return np.linalg.solve(c, arr @ c)


def conjugate_transport(c, region: Region) -> Region:
    """The preimage C^{-1} E = {x : Cx in E} of a region under an invertible matrix.

    Density decisions are conjugation-covariant: E against A behaves like
    C^{-1} E against C^{-1} A C, so transported regions let tests and demos
    move a witness set into the eigenbasis of another map.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] != region.dim:
        raise BadParameter("conjugator must be square with the region's dimension")
    if np.linalg.det(c) == 0.0:
        raise SingularMatrix("conjugator must be invertible")
    hw = None
    if region.box_halfwidth is not None:
        cinv = np.linalg.inv(c)
        hw = float(np.max(np.sum(np.abs(cinv), axis=1))) * region.box_halfwidth
    spec = {"kind": "preimage", "dim": region.dim,
            "matrix": [[float(x) for x in row] for row in c], "inner": region.spec}
    return Region(region.dim, spec, hw, lambda p: region.contains(p @ c.T))
