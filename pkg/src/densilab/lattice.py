"""Exact classification of expanding integer matrices and dilation equivalence.

Everything here runs on Python integers: expanding tests via the
characteristic polynomial, integral-similarity classes for |det| = 2 with
explicit unimodular conjugators, scalar powers M^l = nI and their trace/det
criteria, diagonal-times-permutation factorizations, and the number-theoretic
witnesses that make an equivalence of integer dilation matrices explicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import intmath
from .equivalence import EquivalenceVerdict, aligned_integer_pairs, decide_equivalence
from .errors import (BadParameter, BadRow, DensilabError, NotExpanding,
                     NotExpansive, NotUnimodular, PreconditionViolated,
                     WrongDeterminant, WrongSign)
from .intmath import multiplicative_dependence, perfect_power
from .spectral import SymMatrix, absolutize, decompose, exact_integer_spectrum, is_expansive


@dataclass(frozen=True)
class IntMatrix2:
    """A 2x2 integer matrix [[a, b], [c, d]] with exact arithmetic."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix2":
        (a, b), (c, d) = rows
        for x in (a, b, c, d):
            if int(x) != x:
                raise BadParameter("entries must be integers")
        return cls(int(a), int(b), int(c), int(d))

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def power(self, k: int) -> "IntMatrix2":
        if k < 0:
            raise BadParameter("only nonnegative powers")
        out = IntMatrix2(1, 0, 0, 1)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def scalar_value(self) -> int | None:
        """n when the matrix equals n * I, else None."""
        if self.b == 0 and self.c == 0 and self.a == self.d:
            return self.a
        return None

    def unimodular_inverse(self) -> "IntMatrix2":
        det = self.det
        if det not in (1, -1):
            raise NotUnimodular("inverse is integral only for det = +-1")
        return IntMatrix2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def to_json(self) -> list[list[int]]:
        return self.rows()


def is_expanding(m: IntMatrix2) -> bool:
    """All roots of x^2 - (tr)x + det strictly outside the unit circle, exactly.

    Complex pair: |lambda|^2 = det.  Real roots: the values of the polynomial
    at +-1 locate them relative to the unit interval.
    """
    s, p = m.trace, m.det
    disc = s * s - 4 * p
    if disc < 0:
        return p > 1
    if abs(p) <= 1:
        return False
    at_one = 1 - s + p
    at_minus_one = 1 + s + p
    if p > 0:
        return (at_one > 0 and s > 2) or (at_minus_one > 0 and s < -2)
    return at_one < 0 and at_minus_one < 0


REPRESENTATIVES = {
    "A1": IntMatrix2(0, 2, 1, 0),
    "A2": IntMatrix2(0, 2, -1, 0),
    "+A3": IntMatrix2(1, 1, -1, 1),
    "-A3": IntMatrix2(-1, -1, 1, -1),
    "+A4": IntMatrix2(0, 2, -1, 1),
    "-A4": IntMatrix2(0, -2, 1, -1),
}

_CLASS_BY_DET_TRACE = {
    (-2, 0): "A1",
    (2, 0): "A2",
    (2, 2): "+A3",
    (2, -2): "-A3",
    (2, 1): "+A4",
    (2, -1): "-A4",
}


@dataclass(frozen=True)
class LatticeClassification:
    det: int
    trace: int
    expanding: bool
    similarity_class: str
    conjugator: IntMatrix2 | None
    search_bound: int

    def to_json(self) -> dict:
        return {
            "det": self.det,
            "trace": self.trace,
            "expanding": self.expanding,
            "class": self.similarity_class,
            "conjugator": None if self.conjugator is None else self.conjugator.to_json(),
            "search_bound": self.search_bound,
        }


_UNIMODULAR_CACHE: dict[int, np.ndarray] = {}


def _unimodular_table(bound: int) -> np.ndarray:
    """All integer (a, b, c, d) with |entries| <= bound and |ad - bc| = 1,
    ordered by max-abs shell so small conjugators are found first."""
    table = _UNIMODULAR_CACHE.get(bound)
    if table is not None:
        return table
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)
    det = grid[:, 0] * grid[:, 3] - grid[:, 1] * grid[:, 2]
    grid = grid[np.abs(det) == 1]
    shell = np.max(np.abs(grid), axis=1)
    order = np.lexsort((grid[:, 3], grid[:, 2], grid[:, 1], grid[:, 0], shell))
    table = grid[order]
    _UNIMODULAR_CACHE[bound] = table
    return table


def _find_conjugator(rep: IntMatrix2, m: IntMatrix2, bound: int) -> IntMatrix2 | None:
    """Smallest unimodular C (by max-abs shell) with C^{-1} rep C == m, exactly."""
    t = _unimodular_table(bound)
    a, b, c, d = (t[:, k] for k in range(4))
    # rep @ C == C @ m, entry by entry
    ok = (rep.a * a + rep.b * c == a * m.a + b * m.c)
    ok &= (rep.a * b + rep.b * d == a * m.b + b * m.d)
    ok &= (rep.c * a + rep.d * c == c * m.a + d * m.c)
    ok &= (rep.c * b + rep.d * d == c * m.b + d * m.d)
    idx = np.flatnonzero(ok)
    if idx.size == 0:
        return None
    cand = IntMatrix2(*(int(v) for v in t[idx[0]]))
    assert (cand.unimodular_inverse() @ rep @ cand) == m
    return cand


def classify_det2(m: IntMatrix2, search_bound: int = 10) -> LatticeClassification:
    """Integral-similarity class of an expanding matrix with |det| = 2.

    The (det, trace) pair already determines the class; a bounded search then
    looks for an explicit unimodular conjugator onto the class representative.
    When none exists within the bound the class is still reported and
    ``conjugator`` is None.
    """
    if not is_expanding(m):
        raise NotExpanding("classification needs an expanding matrix")
    if abs(m.det) != 2:
        raise WrongDeterminant(f"classification covers |det| = 2, got det = {m.det}")
    cls = _CLASS_BY_DET_TRACE.get((m.det, m.trace))
    assert cls is not None, "expanding |det|=2 implies one of the six (det, trace) pairs"
    conj = _find_conjugator(REPRESENTATIVES[cls], m, search_bound)
    return LatticeClassification(det=m.det, trace=m.trace, expanding=True,
                                 similarity_class=cls, conjugator=conj,
                                 search_bound=search_bound)


def minimal_root_of_identity(m: IntMatrix2, l_max: int = 12) -> tuple[int, int] | None:
    """Smallest l <= l_max with M^l == n * I for a positive integer n."""
    if l_max < 1:
        raise BadParameter("l_max must be at least 1")
    p = IntMatrix2(1, 0, 0, 1)
    for l in range(1, l_max + 1):
        p = p @ m
        n = p.scalar_value()
        if n is not None and n >= 1:
            return l, n
    return None


_TABLE_ORDERS = (3, 4, 6, 8, 12)


def scalar_power_table_check(m: IntMatrix2, l: int, n: int) -> bool:
    """Trace/det criterion for M^l == n I when the eigenvalues are a complex pair.

    Valid orders are 3, 4, 6, 8, 12; each pins (trace, det) to exact integer
    roots of n.  Preconditions: det > 0 and a negative discriminant.
    """
    if l not in _TABLE_ORDERS:
        raise BadRow(f"order must be one of {_TABLE_ORDERS}, got {l}")
    if n < 2:
        raise BadParameter("n must be an integer >= 2")
    if m.det <= 0:
        raise WrongSign("criterion applies to det > 0")
    if m.trace * m.trace - 4 * m.det >= 0:
        raise BadRow("criterion applies to non-real eigenvalue pairs")
    s, p = m.trace, m.det
    if l == 3:
        r, exact = intmath.iroot(n, 3)
        return exact and s == -r and p == r * r
    if l == 4:
        r, exact = intmath.iroot(n, 2)
        return exact and s == 0 and p == r
    if l == 6:
        r, exact = intmath.iroot(n, 6)
        return exact and s == r and p == r * r
    if l == 8:
        r, exact = intmath.iroot(n, 4)
        return exact and s * s == 2 * r and p == r
    r, exact = intmath.iroot(n, 6)  # l == 12
    return exact and s * s == 3 * r and p == r


def negative_det_square_check(m: IntMatrix2) -> bool:
    """For expanding det < 0: M^2 == (-det) I holds exactly when the trace vanishes."""
    if not is_expanding(m):
        raise NotExpanding("check needs an expanding matrix")
    if m.det >= 0:
        raise WrongSign("check applies to det < 0")
    if m.trace != 0:
        return False
    assert (m @ m).scalar_value() == -m.det
    return True


def scalar_power_witness(l: int, n: int) -> IntMatrix2 | None:
    """An expanding integer companion matrix with M^l == n I, if one exists.

    Candidates have det = n^{2/l} (complex pair) or det = -n^{2/l} with trace
    zero (a real pair +-n^{1/l}); each is confirmed by an exact power before
    being returned.  None when no candidate verifies.
    """
    if l < 1 or n < 2:
        return None
    target = IntMatrix2(n, 0, 0, n)

    def verified(s: int, p: int) -> IntMatrix2 | None:
        m = IntMatrix2(0, -p, 1, s)
        if s * s == 4 * p:  # repeated eigenvalue: not diagonalizable as a pair
            return None
        if not is_expanding(m):
            return None
        return m if m.power(l) == target else None

    p, exact = intmath.iroot(n * n, l)
    if exact:
        s = 0
        while s * s < 4 * p:
            for cand_s in (s, -s) if s else (0,):
                m = verified(cand_s, p)
                if m is not None:
                    return m
            s += 1
    if l % 2 == 0:
        r, exact = intmath.iroot(n, l)
        if exact:
            m = verified(0, -r * r)
            if m is not None:
                return m
    return None


# --------------------------------------------------------------------------
# diagonal-times-permutation factorizations

def _perm_matrix(perm: tuple[int, ...]) -> list[list[int]]:
    d = len(perm)
    if sorted(perm) != list(range(d)):
        raise BadParameter("perm must be a permutation of 0..d-1")
    return [[1 if j == perm[i] else 0 for j in range(d)] for i in range(d)]


def _perm_cycles(perm: tuple[int, ...]) -> list[list[int]]:
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = perm[i]
        cycles.append(cyc)
    return cycles


def verify_factorization(m, a, diag, perm) -> bool:
    """Check M == A (D P) A^{-1} with A unimodular, D = diag(diag), P from perm.

    True only when the identity holds exactly and every cycle of the
    permutation has |product of its diagonal entries| > 1, which is what makes
    the factored map expanding along each cycle.
    """
    m_rows = m.rows() if isinstance(m, IntMatrix2) else [[int(x) for x in r] for r in m]
    a_rows = a.rows() if isinstance(a, IntMatrix2) else [[int(x) for x in r] for r in a]
    d = len(m_rows)
    if len(a_rows) != d or len(diag) != d or len(perm) != d:
        raise BadParameter("factorization pieces must share the matrix dimension")
    if intmath.det_int(a_rows) not in (1, -1):
        raise NotUnimodular("the change of basis must have det = +-1")
    dp = [[diag[i] * x for x in row] for i, row in enumerate(_perm_matrix(tuple(perm)))]
    if intmath.mat_mul_int(m_rows, a_rows) != intmath.mat_mul_int(a_rows, dp):
        return False
    for cyc in _perm_cycles(tuple(perm)):
        prod = 1
        for i in cyc:
            prod *= diag[i]
        if abs(prod) <= 1:
            return False
    return True


def search_swap_factorization(m: IntMatrix2, bound: int = 10):
    """For M with M^2 == +-2 I: find A in SL(2, Z) with M == A diag(s, s') swap A^{-1}.

    The diagonal signs run over s in {2, -2}, s' in {1, -1}; returns
    (A, (s, s'), (1, 0)) for the first unimodular A with entries within the
    bound, or None.
    """
    sq = (m @ m).scalar_value()
    if sq is None or abs(sq) != 2:
        raise PreconditionViolated("the matrix must square to +-2 times the identity")
    table = _unimodular_table(bound)
    det = table[:, 0] * table[:, 3] - table[:, 1] * table[:, 2]
    sl2 = table[det == 1]
    a, b, c, d = (sl2[:, k] for k in range(4))
    for s1 in (2, -2):
        for s2 in (1, -1):
            # target T = diag(s1, s2) @ swap = [[0, s1], [s2, 0]]; M A == A T
            ok = (m.a * a + m.b * c == b * s2)
            ok &= (m.a * b + m.b * d == a * s1)
            ok &= (m.c * a + m.d * c == d * s2)
            ok &= (m.c * b + m.d * d == c * s1)
            idx = np.flatnonzero(ok)
            if idx.size:
                cand = IntMatrix2(*(int(v) for v in sl2[idx[0]]))
                assert verify_factorization(m, cand, (s1, s2), (1, 0))
                return cand, (s1, s2), (1, 0)
    return None


# --------------------------------------------------------------------------
# dilation-equivalence witnesses

def check_lattice_condition(a: SymMatrix) -> bool:
    """True iff the matrix maps the integer lattice into itself (integer entries)."""
    return bool(a.exact)


@dataclass(frozen=True)
class RationalExponentWitness:
    """t = p/q with every |lambda_j^(1)| a full q-th power; bases are the q-th roots."""

    p: int
    q: int
    bases: tuple[int, ...]
    t: float

    kind = "RationalExponent"

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p, "q": self.q,
                "bases": list(self.bases), "t": self.t}


@dataclass(frozen=True)
class CommonBaseWitness:
    """|lambda_j^(1)| = a^{n_j}, |lambda_j^(2)| = b^{m_j}, t = (m/g) log b / log a."""

    a: int
    b: int
    n: tuple[int, ...]
    m: tuple[int, ...]
    g: int
    m_combined: int
    t: float

    kind = "CommonBase"

    def to_json(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b, "n": list(self.n),
                "m": list(self.m), "g": self.g, "m_combined": self.m_combined,
                "t": self.t}


def _integer_pairs_or_raise(a1: SymMatrix, a2: SymMatrix,
                            verdict: EquivalenceVerdict) -> list[tuple[int, int]]:
    pairs = aligned_integer_pairs(a1, a2, verdict.common_basis)
    if pairs is None:
        raise PreconditionViolated("eigenvalue magnitudes must be exact integers")
    return pairs


def trivially_equivalent(a1: SymMatrix, a2: SymMatrix, t: float):
    """Explicit number-theoretic witness that A1^t = A2 is an integer-power relation.

    Tries the rational-exponent shape first, then a common multiplicative base
    on each side.  Returns None when neither shape applies; raises
    PreconditionViolated when the inputs are outside the integer setting.
    """
    if not (check_lattice_condition(a1) and check_lattice_condition(a2)):
        raise PreconditionViolated("both matrices must preserve the integer lattice")
    verdict = decide_equivalence(a1, a2)
    if not verdict.equivalent:
        raise PreconditionViolated("maps are not equivalent")
    if abs(verdict.exponent - t) > 1e-6 * max(1.0, abs(t)):
        raise PreconditionViolated("t does not match the decided exponent")
    pairs = _integer_pairs_or_raise(a1, a2, verdict)

    fracs = []
    for av, bv in pairs:
        md = multiplicative_dependence(av, bv)
        fracs.append(None if md is None else (md[2], md[1]))
    if all(f is not None for f in fracs):
        tf = Fraction(*fracs[0])
        if all(Fraction(*f) == tf for f in fracs):
            p, q = tf.numerator, tf.denominator
            bases = []
            for av, bv in pairs:
                root, exact = intmath.iroot(av, q)
                if not exact or root**p != bv:
                    raise PreconditionViolated("rational witness failed re-verification")
                bases.append(root)
            return RationalExponentWitness(p=p, q=q, bases=tuple(bases), t=p / q)

    apow = [perfect_power(av) for av, _ in pairs]
    bpow = [perfect_power(bv) for _, bv in pairs]
    if len({base for base, _ in apow}) == 1 and len({base for base, _ in bpow}) == 1:
        abase = apow[0][0]
        bbase = bpow[0][0]
        n = tuple(e for _, e in apow)
        mvec = tuple(e for _, e in bpow)
        if all(mvec[k] * n[0] == mvec[0] * n[k] for k in range(len(pairs))):
            g = math.gcd(*n)
            if (mvec[0] * g) % n[0] == 0:
                m_combined = mvec[0] * g // n[0]
                t_val = (m_combined / g) * math.log(bbase) / math.log(abase)
                return CommonBaseWitness(a=abase, b=bbase, n=n, m=mvec, g=g,
                                         m_combined=m_combined, t=t_val)
    return None


_STATUS_NOT_EQUIVALENT = "NotEquivalent"
_STATUS_TRIVIAL = "EquivalentTrivially"
_STATUS_NUMERIC_ONLY = "EquivalentNumericOnly"

_FOUR_EXP_NOTE = ("equivalent integer dilation pair without an explicit integer-power "
                  "witness; conditionally on the four exponentials conjecture this "
                  "combination should not occur")


@dataclass(frozen=True)
class MraReport:
    status: str
    lattice_ok: tuple[bool, bool]
    verdict: EquivalenceVerdict | None
    witness: object | None
    reason: str | None = None
    note: str | None = None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "lattice_ok": list(self.lattice_ok),
            "verdict": None if self.verdict is None else self.verdict.to_json(),
            "witness": None if self.witness is None else self.witness.to_json(),
            "reason": self.reason,
            "note": self.note,
        }


def mra_equivalence_report(a1: SymMatrix, a2: SymMatrix) -> MraReport:
    """Combined report: lattice checks, the equivalence verdict, and any witness.

    Equivalent integer-lattice pairs whose spectra are integral but admit no
    explicit witness are flagged: granting the four exponentials conjecture,
    that situation cannot arise.
    """
    lattice_ok = (check_lattice_condition(a1), check_lattice_condition(a2))
    try:
        verdict = decide_equivalence(a1, a2)
    except DensilabError as e:
        return MraReport(status=_STATUS_NOT_EQUIVALENT, lattice_ok=lattice_ok,
                         verdict=None, witness=None,
                         reason=f"degenerate input: {e.code}: {e}")
    if not verdict.equivalent:
        reason = (verdict.obstruction.kind if verdict.obstruction is not None
                  else "exponent comparison failed")
        return MraReport(status=_STATUS_NOT_EQUIVALENT, lattice_ok=lattice_ok,
                         verdict=verdict, witness=None, reason=reason)
    witness = None
    note = None
    if all(lattice_ok):
        try:
            witness = trivially_equivalent(a1, a2, verdict.exponent)
            if witness is None:
                note = _FOUR_EXP_NOTE
        except PreconditionViolated:
            note = ("spectra are not integral, outside the integer-power "
                    "classification of witnesses")
    if witness is not None:
        return MraReport(status=_STATUS_TRIVIAL, lattice_ok=lattice_ok,
                         verdict=verdict, witness=witness)
    return MraReport(status=_STATUS_NUMERIC_ONLY, lattice_ok=lattice_ok,
                     verdict=verdict, witness=None, note=note)


def dyadic_class(a: SymMatrix) -> bool:
    """True iff the absolutized map is a scalar c I (all |eigenvalues| equal)."""
    if not is_expansive(a):
        raise NotExpansive("dyadic classification needs an expansive matrix")
    spec = exact_integer_spectrum(a)
    if spec is not None:
        return len({abs(v) for v, _ in spec}) == 1
    dec = decompose(absolutize(a))
    return len(dec.multiplicities) == 1


# --------------------------------------------------------------------------
# exhaustive scans

def enumerate_expanding(entry_bound: int, dets=None):
    """All expanding integer 2x2 matrices with |entries| <= entry_bound."""
    if entry_bound < 0:
        raise BadParameter("entry bound must be nonnegative")
    wanted = None if dets is None else set(dets)
    rng = range(-entry_bound, entry_bound + 1)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    m = IntMatrix2(a, b, c, d)
                    if wanted is not None and m.det not in wanted:
                        continue
                    if is_expanding(m):
                        yield m


def scan_classification(entry_bound: int, dets=(-2, 2), search_bound: int = 10,
                        l_max: int = 12) -> list[dict]:
    """Classify every expanding matrix in the entry box; rows are CSV-ready dicts."""
    rows = []
    for m in enumerate_expanding(entry_bound, dets=dets):
        cls = classify_det2(m, search_bound=search_bound)
        root = minimal_root_of_identity(m, l_max=l_max)
        rows.append({
            "entries": f"{m.a} {m.b} {m.c} {m.d}",
            "det": m.det,
            "trace": m.trace,
            "class": cls.similarity_class,
            "conjugator": "" if cls.conjugator is None else
            f"{cls.conjugator.a} {cls.conjugator.b} {cls.conjugator.c} {cls.conjugator.d}",
            "l": "" if root is None else root[0],
            "n": "" if root is None else root[1],
        })
    return rows


def scan_to_csv(rows: list[dict]) -> str:
    header = ["entries", "det", "trace", "class", "conjugator", "l", "n"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(row[k]) for k in header))
    return "\n".join(lines) + "\n"
