"""Exact integer and rational helpers.

Factorization, perfect powers, integer matrix arithmetic, characteristic
polynomials and Sturm root counting.  Everything in this module is exact:
Python ints and fractions only, no floating point.
"""
from __future__ import annotations

import math
from fractions import Fraction


# --------------------------------------------------------------------------
# integer roots

def iroot(n: int, k: int) -> tuple[int, bool]:
    """Largest r with r**k <= n and whether r**k == n exactly (n >= 0, k >= 1)."""
    if n < 0 or k < 1:
        raise ValueError("iroot requires n >= 0 and k >= 1")
    if k == 1 or n in (0, 1):
        return n, True
    if k == 2:
        r = math.isqrt(n)
        return r, r * r == n
    r = round(n ** (1.0 / k))
    while r > 0 and r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r, r**k == n


# --------------------------------------------------------------------------
# primality and factorization: trial division wheel, then Pollard rho

_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin for all n < 3.3e24 with these bases
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of odd composite n (Brent's cycle variant)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed on {n}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 7
    i = 0
    while p * p <= n and p < 1 << 20:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += _WHEEL[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return out


def perfect_power(a: int) -> tuple[int, int]:
    """Primitive base and maximal exponent: a == base**nu with nu maximal (a >= 2)."""
    if a < 2:
        raise ValueError("perfect_power requires a >= 2")
    fac = factorize(a)
    nu = 0
    for e in fac.values():
        nu = math.gcd(nu, e)
    base = 1
    for p, e in fac.items():
        base *= p ** (e // nu)
    return base, nu


def multiplicative_dependence(a: int, b: int) -> tuple[int, int, int] | None:
    """Common base (c, p, q) with a == c**p and b == c**q, or None.

    Present exactly when log a and log b are rationally dependent.
    """
    if a < 2 or b < 2:
        raise ValueError("multiplicative_dependence requires a, b >= 2")
    ca, pa = perfect_power(a)
    cb, pb = perfect_power(b)
    if ca != cb:
        return None
    return ca, pa, pb


# --------------------------------------------------------------------------
# integer matrices (general dimension, list-of-lists)

def mat_mul_int(x: list[list[int]], y: list[list[int]]) -> list[list[int]]:
    n = len(x)
    m = len(y[0])
    k = len(y)
    return [[sum(x[i][t] * y[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_identity_int(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def det_int(rows: list[list[int]]) -> int:
    """Exact determinant via fraction-free Bareiss elimination."""
    n = len(rows)
    a = [[int(x) for x in r] for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def char_poly_int(rows: list[list[int]]) -> list[int]:
    """Monic characteristic polynomial coefficients [1, c1, ..., cd].

    Faddeev-LeVerrier iteration; all divisions are exact.
    """
    d = len(rows)
    a = [[int(x) for x in r] for r in rows]
    coeffs = [1]
    mk = [row[:] for row in a]
    for k in range(1, d + 1):
        tr = sum(mk[i][i] for i in range(d))
        if tr % k != 0:
            raise ArithmeticError("non-integer trace division in char poly")
        ck = -(tr // k)
        coeffs.append(ck)
        if k < d:
            for i in range(d):
                mk[i][i] += ck
            mk = mat_mul_int(a, mk)
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    fac = factorize(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def _poly_eval_int(coeffs: list[int], x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _synthetic_div(coeffs: list[int], r: int) -> list[int]:
    out = [coeffs[0]]
    for c in coeffs[1:-1]:
        out.append(c + out[-1] * r)
    return out


def integer_spectrum(rows: list[list[int]], max_const: int = 10**12) -> list[tuple[int, int]] | None:
    """All eigenvalues as (value, multiplicity) if the spectrum is integral, else None.

    d == 1 and d == 2 use the quadratic formula with exact discriminant tests;
    larger d searches integer roots of the characteristic polynomial among
    divisors of its constant term.
    """
    d = len(rows)
    if d == 1:
        return [(int(rows[0][0]), 1)]
    if d == 2:
        s = int(rows[0][0]) + int(rows[1][1])
        p = int(rows[0][0]) * int(rows[1][1]) - int(rows[0][1]) * int(rows[1][0])
        disc = s * s - 4 * p
        if disc < 0:
            return None
        sq, exact = iroot(disc, 2)
        if not exact or (s + sq) % 2 != 0:
            return None
        lo, hi = (s - sq) // 2, (s + sq) // 2
        return [(lo, 2)] if lo == hi else [(lo, 1), (hi, 1)]
    poly = char_poly_int(rows)
    roots: dict[int, int] = {}
    while len(poly) > 1:
        c0 = poly[-1]
        if c0 == 0:
            roots[0] = roots.get(0, 0) + 1
            poly = poly[:-1]
            continue
        if abs(c0) > max_const:
            return None
        found = None
        for base in _divisors(c0):
            for r in (base, -base):
                if _poly_eval_int(poly, r) == 0:
                    found = r
                    break
            if found is not None:
                break
        if found is None:
            return None
        roots[found] = roots.get(found, 0) + 1
        poly = _synthetic_div(poly, found)
    return sorted(roots.items())


# --------------------------------------------------------------------------
# Sturm chains over the rationals (exact real-root counting)

def _fpoly(coeffs) -> list[Fraction]:
    out = [Fraction(c) for c in coeffs]
    while len(out) > 1 and out[0] == 0:
        out.pop(0)
    return out


def _fpoly_eval(p: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _fpoly_deriv(p: list[Fraction]) -> list[Fraction]:
    n = len(p) - 1
    if n == 0:
        return [Fraction(0)]
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def _fpoly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    r = a[:]
    while len(r) >= len(b):
        if r[0] == 0:
            r.pop(0)
            continue
        f = r[0] / b[0]
        for i, c in enumerate(b):
            r[i] -= f * c
        r.pop(0)  # leading coefficient is now exactly zero
    while len(r) > 1 and r[0] == 0:
        r.pop(0)
    return r if r else [Fraction(0)]


def _fpoly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while not (len(b) == 1 and b[0] == 0):
        a, b = b, _fpoly_rem(a, b)
    return a


def _fpoly_div_exact(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    q: list[Fraction] = []
    r = a[:]
    while len(r) >= len(b) and not (len(r) == 1 and r[0] == 0):
        f = r[0] / b[0]
        q.append(f)
        for i, c in enumerate(b):
            r[i] -= f * c
        r.pop(0)
    return q if q else [Fraction(0)]


def _sturm_chain(p: list[Fraction]) -> list[list[Fraction]]:
    g = _fpoly_gcd(p, _fpoly_deriv(p))
    if len(g) > 1:
        p = _fpoly_div_exact(p, g)  # square-free part
    chain = [p, _fpoly_deriv(p)]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        nxt = [-c for c in _fpoly_rem(chain[-2], chain[-1])]
        if len(nxt) == 1 and nxt[0] == 0:
            break
        chain.append(nxt)
    return chain


def _variations(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = _fpoly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots_in(coeffs, lo, hi) -> int:
    """Number of distinct real roots of the polynomial in the half-open (lo, hi]."""
    p = _fpoly(coeffs)
    if len(p) == 1:
        return 0
    lo = Fraction(lo)
    hi = Fraction(hi)
    if lo >= hi:
        return 0
    chain = _sturm_chain(p)
    return _variations(chain, lo) - _variations(chain, hi)


def cauchy_root_bound(coeffs) -> Fraction:
    """B with every real root of the monic-normalized polynomial inside (-B, B)."""
    p = _fpoly(coeffs)
    lead = p[0]
    return 1 + max((abs(c / lead) for c in p[1:]), default=Fraction(0))
