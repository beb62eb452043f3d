import numpy as np
import pytest


def random_orthogonal(rng, d):
    """Haar-ish orthogonal matrix via QR with the sign fix."""
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    return q * np.sign(np.diag(r))


def random_symmetric(rng, d, scale=1.0):
    m = rng.normal(size=(d, d)) * scale
    return (m + m.T) / 2.0


def random_positive_expansive(rng, d, lo=1.1, hi=5.0):
    """Q diag(lam) Q^T with lam uniform in (lo, hi)."""
    q = random_orthogonal(rng, d)
    lam = rng.uniform(lo, hi, size=d)
    return (q * lam) @ q.T, np.sort(lam)


def random_selfadjoint_expansive(rng, d, lo=1.1, hi=5.0):
    """Like random_positive_expansive but with random eigenvalue signs."""
    q = random_orthogonal(rng, d)
    lam = rng.uniform(lo, hi, size=d) * rng.choice([-1.0, 1.0], size=d)
    return (q * lam) @ q.T, lam


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
