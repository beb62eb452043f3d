"""Density ratios of a set seen through the inverse powers of an expansive map.

The central quantity is |E ∩ A^{-j}K| / |A^{-j}K| for a window K around the
origin.  Because x is uniform in A^{-j}K exactly when y = A^j x is uniform in
K, the sampler draws y in K and tests A^{-j} y ∈ E; the ratio for the blown-up
set A^j E over K is the same number.  Estimates are deterministic for a fixed
seed: a counter-based generator is keyed by (seed, j, batch) and batch counts
are accumulated with order-independent integer sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, DegenerateWindow, NotExpansive, NotInvariant
from .spectral import SymMatrix, decompose, is_expansive

DEFAULT_SAMPLES = 1_000_000
DEFAULT_J_RANGE = range(0, 9)
_BATCH = 1 << 16
_MASK32 = (1 << 32) - 1
_MASK64 = (1 << 64) - 1

CONVERGES_TO_ONE = "ConvergesToOne"
CONVERGES_TO_ZERO = "ConvergesToZero"
OTHER = "Other"


# --------------------------------------------------------------------------
# regions

@dataclass(frozen=True)
class Region:
    """A measurable subset of R^d given by a vectorized membership predicate.

    ``spec`` is a JSON-able descriptor; ``box_halfwidth`` is an h with the
    region contained in [-h, h]^d when the region is bounded.
    """

    dim: int
    spec: dict
    box_halfwidth: float | None
    _member: object = field(repr=False, compare=False)

    def contains(self, points):
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        pts = np.atleast_2d(pts)
        if pts.shape[1] != self.dim:
            raise BadParameter(f"points have dimension {pts.shape[1]}, region has {self.dim}")
        out = self._member(pts)
        return bool(out[0]) if single else out


def _check_dim(dim: int) -> int:
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise BadParameter("dimension must be a positive integer")
    return int(dim)


def _basis_or_raise(vectors, dim: int | None = None) -> np.ndarray:
    b = np.asarray(vectors, dtype=float)
    if b.ndim == 1:
        b = b[:, None]
    if b.ndim != 2 or b.shape[1] < 1:
        raise BadParameter("subspace basis must be a (d, m) array of column vectors")
    if dim is not None and b.shape[0] != dim:
        raise BadParameter("subspace basis dimension mismatch")
    gram = b.T @ b
    if np.linalg.norm(gram - np.eye(b.shape[1])) > 1e-9:
        raise BadParameter("subspace basis must be orthonormal")
    return b


def subspace_basis(vectors) -> np.ndarray:
    """Orthonormalize spanning column vectors (QR with a rank check)."""
    v = np.asarray(vectors, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    q, r = np.linalg.qr(v)
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-12 * max(1.0, np.linalg.norm(v))))
    if rank < v.shape[1]:
        raise BadParameter("spanning vectors are linearly dependent")
    for j in range(q.shape[1]):
        k = int(np.argmax(np.abs(q[:, j])))
        if q[k, j] < 0:
            q[:, j] = -q[:, j]
    return q


def complement_basis(basis: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(basis) in R^dim."""
    if basis.size == 0:
        return np.eye(dim)
    u, _, _ = np.linalg.svd(basis, full_matrices=True)
    comp = u[:, basis.shape[1]:]
    for j in range(comp.shape[1]):
        k = int(np.argmax(np.abs(comp[:, j])))
        if comp[k, j] < 0:
            comp[:, j] = -comp[:, j]
    return comp


def ball(dim: int, r: float) -> Region:
    """Open Euclidean ball {|x| < r}."""
    dim = _check_dim(dim)
    if not r > 0:
        raise BadParameter("ball radius must be positive")
    r2 = float(r) * float(r)
    return Region(dim, {"kind": "ball", "dim": dim, "r": float(r)}, float(r),
                  lambda p: np.einsum("ij,ij->i", p, p) < r2)


def cube(dim: int, r: float) -> Region:
    """Open sup-norm cube {max_i |x_i| < r}."""
    dim = _check_dim(dim)
    if not r > 0:
        raise BadParameter("cube half-width must be positive")
    rr = float(r)
    return Region(dim, {"kind": "cube", "dim": dim, "r": rr}, rr,
                  lambda p: np.max(np.abs(p), axis=1) < rr)


def ealpha(alpha: float, i: int = 0, l: int = 1, dim: int = 2) -> Region:
    """Power-law envelope set {|x_l| >= |x_i|^alpha}."""
    dim = _check_dim(dim)
    if not alpha > 0:
        raise BadParameter("alpha must be positive")
    if not (0 <= i < dim and 0 <= l < dim and i != l):
        raise BadParameter("coordinate indices must be distinct and inside the dimension")
    a = float(alpha)
    return Region(dim, {"kind": "ealpha", "dim": dim, "alpha": a, "i": int(i), "l": int(l)},
                  None, lambda p: np.abs(p[:, l]) >= np.abs(p[:, i]) ** a)


def gdelta(delta: float, u_basis, dim: int | None = None) -> Region:
    """Wedge around a subspace: {x : |z| < delta * |y|}, y the projection onto U."""
    if not delta > 0:
        raise BadParameter("delta must be positive")
    b = _basis_or_raise(u_basis, dim)
    d = b.shape[0]
    d2 = float(delta) ** 2

    def member(p):
        y2 = np.einsum("ij,ij->i", p @ b, p @ b)
        z2 = np.einsum("ij,ij->i", p, p) - y2
        return z2 < d2 * y2

    return Region(d, {"kind": "gdelta", "dim": d, "delta": float(delta),
                      "u": [list(map(float, col)) for col in b.T]}, None, member)


def fdelta(delta: float, u_basis, v_basis, dim: int | None = None) -> Region:
    """{x : |v| < delta * |u|} with u, v the projections onto two orthogonal subspaces."""
    if not delta > 0:
        raise BadParameter("delta must be positive")
    bu = _basis_or_raise(u_basis, dim)
    bv = _basis_or_raise(v_basis, bu.shape[0])
    if np.linalg.norm(bu.T @ bv) > 1e-9:
        raise BadParameter("the two subspaces must be orthogonal")
    d = bu.shape[0]
    d2 = float(delta) ** 2

    def member(p):
        u2 = np.einsum("ij,ij->i", p @ bu, p @ bu)
        v2 = np.einsum("ij,ij->i", p @ bv, p @ bv)
        return v2 < d2 * u2

    return Region(d, {"kind": "fdelta", "dim": d, "delta": float(delta),
                      "u": [list(map(float, col)) for col in bu.T],
                      "v": [list(map(float, col)) for col in bv.T]}, None, member)


def cone(u_basis, kappa: float, dim: int | None = None) -> Region:
    """Closed cone {x : |x - P_U x| <= kappa * |P_U x|} around the subspace U."""
    if not 0 < kappa < 1:
        raise BadParameter("kappa must lie in (0, 1)")
    b = _basis_or_raise(u_basis, dim)
    d = b.shape[0]
    k2 = float(kappa) ** 2

    def member(p):
        u2 = np.einsum("ij,ij->i", p @ b, p @ b)
        w2 = np.einsum("ij,ij->i", p, p) - u2
        return w2 <= k2 * u2

    return Region(d, {"kind": "cone", "dim": d, "kappa": float(kappa),
                      "u": [list(map(float, col)) for col in b.T]}, None, member)


def cylinder(base: Region, axis_basis, dim: int) -> Region:
    """E = Y + F: membership depends only on the component orthogonal to the axis Y.

    ``base`` lives in the coordinates of the complement basis returned by
    ``complement_basis(axis)``; that convention is shared with cylinder_reduce.
    """
    dim = _check_dim(dim)
    axis = np.asarray(axis_basis, dtype=float)
    if axis.size == 0:
        axis = np.zeros((dim, 0))
    if axis.ndim == 1:
        axis = axis[:, None]
    if axis.shape[1] > 0:
        axis = _basis_or_raise(axis, dim)
    bperp = complement_basis(axis, dim)
    if base.dim != bperp.shape[1]:
        raise BadParameter(f"base region dimension {base.dim} != codimension {bperp.shape[1]}")
    return Region(dim, {"kind": "cylinder", "dim": dim, "base": base.spec,
                        "axis": [list(map(float, col)) for col in axis.T]},
                  None, lambda p: base.contains(p @ bperp))


def complement(region: Region) -> Region:
    return Region(region.dim, {"kind": "complement", "dim": region.dim, "inner": region.spec},
                  None, lambda p: ~region.contains(p))


def translate(region: Region, x0) -> Region:
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (region.dim,):
        raise BadParameter("translation vector has the wrong dimension")
    hw = None
    if region.box_halfwidth is not None:
        hw = region.box_halfwidth + float(np.max(np.abs(x0)))
    return Region(region.dim, {"kind": "translate", "dim": region.dim,
                               "x0": [float(v) for v in x0], "inner": region.spec},
                  hw, lambda p: region.contains(p - x0))


def all_space(dim: int) -> Region:
    dim = _check_dim(dim)
    return Region(dim, {"kind": "all", "dim": dim}, None,
                  lambda p: np.ones(p.shape[0], dtype=bool))


def custom_region(dim: int, member, name: str = "custom",
                  box_halfwidth: float | None = None) -> Region:
    dim = _check_dim(dim)
    return Region(dim, {"kind": "custom", "dim": dim, "name": name}, box_halfwidth, member)


def _vectors_from_json(obj) -> np.ndarray:
    return np.asarray(obj, dtype=float).T  # stored as a list of vectors


def make_region(spec: dict) -> Region:
    """Build a region from its JSON descriptor."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise BadParameter('region descriptor must be a dict with a "kind"')
    kind = spec["kind"]
    try:
        if kind == "ball":
            return ball(spec["dim"], spec["r"])
        if kind == "cube":
            return cube(spec["dim"], spec["r"])
        if kind == "ealpha":
            return ealpha(spec["alpha"], spec.get("i", 0), spec.get("l", 1), spec.get("dim", 2))
        if kind == "gdelta":
            return gdelta(spec["delta"], _vectors_from_json(spec["u"]), spec.get("dim"))
        if kind == "fdelta":
            return fdelta(spec["delta"], _vectors_from_json(spec["u"]),
                          _vectors_from_json(spec["v"]))
        if kind == "cone":
            return cone(_vectors_from_json(spec["u"]), spec["kappa"], spec.get("dim"))
        if kind == "cylinder":
            axis = np.asarray(spec["axis"], dtype=float)
            axis = axis.T if axis.size else np.zeros((spec["dim"], 0))
            return cylinder(make_region(spec["base"]), axis, spec["dim"])
        if kind == "complement":
            return complement(make_region(spec["inner"]))
        if kind == "translate":
            return translate(make_region(spec["inner"]), spec["x0"])
        if kind == "all":
            return all_space(spec["dim"])
    except KeyError as e:
        raise BadParameter(f"region descriptor is missing {e}") from e
    raise BadParameter(f"unknown region kind {kind!r}")


# --------------------------------------------------------------------------
# maps

def _map_to_array(map_) -> np.ndarray:
    if isinstance(map_, SymMatrix):
        return np.asarray(map_.entries, dtype=float)
    arr = np.asarray(map_, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise BadParameter("the map must be a square matrix")
    return arr


def _require_expansive(map_) -> np.ndarray:
    if isinstance(map_, SymMatrix):
        if not is_expansive(map_):
            raise NotExpansive("the map must have all |eigenvalues| > 1")
        return np.asarray(map_.entries, dtype=float)
    arr = _map_to_array(map_)
    vals = np.linalg.eigvals(arr)
    if not np.min(np.abs(vals)) > 1.0:
        raise NotExpansive("the map must have all |eigenvalues| > 1")
    return arr


def inverse_power(map_, j: int) -> np.ndarray:
    """A^{-j} for j >= 0; symmetric maps go through the spectral calculus."""
    if j < 0:
        raise BadParameter("j must be a nonnegative integer")
    if isinstance(map_, SymMatrix):
        dec = decompose(map_)
        return (dec.basis * dec.eigenvalues ** (-float(j))) @ dec.basis.T
    arr = _map_to_array(map_)
    return np.linalg.matrix_power(np.linalg.inv(arr), j)


# --------------------------------------------------------------------------
# estimates

@dataclass(frozen=True)
class DensityEstimate:
    j: int
    ratio: float
    stderr: float
    samples: int

    def to_json(self) -> dict:
        return {"j": self.j, "ratio": self.ratio, "stderr": self.stderr,
                "samples": self.samples}


@dataclass(frozen=True)
class DensitySeries:
    estimates: tuple[DensityEstimate, ...]
    classification: str
    note: str

    def to_csv(self) -> str:
        lines = ["j,ratio,stderr,samples"]
        for e in self.estimates:
            lines.append(f"{e.j},{e.ratio:.17g},{e.stderr:.17g},{e.samples}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"series": [e.to_json() for e in self.estimates],
                "classification": self.classification, "note": self.note}


def _philox(seed: int, j: int, batch: int) -> np.random.Generator:
    key = ((seed & _MASK64) << 64) | ((j & _MASK32) << 32) | (batch & _MASK32)
    return np.random.Generator(np.random.Philox(key=key))


def density_ratio(region: Region, map_, j: int, window: Region | None = None,
                  samples: int = DEFAULT_SAMPLES, seed: int = 0) -> DensityEstimate:
    """Monte Carlo estimate of |E ∩ A^{-j}K| / |A^{-j}K|.

    Proposals are drawn uniformly from the bounding cube of K in fixed-size
    batches; points landing in K are mapped through A^{-j} and tested against
    E.  ``samples`` counts proposals, the estimate reports accepted points.
    """
    if not isinstance(j, (int, np.integer)) or j < 0:
        raise BadParameter("j must be a nonnegative integer")
    if samples < 1:
        raise BadParameter("samples must be positive")
    arr = _require_expansive(map_)
    dim = arr.shape[0]
    if region.dim != dim:
        raise BadParameter("region and map dimensions differ")
    if window is None:
        window = cube(dim, 1.0)
    if window.dim != dim:
        raise BadParameter("window and map dimensions differ")
    if window.box_halfwidth is None:
        raise BadParameter("the window must be bounded")
    if not window.contains(np.zeros(dim)):
        raise BadParameter("the window must contain a neighborhood of the origin")
    hw = float(window.box_halfwidth)
    minv_t = inverse_power(map_ if isinstance(map_, SymMatrix) else arr, int(j)).T

    hits = 0
    accepted = 0
    n_batches = (int(samples) + _BATCH - 1) // _BATCH
    for b in range(n_batches):
        n = _BATCH if b < n_batches - 1 else int(samples) - _BATCH * (n_batches - 1)
        rng = _philox(int(seed), int(j), b)
        pts = rng.uniform(-hw, hw, size=(n, dim))
        keep = window.contains(pts)
        acc = pts[keep]
        accepted += int(acc.shape[0])
        if acc.shape[0]:
            hits += int(np.count_nonzero(region.contains(acc @ minv_t)))
    if accepted * 1000 < int(samples):
        raise DegenerateWindow(
            f"window acceptance below 0.1% ({accepted} of {samples} proposals)")
    ratio = hits / accepted
    stderr = math.sqrt(ratio * (1.0 - ratio) / accepted)
    return DensityEstimate(j=int(j), ratio=ratio, stderr=stderr, samples=accepted)


def classify_series(estimates, stderr_mult: float = 3.0,
                    decay_max: float = 0.9) -> tuple[str, str]:
    """Label a ratio series by the trend of its last three points.

    A heuristic, reported as such: the series converges to one (zero) when the
    gaps 1 - r_j (the ratios r_j) shrink geometrically by at least
    ``decay_max`` per step after a ``stderr_mult``-sigma noise allowance, or
    end below the noise floor.
    """
    if len(estimates) < 3:
        return OTHER, "need at least three points to classify"
    last = list(estimates)[-3:]
    floors = [stderr_mult * e.stderr for e in last]

    def shrinks(values) -> bool:
        if values[-1] <= floors[-1]:
            return True
        return all(values[k + 1] <= decay_max * values[k] + floors[k + 1]
                   for k in range(2))

    gaps = [1.0 - e.ratio for e in last]
    if shrinks(gaps):
        return CONVERGES_TO_ONE, (
            f"heuristic: last-3 gap decay <= {decay_max:g} per step "
            f"(noise floor {stderr_mult:g} stderr)")
    vals = [e.ratio for e in last]
    if shrinks(vals):
        return CONVERGES_TO_ZERO, (
            f"heuristic: last-3 ratio decay <= {decay_max:g} per step "
            f"(noise floor {stderr_mult:g} stderr)")
    return OTHER, "heuristic: no geometric trend toward 0 or 1 in the last 3 points"


def density_sweep(region: Region, map_, window: Region | None = None,
                  j_range=None, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                  stderr_mult: float = 3.0, decay_max: float = 0.9) -> DensitySeries:
    """Density estimates over a range of scales plus a trend classification."""
    if j_range is None:
        j_range = DEFAULT_J_RANGE
    js = sorted(int(j) for j in j_range)
    if not js:
        raise BadParameter("j_range must be nonempty")
    estimates = tuple(density_ratio(region, map_, j, window=window,
                                    samples=samples, seed=seed) for j in js)
    label, note = classify_series(estimates, stderr_mult=stderr_mult, decay_max=decay_max)
    return DensitySeries(estimates=estimates, classification=label, note=note)


def exact_ealpha_ratio(lam1: float, lam2: float, alpha: float, j: int,
                       window_r: float = 1.0) -> float:
    """Exact |E^c ∩ A^{-j}Q_r| / |A^{-j}Q_r| for E = {|x2| >= |x1|^alpha}, A = diag(lam1, lam2).

    The complement intersects the box [-a, a] x [-b, b] (a = r lam1^{-j},
    b = r lam2^{-j}) in area 4 * integral_0^a min(x^alpha, b) dx, by symmetry
    in both axes.
    """
    if not (lam1 > 1 and lam2 > 1):
        raise BadParameter("diagonal entries must exceed 1")
    if not alpha > 0:
        raise BadParameter("alpha must be positive")
    if not isinstance(j, (int, np.integer)) or j < 0:
        raise BadParameter("j must be a nonnegative integer")
    if not window_r > 0:
        raise BadParameter("window scale must be positive")
    a = window_r * float(lam1) ** (-int(j))
    b = window_r * float(lam2) ** (-int(j))
    xstar = b ** (1.0 / alpha)
    if xstar >= a:
        # the graph |x2| = |x1|^alpha stays inside the box: single power piece
        return a**alpha / ((alpha + 1.0) * b)
    return 1.0 - (alpha / (alpha + 1.0)) * xstar / a


def cylinder_reduce(region: Region, map_, tol: float = 1e-9):
    """Split a cylinder E = Y + F along an invariant axis.

    Returns ``(F, A_restricted)`` where the restriction acts on the complement
    of the axis in the same coordinates in which F is expressed.  Raises
    NotInvariant when the axis or its complement is not invariant under A.
    """
    if region.spec.get("kind") != "cylinder":
        raise BadParameter("region is not a cylinder")
    arr = _map_to_array(map_)
    dim = region.dim
    if arr.shape[0] != dim:
        raise BadParameter("region and map dimensions differ")
    axis = np.asarray(region.spec["axis"], dtype=float)
    axis = axis.T if axis.size else np.zeros((dim, 0))
    base = make_region(region.spec["base"])
    if axis.shape[1] == 0:
        return base, map_
    bperp = complement_basis(axis, dim)
    scale = max(1.0, float(np.linalg.norm(arr)))
    if np.linalg.norm(bperp.T @ arr @ axis) > tol * scale:
        raise NotInvariant("the cylinder axis is not invariant under the map")
    if np.linalg.norm(axis.T @ arr @ bperp) > tol * scale:
        raise NotInvariant("the complement of the axis is not invariant under the map")
    restricted = bperp.T @ arr @ bperp
    if np.linalg.norm(restricted - restricted.T) <= tol * scale:
        return base, SymMatrix.from_rows((restricted + restricted.T) / 2.0, tol=max(tol, 1e-9))
    return base, restricted
