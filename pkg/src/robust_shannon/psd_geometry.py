"""Bures-Wasserstein geometry on the cone of positive semidefinite matrices.

Distances, optimal transport maps, geodesics, metric projection onto balls,
and in-ball random sampling, all specialized to covariance matrices of
centered Gaussians. The squared distance between covariances ``a`` and ``b``
is ``tr(a) + tr(b) - 2 tr((a^{1/2} b a^{1/2})^{1/2})``; combined with a mean
shift it equals the Wasserstein-2 distance between the Gaussian laws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularCenter

# Relative floor below which negative eigenvalues are treated as round-off
# and clamped to zero at construction.
PSD_TOL = 1e-10

# Relative negative-radicand band tolerated (and clamped) in the distance.
BW_RADICAND_TOL = 1e-9


def _symmetrize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


@dataclass(frozen=True, eq=False)
class SpdMatrix:
    """Dense symmetric positive semidefinite matrix.

    Entries are symmetrized exactly on construction. Eigenvalues below
    ``-PSD_TOL * max(1, largest eigenvalue)`` are rejected; smaller negative
    round-off is clamped to zero and the entries rebuilt. The descending
    eigendecomposition is computed once and kept with the instance.
    """

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError("entries must be a nonempty square matrix")
        if not np.all(np.isfinite(a)):
            raise ValueError("entries must be finite")
        a = _symmetrize(a)
        w, v = np.linalg.eigh(a)
        if w[0] < -PSD_TOL * max(1.0, float(w[-1])):
            raise ValueError(
                f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})"
            )
        if w[0] < 0.0:
            w = np.maximum(w, 0.0)
            a = _symmetrize(v @ np.diag(w) @ v.T)
        vals = np.maximum(w[::-1], 0.0).copy()
        vecs = v[:, ::-1].copy()
        for arr in (a, vals, vecs):
            arr.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "_eigvals", vals)
        object.__setattr__(self, "_eigvecs", vecs)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries))

    @classmethod
    def identity(cls, dim: int) -> "SpdMatrix":
        return cls(np.eye(dim))

    @classmethod
    def from_diag(cls, values) -> "SpdMatrix":
        return cls(np.diag(np.asarray(values, dtype=float)))


@dataclass(frozen=True, eq=False)
class GaussianLaw:
    """Gaussian distribution given by a mean vector and an SPD covariance."""

    mean: np.ndarray
    cov: SpdMatrix

    def __post_init__(self):
        m = np.array(self.mean, dtype=float).reshape(-1)
        if m.shape[0] != self.cov.dim:
            raise ValueError("mean and covariance dimensions do not match")
        if not np.all(np.isfinite(m)):
            raise ValueError("mean must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "mean", m)

    @property
    def dim(self) -> int:
        return self.cov.dim


@dataclass(frozen=True, eq=False)
class BwBall:
    """Ambiguity ball: all PSD matrices within ``radius`` of ``center``.

    The radius carries the units of the data (standard-deviation scale).
    """

    center: SpdMatrix
    radius: float

    def __post_init__(self):
        r = float(self.radius)
        if not (r >= 0.0 and math.isfinite(r)):
            raise ValueError("radius must be a finite nonnegative real")
        object.__setattr__(self, "radius", r)


def symmetric_eig(m: SpdMatrix):
    """Descending eigenvalues (clamped >= 0) and orthonormal eigenvectors."""
    return m._eigvals.copy(), m._eigvecs.copy()


def _sqrt_entries(m: SpdMatrix) -> np.ndarray:
    w, v = m._eigvals, m._eigvecs
    return _symmetrize((v * np.sqrt(w)) @ v.T)


def matrix_sqrt(m: SpdMatrix) -> SpdMatrix:
    """Unique PSD square root, via the eigendecomposition."""
    return SpdMatrix(_sqrt_entries(m))


def bw_distance(a: SpdMatrix, b: SpdMatrix) -> float:
    """Bures-Wasserstein distance between two PSD matrices.

    Symmetric, zero iff the arguments coincide. Tiny negative radicands from
    round-off are clamped; a radicand below ``-BW_RADICAND_TOL * (tr a + tr b)``
    signals numerical failure and raises.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    s = _sqrt_entries(a)
    cross = np.linalg.eigvalsh(_symmetrize(s @ b.entries @ s))
    fidelity = np.sqrt(np.maximum(cross, 0.0)).sum()
    radicand = a.trace + b.trace - 2.0 * fidelity
    band = BW_RADICAND_TOL * (a.trace + b.trace)
    if radicand < -band:
        raise ValueError(f"distance radicand {radicand:.3e} below tolerance band")
    return math.sqrt(max(radicand, 0.0))


def gaussian_w2(p: GaussianLaw, q: GaussianLaw) -> float:
    """Wasserstein-2 distance between two Gaussian laws.

    Combines the covariance distance with the mean shift; for Gaussians this
    closed form is exact (it lower-bounds the distance for general laws with
    the same first two moments).
    """
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    return math.hypot(bw_distance(p.cov, q.cov), float(np.linalg.norm(p.mean - q.mean)))


def _ensure_positive_definite(m: SpdMatrix):
    """Return (matrix, jitter) with the matrix strictly PD.

    When the smallest eigenvalue falls below ``1e-12 * tr(m)/d``, jitter of
    that size is added to the diagonal. A matrix with zero trace cannot be
    repaired and raises SingularCenter. The jitter perturbs distances by
    O(sqrt(jitter)).
    """
    if m.trace <= 0.0:
        raise SingularCenter("matrix has zero trace; cannot regularize")
    threshold = 1e-12 * m.trace / m.dim
    smallest = float(m._eigvals[-1])
    if smallest >= threshold:
        return m, 0.0
    return SpdMatrix(m.entries + threshold * np.eye(m.dim)), threshold


def transport_map(source: SpdMatrix, target: SpdMatrix) -> np.ndarray:
    """Optimal Gaussian transport map T with T source T^T == target.

    ``T = source^{-1/2} (source^{1/2} target source^{1/2})^{1/2} source^{-1/2}``,
    symmetric PSD. The source is jittered if needed; a source that stays
    singular raises SingularCenter.
    """
    if source.dim != target.dim:
        raise ValueError(f"dimension mismatch: {source.dim} vs {target.dim}")
    src, _ = _ensure_positive_definite(source)
    w, v = src._eigvals, src._eigvecs
    half = (v * np.sqrt(w)) @ v.T
    inv_half = (v / np.sqrt(w)) @ v.T
    inner = SpdMatrix(half @ target.entries @ half)
    return _symmetrize(inv_half @ _sqrt_entries(inner) @ inv_half)


def bw_geodesic_point(center: SpdMatrix, target: SpdMatrix, t: float) -> SpdMatrix:
    """Point at parameter t on the geodesic from center to target.

    Distance from the center grows linearly in t. Endpoints are returned
    exactly; the center must be (regularizably) positive definite.
    """
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    if t == 0.0:
        return center
    if t == 1.0:
        return target
    mix = (1.0 - t) * np.eye(center.dim) + t * transport_map(center, target)
    return SpdMatrix(mix @ center.entries @ mix.T)


def bw_ball_project(ball: BwBall, m: SpdMatrix) -> SpdMatrix:
    """Metric projection of m onto the ball: geodesic retraction to the boundary."""
    dist = bw_distance(ball.center, m)
    if dist <= ball.radius:
        return m
    return bw_geodesic_point(ball.center, m, ball.radius / dist)


def random_psd_in_ball(ball: BwBall, seed: int) -> SpdMatrix:
    """Random PSD matrix within the ball, deterministic per seed.

    Uses numpy's PCG64 generator (normals via the ziggurat method). A radius
    fraction t is drawn uniformly on [0, 1), a direction comes from a random
    Wishart-type target inflated until it lies beyond the requested distance,
    and the draw is the geodesic point at distance ``t * radius``. Covers the
    interior and approaches the boundary.
    """
    if ball.radius == 0.0:
        return ball.center
    rng = np.random.default_rng(seed)
    t = float(rng.uniform())
    g = rng.standard_normal((ball.center.dim, ball.center.dim))
    rho = t * ball.radius
    if rho == 0.0:
        return ball.center
    wishart = g @ g.T
    # Inflate so the target sits beyond rho: BW(c, beta*w) >= sqrt(beta tr w) - sqrt(tr c).
    beta = 4.0 * (rho + math.sqrt(ball.center.trace)) ** 2 / max(float(np.trace(wishart)), 1e-300)
    target = SpdMatrix(beta * wishart)
    dist = bw_distance(ball.center, target)
    return bw_geodesic_point(ball.center, target, rho / dist)
