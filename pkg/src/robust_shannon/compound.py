"""Worst-case Shannon limits over Bures-Wasserstein ambiguity balls.

The compound rate-distortion function is the supremum of the Gaussian RDF
over all source covariances within a given distance of a nominal covariance;
the compound capacity is the infimum of the Gaussian channel capacity over
noise covariances in such a ball. Both extrema are attained by Gaussians, so
the problems reduce to optimization on the PSD cone.

Solver strategy: the RDF objective depends on the covariance only through
its spectrum, and among matrices with a fixed spectrum the ball distance is
minimized by the one commuting with the center with descending-aligned
eigenvalues. The supremum is therefore attained in the center's eigenbasis
and reduces to a Euclidean-ball-constrained search over the square roots of
the eigenvalues. Capacity gets the same reduction whenever the channel
shares an eigenbasis with the center (or is a scalar multiple of the
identity); otherwise projected gradient descent with the Danskin envelope
gradient runs in optimal-transport-map coordinates, where the ball is an
exact Euclidean ball and PSD-ness is automatic. Convergence is declared on
value stagnation because the waterfilling objectives carry kinks where the
water level crosses an eigenvalue.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .classical import (
    ChannelMatrix,
    WaterfillAllocation,
    capacity_from_gains,
    gaussian_capacity,
    rdf_from_spectrum,
    reverse_waterfill,
)
from .errors import RobustShannonError, SolverNoConverge
from .psd_geometry import (
    BwBall,
    SpdMatrix,
    _ensure_positive_definite,
    _symmetrize,
    symmetric_eig,
)

VALUE_STAGNATION_TOL = 1e-10
STAGNATION_PATIENCE = 10
MAX_ITERATIONS = 10_000
ARMIJO = 1e-4
MAX_HALVINGS = 60


@dataclass(frozen=True)
class SolverDiagnostics:
    iterations: int
    final_step_norm: float
    converged: bool
    solver_path: str


@dataclass(frozen=True, eq=False)
class CompoundRdfRequest:
    """Worst-case rate-distortion query: ambiguity ball plus distortion budget."""

    ball: BwBall
    distortion: float

    def __post_init__(self):
        if not float(self.distortion) > 0.0:
            raise ValueError(f"distortion must be positive, got {self.distortion}")
        object.__setattr__(self, "distortion", float(self.distortion))


@dataclass(frozen=True, eq=False)
class CompoundCapacityRequest:
    """Worst-case capacity query: noise ambiguity ball, channel, power budget."""

    ball: BwBall
    channel: ChannelMatrix
    power: float

    def __post_init__(self):
        if not float(self.power) >= 0.0:
            raise ValueError(f"power must be nonnegative, got {self.power}")
        if self.channel.dim != self.ball.center.dim:
            raise ValueError("channel and ball center dimensions do not match")
        object.__setattr__(self, "power", float(self.power))


@dataclass(frozen=True, eq=False)
class CompoundResult:
    value_nats: float
    worst_case_cov: SpdMatrix
    inner_allocation: WaterfillAllocation
    diagnostics: SolverDiagnostics


class SweepPoint(NamedTuple):
    r: float
    budget: float
    value_nats: float
    worst_case_trace: float


def compound_rdf_scalar(sigma0: float, r: float, distortion: float) -> float:
    """Closed-form scalar worst-case RDF: half log+ of (sigma0 + r)^2 / D."""
    _check_scalar_domain(sigma0, r)
    if not float(distortion) > 0.0:
        raise ValueError(f"distortion must be positive, got {distortion}")
    return max(0.0, 0.5 * math.log((sigma0 + r) ** 2 / distortion))


def compound_capacity_scalar(sigma0: float, r: float, power: float) -> float:
    """Closed-form scalar worst-case capacity: half log(1 + B / (sigma0 + r)^2)."""
    _check_scalar_domain(sigma0, r)
    if not float(power) >= 0.0:
        raise ValueError(f"power must be nonnegative, got {power}")
    return 0.5 * math.log1p(power / (sigma0 + r) ** 2)


def _check_scalar_domain(sigma0, r):
    if not float(sigma0) > 0.0:
        raise ValueError(f"sigma0 must be positive, got {sigma0}")
    if not float(r) >= 0.0:
        raise ValueError(f"r must be nonnegative, got {r}")


def _project_ball_nonneg(u, s, radius):
    diff = u - s
    norm = float(np.linalg.norm(diff))
    if norm > radius:
        u = s + diff * (radius / norm)
    return np.maximum(u, 0.0)


def _ascend(value_fn, grad_fn, u0, s, radius, label, value_tol):
    """Projected gradient ascent over the nonnegative ball slice around s.

    Backtracking line search (halving, Armijo 1e-4 on the projected step);
    converged once the relative value change stays below tolerance for
    STAGNATION_PATIENCE consecutive iterations.
    """
    u = _project_ball_nonneg(np.asarray(u0, dtype=float), s, radius)
    value = value_fn(u)
    stagnant = 0
    step_norm = 0.0
    for iteration in range(1, MAX_ITERATIONS + 1):
        grad = grad_fn(u)
        improved = False
        alpha = 1.0
        for _ in range(MAX_HALVINGS):
            candidate = _project_ball_nonneg(u + alpha * grad, s, radius)
            if np.array_equal(candidate, u):
                break  # step underflowed: first-order stationary
            ascent = float(grad @ (candidate - u))
            if ascent > 0.0:
                cand_value = value_fn(candidate)
                if cand_value >= value + ARMIJO * ascent:
                    improved = True
                    break
            alpha *= 0.5
        if not improved:
            # The iterate did not move; every further iteration would repeat
            # this line search verbatim, so the stagnation rule is met.
            return u, SolverDiagnostics(iteration, 0.0, True, label)
        step_norm = float(np.linalg.norm(candidate - u))
        rel_change = abs(cand_value - value) / max(1.0, abs(value))
        u, value = candidate, cand_value
        stagnant = stagnant + 1 if rel_change < value_tol else 0
        if stagnant >= STAGNATION_PATIENCE:
            return u, SolverDiagnostics(iteration, step_norm, True, label)
    raise SolverNoConverge(
        f"value did not stagnate within {MAX_ITERATIONS} iterations",
        SolverDiagnostics(MAX_ITERATIONS, step_norm, False, label),
    )


def _rdf_value(u, distortion):
    lam = u * u
    if distortion >= float(lam.sum()):
        return 0.0
    return rdf_from_spectrum(lam, distortion).rate_nats


def _rdf_gradient(u, distortion):
    lam = u * u
    grad = np.zeros_like(u)
    if distortion >= float(lam.sum()):
        return grad
    alloc = rdf_from_spectrum(lam, distortion)
    active = lam > alloc.level
    grad[active] = 1.0 / u[active]
    grad[~active] = u[~active] / alloc.level
    return grad


def compound_rdf(req: CompoundRdfRequest, value_tol: float = VALUE_STAGNATION_TOL) -> CompoundResult:
    """Worst-case rate-distortion over the ambiguity ball, in nats.

    Eigenvalue-space reduction: with s the square roots of the center's
    descending eigenvalues, maximizes the reverse-waterfilled rate over
    nonnegative u with ||u - s|| <= radius, starting from the radial
    inflation of s. The worst-case covariance is assembled in the center's
    eigenbasis.
    """
    ball, distortion = req.ball, req.distortion
    if ball.radius == 0.0:
        alloc = reverse_waterfill(ball.center, distortion)
        diag = SolverDiagnostics(0, 0.0, True, "eigen-reduction")
        return CompoundResult(alloc.rate_nats, ball.center, alloc, diag)
    vals, vecs = symmetric_eig(ball.center)
    s = np.sqrt(vals)
    norm_s = float(np.linalg.norm(s))
    direction = s / norm_s if norm_s > 0.0 else np.full_like(s, 1.0 / math.sqrt(s.size))
    u0 = s + ball.radius * direction
    u_star, diagnostics = _ascend(
        lambda u: _rdf_value(u, distortion),
        lambda u: _rdf_gradient(u, distortion),
        u0,
        s,
        ball.radius,
        "eigen-reduction",
        value_tol,
    )
    worst = SpdMatrix((vecs * (u_star * u_star)) @ vecs.T)
    alloc = reverse_waterfill(worst, distortion)
    return CompoundResult(alloc.rate_nats, worst, alloc, diagnostics)


def _commuting_channel_axes(center: SpdMatrix, h: np.ndarray):
    """Common eigenbasis of the center and the channel, or None.

    Tries the center's eigenvectors first, then (for a symmetric channel)
    the channel's own; the second attempt covers centers with repeated
    eigenvalues. Returns (basis, center stddevs per axis, channel weight
    per axis), paired axis-wise, unsorted.
    """
    _, vecs = symmetric_eig(center)
    mixed = vecs.T @ h @ vecs
    if _is_diagonal(mixed):
        return vecs, np.sqrt(center._eigvals), np.diag(mixed).copy()
    if float(np.abs(h - h.T).max()) <= 1e-10 * max(1.0, float(np.abs(h).max())):
        hvals, hvecs = np.linalg.eigh(_symmetrize(h))
        mixed_center = hvecs.T @ center.entries @ hvecs
        if _is_diagonal(mixed_center):
            axis_vars = np.maximum(np.diag(mixed_center), 0.0)
            return hvecs, np.sqrt(axis_vars), hvals
    return None


def _is_diagonal(m):
    off = m - np.diag(np.diag(m))
    return float(np.abs(off).max()) <= 1e-10 * max(1.0, float(np.abs(m).max()))


def _capacity_value_u(u, hvals, power):
    with np.errstate(divide="ignore"):
        gains = np.where(u > 0.0, (hvals / np.maximum(u, 1e-300)) ** 2, np.inf)
    gains = np.where(hvals == 0.0, 0.0, gains)
    if float(gains.max()) == 0.0:
        return 0.0
    if np.any(np.isinf(gains)) and power > 0.0:
        return math.inf
    return capacity_from_gains(gains, power).rate_nats


def _capacity_gradient_u(u, hvals, power):
    grad = np.zeros_like(u)
    with np.errstate(divide="ignore"):
        gains = np.where(u > 0.0, (hvals / np.maximum(u, 1e-300)) ** 2, np.inf)
    gains = np.where(hvals == 0.0, 0.0, gains)
    if float(gains.max()) == 0.0 or np.any(np.isinf(gains)):
        return grad
    alloc = capacity_from_gains(gains, power)
    active = alloc.per_mode > 0.0
    grad[active] = u[active] / (alloc.level * hvals[active] ** 2) - 1.0 / u[active]
    return grad


class _TransportCoordinates:
    """Noise covariances in a ball, in optimal-transport-map coordinates.

    With the center eigendecomposed as V diag(lam) V^T, a symmetric S
    parametrizes the noise V (S diag(lam) S) V^T, which is PSD for free. The
    squared ball distance to the center is the lam-weighted sum of squared
    entries of S - I, so in the scaled upper-triangle coordinates x the
    feasible set is exactly the Euclidean ball ||x|| <= radius, and the
    projection is a rescale. Every ball point is reached (the optimal map of
    any feasible noise is such an S), and every x in the ball is feasible
    (its map is an admissible coupling, so it can only overestimate the
    distance).
    """

    def __init__(self, center: SpdMatrix, channel: np.ndarray, power: float):
        self.lam, self.basis = symmetric_eig(center)
        d = self.lam.size
        self.rows, self.cols = np.triu_indices(d)
        diag = self.rows == self.cols
        self.scale = np.where(
            diag, np.sqrt(self.lam[self.rows]), np.sqrt(self.lam[self.rows] + self.lam[self.cols])
        )
        self.pack = np.where(diag, 1.0, 2.0)
        self.channel = self.basis.T @ channel @ self.basis
        self.power = power

    def smatrix(self, x: np.ndarray) -> np.ndarray:
        s = np.zeros((self.lam.size, self.lam.size))
        entries = x / self.scale
        s[self.rows, self.cols] = entries
        s[self.cols, self.rows] = entries
        return s + np.eye(self.lam.size)

    def noise(self, x: np.ndarray) -> SpdMatrix:
        s = self.smatrix(x)
        return SpdMatrix(s @ (self.lam[:, None] * s))

    def noise_in_original_basis(self, x: np.ndarray) -> SpdMatrix:
        return SpdMatrix(self.basis @ self.noise(x).entries @ self.basis.T)

    def rate(self, x: np.ndarray) -> float:
        return gaussian_capacity(self.channel, self.noise(x), self.power).rate_nats

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """Danskin envelope gradient pulled back to the x coordinates.

        The covariance gradient is 0.5 ((noise + H Q* H^T)^{-1} - noise^{-1})
        at the inner-optimal input Q*; the chain rule through S diag(lam) S
        gives diag(lam) S G + G S diag(lam) on the symmetric slot.
        """
        s = self.smatrix(x)
        noise, _ = _ensure_positive_definite(self.noise(x))
        result = gaussian_capacity(self.channel, noise, self.power)
        output_cov = noise.entries + self.channel @ result.input_cov.entries @ self.channel.T
        g = 0.5 * (np.linalg.inv(_symmetrize(output_cov)) - np.linalg.inv(noise.entries))
        g = _symmetrize(g)
        m = (self.lam[:, None] * s) @ g + g @ (s * self.lam[None, :])
        return self.pack * m[self.rows, self.cols] / self.scale


def _project_euclidean_ball(x: np.ndarray, radius: float) -> np.ndarray:
    norm = float(np.linalg.norm(x))
    if norm > radius:
        return x * (radius / norm)
    return x


def _descend_noise_matrix(
    ball: BwBall, channel: np.ndarray, power: float, x0: np.ndarray, value_tol: float
):
    """Projected gradient descent on the noise, in transport coordinates."""
    coords = _TransportCoordinates(ball.center, channel, power)
    x = _project_euclidean_ball(np.asarray(x0, dtype=float), ball.radius)
    value = coords.rate(x)
    stagnant = 0
    step_norm = 0.0
    for iteration in range(1, MAX_ITERATIONS + 1):
        grad = coords.gradient(x)
        improved = False
        alpha = 1.0
        for _ in range(MAX_HALVINGS):
            candidate = _project_euclidean_ball(x - alpha * grad, ball.radius)
            if np.array_equal(candidate, x):
                break  # step underflowed: first-order stationary
            descent = float(grad @ (candidate - x))
            if descent < 0.0:
                cand_value = coords.rate(candidate)
                if cand_value <= value + ARMIJO * descent:
                    improved = True
                    break
            alpha *= 0.5
        if not improved:
            # No movement at any step size; further iterations would repeat
            # the same line search, so the stagnation rule is met.
            return coords.noise_in_original_basis(x), SolverDiagnostics(
                iteration, 0.0, True, "projected-gradient"
            )
        step_norm = float(np.linalg.norm(candidate - x))
        rel_change = abs(cand_value - value) / max(1.0, abs(value))
        x, value = candidate, cand_value
        stagnant = stagnant + 1 if rel_change < value_tol else 0
        if stagnant >= STAGNATION_PATIENCE:
            return coords.noise_in_original_basis(x), SolverDiagnostics(
                iteration, step_norm, True, "projected-gradient"
            )
    raise SolverNoConverge(
        f"value did not stagnate within {MAX_ITERATIONS} iterations",
        SolverDiagnostics(MAX_ITERATIONS, step_norm, False, "projected-gradient"),
    )


def compound_capacity(
    req: CompoundCapacityRequest, value_tol: float = VALUE_STAGNATION_TOL
) -> CompoundResult:
    """Worst-case capacity over the noise ambiguity ball, in nats.

    Uses the eigenvalue-space reduction when the channel shares an eigenbasis
    with the center (starting from the center itself); otherwise projected
    gradient descent on the PSD cone. The worst-case noise covariance is
    returned alongside the inner waterfilling at that noise.
    """
    ball, power = req.ball, req.power
    h = req.channel.entries
    if ball.radius == 0.0:
        rate, _, alloc = gaussian_capacity(req.channel, ball.center, power)
        diag = SolverDiagnostics(0, 0.0, True, "eigen-reduction")
        return CompoundResult(rate, ball.center, alloc, diag)
    center_pd, jitter = _ensure_positive_definite(ball.center)
    work_ball = ball if jitter == 0.0 else BwBall(center_pd, ball.radius)
    axes = _commuting_channel_axes(center_pd, h)
    if axes is not None:
        basis, s, hvals = axes
        u_star, diagnostics = _ascend(
            lambda u: -_capacity_value_u(u, hvals, power),
            lambda u: -_capacity_gradient_u(u, hvals, power),
            s.copy(),
            s,
            ball.radius,
            "eigen-reduction",
            value_tol,
        )
        worst = SpdMatrix((basis * (u_star * u_star)) @ basis.T)
    else:
        worst, diagnostics = _descend_from_best_start(work_ball, h, power, value_tol)
    rate, _, alloc = gaussian_capacity(req.channel, worst, power)
    return CompoundResult(rate, worst, alloc, diagnostics)


def _descend_from_best_start(ball: BwBall, h: np.ndarray, power: float, value_tol: float):
    """Run the matrix descent from the center and from the max-trace boundary
    point, keeping whichever run ends lower (the landscape is not known to be
    geodesically convex for a non-commuting channel)."""
    lam, _ = symmetric_eig(ball.center)
    n_coords = lam.size * (lam.size + 1) // 2
    center_start = np.zeros(n_coords)
    # S = (1 + a) I with a = radius / sqrt(tr) is the max-trace boundary point.
    radial_start = np.zeros(n_coords)
    rows, cols = np.triu_indices(lam.size)
    radial_start[rows == cols] = np.sqrt(lam) * (ball.radius / math.sqrt(float(lam.sum())))
    best = None
    total_iterations = 0
    for x0 in (center_start, radial_start):
        noise, diag = _descend_noise_matrix(ball, h, power, x0, value_tol)
        value = gaussian_capacity(h, noise, power).rate_nats
        total_iterations += diag.iterations
        if best is None or value < best[0]:
            best = (value, noise, diag)
    _, noise, diag = best
    return noise, SolverDiagnostics(
        total_iterations, diag.final_step_norm, diag.converged, diag.solver_path
    )


def sweep_compound(
    kind: str,
    base,
    grid: Sequence[tuple[float, float]],
    max_workers: int | None = None,
    value_tol: float = VALUE_STAGNATION_TOL,
) -> list[SweepPoint]:
    """Evaluate a compound problem over a grid of (radius, budget) pairs.

    Pointwise identical to the single-shot solvers; the input order is
    preserved and points may be evaluated concurrently. Per-point failures
    are re-raised with the grid index attached.
    """
    if kind not in ("rdf", "capacity"):
        raise ValueError(f"kind must be 'rdf' or 'capacity', got {kind!r}")
    points = list(grid)
    if not points:
        raise ValueError("grid must be non-empty")
    center = base.ball.center

    def solve(indexed):
        index, (r, budget) = indexed
        try:
            if kind == "rdf":
                res = compound_rdf(CompoundRdfRequest(BwBall(center, r), budget), value_tol)
            else:
                res = compound_capacity(
                    CompoundCapacityRequest(BwBall(center, r), base.channel, budget),
                    value_tol,
                )
        except (ValueError, RobustShannonError) as exc:
            raise type(exc)(
                f"grid point {index} (r={r}, budget={budget}): {exc}"
            ) from exc
        return SweepPoint(float(r), float(budget), res.value_nats, res.worst_case_cov.trace)

    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(solve, enumerate(points)))
    return [solve(item) for item in enumerate(points)]
