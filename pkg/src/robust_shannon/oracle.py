"""Independent verification machinery.

Gaussian sampling, exact empirical Wasserstein-2 between equal-size sample
clouds by optimal assignment, a sampled check of the Gaussian closed-form
distance against the empirical one, and exhaustive grid searches for small
compound instances. The grid oracles use an exact active-set waterfill,
deliberately a different algorithm than the bisection used by the solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .classical import ChannelMatrix, gaussian_capacity, gaussian_rdf
from .errors import TooLargeForExact
from .psd_geometry import GaussianLaw, SpdMatrix, gaussian_w2, matrix_sqrt

MAX_EXACT_ASSIGNMENT = 512
GELBRICH_SLACK = 0.15  # calibrated at n = 512; see demos/gelbrich_calibration.py


@dataclass(frozen=True, eq=False)
class SampleCloud:
    """Finite point cloud with the seed that produced it."""

    points: np.ndarray
    seed: int

    def __post_init__(self):
        p = np.array(self.points, dtype=float)
        if p.ndim != 2 or p.shape[0] < 1:
            raise ValueError("points must be a nonempty n x d array")
        if not np.all(np.isfinite(p)):
            raise ValueError("points must be finite")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True)
class GelbrichReport:
    empirical: float
    gelbrich_closed_form: float
    lower_bound_ok: bool


def sample_gaussian(law: GaussianLaw, n: int, seed: int) -> SampleCloud:
    """n i.i.d. draws from the law, deterministic per seed.

    Generator: numpy PCG64 (standard normals via ziggurat), colored by the
    symmetric square root of the covariance.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, law.dim))
    factor = matrix_sqrt(law.cov).entries
    return SampleCloud(law.mean + z @ factor, seed)


def empirical_w2(a: SampleCloud, b: SampleCloud) -> float:
    """Exact Wasserstein-2 between equal-weight empirical measures.

    Solves the assignment problem on the squared-Euclidean cost matrix; the
    exact solution avoids the regularization bias of entropic approximations,
    which matters because the closed-form comparison is one-sided.
    """
    if a.size != b.size:
        raise ValueError(f"cloud sizes differ: {a.size} vs {b.size}")
    if a.dim != b.dim:
        raise ValueError(f"cloud dimensions differ: {a.dim} vs {b.dim}")
    if a.size > MAX_EXACT_ASSIGNMENT:
        raise TooLargeForExact(
            f"{a.size} points exceed the exact-assignment bound {MAX_EXACT_ASSIGNMENT}"
        )
    diff = a.points[:, None, :] - b.points[None, :, :]
    cost = np.einsum("ijk,ijk->ij", diff, diff)
    rows, cols = linear_sum_assignment(cost)
    return math.sqrt(float(cost[rows, cols].mean()))


def check_gelbrich(p: GaussianLaw, q: GaussianLaw, n: int, seed: int) -> GelbrichReport:
    """Empirical distance between fresh sample clouds vs the Gaussian closed form.

    The clouds are decorrelated by spawning two child seeds from the given
    one. Finite samples overestimate the distance only on average, so the
    one-sided check allows the calibrated slack.
    """
    if n > MAX_EXACT_ASSIGNMENT:
        raise TooLargeForExact(
            f"{n} points exceed the exact-assignment bound {MAX_EXACT_ASSIGNMENT}"
        )
    seed_a, seed_b = (int(x) for x in np.random.SeedSequence(seed).generate_state(2))
    empirical = empirical_w2(sample_gaussian(p, n, seed_a), sample_gaussian(q, n, seed_b))
    closed_form = gaussian_w2(p, q)
    ok = empirical >= closed_form * (1.0 - GELBRICH_SLACK)
    return GelbrichReport(empirical, closed_form, ok)


def random_seeded_laws(seed: int, pairs: int, max_dim: int = 3):
    """Deterministic stream of random Gaussian law pairs for verification runs."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(pairs):
        d = int(rng.integers(1, max_dim + 1))
        laws = []
        for _ in range(2):
            g = rng.standard_normal((d, d))
            cov = SpdMatrix(g @ g.T + 0.1 * np.eye(d))
            laws.append(GaussianLaw(rng.standard_normal(d), cov))
        out.append(tuple(laws))
    return out


def sampler_dominance_checks(seed: int, draws: int):
    """Compound values vs classical limits at in-ball sampler draws.

    Yields one report line per problem kind; a draw beating the compound
    extremum beyond a 1e-6 slack marks the check failed.
    """
    # local import: the oracle helpers above stay usable without the solver stack
    from .compound import (
        CompoundCapacityRequest,
        CompoundRdfRequest,
        compound_capacity,
        compound_rdf,
    )
    from .psd_geometry import BwBall, random_psd_in_ball

    rng = np.random.default_rng(seed)
    g = rng.standard_normal((2, 2))
    ball = BwBall(SpdMatrix(g @ g.T + 0.5 * np.eye(2)), 0.4)
    distortion = 0.8
    power = 2.0
    rdf_value = compound_rdf(CompoundRdfRequest(ball, distortion)).value_nats
    cap_value = compound_capacity(
        CompoundCapacityRequest(ball, ChannelMatrix(np.eye(2)), power)
    ).value_nats
    worst_rdf = -math.inf
    worst_cap = math.inf
    for k in range(draws):
        draw = random_psd_in_ball(ball, seed + 10_000 + k)
        worst_rdf = max(worst_rdf, gaussian_rdf(draw, distortion))
        worst_cap = min(worst_cap, gaussian_capacity(np.eye(2), draw, power).rate_nats)
    yield (
        f"dominance rdf compound={rdf_value:.6g} max_draw={worst_rdf:.6g}",
        worst_rdf <= rdf_value + 1e-6,
    )
    yield (
        f"dominance capacity compound={cap_value:.6g} min_draw={worst_cap:.6g}",
        worst_cap >= cap_value - 1e-6,
    )


def _rdf_rates_for_spectra(spectra: np.ndarray, distortion: float) -> np.ndarray:
    """Reverse-waterfilled rates for a batch of eigenvalue rows, exactly.

    Active-set scan: with the row sorted ascending and the j smallest modes
    saturated, the candidate level is (D - prefix sum)/(d - j); the first j
    whose level does not exceed the next eigenvalue is the solution (the
    lower bracket holds by induction once earlier candidates overshoot).
    """
    lam = np.sort(np.asarray(spectra, dtype=float), axis=1)
    m, d = lam.shape
    rates = np.zeros(m)
    working = distortion < lam.sum(axis=1)
    if not np.any(working):
        return rates
    lam = lam[working]
    mw = lam.shape[0]
    prefix = np.concatenate([np.zeros((mw, 1)), np.cumsum(lam, axis=1)], axis=1)
    levels = (distortion - prefix[:, :d]) / (d - np.arange(d))
    chosen = levels <= lam
    chosen[:, d - 1] = True
    first = chosen.argmax(axis=1)
    picked = np.arange(mw)
    level = levels[picked, first]
    with np.errstate(divide="ignore"):
        suffix_log = np.cumsum(np.log(lam[:, ::-1]), axis=1)[:, ::-1]
    rates[working] = 0.5 * (suffix_log[picked, first] - (d - first) * np.log(level))
    return np.maximum(rates, 0.0)


def _capacity_rates_for_noise_spectra(spectra: np.ndarray, power: float) -> np.ndarray:
    """Identity-channel capacities for a batch of noise eigenvalue rows, exactly.

    With unit channel the inverse gains are the noise eigenvalues themselves;
    the k lowest-noise modes are active at level (B + prefix sum)/k, and the
    first k whose level does not exceed the next eigenvalue is the solution.
    """
    lam = np.sort(np.asarray(spectra, dtype=float), axis=1)
    m, d = lam.shape
    if power == 0.0:
        return np.zeros(m)
    prefix_lam = np.cumsum(lam, axis=1)
    levels = (power + prefix_lam) / np.arange(1, d + 1)
    chosen = np.ones((m, d), dtype=bool)
    if d > 1:
        chosen[:, : d - 1] = levels[:, : d - 1] <= lam[:, 1:]
    first = chosen.argmax(axis=1)
    picked = np.arange(m)
    level = levels[picked, first]
    with np.errstate(divide="ignore"):
        prefix_log = np.cumsum(np.log(lam), axis=1)
    rates = 0.5 * ((first + 1) * np.log(level) - prefix_log[picked, first])
    return np.maximum(rates, 0.0)


def brute_force_compound(
    kind: str, center: SpdMatrix, r: float, budget: float, grid_step: float
) -> float:
    """Exhaustive grid extremum of a small compound problem.

    Grids the per-axis standard deviations over the box around the center's
    diagonal square roots, keeps the points within the ball, evaluates the
    classical limit at each diagonal covariance, and returns the max (rate
    distortion) or min (capacity, identity channel). Cost grows as
    (2r / grid_step)^d; only diagonal centers with d <= 3 are accepted.
    """
    if kind not in ("rdf", "capacity"):
        raise ValueError(f"kind must be 'rdf' or 'capacity', got {kind!r}")
    if center.dim > 3:
        raise ValueError(f"dimension {center.dim} too large for the grid oracle")
    diag = np.diag(center.entries)
    if float(np.abs(center.entries - np.diag(diag)).max()) > 1e-12 * max(1.0, center.trace):
        raise ValueError("center must be diagonal")
    if not float(grid_step) > 0.0:
        raise ValueError(f"grid_step must be positive, got {grid_step}")
    if not float(r) >= 0.0:
        raise ValueError(f"r must be nonnegative, got {r}")
    if kind == "rdf" and not float(budget) > 0.0:
        raise ValueError(f"distortion must be positive, got {budget}")
    if kind == "capacity" and not float(budget) >= 0.0:
        raise ValueError(f"power must be nonnegative, got {budget}")
    s = np.sqrt(diag)
    axes = [
        np.arange(max(0.0, si - r), si + r + 0.5 * grid_step, grid_step) for si in s
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    u = np.stack([m.ravel() for m in mesh], axis=1)
    feasible = np.linalg.norm(u - s, axis=1) <= r * (1.0 + 1e-12) + 1e-15
    spectra = u[feasible] ** 2
    if kind == "rdf":
        return float(_rdf_rates_for_spectra(spectra, budget).max())
    return float(_capacity_rates_for_noise_spectra(spectra, budget).min())
