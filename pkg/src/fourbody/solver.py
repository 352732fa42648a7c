"""Two-angle tuning solver for planar four-body central configurations.

For fixed masses, a direction (theta, phi) on the hemisphere produces
weighted areas; a root of the Cayley-Menger determinant in lambda
produces a planar candidate; the candidate's recovered masses are
compared with the given ones.  The two angles are tuned until the
masses coincide.  Multistart over the sign-pattern regions of the
hemisphere enumerates all solution types.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq, minimize

from . import dziobek
from .dziobek import (
    Collinear,
    ConfigurationType,
    Direction,
    DistanceSet,
    WeightedAreas,
    admissible_lambda_interval,
    cayley_menger,
    cayley_menger_from_squared,
    classify,
    directed_areas,
    distances_from_lambda,
    embed_planar,
    recovered_masses,
    sigma,
    weighted_areas,
)
from .tetra import MassVector, Tetrahedron, build_tetrahedron

logger = logging.getLogger(__name__)

_PENALTY = 1.0e6


@dataclass(frozen=True)
class SolverSettings:
    """Knobs of the multistart tuning solver.  All values positive."""

    lambda_scan_points: int = 2000
    lambda_root_tol: float = 1e-13
    angle_tol: float = 1e-12
    mass_tol: float = 1e-10
    grid_theta: int = 64
    grid_phi: int = 128
    starts_per_region: int = 12
    start_separation: float = 0.15
    max_iterations: int = 800
    endpoint_margin: float = 1e-9
    dedup_lambda_tol: float = 1e-7

    def __post_init__(self):
        for name in ("lambda_scan_points", "lambda_root_tol", "angle_tol",
                     "mass_tol", "grid_theta", "grid_phi", "starts_per_region",
                     "start_separation", "max_iterations", "endpoint_margin",
                     "dedup_lambda_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"setting {name} must be positive")


@dataclass(frozen=True)
class Residuals:
    mass_mismatch: float
    cm: float
    sigma_minus_1: float

    def as_dict(self) -> dict[str, float]:
        return {"mass_mismatch": self.mass_mismatch, "cm": self.cm,
                "sigma_minus_1": self.sigma_minus_1}


@dataclass(frozen=True)
class CentralConfiguration:
    """A fully solved planar central configuration."""

    kind: ConfigurationType
    lam: float
    direction: Direction
    distances: DistanceSet
    recovered: MassVector
    residuals: Residuals


@dataclass(frozen=True)
class TuneResult:
    status: str  # "converged" | "no-solution-in-region" | "boundary-hit"
    config: CentralConfiguration | None = None


class KiteSymmetryError(ValueError):
    """solve_kite requires m3 == m4."""


def _cm_scalar(prods: list[float], lam: float) -> float:
    """Cayley-Menger value at one lambda; plain floats for speed."""
    sq = [(1.0 + lam * p) ** (-2.0 / 3.0) for p in prods]
    d12, d13, d14, d23, d24, d34 = sq
    return 2.0 * (
        -d12 * d12 * d34 - d13 * d13 * d24 - d14 * d14 * d23
        - d14 * d23 * d23 - d13 * d24 * d24 - d12 * d34 * d34
        + d12 * d13 * (d24 + d34 - d23)
        + d12 * d14 * (d23 + d34 - d24)
        + d13 * d14 * (d23 + d24 - d34)
        + d12 * d34 * (d23 + d24)
        + d13 * d24 * (d23 + d34)
        + d14 * d23 * (d24 + d34)
        - d23 * d24 * d34
    )


def lambda_roots(areas: WeightedAreas,
                 settings: SolverSettings | None = None) -> list[float]:
    """All admissible lambda where the Dziobek distances turn planar.

    Uniform scan of the admissible interval followed by bracketed Brent
    refinement.  Roots hugging the interval endpoints or lambda = 0 are
    discarded.  An empty list is a valid outcome.
    """
    settings = settings or SolverSettings()
    lo, hi = admissible_lambda_interval(areas)
    prods = areas.pair_products()
    cap = 1e6 / float(np.max(np.abs(prods)))
    lo = max(lo, -cap)
    hi = min(hi, cap)
    margin = settings.endpoint_margin
    a, b = lo + margin, hi - margin
    if not a < b:
        return []

    grid = np.linspace(a, b, settings.lambda_scan_points)
    sq = (1.0 + grid[:, None] * prods[None, :]) ** (-2.0 / 3.0)
    cm = cayley_menger_from_squared(sq)

    plist = [float(p) for p in prods]

    def f(lam: float) -> float:
        return _cm_scalar(plist, lam)

    roots: list[float] = []
    for i in range(len(grid) - 1):
        c0, c1 = cm[i], cm[i + 1]
        if c0 == 0.0:
            roots.append(float(grid[i]))
        elif c0 * c1 < 0.0:
            roots.append(float(brentq(f, grid[i], grid[i + 1],
                                      xtol=settings.lambda_root_tol,
                                      rtol=1e-15)))
    if cm[-1] == 0.0:
        roots.append(float(grid[-1]))

    margin_band = settings.endpoint_margin
    roots = [r for r in roots
             if abs(r) > margin_band
             and r - lo > margin_band and hi - r > margin_band]
    return sorted(roots)


@dataclass(frozen=True)
class _Candidate:
    lam: float
    mismatch: np.ndarray = field(repr=False)
    distances: DistanceSet
    recovered: MassVector
    kind: ConfigurationType

    @property
    def objective(self) -> float:
        return float(np.dot(self.mismatch, self.mismatch))


def _evaluate(tetra: Tetrahedron, areas: WeightedAreas,
              lam: float) -> _Candidate:
    dist = distances_from_lambda(areas, lam)
    planar = embed_planar(dist)
    recovered = recovered_masses(planar.areas, areas, tetra.masses.m)
    mismatch = (recovered.as_array() - tetra.masses.as_array()) / tetra.masses.m
    return _Candidate(lam=lam, mismatch=mismatch, distances=dist,
                      recovered=recovered, kind=classify(planar.areas))


def mass_mismatch(tetra: Tetrahedron, direction: Direction,
                  lam: float) -> np.ndarray:
    """Per-particle relative mass error (recovered - given)/total."""
    areas = weighted_areas(tetra, direction)
    return _evaluate(tetra, areas, lam).mismatch


def _matching_candidates(tetra: Tetrahedron, areas: WeightedAreas,
                         pattern: ConfigurationType,
                         settings: SolverSettings) -> list[_Candidate]:
    out = []
    try:
        roots = lambda_roots(areas, settings)
    except dziobek.DegenerateDirectionError:
        return out
    for lam in roots:
        try:
            cand = _evaluate(tetra, areas, lam)
        except (dziobek.OrientationError, dziobek.NonRealizableError,
                dziobek.NotPlanarError, dziobek.LambdaDomainError):
            continue
        if cand.kind == pattern:
            out.append(cand)
    return out


def _make_objective(tetra: Tetrahedron, pattern: ConfigurationType,
                    settings: SolverSettings):
    def objective(x) -> float:
        direction = Direction(float(x[0]), float(x[1]))
        areas = weighted_areas(tetra, direction)
        if isinstance(classify(areas.values, zero_tol=1e-13 * areas.C),
                      Collinear):
            return _PENALTY
        if classify(areas.values) != pattern:
            return _PENALTY
        cands = _matching_candidates(tetra, areas, pattern, settings)
        if not cands:
            return _PENALTY
        return min(c.objective for c in cands)

    return objective


def _nelder_mead(objective, x0, step: float, xatol: float, maxiter: int):
    simplex = np.array([x0,
                        [x0[0] + step, x0[1]],
                        [x0[0], x0[1] + step]])
    res = minimize(objective, x0, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "xatol": xatol,
                            "fatol": 1e-24, "maxiter": maxiter,
                            "maxfev": 2 * maxiter})
    return res.x, float(res.fun)


def tune_direction(tetra: Tetrahedron, start: Direction,
                   root_selector: ConfigurationType,
                   settings: SolverSettings | None = None) -> TuneResult:
    """Minimize the mass mismatch over (theta, phi) inside one region.

    ``root_selector`` is the region's sign pattern; only lambda roots
    whose embedded configuration classifies to it are considered.
    """
    settings = settings or SolverSettings()
    objective = _make_objective(tetra, root_selector, settings)
    x = np.array([start.theta, start.phi])
    f = objective(x)
    if f >= _PENALTY:
        return TuneResult(status="boundary-hit")

    target = (0.3 * settings.mass_tol) ** 2
    for step in (0.05, 1e-4, 1e-7, 1e-9):
        x, f = _nelder_mead(objective, x, step, settings.angle_tol,
                            settings.max_iterations)
        if f <= target:
            break

    direction = Direction(float(x[0]), float(x[1]))
    areas = weighted_areas(tetra, direction)
    if classify(areas.values) != root_selector:
        return TuneResult(status="boundary-hit")
    cands = _matching_candidates(tetra, areas, root_selector, settings)
    if not cands:
        return TuneResult(status="no-solution-in-region")
    best = min(cands, key=lambda c: c.objective)
    if math.sqrt(best.objective) > settings.mass_tol:
        return TuneResult(status="no-solution-in-region")
    return TuneResult(status="converged",
                      config=_finish(tetra, direction, best))


def _finish(tetra: Tetrahedron, direction: Direction,
            cand: _Candidate) -> CentralConfiguration:
    rmax = float(np.max(cand.distances.values))
    res = Residuals(
        mass_mismatch=float(np.max(np.abs(cand.mismatch))),
        cm=abs(cayley_menger(cand.distances)) / rmax ** 4,
        sigma_minus_1=sigma(tetra.masses, cand.distances) - 1.0,
    )
    if cand.lam > 0.0:
        logger.warning("accepted configuration with positive lambda=%r",
                       cand.lam)
    return CentralConfiguration(kind=cand.kind, lam=cand.lam,
                                direction=direction,
                                distances=cand.distances,
                                recovered=cand.recovered, residuals=res)


def _hemisphere_grid(settings: SolverSettings):
    thetas = np.linspace(0.0, math.pi / 2.0, settings.grid_theta)
    phis = np.linspace(0.0, 2.0 * math.pi, settings.grid_phi, endpoint=False)
    return thetas, phis


def _bucket_starts(tetra: Tetrahedron, settings: SolverSettings
                   ) -> dict[ConfigurationType, list[tuple[float, float]]]:
    """Sign-pattern regions of the hemisphere, with spread-out starts."""
    thetas, phis = _hemisphere_grid(settings)
    C = math.sqrt((tetra.masses.m - tetra.masses.m1) / tetra.masses.mu)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    st = np.sin(tt)
    n = np.stack([st * np.cos(pp), st * np.sin(pp), np.cos(tt)], axis=0)
    A = np.einsum("jk,kab->jab", tetra.E.T, n.reshape(3, *tt.shape)) * C
    margin = np.min(np.abs(A), axis=0) / C

    buckets: dict[ConfigurationType, list] = {}
    for i in range(tt.shape[0]):
        for j in range(tt.shape[1]):
            if margin[i, j] <= 1e-6:
                continue
            pattern = classify(A[:, i, j])
            buckets.setdefault(pattern, []).append(
                (float(margin[i, j]), float(tt[i, j]), float(pp[i, j])))

    starts: dict[ConfigurationType, list[tuple[float, float]]] = {}
    for pattern, samples in buckets.items():
        samples.sort(reverse=True)
        best_margin = samples[0][0]
        eligible = [s for s in samples if s[0] >= 0.3 * best_margin]
        units = np.array([Direction(th, ph).unit_vector()
                          for _, th, ph in eligible])
        chosen = [0]
        # farthest-point spread across the region, seeded at max margin
        while len(chosen) < settings.starts_per_region:
            dots = units @ units[chosen].T
            min_angle = np.arccos(np.clip(dots, -1.0, 1.0)).min(axis=1)
            k = int(np.argmax(min_angle))
            if min_angle[k] < 1e-9:
                break
            chosen.append(k)
        starts[pattern] = [(eligible[k][1], eligible[k][2]) for k in chosen]
    return starts


def _dedup(configs: list[CentralConfiguration],
           lam_tol: float) -> list[CentralConfiguration]:
    configs = sorted(configs,
                     key=lambda c: (c.kind.label, c.lam,
                                    c.residuals.mass_mismatch))
    kept: list[CentralConfiguration] = []
    for c in configs:
        dup = any(k.kind == c.kind and abs(k.lam - c.lam) <= lam_tol
                  for k in kept)
        if not dup:
            kept.append(c)
    return sorted(kept, key=lambda c: (c.lam, c.kind.label))


def solve_all(masses: MassVector,
              settings: SolverSettings | None = None
              ) -> list[CentralConfiguration]:
    """Every distinct central configuration multistart can find.

    Hemisphere grid samples are bucketed by sign pattern; several
    spread-out starts per region are tuned coarsely, deduplicated, and
    the distinct minima polished to full precision.  Results are sorted
    by lambda.
    """
    settings = settings or SolverSettings()
    tetra = build_tetrahedron(masses)
    starts = _bucket_starts(tetra, settings)

    coarse = replace(settings, lambda_scan_points=400,
                     angle_tol=1e-7, max_iterations=300)

    hits: list[tuple[ConfigurationType, np.ndarray, float, float]] = []
    for pattern in sorted(starts, key=lambda p: p.label):
        objective = _make_objective(tetra, pattern, coarse)
        for th, ph in starts[pattern]:
            x, f = _nelder_mead(objective, np.array([th, ph]), 0.05,
                                coarse.angle_tol, coarse.max_iterations)
            if f > 1e-8:
                continue
            direction = Direction(float(x[0]), float(x[1]))
            areas = weighted_areas(tetra, direction)
            cands = _matching_candidates(tetra, areas, pattern, coarse)
            if not cands:
                continue
            lam = min(cands, key=lambda c: c.objective).lam
            hits.append((pattern, x, f, lam))

    def cluster(raw):
        reps = []
        for pattern, x, f, lam in sorted(raw, key=lambda h: h[2]):
            dup = any(pattern == p2 and abs(lam - l2) <= 1e-4
                      and np.hypot(*(x - x2)) <= 1e-2
                      for p2, x2, _, l2 in reps)
            if not dup:
                reps.append((pattern, x, f, lam))
        return reps

    reps = cluster(hits)

    # satellite runs around each hit catch clustered companion minima
    # (distinct solutions can sit within a few hundredths of a radian)
    offsets = [(r * math.cos(a), r * math.sin(a))
               for r in (0.02, 0.06)
               for a in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2)]
    satellites = []
    for pattern, x, _, _ in reps:
        objective = _make_objective(tetra, pattern, coarse)
        for dx, dy in offsets:
            start = x + [dx, dy]
            if objective(start) >= 1e6:  # left the sign region already
                continue
            x1, f1 = _nelder_mead(objective, start, 0.01,
                                  coarse.angle_tol, coarse.max_iterations)
            if f1 > 1e-8:
                continue
            direction = Direction(float(x1[0]), float(x1[1]))
            areas = weighted_areas(tetra, direction)
            cands = _matching_candidates(tetra, areas, pattern, coarse)
            if cands:
                satellites.append(
                    (pattern, x1, f1,
                     min(cands, key=lambda c: c.objective).lam))
    reps = cluster(list(reps) + satellites)

    configs: list[CentralConfiguration] = []
    for pattern, x, _, _ in reps:
        result = tune_direction(tetra, Direction(float(x[0]), float(x[1])),
                                pattern, settings)
        if result.status == "converged":
            configs.append(result.config)
    return _dedup(configs, settings.dedup_lambda_tol)


def _kite_candidates(tetra: Tetrahedron, s: float,
                     pattern: ConfigurationType,
                     settings: SolverSettings) -> list[_Candidate]:
    direction = _kite_direction(s)
    areas = weighted_areas(tetra, direction)
    return _matching_candidates(tetra, areas, pattern, settings)


def _kite_direction(s: float) -> Direction:
    """Signed semicircle angle -> direction in the symmetry plane."""
    if s >= 0.0:
        return Direction(s, math.pi / 2.0)
    return Direction(-s, 3.0 * math.pi / 2.0)


def solve_kite(masses: MassVector,
               settings: SolverSettings | None = None
               ) -> list[CentralConfiguration]:
    """Kite-symmetric configurations for m3 == m4.

    The search is one-dimensional: phi frozen to the symmetry plane
    (pi/2 or 3pi/2) and a signed theta spanning the semicircle, which
    splits into two concave sectors and one convex sector.  Each sector
    is scanned branch by branch for mass-mismatch sign changes.
    """
    settings = settings or SolverSettings()
    if abs(masses.m3 - masses.m4) > 1e-12 * max(masses.m3, masses.m4):
        raise KiteSymmetryError(
            f"solve_kite needs m3 == m4, got {masses.m3!r} and {masses.m4!r}")
    tetra = build_tetrahedron(masses)
    C = math.sqrt((masses.m - masses.m1) / masses.mu)

    n_scan = 1200
    eps = 1e-6
    s_grid = np.linspace(-math.pi / 2.0 + eps, math.pi / 2.0 - eps, n_scan)

    def pattern_at(s: float):
        areas = weighted_areas(tetra, _kite_direction(s))
        if np.min(np.abs(areas.values)) <= 1e-6 * C:
            return None
        return classify(areas.values)

    # contiguous same-pattern sectors of the semicircle
    sectors: list[tuple[ConfigurationType, list[float]]] = []
    for s in s_grid:
        p = pattern_at(float(s))
        if p is None:
            continue
        if sectors and sectors[-1][0] == p:
            sectors[-1][1].append(float(s))
        else:
            sectors.append((p, [float(s)]))

    configs: list[CentralConfiguration] = []
    for pattern, ss in sectors:
        if len(ss) < 3:
            continue
        branch_data = [(s, _kite_candidates(tetra, s, pattern, settings))
                       for s in ss]
        for (s0, c0), (s1, c1) in zip(branch_data, branch_data[1:]):
            nb = min(len(c0), len(c1))
            for b in range(nb):
                g0, g1 = c0[b].mismatch[0], c1[b].mismatch[0]
                if g0 == 0.0 or g0 * g1 >= 0.0:
                    continue
                cand = _bisect_kite(tetra, pattern, settings, s0, s1, b,
                                    g0)
                if cand is None:
                    continue
                s_root, best = cand
                if math.sqrt(best.objective) <= settings.mass_tol:
                    configs.append(_finish(tetra, _kite_direction(s_root),
                                           best))
    return _dedup(configs, settings.dedup_lambda_tol)


def _bisect_kite(tetra, pattern, settings, a, b, branch, ga):
    """Bisection in the signed kite angle on one lambda-root branch."""
    for _ in range(80):
        mid = 0.5 * (a + b)
        cands = _kite_candidates(tetra, mid, pattern, settings)
        if len(cands) <= branch:
            return None
        gm = cands[branch].mismatch[0]
        if gm == 0.0 or b - a < 1e-15:
            return mid, cands[branch]
        if ga * gm < 0.0:
            b = mid
        else:
            a, ga = mid, gm
    cands = _kite_candidates(tetra, 0.5 * (a + b), pattern, settings)
    if len(cands) <= branch:
        return None
    return 0.5 * (a + b), cands[branch]
