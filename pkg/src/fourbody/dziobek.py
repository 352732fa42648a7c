"""From a direction on the sphere to a candidate planar configuration.

The pipeline implemented here: a unit direction produces four weighted
directed areas from the tetrahedron; the Dziobek relation
``r_jk^-3 = 1 + lambda * A_j * A_k`` turns them into six candidate
distances; the Cayley-Menger determinant measures planarity; a planar
distance set is embedded in the plane, its directed areas computed, and
masses recovered from the area ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .tetra import MassVector, Tetrahedron

# Unordered particle pairs in canonical order, 0-based.
PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
PAIR_KEYS = ("r12", "r13", "r14", "r23", "r24", "r34")

TWO_PI = 2.0 * math.pi


class DegenerateDirectionError(ValueError):
    """A weighted area is (numerically) zero: direction on a great circle."""


class LambdaDomainError(ValueError):
    """lambda leaves 1 + lambda*A_j*A_k positive for some pair."""


class NonRealizableError(ValueError):
    """Distance set violates a triangle inequality needed for embedding."""


class NotPlanarError(ValueError):
    """Distance set is not planar enough to embed in two dimensions."""


class OrientationError(ValueError):
    """Area ratios S_j/A_j have mixed signs; no positive mass assignment."""


@dataclass(frozen=True)
class Direction:
    """Spherical direction, canonicalized to theta in [0, pi], phi in [0, 2pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        th = float(self.theta) % TWO_PI
        ph = float(self.phi)
        if th > math.pi:  # wrap through the opposite meridian
            th = TWO_PI - th
            ph += math.pi
        ph %= TWO_PI
        object.__setattr__(self, "theta", th)
        object.__setattr__(self, "phi", ph)

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi),
                         st * math.sin(self.phi),
                         math.cos(self.theta)])

    def antipode(self) -> "Direction":
        return Direction(math.pi - self.theta, self.phi + math.pi)


@dataclass(frozen=True)
class WeightedAreas:
    """The four weighted directed areas A_1..A_4 for one direction."""

    values: np.ndarray = field(repr=False)
    C: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (4,):
            raise ValueError("weighted areas must be a 4-vector")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def pair_products(self) -> np.ndarray:
        """A_j*A_k for the six canonical pairs."""
        v = self.values
        return np.array([v[i] * v[j] for i, j in PAIRS])


def weighted_areas(tetra: Tetrahedron, direction: Direction) -> WeightedAreas:
    """A_j = C * (vertex_j . unit direction), C = sqrt((m - m1)/mu)."""
    masses = tetra.masses
    C = math.sqrt((masses.m - masses.m1) / masses.mu)
    values = C * (tetra.E.T @ direction.unit_vector())
    return WeightedAreas(values=values, C=C)


@dataclass(frozen=True)
class DistanceSet:
    """Six positive inter-particle distances in canonical pair order."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != (6,):
            raise ValueError("distance set must have 6 entries")
        if not np.all(np.isfinite(v)) or np.any(v <= 0.0):
            raise ValueError("all distances must be positive and finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def r(self, i: int, j: int) -> float:
        """Distance between particles i and j (1-based, order-free)."""
        if i == j or not (1 <= i <= 4 and 1 <= j <= 4):
            raise ValueError(f"invalid particle pair ({i}, {j})")
        a, b = min(i, j) - 1, max(i, j) - 1
        return float(self.values[PAIRS.index((a, b))])

    def as_dict(self) -> dict[str, float]:
        return {k: float(v) for k, v in zip(PAIR_KEYS, self.values)}

    @classmethod
    def from_dict(cls, d: dict[str, float]) -> "DistanceSet":
        return cls(values=np.array([float(d[k]) for k in PAIR_KEYS]))

    def scaled(self, s: float) -> "DistanceSet":
        return DistanceSet(values=s * self.values)


def admissible_lambda_interval(areas: WeightedAreas,
                               zero_tol_factor: float = 1e-14
                               ) -> tuple[float, float]:
    """Largest open interval around 0 keeping 1 + lambda*A_j*A_k > 0.

    Returns -inf/+inf for an unconstrained side.  Raises
    DegenerateDirectionError when some |A_j| falls below the great-circle
    threshold ``zero_tol_factor * C``.
    """
    thresh = zero_tol_factor * areas.C
    small = np.abs(areas.values) <= thresh
    if np.any(small):
        idx = [i + 1 for i in np.flatnonzero(small)]
        raise DegenerateDirectionError(
            f"weighted area(s) {idx} vanish: direction lies on a great circle")
    lo, hi = -math.inf, math.inf
    for p in areas.pair_products():
        if p > 0.0:
            lo = max(lo, -1.0 / p)
        elif p < 0.0:
            hi = min(hi, -1.0 / p)
    return lo, hi


def distances_from_lambda(areas: WeightedAreas, lam: float) -> DistanceSet:
    """Dziobek distances r_jk = (1 + lambda*A_j*A_k)^(-1/3)."""
    prods = areas.pair_products()
    base = 1.0 + lam * prods
    bad = base <= 0.0
    if np.any(bad):
        i, j = PAIRS[int(np.flatnonzero(bad)[0])]
        raise LambdaDomainError(
            f"lambda={lam!r} makes 1 + lambda*A_{i+1}*A_{j+1} non-positive")
    return DistanceSet(values=base ** (-1.0 / 3.0))


def cayley_menger(distances: DistanceSet) -> float:
    """Bordered 5x5 determinant of squared distances.

    Equals 288*V^2 for the tetrahedron volume V; zero iff the four points
    are coplanar.
    """
    d = distances.values ** 2
    m = np.zeros((5, 5))
    m[0, 1:] = 1.0
    m[1:, 0] = 1.0
    for k, (i, j) in enumerate(PAIRS):
        m[i + 1, j + 1] = d[k]
        m[j + 1, i + 1] = d[k]
    return float(np.linalg.det(m))


def cayley_menger_from_squared(sq: np.ndarray) -> np.ndarray:
    """Vectorized Cayley-Menger value from squared distances.

    ``sq`` has the six canonical pairs on its last axis.  Closed-form
    expansion of the 5x5 bordered determinant; kept in sync with
    ``cayley_menger`` by tests.
    """
    d12, d13, d14, d23, d24, d34 = np.moveaxis(np.asarray(sq), -1, 0)
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


def directed_areas(config_or_coords) -> np.ndarray:
    """Signed double areas S_1..S_4 from planar coordinates.

    Column orders of the minors: S1:(2,3,4), S2:(1,4,3), S3:(1,2,4),
    S4:(1,3,2).  Accepts a PlanarConfig or a (4, 2) coordinate array.
    """
    coords = getattr(config_or_coords, "coordinates", config_or_coords)
    xy = np.asarray(coords, dtype=float)
    if xy.shape != (4, 2):
        raise ValueError("expected four planar points")

    def minor(i, j, k):
        (xi, yi), (xj, yj), (xk, yk) = xy[i - 1], xy[j - 1], xy[k - 1]
        return (xj - xi) * (yk - yi) - (xk - xi) * (yj - yi)

    return np.array([minor(2, 3, 4), minor(1, 4, 3),
                     minor(1, 2, 4), minor(1, 3, 2)])


@dataclass(frozen=True)
class PlanarConfig:
    """Planar coordinates realizing a distance set, with directed areas."""

    coordinates: np.ndarray = field(repr=False)
    areas: np.ndarray = field(repr=False)

    def __post_init__(self):
        xy = np.array(self.coordinates, dtype=float)
        s = np.array(self.areas, dtype=float)
        xy.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "coordinates", xy)
        object.__setattr__(self, "areas", s)

    def distances(self) -> DistanceSet:
        vals = [float(np.hypot(*(self.coordinates[i] - self.coordinates[j])))
                for i, j in PAIRS]
        return DistanceSet(values=np.array(vals))


def embed_planar(distances: DistanceSet,
                 planarity_tol_factor: float = 1e-10,
                 reproduction_tol_factor: float = 1e-9) -> PlanarConfig:
    """Realize a coplanar distance set in the plane.

    Gauge: particle 1 at the origin, particle 2 on the +x axis, particle 3
    in the closed upper half-plane.  Particle 4 takes the y-sign that best
    reproduces r34.
    """
    rmax = float(np.max(distances.values))
    cm = cayley_menger(distances)
    if abs(cm) > planarity_tol_factor * rmax ** 4:
        raise NotPlanarError(
            f"Cayley-Menger {cm:.3e} exceeds planarity tolerance")

    r12 = distances.r(1, 2)
    r13, r23 = distances.r(1, 3), distances.r(2, 3)
    r14, r24 = distances.r(1, 4), distances.r(2, 4)
    r34 = distances.r(3, 4)

    def third_point(ra, rb):
        # point at distance ra from (0,0) and rb from (r12,0)
        x = (r12 * r12 + ra * ra - rb * rb) / (2.0 * r12)
        y2 = ra * ra - x * x
        if y2 < -reproduction_tol_factor * rmax * rmax:
            raise NonRealizableError(
                "triangle inequality violated; distances not realizable")
        return x, math.sqrt(max(y2, 0.0))

    x3, y3 = third_point(r13, r23)
    x4, y4 = third_point(r14, r24)
    # pick the sign of y4 that matches r34
    d_plus = math.hypot(x4 - x3, y4 - y3)
    d_minus = math.hypot(x4 - x3, -y4 - y3)
    if abs(d_minus - r34) < abs(d_plus - r34):
        y4 = -y4

    xy = np.array([[0.0, 0.0], [r12, 0.0], [x3, y3], [x4, y4]])
    cfg = PlanarConfig(coordinates=xy, areas=directed_areas(xy))
    err = float(np.max(np.abs(cfg.distances().values - distances.values)))
    if err > reproduction_tol_factor * rmax:
        raise NotPlanarError(
            f"embedding residual {err:.3e} exceeds tolerance")
    return cfg


def recovered_masses(areas_s: np.ndarray, areas_a: WeightedAreas,
                     total: float) -> MassVector:
    """Masses proportional to S_j/A_j, normalized to the given total.

    All four ratios must share a sign (overall orientation is free);
    mixed signs mean the candidate cannot carry positive masses.
    """
    s = np.asarray(areas_s, dtype=float)
    a = areas_a.values
    if np.any(a == 0.0):
        raise DegenerateDirectionError("weighted area is zero")
    ratios = s / a
    if np.any(ratios > 0.0) and np.any(ratios < 0.0) or np.any(ratios == 0.0):
        raise OrientationError(
            "area ratios S_j/A_j have inconsistent signs")
    scaled = total * ratios / ratios.sum()
    return MassVector(*scaled)


def sigma(masses: MassVector, distances: DistanceSet) -> float:
    """Length-unit diagnostic (sum m_j m_k / r_jk) / (sum m_j m_k r_jk^2).

    Equals 1 exactly when distances follow the sigma=1 convention.
    """
    m = masses.as_array()
    prods = np.array([m[i] * m[j] for i, j in PAIRS])
    r = distances.values
    return float(np.sum(prods / r) / np.sum(prods * r * r))


@dataclass(frozen=True)
class Concave:
    """One particle interior to the triangle of the other three."""
    interior: int

    @property
    def label(self) -> str:
        return f"concave-{self.interior}"


@dataclass(frozen=True)
class Convex:
    """Quadrilateral; the two same-sign pairs are the diagonals."""
    diagonals: tuple[tuple[int, int], tuple[int, int]]

    @property
    def label(self) -> str:
        (a, b), (c, d) = self.diagonals
        return f"convex-{a}{b}-{c}{d}"


@dataclass(frozen=True)
class Collinear:
    """At least one area vanishes: three (or more) particles collinear."""
    zeros: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        return "collinear"


ConfigurationType = Union[Concave, Convex, Collinear]


def classify(values, zero_tol: float = 0.0) -> ConfigurationType:
    """Configuration type from four signed areas (weighted or directed).

    Sign-flip invariant: a global orientation flip yields the same type.
    Entries within ``zero_tol`` of zero give the boundary classification.
    """
    v = np.asarray(values, dtype=float)
    if v.shape != (4,):
        raise ValueError("classification needs exactly four signed values")
    zeros = tuple(int(i) + 1 for i in np.flatnonzero(np.abs(v) <= zero_tol))
    if zeros:
        return Collinear(zeros=zeros)
    pos = tuple(int(i) + 1 for i in np.flatnonzero(v > 0.0))
    neg = tuple(int(i) + 1 for i in np.flatnonzero(v < 0.0))
    if len(pos) == 1:
        return Concave(interior=pos[0])
    if len(neg) == 1:
        return Concave(interior=neg[0])
    if len(pos) == 2:
        return Convex(diagonals=tuple(sorted((pos, neg))))
    # all four share a sign: impossible for areas with positive masses,
    # but classify stays total
    raise ValueError(f"all four values share a sign: {v}")
