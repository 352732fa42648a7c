"""Orthocentric tetrahedron built from four positive masses.

Every planar central configuration search starts from this rigid
tetrahedron: the four masses sit at its vertices, the center of mass is
the orthocenter, and the inertia tensor is isotropic.  The vertex
coordinates are closed-form functions of the masses, with particle 1 on
axis 3 and particles 3-4 split along axis 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class MassError(ValueError):
    """A mass is non-positive or non-finite."""


def _check_masses(values) -> tuple[float, float, float, float]:
    vals = tuple(float(v) for v in values)
    if len(vals) != 4:
        raise MassError(f"expected 4 masses, got {len(vals)}")
    for i, v in enumerate(vals, start=1):
        if not math.isfinite(v) or v <= 0.0:
            raise MassError(f"mass {i} must be positive and finite, got {v!r}")
    return vals


def reduced_mass(m1: float, m2: float, m3: float, m4: float) -> float:
    """Cube root of (product of the masses over their sum)."""
    m1, m2, m3, m4 = _check_masses((m1, m2, m3, m4))
    return ((m1 * m2 * m3 * m4) / (m1 + m2 + m3 + m4)) ** (1.0 / 3.0)


@dataclass(frozen=True)
class MassVector:
    """Four positive masses with the derived total and reduced scale."""

    m1: float
    m2: float
    m3: float
    m4: float

    def __post_init__(self):
        m1, m2, m3, m4 = _check_masses((self.m1, self.m2, self.m3, self.m4))
        object.__setattr__(self, "m1", m1)
        object.__setattr__(self, "m2", m2)
        object.__setattr__(self, "m3", m3)
        object.__setattr__(self, "m4", m4)

    @property
    def m(self) -> float:
        return self.m1 + self.m2 + self.m3 + self.m4

    @property
    def mu(self) -> float:
        return reduced_mass(self.m1, self.m2, self.m3, self.m4)

    def as_array(self) -> np.ndarray:
        return np.array([self.m1, self.m2, self.m3, self.m4])

    @classmethod
    def of(cls, values) -> "MassVector":
        a, b, c, d = _check_masses(values)
        return cls(a, b, c, d)

    def permuted(self, order: tuple[int, int, int, int]) -> "MassVector":
        """New vector with masses taken at 1-based positions ``order``."""
        arr = (self.m1, self.m2, self.m3, self.m4)
        return MassVector(*(arr[i - 1] for i in order))


@dataclass(frozen=True)
class Tetrahedron:
    """The 3x4 vertex matrix of the mass-orthocentric tetrahedron."""

    masses: MassVector
    E: np.ndarray = field(repr=False)

    def __post_init__(self):
        E = np.array(self.E, dtype=float)
        if E.shape != (3, 4):
            raise ValueError(f"vertex matrix must be 3x4, got {E.shape}")
        E.setflags(write=False)
        object.__setattr__(self, "E", E)

    def vertex(self, j: int) -> np.ndarray:
        """Coordinates (a_j, b_j, c_j) of particle j (1-based)."""
        return self.E[:, j - 1]


def build_tetrahedron(masses: MassVector) -> Tetrahedron:
    """Vertex coordinates in the fixed axis convention.

    Particle 1 sits on axis 3; particle 2 in the plane of axes 2-3;
    particles 3 and 4 split symmetrically along axis 1.  All choices of
    square roots are positive, so equal masses need no special casing.
    """
    m1, m2, m3, m4 = masses.m1, masses.m2, masses.m3, masses.m4
    m = masses.m
    mu = masses.mu
    m34 = m3 + m4
    rest = m - m1
    c_low = -math.sqrt(mu * m1 / (rest * m))
    E = np.array([
        [0.0, 0.0,
         math.sqrt(mu * m4 / (m3 * m34)),
         -math.sqrt(mu * m3 / (m4 * m34))],
        [0.0,
         math.sqrt(mu * m34 / (m2 * rest)),
         -math.sqrt(mu * m2 / (m34 * rest)),
         -math.sqrt(mu * m2 / (m34 * rest))],
        [math.sqrt(mu * rest / (m1 * m)), c_low, c_low, c_low],
    ])
    return Tetrahedron(masses=masses, E=E)
