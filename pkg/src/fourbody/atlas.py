"""Region map of the hemisphere of tuning directions.

Classifies directions by the sign pattern of their weighted areas,
traces the four collinearity great circles (zero sets of each A_i), and
emits CSV/SVG projections of the resulting map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dziobek import (
    Collinear,
    ConfigurationType,
    Direction,
    classify,
    weighted_areas,
)
from .tetra import Tetrahedron

# presentational half-width of the boundary band, in units of C
BOUNDARY_BAND = 1e-3


@dataclass(frozen=True)
class RegionSample:
    direction: Direction
    pattern: ConfigurationType
    projected: tuple[float, float]


def project(direction: Direction) -> tuple[float, float]:
    """Azimuthal equidistant projection of the upper hemisphere."""
    if math.cos(direction.theta) < 0.0:
        raise ValueError("projection defined on the upper hemisphere only")
    return (direction.theta * math.cos(direction.phi),
            direction.theta * math.sin(direction.phi))


def sign_pattern(tetra: Tetrahedron, direction: Direction,
                 boundary_band: float = BOUNDARY_BAND) -> ConfigurationType:
    """Region type at a direction; boundary inside the great-circle band."""
    areas = weighted_areas(tetra, direction)
    return classify(areas.values, zero_tol=boundary_band * areas.C)


def great_circles(tetra: Tetrahedron,
                  resolution: int = 256) -> list[list[Direction]]:
    """The four collinearity circles, clipped to the hemisphere.

    Circle i is the zero set of A_i: directions orthogonal to tetrahedron
    column i, parameterized by angle in the orthogonal plane.
    """
    if resolution < 3:
        raise ValueError("resolution must be at least 3")
    circles = []
    for j in range(4):
        axis = tetra.E[:, j] / np.linalg.norm(tetra.E[:, j])
        # orthonormal basis of the plane orthogonal to the vertex direction
        helper = np.array([1.0, 0.0, 0.0])
        if abs(axis[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        u = np.cross(axis, helper)
        u /= np.linalg.norm(u)
        v = np.cross(axis, u)
        pts = []
        for t in np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False):
            n = math.cos(t) * u + math.sin(t) * v
            if n[2] < 0.0:  # keep the upper hemisphere only
                continue
            theta = math.acos(min(1.0, max(-1.0, n[2])))
            phi = math.atan2(n[1], n[0]) % (2.0 * math.pi)
            pts.append(Direction(theta, phi))
        circles.append(pts)
    return circles


def sample_hemisphere(tetra: Tetrahedron, n_theta: int,
                      n_phi: int) -> list[RegionSample]:
    """Uniform (theta, phi) raster of the hemisphere, row-major order."""
    if n_theta < 2 or n_phi < 2:
        raise ValueError("grid sizes must be at least 2")
    samples = []
    for theta in np.linspace(0.0, math.pi / 2.0, n_theta):
        for phi in np.linspace(0.0, 2.0 * math.pi, n_phi, endpoint=False):
            d = Direction(float(theta), float(phi))
            samples.append(RegionSample(direction=d,
                                        pattern=sign_pattern(tetra, d),
                                        projected=project(d)))
    return samples


def census(samples: list[RegionSample]) -> dict[str, int]:
    """Pattern label -> sample count (boundary samples under 'collinear')."""
    out: dict[str, int] = {}
    for s in samples:
        out[s.pattern.label] = out.get(s.pattern.label, 0) + 1
    return out


def write_csv(samples: list[RegionSample], path) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["theta", "phi", "u", "v", "pattern_label"])
        for s in samples:
            w.writerow([repr(s.direction.theta), repr(s.direction.phi),
                        repr(s.projected[0]), repr(s.projected[1]),
                        s.pattern.label])


_PALETTE = ["#4c72b0", "#dd8452", "#55a868", "#c44e52",
            "#8172b3", "#937860", "#da8bc3", "#8c8c8c",
            "#ccb974", "#64b5cd"]


def render_svg(samples: list[RegionSample],
               circles: list[list[Direction]],
               solution_points: list[Direction] | None = None,
               size: int = 640) -> str:
    """Simple disk map: region samples as dots, circles as point strokes,
    solutions as markers.  Geometry is presentational, not contract."""
    half = math.pi / 2.0
    scale = size / (2.2 * half)

    def xy(u, v):
        return (size / 2.0 + u * scale, size / 2.0 - v * scale)

    labels = sorted({s.pattern.label for s in samples})
    colors = {lab: _PALETTE[i % len(_PALETTE)] for i, lab in enumerate(labels)}
    colors["collinear"] = "#222222"

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
             f'height="{size}" viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>',
             f'<circle cx="{size/2}" cy="{size/2}" r="{half*scale:.2f}" '
             'fill="none" stroke="#999"/>']
    for s in samples:
        x, y = xy(*s.projected)
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2" '
                     f'fill="{colors[s.pattern.label]}"/>')
    for circle in circles:
        for d in circle:
            x, y = xy(*project(d))
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1" '
                         'fill="#000"/>')
    for d in solution_points or []:
        x, y = xy(*project(d))
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="none" '
                     'stroke="#000" stroke-width="2"/>')
    # legend
    for i, lab in enumerate(labels):
        y = 16 + 16 * i
        parts.append(f'<rect x="8" y="{y - 10}" width="10" height="10" '
                     f'fill="{colors[lab]}"/>')
        parts.append(f'<text x="24" y="{y}" font-size="12" '
                     f'font-family="monospace">{lab}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
