"""Acceptance gate: the nine release criteria, one test each.

Each test prints a single pass/fail line.  Criteria 1 and 9 fail as
stated: the solver provably finds more configurations than the golden
census lists (each extra one passes the independent residual checks),
and the lambda normalization is tied to the mass in position 1, so the
raw lambda multiset is not permutation invariant (the products
lambda * (m - m1) are).
"""

import json
import math
import time

import numpy as np
import pytest

from fourbody import (
    Direction,
    DistanceSet,
    MassVector,
    atlas,
    build_tetrahedron,
    cayley_menger,
    cli,
    directed_areas,
    embed_planar,
    sigma,
    weighted_areas,
)
from fourbody.dziobek import Collinear

from reference_values import (
    ASYMMETRIC_SOLUTIONS,
    EQUAL_PAIR_MASSES,
    EQUAL_PAIR_TABLE_MASSES,
    GENERAL_MASSES,
    GENERAL_SOLUTIONS,
    KITE_SOLUTIONS,
)

LAMBDA_TOL = 1e-9
DIST_TOL = 1e-9
ANGLE_TOL = 1e-6


def report(number: int, ok: bool, text: str) -> None:
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}")


def find_match(records, want):
    """Record whose lambda is nearest the golden one, if within tolerance.

    Equal masses can put twin solutions at the same lambda, so records
    with the golden type are preferred when any exist.
    """
    pool = [r for r in records if r["label"] == want["label"]] or records
    best = min(pool, key=lambda r: abs(r["lambda"] - want["lambda"]))
    if abs(best["lambda"] - want["lambda"]) > LAMBDA_TOL:
        return None
    return best


def config_record(config):
    return {
        "label": config.kind.label,
        "lambda": config.lam,
        "theta": config.direction.theta,
        "phi": config.direction.phi,
        "distances": config.distances.as_dict(),
    }


def check_table(record, want, check_angles: bool) -> list[str]:
    problems = []
    if record is None:
        return [f"no solution near lambda={want['lambda']!r}"]
    if record["label"] != want["label"]:
        problems.append(f"type {record['label']} != {want['label']}")
    for key, value in want["distances"].items():
        if abs(record["distances"][key] - value) > DIST_TOL:
            problems.append(f"{key} off by "
                            f"{abs(record['distances'][key] - value):.2e}")
    if check_angles:
        if abs(record["theta"] - want["theta"]) > ANGLE_TOL or \
                abs(record["phi"] - want["phi"]) > ANGLE_TOL:
            problems.append("angles differ")
    return problems


def test_criterion_1_general_golden_reproduction(tmp_path):
    out = tmp_path / "solve.json"
    t0 = time.perf_counter()
    code = cli.main(["solve", "--masses", "10,13,15,17",
                     "--out", str(out)])
    elapsed = time.perf_counter() - t0
    assert code == 0
    records = json.loads(out.read_text())["solutions"]
    for rec in records:
        rec["label"] = rec.pop("kind_label")

    problems = []
    for want in GENERAL_SOLUTIONS:
        problems += check_table(find_match(records, want), want,
                                check_angles=True)
    if elapsed > 30.0:
        problems.append(f"runtime {elapsed:.1f}s exceeds 30s")
    count_ok = len(records) == 7
    ok = count_ok and not problems
    report(1, ok, f"{len(records)} solutions in {elapsed:.1f}s; "
           "all 7 golden solutions reproduced"
           if not problems else "; ".join(problems))
    assert not problems, problems
    assert count_ok, (
        f"expected exactly 7 configurations, found {len(records)}: the "
        "solver locates 4 additional concave configurations (lambda near "
        "-2.389, -2.010, -1.747, -1.463) beyond the golden census; each "
        "passes the independent residual, planarity, and mass-recovery "
        "checks, so the golden count understates the true census")


def test_criterion_2_kite_golden_reproduction(kite_equal_pair,
                                              kite_relabeled):
    problems = []
    if len(kite_equal_pair) != 3:
        problems.append(f"expected 3 symmetric solutions, "
                        f"got {len(kite_equal_pair)}")
    for c in kite_equal_pair:
        d = c.distances
        for a, b in (((1, 3), (1, 4)), ((2, 3), (2, 4))):
            if abs(d.r(*a) - d.r(*b)) > 1e-12 * d.r(*a):
                problems.append(f"pair r{a[0]}{a[1]}/r{b[0]}{b[1]} unequal")
    if any(c.kind.label == "concave-1" for c in kite_equal_pair):
        problems.append("found a concave solution with the lightest "
                        "mass interior")

    # the golden lambda values were computed with the masses ordered
    # (10, 8, 9, 9); under that ordering they reproduce to 1e-9
    relabeled = [config_record(c) for c in kite_relabeled]
    for want in KITE_SOLUTIONS:
        problems += check_table(find_match(relabeled, want), want,
                                check_angles=False)

    report(2, not problems,
           "3 symmetric solutions, equal pairs exact, no light-mass "
           "interior, golden lambdas reproduced"
           if not problems else "; ".join(problems))
    assert not problems, problems


def test_criterion_3_asymmetric_equal_pair_solutions(
        solve_equal_pair_relabeled):
    records = [config_record(c) for c in solve_equal_pair_relabeled]
    problems = []
    for want in ASYMMETRIC_SOLUTIONS:
        problems += check_table(find_match(records, want), want,
                                check_angles=True)
    report(3, not problems,
           "both asymmetric solutions reproduced"
           if not problems else "; ".join(problems))
    assert not problems, problems


def test_criterion_4_scale_consistency(solve_general, kite_relabeled,
                                       solve_equal_pair_relabeled):
    checked = 0
    worst_sigma = 0.0
    worst_cm = 0.0
    for masses, configs in (
            (MassVector(*GENERAL_MASSES), solve_general),
            (MassVector(*EQUAL_PAIR_TABLE_MASSES), kite_relabeled),
            (MassVector(*EQUAL_PAIR_TABLE_MASSES),
             solve_equal_pair_relabeled)):
        for c in configs:
            rmax = float(np.max(c.distances.values))
            worst_sigma = max(worst_sigma,
                              abs(sigma(masses, c.distances) - 1.0))
            worst_cm = max(worst_cm,
                           abs(cayley_menger(c.distances)) / rmax**4)
            checked += 1
    ok = worst_sigma <= 1e-9 and worst_cm <= 1e-10
    report(4, ok, f"{checked} solutions: max |sigma-1| = {worst_sigma:.2e}, "
           f"max normalized planarity residual = {worst_cm:.2e}")
    assert ok


def test_criterion_5_equal_mass_square_oracle(kite_unit):
    convex = [c for c in kite_unit if c.kind.label.startswith("convex")]
    assert len(convex) == 1
    c = convex[0]
    d = c.distances
    sides = [d.r(1, 3), d.r(3, 2), d.r(2, 4), d.r(4, 1)]
    diagonals = [d.r(1, 2), d.r(3, 4)]
    np.testing.assert_allclose(sides, sides[0], rtol=1e-10)
    np.testing.assert_allclose(diagonals, math.sqrt(2.0) * sides[0],
                               rtol=1e-10)

    # by hand, from the distance law on a square with area weights of
    # equal magnitude a: side^-3 = 1 - lam a^2, diagonal^-3 = 1 + lam a^2,
    # and diagonal = sqrt(2) side forces lam a^2 = (1-2sqrt2)/(1+2sqrt2)
    tet = build_tetrahedron(MassVector(1, 1, 1, 1))
    a = weighted_areas(tet, c.direction).values
    got = c.lam * float(a[0]) ** 2
    want = (1.0 - 2.0 * math.sqrt(2.0)) / (1.0 + 2.0 * math.sqrt(2.0))
    ok = abs(got - want) <= 1e-10
    report(5, ok, f"square lambda*A^2 = {got!r}, "
           f"analytic value {want!r}, diff {abs(got - want):.2e}")
    assert ok


def test_criterion_6_tetrahedron_property_suite():
    rng = np.random.default_rng(20240817)
    splits = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))
    worst = 0.0
    for row in 10.0 ** rng.uniform(-1.0, 2.0, size=(1000, 4)):
        tet = build_tetrahedron(MassVector(*row))
        m = tet.masses.as_array()
        mu = tet.masses.mu
        gram = tet.E @ np.diag(m) @ tet.E.T
        worst = max(worst,
                    float(np.max(np.abs(gram - mu * np.eye(3)))) / mu,
                    float(np.max(np.abs(tet.E @ m))) / mu)
        for i in range(4):
            for j in range(i + 1, 4):
                d2 = float(np.sum((tet.E[:, i] - tet.E[:, j]) ** 2))
                want = mu * (1.0 / m[i] + 1.0 / m[j])
                worst = max(worst, abs(d2 - want) / mu)
        for (i, j), (k, l) in splits:
            dot = (tet.E[:, i] - tet.E[:, j]) @ (tet.E[:, k] - tet.E[:, l])
            worst = max(worst, abs(float(dot)) / mu)
    ok = worst <= 1e-12
    report(6, ok, f"1000 random mass vectors, worst scaled residual "
           f"{worst:.2e}")
    assert ok


def test_criterion_7_embedding_round_trip():
    rng = np.random.default_rng(20240818)
    count = 0
    worst_dist = 0.0
    worst_moment = 0.0
    while count < 500:
        pts = rng.uniform(-1.0, 1.0, (4, 2))
        d = [np.linalg.norm(pts[i] - pts[j])
             for i in range(4) for j in range(i + 1, 4)]
        e12 = pts[1] - pts[0]
        tri3 = abs(e12[0] * (pts[2] - pts[0])[1]
                   - e12[1] * (pts[2] - pts[0])[0])
        tri4 = abs(e12[0] * (pts[3] - pts[0])[1]
                   - e12[1] * (pts[3] - pts[0])[0])
        if min(d) < 0.15 or min(tri3, tri4) < 0.05:
            continue
        count += 1
        dist = DistanceSet(values=np.array(d))
        cfg = embed_planar(dist)
        worst_dist = max(worst_dist, float(np.max(np.abs(
            cfg.distances().values - dist.values))))
        s = directed_areas(cfg)
        worst_moment = max(worst_moment,
                           abs(float(np.sum(s))),
                           float(np.max(np.abs(s @ cfg.coordinates))))
    ok = worst_dist <= 1e-9 and worst_moment <= 1e-10
    report(7, ok, f"500 quadruples: worst distance error {worst_dist:.2e}, "
           f"worst area moment {worst_moment:.2e}")
    assert ok


def test_criterion_8_atlas_structure():
    tet = build_tetrahedron(MassVector(*GENERAL_MASSES))
    samples = atlas.sample_hemisphere(tet, 64, 128)
    cens = atlas.census(samples)
    regions = set(cens) - {"collinear"}
    want = {"concave-1", "concave-2", "concave-3", "concave-4",
            "convex-12-34", "convex-13-24", "convex-14-23"}
    problems = []
    if regions != want:
        problems.append(f"census regions {sorted(regions)}")
    for sol in GENERAL_SOLUTIONS:
        got = atlas.sign_pattern(tet, Direction(sol["theta"], sol["phi"]))
        if got.label != sol["label"]:
            problems.append(f"{sol['label']} classifies as {got.label}")
    equator = atlas.great_circles(tet)[0]
    if any(abs(d.theta - math.pi / 2.0) > 1e-12 for d in equator):
        problems.append("circle 1 is not the equator")
    report(8, not problems,
           "7 region types, golden directions classified, circle 1 is "
           "the equator" if not problems else "; ".join(problems))
    assert not problems, problems


def test_criterion_9_permutation_equivariance(
        solve_general, solve_general_swapped, solve_equal_pair,
        solve_equal_pair_relabeled):
    def lams(configs):
        return np.sort([c.lam for c in configs])

    problems = []
    fixed = lams(solve_general)
    swapped = lams(solve_general_swapped)
    if len(fixed) != len(swapped) or \
            float(np.max(np.abs(fixed - swapped))) > 1e-7:
        problems.append("lambda multiset changed under a permutation "
                        "fixing position 1")

    a = lams(solve_equal_pair)
    b = lams(solve_equal_pair_relabeled)
    moved_invariant = (len(a) == len(b)
                       and float(np.max(np.abs(a - b))) <= 1e-7)
    # the normalized products lambda * (m - m1) do agree, which pins
    # the failure on the position-1 dependence of the normalization
    scaled_ok = (len(a) == len(b) and float(np.max(np.abs(
        a * (36.0 - EQUAL_PAIR_MASSES[0])
        - b * (36.0 - EQUAL_PAIR_TABLE_MASSES[0])))) <= 1e-6)
    if not moved_invariant:
        detail = ("raw lambda multiset changes when a permutation moves "
                  "position 1: lambda scales with (m - m1), so swapping "
                  "masses 1 and 2 of (8,10,9,9) rescales every lambda by "
                  "28/26")
        if scaled_ok:
            detail += "; the multiset of lambda*(m - m1) is invariant"
        problems.append(detail)

    report(9, not problems,
           "lambda multiset invariant under all permutations"
           if not problems else "; ".join(problems))
    assert not problems, problems
