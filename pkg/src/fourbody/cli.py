"""Command-line surface: solve, kite, map, verify, repro.

Exit codes: 0 success, 1 validation error, 2 verification failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import atlas
from .dziobek import (
    Concave,
    ConfigurationType,
    Convex,
    Direction,
    DistanceSet,
    PAIR_KEYS,
    cayley_menger,
    directed_areas,
    embed_planar,
    recovered_masses,
    sigma,
    weighted_areas,
)
from .solver import (
    CentralConfiguration,
    KiteSymmetryError,
    SolverSettings,
    solve_all,
    solve_kite,
)
from .tetra import MassError, MassVector, build_tetrahedron

SCHEMA_VERSION = 1

VERIFY_TOLS = {"dziobek": 1e-9, "cm": 1e-9, "sigma": 1e-9, "mass": 1e-6}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_masses(text: str) -> MassVector:
    parts = text.split(",")
    if len(parts) != 4:
        raise CliError(f"--masses needs 4 comma-separated values, "
                       f"got {len(parts)}", 1)
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise CliError(f"--masses: {exc}", 1) from exc
    try:
        return MassVector(*values)
    except MassError as exc:
        raise CliError(str(exc), 1) from exc


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        n, m = int(a), int(b)
    except ValueError as exc:
        raise CliError(f"--grid must look like 64x128, got {text!r}", 1) from exc
    if n < 2 or m < 2:
        raise CliError("--grid sizes must be at least 2", 1)
    return n, m


def _load_settings(path: str | None) -> SolverSettings:
    if path is None:
        return SolverSettings()
    try:
        with open(path) as fh:
            overrides = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read settings file {path}: {exc}", 3) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"settings file {path}: {exc}", 1) from exc
    known = {f.name for f in dataclasses.fields(SolverSettings)}
    bad = set(overrides) - known
    if bad:
        raise CliError(f"unknown settings: {sorted(bad)}", 1)
    try:
        return SolverSettings(**{**dataclasses.asdict(SolverSettings()),
                                 **overrides})
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid settings: {exc}", 1) from exc


def _kind_to_json(kind: ConfigurationType) -> dict:
    if isinstance(kind, Concave):
        return {"type": "concave", "interior": kind.interior}
    if isinstance(kind, Convex):
        return {"type": "convex", "diagonals": [list(p) for p in kind.diagonals]}
    return {"type": "collinear"}


def _kind_from_json(d: dict) -> ConfigurationType:
    if d["type"] == "concave":
        return Concave(interior=int(d["interior"]))
    if d["type"] == "convex":
        return Convex(diagonals=tuple(sorted(
            tuple(int(i) for i in p) for p in d["diagonals"])))
    raise CliError(f"unsupported kind {d!r}", 1)


def solution_record(config: CentralConfiguration,
                    annotate_symmetry: bool = False) -> dict:
    rec = {
        "kind": _kind_to_json(config.kind),
        "kind_label": config.kind.label,
        "lambda": config.lam,
        "theta": config.direction.theta,
        "phi": config.direction.phi,
        "distances": config.distances.as_dict(),
        "recovered_masses": list(config.recovered.as_array()),
        "residuals": config.residuals.as_dict(),
    }
    if annotate_symmetry:
        d = config.distances
        pairs = []
        for (a, b), (c, e) in ((((1, 3), (1, 4))), (((2, 3), (2, 4)))):
            if abs(d.r(a, b) - d.r(c, e)) <= 1e-12 * max(d.r(a, b), 1.0):
                pairs.append([f"r{a}{b}", f"r{c}{e}"])
        rec["equal_pairs"] = pairs
    return rec


def _document(command: str, masses: MassVector, records: list[dict],
              extra: dict | None = None) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "command": command,
           "masses": list(masses.as_array()), "solutions": records}
    if extra:
        doc.update(extra)
    return doc


def _write_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2)
    if path is None:
        print(text)
        return
    try:
        Path(path).write_text(text + "\n")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", 3) from exc


def _print_table(configs: list[CentralConfiguration]) -> None:
    for c in configs:
        print(f"{c.kind.label:14s} lambda = {c.lam:.15g}   "
              f"theta = {c.direction.theta:.15g}  phi = {c.direction.phi:.15g}")
        items = sorted(c.distances.as_dict().items(), key=lambda kv: kv[1])
        for (k1, v1), (k2, v2) in zip(items[:3], reversed(items[3:])):
            print(f"    {k1} = {v1:<20.15g} {k2} = {v2:.15g}")


def cmd_solve(args) -> int:
    masses = _parse_masses(args.masses)
    settings = _load_settings(args.settings)
    configs = solve_all(masses, settings)
    records = [solution_record(c) for c in configs]
    _print_table(configs)
    print(f"{len(configs)} configuration(s) found")
    _write_json(_document("solve", masses, records), args.out)
    return 0


def cmd_kite(args) -> int:
    masses = _parse_masses(args.masses)
    settings = _load_settings(args.settings)
    relabeling = None
    vals = list(masses.as_array())
    if abs(vals[2] - vals[3]) > 1e-12 * max(vals[2], vals[3]):
        if not args.relabel:
            raise CliError(
                "kite needs m3 == m4; pass --relabel to move an equal "
                "pair into positions 3,4", 1)
        order = _equal_pair_order(vals)
        if order is None:
            raise CliError("no equal pair of masses found; "
                           "kite symmetry requires one", 1)
        masses = masses.permuted(order)
        relabeling = list(order)
    try:
        configs = solve_kite(masses, settings)
    except KiteSymmetryError as exc:
        raise CliError(str(exc), 1) from exc
    records = [solution_record(c, annotate_symmetry=True) for c in configs]
    _print_table(configs)
    print(f"{len(configs)} symmetric configuration(s) found")
    extra = {"relabeling": relabeling} if relabeling else None
    _write_json(_document("kite", masses, records, extra), args.out)
    return 0


def _equal_pair_order(vals: list[float]) -> tuple[int, int, int, int] | None:
    for i in range(4):
        for j in range(i + 1, 4):
            if abs(vals[i] - vals[j]) <= 1e-12 * max(vals[i], vals[j]):
                rest = [k + 1 for k in range(4) if k not in (i, j)]
                return (rest[0], rest[1], i + 1, j + 1)
    return None


def cmd_map(args) -> int:
    masses = _parse_masses(args.masses)
    settings = _load_settings(args.settings)
    n_theta, n_phi = _parse_grid(args.grid)
    tetra = build_tetrahedron(masses)
    samples = atlas.sample_hemisphere(tetra, n_theta, n_phi)
    circles = atlas.great_circles(tetra)
    solution_dirs = []
    if args.with_solutions:
        solution_dirs = [c.direction for c in solve_all(masses, settings)]

    out = Path(args.out or "map.csv")
    try:
        atlas.write_csv(samples, out)
        svg_path = out.with_suffix(".svg")
        svg_path.write_text(atlas.render_svg(samples, circles, solution_dirs))
    except OSError as exc:
        raise CliError(f"cannot write map output: {exc}", 3) from exc
    cens = atlas.census(samples)
    for label in sorted(cens):
        print(f"{label:14s} {cens[label]}")
    print(f"wrote {out} and {svg_path}")
    return 0


def _verify_record(masses: MassVector, rec: dict, index: int) -> tuple[bool, float]:
    try:
        dist = DistanceSet.from_dict(rec["distances"])
        lam = float(rec["lambda"])
        direction = Direction(float(rec["theta"]), float(rec["phi"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"solution {index}: malformed field: {exc}", 1) from exc

    tetra = build_tetrahedron(masses)
    areas = weighted_areas(tetra, direction)
    prods = areas.pair_products()
    dzio = float(np.max(np.abs(dist.values ** -3.0 - 1.0 - lam * prods)))
    rmax = float(np.max(dist.values))
    cm = abs(cayley_menger(dist)) / rmax ** 4
    sig = abs(sigma(masses, dist) - 1.0)
    try:
        planar = embed_planar(dist)
        rec_masses = recovered_masses(planar.areas, areas, masses.m)
        mass_err = float(np.max(np.abs(
            rec_masses.as_array() - masses.as_array()) / masses.m))
    except ValueError:
        mass_err = math.inf

    checks = {"dziobek": dzio, "cm": cm, "sigma": sig, "mass": mass_err}
    ok = all(v <= VERIFY_TOLS[k] for k, v in checks.items())
    worst_name = max(checks, key=lambda k: checks[k] / VERIFY_TOLS[k])
    status = "ok" if ok else "FAIL"
    print(f"solution {index}: {status}  worst residual: "
          f"{worst_name} = {checks[worst_name]:.3e}")
    return ok, checks[worst_name]


def cmd_verify(args) -> int:
    try:
        with open(args.file) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {args.file}: {exc}", 3) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.file}: line {exc.lineno}, column {exc.colno}: "
                       f"{exc.msg}", 1) from exc
    try:
        masses = MassVector(*[float(v) for v in doc["masses"]])
        solutions = doc["solutions"]
    except (KeyError, TypeError, ValueError, MassError) as exc:
        raise CliError(f"{args.file}: malformed document: {exc}", 1) from exc

    all_ok = True
    for i, rec in enumerate(solutions):
        ok, _ = _verify_record(masses, rec, i)
        all_ok = all_ok and ok
    print("verification " + ("passed" if all_ok else "FAILED"))
    return 0 if all_ok else 2


def _golden(name: str) -> dict:
    with resources.files("fourbody.data").joinpath(name).open() as fh:
        return json.load(fh)


def _diff_solutions(got: list[dict], want: list[dict]) -> list[str]:
    problems = []
    if len(got) != len(want):
        problems.append(f"expected {len(want)} solutions, got {len(got)}")
        return problems
    for w in want:
        match = [g for g in got if g["kind"] == w["kind"]
                 and abs(g["lambda"] - w["lambda"]) <= 1e-9]
        if not match:
            problems.append(f"missing {w['kind_label']} "
                            f"lambda={w['lambda']!r}")
            continue
        g = match[0]
        for k in PAIR_KEYS:
            if abs(g["distances"][k] - w["distances"][k]) > 1e-9:
                problems.append(
                    f"{w['kind_label']}: {k} differs: "
                    f"{g['distances'][k]!r} vs {w['distances'][k]!r}")
        if abs(g["theta"] - w["theta"]) > 1e-6 or \
                abs(g["phi"] - w["phi"]) > 1e-6:
            problems.append(f"{w['kind_label']}: angles differ")
    return problems


def cmd_repro(args) -> int:
    settings = _load_settings(args.settings)
    failures = []
    for name, runner, masses in (
            ("golden_solve_10_13_15_17.json", solve_all,
             MassVector(10, 13, 15, 17)),
            ("golden_kite_8_10_9_9.json", solve_kite,
             MassVector(8, 10, 9, 9))):
        golden = _golden(name)
        configs = runner(masses, settings)
        records = [solution_record(c) for c in configs]
        problems = _diff_solutions(records, golden["solutions"])
        tag = golden["command"] + " " + ",".join(
            str(v) for v in golden["masses"])
        if problems:
            failures.extend(f"{tag}: {p}" for p in problems)
            print(f"{tag}: FAIL")
        else:
            print(f"{tag}: ok ({len(records)} solutions)")
        if args.out:
            out_dir = Path(args.out)
            try:
                out_dir.mkdir(parents=True, exist_ok=True)
                _write_json(_document(golden["command"], masses, records),
                            out_dir / name.replace("golden_", "repro_"))
            except OSError as exc:
                raise CliError(f"cannot write {out_dir}: {exc}", 3) from exc
    for p in failures:
        print("  " + p)
    return 0 if not failures else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourbody",
        description="Planar four-body central configurations from masses")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, masses=True):
        if masses:
            p.add_argument("--masses", required=True,
                           help="four masses, comma separated (a,b,c,d)")
        p.add_argument("--out", help="output path")
        p.add_argument("--settings", help="JSON file with solver overrides")

    p = sub.add_parser("solve", help="all central configurations")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kite", help="kite-symmetric configurations (m3 == m4)")
    common(p)
    p.add_argument("--relabel", action="store_true",
                   help="move an equal mass pair into positions 3,4")
    p.set_defaults(func=cmd_kite)

    p = sub.add_parser("map", help="region map of the hemisphere")
    common(p)
    p.add_argument("--grid", default="64x128", help="theta x phi grid (NxM)")
    p.add_argument("--with-solutions", action="store_true",
                   help="overlay solve results on the map")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("verify", help="re-check residuals of a solutions file")
    p.add_argument("file", help="solutions JSON produced by solve/kite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("repro", help="reproduce bundled golden runs")
    common(p, masses=False)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
