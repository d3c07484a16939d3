"""Command-line experiment runner.

Each experiment kind writes a fixed set of result files plus a manifest
recording the exact configuration, the package version, the wall-clock
duration, and a sha256 checksum per output. Reruns refuse to clobber
existing outputs unless --overwrite is given. Exit codes: 0 on success,
1 for configuration problems (including refused overwrites), 2 for
runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import sqrw
from sqrw.geometry import build_grid, build_lattice
from sqrw.sweep import (
    blind_class_bests,
    blind_evaluate,
    blind_plan,
    grid_size_trend,
    lattice_vs_grid,
    maze_study,
    sweep_single_F,
    walls_ensemble,
    write_blind_eval_csv,
    write_class_bests_csv,
    write_comparison_csv,
    write_count_stats_csv,
    write_samples_csv,
    write_trend_csv,
)
from sqrw.walk import evolve, node_probabilities, radial_profile, save_field_csv

OUTPUT_DIR_ENV = "SQRW_OUTPUT_DIR"

KINDS = ("snapshot", "sweep", "blind", "walls", "maze", "lattice-compare", "trend")


@dataclass
class ExperimentConfig:
    """One experiment request; JSON round-trippable."""

    kind: str
    n: int | None = None
    f: tuple[int, ...] | None = None
    marked: tuple[tuple[int, ...], ...] | None = None
    dims: int = 2
    steps: int | None = None
    u_max: int | None = None
    r_max: int | None = None
    samples: int | None = None
    wall_counts: tuple[int, ...] | None = None
    sides: tuple[int, ...] | None = None
    pairs: tuple[tuple[int, int], ...] | None = None
    seed: int = 0
    threads: int = 1
    out: str | None = None
    overwrite: bool = False

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        for key in ("f",):
            if d.get(key) is not None:
                d[key] = tuple(int(a) for a in d[key])
        if d.get("marked") is not None:
            d["marked"] = tuple(tuple(int(a) for a in m) for m in d["marked"])
        for key in ("wall_counts", "sides"):
            if d.get(key) is not None:
                d[key] = tuple(int(a) for a in d[key])
        if d.get("pairs") is not None:
            d["pairs"] = tuple((int(a), int(b)) for a, b in d["pairs"])
        return cls(**d)


def validate(config: ExperimentConfig) -> list[str]:
    """All configuration violations, empty when the config is runnable."""
    bad: list[str] = []
    if config.kind not in KINDS:
        bad.append(f"unknown kind {config.kind!r}; expected one of {KINDS}")
        return bad

    def check_node(name: str, coords, dims: int, side: int):
        if coords is None:
            bad.append(f"{name} is required for kind {config.kind!r}")
            return
        if len(coords) != dims:
            bad.append(f"{name} must have {dims} coordinates, got {list(coords)}")
            return
        if any(not 1 <= a <= side for a in coords):
            bad.append(f"{name}={list(coords)} outside the 1..{side} range")

    needs_grid = config.kind in ("snapshot", "sweep", "blind", "walls", "maze")
    if needs_grid:
        if config.n is None or config.n < 2:
            bad.append(f"n must be >= 2, got {config.n}")
        elif config.kind in ("snapshot", "sweep", "walls", "maze"):
            dims = config.dims if config.kind in ("snapshot", "sweep") else 2
            check_node("f", config.f, dims, config.n)
            for m in config.marked or ():
                check_node("marked node", m, dims, config.n)
    if config.dims not in (2, 3):
        bad.append(f"dims must be 2 or 3, got {config.dims}")
    if config.kind == "snapshot" and (config.steps is None or config.steps < 0):
        bad.append(f"steps must be >= 0, got {config.steps}")
    if config.u_max is not None and config.u_max < 0:
        bad.append(f"u_max must be >= 0, got {config.u_max}")
    if config.r_max is not None and config.r_max < 0:
        bad.append(f"r_max must be >= 0, got {config.r_max}")
    if config.samples is not None and config.samples < 1:
        bad.append(f"samples must be >= 1, got {config.samples}")
    if config.kind == "walls":
        if not config.wall_counts:
            bad.append("wall_counts is required for kind 'walls'")
        elif config.n is not None and config.n >= 2:
            limit = (config.n - 1) ** 2
            for c in config.wall_counts:
                if not 0 <= c <= limit:
                    bad.append(f"wall count {c} outside 0..{limit} for n={config.n}")
    if config.kind == "trend":
        if not config.sides:
            bad.append("sides is required for kind 'trend'")
        elif any(s < 2 for s in config.sides):
            bad.append(f"all sides must be >= 2, got {list(config.sides)}")
    if config.kind == "lattice-compare":
        if not config.pairs:
            bad.append("pairs is required for kind 'lattice-compare'")
        elif any(a < 2 or b < 2 for a, b in config.pairs):
            bad.append(f"all pair sides must be >= 2, got {list(config.pairs)}")
    if config.threads < 1:
        bad.append(f"threads must be >= 1, got {config.threads}")
    return bad


def _output_names(kind: str) -> list[str]:
    return {
        "snapshot": ["snapshot.csv", "profile.csv"],
        "sweep": ["sweep.json"],
        "blind": ["blind_classes.csv", "blind_plan.json", "blind_eval.csv"],
        "walls": ["walls_samples.csv", "walls_summary.csv"],
        "maze": ["maze_samples.csv", "maze_summary.csv", "maze_histogram.json"],
        "lattice-compare": ["lattice_compare.csv"],
        "trend": ["trend.csv"],
    }[kind] + ["manifest.json"]


def _dump_json(obj, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _radii(config: ExperimentConfig, default_max: int | None = 15):
    if config.r_max is not None:
        return range(config.r_max + 1)
    if default_max is None:
        return None
    return range(default_max + 1)


def _run_snapshot(config: ExperimentConfig, out: Path) -> None:
    g = build_grid(config.n) if config.dims == 2 else build_lattice(config.n)
    marked = [config.f, *(config.marked or ())]
    state = evolve(g, marked, config.steps)
    field = node_probabilities(state)
    save_field_csv(field, out / "snapshot.csv")
    profile = radial_profile(field, config.f)
    with open(out / "profile.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["r", "shell_P", "cumulative_P"])
        for r in range(profile.max_radius + 1):
            writer.writerow(
                [r, repr(float(profile.shell[r])), repr(float(profile.cumulative[r]))]
            )


def _run_sweep(config: ExperimentConfig, out: Path) -> None:
    g = build_grid(config.n) if config.dims == 2 else build_lattice(config.n)
    marked = None if not config.marked else [config.f, *config.marked]
    res = sweep_single_F(
        g, config.f, u_max=config.u_max, r_values=_radii(config), marked=marked
    )
    _dump_json(res.to_dict(), out / "sweep.json")


def _run_blind(config: ExperimentConfig, out: Path) -> None:
    radii = _radii(config)
    bests = blind_class_bests(
        config.n, u_max=config.u_max, r_values=radii, workers=config.threads
    )
    write_class_bests_csv(bests, out / "blind_classes.csv")
    plan = blind_plan(config.n, class_bests=bests)
    evaluation = blind_evaluate(config.n, plan, workers=config.threads)
    _dump_json(
        {
            "stable_Us": plan.stable_u_s,
            "optimal_Us": plan.optimal_u_s,
            "optimal_r": plan.optimal_r,
            "mean_stable_speed": evaluation.stable_speed,
            "mean_optimal_speed": evaluation.optimal_speed,
            "mean_success_probability": evaluation.success_probability,
        },
        out / "blind_plan.json",
    )
    write_blind_eval_csv(evaluation, out / "blind_eval.csv")


def _run_walls(config: ExperimentConfig, out: Path) -> None:
    stats = walls_ensemble(
        config.n,
        config.f,
        config.wall_counts,
        samples=config.samples if config.samples is not None else 500,
        seed=config.seed,
        u_max=config.u_max,
        workers=config.threads,
    )
    write_samples_csv(stats.records, out / "walls_samples.csv")
    write_count_stats_csv(stats.per_count, out / "walls_summary.csv")


def _run_maze(config: ExperimentConfig, out: Path) -> None:
    result = maze_study(
        config.n,
        config.f,
        samples=config.samples if config.samples is not None else 50,
        seed=config.seed,
        u_max=config.u_max,
        workers=config.threads,
    )
    write_samples_csv(result.stats.records, out / "maze_samples.csv")
    write_count_stats_csv(result.stats.per_count, out / "maze_summary.csv")
    _dump_json(
        {str(k): v for k, v in sorted(result.best_u_s_histogram.items())},
        out / "maze_histogram.json",
    )


def _run_lattice_compare(config: ExperimentConfig, out: Path) -> None:
    rows = lattice_vs_grid(
        config.pairs, u_max=config.u_max, workers=config.threads
    )
    write_comparison_csv(rows, out / "lattice_compare.csv")


def _run_trend(config: ExperimentConfig, out: Path) -> None:
    rows = grid_size_trend(
        config.sides, u_max=config.u_max, workers=config.threads
    )
    write_trend_csv(rows, out / "trend.csv")


_RUNNERS = {
    "snapshot": _run_snapshot,
    "sweep": _run_sweep,
    "blind": _run_blind,
    "walls": _run_walls,
    "maze": _run_maze,
    "lattice-compare": _run_lattice_compare,
    "trend": _run_trend,
}


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def run(config: ExperimentConfig) -> int:
    """Validate, execute, and write results plus a manifest. Returns the
    process exit code."""
    violations = validate(config)
    if violations:
        for v in violations:
            print(f"config error: {v}", file=sys.stderr)
        return 1
    out = Path(config.out or os.environ.get(OUTPUT_DIR_ENV) or "results")
    names = _output_names(config.kind)
    if not config.overwrite:
        existing = [n for n in names if (out / n).exists()]
        if existing:
            print(
                f"refusing to overwrite {', '.join(existing)} in {out} "
                "(pass --overwrite to allow)",
                file=sys.stderr,
            )
            return 1
    started = time.monotonic()
    try:
        out.mkdir(parents=True, exist_ok=True)
        _RUNNERS[config.kind](config, out)
        duration = time.monotonic() - started
        result_names = [n for n in names if n != "manifest.json"]
        manifest = {
            "config": config.to_dict(),
            "version": sqrw.__version__,
            "duration_seconds": duration,
            "outputs": {n: _sha256(out / n) for n in result_names},
        }
        _dump_json(manifest, out / "manifest.json")
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


# --- argument parsing ----------------------------------------------------------


def _parse_coords(text: str) -> tuple[int, ...]:
    return tuple(int(a) for a in text.split(","))


def _parse_marked(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(_parse_coords(part) for part in text.split(";") if part)


def _parse_counts(text: str) -> tuple[int, ...]:
    if ".." in text:
        span, _, step = text.partition(":")
        lo, _, hi = span.partition("..")
        return tuple(range(int(lo), int(hi) + 1, int(step) if step else 1))
    return tuple(int(a) for a in text.split(","))


def _parse_pairs(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for part in text.split(","):
        a, _, b = part.partition(":")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqrw",
        description="Scattering-walk hybrid search experiments on grid graphs.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment")
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--n", type=int, help="grid or lattice side length")
        p.add_argument("--f", type=_parse_coords, help="target node, e.g. 40,50")
        p.add_argument(
            "--marked",
            type=_parse_marked,
            help="extra marked nodes, e.g. 6,20;12,20",
        )
        p.add_argument("--dims", type=int, choices=(2, 3), help="2 for grid, 3 for lattice")
        p.add_argument("--steps", type=int, help="walk steps (snapshot)")
        p.add_argument("--u-max", dest="u_max", type=int, help="largest U_s to sweep")
        p.add_argument("--r-max", dest="r_max", type=int, help="largest radius to sweep")
        p.add_argument("--samples", type=int, help="random samples per setting")
        p.add_argument(
            "--counts",
            dest="wall_counts",
            type=_parse_counts,
            help="wall counts, e.g. 0..1521:100 or 0,100,200",
        )
        p.add_argument(
            "--sides", type=_parse_counts, help="grid sides for trend, e.g. 8,12,16"
        )
        p.add_argument(
            "--pairs",
            type=_parse_pairs,
            help="grid:lattice side pairs, e.g. 100:22,64:16",
        )
        p.add_argument("--seed", type=int, help="master random seed (default 0)")
        p.add_argument("--threads", type=int, help="worker processes (default 1)")
        p.add_argument("--out", help=f"output directory (default ${OUTPUT_DIR_ENV} or ./results)")
        p.add_argument("--overwrite", action="store_true", default=None,
                       help="replace existing output files")
    return parser


def _merge_config(args: argparse.Namespace) -> ExperimentConfig:
    base: dict = {}
    if args.config:
        with open(args.config) as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise ValueError("config file must hold a JSON object")
    base["kind"] = args.kind
    for field in dataclasses.fields(ExperimentConfig):
        if field.name == "kind":
            continue
        value = getattr(args, field.name, None)
        if value is not None:
            base[field.name] = value
    return ExperimentConfig.from_dict(base)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _merge_config(args)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
