"""Parameter sweeps, ensembles, and comparative studies of hybrid search.

A sweep evolves one walk step at a time and folds each intermediate
probability field into speed curves, so memory stays at one state vector
plus the curves regardless of U_max. The per-step aggregation sorts nodes
by distance from the target once, then reduces shell sums and ball-size
weighted sums for all candidate radii in a few vectorised passes.

All randomised studies draw per-sample generators seeded by
(master seed, wall count, sample index), so results are identical for any
worker count and are reproducible from the seed alone.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from sqrw.geometry import (
    Geometry,
    NodeLike,
    SymmetryClass,
    build_grid,
    build_lattice,
    generate_perfect_maze,
    max_wall_count,
    place_random_walls,
    unique_octant_nodes,
)
from sqrw.search import (
    HybridParams,
    StepModel,
    distance_tables,
    optimal_hybrid_speed,
    stable_hybrid_speed,
)
from sqrw.walk import (
    ProbabilityField,
    RadialProfile,
    _marked_indices,
    _scatter,
    _step_tables,
)


class CurveBest(NamedTuple):
    """Argmin of a speed curve over U_s."""

    u_s: int
    speed: float


class SurfaceBest(NamedTuple):
    """Argmin of the bounded-search speed surface over (U_s, r)."""

    u_s: int
    r: int
    speed: float
    p_success: float


class _RadialEvaluator:
    """Folds a probability field into speed-curve terms for fixed target.

    Nodes are pre-sorted by distance from the target; per field this costs
    one gather plus shell-wise reductions, O(V * len(r_values)).
    """

    def __init__(self, model: StepModel, r_values: np.ndarray):
        d = model.distances
        self.order = np.argsort(d, kind="stable")
        d_sorted = d[self.order]
        self.n_shells = int(d_sorted[-1]) + 1
        self.starts = np.searchsorted(d_sorted, np.arange(self.n_shells))
        self.s_sorted = model.expected_steps_all[self.order]
        self.r_shell = np.minimum(r_values, self.n_shells - 1)
        ball_cols = np.minimum(r_values, model.max_distance)
        self.balls = model._tables.cum[self.order][:, ball_cols].astype(np.float64)
        self._buf = np.empty_like(self.balls)
        self._cols = np.arange(len(r_values))

    def fold(self, p_values: np.ndarray):
        """Returns (P_F, stable scan term, P_success row, numerator row).

        The numerator row lacks only +U_s; dividing by the success row gives
        the bounded-search speed for every radius at once.
        """
        ps = p_values[self.order]
        shell_p = np.add.reduceat(ps, self.starts)
        cum_p = np.cumsum(shell_p)
        cum_ps = np.cumsum(np.add.reduceat(ps * self.s_sorted, self.starts))
        np.multiply(ps[:, None], self.balls, out=self._buf)
        cum_g = np.cumsum(np.add.reduceat(self._buf, self.starts, axis=0), axis=0)
        p_success = cum_p[self.r_shell]
        far_mass = cum_p[-1] - p_success
        numer = (cum_g[-1] - cum_g[self.r_shell, self._cols]) - far_mass
        numer += cum_ps[self.r_shell]
        return ps[0], cum_ps[-1], p_success, numer


@dataclass
class SweepResult:
    """Speed curves over U_s (and radii) for one target on one geometry.

    ``optimal_surface[u, j]`` is the repeat-on-failure speed at U_s = u and
    radius ``r_values[j]``; ``success_surface`` holds the matching success
    probabilities. Bests ignore the free (U_s=0, r=0) cell and the U_s=0
    point of the quantum curve, where the model would charge nothing at all.
    """

    target: tuple[int, ...]
    u_values: np.ndarray
    r_values: np.ndarray
    stable_curve: np.ndarray
    quantum_curve: np.ndarray
    optimal_surface: np.ndarray
    success_surface: np.ndarray
    stable_best: CurveBest
    quantum_best: CurveBest
    optimal_best: SurfaceBest

    def to_dict(self) -> dict:
        return {
            "target": list(self.target),
            "u_values": self.u_values.tolist(),
            "r_values": self.r_values.tolist(),
            "stable_curve": self.stable_curve.tolist(),
            "quantum_curve": self.quantum_curve.tolist(),
            "optimal_surface": self.optimal_surface.tolist(),
            "success_surface": self.success_surface.tolist(),
            "stable_best": {"u_s": self.stable_best.u_s, "speed": self.stable_best.speed},
            "quantum_best": {
                "u_s": self.quantum_best.u_s,
                "speed": self.quantum_best.speed,
            },
            "optimal_best": {
                "u_s": self.optimal_best.u_s,
                "r": self.optimal_best.r,
                "speed": self.optimal_best.speed,
                "p_success": self.optimal_best.p_success,
            },
        }


def _normalise_radii(r_values, model: StepModel) -> np.ndarray:
    if r_values is None:
        return np.arange(model.max_distance + 1)
    rv = np.asarray(sorted(set(int(r) for r in r_values)), dtype=np.int64)
    if len(rv) == 0 or rv[0] < 0:
        raise ValueError("r_values must be a non-empty collection of radii >= 0")
    return rv


def sweep_single_F(
    g: Geometry,
    target: NodeLike,
    u_max: int | None = None,
    r_values: Iterable[int] | None = None,
    marked=None,
    tables=None,
) -> SweepResult:
    """Speed curves for every U_s in 0..u_max and every candidate radius.

    ``marked`` defaults to the target itself; pass a collection to walk with
    extra marked nodes while still searching for ``target``.
    """
    f = g.node_index(target)
    if u_max is None:
        u_max = 3 * g.side
    if u_max < 0:
        raise ValueError(f"u_max must be >= 0, got {u_max}")
    model = StepModel(g, f, tables if tables is not None else distance_tables(g))
    rv = _normalise_radii(r_values, model)
    ev = _RadialEvaluator(model, rv)

    marked_idx = _marked_indices(g, f if marked is None else marked)
    t_tail, flip = _step_tables(g, marked_idx)
    amp = np.full(g.num_states, 1.0 / math.sqrt(g.num_states))

    n_u, n_r = u_max + 1, len(rv)
    p_f = np.empty(n_u)
    scan_term = np.empty(n_u)
    p_success = np.empty((n_u, n_r))
    numer = np.empty((n_u, n_r))
    head, v = g.state_head, g.num_nodes
    for u in range(n_u):
        if u > 0:
            amp = _scatter(amp, g, t_tail, flip)
        p = np.bincount(head, weights=amp * amp, minlength=v)
        p_f[u], scan_term[u], p_success[u], numer[u] = ev.fold(p)

    u_values = np.arange(n_u)
    stable_curve = u_values + scan_term
    with np.errstate(divide="ignore", invalid="ignore"):
        quantum_curve = np.where(p_f > 0, u_values / p_f, np.inf)
        optimal_surface = np.where(
            p_success > 0, (numer + u_values[:, None]) / p_success, np.inf
        )

    stable_best = CurveBest(int(np.argmin(stable_curve)), float(stable_curve.min()))
    q_masked = quantum_curve.copy()
    q_masked[0] = np.inf
    q_u = int(np.argmin(q_masked))
    quantum_best = CurveBest(q_u, float(q_masked[q_u]))
    o_masked = optimal_surface.copy()
    if rv[0] == 0:
        o_masked[0, 0] = np.inf
    iu, ir = np.unravel_index(int(np.argmin(o_masked)), o_masked.shape)
    optimal_best = SurfaceBest(
        int(iu), int(rv[ir]), float(o_masked[iu, ir]), float(p_success[iu, ir])
    )
    return SweepResult(
        target=g.node_coords(f),
        u_values=u_values,
        r_values=rv,
        stable_curve=stable_curve,
        quantum_curve=quantum_curve,
        optimal_surface=optimal_surface,
        success_surface=p_success,
        stable_best=stable_best,
        quantum_best=quantum_best,
        optimal_best=optimal_best,
    )


# --- shared worker plumbing ---------------------------------------------------

_GRID_CACHE: dict[tuple[int, int], Geometry] = {}


def _cached_open(dims: int, side: int) -> Geometry:
    g = _GRID_CACHE.get((dims, side))
    if g is None:
        g = build_grid(side) if dims == 2 else build_lattice(side)
        distance_tables(g)
        _GRID_CACHE[(dims, side)] = g
    return g


def _run_tasks(fn, tasks: list, workers: int) -> list:
    """Order-preserving map, inline or over a process pool."""
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


# --- blind search over symmetry classes ---------------------------------------

_DEFAULT_BLIND_RADII = tuple(range(16))


@dataclass(frozen=True)
class PerClassBest:
    """Sweep argmins for one symmetry class representative."""

    representative: tuple[int, int]
    multiplicity: int
    stable_u_s: int
    stable_speed: float
    optimal_u_s: int
    optimal_r: int
    optimal_speed: float
    optimal_success: float


@dataclass(frozen=True)
class BlindPlan:
    """Target-independent hybrid settings: multiplicity-weighted average
    argmins over all symmetry classes, rounded to integers."""

    stable_u_s: int
    optimal_u_s: int
    optimal_r: int


@dataclass(frozen=True)
class PerClassEval:
    representative: tuple[int, int]
    multiplicity: int
    stable_speed: float
    optimal_speed: float
    p_success: float
    search_steps: float  # classical steps of the successful bounded search


@dataclass(frozen=True)
class BlindEvaluation:
    """Blind-plan performance aggregated over all targets of a grid.

    ``stable_speed`` is the multiplicity-weighted mean of the per-target
    stable speeds.  ``optimal_speed`` treats the whole ensemble as a single
    repeat-until-success process: each attempt invests ``plan.optimal_u_s``
    unitary steps and succeeds at the ensemble-average rate, and the final
    successful attempt adds the ensemble-average bounded-search cost —
    optimal_u_s / success_probability + mean(search_steps).  The faithful
    per-target expectations (which also price the classical verification of
    failed attempts) are kept in ``per_class`` for histograms.
    """

    plan: BlindPlan
    stable_speed: float
    optimal_speed: float
    success_probability: float
    per_class: tuple[PerClassEval, ...]


def _class_best_task(task) -> PerClassBest:
    side, x, y, mult, u_max, radii = task
    g = _cached_open(2, side)
    res = sweep_single_F(g, (x, y), u_max=u_max, r_values=radii)
    return PerClassBest(
        representative=(x, y),
        multiplicity=mult,
        stable_u_s=res.stable_best.u_s,
        stable_speed=res.stable_best.speed,
        optimal_u_s=res.optimal_best.u_s,
        optimal_r=res.optimal_best.r,
        optimal_speed=res.optimal_best.speed,
        optimal_success=res.optimal_best.p_success,
    )


def blind_class_bests(
    side: int,
    u_max: int | None = None,
    r_values: Iterable[int] = _DEFAULT_BLIND_RADII,
    workers: int = 1,
) -> list[PerClassBest]:
    """Per-symmetry-class sweep argmins for an open grid."""
    if u_max is None:
        u_max = 3 * side
    radii = tuple(int(r) for r in r_values)
    classes = unique_octant_nodes(side)
    tasks = [(side, c.representative[0], c.representative[1], c.multiplicity, u_max, radii) for c in classes]
    return _run_tasks(_class_best_task, tasks, workers)


def blind_plan(
    side: int,
    u_max: int | None = None,
    r_values: Iterable[int] = _DEFAULT_BLIND_RADII,
    workers: int = 1,
    class_bests: Sequence[PerClassBest] | None = None,
) -> BlindPlan:
    """Average the per-class argmins into one target-independent setting.

    Pass ``class_bests`` to reuse an existing blind_class_bests result.
    """
    bests = (
        list(class_bests)
        if class_bests is not None
        else blind_class_bests(side, u_max, r_values, workers)
    )
    w = np.array([b.multiplicity for b in bests], dtype=np.float64)
    total = w.sum()
    mean = lambda xs: float(np.dot(w, xs) / total)
    return BlindPlan(
        stable_u_s=round(mean([b.stable_u_s for b in bests])),
        optimal_u_s=round(mean([b.optimal_u_s for b in bests])),
        optimal_r=round(mean([b.optimal_r for b in bests])),
    )


def _blind_eval_task(task) -> PerClassEval:
    side, x, y, mult, stable_u, opt_u, opt_r = task
    g = _cached_open(2, side)
    model = StepModel(g, (x, y))
    t_tail, flip = _step_tables(g, _marked_indices(g, (x, y)))
    amp = np.full(g.num_states, 1.0 / math.sqrt(g.num_states))
    fields: dict[int, np.ndarray] = {}
    for u in range(max(stable_u, opt_u) + 1):
        if u > 0:
            amp = _scatter(amp, g, t_tail, flip)
        if u in (stable_u, opt_u):
            fields[u] = np.bincount(
                g.state_head, weights=amp * amp, minlength=g.num_nodes
            )
    stable_field = ProbabilityField(g, fields[stable_u])
    stable = stable_hybrid_speed(stable_field, model, stable_u)
    opt_field = ProbabilityField(g, fields[opt_u])
    shell = np.bincount(model.distances, weights=opt_field.values)
    profile = RadialProfile(g.node_coords(model.target), shell, np.cumsum(shell))
    report = optimal_hybrid_speed(
        opt_field, profile, model, HybridParams(opt_u, opt_r)
    )
    return PerClassEval(
        representative=(x, y),
        multiplicity=mult,
        stable_speed=stable,
        optimal_speed=report.optimal_speed,
        p_success=report.p_success,
        search_steps=report.s_f,
    )


def blind_evaluate(side: int, plan: BlindPlan, workers: int = 1) -> BlindEvaluation:
    """Run the blind plan against every target (by symmetry class) and
    average the resulting speeds with class multiplicities."""
    classes = unique_octant_nodes(side)
    tasks = [
        (
            side,
            c.representative[0],
            c.representative[1],
            c.multiplicity,
            plan.stable_u_s,
            plan.optimal_u_s,
            plan.optimal_r,
        )
        for c in classes
    ]
    rows = _run_tasks(_blind_eval_task, tasks, workers)
    w = np.array([r.multiplicity for r in rows], dtype=np.float64)
    total = w.sum()
    mean = lambda xs: float(np.dot(w, xs) / total)
    p_bar = mean([r.p_success for r in rows])
    return BlindEvaluation(
        plan=plan,
        stable_speed=mean([r.stable_speed for r in rows]),
        optimal_speed=plan.optimal_u_s / p_bar
        + mean([r.search_steps for r in rows]),
        success_probability=p_bar,
        per_class=tuple(rows),
    )


# --- randomised ensembles ------------------------------------------------------


@dataclass(frozen=True)
class SampleRecord:
    """Sweep argmins for one random geometry sample."""

    wall_count: int
    sample_id: int
    stable_speed: float
    stable_u_s: int
    optimal_speed: float
    optimal_u_s: int
    optimal_r: int
    failed: bool


@dataclass(frozen=True)
class CountStats:
    """Success-only speed statistics for one wall count."""

    wall_count: int
    samples: int
    failures: int
    failure_pct: float
    stable_mean: float
    stable_std: float
    optimal_mean: float
    optimal_std: float


@dataclass(frozen=True)
class EnsembleStats:
    records: tuple[SampleRecord, ...]
    per_count: tuple[CountStats, ...]


def _aggregate(records: Sequence[SampleRecord]) -> tuple[CountStats, ...]:
    stats = []
    for count in sorted({r.wall_count for r in records}):
        group = [r for r in records if r.wall_count == count]
        ok = [r for r in group if not r.failed]

        def moments(values: list[float]) -> tuple[float, float]:
            if not values:
                return math.nan, math.nan
            if len(values) == 1:
                return values[0], 0.0
            arr = np.asarray(values)
            return float(arr.mean()), float(arr.std(ddof=1))

        s_mean, s_std = moments([r.stable_speed for r in ok])
        o_mean, o_std = moments([r.optimal_speed for r in ok])
        stats.append(
            CountStats(
                wall_count=count,
                samples=len(group),
                failures=len(group) - len(ok),
                failure_pct=100.0 * (len(group) - len(ok)) / len(group),
                stable_mean=s_mean,
                stable_std=s_std,
                optimal_mean=o_mean,
                optimal_std=o_std,
            )
        )
    return tuple(stats)


def _walls_sample_task(task) -> SampleRecord:
    side, target, count, seed, sample_id, u_max = task
    rng = np.random.default_rng([seed, count, sample_id])
    g = place_random_walls(build_grid(side), count, rng)
    res = sweep_single_F(g, target, u_max=u_max)
    failed = min(res.stable_best.speed, res.optimal_best.speed) >= side * side / 2
    return SampleRecord(
        wall_count=count,
        sample_id=sample_id,
        stable_speed=res.stable_best.speed,
        stable_u_s=res.stable_best.u_s,
        optimal_speed=res.optimal_best.speed,
        optimal_u_s=res.optimal_best.u_s,
        optimal_r=res.optimal_best.r,
        failed=failed,
    )


def walls_ensemble(
    side: int,
    target: NodeLike,
    wall_counts: Iterable[int],
    samples: int = 500,
    seed: int = 0,
    u_max: int | None = None,
    workers: int = 1,
) -> EnsembleStats:
    """Sweep statistics over random walled grids, per wall count.

    Uses the full radius range and U_max = N^2/2 by default, so a sample is
    failed exactly when even its best setting is no better than checking
    half the nodes. Speed statistics cover successful samples only.
    """
    probe = build_grid(side)
    counts = sorted(set(int(c) for c in wall_counts))
    limit = max_wall_count(probe)
    for c in counts:
        if not 0 <= c <= limit:
            raise ValueError(f"wall count {c} outside 0..{limit}")
    if u_max is None:
        u_max = side * side // 2
    target = probe.node_coords(probe.node_index(target))
    tasks = [
        (side, target, count, seed, k, u_max)
        for count in counts
        for k in range(samples)
    ]
    records = tuple(_run_tasks(_walls_sample_task, tasks, workers))
    return EnsembleStats(records=records, per_count=_aggregate(records))


@dataclass(frozen=True)
class MazeStudyResult:
    stats: EnsembleStats
    best_u_s_histogram: dict[int, int]


def _maze_sample_task(task) -> SampleRecord:
    side, target, seed, sample_id, u_max = task
    walls = max_wall_count(build_grid(side))
    rng = np.random.default_rng([seed, walls, sample_id])
    g = generate_perfect_maze(side, rng)
    res = sweep_single_F(g, target, u_max=u_max)
    # A maze sample fails when the walk never helps: a best setting with
    # U_s = 0 is a plain classical scan, so only a sub-threshold speed
    # reached with U_s > 0 counts as a quantum-assisted win.
    threshold = side * side / 2
    helped = (
        res.stable_best.u_s > 0 and res.stable_best.speed < threshold
    ) or (res.optimal_best.u_s > 0 and res.optimal_best.speed < threshold)
    return SampleRecord(
        wall_count=walls,
        sample_id=sample_id,
        stable_speed=res.stable_best.speed,
        stable_u_s=res.stable_best.u_s,
        optimal_speed=res.optimal_best.speed,
        optimal_u_s=res.optimal_best.u_s,
        optimal_r=res.optimal_best.r,
        failed=not helped,
    )


def maze_study(
    side: int,
    target: NodeLike,
    samples: int = 50,
    seed: int = 0,
    u_max: int | None = None,
    workers: int = 1,
) -> MazeStudyResult:
    """Sweep statistics over random perfect mazes, plus the histogram of the
    per-sample best stable U_s (walks spread poorly in trees, so the mass
    sits at 0).

    Unlike the walls ensemble, a maze sample counts as failed when no
    setting with U_s > 0 beats checking half the nodes: when the argmin
    sits at U_s = 0 the "hybrid" is just a classical scan, so even a
    sub-threshold speed there is not a quantum-assisted win."""
    if u_max is None:
        u_max = side * side // 2
    probe = build_grid(side)
    target = probe.node_coords(probe.node_index(target))
    tasks = [(side, target, seed, k, u_max) for k in range(samples)]
    records = tuple(_run_tasks(_maze_sample_task, tasks, workers))
    hist: dict[int, int] = {}
    for r in records:
        hist[r.stable_u_s] = hist.get(r.stable_u_s, 0) + 1
    return MazeStudyResult(
        stats=EnsembleStats(records=records, per_count=_aggregate(records)),
        best_u_s_histogram=hist,
    )


# --- comparative studies --------------------------------------------------------


@dataclass(frozen=True)
class TrendRow:
    """Best speeds for one grid size, with the ideal-speedup reference
    sqrt(N^2 / 2) = N / sqrt(2)."""

    side: int
    nodes: int
    stable_u_s: int
    stable_speed: float
    optimal_u_s: int
    optimal_r: int
    optimal_speed: float
    reference: float


def _trend_task(task) -> TrendRow:
    side, u_max, radii = task
    g = _cached_open(2, side)
    f = (int(side / 4 + 0.5), int(side / 4 + 0.5))
    res = sweep_single_F(g, f, u_max=u_max, r_values=radii)
    return TrendRow(
        side=side,
        nodes=side * side,
        stable_u_s=res.stable_best.u_s,
        stable_speed=res.stable_best.speed,
        optimal_u_s=res.optimal_best.u_s,
        optimal_r=res.optimal_best.r,
        optimal_speed=res.optimal_best.speed,
        reference=side / math.sqrt(2),
    )


def grid_size_trend(
    sides: Iterable[int],
    u_max: int | None = None,
    r_values: Iterable[int] = _DEFAULT_BLIND_RADII,
    workers: int = 1,
) -> list[TrendRow]:
    """Best hybrid speeds across grid sizes, target near (N/4, N/4)."""
    radii = tuple(int(r) for r in r_values)
    tasks = [
        (int(s), 3 * int(s) if u_max is None else int(u_max), radii) for s in sides
    ]
    return _run_tasks(_trend_task, tasks, workers)


@dataclass(frozen=True)
class ComparisonRow:
    """Best stable speeds for a grid and a lattice of similar node count."""

    grid_side: int
    lattice_side: int
    grid_nodes: int
    lattice_nodes: int
    grid_u_s: int
    grid_speed: float
    lattice_u_s: int
    lattice_speed: float


def _comparison_task(task) -> ComparisonRow:
    grid_side, lattice_side, u_max, radii = task
    g2 = _cached_open(2, grid_side)
    f2 = (round(0.4 * grid_side), round(0.5 * grid_side))
    res2 = sweep_single_F(g2, f2, u_max=u_max, r_values=radii)
    g3 = _cached_open(3, lattice_side)
    f3 = (
        round(0.4 * lattice_side),
        round(0.5 * lattice_side),
        round(0.5 * lattice_side),
    )
    res3 = sweep_single_F(g3, f3, u_max=u_max, r_values=radii)
    return ComparisonRow(
        grid_side=grid_side,
        lattice_side=lattice_side,
        grid_nodes=grid_side**2,
        lattice_nodes=lattice_side**3,
        grid_u_s=res2.stable_best.u_s,
        grid_speed=res2.stable_best.speed,
        lattice_u_s=res3.stable_best.u_s,
        lattice_speed=res3.stable_best.speed,
    )


def lattice_vs_grid(
    pairs: Iterable[tuple[int, int]],
    u_max: int | None = None,
    r_values: Iterable[int] = _DEFAULT_BLIND_RADII,
    workers: int = 1,
) -> list[ComparisonRow]:
    """Best stable hybrid speeds for (grid side, lattice side) pairs with
    similar node totals, both targets at the proportional (0.4, 0.5) point."""
    radii = tuple(int(r) for r in r_values)
    tasks = []
    for gn, ln in pairs:
        u = u_max if u_max is not None else 3 * max(int(gn), int(ln))
        tasks.append((int(gn), int(ln), u, radii))
    return _run_tasks(_comparison_task, tasks, workers)


# --- CSV serialization -----------------------------------------------------------

_SAMPLE_COLUMNS = [
    "wall_count",
    "sample_id",
    "stable_speed",
    "stable_Us",
    "optimal_speed",
    "optimal_Us",
    "optimal_r",
    "failed",
]


def write_samples_csv(records: Sequence[SampleRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_SAMPLE_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.wall_count,
                    r.sample_id,
                    repr(r.stable_speed),
                    r.stable_u_s,
                    repr(r.optimal_speed),
                    r.optimal_u_s,
                    r.optimal_r,
                    int(r.failed),
                ]
            )


def read_samples_csv(path) -> tuple[SampleRecord, ...]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != _SAMPLE_COLUMNS:
            raise ValueError(f"unexpected sample CSV header: {header}")
        for row in reader:
            records.append(
                SampleRecord(
                    wall_count=int(row[0]),
                    sample_id=int(row[1]),
                    stable_speed=float(row[2]),
                    stable_u_s=int(row[3]),
                    optimal_speed=float(row[4]),
                    optimal_u_s=int(row[5]),
                    optimal_r=int(row[6]),
                    failed=bool(int(row[7])),
                )
            )
    return tuple(records)


def write_count_stats_csv(stats: Sequence[CountStats], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "wall_count",
                "samples",
                "failures",
                "failure_pct",
                "stable_mean",
                "stable_std",
                "optimal_mean",
                "optimal_std",
            ]
        )
        for s in stats:
            writer.writerow(
                [
                    s.wall_count,
                    s.samples,
                    s.failures,
                    repr(s.failure_pct),
                    repr(s.stable_mean),
                    repr(s.stable_std),
                    repr(s.optimal_mean),
                    repr(s.optimal_std),
                ]
            )


def write_trend_csv(rows: Sequence[TrendRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "n",
                "nodes",
                "stable_Us",
                "stable_speed",
                "optimal_Us",
                "optimal_r",
                "optimal_speed",
                "reference",
            ]
        )
        for r in rows:
            writer.writerow(
                [
                    r.side,
                    r.nodes,
                    r.stable_u_s,
                    repr(r.stable_speed),
                    r.optimal_u_s,
                    r.optimal_r,
                    repr(r.optimal_speed),
                    repr(r.reference),
                ]
            )


def write_class_bests_csv(bests: Sequence[PerClassBest], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "x",
                "y",
                "multiplicity",
                "stable_Us",
                "stable_speed",
                "optimal_Us",
                "optimal_r",
                "optimal_speed",
                "optimal_success",
            ]
        )
        for b in bests:
            writer.writerow(
                [
                    b.representative[0],
                    b.representative[1],
                    b.multiplicity,
                    b.stable_u_s,
                    repr(b.stable_speed),
                    b.optimal_u_s,
                    b.optimal_r,
                    repr(b.optimal_speed),
                    repr(b.optimal_success),
                ]
            )


def write_blind_eval_csv(evaluation: BlindEvaluation, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "x",
                "y",
                "multiplicity",
                "stable_speed",
                "optimal_speed",
                "p_success",
                "search_steps",
            ]
        )
        for r in evaluation.per_class:
            writer.writerow(
                [
                    r.representative[0],
                    r.representative[1],
                    r.multiplicity,
                    repr(r.stable_speed),
                    repr(r.optimal_speed),
                    repr(r.p_success),
                    repr(r.search_steps),
                ]
            )


def write_comparison_csv(rows: Sequence[ComparisonRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "grid_n",
                "lattice_n",
                "grid_nodes",
                "lattice_nodes",
                "grid_Us",
                "grid_speed",
                "lattice_Us",
                "lattice_speed",
            ]
        )
        for r in rows:
            writer.writerow(
                [
                    r.grid_side,
                    r.lattice_side,
                    r.grid_nodes,
                    r.lattice_nodes,
                    r.grid_u_s,
                    repr(r.grid_speed),
                    r.lattice_u_s,
                    repr(r.lattice_speed),
                ]
            )
