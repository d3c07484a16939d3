"""Classical search costs and hybrid search speed formulas.

The classical piece models a breadth-first scan outward from a start node:
nodes are checked shell by shell (uniformly random order within a shell)
until the target is found. ``StepModel`` precomputes everything needed to
evaluate that cost for every start at once, including ball sizes for
radius-bounded scans. On open grids and lattices shell sizes come from a
separable convolution of per-axis counts; walled geometries fall back to
all-pairs shortest paths.

The speed formulas combine a quantum stage (amplitude concentration over
U_s walk steps, then a position measurement) with a classical scan from
the measured node, including the repeat-on-failure variant whose expected
cost is a geometric series over attempts.
"""

from __future__ import annotations

import json
import weakref
from dataclasses import asdict, dataclass
from functools import cached_property

import numpy as np
from scipy.sparse.csgraph import dijkstra

from sqrw.geometry import Geometry, NodeLike, bfs_distances
from sqrw.walk import ProbabilityField, RadialProfile


class UndefinedSpeedError(ValueError):
    """A speed formula was evaluated where its success probability is zero."""


class DivergentSeriesError(ValueError):
    """The geometric series only converges for |p| < 1."""


# --- shell and ball tables --------------------------------------------------


def _axis_shell_counts(side: int) -> np.ndarray:
    """counts[c-1, k] = how many of 1..side lie at distance k from c."""
    c = np.arange(1, side + 1)[:, None]
    k = np.arange(side)[None, :]
    counts = (c - k >= 1).astype(np.int64) + (c + k <= side).astype(np.int64)
    counts[:, 0] = 1
    return counts


def _open_shell_table(dims: int, side: int) -> np.ndarray:
    """Shell sizes for every node of an open grid/lattice, shape (V, maxd+1).

    Taxicab shells factor over axes, so the table is a convolution of
    per-axis counts, done here with FFTs.
    """
    length = dims * (side - 1) + 1
    f = np.fft.rfft(_axis_shell_counts(side), n=length, axis=1)
    if dims == 2:
        prod = f[:, None, :] * f[None, :, :]
    else:
        prod = f[:, None, None, :] * f[None, :, None, :] * f[None, None, :, :]
    shells = np.fft.irfft(prod, n=length, axis=-1)
    table = np.rint(shells).astype(np.int64).reshape(side**dims, length)
    assert int(table.sum()) == (side**dims) ** 2
    return table


class _DistanceTables:
    """Per-geometry distance aggregates: cumulative ball sizes and distances.

    Holds no reference back to the geometry, so the weak-keyed memoisation
    cache can release a geometry and its tables together.
    """

    def __init__(self, g: Geometry):
        v = g.num_nodes
        open_edge_count = g.dims * g.side ** (g.dims - 1) * (g.side - 1)
        self._open = not g.removed_edges and g.num_edges == open_edge_count
        self._coords = g.coords if self._open else None
        self._adj = None
        if self._open:
            shells = _open_shell_table(g.dims, g.side)
            self._dist = None
        else:
            shells, self._dist = self._all_pairs_shells(g)
            if self._dist is None:
                self._adj = g.adjacency()
        self.cum = np.cumsum(shells, axis=1)
        assert np.all(self.cum[:, -1] == v)
        self.max_distance = self.cum.shape[1] - 1
        self.cum.setflags(write=False)

    @staticmethod
    def _all_pairs_shells(g: Geometry):
        v = g.num_nodes
        adj = g.adjacency()
        keep_dist = v <= 6000
        dist = np.empty((v, v), dtype=np.int16) if keep_dist else None
        counts: list[np.ndarray] = []
        widths: list[int] = []
        for lo in range(0, v, 2048):
            idx = np.arange(lo, min(lo + 2048, v))
            block = dijkstra(adj, directed=False, unweighted=True, indices=idx)
            block = block.astype(np.int32)
            if keep_dist:
                dist[idx] = block
            width = int(block.max()) + 1
            chunk = np.zeros((len(idx), width), dtype=np.int64)
            rows = np.repeat(np.arange(len(idx)), v)
            np.add.at(chunk, (rows, block.ravel()), 1)
            counts.append(chunk)
            widths.append(width)
        width = max(widths)
        shells = np.zeros((v, width), dtype=np.int64)
        row = 0
        for chunk in counts:
            shells[row : row + len(chunk), : chunk.shape[1]] = chunk
            row += len(chunk)
        return shells, dist

    def distances_from(self, node: int) -> np.ndarray:
        if self._open:
            return np.abs(self._coords - self._coords[node]).sum(axis=1)
        if self._dist is not None:
            return self._dist[node].astype(np.int64)
        row = dijkstra(self._adj, directed=False, unweighted=True, indices=[node])
        return row[0].astype(np.int64)


_TABLES: "weakref.WeakKeyDictionary[Geometry, _DistanceTables]" = (
    weakref.WeakKeyDictionary()
)


def distance_tables(g: Geometry) -> _DistanceTables:
    """Shared (memoised) distance aggregates for a geometry."""
    tables = _TABLES.get(g)
    if tables is None:
        tables = _DistanceTables(g)
        _TABLES[g] = tables
    return tables


# --- classical scan costs ----------------------------------------------------


def expected_bfs_steps(g: Geometry, start: NodeLike, target: NodeLike) -> float:
    """Expected nodes checked by a breadth-first scan from start to target.

    Shells are checked in distance order, uniformly shuffled within each
    shell; all shells strictly closer than the target are exhausted, and the
    target sits at expected position (m+1)/2 of its own shell of size m.
    Zero when start equals target.
    """
    s, f = g.node_index(start), g.node_index(target)
    if s == f:
        return 0.0
    d = bfs_distances(g, s)
    df = d[f]
    closer = int(np.count_nonzero(d < df)) - 1
    shell = int(np.count_nonzero(d == df))
    return closer + (shell + 1) / 2


class StepModel:
    """Expected breadth-first scan costs toward a fixed target node."""

    def __init__(self, g: Geometry, target: NodeLike, tables: _DistanceTables | None = None):
        self.geometry = g
        self.target = g.node_index(target)
        self._tables = tables if tables is not None else distance_tables(g)
        self.distances = self._tables.distances_from(self.target)
        self.distances.setflags(write=False)

    @property
    def max_distance(self) -> int:
        """Largest node-to-node distance in the geometry."""
        return self._tables.max_distance

    @property
    def eccentricity(self) -> int:
        """Largest distance from the target."""
        return int(self.distances.max())

    @cached_property
    def expected_steps_all(self) -> np.ndarray:
        """expected_bfs_steps from every start node, as one vector."""
        d = self.distances
        v = self.geometry.num_nodes
        rows = np.arange(v)
        cum_prev = self._tables.cum[rows, np.maximum(d - 1, 0)]
        shell = self._tables.cum[rows, d] - cum_prev
        out = (cum_prev - 1) + (shell + 1) / 2
        out[self.target] = 0.0
        out.setflags(write=False)
        return out

    def expected_steps(self, start: NodeLike) -> float:
        return float(self.expected_steps_all[self.geometry.node_index(start)])

    def ball_sizes(self, radius: int) -> np.ndarray:
        """Nodes within the given distance of each node (the node included)."""
        if radius < 0:
            raise ValueError(f"radius must be >= 0, got {radius}")
        return self._tables.cum[:, min(radius, self.max_distance)]

    def ball_size(self, start: NodeLike, radius: int) -> int:
        return int(self.ball_sizes(radius)[self.geometry.node_index(start)])


# --- speed formulas ----------------------------------------------------------


@dataclass(frozen=True)
class HybridParams:
    """One hybrid configuration: walk length and classical scan radius."""

    u_s: int
    r: int


@dataclass(frozen=True)
class SpeedReport:
    """Expected search costs for one (U_s, r) configuration.

    ``optimal_speed`` is the repeat-on-failure expectation; ``stable_speed``
    the unbounded single scan; ``quantum`` the measure-until-hit baseline
    (None when P_F is zero).
    """

    u_s: int
    r: int
    optimal_speed: float
    stable_speed: float
    quantum_speed: float | None
    p_f: float
    p_success: float
    p_fail: float
    s_f: float
    s_max: float

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SpeedReport":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SpeedReport":
        return cls.from_dict(json.loads(text))


def quantum_speed(p_f: float, u_s: float) -> float:
    """Expected cost of repeating (U_s walk steps + measure) until the target
    is hit, when each measurement succeeds with probability P_F."""
    if p_f <= 0:
        raise UndefinedSpeedError("target probability is zero")
    return u_s / p_f


def stable_hybrid_speed(field: ProbabilityField, model: StepModel, u_s: float) -> float:
    """Walk for U_s steps, measure once, then scan outward until the target
    is found: U_s + sum_x P(x) S(x, F)."""
    return float(u_s + field.values @ model.expected_steps_all)


def geometric_closed_form(a: float, b: float, p: float) -> float:
    """Closed form of sum_{k>=1} p^(k-1) (a (k-1) + b) for |p| < 1."""
    if abs(p) >= 1:
        raise DivergentSeriesError(f"series diverges for |p| >= 1, got p={p}")
    return (a * p - b * p + b) / (1 - p) ** 2


def optimal_hybrid_speed(
    field: ProbabilityField,
    profile: RadialProfile,
    model: StepModel,
    params: HybridParams,
) -> SpeedReport:
    """Expected cost of the radius-bounded hybrid with repeat on failure.

    Each attempt walks U_s steps, measures, and scans at most radius r around
    the measured node. An attempt succeeds with P_success = P(d(x, F) <= r),
    costing U_s + S_F on the successful attempt and U_s + S_max per failed
    one, where S_F averages the scan cost over successful measurements and
    S_max averages the exhausted-ball cost over failed ones. Summing the
    geometric series over attempts gives
    (P_fail (S_max - S_F) + U_s + S_F) / P_success.
    """
    u_s, r = params.u_s, params.r
    if r < 0:
        raise ValueError(f"radius must be >= 0, got {r}")
    p_success = profile.within(r)
    if p_success <= 0:
        raise UndefinedSpeedError(
            f"no probability within radius {r} of the target; the bounded "
            "search never succeeds"
        )
    p_success = min(p_success, 1.0)
    p_fail = 1.0 - p_success
    p = field.values
    steps = model.expected_steps_all
    inside = model.distances <= r
    s_f = float(p[inside] @ steps[inside]) / p_success
    if p_fail > 0:
        balls = model.ball_sizes(r)
        s_max = float(p[~inside] @ (balls[~inside] - 1)) / p_fail
    else:
        s_max = 0.0
    speed = (p_fail * (s_max - s_f) + u_s + s_f) / p_success
    p_f_val = float(p[model.target])
    return SpeedReport(
        u_s=u_s,
        r=r,
        optimal_speed=speed,
        stable_speed=stable_hybrid_speed(field, model, u_s),
        quantum_speed=(u_s / p_f_val) if p_f_val > 0 else None,
        p_f=p_f_val,
        p_success=p_success,
        p_fail=p_fail,
        s_f=s_f,
        s_max=s_max,
    )
