"""Scattering-walk evolution on a Geometry.

Basis states are directed edges |A,B> (the particle on edge A-B, entering B).
Each step scatters every state off its head node: a degree-n node reflects
with amplitude -(n-2)/n and transmits with 2/n to every other incident edge.
Marked nodes use the negated operator, +(n-2)/n and -2/n, which is what makes
probability pile up there. The initial state is the equal superposition of
all directed edges, which is exactly stationary when nothing is marked.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from sqrw.geometry import Geometry, NodeLike, bfs_distances


class IsolatedNodeError(ValueError):
    """Scattering is undefined at a node with no incident edges."""


@dataclass(frozen=True)
class ScatterCoefficients:
    """Reflection and transmission amplitudes at a degree-n node."""

    n: int
    r: float
    t: float

    def matrix(self, marked: bool = False) -> np.ndarray:
        """The local n x n scattering matrix, (2/n)J - I, negated if marked."""
        m = np.full((self.n, self.n), self.t)
        np.fill_diagonal(m, -self.r)
        return -m if marked else m


def coefficients(n: int) -> ScatterCoefficients:
    """Scattering coefficients at a degree-n node: t = 2/n, r = (n-2)/n."""
    if n < 1:
        raise IsolatedNodeError(f"node degree must be >= 1, got {n}")
    return ScatterCoefficients(n, (n - 2) / n, 2 / n)


@dataclass
class WalkState:
    """Amplitudes over the directed-edge basis of a geometry."""

    geometry: Geometry
    amplitudes: np.ndarray

    def norm(self) -> float:
        a = self.amplitudes
        return float(np.sqrt(np.sum(a.real**2 + a.imag**2)))

    def amplitude(self, tail: NodeLike, head: NodeLike) -> complex:
        return complex(self.amplitudes[self.geometry.state_index(tail, head)])


def initial_state(g: Geometry) -> WalkState:
    """The equal superposition over all directed edges."""
    amps = np.full(g.num_states, 1.0 / np.sqrt(g.num_states), dtype=np.complex128)
    return WalkState(g, amps)


def _marked_indices(g: Geometry, marked) -> np.ndarray:
    """Node indices of the marked set.

    Accepts a single node (int or coordinate tuple of ints) or an iterable
    of nodes; None or an empty iterable means nothing is marked.
    """
    if marked is None:
        nodes: list = []
    elif isinstance(marked, (int, np.integer)):
        nodes = [marked]
    elif isinstance(marked, tuple) and all(
        isinstance(a, (int, np.integer)) for a in marked
    ):
        nodes = [marked]
    else:
        nodes = list(marked)
    return np.asarray(sorted(g.node_index(v) for v in nodes), dtype=np.int64)


def _step_tables(g: Geometry, marked_idx: np.ndarray):
    """Per-state transmission amplitudes and the states whose sign flips."""
    t_tail = (2.0 / g.degrees)[g.state_tail]
    if len(marked_idx):
        flip = np.flatnonzero(np.isin(g.state_tail, marked_idx))
    else:
        flip = np.empty(0, dtype=np.int64)
    return t_tail, flip


def _scatter(amp: np.ndarray, g: Geometry, t_tail: np.ndarray, flip: np.ndarray):
    """One scattering step applied to an amplitude vector (real or complex)."""
    v = g.num_nodes
    if np.iscomplexobj(amp):
        s = np.bincount(g.state_head, weights=amp.real, minlength=v).astype(
            np.complex128
        )
        s.imag = np.bincount(g.state_head, weights=amp.imag, minlength=v)
    else:
        s = np.bincount(g.state_head, weights=amp, minlength=v)
    out = t_tail * s[g.state_tail]
    out -= amp[g.state_reverse]
    if len(flip):
        out[flip] = -out[flip]
    return out


def step(state: WalkState, marked=None) -> WalkState:
    """One step of the scattering walk with the given marked nodes."""
    g = state.geometry
    t_tail, flip = _step_tables(g, _marked_indices(g, marked))
    return WalkState(g, _scatter(state.amplitudes, g, t_tail, flip))


def evolve(g: Geometry, marked=None, steps: int = 0) -> WalkState:
    """Evolve the equal superposition for ``steps`` scattering steps."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    t_tail, flip = _step_tables(g, _marked_indices(g, marked))
    amp = initial_state(g).amplitudes
    for _ in range(steps):
        amp = _scatter(amp, g, t_tail, flip)
    return WalkState(g, amp)


@dataclass
class ProbabilityField:
    """Per-node probability of finding the walker, P(v) = sum of |amp|^2
    over the directed edges entering v."""

    geometry: Geometry
    values: np.ndarray

    def at(self, node: NodeLike) -> float:
        return float(self.values[self.geometry.node_index(node)])

    def total(self) -> float:
        return float(self.values.sum())

    def peak(self) -> tuple[int, ...]:
        """Coordinates of the most probable node."""
        return self.geometry.node_coords(int(np.argmax(self.values)))


def node_probabilities(state: WalkState) -> ProbabilityField:
    """Collapse a walk state to node probabilities."""
    a = state.amplitudes
    w = a.real**2 + a.imag**2
    g = state.geometry
    return ProbabilityField(
        g, np.bincount(g.state_head, weights=w, minlength=g.num_nodes)
    )


@dataclass
class RadialProfile:
    """Probability aggregated by graph distance from a target node."""

    target: tuple[int, ...]
    shell: np.ndarray
    cumulative: np.ndarray

    @property
    def max_radius(self) -> int:
        return len(self.shell) - 1

    def within(self, radius: int) -> float:
        """Total probability within the given graph distance of the target."""
        if radius < 0:
            return 0.0
        return float(self.cumulative[min(radius, self.max_radius)])


def radial_profile(field: ProbabilityField, target: NodeLike) -> RadialProfile:
    """Cumulative probability by graph distance from ``target``."""
    g = field.geometry
    f = g.node_index(target)
    d = bfs_distances(g, f)
    shell = np.bincount(d, weights=field.values)
    return RadialProfile(g.node_coords(f), shell, np.cumsum(shell))


def save_field_csv(field: ProbabilityField, path) -> None:
    """Write a probability field as coordinate columns plus P, one node per row."""
    g = field.geometry
    header = ["x", "y", "z"][: g.dims] + ["P"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(g.num_nodes):
            writer.writerow([*g.node_coords(i), repr(float(field.values[i]))])


def load_field_csv(path, g: Geometry) -> ProbabilityField:
    """Read a probability field written by save_field_csv."""
    values = np.zeros(g.num_nodes)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[: g.dims] != ["x", "y", "z"][: g.dims] or header[g.dims] != "P":
            raise ValueError(f"unexpected field CSV header: {header}")
        for row in reader:
            coords = tuple(int(a) for a in row[: g.dims])
            values[g.node_index(coords)] = float(row[g.dims])
    return ProbabilityField(g, values)
