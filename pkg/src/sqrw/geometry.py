"""Graph geometries for scattering-walk searches.

Supported shapes are the N x N square grid, the N x N x N cubic lattice,
grids with randomly removed interior edges (walls), and perfect mazes
(spanning trees of the grid). Nodes carry 1-based coordinates and may be
addressed either by coordinate tuple or by flat integer index. Every
Geometry is immutable and connected; mutating operations return new values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

Coords = tuple[int, ...]
NodeLike = "int | Sequence[int]"


class GeometryError(ValueError):
    """Base class for geometry construction and mutation errors."""


class InvalidSizeError(GeometryError):
    """Requested grid or lattice dimensions are unsupported."""


class EdgeNotFoundError(GeometryError):
    """An edge operation referenced an edge that is not present."""


class WouldDisconnectError(GeometryError):
    """Removing the requested edge would disconnect the graph."""


class TooManyWallsError(GeometryError):
    """More walls were requested than any spanning tree allows."""


class Geometry:
    """Immutable connected graph over the nodes of a square grid or cubic lattice.

    The walk's basis states are the directed edges. They are materialised as
    three parallel arrays sorted by (tail, head): ``state_tail``,
    ``state_head``, and ``state_reverse`` where ``state_reverse[s]`` is the
    index of the opposite orientation of state ``s``.
    """

    def __init__(
        self,
        dims: int,
        side: int,
        edges: np.ndarray,
        removed_edges: tuple[tuple[Coords, Coords], ...] = (),
    ):
        if dims not in (2, 3):
            raise InvalidSizeError(f"dims must be 2 or 3, got {dims}")
        if side < 2:
            raise InvalidSizeError(f"side length must be >= 2, got {side}")
        self.dims = int(dims)
        self.side = int(side)
        v = side**dims

        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(edges) == 0:
            raise GeometryError("graph has no edges")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        order = np.lexsort((hi, lo))
        lo, hi = lo[order], hi[order]
        keys = lo * v + hi
        if np.any(np.diff(keys) == 0):
            raise GeometryError("duplicate edges")
        self._edges = np.stack([lo, hi], axis=1)

        # directed-state arrays in (tail, head) order; heads grouped by tail
        # double as a CSR adjacency structure
        tails = np.concatenate([lo, hi])
        heads = np.concatenate([hi, lo])
        s_order = np.lexsort((heads, tails))
        self.state_tail = tails[s_order]
        self.state_head = heads[s_order]
        self.degrees = np.bincount(self.state_tail, minlength=v)
        if self.degrees.min() == 0 and v > 1:
            raise GeometryError("graph is disconnected (isolated node)")
        self._indptr = np.zeros(v + 1, dtype=np.int64)
        np.cumsum(self.degrees, out=self._indptr[1:])
        state_keys = self.state_tail * v + self.state_head
        self.state_reverse = np.searchsorted(
            state_keys, self.state_head * v + self.state_tail
        )

        adj = csr_matrix(
            (np.ones(len(self.state_head), dtype=np.int8), self.state_head, self._indptr),
            shape=(v, v),
        )
        n_comp, _ = connected_components(adj, directed=False)
        if n_comp != 1:
            raise GeometryError("graph is disconnected")

        self._coords = _all_coords(dims, side)
        self.removed_edges = _canonical_removed(removed_edges)
        self._edge_set = frozenset(map(tuple, self._edges.tolist()))
        for arr in (
            self._edges,
            self.state_tail,
            self.state_head,
            self.state_reverse,
            self.degrees,
            self._indptr,
            self._coords,
        ):
            arr.setflags(write=False)

    @property
    def num_nodes(self) -> int:
        return self.side**self.dims

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    @property
    def num_states(self) -> int:
        return 2 * len(self._edges)

    @property
    def coords(self) -> np.ndarray:
        """1-based coordinates, shape (num_nodes, dims)."""
        return self._coords

    @property
    def edges(self) -> np.ndarray:
        """Undirected edge list as node-index pairs, lexicographically sorted."""
        return self._edges

    def node_index(self, node: NodeLike) -> int:
        """Normalise a coordinate tuple or flat index to a flat index."""
        if isinstance(node, (int, np.integer)):
            i = int(node)
            if not 0 <= i < self.num_nodes:
                raise GeometryError(f"node index {i} out of range")
            return i
        c = tuple(int(a) for a in node)
        if len(c) != self.dims or any(not 1 <= a <= self.side for a in c):
            raise GeometryError(f"coordinates {c} outside the {self.dims}-d grid")
        i = 0
        for a in c:
            i = i * self.side + (a - 1)
        return i

    def node_coords(self, index: int) -> Coords:
        return tuple(int(a) for a in self._coords[index])

    def neighbors(self, node: NodeLike) -> np.ndarray:
        i = self.node_index(node)
        return self.state_head[self._indptr[i] : self._indptr[i + 1]]

    def degree(self, node: NodeLike) -> int:
        return int(self.degrees[self.node_index(node)])

    def has_edge(self, a: NodeLike, b: NodeLike) -> bool:
        i, j = self.node_index(a), self.node_index(b)
        return (min(i, j), max(i, j)) in self._edge_set

    def adjacency(self) -> csr_matrix:
        """Unit-weight sparse adjacency matrix (CSR)."""
        v = self.num_nodes
        return csr_matrix(
            (np.ones(self.num_states, dtype=np.int8), self.state_head, self._indptr),
            shape=(v, v),
        )

    def state_index(self, tail: NodeLike, head: NodeLike) -> int:
        """Index of the directed state entering ``head`` from ``tail``."""
        i, j = self.node_index(tail), self.node_index(head)
        lo, hi = self._indptr[i], self._indptr[i + 1]
        pos = lo + np.searchsorted(self.state_head[lo:hi], j)
        if pos == hi or self.state_head[pos] != j:
            raise EdgeNotFoundError(
                f"no edge between {self.node_coords(i)} and {self.node_coords(j)}"
            )
        return int(pos)

    def __repr__(self) -> str:
        kind = "grid" if self.dims == 2 else "lattice"
        walls = f", walls={len(self.removed_edges)}" if self.removed_edges else ""
        return f"Geometry({kind} {self.side}^{self.dims}, E={self.num_edges}{walls})"


def _all_coords(dims: int, side: int) -> np.ndarray:
    axes = np.indices((side,) * dims).reshape(dims, -1).T + 1
    return axes.astype(np.int64)


def _canonical_removed(
    removed: Iterable[tuple[Coords, Coords]],
) -> tuple[tuple[Coords, Coords], ...]:
    pairs = [tuple(sorted((tuple(a), tuple(b)))) for a, b in removed]
    return tuple(sorted(pairs))


def _open_edges(dims: int, side: int) -> np.ndarray:
    """Edge list of the full grid (dims=2) or lattice (dims=3)."""
    base = np.arange(side**dims).reshape((side,) * dims)
    parts = []
    for axis in range(dims):
        lo = np.take(base, np.arange(side - 1), axis=axis).ravel()
        hi = np.take(base, np.arange(1, side), axis=axis).ravel()
        parts.append(np.stack([lo, hi], axis=1))
    return np.concatenate(parts)


def build_grid(side: int) -> Geometry:
    """The open N x N grid with nearest-neighbour edges."""
    if side < 2:
        raise InvalidSizeError(f"grid side must be >= 2, got {side}")
    return Geometry(2, side, _open_edges(2, side))


def build_lattice(side: int) -> Geometry:
    """The open N x N x N cubic lattice with nearest-neighbour edges."""
    if side < 2:
        raise InvalidSizeError(f"lattice side must be >= 2, got {side}")
    return Geometry(3, side, _open_edges(3, side))


def _connected_without(adj: list[set[int]], u: int, v: int) -> bool:
    """True if u and v stay connected when the edge u-v is ignored.

    Bidirectional breadth-first probe: expands the smaller frontier first so
    that a true bridge costs only the smaller side of its cut.
    """
    seen_a, seen_b = {u}, {v}
    frontier_a, frontier_b = [u], [v]
    while frontier_a and frontier_b:
        if len(frontier_a) > len(frontier_b):
            seen_a, seen_b = seen_b, seen_a
            frontier_a, frontier_b = frontier_b, frontier_a
        nxt = []
        for a in frontier_a:
            for b in adj[a]:
                if (a == u and b == v) or (a == v and b == u):
                    continue
                if b in seen_b:
                    return True
                if b not in seen_a:
                    seen_a.add(b)
                    nxt.append(b)
        frontier_a = nxt
    return False


def remove_edge(g: Geometry, a: NodeLike, b: NodeLike) -> Geometry:
    """A copy of ``g`` with the edge a-b removed.

    Raises EdgeNotFoundError if absent and WouldDisconnectError if the edge
    is a bridge.
    """
    i, j = g.node_index(a), g.node_index(b)
    key = (min(i, j), max(i, j))
    if key not in g._edge_set:
        raise EdgeNotFoundError(
            f"no edge between {g.node_coords(i)} and {g.node_coords(j)}"
        )
    adj = [set(g.neighbors(k).tolist()) for k in range(g.num_nodes)]
    if not _connected_without(adj, i, j):
        raise WouldDisconnectError(
            f"removing {g.node_coords(i)}-{g.node_coords(j)} disconnects the graph"
        )
    keep = ~np.all(g.edges == np.asarray(key), axis=1)
    removed = g.removed_edges + ((g.node_coords(i), g.node_coords(j)),)
    return Geometry(g.dims, g.side, g.edges[keep], removed)


def max_wall_count(g: Geometry) -> int:
    """Edges that can be removed while staying connected (down to a tree)."""
    return g.num_edges - (g.num_nodes - 1)


def place_random_walls(
    g: Geometry, count: int, rng: np.random.Generator | int | None = None
) -> Geometry:
    """Remove ``count`` edges uniformly at random, never disconnecting.

    Each step draws uniformly from the current non-bridge edges (by rejection
    with a cache of known bridges; removing edges never un-bridges an edge,
    so cached entries stay valid). Deterministic for a given seed.
    """
    if count < 0:
        raise GeometryError(f"wall count must be >= 0, got {count}")
    if count > max_wall_count(g):
        raise TooManyWallsError(
            f"cannot place {count} walls; maximum is {max_wall_count(g)}"
        )
    if count == 0:
        return g
    rng = np.random.default_rng(rng)

    alive = [tuple(e) for e in g.edges.tolist()]
    adj = [set(g.neighbors(k).tolist()) for k in range(g.num_nodes)]
    bridges: set[tuple[int, int]] = set()
    removed: list[tuple[int, int]] = []
    attempts_left = 10_000 * g.num_edges
    while len(removed) < count:
        if attempts_left <= 0:
            raise RuntimeError("wall placement failed to converge")
        attempts_left -= 1
        idx = int(rng.integers(len(alive)))
        e = alive[idx]
        if e in bridges:
            continue
        u, v = e
        if not _connected_without(adj, u, v):
            bridges.add(e)
            continue
        alive[idx] = alive[-1]
        alive.pop()
        adj[u].discard(v)
        adj[v].discard(u)
        removed.append(e)

    keep = np.ones(g.num_edges, dtype=bool)
    index_of = {tuple(e): k for k, e in enumerate(g.edges.tolist())}
    for e in removed:
        keep[index_of[e]] = False
    new_removed = g.removed_edges + tuple(
        (g.node_coords(u), g.node_coords(v)) for u, v in removed
    )
    return Geometry(g.dims, g.side, g.edges[keep], new_removed)


def generate_perfect_maze(
    side: int, rng: np.random.Generator | int | None = None
) -> Geometry:
    """A uniform-wall-process spanning tree of the N x N grid."""
    g = build_grid(side)
    return place_random_walls(g, max_wall_count(g), rng)


def bfs_distances(g: Geometry, source: NodeLike) -> np.ndarray:
    """Graph distances from ``source`` to every node, by breadth-first search."""
    from collections import deque

    s = g.node_index(source)
    dist = np.full(g.num_nodes, -1, dtype=np.int64)
    dist[s] = 0
    queue = deque([s])
    indptr, heads = g._indptr, g.state_head
    while queue:
        a = queue.popleft()
        da = dist[a] + 1
        for b in heads[indptr[a] : indptr[a + 1]]:
            if dist[b] < 0:
                dist[b] = da
                queue.append(b)
    return dist


# --- eightfold grid symmetry ---------------------------------------------


def symmetry_transforms(side: int) -> list[Callable[[int, int], tuple[int, int]]]:
    """The eight rotations/reflections of the N x N grid on 1-based coords."""
    n = side

    def flip(a: int) -> int:
        return n + 1 - a

    return [
        lambda x, y: (x, y),
        lambda x, y: (flip(x), y),
        lambda x, y: (x, flip(y)),
        lambda x, y: (flip(x), flip(y)),
        lambda x, y: (y, x),
        lambda x, y: (flip(y), x),
        lambda x, y: (y, flip(x)),
        lambda x, y: (flip(y), flip(x)),
    ]


def orbit(side: int, node: tuple[int, int]) -> set[tuple[int, int]]:
    """All images of a node under the eight grid symmetries."""
    x, y = node
    return {t(x, y) for t in symmetry_transforms(side)}


@dataclass(frozen=True)
class SymmetryClass:
    """One equivalence class of grid nodes under the eightfold symmetry."""

    representative: tuple[int, int]
    multiplicity: int


def unique_octant_nodes(side: int) -> list[SymmetryClass]:
    """Representatives of all symmetry classes, one per class.

    The canonical octant is {(x, y): x <= y <= ceil(N/2)}; each class's
    multiplicity is its orbit size, so multiplicities sum to N^2.
    """
    if side < 2:
        raise InvalidSizeError(f"grid side must be >= 2, got {side}")
    half = (side + 1) // 2
    classes = []
    for y in range(1, half + 1):
        for x in range(1, y + 1):
            classes.append(SymmetryClass((x, y), len(orbit(side, (x, y)))))
    return classes


def canonical_representative(side: int, node: tuple[int, int]) -> tuple[int, int]:
    """The unique orbit member inside the canonical octant."""
    half = (side + 1) // 2
    members = [p for p in orbit(side, node) if p[0] <= p[1] <= half]
    return min(members)


# --- serialization ---------------------------------------------------------


def geometry_to_dict(g: Geometry) -> dict:
    return {
        "dims": g.dims,
        "n": g.side,
        "removed_edges": [[list(a), list(b)] for a, b in g.removed_edges],
    }


def geometry_from_dict(d: dict) -> Geometry:
    dims, side = int(d["dims"]), int(d["n"])
    if dims not in (2, 3):
        raise InvalidSizeError(f"dims must be 2 or 3, got {dims}")
    if side < 2:
        raise InvalidSizeError(f"side length must be >= 2, got {side}")
    probe = Geometry(dims, side, _open_edges(dims, side))
    removed = [(tuple(a), tuple(b)) for a, b in d["removed_edges"]]
    keep = np.ones(probe.num_edges, dtype=bool)
    index_of = {tuple(e): k for k, e in enumerate(probe.edges.tolist())}
    for a, b in removed:
        i, j = probe.node_index(a), probe.node_index(b)
        key = (min(i, j), max(i, j))
        if key not in index_of or not keep[index_of[key]]:
            raise EdgeNotFoundError(f"removed edge {a}-{b} is not a grid edge")
        keep[index_of[key]] = False
    return Geometry(dims, side, probe.edges[keep], removed)


def save_geometry(g: Geometry, path) -> None:
    with open(path, "w") as fh:
        json.dump(geometry_to_dict(g), fh, indent=2)
        fh.write("\n")


def load_geometry(path) -> Geometry:
    with open(path) as fh:
        return geometry_from_dict(json.load(fh))
