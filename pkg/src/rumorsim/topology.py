"""Graph families and cyclic neighbor-list assignments.

Two topologies are supported: the complete graph on n vertices and the star
with center 0 and leaves 1..n-1.  Neighbor lists are what the list-based
protocols walk cyclically; the canonical order is ascending vertex id, and a
strategy picks the actual cyclic order per vertex.

For the complete graph and the star the canonical and reversed orders have a
closed form, so those assignments never materialize an n x (n-1) table and
stay cheap at n = 10**5.  Random and explicit assignments are materialized
and therefore capped in size.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .rng import derive_key

# materialized assignments above this many cells would not fit in memory
_MAX_TABLE_CELLS = 1 << 26


class GraphKind(str, Enum):
    COMPLETE = "complete"
    STAR = "star"


class ListStrategy(str, Enum):
    CANONICAL = "canonical"
    REVERSED = "reversed"
    RANDOM = "random"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class Topology:
    kind: GraphKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one vertex, got n={self.n}")
        if self.kind is GraphKind.STAR and self.n < 3:
            raise ValueError(f"star needs n >= 3, got n={self.n}")

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range for n={self.n}")

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        if self.kind is GraphKind.COMPLETE:
            return self.n - 1
        return self.n - 1 if v == 0 else 1

    def degrees(self) -> np.ndarray:
        """Degree of every vertex, as an int64 array of length n."""
        if self.kind is GraphKind.COMPLETE:
            return np.full(self.n, self.n - 1, dtype=np.int64)
        d = np.ones(self.n, dtype=np.int64)
        d[0] = self.n - 1
        return d

    def neighbors(self, v: int) -> np.ndarray:
        """Canonical (ascending id) neighbor array of one vertex."""
        self.check_vertex(v)
        if self.kind is GraphKind.COMPLETE:
            return np.concatenate(
                [np.arange(v, dtype=np.int64), np.arange(v + 1, self.n, dtype=np.int64)]
            )
        if v == 0:
            return np.arange(1, self.n, dtype=np.int64)
        return np.zeros(1, dtype=np.int64)

    def neighbors_at(self, vertices: np.ndarray, indices: np.ndarray) -> np.ndarray:
        """Vectorized canonical lookup: the indices-th neighbor of each vertex."""
        vertices = np.asarray(vertices, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        if self.kind is GraphKind.COMPLETE:
            return indices + (indices >= vertices)
        return np.where(vertices == 0, indices + 1, 0).astype(np.int64)


def complete_graph(n: int) -> Topology:
    return Topology(GraphKind.COMPLETE, n)


def star_graph(n: int) -> Topology:
    return Topology(GraphKind.STAR, n)


class ListAssignment:
    """A cyclic neighbor list per vertex, realized from a strategy.

    Realization is deterministic in (strategy, seed, vertex id): vertex v's
    random permutation depends only on those, never on other vertices or on
    how many rows were asked for before.
    """

    def __init__(
        self,
        topology: Topology,
        strategy: ListStrategy,
        seed: int = 0,
        rows: dict | None = None,
    ):
        self.topology = topology
        self.strategy = strategy
        self.seed = seed
        self._table = None  # complete graph: full n x (n-1) matrix
        self._center = None  # star: the center's row; leaves are forced
        if strategy in (ListStrategy.RANDOM, ListStrategy.EXPLICIT):
            if topology.kind is GraphKind.COMPLETE:
                self._table = np.vstack([rows[v] for v in range(topology.n)])
            else:
                self._center = rows[0]

    def row(self, v: int) -> np.ndarray:
        """The full cyclic list of one vertex, mostly for tests and oracles."""
        self.topology.check_vertex(v)
        if self.strategy is ListStrategy.CANONICAL:
            return self.topology.neighbors(v)
        if self.strategy is ListStrategy.REVERSED:
            return self.topology.neighbors(v)[::-1].copy()
        if self._table is not None:
            return self._table[v].astype(np.int64)
        return self._center.copy() if v == 0 else np.zeros(1, dtype=np.int64)

    def targets_at(self, vertices: np.ndarray, positions: np.ndarray) -> np.ndarray:
        """Vectorized: the list entry at the given position of each vertex."""
        vertices = np.asarray(vertices, dtype=np.int64)
        positions = np.asarray(positions, dtype=np.int64)
        topo = self.topology
        if self.strategy is ListStrategy.CANONICAL:
            return topo.neighbors_at(vertices, positions)
        if self.strategy is ListStrategy.REVERSED:
            if topo.kind is GraphKind.COMPLETE:
                degs = np.full(len(vertices), topo.n - 1, dtype=np.int64)
            else:
                degs = np.where(vertices == 0, topo.n - 1, 1)
            return topo.neighbors_at(vertices, degs - 1 - positions)
        if self._table is not None:
            return self._table[vertices, positions].astype(np.int64)
        out = np.zeros(len(vertices), dtype=np.int64)
        at_center = vertices == 0
        out[at_center] = self._center[positions[at_center]]
        return out


def _validate_row(topology: Topology, v: int, row) -> np.ndarray:
    row = np.asarray(row, dtype=np.int64)
    expected = np.sort(topology.neighbors(v))
    if row.shape != expected.shape or not np.array_equal(np.sort(row), expected):
        raise ValueError(f"row for vertex {v} is not a permutation of its neighbor set")
    return row


def realize_lists(
    topology: Topology,
    strategy: ListStrategy,
    seed: int = 0,
    explicit_rows: dict | None = None,
) -> ListAssignment:
    """Build the neighbor-list assignment one protocol run walks.

    RANDOM shuffles each canonical row with a generator keyed by
    (seed, vertex id).  EXPLICIT takes caller rows, validated to be
    permutations of the true neighbor sets.
    """
    if strategy in (ListStrategy.CANONICAL, ListStrategy.REVERSED):
        if explicit_rows is not None:
            raise ValueError("explicit_rows only makes sense with the explicit strategy")
        return ListAssignment(topology, strategy, seed)

    n = topology.n
    if topology.kind is GraphKind.COMPLETE and n * (n - 1) > _MAX_TABLE_CELLS:
        raise ValueError(
            f"materialized lists need {n * (n - 1)} cells; use canonical or reversed"
        )
    if strategy is ListStrategy.EXPLICIT:
        if explicit_rows is None:
            raise ValueError("explicit strategy needs explicit_rows")
        rows = {int(v): _validate_row(topology, int(v), r) for v, r in explicit_rows.items()}
        for v in range(n):
            if v not in rows:
                raise ValueError(f"explicit rows missing vertex {v}")
        return ListAssignment(topology, strategy, seed, rows)

    if explicit_rows is not None:
        raise ValueError("explicit_rows only makes sense with the explicit strategy")
    rows = {}
    for v in range(n):
        base = topology.neighbors(v)
        if len(base) > 1:
            gen = np.random.default_rng(derive_key(seed, v))
            base = gen.permutation(base)
        rows[v] = base
    return ListAssignment(topology, strategy, seed, rows)


def load_lists_file(topology: Topology, path: str) -> ListAssignment:
    """Read explicit rows from a text file, one comma-separated row per vertex."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != topology.n:
        raise ValueError(
            f"lists file has {len(lines)} rows, topology has {topology.n} vertices"
        )
    rows = {
        v: np.array([int(x) for x in line.split(",")], dtype=np.int64)
        for v, line in enumerate(lines)
    }
    return realize_lists(topology, ListStrategy.EXPLICIT, explicit_rows=rows)
