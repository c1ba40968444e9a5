"""
Immutable graph instance in compressed sparse row form.

Vertices are numbered level-major: the hub is 0, level L occupies the
contiguous id range starting at (m^L - 1)/(m - 1). Adjacency rows are
sorted, so ``edges()`` yields pairs (u < v) in ascending order.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

import networkx as nx
import numpy as np
from scipy import sparse

from model.params import ModelParams


@dataclass(frozen=True)
class DegreeClass:
    """One row of the degree table: all vertices at one level."""
    level: int
    degree: int
    count: int

    def to_dict(self) -> Dict[str, int]:
        return {"level": self.level, "degree": self.degree, "count": self.count}


@dataclass(frozen=True, eq=False)
class GraphInstance:
    """
    A built or imported graph.

    Attributes:
        params: Recipe the instance was built from (or inferred for).
        indptr: CSR row pointer, length n + 1.
        indices: CSR column indices, both directions of every edge.
        level: Hierarchy level of every vertex.
        hub: Id of the level-0 vertex.
        metadata: Extra facts, e.g. rim edge counts of a deleted instance.
    """

    params: ModelParams
    indptr: np.ndarray
    indices: np.ndarray
    level: np.ndarray
    hub: int = 0
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for arr in (self.indptr, self.indices, self.level):
            arr.setflags(write=False)

    @classmethod
    def from_edges(
        cls,
        params: ModelParams,
        n: int,
        edges: np.ndarray,
        level: np.ndarray,
        hub: int = 0,
        metadata: Optional[Mapping[str, Any]] = None,
    ) -> "GraphInstance":
        """
        Assemble an instance from an (E, 2) array of undirected edges.

        The caller guarantees the edge set is simple.
        """
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(rows.shape[0], dtype=np.int8)
        adj = sparse.csr_matrix((data, (rows, cols)), shape=(n, n))
        adj.sort_indices()
        return cls(
            params=params,
            indptr=np.asarray(adj.indptr, dtype=np.int64),
            indices=np.asarray(adj.indices, dtype=np.int64),
            level=np.asarray(level, dtype=np.int32),
            hub=int(hub),
            metadata=dict(metadata or {}),
        )

    @property
    def n(self) -> int:
        return int(self.indptr.shape[0] - 1)

    @property
    def num_edges(self) -> int:
        return int(self.indices.shape[0] // 2)

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self.indptr)
        deg.setflags(write=False)
        return deg

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbour ids of v."""
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range [0, {self.n})")
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """All edges as an (E, 2) array with u < v, sorted ascending."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])

    def iter_edges(self) -> Iterator[Tuple[int, int]]:
        for u, v in self.edges():
            yield int(u), int(v)

    def level_counts(self) -> List[int]:
        """Vertex count per level, index = level."""
        return np.bincount(self.level).tolist()

    def vertices_at_level(self, level: int) -> np.ndarray:
        return np.flatnonzero(self.level == level)

    def to_csr(self) -> sparse.csr_matrix:
        """Adjacency matrix as float64 CSR (shares no memory with the instance)."""
        data = np.ones(self.indices.shape[0], dtype=np.float64)
        return sparse.csr_matrix(
            (data, self.indices.copy(), self.indptr.copy()), shape=(self.n, self.n)
        )

    def to_networkx(self) -> nx.Graph:
        """networkx copy with a ``level`` attribute on every node."""
        g = nx.Graph()
        g.add_nodes_from((v, {"level": int(lv)}) for v, lv in enumerate(self.level))
        g.add_edges_from(self.iter_edges())
        return g

    def same_graph(self, other: "GraphInstance") -> bool:
        """Vertex-for-vertex equality of edge sets and levels."""
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.level, other.level)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphInstance):
            return NotImplemented
        return self.params == other.params and self.same_graph(other)

    __hash__ = None  # type: ignore[assignment]

    def summary(self) -> Dict[str, Any]:
        """Compact description for logs and reports."""
        return {
            **self.params.to_dict(),
            "n": self.n,
            "edges": self.num_edges,
            "levels": self.level_counts(),
            **dict(self.metadata),
        }
