"""
Graph, weight, demand and flow data models.
"""
import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from src.utils.errors import (
    DimensionMismatchError,
    GraphStructureError,
    InvalidDemandError,
    ParameterError,
)

Edge = Tuple[int, int]

DEMAND_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Undirected connected simple graph with a fixed edge orientation.

    Every edge is stored as (u, v) with u < v and the edge list is sorted.
    Row e of the incidence matrix B is b_e = e_v - e_u, so a positive flow
    value on e moves flow from u to v.
    """
    n: int
    edges: Tuple[Edge, ...]
    labels: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        """Validate structure; labels default to the identity mapping."""
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(self.n)))
        if len(self.labels) != self.n:
            raise DimensionMismatchError("labels", (self.n,), (len(self.labels),))
        if self.n < 2 or not self.edges:
            raise GraphStructureError("graph needs at least two vertices and one edge")

        seen = set()
        for index, (u, v) in enumerate(self.edges):
            if not 0 <= u < v < self.n:
                raise GraphStructureError(f"edge #{index} ({u}, {v}) is not canonical")
            if (u, v) in seen:
                raise GraphStructureError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise GraphStructureError("edges must be sorted lexicographically")

        count, membership = connected_components(self.adjacency, directed=False)
        if count > 1:
            stray = int(np.flatnonzero(membership != membership[0])[0])
            raise GraphStructureError(
                f"graph is disconnected: {count} components; vertex "
                f"{self.labels[stray]} is not reachable from vertex {self.labels[0]}"
            )

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], n: Optional[int] = None) -> "Graph":
        """
        Build a canonical graph from an in-memory edge list over 0..n-1.

        Args:
            edges: Vertex pairs in any orientation and order
            n: Vertex count; defaults to one more than the largest id

        Returns:
            Canonicalized Graph
        """
        canonical: List[Edge] = []
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphStructureError(f"self-loop at vertex {u}")
            canonical.append((min(u, v), max(u, v)))
        if n is None:
            n = 1 + max(max(e) for e in canonical) if canonical else 0
        return cls(n=n, edges=tuple(sorted(canonical)))

    @property
    def m(self) -> int:
        """Edge count."""
        return len(self.edges)

    @cached_property
    def tails(self) -> np.ndarray:
        return np.fromiter((u for u, _ in self.edges), dtype=np.int64, count=self.m)

    @cached_property
    def heads(self) -> np.ndarray:
        return np.fromiter((v for _, v in self.edges), dtype=np.int64, count=self.m)

    @cached_property
    def incidence(self) -> sp.csr_matrix:
        """The m x n incidence matrix B with rows b_e = e_v - e_u."""
        rows = np.repeat(np.arange(self.m), 2)
        cols = np.column_stack([self.tails, self.heads]).ravel()
        data = np.tile([-1.0, 1.0], self.m)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.m, self.n))

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        ones = np.ones(self.m)
        upper = sp.csr_matrix((ones, (self.tails, self.heads)), shape=(self.n, self.n))
        return (upper + upper.T).tocsr()

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.tails, self.heads]), minlength=self.n)

    @cached_property
    def canonical_text(self) -> str:
        """Canonical edge-list text; the basis of the graph hash."""
        return "".join(f"{u} {v}\n" for u, v in self.edges)

    @cached_property
    def hash(self) -> str:
        """SHA-256 of the canonical edge list, prefixed with the vertex count."""
        digest = hashlib.sha256()
        digest.update(f"n {self.n}\n".encode("utf-8"))
        digest.update(self.canonical_text.encode("utf-8"))
        return digest.hexdigest()

    def incidence_apply(self, x: Sequence[float]) -> np.ndarray:
        """
        Compute B x, the potential difference x_v - x_u across every edge.

        Args:
            x: Vertex potentials of length n

        Returns:
            Vector of length m
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise DimensionMismatchError("potentials", (self.n,), x.shape)
        return x[self.heads] - x[self.tails]

    def incidence_transpose_apply(self, f: Sequence[float]) -> np.ndarray:
        """
        Compute B^T f: flow entering minus flow leaving each vertex.

        Args:
            f: Edge flow of length m, signed relative to the orientation

        Returns:
            Vector of length n
        """
        f = np.asarray(f, dtype=float)
        if f.shape != (self.m,):
            raise DimensionMismatchError("flow", (self.m,), f.shape)
        return np.bincount(self.heads, weights=f, minlength=self.n) - np.bincount(
            self.tails, weights=f, minlength=self.n
        )

    def laplacian(self, weights: "EdgeWeights") -> sp.csr_matrix:
        """Sparse weighted Laplacian B^T W B."""
        weights.check(self.m)
        B = self.incidence
        return (B.T @ sp.diags(weights.values) @ B).tocsr()

    def vertex_index(self, label: int) -> int:
        """Translate an original vertex id into its dense index."""
        try:
            return self._label_index[label]
        except KeyError:
            raise ParameterError(f"unknown vertex id {label}") from None

    @cached_property
    def _label_index(self) -> dict:
        return {label: index for index, label in enumerate(self.labels)}


@dataclass(frozen=True, eq=False)
class EdgeWeights:
    """Positive, finite conductances w, one per edge."""
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.size == 0:
            raise ParameterError("edge weights must not be empty")
        if not np.all(np.isfinite(values)):
            raise ParameterError("edge weights must be finite")
        if np.any(values <= 0):
            raise ParameterError(f"edge weights must be positive, min is {values.min()}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, m: int, value: float = 1.0) -> "EdgeWeights":
        return cls(np.full(m, value, dtype=float))

    def __len__(self) -> int:
        return self.values.size

    def check(self, m: int) -> None:
        """Raise unless there is exactly one weight per edge."""
        if self.values.shape != (m,):
            raise DimensionMismatchError("edge weights", (m,), self.values.shape)


@dataclass(frozen=True, eq=False)
class DemandVector:
    """
    Net inflow required at every vertex; valid demands sum to zero.

    A flow f answers the demand when B^T f = values, so sinks are positive
    and sources negative.
    """
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float).reshape(-1))

    @classmethod
    def pair(cls, n: int, s: int, t: int, amount: float = 1.0) -> "DemandVector":
        """Send amount units from s to t: the net inflow amount * (e_t - e_s)."""
        values = np.zeros(n)
        values[s] -= amount
        values[t] += amount
        return cls(values)

    def is_valid(self) -> bool:
        scale = max(1.0, float(np.abs(self.values).sum()))
        return abs(float(self.values.sum())) <= DEMAND_TOLERANCE * scale

    def validate(self, n: int) -> None:
        """Raise unless the demand has length n and sums to zero."""
        if self.values.shape != (n,):
            raise DimensionMismatchError("demand", (n,), self.values.shape)
        if not self.is_valid():
            raise InvalidDemandError(
                f"demand entries sum to {self.values.sum():.3e}, expected 0"
            )


@dataclass(frozen=True, eq=False)
class FlowVector:
    """Signed per-edge flow relative to the edge orientation."""
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float).reshape(-1))

    def divergence(self, graph: Graph) -> np.ndarray:
        """B^T f, the demand this flow answers."""
        return graph.incidence_transpose_apply(self.values)
