"""Relationship graphs and per-node centrality scores."""

from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
import scipy.sparse
from pydantic import BaseModel, ConfigDict, model_validator

from src.models.data_models import frozen_array
from src.utils.errors import DataError


class WeightSemantics(str, Enum):
    DISSIMILARITY = "dissimilarity"
    SIMILARITY = "similarity"
    PROBABILITY = "probability"


class PathCost(str, Enum):
    """How edge weights become path lengths. Never chosen implicitly."""
    HOP = "hop"
    WEIGHT = "weight"
    ONE_MINUS_WEIGHT = "one_minus_weight"


class RelationGraph(BaseModel):
    """Undirected weighted graph over item indices 0..N-1.

    Edges are stored once per unordered pair with i < j, sorted by (i, j).
    Construction canonicalizes (j, i) into (i, j); a pair given twice is rejected.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_vertices: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    semantics: WeightSemantics

    @model_validator(mode="before")
    @classmethod
    def _canonicalize(cls, data):
        if not isinstance(data, dict):
            return data
        rows = np.asarray(data.get("rows", []), dtype=np.int64).ravel()
        cols = np.asarray(data.get("cols", []), dtype=np.int64).ravel()
        weights = np.asarray(data.get("weights", []), dtype=np.float64).ravel()
        if not (len(rows) == len(cols) == len(weights)):
            raise DataError(f"Edge arrays differ in length: {len(rows)}, {len(cols)}, {len(weights)}")
        lo = np.minimum(rows, cols)
        hi = np.maximum(rows, cols)
        order = np.lexsort((hi, lo))
        data = dict(data)
        data["rows"] = frozen_array(lo[order], dtype=np.int64, name="rows")
        data["cols"] = frozen_array(hi[order], dtype=np.int64, name="cols")
        data["weights"] = frozen_array(weights[order], name="weights")
        return data

    @model_validator(mode="after")
    def _check_invariants(self):
        n = self.n_vertices
        if n < 1:
            raise DataError(f"Graph needs at least one vertex, got {n}")
        if len(self.rows):
            if self.rows.min() < 0 or self.cols.max() >= n:
                raise DataError(f"Vertex id out of range [0, {n})")
            loops = self.rows == self.cols
            if loops.any():
                v = int(self.rows[loops][0])
                raise DataError(f"Self-loop on vertex {v}")
            dup = (np.diff(self.rows) == 0) & (np.diff(self.cols) == 0)
            if dup.any():
                k = int(np.argmax(dup))
                raise DataError(f"Duplicate edge ({self.rows[k]}, {self.cols[k]})")
        if not np.all(np.isfinite(self.weights)):
            raise DataError("Edge weights must be finite")
        if self.semantics == WeightSemantics.PROBABILITY and len(self.weights):
            if self.weights.min() < 0.0 or self.weights.max() > 1.0:
                raise DataError("Probability weights must lie in [0, 1]")
        return self

    @classmethod
    def from_edges(
        cls,
        n_vertices: int,
        edges: Iterable[Tuple[int, int, float]],
        semantics: WeightSemantics,
    ) -> "RelationGraph":
        """Build from (i, j, w) triples in any orientation."""
        triples = list(edges)
        if triples:
            rows, cols, weights = zip(*triples)
        else:
            rows, cols, weights = (), (), ()
        return cls(n_vertices=n_vertices, rows=rows, cols=cols, weights=weights, semantics=semantics)

    @classmethod
    def from_sparse(cls, matrix, semantics: WeightSemantics, keep_zeros: bool = False) -> "RelationGraph":
        """Build from a symmetric sparse matrix, reading its upper triangle."""
        upper = scipy.sparse.triu(scipy.sparse.coo_matrix(matrix), k=1).tocoo()
        mask = np.ones(upper.nnz, dtype=bool) if keep_zeros else upper.data != 0
        return cls(
            n_vertices=matrix.shape[0],
            rows=upper.row[mask], cols=upper.col[mask], weights=upper.data[mask],
            semantics=semantics,
        )

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @property
    def is_complete(self) -> bool:
        n = self.n_vertices
        return self.n_edges == n * (n - 1) // 2

    def edge_keys(self) -> np.ndarray:
        """Unordered pair ids i*N + j (i < j); weights are not part of the key."""
        return self.rows * self.n_vertices + self.cols

    @cached_property
    def _lookup(self) -> Dict[Tuple[int, int], float]:
        return {(int(i), int(j)): float(w) for i, j, w in zip(self.rows, self.cols, self.weights)}

    def weight(self, i: int, j: int) -> Optional[float]:
        """Weight of the edge {i, j}, or None when absent. Symmetric in (i, j)."""
        a, b = (i, j) if i < j else (j, i)
        return self._lookup.get((a, b))

    def has_edge(self, i: int, j: int) -> bool:
        return self.weight(i, j) is not None

    def edges(self) -> Iterable[Tuple[int, int, float]]:
        for i, j, w in zip(self.rows, self.cols, self.weights):
            yield int(i), int(j), float(w)

    def degrees(self) -> np.ndarray:
        return np.bincount(np.concatenate([self.rows, self.cols]), minlength=self.n_vertices)

    @cached_property
    def neighbors(self) -> Tuple[np.ndarray, ...]:
        """Sorted neighbor ids per vertex."""
        adj = self.adjacency(pattern_only=True).tocsr()
        return tuple(np.sort(adj.indices[adj.indptr[v]:adj.indptr[v + 1]]) for v in range(self.n_vertices))

    def adjacency(self, values: Optional[np.ndarray] = None, pattern_only: bool = False) -> scipy.sparse.coo_matrix:
        """Symmetric sparse adjacency with `values` (default: weights) on both triangles.

        Zero weights are stored explicitly; callers needing "zero means edge" semantics
        for scipy.sparse.csgraph should use `to_csgraph` instead.
        """
        data = np.ones(self.n_edges) if pattern_only else (self.weights if values is None else values)
        n = self.n_vertices
        return scipy.sparse.coo_matrix(
            (np.concatenate([data, data]),
             (np.concatenate([self.rows, self.cols]), np.concatenate([self.cols, self.rows]))),
            shape=(n, n),
        )

    def to_csgraph(self, costs: Optional[np.ndarray] = None):
        """Sparse graph for scipy.sparse.csgraph in which zero-cost edges stay edges."""
        from scipy.sparse.csgraph import csgraph_from_dense
        dense = self.to_dense(fill=np.inf, values=costs)
        return csgraph_from_dense(dense, null_value=np.inf)

    def to_dense(self, fill: float = 0.0, values: Optional[np.ndarray] = None) -> np.ndarray:
        """Dense symmetric N×N matrix; pairs without an edge (and the diagonal) get `fill`."""
        n = self.n_vertices
        w = self.weights if values is None else np.asarray(values, dtype=np.float64)
        dense = np.full((n, n), fill, dtype=np.float64)
        dense[self.rows, self.cols] = w
        dense[self.cols, self.rows] = w
        return dense

    def with_weights(self, weights, semantics: Optional[WeightSemantics] = None) -> "RelationGraph":
        """Same edge set, new weights (aligned with the stored edge order)."""
        return RelationGraph(
            n_vertices=self.n_vertices, rows=self.rows, cols=self.cols,
            weights=np.asarray(weights, dtype=np.float64),
            semantics=semantics or self.semantics,
        )

    def subgraph_edges(self, mask: np.ndarray) -> "RelationGraph":
        """Keep only edges where `mask` is true."""
        return RelationGraph(
            n_vertices=self.n_vertices, rows=self.rows[mask], cols=self.cols[mask],
            weights=self.weights[mask], semantics=self.semantics,
        )


class CentralityKind(str, Enum):
    CLOSENESS = "closeness"
    BETWEENNESS = "betweenness"


class CentralityVector(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    kind: CentralityKind

    @model_validator(mode="before")
    @classmethod
    def _freeze(cls, data):
        if isinstance(data, dict) and "values" in data:
            data = dict(data)
            data["values"] = frozen_array(data["values"], ndim=1, name="values")
        return data

    @model_validator(mode="after")
    def _non_negative(self):
        if len(self.values) and self.values.min() < 0.0:
            raise DataError(f"{self.kind.value} centrality must be non-negative")
        return self

    def __len__(self) -> int:
        return len(self.values)
