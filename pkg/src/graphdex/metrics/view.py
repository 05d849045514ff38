"""Homogenized graph view consumed by the metric kernels.

Merges a (possibly heterogeneous) GraphStorage into one flat node id space
and caches the derived structures shared across metric groups: simple
undirected/directed adjacency, degree vectors, and coreness. Raw stored
edges (with self-loops and multi-edges) stay available for the counters
that are defined over them; the simple structures drop self-loops and
collapse duplicates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ..graph_store import GraphStorage
from ..tensor_store import SparseMatrix


@dataclass
class LabeledGraphView:
    num_nodes: int
    edges: np.ndarray  # (M, 2) raw stored edges, global ids
    directed: bool
    labels: np.ndarray | None = None  # (N,) int64
    features: np.ndarray | sp.csr_matrix | None = None

    def __post_init__(self):
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def _simple_pairs(self) -> np.ndarray:
        """Unique undirected pairs (u < v), self-loops dropped."""
        e = self.edges
        e = e[e[:, 0] != e[:, 1]]
        if not len(e):
            return np.zeros((0, 2), dtype=np.int64)
        return np.unique(np.sort(e, axis=1), axis=0)

    @cached_property
    def arcs(self) -> np.ndarray:
        """Unique directed arcs, self-loops dropped (directed graphs)."""
        e = self.edges
        e = e[e[:, 0] != e[:, 1]]
        if not len(e):
            return np.zeros((0, 2), dtype=np.int64)
        return np.unique(e, axis=0)

    @cached_property
    def und_adj(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency of the undirected simplification."""
        n = self.num_nodes
        e = self._simple_pairs
        if not len(e):
            return sp.csr_matrix((n, n), dtype=np.int64)
        ones = np.ones(len(e), dtype=np.int64)
        a = sp.coo_matrix((ones, (e[:, 0], e[:, 1])), shape=(n, n))
        a = (a + a.T).tocsr()
        a.data[:] = 1
        return a

    @cached_property
    def dir_adj(self) -> sp.csr_matrix:
        """0/1 arc matrix of the directed simplification."""
        n = self.num_nodes
        e = self.arcs
        if not len(e):
            return sp.csr_matrix((n, n), dtype=np.int64)
        ones = np.ones(len(e), dtype=np.int64)
        return sp.coo_matrix((ones, (e[:, 0], e[:, 1])), shape=(n, n)).tocsr()

    @property
    def und_edges(self) -> np.ndarray:
        return self._simple_pairs

    @cached_property
    def degrees(self) -> np.ndarray:
        """Simple undirected degree (self-loops ignored, multi-edges collapsed)."""
        return np.diff(self.und_adj.indptr)

    @cached_property
    def out_degrees(self) -> np.ndarray:
        return np.diff(self.dir_adj.indptr)

    @cached_property
    def in_degrees(self) -> np.ndarray:
        return np.diff(self.dir_adj.T.tocsr().indptr)

    @cached_property
    def total_degrees(self) -> np.ndarray:
        return self.in_degrees + self.out_degrees

    @cached_property
    def reciprocal_degrees(self) -> np.ndarray:
        """Number of neighbors connected in both directions, per node."""
        both = self.dir_adj.multiply(self.dir_adj.T)
        return np.asarray(both.sum(axis=1)).ravel().astype(np.int64)

    @cached_property
    def coreness(self) -> np.ndarray:
        """k-core number per node on the undirected simplification."""
        return core_numbers(self.und_adj)


def core_numbers(adj: sp.csr_matrix) -> np.ndarray:
    """Peeling-order core decomposition; O(N + M) bucket implementation."""
    n = adj.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    indptr, indices = adj.indptr, adj.indices
    deg = np.diff(indptr).astype(np.int64)
    max_deg = int(deg.max()) if n else 0
    # bucket sort nodes by degree
    bin_start = np.zeros(max_deg + 2, dtype=np.int64)
    np.add.at(bin_start, deg + 1, 1)
    bin_start = np.cumsum(bin_start)
    order = np.argsort(deg, kind="stable").tolist()
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    pos = pos.tolist()
    bins = bin_start.tolist()
    degl = deg.tolist()
    core = [0] * n
    for i in range(n):
        v = order[i]
        dv = degl[v]
        core[v] = dv
        for u in indices[indptr[v]:indptr[v + 1]]:
            if degl[u] > dv:
                du = degl[u]
                pu = pos[u]
                pw = bins[du]
                w = order[pw]
                if u != w:
                    order[pu], order[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bins[du] += 1
                degl[u] -= 1
    return np.asarray(core, dtype=np.int64)


def _merge_node_attribute(graph: GraphStorage, name: str):
    """Stack one node attribute across groups; None unless every group has it."""
    groups = sorted(graph.node_groups, key=lambda g: g.start)
    parts = [g.attributes.get(name) for g in groups]
    if any(p is None for p in parts) or not parts:
        return None
    if all(isinstance(p, np.ndarray) for p in parts):
        try:
            return parts[0] if len(parts) == 1 else np.concatenate(parts, axis=0)
        except ValueError:
            return None
    if all(isinstance(p, SparseMatrix) for p in parts):
        try:
            mats = [p.to_scipy().tocsr() for p in parts]
            return mats[0] if len(mats) == 1 else sp.vstack(mats, format="csr")
        except ValueError:
            return None
    return None


def _as_labels(arr) -> np.ndarray | None:
    if not isinstance(arr, np.ndarray) or arr.ndim != 1 or len(arr) == 0:
        return None
    if arr.dtype.kind in "iub":
        return arr.astype(np.int64)
    if arr.dtype.kind == "f":
        finite = np.isfinite(arr)
        if finite.all() and np.array_equal(arr, np.floor(arr)):
            return arr.astype(np.int64)
    return None


def view_from_storage(graph: GraphStorage, label_attr: str = "NodeLabel",
                      feature_attr: str = "NodeFeature") -> LabeledGraphView:
    """Homogenize a GraphStorage: global ids, merged labels and features.

    Labels are used only when every node group carries an integral
    ``label_attr``; features when every group carries ``feature_attr`` with a
    common width (dense or sparse, not mixed).
    """
    labels = _as_labels(_merge_node_attribute(graph, label_attr))
    features = _merge_node_attribute(graph, feature_attr)
    if features is not None and isinstance(features, np.ndarray) and features.ndim != 2:
        features = None
    return LabeledGraphView(
        num_nodes=graph.num_nodes,
        edges=graph.edges_concat(),
        directed=graph.directed,
        labels=labels,
        features=features,
    )
