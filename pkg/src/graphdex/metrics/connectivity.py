"""Connectivity group: component fractions and average node connectivity.

Local node connectivity of a non-adjacent pair is the exact vertex-capacity
max-flow on the split-node graph (Menger). The average runs over all
non-adjacent unordered pairs of the undirected simplification when their
count fits ``budget.exact_pairs``, otherwise over uniformly sampled pairs
(the per-pair value stays exact; only the pair set is sampled).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components, maximum_flow

from .report import ApproxBudget, MetricValue, approximate, exact
from .view import LabeledGraphView

NAN = float("nan")

_BIG = np.int32(2 ** 30)


def _vertex_flow_graph(view: LabeledGraphView) -> sp.csr_matrix:
    """Split-node capacity graph: v_in = v, v_out = v + n, internal cap 1."""
    n = view.num_nodes
    e = view.und_edges
    rows = [np.arange(n, dtype=np.int64)]
    cols = [np.arange(n, dtype=np.int64) + n]
    caps = [np.ones(n, dtype=np.int32)]
    if len(e):
        rows += [e[:, 0] + n, e[:, 1] + n]
        cols += [e[:, 1], e[:, 0]]
        caps += [np.full(len(e), _BIG), np.full(len(e), _BIG)]
    g = sp.csr_matrix(
        (np.concatenate(caps), (np.concatenate(rows), np.concatenate(cols))),
        shape=(2 * n, 2 * n), dtype=np.int32)
    return g


def local_node_connectivity(flow_graph: sp.csr_matrix, n: int, u: int, v: int) -> int:
    """Minimum number of nodes separating non-adjacent u and v."""
    return int(maximum_flow(flow_graph, u + n, v).flow_value)


def _neighbor_sets(view: LabeledGraphView) -> list[set[int]]:
    adj = view.und_adj
    return [set(adj.indices[adj.indptr[i]:adj.indptr[i + 1]].tolist())
            for i in range(view.num_nodes)]


def average_node_connectivity(view: LabeledGraphView,
                              budget: ApproxBudget | None = None
                              ) -> tuple[float, str, str]:
    """Returns (value, mode, note)."""
    budget = budget or ApproxBudget()
    n = view.num_nodes
    if n < 2:
        return NAN, "exact", "needs at least two nodes"
    m_simple = len(view.und_edges)
    total_pairs = n * (n - 1) // 2 - m_simple
    if total_pairs <= 0:
        return NAN, "exact", "complete graph: no non-adjacent pairs"
    flow_graph = _vertex_flow_graph(view)

    if total_pairs <= budget.exact_pairs:
        nbrs = _neighbor_sets(view)
        acc = 0
        for u in range(n):
            nu = nbrs[u]
            for v in range(u + 1, n):
                if v not in nu:
                    acc += local_node_connectivity(flow_graph, n, u, v)
        return acc / total_pairs, "exact", ""

    rng = np.random.default_rng(budget.seed)
    nbrs = _neighbor_sets(view)
    k = budget.pair_samples
    acc = 0
    drawn = 0
    guard = 0
    while drawn < k and guard < 100 * k:
        guard += 1
        u, v = rng.integers(0, n, size=2)
        if u == v or int(v) in nbrs[int(u)]:
            continue
        acc += local_node_connectivity(flow_graph, n, int(u), int(v))
        drawn += 1
    if drawn == 0:
        return NAN, "approximate", "sampling found no non-adjacent pairs"
    return acc / drawn, "approximate", f"sampled {drawn} non-adjacent pairs"


def connectivity_properties(view: LabeledGraphView,
                            budget: ApproxBudget | None = None
                            ) -> dict[str, MetricValue]:
    budget = budget or ApproxBudget()
    n = view.num_nodes
    out: dict[str, MetricValue] = {}
    if n == 0:
        out["relative_lcc_size"] = exact(NAN, note="empty graph")
        out["relative_lscc_size"] = exact(NAN, note="empty graph")
        out["average_node_connectivity"] = exact(NAN, note="empty graph")
        return out

    _, weak = connected_components(view.und_adj, directed=False)
    lcc = int(np.bincount(weak).max())
    out["relative_lcc_size"] = exact(lcc / n)

    if view.directed:
        _, strong = connected_components(view.dir_adj, directed=True,
                                         connection="strong")
        lscc = int(np.bincount(strong).max())
        out["relative_lscc_size"] = exact(lscc / n)
    else:
        out["relative_lscc_size"] = exact(lcc / n, note="undirected: equals LCC")

    value, mode, note = average_node_connectivity(view, budget)
    out["average_node_connectivity"] = (
        exact(value, note=note) if mode == "exact" else approximate(value, note=note))
    return out
