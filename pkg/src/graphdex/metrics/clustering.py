"""Clustering group: local clustering, transitivity, degeneracy.

Undirected local clustering is 2*T(u) / (deg(u) * (deg(u) - 1)). Directed
local clustering follows the total-degree/reciprocal-degree form
T(u) / (deg_tot(u) * (deg_tot(u) - 1) - 2 * deg_rec(u)) with
T(u) = ((A + A^T)^3)_uu / 2, which keeps the coefficient in [0, 1] (a fully
reciprocated triangle scores 1). Nodes whose denominator vanishes
contribute 0. Transitivity and degeneracy are defined on the undirected
simplification.
"""

from __future__ import annotations

import numpy as np

from .report import MetricValue, exact
from .view import LabeledGraphView

NAN = float("nan")


def triangle_degrees(view: LabeledGraphView) -> np.ndarray:
    """(A^3)_uu per node on the undirected simplification (= 2 * T(u))."""
    a = view.und_adj
    if a.nnz == 0:
        return np.zeros(view.num_nodes, dtype=np.int64)
    closed = (a @ a).multiply(a)
    return np.asarray(closed.sum(axis=1)).ravel().astype(np.int64)


def directed_triangle_degrees(view: LabeledGraphView) -> np.ndarray:
    """((A + A^T)^3)_uu per node, reciprocal arcs counting double."""
    a = (view.dir_adj + view.dir_adj.T).tocsr()
    if a.nnz == 0:
        return np.zeros(view.num_nodes, dtype=np.int64)
    closed = (a @ a).multiply(a)
    return np.asarray(closed.sum(axis=1)).ravel().astype(np.int64)


def average_clustering(view: LabeledGraphView) -> float:
    n = view.num_nodes
    if n == 0:
        return NAN
    if view.directed:
        t2 = directed_triangle_degrees(view)  # = 2 * T(u)
        dt = view.total_degrees.astype(np.float64)
        denom = dt * (dt - 1) - 2 * view.reciprocal_degrees
        local = np.where(denom > 0, t2 / (2 * np.maximum(denom, 1)), 0.0)
    else:
        t2 = triangle_degrees(view)  # = 2 * T(u)
        d = view.degrees.astype(np.float64)
        denom = d * (d - 1)
        local = np.where(denom > 0, t2 / np.maximum(denom, 1), 0.0)
    return float(local.mean())


def transitivity(view: LabeledGraphView) -> float:
    """3 * #triangles / #triads on the undirected simplification."""
    t2 = triangle_degrees(view)
    d = view.degrees.astype(np.int64)
    triads2 = (d * (d - 1)).sum()  # = 2 * #triads
    if triads2 == 0:
        return NAN
    return float(t2.sum() / triads2)


def degeneracy(view: LabeledGraphView) -> float:
    if view.num_nodes == 0:
        return NAN
    return float(view.coreness.max())


def clustering_properties(view: LabeledGraphView) -> dict[str, MetricValue]:
    n = view.num_nodes
    out: dict[str, MetricValue] = {}
    acc = average_clustering(view)
    out["average_clustering_coefficient"] = exact(
        acc, note="" if acc == acc else "empty graph")
    t = transitivity(view)
    out["transitivity"] = exact(t, note="" if t == t else "no triads")
    dg = degeneracy(view)
    out["degeneracy"] = exact(dg, note="" if dg == dg else "empty graph")
    return out
