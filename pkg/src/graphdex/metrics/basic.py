"""Basic group: counts, density, degree, reciprocity, degree assortativity."""

from __future__ import annotations

import numpy as np

from .report import MetricValue, exact, skipped
from .view import LabeledGraphView

NAN = float("nan")


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    """Plain Pearson correlation; NaN when either side has zero variance."""
    if len(x) == 0:
        return NAN
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    denom = np.sqrt((dx * dx).sum() * (dy * dy).sum())
    if denom == 0:
        return NAN
    return float((dx * dy).sum() / denom)


def degree_assortativity(view: LabeledGraphView) -> float:
    """Pearson correlation of endpoint degrees over linked pairs.

    Undirected graphs contribute each simple edge in both orientations;
    directed graphs contribute each arc once with total degrees.
    """
    if view.directed:
        e = view.arcs
        if not len(e):
            return NAN
        deg = view.total_degrees
        return pearson(deg[e[:, 0]], deg[e[:, 1]])
    e = view.und_edges
    if not len(e):
        return NAN
    deg = view.degrees
    xs = np.concatenate([deg[e[:, 0]], deg[e[:, 1]]])
    ys = np.concatenate([deg[e[:, 1]], deg[e[:, 0]]])
    return pearson(xs, ys)


def edge_reciprocity(view: LabeledGraphView) -> float:
    """Fraction of arcs whose reverse arc is also present (simple arcs)."""
    m = len(view.arcs)
    if m == 0:
        return NAN
    both = view.dir_adj.multiply(view.dir_adj.T).nnz
    return both / m


def basic_properties(view: LabeledGraphView) -> dict[str, MetricValue]:
    n = view.num_nodes
    m = view.num_edges  # raw stored edge count
    out: dict[str, MetricValue] = {
        "is_directed": exact(view.directed),
        "num_nodes": exact(n),
        "num_edges": exact(m),
    }

    if n < 2:
        out["edge_density"] = exact(NAN, note="needs at least two nodes")
    elif view.directed:
        out["edge_density"] = exact(m / (n * (n - 1)))
    else:
        out["edge_density"] = exact(2 * m / (n * (n - 1)))

    if n == 0:
        out["average_degree"] = exact(NAN, note="empty graph")
    else:
        out["average_degree"] = exact((m if view.directed else 2 * m) / n)

    if not view.directed:
        out["edge_reciprocity"] = skipped("undirected graph")
    else:
        r = edge_reciprocity(view)
        out["edge_reciprocity"] = exact(r, note="" if r == r else "no arcs")

    a = degree_assortativity(view)
    note = "" if a == a else "degenerate degree distribution"
    out["degree_assortativity"] = exact(a, note=note)
    return out
