"""Distance group: diameter, pseudo-diameter, shortest paths, efficiency.

Diameter and average shortest path length are computed on the largest
connected component (weakly connected for undirected inputs, strongly
connected for directed ones, so every pairwise distance is finite). Global
efficiency covers all ordered pairs of the whole graph with unreachable
pairs contributing 0. Beyond ``budget.exact_n`` nodes the all-pairs pass is
replaced by sampled BFS sources and results are flagged approximate.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import connected_components, shortest_path

from .report import ApproxBudget, MetricValue, approximate, exact
from .view import LabeledGraphView

NAN = float("nan")


def _distance_domain(view: LabeledGraphView) -> tuple[np.ndarray, str]:
    """Node ids of the largest component with finite pairwise distances."""
    n = view.num_nodes
    if n == 0:
        return np.zeros(0, dtype=np.int64), "empty graph"
    if view.directed:
        _, labels = connected_components(view.dir_adj, directed=True,
                                         connection="strong")
        note = "lscc-only"
    else:
        _, labels = connected_components(view.und_adj, directed=False)
        note = "lcc-only"
    sizes = np.bincount(labels)
    return np.flatnonzero(labels == sizes.argmax()).astype(np.int64), note


def _adj(view: LabeledGraphView):
    return view.dir_adj if view.directed else view.und_adj


def _bfs_rows(view: LabeledGraphView, sources: np.ndarray) -> np.ndarray:
    if len(sources) == 0:
        return np.zeros((0, view.num_nodes))
    return shortest_path(_adj(view), method="D", directed=view.directed,
                         unweighted=True, indices=sources)


def _efficiency_from_rows(rows: np.ndarray, n: int) -> float:
    inv = np.zeros_like(rows)
    finite = np.isfinite(rows) & (rows > 0)
    inv[finite] = 1.0 / rows[finite]
    return float(inv.sum() / (len(rows) * (n - 1)))


def pseudo_diameter(view: LabeledGraphView) -> float:
    """Double BFS sweep: iterate from the farthest node found while the
    eccentricity keeps growing. The result is a realized shortest-path
    distance, hence a lower bound on the true diameter."""
    domain, _ = _distance_domain(view)
    if len(domain) == 0:
        return NAN
    if len(domain) == 1:
        return 0.0
    in_domain = np.zeros(view.num_nodes, dtype=bool)
    in_domain[domain] = True
    deg = view.degrees
    start = domain[np.argmax(deg[domain])]  # high-degree start, deterministic
    best = -1.0
    cur = start
    for _ in range(len(domain)):
        row = _bfs_rows(view, np.asarray([cur]))[0]
        row = np.where(in_domain, row, -np.inf)
        ecc = row.max()
        if ecc <= best:
            break
        best = ecc
        cur = int(np.argmax(row))
    return float(best)


def distance_properties(view: LabeledGraphView,
                        budget: ApproxBudget | None = None) -> dict[str, MetricValue]:
    budget = budget or ApproxBudget()
    n = view.num_nodes
    domain, domain_note = _distance_domain(view)
    out: dict[str, MetricValue] = {}

    pd = pseudo_diameter(view)
    out["pseudo_diameter"] = exact(pd, note="" if pd == pd else "empty graph")

    if n == 0:
        out["diameter"] = exact(NAN, note="empty graph")
        out["average_shortest_path_length"] = exact(NAN, note="empty graph")
        out["global_efficiency"] = exact(NAN, note="empty graph")
        return out

    exact_mode = n <= budget.exact_n

    if exact_mode:
        dist = _bfs_rows(view, np.arange(n))
        if len(domain) >= 2:
            sub = dist[np.ix_(domain, domain)]
            off_diag = ~np.eye(len(domain), dtype=bool)
            vals = sub[off_diag]
            out["diameter"] = exact(float(vals.max()), note=domain_note)
            out["average_shortest_path_length"] = exact(float(vals.mean()),
                                                        note=domain_note)
        else:
            note = f"{domain_note}; single-node component"
            out["diameter"] = exact(NAN, note=note)
            out["average_shortest_path_length"] = exact(NAN, note=note)
        if n >= 2:
            out["global_efficiency"] = exact(_efficiency_from_rows(dist, n))
        else:
            out["global_efficiency"] = exact(NAN, note="needs at least two nodes")
        return out

    rng = np.random.default_rng(budget.seed)
    if len(domain) >= 2:
        k = min(budget.bfs_sources, len(domain))
        sources = np.sort(rng.choice(domain, size=k, replace=False))
        rows = _bfs_rows(view, sources)
        sub = rows[:, domain]
        pos = sub[np.isfinite(sub) & (sub > 0)]
        note = f"{domain_note}; sampled {k} BFS sources"
        out["diameter"] = approximate(float(pos.max()) if len(pos) else NAN, note=note)
        out["average_shortest_path_length"] = approximate(
            float(pos.mean()) if len(pos) else NAN, note=note)
    else:
        sources = np.zeros(0, dtype=np.int64)
        rows = np.zeros((0, n))
        note = f"{domain_note}; single-node component"
        out["diameter"] = approximate(NAN, note=note)
        out["average_shortest_path_length"] = approximate(NAN, note=note)

    ke = min(budget.bfs_sources, n)
    eff_sources = np.sort(rng.choice(n, size=ke, replace=False))
    if np.array_equal(eff_sources, sources):
        eff_rows = rows
    else:
        eff_rows = _bfs_rows(view, eff_sources)
    out["global_efficiency"] = approximate(
        _efficiency_from_rows(eff_rows, n), note=f"sampled {ke} BFS sources")
    return out
