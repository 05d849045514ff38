"""Attribute group: label/feature interplay along edges.

Edge homogeneity is the fraction of linked pairs sharing a label. Feature
similarity between endpoints is 1 - arccos(cos_sim) / pi (angular distance
normalized to [0, 1]); within/between-class averages split that by label
agreement, and their ratio is the feature angular SNR. The homophily
measure is the class-size-adjusted score

    h_hat = 1/(C-1) * sum_k max(h_k - |C_k|/N, 0),

with h_k the same-label fraction of the class's neighbor endpoints.
Attribute assortativity is the Pearson correlation of numeric label values
over linked pairs.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .basic import pearson
from .report import MetricValue, exact, skipped
from .view import LabeledGraphView

NAN = float("nan")


def _metric_edges(view: LabeledGraphView) -> np.ndarray:
    """Linked pairs the attribute metrics run over (simple edges/arcs)."""
    return view.arcs if view.directed else view.und_edges


def edge_homogeneity(view: LabeledGraphView) -> float:
    e = _metric_edges(view)
    if not len(e) or view.labels is None:
        return NAN
    y = view.labels
    return float((y[e[:, 0]] == y[e[:, 1]]).mean())


def homophily_measure(view: LabeledGraphView) -> tuple[float, str]:
    """Returns (value, note); neighbor counts use the undirected adjacency."""
    y = view.labels
    n = view.num_nodes
    classes = np.unique(y)
    c = len(classes)
    if c < 2:
        return NAN, "needs at least two classes"
    e = view.und_edges
    same = np.zeros(n, dtype=np.int64)
    if len(e):
        agree = y[e[:, 0]] == y[e[:, 1]]
        np.add.at(same, e[agree, 0], 1)
        np.add.at(same, e[agree, 1], 1)
    deg = view.degrees
    total = 0.0
    note = ""
    for k in classes:
        members = y == k
        deg_sum = int(deg[members].sum())
        if deg_sum == 0:
            h_k = 0.0  # isolated class: no neighborhoods to measure
            note = "class with zero total degree scored 0"
        else:
            h_k = same[members].sum() / deg_sum
        total += max(h_k - members.sum() / n, 0.0)
    return total / (c - 1), note


def _edge_cosines(view: LabeledGraphView, e: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Cosine similarity per edge; flags edges touching zero-norm rows."""
    x = view.features
    src, dst = e[:, 0], e[:, 1]
    if isinstance(x, sp.spmatrix):
        x = x.tocsr()
        norms = np.sqrt(np.asarray(x.multiply(x).sum(axis=1)).ravel())
        dots = np.asarray(x[src].multiply(x[dst]).sum(axis=1)).ravel()
    else:
        xf = x.astype(np.float64)
        norms = np.linalg.norm(xf, axis=1)
        dots = np.einsum("ij,ij->i", xf[src], xf[dst])
    scale = norms[src] * norms[dst]
    valid = scale > 0
    cos = np.zeros(len(e))
    cos[valid] = dots[valid] / scale[valid]
    return cos, valid, int((~valid).sum())


def feature_similarities(view: LabeledGraphView) -> tuple[float, float, int]:
    """(within-class mean, between-class mean, #edges skipped for zero norm)."""
    e = _metric_edges(view)
    if not len(e):
        return NAN, NAN, 0
    cos, valid, skipped_edges = _edge_cosines(view, e)
    sim = 1.0 - np.arccos(np.clip(cos, -1.0, 1.0)) / np.pi
    y = view.labels
    same = y[e[:, 0]] == y[e[:, 1]]
    within_mask = same & valid
    between_mask = ~same & valid
    within = float(sim[within_mask].mean()) if within_mask.any() else NAN
    between = float(sim[between_mask].mean()) if between_mask.any() else NAN
    return within, between, skipped_edges


def attribute_assortativity(view: LabeledGraphView) -> float:
    """Pearson correlation of numeric label values across linked pairs."""
    e = _metric_edges(view)
    if not len(e):
        return NAN
    y = view.labels.astype(np.float64)
    if view.directed:
        return pearson(y[e[:, 0]], y[e[:, 1]])
    xs = np.concatenate([y[e[:, 0]], y[e[:, 1]]])
    ys = np.concatenate([y[e[:, 1]], y[e[:, 0]]])
    return pearson(xs, ys)


def attribute_properties(view: LabeledGraphView) -> dict[str, MetricValue]:
    out: dict[str, MetricValue] = {}
    if view.labels is None:
        for name in ("edge_homogeneity", "avg_within_class_feature_similarity",
                     "avg_between_class_feature_similarity", "feature_angular_snr",
                     "homophily_measure", "attribute_assortativity"):
            out[name] = skipped("no node labels")
        return out

    h = edge_homogeneity(view)
    out["edge_homogeneity"] = exact(h, note="" if h == h else "no edges")

    if view.features is None:
        for name in ("avg_within_class_feature_similarity",
                     "avg_between_class_feature_similarity", "feature_angular_snr"):
            out[name] = skipped("no node features")
    else:
        within, between, zero_norm = feature_similarities(view)
        note = f"{zero_norm} zero-norm endpoint pair(s) skipped" if zero_norm else ""
        out["avg_within_class_feature_similarity"] = exact(
            within, note=note or ("" if within == within else "no within-class edges"))
        out["avg_between_class_feature_similarity"] = exact(
            between, note=note or ("" if between == between else "no between-class edges"))
        if within != within or between != between:
            out["feature_angular_snr"] = exact(NAN, note="within or between undefined")
        elif between == 0:
            out["feature_angular_snr"] = exact(float("inf"),
                                               note="between-class similarity is 0")
        else:
            out["feature_angular_snr"] = exact(within / between)

    hm, note = homophily_measure(view)
    out["homophily_measure"] = exact(hm, note=note)

    aa = attribute_assortativity(view)
    out["attribute_assortativity"] = exact(
        aa, note="" if aa == aa else "degenerate label values")
    return out
