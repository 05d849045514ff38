"""Distribution group: degree-sequence tail exponents and Gini coefficients.

Tail exponents are closed-form maximum-likelihood fits over the positive
degrees d_i with d_min the smallest positive degree:

* discrete power law:  alpha = 1 + k / sum(ln(d_i / (d_min - 0.5)))
* continuous Pareto:   alpha = k / sum(ln(d_i / d_min))

The Gini coefficient uses the sorted-sequence form
G = sum_i (2i - n - 1) x_(i) / (n^2 * mean).
"""

from __future__ import annotations

import math

import numpy as np

from .report import MetricValue, exact
from .view import LabeledGraphView

NAN = float("nan")


def gini(values) -> float:
    """Gini coefficient of a non-negative sequence; NaN when the mean is 0."""
    x = np.asarray(values, dtype=np.float64)
    n = len(x)
    if n == 0:
        return NAN
    if np.any(x < 0):
        raise ValueError("gini is defined for non-negative values")
    mu = x.mean()
    if mu <= 0:
        return NAN
    xs = np.sort(x)
    i = np.arange(1, n + 1, dtype=np.float64)
    return float(((2 * i - n - 1) * xs).sum() / (n * n * mu))


def power_law_exponent(degrees) -> float:
    d = np.asarray(degrees, dtype=np.float64)
    d = d[d > 0]
    if len(d) == 0:
        return NAN
    d_min = d.min()
    s = np.log(d / (d_min - 0.5)).sum()
    if s <= 0:
        return NAN
    return float(1.0 + len(d) / s)


def pareto_exponent(degrees) -> float:
    d = np.asarray(degrees, dtype=np.float64)
    d = d[d > 0]
    if len(d) == 0:
        return NAN
    s = np.log(d / d.min()).sum()
    if s == 0:
        return math.inf  # constant positive degrees: the MLE diverges
    return float(len(d) / s)


def distribution_properties(view: LabeledGraphView) -> dict[str, MetricValue]:
    deg = view.degrees
    out: dict[str, MetricValue] = {}

    a = power_law_exponent(deg)
    out["power_law_exponent"] = exact(a, note="" if a == a else "no positive degrees")
    p = pareto_exponent(deg)
    note = ""
    if p != p:
        note = "no positive degrees"
    elif p == math.inf:
        note = "constant degree sequence"
    out["pareto_exponent"] = exact(p, note=note)

    g = gini(deg) if len(deg) else NAN
    out["degree_gini"] = exact(g, note="" if g == g else "degenerate degree sequence")
    c = gini(view.coreness) if view.num_nodes else NAN
    out["coreness_gini"] = exact(c, note="" if c == c else "degenerate coreness sequence")
    return out
