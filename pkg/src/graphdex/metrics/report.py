"""Metric report types and the fixed catalogue of graph data properties."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ApproxBudget:
    """Thresholds deciding when exact all-pairs algorithms yield to sampling.

    ``exact_n`` bounds all-pairs BFS; ``exact_pairs`` bounds per-pair
    max-flow enumeration. When exceeded, ``bfs_sources`` BFS sources or
    ``pair_samples`` node pairs are sampled with the recorded seed.
    """

    exact_n: int = 1000
    exact_pairs: int = 10000
    bfs_sources: int = 256
    pair_samples: int = 2048
    seed: int = 0

    def to_dict(self) -> dict:
        return {"exact_n": self.exact_n, "exact_pairs": self.exact_pairs,
                "bfs_sources": self.bfs_sources, "pair_samples": self.pair_samples,
                "seed": self.seed}


# Catalogue of all computed properties, grouped; order is the report order.
CATALOGUE: dict[str, tuple[str, ...]] = {
    "basic": (
        "is_directed",
        "num_nodes",
        "num_edges",
        "edge_density",
        "average_degree",
        "edge_reciprocity",
        "degree_assortativity",
    ),
    "distance": (
        "diameter",
        "pseudo_diameter",
        "average_shortest_path_length",
        "global_efficiency",
    ),
    "connectivity": (
        "relative_lcc_size",
        "relative_lscc_size",
        "average_node_connectivity",
    ),
    "clustering": (
        "average_clustering_coefficient",
        "transitivity",
        "degeneracy",
    ),
    "distribution": (
        "power_law_exponent",
        "pareto_exponent",
        "degree_gini",
        "coreness_gini",
    ),
    "attribute": (
        "edge_homogeneity",
        "avg_within_class_feature_similarity",
        "avg_between_class_feature_similarity",
        "feature_angular_snr",
        "homophily_measure",
        "attribute_assortativity",
    ),
}

GROUP_OF: dict[str, str] = {name: group for group, names in CATALOGUE.items()
                            for name in names}

ALL_METRICS: tuple[str, ...] = tuple(name for names in CATALOGUE.values()
                                     for name in names)


@dataclass
class MetricValue:
    value: float | int | bool
    mode: str = "exact"  # "exact" | "approximate" | "skipped"
    elapsed: float = 0.0
    note: str = ""

    def to_dict(self) -> dict:
        v = self.value
        if isinstance(v, float) and math.isnan(v):
            v = float("nan")
        return {"value": v, "mode": self.mode, "elapsed": self.elapsed,
                "note": self.note}


def exact(value, note: str = "") -> MetricValue:
    return MetricValue(value=value, mode="exact", note=note)


def approximate(value, note: str = "") -> MetricValue:
    return MetricValue(value=value, mode="approximate", note=note)


def skipped(note: str) -> MetricValue:
    return MetricValue(value=float("nan"), mode="skipped", note=note)


@dataclass
class MetricReport:
    """Named graph-property values with provenance and timing."""

    entries: dict[str, MetricValue] = field(default_factory=dict)
    budget: ApproxBudget = field(default_factory=ApproxBudget)

    def value(self, name: str):
        return self.entries[name].value

    def mode(self, name: str) -> str:
        return self.entries[name].mode

    def to_dict(self) -> dict:
        return {
            "budget": self.budget.to_dict(),
            "metrics": {
                name: {"group": GROUP_OF.get(name, ""), **mv.to_dict()}
                for name, mv in self.entries.items()
            },
        }

    def to_json(self, indent: int | None = 2) -> str:
        # NaN/Infinity use the JavaScript-style literals json.loads accepts
        return json.dumps(self.to_dict(), indent=indent, allow_nan=True)

    def to_markdown(self) -> str:
        lines = ["| group | metric | value | mode | note |",
                 "| --- | --- | --- | --- | --- |"]
        for name, mv in self.entries.items():
            v = mv.value
            if isinstance(v, bool):
                text = str(v).lower()
            elif isinstance(v, float):
                text = "nan" if math.isnan(v) else f"{v:.6g}"
            else:
                text = str(v)
            lines.append(
                f"| {GROUP_OF.get(name, '')} | {name} | {text} | {mv.mode} | {mv.note} |")
        return "\n".join(lines)

    @classmethod
    def from_dict(cls, doc: dict) -> "MetricReport":
        budget = ApproxBudget(**doc.get("budget", {}))
        entries = {}
        for name, obj in doc.get("metrics", {}).items():
            entries[name] = MetricValue(value=obj["value"], mode=obj["mode"],
                                        elapsed=obj.get("elapsed", 0.0),
                                        note=obj.get("note", ""))
        return cls(entries=entries, budget=budget)
