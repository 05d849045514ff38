"""Thin bindings exposing graphdex datasets to numpy-based ML consumers.

Three entry points mirror the core's public surface:

* ``bridge_get_dataset`` -- task-ready arrays (features, edge index, target,
  split masks) as plain numpy, no copies where the stored layout permits;
* ``bridge_validate`` -- the validation report as a plain mapping;
* ``bridge_metrics`` -- the metric report as a plain mapping, value-equal to
  the CLI's ``metrics --format json`` output.

No logic lives here: every call delegates to the core package, and core
errors propagate as ordinary exceptions whose type name is the error code.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from graphdex import (
    ApproxBudget,
    TaskType,
    compute_all,
    get_dataset,
    load_graph,
    validate_dataset,
    view_from_storage,
)

__all__ = ["BridgeDataset", "bridge_get_dataset", "bridge_metrics", "bridge_validate"]

__version__ = "0.1.0"


@dataclass(frozen=True)
class BridgeDataset:
    """Task-ready arrays mirroring a core dataset view, shape for shape."""

    node_features: tuple[np.ndarray, ...]
    edge_index: np.ndarray  # (2, M)
    target: np.ndarray | None
    train_mask: np.ndarray
    val_mask: np.ndarray
    test_mask: np.ndarray
    task_type: str

    @property
    def num_edges(self) -> int:
        return self.edge_index.shape[1]


def bridge_get_dataset(root: str | Path, name: str,
                       task_type: str | TaskType) -> BridgeDataset:
    """Load ``root/name`` for a task type; arrays reference the loaded graph."""
    view = get_dataset(root, name, task_type)
    dense_features = tuple(f for f in view.features if isinstance(f, np.ndarray))
    return BridgeDataset(
        node_features=dense_features,
        edge_index=view.graph.edges_concat().T,  # transpose is a view
        target=view.target if isinstance(view.target, np.ndarray) else None,
        train_mask=view.masks.train,
        val_mask=view.masks.val,
        test_mask=view.masks.test,
        task_type=view.task.task_type.value,
    )


def bridge_validate(path: str | Path) -> dict:
    """Validation findings as a plain mapping: {'passed': bool, 'findings': [...]}"""
    return validate_dataset(path).to_dict()


def bridge_metrics(path: str | Path, **budget_overrides) -> dict:
    """Full metric report as a plain mapping.

    Keyword overrides feed the approximation budget (``exact_n``,
    ``exact_pairs``, ``bfs_sources``, ``pair_samples``, ``seed``).
    """
    budget = ApproxBudget(**budget_overrides)
    graph = load_graph(path)
    return compute_all(view_from_storage(graph), budget).to_dict()
