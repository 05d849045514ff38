"""Task-centric dataset loading: combine one graph with one task.

A view is a read-only projection: feature and target tensors are references
into the loaded graph, never copies, so one graph can serve many tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DatasetNotFound, TaskNotFound
from .graph_store import GraphStorage, Tensor, load_graph
from .task_config import (
    SplitMasks,
    TaskConfig,
    TaskType,
    entity_kind,
    parse_task_file,
    resolve_splits,
)

METADATA_FILE = "metadata.json"


@dataclass(frozen=True)
class DatasetView:
    """One graph combined with one task: resolved masks, features, target."""

    graph: GraphStorage
    task: TaskConfig
    masks: SplitMasks
    features: tuple[Tensor, ...]
    target: Tensor | None
    entity_kind: str
    # Global entity range the target rows cover; differs from (0, n) only
    # when the target lives on one group of a heterogeneous graph.
    target_range: tuple[int, int] | None = None

    def batch(self, which: str = "train"):
        """One (features, target, mask) triple for the requested split."""
        mask = getattr(self.masks, which)
        return self.features, self.target, mask


def combine_graph_and_task(graph: GraphStorage, task: TaskConfig,
                           split_index: int = 0) -> DatasetView:
    """Resolve a task against a loaded graph.

    Raises MissingAttribute for unresolvable feature/target paths and
    propagates split resolution errors.
    """
    features = tuple(graph.get_attribute(p) for p in task.features)
    target = graph.get_attribute(task.target) if task.target else None
    target_range = graph.attribute_range(task.target) if task.target else None
    masks = resolve_splits(task, graph, split_index=split_index)
    return DatasetView(
        graph=graph,
        task=task,
        masks=masks,
        features=features,
        target=target,
        entity_kind=entity_kind(task.task_type),
        target_range=target_range,
    )


def find_task_files(dataset_dir: str | Path) -> list[Path]:
    """Task documents in a dataset directory, sorted by file name."""
    return sorted(Path(dataset_dir).glob("task*.json"))


def get_dataset(root: str | Path, name: str, task_type: TaskType | str,
                task_file: str | None = None) -> DatasetView:
    """Load ``root/name`` and combine it with its task of the given type.

    When several task files share the type, the lexicographically first is
    used unless ``task_file`` picks one explicitly.
    """
    task_type = TaskType(task_type)
    dataset_dir = Path(root) / name
    if not (dataset_dir / METADATA_FILE).is_file():
        raise DatasetNotFound(f"no dataset {name!r} under {root}")
    candidates = []
    available = []
    for p in find_task_files(dataset_dir):
        try:
            task = parse_task_file(p)
        except Exception:
            continue
        available.append(task.task_type.value)
        if task.task_type is task_type and (task_file is None or p.name == task_file):
            candidates.append((p, task))
    if not candidates:
        raise TaskNotFound(
            f"dataset {name!r} has no {task_type.value} task; "
            f"available: {sorted(set(available))}")
    graph = load_graph(dataset_dir)
    return combine_graph_and_task(graph, candidates[0][1])
