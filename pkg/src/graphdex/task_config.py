"""Task configuration files and train/validation/test split resolution.

A task file is a ``task_<name>.json`` sibling of ``metadata.json``::

    {
      "description": "...",
      "type": "NodeClassification",
      "feature": ["Node/NodeFeature"],
      "target": "Node/NodeLabel",
      "num_classes": 7,
      "train_set": {"file": ..., "key": ...},   # fixed split, with val_set/test_set
      "train_ratio": 0.6, "val_ratio": 0.2, "test_ratio": 0.2,
      "seed": 42, "num_splits": 1,              # random split
      "val_neg": {...}, "test_neg": {...},      # link prediction, optional
      "time_attribute": "Edge/EdgeTime",        # time-dependent link prediction
      "val_time": 2000, "test_time": 2005,
      "prediction_slot": "tail"                 # KG entity prediction
    }

Random splits are reproducible across platforms: a SplitMix-style 64-bit
generator drives a Fisher-Yates shuffle of the entity ids, which is then cut
at the ratio boundaries. Time-dependent splits assign an edge with timestamp
``t`` to train when ``t < val_time``, validation when
``val_time <= t < test_time``, and test otherwise.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadRatio,
    EmptySplit,
    IndexOutOfRange,
    MissingField,
    OverlappingSplit,
    SchemaError,
    UnknownTaskType,
)
from .graph_store import DataRef, GraphStorage
from .tensor_store import read_array


class TaskType(str, enum.Enum):
    NodeClassification = "NodeClassification"
    NodeRegression = "NodeRegression"
    GraphClassification = "GraphClassification"
    GraphRegression = "GraphRegression"
    LinkPrediction = "LinkPrediction"
    TimeDependentLinkPrediction = "TimeDependentLinkPrediction"
    KGEntityPrediction = "KGEntityPrediction"
    KGRelationPrediction = "KGRelationPrediction"


_TASK_DESCRIPTIONS: dict[TaskType, str] = {
    TaskType.NodeClassification: "predict categorical node properties",
    TaskType.NodeRegression: "predict continuous node properties",
    TaskType.GraphClassification: "predict categorical graph-level properties",
    TaskType.GraphRegression: "predict continuous graph-level properties",
    TaskType.LinkPrediction: "predict the existence of a link between two nodes",
    TaskType.TimeDependentLinkPrediction:
        "link prediction whose split depends on the creation time of links",
    TaskType.KGEntityPrediction: "predict the tail or head node for a triplet",
    TaskType.KGRelationPrediction: "predict the relation type for a triplet",
}

# Task types whose targets are categorical and need num_classes.
CLASSIFICATION_TYPES = (TaskType.NodeClassification, TaskType.GraphClassification)

_TARGET_REQUIRED = (
    TaskType.NodeClassification,
    TaskType.NodeRegression,
    TaskType.GraphClassification,
    TaskType.GraphRegression,
    TaskType.KGRelationPrediction,
)


def list_task_types() -> list[tuple[TaskType, str]]:
    """All supported task types with one-line descriptions, in fixed order."""
    return [(t, _TASK_DESCRIPTIONS[t]) for t in TaskType]


def entity_kind(task_type: TaskType) -> str:
    """Entity set a task is defined over: node, graph, or edge."""
    if task_type in (TaskType.NodeClassification, TaskType.NodeRegression):
        return "node"
    if task_type in (TaskType.GraphClassification, TaskType.GraphRegression):
        return "graph"
    return "edge"


@dataclass(frozen=True)
class SplitSpec:
    kind: str  # "fixed" | "random"
    train_ref: DataRef | None = None
    val_ref: DataRef | None = None
    test_ref: DataRef | None = None
    ratios: tuple[float, float, float] | None = None
    seed: int = 0
    num_splits: int = 1


@dataclass(frozen=True)
class SplitMasks:
    """Pairwise-disjoint boolean masks over one entity set."""

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray

    def __post_init__(self):
        if np.any(self.train & self.val) or np.any(self.train & self.test) \
                or np.any(self.val & self.test):
            raise OverlappingSplit("split masks overlap")


@dataclass(frozen=True)
class TaskConfig:
    task_type: TaskType
    description: str = ""
    features: tuple[str, ...] = ()
    target: str | None = None
    split: SplitSpec | None = None
    num_classes: int | None = None
    val_neg: DataRef | None = None
    test_neg: DataRef | None = None
    time_attribute: str | None = None
    val_time: float | None = None
    test_time: float | None = None
    prediction_slot: str | None = None
    base_dir: Path | None = None


def _parse_ref(obj, name: str) -> DataRef:
    if not isinstance(obj, dict) or "file" not in obj:
        raise SchemaError(f"'{name}' must be an object with a 'file' key", f"/{name}")
    return DataRef(file=obj["file"], key=obj.get("key"))


def parse_task(text: str, base_dir: str | Path | None = None) -> TaskConfig:
    """Parse a task document; raises UnknownTaskType/MissingField/BadRatio."""
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise SchemaError("task file must be a JSON object", "")
    if "type" not in doc:
        raise MissingField("type")
    try:
        ttype = TaskType(doc["type"])
    except ValueError:
        supported = ", ".join(t.value for t in TaskType)
        raise UnknownTaskType(
            f"unknown task type {doc['type']!r}; supported: {supported}") from None

    features = doc.get("feature", [])
    if isinstance(features, str):
        features = [features]
    if not isinstance(features, list) or not all(isinstance(f, str) for f in features):
        raise SchemaError("'feature' must be a list of attribute paths", "/feature")

    target = doc.get("target")
    if target is None and ttype in _TARGET_REQUIRED:
        raise MissingField("target")
    if target is not None and target in features:
        raise SchemaError("feature list must not include the target", "/feature")

    num_classes = doc.get("num_classes")
    if ttype in CLASSIFICATION_TYPES:
        if num_classes is None:
            raise MissingField("num_classes")
        if not isinstance(num_classes, int) or num_classes < 2:
            raise SchemaError("num_classes must be an integer >= 2", "/num_classes")

    split = None
    if ttype is TaskType.TimeDependentLinkPrediction:
        for req in ("time_attribute", "val_time", "test_time"):
            if req not in doc:
                raise MissingField(req)
        time_attribute = doc["time_attribute"]
        val_time, test_time = float(doc["val_time"]), float(doc["test_time"])
        if not val_time <= test_time:
            raise BadRatio(f"val_time {val_time} must not exceed test_time {test_time}")
    else:
        time_attribute = val_time = test_time = None
        split = _parse_split(doc)

    slot = doc.get("prediction_slot")
    if ttype is TaskType.KGEntityPrediction:
        slot = slot or "tail"
        if slot not in ("head", "tail"):
            raise SchemaError("prediction_slot must be 'head' or 'tail'",
                              "/prediction_slot")
    elif ttype is TaskType.KGRelationPrediction:
        slot = "relation"

    return TaskConfig(
        task_type=ttype,
        description=str(doc.get("description", "")),
        features=tuple(features),
        target=target,
        split=split,
        num_classes=num_classes,
        val_neg=_parse_ref(doc["val_neg"], "val_neg") if "val_neg" in doc else None,
        test_neg=_parse_ref(doc["test_neg"], "test_neg") if "test_neg" in doc else None,
        time_attribute=time_attribute,
        val_time=val_time,
        test_time=test_time,
        prediction_slot=slot,
        base_dir=Path(base_dir) if base_dir is not None else None,
    )


def parse_task_file(path: str | Path) -> TaskConfig:
    path = Path(path)
    return parse_task(path.read_text(), base_dir=path.parent)


def _parse_split(doc: dict) -> SplitSpec:
    fixed_keys = ("train_set", "val_set", "test_set")
    ratio_keys = ("train_ratio", "val_ratio", "test_ratio")
    if any(k in doc for k in fixed_keys):
        for k in fixed_keys:
            if k not in doc:
                raise MissingField(k)
        return SplitSpec(
            kind="fixed",
            train_ref=_parse_ref(doc["train_set"], "train_set"),
            val_ref=_parse_ref(doc["val_set"], "val_set"),
            test_ref=_parse_ref(doc["test_set"], "test_set"),
        )
    if any(k in doc for k in ratio_keys):
        for k in ratio_keys:
            if k not in doc:
                raise MissingField(k)
        ratios = tuple(float(doc[k]) for k in ratio_keys)
        if any(r < 0 for r in ratios):
            raise BadRatio(f"ratios must be non-negative, got {ratios}")
        if sum(ratios) > 1.0 + 1e-12:
            raise BadRatio(f"ratios sum to {sum(ratios)}, must be <= 1")
        num_splits = doc.get("num_splits", 1)
        if not isinstance(num_splits, int) or num_splits < 1:
            raise SchemaError("num_splits must be a positive integer", "/num_splits")
        return SplitSpec(kind="random", ratios=ratios,
                         seed=int(doc.get("seed", 0)), num_splits=num_splits)
    raise MissingField("train_set",
                       "a task needs either fixed split refs or random split ratios")


# --- split resolution -----------------------------------------------------------

_MASK64 = (1 << 64) - 1


def _splitmix64(seed: int):
    """SplitMix-style 64-bit generator; deterministic across platforms."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield (z ^ (z >> 31)) & _MASK64


def shuffled_ids(n: int, seed: int) -> np.ndarray:
    """Fisher-Yates permutation of range(n) driven by the seeded generator."""
    ids = list(range(n))
    gen = _splitmix64(seed)
    for i in range(n - 1, 0, -1):
        j = next(gen) % (i + 1)
        ids[i], ids[j] = ids[j], ids[i]
    return np.asarray(ids, dtype=np.int64)


def _entity_count(task: TaskConfig, graph: GraphStorage) -> int:
    kind = entity_kind(task.task_type)
    if kind == "node":
        return graph.num_nodes
    if kind == "graph":
        return graph.num_graphs
    return graph.num_edges


def _load_index_set(ref: DataRef, base: Path | None, n: int, name: str) -> np.ndarray:
    if base is None:
        raise MissingField("base_dir",
                           "fixed split refs need the task file's directory to resolve")
    arr = read_array(ref.resolve(base), ref.key)
    if arr.dtype == np.bool_:
        if len(arr) != n:
            raise IndexOutOfRange(
                f"{name}: boolean mask length {len(arr)} != entity count {n}")
        return np.flatnonzero(arr).astype(np.int64)
    if not np.issubdtype(arr.dtype, np.integer) or arr.ndim != 1:
        raise SchemaError(f"{name}: split set must be a 1-D index array or boolean mask")
    idx = arr.astype(np.int64)
    if len(idx) and (idx.min() < 0 or idx.max() >= n):
        raise IndexOutOfRange(f"{name}: index outside [0, {n})")
    if len(np.unique(idx)) != len(idx):
        raise OverlappingSplit(f"{name}: duplicate indices within the set")
    return idx


def resolve_splits(task: TaskConfig, graph: GraphStorage,
                   split_index: int = 0) -> SplitMasks:
    """Materialize the task's split as boolean masks over its entity set.

    Random splits are a pure function of (seed, ratios, entity count); for
    multi-split tasks ``split_index`` selects one deterministic member.
    """
    n = _entity_count(task, graph)

    if task.task_type is TaskType.TimeDependentLinkPrediction:
        t = graph.get_attribute(task.time_attribute)
        if not isinstance(t, np.ndarray) or t.ndim != 1:
            raise SchemaError("time attribute must be a dense 1-D array")
        if len(t) != n:
            raise IndexOutOfRange(
                f"time attribute length {len(t)} != edge count {n}")
        train = t < task.val_time
        val = (t >= task.val_time) & (t < task.test_time)
        test = t >= task.test_time
        return SplitMasks(train=train, val=val, test=test)

    spec = task.split
    if spec is None:
        raise MissingField("split", "task carries no split specification")

    if spec.kind == "fixed":
        sets = {}
        for name, ref in (("train_set", spec.train_ref), ("val_set", spec.val_ref),
                          ("test_set", spec.test_ref)):
            idx = _load_index_set(ref, task.base_dir, n, name)
            if len(idx) == 0:
                raise EmptySplit(f"{name} resolves to an empty set")
            sets[name] = idx
        masks = {}
        for name, idx in sets.items():
            m = np.zeros(n, dtype=bool)
            m[idx] = True
            masks[name] = m
        overlap = ((masks["train_set"] & masks["val_set"])
                   | (masks["train_set"] & masks["test_set"])
                   | (masks["val_set"] & masks["test_set"]))
        if overlap.any():
            raise OverlappingSplit(
                f"split sets share entities (e.g. id {int(np.flatnonzero(overlap)[0])})")
        return SplitMasks(train=masks["train_set"], val=masks["val_set"],
                          test=masks["test_set"])

    if not 0 <= split_index < spec.num_splits:
        raise IndexOutOfRange(
            f"split_index {split_index} outside [0, {spec.num_splits})")
    perm = shuffled_ids(n, spec.seed + split_index)
    r_train, r_val, r_test = spec.ratios
    n_train = int(r_train * n)
    n_val = int(r_val * n)
    n_test = int(r_test * n)
    train = np.zeros(n, dtype=bool)
    val = np.zeros(n, dtype=bool)
    test = np.zeros(n, dtype=bool)
    train[perm[:n_train]] = True
    val[perm[n_train:n_train + n_val]] = True
    test[perm[n_train + n_val:n_train + n_val + n_test]] = True
    return SplitMasks(train=train, val=val, test=test)
