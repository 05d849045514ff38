"""Self-contained dataset fixtures for the bridge tests (built via core APIs)."""

import json

import numpy as np
import pytest

from graphdex import EdgeGroup, GraphEntry, GraphStorage, NodeGroup, write_graph
from graphdex.tensor_store import write_entries


def make_triangle(path, labels=(0, 0, 1)):
    path.mkdir(parents=True, exist_ok=True)
    g = GraphStorage(
        node_groups=[NodeGroup(name="Node", start=0, count=3, attributes={
            "NodeFeature": np.array([[1, 0], [0, 1], [1, 1]], dtype=np.float32),
            "NodeLabel": np.asarray(labels, dtype=np.int64),
        })],
        edge_groups=[EdgeGroup(name="Edge", edges=np.array(
            [[0, 1], [1, 2], [2, 0]], dtype=np.int64))],
        graphs=[GraphEntry()],
        directed=False,
    )
    write_graph(g, path)
    write_entries(path / "splits.npz", {
        "train": np.array([0], dtype=np.int64),
        "val": np.array([1], dtype=np.int64),
        "test": np.array([2], dtype=np.int64),
    })
    (path / "task_node_classification.json").write_text(json.dumps({
        "type": "NodeClassification",
        "feature": ["Node/NodeFeature"],
        "target": "Node/NodeLabel",
        "num_classes": 2,
        "train_set": {"file": "splits.npz", "key": "train"},
        "val_set": {"file": "splits.npz", "key": "val"},
        "test_set": {"file": "splits.npz", "key": "test"},
    }))
    (path / "README.md").write_text("# triangle fixture\n")
    (path / "LICENSE").write_text("MIT\n")
    (path / "urls.json").write_text(json.dumps(
        {"data.npz": "", "splits.npz": ""}))
    return path


def make_unlabeled_star(path):
    path.mkdir(parents=True, exist_ok=True)
    g = GraphStorage(
        node_groups=[NodeGroup(name="Node", start=0, count=4, attributes={
            "NodeFeature": np.eye(4, 2, dtype=np.float32)})],
        edge_groups=[EdgeGroup(name="Edge", edges=np.array(
            [[0, 1], [0, 2], [0, 3]], dtype=np.int64))],
        graphs=[GraphEntry()],
        directed=False,
    )
    write_graph(g, path)
    (path / "README.md").write_text("# star fixture\n")
    (path / "LICENSE").write_text("MIT\n")
    (path / "urls.json").write_text(json.dumps({"data.npz": ""}))
    return path


@pytest.fixture
def triangle_ds(tmp_path):
    return make_triangle(tmp_path / "triangle")


@pytest.fixture
def star_ds(tmp_path):
    return make_unlabeled_star(tmp_path / "star4")
