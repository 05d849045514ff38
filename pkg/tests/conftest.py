"""Shared dataset fixtures, generated on the fly through the writer APIs."""

import json
from pathlib import Path

import numpy as np
import pytest

from graphdex.graph_store import (
    EdgeGroup,
    GraphEntry,
    GraphStorage,
    NodeGroup,
    write_graph,
)
from graphdex.tensor_store import write_entries

README_WITH_CITATIONS = """# {name}

A tiny fixture dataset.

## Citations

### Original Source

```bibtex
@article{{mccallum2000automating,
  title={{Automating the construction of internet portals with machine learning}},
  author={{McCallum, Andrew Kachites and Nigam, Kamal and Rennie, Jason and Seymore, Kristie}},
  journal={{Information Retrieval}},
  year={{2000}}
}}
```

### Previous Versions

```bibtex
@article{{sen2008collective,
  title={{Collective classification in network data}},
  author={{Sen, Prithviraj and Namata, Galileo and Bilgic, Mustafa}},
  journal={{AI Magazine}},
  year={{2008}}
}}
```

### Current Version

```bibtex
@inproceedings{{yang2016revisiting,
  title={{Revisiting semi-supervised learning with graph embeddings}},
  author={{Yang, Zhilin and Cohen, William and Salakhutdinov, Ruslan}},
  booktitle={{ICML}},
  year={{2016}}
}}
```
"""

LICENSE_TEXT = "MIT License\n\nPermission is hereby granted, free of charge...\n"


def finish_dataset(path: Path, name: str, readme: bool = True,
                   license_file: bool = True, urls: bool = True) -> Path:
    """Add the auxiliary files every complete dataset carries."""
    if readme:
        (path / "README.md").write_text(README_WITH_CITATIONS.format(name=name))
    if license_file:
        (path / "LICENSE").write_text(LICENSE_TEXT)
    if urls:
        data_files = sorted(p.name for p in path.iterdir()
                            if p.suffix in (".npz", ".npy"))
        (path / "urls.json").write_text(
            json.dumps({f: "" for f in data_files}, indent=2))
    return path


def write_task(path: Path, name: str, doc: dict) -> Path:
    p = path / f"task_{name}.json"
    p.write_text(json.dumps(doc, indent=2))
    return p


def make_triangle(path: Path, labels=(0, 0, 1), num_classes=2) -> Path:
    """3-node undirected triangle with features, labels, and a fixed-split task."""
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
        description="toy triangle",
    )
    write_graph(g, path)
    write_entries(path / "splits.npz", {
        "train": np.array([0], dtype=np.int64),
        "val": np.array([1], dtype=np.int64),
        "test": np.array([2], dtype=np.int64),
    })
    write_task(path, "node_classification", {
        "description": "classify the three nodes",
        "type": "NodeClassification",
        "feature": ["Node/NodeFeature"],
        "target": "Node/NodeLabel",
        "num_classes": num_classes,
        "train_set": {"file": "splits.npz", "key": "train"},
        "val_set": {"file": "splits.npz", "key": "val"},
        "test_set": {"file": "splits.npz", "key": "test"},
    })
    return finish_dataset(path, "triangle")


def make_star(path: Path) -> Path:
    """K_{1,3} star with a fixed-split node classification task."""
    path.mkdir(parents=True, exist_ok=True)
    g = GraphStorage(
        node_groups=[NodeGroup(name="Node", start=0, count=4, attributes={
            "NodeFeature": np.eye(4, 2, dtype=np.float32),
            "NodeLabel": np.array([0, 1, 1, 1], dtype=np.int64),
        })],
        edge_groups=[EdgeGroup(name="Edge", edges=np.array(
            [[0, 1], [0, 2], [0, 3]], dtype=np.int64))],
        graphs=[GraphEntry()],
        directed=False,
        description="toy star",
    )
    write_graph(g, path)
    write_entries(path / "splits.npz", {
        "train": np.array([0, 1], dtype=np.int64),
        "val": np.array([2], dtype=np.int64),
        "test": np.array([3], dtype=np.int64),
    })
    write_task(path, "node_classification", {
        "description": "classify the star nodes",
        "type": "NodeClassification",
        "feature": ["Node/NodeFeature"],
        "target": "Node/NodeLabel",
        "num_classes": 2,
        "train_set": {"file": "splits.npz", "key": "train"},
        "val_set": {"file": "splits.npz", "key": "val"},
        "test_set": {"file": "splits.npz", "key": "test"},
    })
    return finish_dataset(path, "star4")


def make_path3(path: Path) -> Path:
    """3-node path with node regression and link prediction tasks."""
    path.mkdir(parents=True, exist_ok=True)
    g = GraphStorage(
        node_groups=[NodeGroup(name="Node", start=0, count=3, attributes={
            "NodeFeature": np.eye(3, 2, dtype=np.float32),
            "NodeScore": np.array([0.1, 0.5, 0.9], dtype=np.float64),
        })],
        edge_groups=[EdgeGroup(name="Edge", edges=np.array(
            [[0, 1], [1, 2]], dtype=np.int64))],
        graphs=[GraphEntry()],
        directed=False,
        description="toy path",
    )
    write_graph(g, path)
    write_task(path, "node_regression", {
        "description": "predict the node score",
        "type": "NodeRegression",
        "feature": ["Node/NodeFeature"],
        "target": "Node/NodeScore",
        "train_ratio": 0.4, "val_ratio": 0.3, "test_ratio": 0.3, "seed": 5,
    })
    write_task(path, "link_prediction", {
        "description": "predict missing links",
        "type": "LinkPrediction",
        "feature": ["Node/NodeFeature"],
        "train_ratio": 0.5, "val_ratio": 0.5, "test_ratio": 0.0, "seed": 5,
    })
    return finish_dataset(path, "path3")


def make_omni(path: Path) -> Path:
    """Two-triangle multi-graph dataset carrying one task of every type."""
    path.mkdir(parents=True, exist_ok=True)
    g = GraphStorage(
        node_groups=[NodeGroup(name="Node", start=0, count=6, attributes={
            "NodeFeature": np.arange(12, dtype=np.float32).reshape(6, 2) + 1,
            "NodeLabel": np.array([0, 1, 0, 1, 0, 1], dtype=np.int64),
            "NodeScore": np.linspace(0.0, 1.0, 6),
        })],
        edge_groups=[EdgeGroup(
            name="Edge",
            edges=np.array([[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]],
                           dtype=np.int64),
            attributes={
                "EdgeTime": np.array([1995, 1997, 2001, 2003, 2006, 2008],
                                     dtype=np.int64),
                "EdgeRelation": np.array([0, 1, 0, 1, 0, 1], dtype=np.int64),
            })],
        graphs=[
            GraphEntry(node_ids=np.arange(3, dtype=np.int64),
                       edge_ids=np.arange(3, dtype=np.int64)),
            GraphEntry(node_ids=np.arange(3, 6, dtype=np.int64),
                       edge_ids=np.arange(3, 6, dtype=np.int64)),
        ],
        graph_attributes={
            "GraphLabel": np.array([0, 1], dtype=np.int64),
            "GraphScore": np.array([0.25, 0.75]),
        },
        directed=False,
        description="two disjoint triangles with every task type",
    )
    write_graph(g, path)
    write_entries(path / "splits.npz", {
        "train": np.array([0, 1], dtype=np.int64),
        "val": np.array([2, 4], dtype=np.int64),
        "test": np.array([3, 5], dtype=np.int64),
    })
    write_entries(path / "negatives.npz", {
        "val": np.array([[0, 3], [1, 4]], dtype=np.int64),
        "test": np.array([[2, 5]], dtype=np.int64),
    })
    write_task(path, "node_classification", {
        "type": "NodeClassification",
        "feature": ["Node/NodeFeature"],
        "target": "Node/NodeLabel",
        "num_classes": 2,
        "train_set": {"file": "splits.npz", "key": "train"},
        "val_set": {"file": "splits.npz", "key": "val"},
        "test_set": {"file": "splits.npz", "key": "test"},
    })
    write_task(path, "node_regression", {
        "type": "NodeRegression",
        "feature": ["Node/NodeFeature"],
        "target": "Node/NodeScore",
        "train_ratio": 0.5, "val_ratio": 0.25, "test_ratio": 0.25, "seed": 3,
    })
    write_task(path, "graph_classification", {
        "type": "GraphClassification",
        "feature": ["Node/NodeFeature"],
        "target": "Graph/GraphLabel",
        "num_classes": 2,
        "train_ratio": 0.5, "val_ratio": 0.5, "test_ratio": 0.0, "seed": 1,
    })
    write_task(path, "graph_regression", {
        "type": "GraphRegression",
        "feature": ["Node/NodeFeature"],
        "target": "Graph/GraphScore",
        "train_ratio": 0.5, "val_ratio": 0.0, "test_ratio": 0.5, "seed": 1,
    })
    write_task(path, "link_prediction", {
        "type": "LinkPrediction",
        "feature": ["Node/NodeFeature"],
        "train_ratio": 0.5, "val_ratio": 0.25, "test_ratio": 0.25, "seed": 9,
        "val_neg": {"file": "negatives.npz", "key": "val"},
        "test_neg": {"file": "negatives.npz", "key": "test"},
    })
    write_task(path, "time_link_prediction", {
        "type": "TimeDependentLinkPrediction",
        "feature": ["Node/NodeFeature"],
        "time_attribute": "Edge/EdgeTime",
        "val_time": 2000, "test_time": 2005,
    })
    write_task(path, "kg_entity_prediction", {
        "type": "KGEntityPrediction",
        "feature": ["Node/NodeFeature"],
        "prediction_slot": "head",
        "train_ratio": 0.6, "val_ratio": 0.2, "test_ratio": 0.2, "seed": 11,
    })
    write_task(path, "kg_relation_prediction", {
        "type": "KGRelationPrediction",
        "feature": ["Node/NodeFeature"],
        "target": "Edge/EdgeRelation",
        "train_ratio": 0.6, "val_ratio": 0.2, "test_ratio": 0.2, "seed": 11,
    })
    return finish_dataset(path, "omni")


def make_corpus(root: Path) -> Path:
    """Corpus root with three small datasets of distinct average degree."""
    root.mkdir(parents=True, exist_ok=True)
    make_path3(root / "path3")
    make_star(root / "star4")
    make_triangle(root / "triangle")
    return root


@pytest.fixture
def triangle_ds(tmp_path):
    return make_triangle(tmp_path / "triangle")


@pytest.fixture
def omni_ds(tmp_path):
    return make_omni(tmp_path / "omni")


@pytest.fixture
def corpus_root(tmp_path):
    return make_corpus(tmp_path / "corpus")
