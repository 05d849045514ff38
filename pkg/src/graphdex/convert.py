"""Conversion helpers: raw edge lists (plus optional per-node CSVs) into
ready-to-validate dataset directories."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import NonIntegerId, RaggedInput
from .graph_store import DATA_FILE, EdgeGroup, GraphEntry, GraphStorage, NodeGroup, write_graph

README_TEMPLATE = """# {name}

Converted from a raw edge list by the graphdex converter. Fill in the
description and the citation chain below before publishing.

## Citations

### Original Source

(add the BibTeX of the work that created the data)

### Previous Versions

(add BibTeX entries for intermediate versions, if any)

### Current Version

(add the BibTeX of the version stored here)
"""


def _read_edge_tsv(path: Path) -> np.ndarray:
    edges = []
    with open(path, newline="") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) == 1:  # tolerate space-separated input
                parts = line.split()
            if len(parts) != 2:
                raise RaggedInput(
                    f"{path.name}:{lineno}: expected two columns, got {len(parts)}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise RaggedInput(
                    f"{path.name}:{lineno}: edge endpoints must be integers"
                ) from None
            if u < 0 or v < 0:
                raise NonIntegerId(f"{path.name}:{lineno}: negative node id")
            edges.append((u, v))
    return np.asarray(edges, dtype=np.int64).reshape(-1, 2)


def _read_float_csv(path: Path) -> np.ndarray:
    rows = []
    width = None
    with open(path, newline="") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row:
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise RaggedInput(
                    f"{path.name}:{lineno}: row has {len(row)} columns, "
                    f"expected {width}")
            try:
                rows.append([float(x) for x in row])
            except ValueError:
                raise RaggedInput(
                    f"{path.name}:{lineno}: non-numeric value") from None
    return np.asarray(rows, dtype=np.float64).reshape(len(rows), width or 0)


def _read_label_csv(path: Path) -> np.ndarray:
    labels = []
    with open(path, newline="") as f:
        for lineno, row in enumerate(csv.reader(f), start=1):
            if not row:
                continue
            if len(row) != 1:
                raise RaggedInput(
                    f"{path.name}:{lineno}: label rows hold exactly one value")
            try:
                labels.append(int(row[0]))
            except ValueError:
                raise NonIntegerId(
                    f"{path.name}:{lineno}: labels must be integers") from None
    return np.asarray(labels, dtype=np.int64)


def convert_edgelist(edges: str | Path, node_features: str | Path | None = None,
                     node_labels: str | Path | None = None, directed: bool = False,
                     out_dir: str | Path = "dataset") -> Path:
    """Build a dataset directory from a src/dst TSV and optional node CSVs.

    The output carries metadata + data container + README template +
    urls.json stub and passes validation (the absent LICENSE stays a
    warning). Node count is max node id + 1; feature/label row counts must
    match it.
    """
    edges_path = Path(edges)
    edge_arr = _read_edge_tsv(edges_path)
    n = int(edge_arr.max()) + 1 if len(edge_arr) else 0

    attributes = {}
    if node_features is not None:
        feats = _read_float_csv(Path(node_features))
        if n == 0:
            n = len(feats)
        if len(feats) != n:
            raise RaggedInput(
                f"feature rows ({len(feats)}) != node count ({n})")
        attributes["NodeFeature"] = feats
    if node_labels is not None:
        labels = _read_label_csv(Path(node_labels))
        if n == 0:
            n = len(labels)
        if len(labels) != n:
            raise RaggedInput(
                f"label rows ({len(labels)}) != node count ({n})")
        attributes["NodeLabel"] = labels

    out = Path(out_dir)
    name = out.name or "dataset"
    graph = GraphStorage(
        node_groups=[NodeGroup(name="Node", start=0, count=n, attributes=attributes)],
        edge_groups=[EdgeGroup(name="Edge", edges=edge_arr)],
        graphs=[GraphEntry()],
        directed=directed,
        description=f"{name}: converted from {edges_path.name}",
    )
    write_graph(graph, out)
    (out / "README.md").write_text(README_TEMPLATE.format(name=name))
    (out / "urls.json").write_text(json.dumps({DATA_FILE: ""}, indent=2) + "\n")
    return out
