"""Acceptance suite: one test per release criterion, at pinned tolerances.

Each test prints a [PASS]/[FAIL] line (visible with ``pytest -s``).
"""

import contextlib
import json
import math
import time

import numpy as np
import pytest

from graphdex.cli import cli_main
from graphdex.graph_store import (
    EdgeGroup,
    GraphEntry,
    GraphStorage,
    NodeGroup,
    graphs_equal,
    load_graph,
    write_graph,
)
from graphdex.index import build_index, render_table
from graphdex.metrics import LabeledGraphView, compute_all, gini, power_law_exponent
from graphdex.task_config import TaskType
from graphdex.tensor_store import SparseMatrix
from graphdex.validator import validate_dataset

import test_metrics_oracle as oracle_suite
import test_validator as mutation_suite
from conftest import make_omni, make_triangle


@contextlib.contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    print(f"[PASS] {name}")


# --- randomized storage generator for the round-trip criterion ------------------

_DTYPES = ["int8", "int16", "int32", "int64", "uint8", "float32", "float64", "bool"]


def _random_tensor(rng, rows):
    dtype = np.dtype(_DTYPES[rng.integers(0, len(_DTYPES))])
    if rng.random() < 0.25 and rows > 0:
        # sparse CSR attribute
        cols = int(rng.integers(1, 6))
        density = 0.4
        mask = rng.random((rows, cols)) < density
        data = rng.integers(1, 100, size=int(mask.sum())).astype(np.float64)
        indptr = np.zeros(rows + 1, dtype=np.int64)
        indices = []
        k = 0
        for r in range(rows):
            cols_r = np.flatnonzero(mask[r])
            indices.extend(cols_r.tolist())
            k += len(cols_r)
            indptr[r + 1] = k
        return SparseMatrix(format="csr", shape=(rows, cols), data=data,
                            indptr=indptr, indices=np.asarray(indices, dtype=np.int64))
    shape = (rows,) if rng.random() < 0.5 else (rows, int(rng.integers(1, 5)))
    if dtype.kind == "f":
        arr = rng.random(shape).astype(dtype)
    elif dtype.kind == "b":
        arr = rng.random(shape) < 0.5
    else:
        info = np.iinfo(dtype)
        arr = rng.integers(info.min, min(info.max, 1 << 30), size=shape).astype(dtype)
    return arr


def random_storage(seed: int) -> GraphStorage:
    rng = np.random.default_rng(seed)
    hetero = bool(rng.random() < 0.4)
    n_groups = int(rng.integers(2, 4)) if hetero else 1
    counts = [int(rng.integers(1, 50 // n_groups + 1)) for _ in range(n_groups)]
    node_groups = []
    start = 0
    for gi, count in enumerate(counts):
        name = f"type{gi}" if hetero else "Node"
        attrs = {f"attr{ai}": _random_tensor(rng, count)
                 for ai in range(rng.integers(0, 3))}
        node_groups.append(NodeGroup(name=name, start=start, count=count,
                                     attributes=attrs))
        start += count
    n = start

    edge_groups = []
    for gi in range(int(rng.integers(1, 3)) if hetero else 1):
        m = int(rng.integers(0, 41))
        edges = rng.integers(0, n, size=(m, 2)).astype(np.int64)
        attrs = {f"eattr{ai}": _random_tensor(rng, m)
                 for ai in range(rng.integers(0, 2))}
        edge_groups.append(EdgeGroup(name=f"rel{gi}" if hetero else "Edge",
                                     edges=edges, attributes=attrs))
    m_total = sum(g.count for g in edge_groups)

    graphs = [GraphEntry()]
    graph_attrs = {}
    if not hetero and rng.random() < 0.3 and n >= 2:
        cut = int(rng.integers(1, n))
        node_sets = [np.arange(cut, dtype=np.int64),
                     np.arange(cut, n, dtype=np.int64)]
        if rng.random() < 0.5:
            node_sets[0] = np.arange(n, dtype=np.int64)  # overlapping membership
        edge_ids = np.arange(m_total, dtype=np.int64)
        half = m_total // 2
        graphs = [GraphEntry(node_ids=node_sets[0], edge_ids=edge_ids[:half]),
                  GraphEntry(node_ids=node_sets[1], edge_ids=edge_ids[half:])]
        graph_attrs = {"glabel": rng.integers(0, 5, size=2).astype(np.int64)}

    return GraphStorage(
        node_groups=node_groups,
        edge_groups=edge_groups,
        graphs=graphs,
        graph_attributes=graph_attrs,
        directed=bool(rng.random() < 0.5),
        is_heterogeneous=hetero,
        description=f"random storage {seed}",
    )


def test_format_round_trip(tmp_path):
    with criterion("format round-trip: 100 randomized graphs, < 10 s"):
        start = time.perf_counter()
        for seed in range(100):
            g = random_storage(seed)
            out = tmp_path / f"g{seed}"
            write_graph(g, out)
            back = load_graph(out)
            assert graphs_equal(g, back), f"round-trip mismatch at seed {seed}"
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"round-trip suite took {elapsed:.1f}s"


def test_validator_mutation_suite(tmp_path):
    with criterion("validator mutation suite: 8 defect classes, exact codes"):
        assert len(mutation_suite.MUTATIONS) >= 8
        detected = 0
        for i, (mutate, expected) in enumerate(mutation_suite.MUTATIONS):
            ds = make_triangle(tmp_path / f"mut{i}")
            mutate(ds)
            report = validate_dataset(ds)
            assert report.error_codes() == {expected.value}, (
                f"{mutate.__name__}: {report.error_codes()} != {{{expected.value}}}")
            detected += 1
        assert detected == len(mutation_suite.MUTATIONS)  # 100% detection


def test_metric_oracle_equivalence():
    with criterion("metric oracle equivalence: 50 ER graphs, 1e-9, < 60 s"):
        assert len(oracle_suite.INSTANCES) == 50
        start = time.perf_counter()
        for inst in oracle_suite.INSTANCES:
            problems = oracle_suite.verify_instance(*inst)
            assert not problems, f"{inst}: " + "; ".join(problems)
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"oracle suite took {elapsed:.1f}s"


def test_hand_verified_values():
    with criterion("hand-verified metric values"):
        tri = LabeledGraphView(num_nodes=3,
                               edges=np.array([[0, 1], [1, 2], [2, 0]]),
                               directed=False)
        r = compute_all(tri)
        assert r.value("edge_density") == 1.0
        assert r.value("transitivity") == 1.0
        assert r.value("degeneracy") == 2.0
        assert r.value("global_efficiency") == 1.0

        pendant = LabeledGraphView(
            num_nodes=4, edges=np.array([[0, 1], [1, 2], [2, 0], [0, 3]]),
            directed=False)
        assert compute_all(pendant).value("transitivity") == pytest.approx(0.6)

        cycle = LabeledGraphView(
            num_nodes=4, edges=np.array([[0, 1], [1, 2], [2, 3], [3, 0]]),
            directed=False, labels=np.array([0, 0, 1, 1]))
        assert compute_all(cycle).value("homophily_measure") == pytest.approx(0.0)

        expected_alpha = 1 + 4 / (2 * math.log(2) + 2 * math.log(4))
        assert abs(power_law_exponent([1, 1, 2, 2]) - expected_alpha) < 1e-6
        assert abs(power_law_exponent([1, 1, 2, 2]) - 1.9618) < 1e-4

        assert gini([0, 1]) == pytest.approx(0.5, abs=1e-12)


def test_scale_check():
    with criterion("scale check: 10k nodes / 50k edges under 60 s, approximate"):
        rng = np.random.default_rng(7)
        n, target_m = 10_000, 50_000
        edges = np.zeros((0, 2), dtype=np.int64)
        while len(edges) < target_m:
            cand = rng.integers(0, n, size=(target_m * 2, 2))
            cand = cand[cand[:, 0] != cand[:, 1]]
            edges = np.unique(np.sort(np.concatenate([edges, cand]), axis=1), axis=0)
        edges = edges[:target_m]
        view = LabeledGraphView(num_nodes=n, edges=edges, directed=False)
        start = time.perf_counter()
        report = compute_all(view)
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0, f"compute_all took {elapsed:.1f}s"
        for name in ("diameter", "average_shortest_path_length",
                     "global_efficiency", "average_node_connectivity"):
            assert report.mode(name) == "approximate", name
        assert report.value("num_edges") == target_m


def test_end_to_end_pipeline(tmp_path, capsys):
    with criterion("end-to-end: convert -> validate -> metrics -> index -> query"):
        root = tmp_path / "corpus"
        root.mkdir()
        specs = {
            "tri": "0\t1\n1\t2\n2\t0\n",        # avg degree 2.0
            "star": "0\t1\n0\t2\n0\t3\n",        # avg degree 1.5
            "path": "0\t1\n1\t2\n",              # avg degree 4/3
        }
        for name, text in specs.items():
            tsv = tmp_path / f"{name}.tsv"
            tsv.write_text(text)
            assert cli_main(["convert", "edgelist", "--edges", str(tsv),
                             "-o", str(root / name)]) == 0
            report = validate_dataset(root / name)
            assert report.error_codes() == set(), report.to_text()

        capsys.readouterr()
        assert cli_main(["metrics", str(root / "tri"), "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["metrics"]["transitivity"]["value"] == 1.0

        idx_a, idx_b = tmp_path / "a.json", tmp_path / "b.json"
        assert cli_main(["index", "build", str(root), "-o", str(idx_a),
                         "--deterministic"]) == 0
        assert cli_main(["index", "build", str(root), "-o", str(idx_b),
                         "--deterministic"]) == 0
        assert idx_a.read_bytes() == idx_b.read_bytes()

        capsys.readouterr()
        assert cli_main(["index", "query", str(idx_a), "--sort-by",
                         "average_degree", "--desc"]) == 0
        out = capsys.readouterr().out
        order = [line.split("|")[1].strip()
                 for line in out.splitlines()[2:] if "|" in line]
        assert order == ["tri", "star", "path"], order


def test_eight_task_types_and_grid(tmp_path):
    with criterion("eight task types resolve; markdown grid has 8 task columns"):
        from graphdex.dataset_view import combine_graph_and_task, find_task_files
        from graphdex.task_config import parse_task_file

        omni = make_omni(tmp_path / "corpus" / "omni")
        graph = load_graph(omni)
        seen = set()
        for task_file in find_task_files(omni):
            task = parse_task_file(task_file)
            view = combine_graph_and_task(graph, task)
            assert view.masks.train.any() or view.masks.val.any() \
                or view.masks.test.any()
            seen.add(task.task_type)
        assert seen == set(TaskType)

        db = build_index(tmp_path / "corpus", deterministic=True)
        text = render_table(db.records, ["tasks"], fmt="markdown")
        header = [c.strip() for c in text.splitlines()[0].strip("|").split("|")]
        assert header == ["dataset"] + [t.value for t in TaskType]
        assert len(header) - 1 == 8
        row = text.splitlines()[2]
        assert row.count("✓") == 8  # omni carries every task type
