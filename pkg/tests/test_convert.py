import numpy as np
import pytest

from graphdex.convert import convert_edgelist
from graphdex.errors import NonIntegerId, RaggedInput
from graphdex.graph_store import load_graph
from graphdex.validator import validate_dataset


def write_triangle_tsv(path):
    path.write_text("0\t1\n1\t2\n2\t0\n")
    return path


def test_triangle_tsv_converts_and_validates(tmp_path):
    tsv = write_triangle_tsv(tmp_path / "edges.tsv")
    out = convert_edgelist(tsv, out_dir=tmp_path / "triangle")
    graph = load_graph(out)
    assert graph.num_nodes == 3
    assert graph.num_edges == 3
    report = validate_dataset(out)
    assert report.error_codes() == set(), report.to_text()
    codes = report.codes()
    assert "NO_LICENSE" in codes  # the only expected gap


def test_features_and_labels(tmp_path):
    tsv = write_triangle_tsv(tmp_path / "edges.tsv")
    (tmp_path / "feats.csv").write_text("1.0,0.5\n0.0,1.0\n0.25,0.75\n")
    (tmp_path / "labels.csv").write_text("0\n1\n0\n")
    out = convert_edgelist(tsv, node_features=tmp_path / "feats.csv",
                           node_labels=tmp_path / "labels.csv",
                           out_dir=tmp_path / "ds")
    graph = load_graph(out)
    feats = graph.get_attribute("Node/NodeFeature")
    assert feats.shape == (3, 2)
    assert feats.dtype == np.float64
    assert np.array_equal(graph.get_attribute("Node/NodeLabel"), [0, 1, 0])


def test_feature_row_count_mismatch(tmp_path):
    tsv = write_triangle_tsv(tmp_path / "edges.tsv")
    (tmp_path / "feats.csv").write_text("1.0,0.5\n0.0,1.0\n")
    with pytest.raises(RaggedInput):
        convert_edgelist(tsv, node_features=tmp_path / "feats.csv",
                         out_dir=tmp_path / "ds")


def test_ragged_feature_rows(tmp_path):
    tsv = write_triangle_tsv(tmp_path / "edges.tsv")
    (tmp_path / "feats.csv").write_text("1.0,0.5\n0.0\n1.0,2.0\n")
    with pytest.raises(RaggedInput):
        convert_edgelist(tsv, node_features=tmp_path / "feats.csv",
                         out_dir=tmp_path / "ds")


def test_non_integer_edge_ids(tmp_path):
    (tmp_path / "edges.tsv").write_text("0\t1\na\t2\n")
    with pytest.raises(RaggedInput):
        convert_edgelist(tmp_path / "edges.tsv", out_dir=tmp_path / "ds")


def test_negative_ids_rejected(tmp_path):
    (tmp_path / "edges.tsv").write_text("0\t1\n-1\t2\n")
    with pytest.raises(NonIntegerId):
        convert_edgelist(tmp_path / "edges.tsv", out_dir=tmp_path / "ds")


def test_three_column_row_rejected(tmp_path):
    (tmp_path / "edges.tsv").write_text("0\t1\t5\n")
    with pytest.raises(RaggedInput):
        convert_edgelist(tmp_path / "edges.tsv", out_dir=tmp_path / "ds")


def test_directed_flag_respected(tmp_path):
    tsv = write_triangle_tsv(tmp_path / "edges.tsv")
    out = convert_edgelist(tsv, directed=True, out_dir=tmp_path / "ds")
    assert load_graph(out).directed


def test_comments_and_blank_lines_skipped(tmp_path):
    (tmp_path / "edges.tsv").write_text("# source<TAB>target\n\n0\t1\n")
    out = convert_edgelist(tmp_path / "edges.tsv", out_dir=tmp_path / "ds")
    assert load_graph(out).num_edges == 1
