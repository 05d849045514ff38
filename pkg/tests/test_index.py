import csv
import io
import json
import math

import pytest

from graphdex.errors import FilterParseError, UnknownField
from graphdex.index import (
    CitationChain,
    IndexDatabase,
    build_index,
    load_index,
    parse_citation,
    query_index,
    render_table,
    save_index,
)
from graphdex.task_config import TaskType

from conftest import README_WITH_CITATIONS


class TestParseCitation:
    def test_full_chain(self):
        chain = parse_citation(README_WITH_CITATIONS.format(name="cora"))
        assert chain.original_source.startswith("@article{mccallum2000automating")
        assert chain.current_version.startswith("@inproceedings{yang2016revisiting")
        assert len(chain.previous_versions) == 1
        assert chain.previous_versions[0].startswith("@article{sen2008collective")
        assert not chain.warnings

    def test_no_citation_section(self):
        chain = parse_citation("# plain readme\n\nNothing to cite here.\n")
        assert chain.empty

    def test_two_previous_versions(self):
        text = ("# x\n\n### Previous Versions\n\n"
                "@misc{a2000x, title={A}}\n\n@misc{b2001y, title={B}}\n")
        chain = parse_citation(text)
        assert len(chain.previous_versions) == 2

    def test_missing_original_flagged(self):
        text = "# x\n\n### Current Version\n\n@misc{a2000x, title={A}}\n"
        chain = parse_citation(text)
        assert any("Original Source" in w for w in chain.warnings)

    def test_unbalanced_bibtex_kept_verbatim(self):
        text = "# x\n\n### Original Source\n\n@article{broken, title={oops\n"
        chain = parse_citation(text)
        assert chain.original_source.startswith("@article{broken")
        assert any("unbalanced" in w for w in chain.warnings)


class TestBuildIndex:
    def test_three_records(self, corpus_root):
        db = build_index(corpus_root, deterministic=True)
        assert [r.id for r in db.records] == ["path3", "star4", "triangle"]
        assert all(r.passed for r in db.records)
        assert all(r.metrics is not None for r in db.records)

    def test_corrupted_dataset_flagged_not_fatal(self, corpus_root):
        (corpus_root / "triangle" / "metadata.json").unlink()
        db = build_index(corpus_root, deterministic=True)
        assert len(db.records) == 3
        bad = {r.id: r for r in db.records}["triangle"]
        assert not bad.passed
        assert bad.metrics is None

    def test_empty_root(self, tmp_path):
        root = tmp_path / "empty"
        root.mkdir()
        db = build_index(root)
        assert db.records == []

    def test_round_trip_serialization(self, corpus_root, tmp_path):
        db = build_index(corpus_root, deterministic=True)
        path = tmp_path / "idx.json"
        save_index(db, path)
        back = load_index(path)
        assert back.to_json() == db.to_json()

    def test_deterministic_rebuild_byte_identical(self, corpus_root):
        a = build_index(corpus_root, deterministic=True).to_json()
        b = build_index(corpus_root, deterministic=True).to_json()
        assert a == b

    def test_task_types_recorded_in_canonical_order(self, corpus_root):
        db = build_index(corpus_root, deterministic=True)
        rec = {r.id: r for r in db.records}["path3"]
        assert rec.task_types == ["NodeRegression", "LinkPrediction"]
        assert rec.citation.original_source  # parsed from the README


@pytest.fixture
def built_db(corpus_root) -> IndexDatabase:
    return build_index(corpus_root, deterministic=True)


class TestQueryIndex:
    def test_sort_by_average_degree_desc(self, built_db):
        # triangle: 2.0, star4: 1.5, path3: 4/3
        recs = query_index(built_db, sort_key="average_degree", descending=True)
        assert [r.id for r in recs] == ["triangle", "star4", "path3"]

    def test_filter_task_membership(self, built_db):
        recs = query_index(built_db, filter_expr="task=LinkPrediction")
        assert [r.id for r in recs] == ["path3"]

    def test_filter_numeric(self, built_db):
        recs = query_index(built_db, filter_expr="num_nodes>3")
        assert [r.id for r in recs] == ["star4"]

    def test_filter_conjunction(self, built_db):
        recs = query_index(built_db,
                           filter_expr="num_nodes>=3 & task=NodeClassification")
        assert {r.id for r in recs} == {"star4", "triangle"}

    def test_filter_boolean_flag(self, built_db):
        recs = query_index(built_db, filter_expr="passed")
        assert len(recs) == 3
        recs = query_index(built_db, filter_expr="passed=false")
        assert recs == []

    def test_filter_parse_error_position(self, built_db):
        with pytest.raises(FilterParseError) as e:
            query_index(built_db, filter_expr="num_nodes>>3")
        assert e.value.position == 10

    def test_unknown_field(self, built_db):
        with pytest.raises(UnknownField):
            query_index(built_db, filter_expr="num_wheels>3")
        with pytest.raises(UnknownField):
            query_index(built_db, sort_key="nonsuch")

    def test_query_does_not_mutate(self, built_db):
        before = built_db.to_json()
        query_index(built_db, filter_expr="num_nodes>1", sort_key="num_edges",
                    descending=True)
        assert built_db.to_json() == before

    def test_sort_stability_with_duplicate_keys(self, built_db):
        # every record passes validation, so passed-sort must keep id order
        recs = query_index(built_db, sort_key="passed", descending=True)
        assert [r.id for r in recs] == ["path3", "star4", "triangle"]


class TestRenderTable:
    def test_markdown_task_grid(self, built_db):
        text = render_table(built_db.records, ["tasks"], fmt="markdown")
        header = text.splitlines()[0]
        cols = [c.strip() for c in header.strip("|").split("|")]
        assert cols == ["dataset"] + [t.value for t in TaskType]
        assert len(cols) == 9  # dataset + exactly 8 task columns
        row = text.splitlines()[2]
        assert "✓" in row

    def test_empty_records_header_only(self, built_db):
        text = render_table([], ["tasks"], fmt="markdown")
        assert len(text.splitlines()) == 2

    def test_csv_round_trips_metric_values(self, built_db):
        fields = ["num_nodes", "num_edges", "average_degree", "degree_gini"]
        text = render_table(built_db.records, fields, fmt="csv")
        rows = list(csv.reader(io.StringIO(text)))
        assert rows[0] == ["id"] + fields
        for row, rec in zip(rows[1:], built_db.records):
            for col, name in zip(row[1:], fields):
                got = float(col)
                want = rec.metric_value(name)
                assert got == want or (math.isnan(got) and math.isnan(want))

    def test_json_rendering(self, built_db):
        text = render_table(built_db.records, ["num_nodes", "tasks"], fmt="json")
        rows = json.loads(text)
        assert rows[0]["id"] == "path3"
        assert rows[0]["num_nodes"] == 3
        assert rows[0]["LinkPrediction"] is True

    def test_unknown_field_rejected(self, built_db):
        with pytest.raises(UnknownField):
            render_table(built_db.records, ["wat"], fmt="markdown")


def test_citation_chain_round_trip():
    chain = CitationChain(original_source="@misc{a}", current_version="@misc{b}",
                          previous_versions=["@misc{c}"], task_bibs={"task x": "@misc{d}"})
    assert CitationChain.from_dict(chain.to_dict()) == chain
