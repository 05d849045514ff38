"""Command-line entry point.

Subcommands: validate, inspect, metrics, index build, index query,
convert edgelist. Exit codes: 0 success, 1 dataset errors, 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .convert import convert_edgelist
from .dataset_view import find_task_files
from .errors import FilterParseError, GraphdexError, UnknownField
from .graph_store import load_graph
from .index import (
    ALL_METRICS,
    build_index,
    load_index,
    query_index,
    render_table,
    save_index,
)
from .metrics import ApproxBudget, compute_all, view_from_storage
from .task_config import parse_task_file
from .tensor_store import SparseMatrix
from .validator import validate_dataset

_QUERY_CSV_FIELDS = ["passed", "tasks"] + list(ALL_METRICS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphdex",
        description="Validate, measure, and index file-based graph datasets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run all dataset checks")
    p.add_argument("dir", help="dataset directory")

    p = sub.add_parser("inspect", help="summarize a dataset directory")
    p.add_argument("dir", help="dataset directory")

    p = sub.add_parser("metrics", help="compute graph data properties")
    p.add_argument("dir", help="dataset directory")
    p.add_argument("--groups", default=None,
                   help="comma-separated metric groups (default: all)")
    p.add_argument("--budget-n", type=int, default=None, metavar="N",
                   help="exact all-pairs threshold (default 1000)")
    p.add_argument("--seed", type=int, default=None,
                   help="sampling seed for approximate modes")
    p.add_argument("--format", choices=["json", "md"], default="md")

    p = sub.add_parser("index", help="corpus index operations")
    isub = p.add_subparsers(dest="index_command", required=True)
    b = isub.add_parser("build", help="scan a corpus root into an index file")
    b.add_argument("root", help="directory holding dataset directories")
    b.add_argument("-o", "--output", required=True, help="index JSON output path")
    b.add_argument("--deterministic", action="store_true",
                   help="zero timestamps/timings for byte-identical rebuilds")
    q = isub.add_parser("query", help="filter and sort an index file")
    q.add_argument("file", help="index JSON path")
    q.add_argument("--filter", default=None,
                   help="e.g. \"num_nodes>1000 & task=NodeClassification\"")
    q.add_argument("--sort-by", default=None, help="metric or record field")
    q.add_argument("--desc", action="store_true", help="sort descending")
    q.add_argument("--format", choices=["md", "json", "csv"], default="md")

    p = sub.add_parser("convert", help="convert raw data into a dataset")
    csub = p.add_subparsers(dest="convert_command", required=True)
    e = csub.add_parser("edgelist", help="convert a src/dst TSV edge list")
    e.add_argument("--edges", required=True, help="TSV with src and dst columns")
    e.add_argument("--features", default=None, help="CSV of per-node features")
    e.add_argument("--labels", default=None, help="CSV of per-node labels")
    e.add_argument("--directed", action="store_true")
    e.add_argument("-o", "--output", required=True, help="output dataset directory")
    return parser


def _cmd_validate(args) -> int:
    report = validate_dataset(args.dir)
    print(report.to_text())
    return 0 if report.passed else 1


def _tensor_summary(t) -> str:
    if isinstance(t, SparseMatrix):
        return f"sparse {t.format} {t.shape} {t.data.dtype.name} nnz={t.nnz}"
    return f"dense {tuple(t.shape)} {t.dtype.name}"


def _cmd_inspect(args) -> int:
    base = Path(args.dir)
    graph = load_graph(base)
    print(f"dataset: {base.name}")
    if graph.description:
        print(f"description: {graph.description}")
    kind = "heterogeneous" if graph.is_heterogeneous else "homogeneous"
    direction = "directed" if graph.directed else "undirected"
    print(f"graph: {kind}, {direction}, {graph.num_nodes} nodes, "
          f"{graph.num_edges} edges, {graph.num_graphs} graph(s)")
    for g in graph.node_groups:
        print(f"  node group {g.name!r}: ids [{g.start}, {g.stop}), {g.count} nodes")
        for name, t in g.attributes.items():
            print(f"    {name}: {_tensor_summary(t)}")
    for g in graph.edge_groups:
        ends = f" ({g.src_group} -> {g.dst_group})" if g.src_group else ""
        print(f"  edge group {g.name!r}: {g.count} edges{ends}")
        for name, t in g.attributes.items():
            print(f"    {name}: {_tensor_summary(t)}")
    for name, t in graph.graph_attributes.items():
        print(f"  graph attribute {name}: {_tensor_summary(t)}")
    tasks = find_task_files(base)
    if tasks:
        print("tasks:")
        for t in tasks:
            try:
                cfg = parse_task_file(t)
                print(f"  {t.name}: {cfg.task_type.value}")
            except Exception as exc:
                print(f"  {t.name}: unparseable ({exc})")
    else:
        print("tasks: none")
    return 0


def _cmd_metrics(args) -> int:
    graph = load_graph(args.dir)
    view = view_from_storage(graph)
    overrides = {}
    if args.budget_n is not None:
        overrides["exact_n"] = args.budget_n
    if args.seed is not None:
        overrides["seed"] = args.seed
    budget = ApproxBudget(**overrides)
    groups = args.groups.split(",") if args.groups else None
    try:
        report = compute_all(view, budget, groups=groups)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if args.format == "json" else report.to_markdown())
    return 0


def _cmd_index_build(args) -> int:
    db = build_index(args.root, deterministic=args.deterministic)
    save_index(db, args.output)
    failed = sum(1 for r in db.records if not r.passed)
    print(f"indexed {len(db.records)} dataset(s) into {args.output}"
          + (f" ({failed} failed validation)" if failed else ""))
    return 0


def _cmd_index_query(args) -> int:
    db = load_index(args.file)
    records = query_index(db, filter_expr=args.filter, sort_key=args.sort_by,
                          descending=args.desc)
    if args.format == "md":
        print(render_table(records, ["tasks"], fmt="markdown"))
    elif args.format == "json":
        print(render_table(records, _QUERY_CSV_FIELDS, fmt="json"))
    else:
        print(render_table(records, _QUERY_CSV_FIELDS, fmt="csv"), end="")
    return 0


def _cmd_convert_edgelist(args) -> int:
    out = convert_edgelist(edges=args.edges, node_features=args.features,
                           node_labels=args.labels, directed=args.directed,
                           out_dir=args.output)
    print(f"wrote dataset to {out}")
    return 0


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints usage/grammar to stderr
        return 0 if exc.code in (0, None) else 2
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "inspect":
            return _cmd_inspect(args)
        if args.command == "metrics":
            return _cmd_metrics(args)
        if args.command == "index":
            if args.index_command == "build":
                return _cmd_index_build(args)
            return _cmd_index_query(args)
        if args.command == "convert":
            return _cmd_convert_edgelist(args)
    except (FilterParseError, UnknownField) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraphdexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
