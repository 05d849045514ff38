"""Corpus-level index: per-dataset records with tasks, metrics, citations.

The index is a single schema-versioned JSON document so corpus diffs stay
reviewable in version control. Records are keyed by directory name and
ordered lexicographically; builds are idempotent, and with
``deterministic=True`` timestamps and timings are zeroed so rebuilding an
unchanged corpus is byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import FORMAT_VERSION
from .dataset_view import find_task_files
from .errors import FilterParseError, UnknownField
from .graph_store import load_graph
from .metrics import ALL_METRICS, ApproxBudget, MetricReport, compute_all, view_from_storage
from .task_config import TaskType, parse_task
from .validator import validate_dataset

INDEX_SCHEMA_VERSION = 1

TASK_COLUMNS = tuple(t.value for t in TaskType)


# --- citation chains -----------------------------------------------------------


@dataclass
class CitationChain:
    original_source: str = ""
    current_version: str = ""
    previous_versions: list[str] = field(default_factory=list)
    task_bibs: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not (self.original_source or self.current_version
                    or self.previous_versions or self.task_bibs)

    def to_dict(self) -> dict:
        return {"original_source": self.original_source,
                "current_version": self.current_version,
                "previous_versions": self.previous_versions,
                "task_bibs": self.task_bibs,
                "warnings": self.warnings}

    @classmethod
    def from_dict(cls, doc: dict) -> "CitationChain":
        return cls(original_source=doc.get("original_source", ""),
                   current_version=doc.get("current_version", ""),
                   previous_versions=list(doc.get("previous_versions", [])),
                   task_bibs=dict(doc.get("task_bibs", {})),
                   warnings=list(doc.get("warnings", [])))


_HEADING = re.compile(r"^(#{1,6})\s+(.*?)\s*$")


def _bibtex_blocks(text: str) -> tuple[list[str], list[str]]:
    """Extract @entry{...} blocks (brace-balanced); returns (blocks, warnings)."""
    blocks = []
    warnings = []
    for m in re.finditer(r"@\w+\s*\{", text):
        start = m.start()
        depth = 0
        end = None
        for i in range(m.end() - 1, len(text)):
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
                if depth == 0:
                    end = i + 1
                    break
        if end is None:
            blocks.append(text[start:].strip())
            warnings.append("unbalanced braces in a BibTeX block; kept verbatim")
        else:
            blocks.append(text[start:end].strip())
    return blocks, warnings


def parse_citation(readme_text: str) -> CitationChain:
    """Heading-based scan for Original Source / Current Version /
    Previous Versions sections; lenient about malformed BibTeX."""
    chain = CitationChain()
    lines = readme_text.splitlines()
    sections: list[tuple[str, list[str]]] = [("", [])]
    for line in lines:
        m = _HEADING.match(line)
        if m:
            sections.append((m.group(2).strip().lower(), []))
        else:
            sections[-1][1].append(line)
    saw_citation_heading = False
    for title, body in sections:
        blocks, warns = _bibtex_blocks("\n".join(body))
        chain.warnings.extend(warns)
        if "original source" in title:
            saw_citation_heading = True
            chain.original_source = "\n\n".join(blocks)
        elif "current version" in title:
            saw_citation_heading = True
            chain.current_version = "\n\n".join(blocks)
        elif "previous version" in title:
            saw_citation_heading = True
            chain.previous_versions.extend(blocks)
        elif "task" in title and blocks:
            chain.task_bibs[title] = "\n\n".join(blocks)
    if saw_citation_heading and not chain.original_source:
        chain.warnings.append("citation section present but Original Source is empty")
    return chain


# --- records and database ----------------------------------------------------------


@dataclass
class IndexRecord:
    id: str
    path: str
    task_types: list[str] = field(default_factory=list)
    metrics: dict | None = None  # MetricReport.to_dict() snapshot
    citation: CitationChain = field(default_factory=CitationChain)
    passed: bool = False
    format_version: str = FORMAT_VERSION
    indexed_at: str | None = None

    def metric_value(self, name: str):
        if self.metrics is None:
            return None
        entry = self.metrics.get("metrics", {}).get(name)
        return None if entry is None else entry.get("value")

    def to_dict(self) -> dict:
        return {"id": self.id, "path": self.path, "task_types": self.task_types,
                "metrics": self.metrics, "citation": self.citation.to_dict(),
                "passed": self.passed, "format_version": self.format_version,
                "indexed_at": self.indexed_at}

    @classmethod
    def from_dict(cls, doc: dict) -> "IndexRecord":
        return cls(id=doc["id"], path=doc["path"],
                   task_types=list(doc.get("task_types", [])),
                   metrics=doc.get("metrics"),
                   citation=CitationChain.from_dict(doc.get("citation", {})),
                   passed=bool(doc.get("passed", False)),
                   format_version=doc.get("format_version", FORMAT_VERSION),
                   indexed_at=doc.get("indexed_at"))


@dataclass
class IndexDatabase:
    records: list[IndexRecord] = field(default_factory=list)
    schema_version: int = INDEX_SCHEMA_VERSION
    budget: ApproxBudget = field(default_factory=ApproxBudget)

    def to_dict(self) -> dict:
        return {"schema_version": self.schema_version,
                "budget": self.budget.to_dict(),
                "records": [r.to_dict() for r in self.records]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=True,
                          sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "IndexDatabase":
        return cls(records=[IndexRecord.from_dict(r) for r in doc.get("records", [])],
                   schema_version=doc.get("schema_version", INDEX_SCHEMA_VERSION),
                   budget=ApproxBudget(**doc.get("budget", {})))


def save_index(db: IndexDatabase, path: str | Path) -> None:
    Path(path).write_text(db.to_json())


def load_index(path: str | Path) -> IndexDatabase:
    return IndexDatabase.from_dict(json.loads(Path(path).read_text()))


def _index_one(dataset_dir: Path, budget: ApproxBudget,
               deterministic: bool) -> IndexRecord:
    record = IndexRecord(id=dataset_dir.name, path=str(dataset_dir))
    if not deterministic:
        record.indexed_at = datetime.now(timezone.utc).isoformat()
    report = validate_dataset(dataset_dir)
    record.passed = report.passed

    types = []
    for task_path in find_task_files(dataset_dir):
        try:
            task = parse_task(task_path.read_text(), base_dir=dataset_dir)
        except Exception:
            continue
        if task.task_type.value not in types:
            types.append(task.task_type.value)
    record.task_types = sorted(types, key=TASK_COLUMNS.index)

    readme = dataset_dir / "README.md"
    if readme.is_file():
        record.citation = parse_citation(readme.read_text())

    if record.passed:
        graph = load_graph(dataset_dir)
        metrics = compute_all(view_from_storage(graph), budget)
        if deterministic:
            for mv in metrics.entries.values():
                mv.elapsed = 0.0
        record.metrics = metrics.to_dict()
    return record


def build_index(root: str | Path, budget: ApproxBudget | None = None,
                deterministic: bool = False, workers: int | None = None
                ) -> IndexDatabase:
    """One record per child dataset directory, in lexicographic id order.

    Validation failures yield records flagged ``passed=False`` with metrics
    skipped; they never abort the build.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root {root} does not exist")
    budget = budget or ApproxBudget()
    dirs = sorted((p for p in root.iterdir() if p.is_dir()), key=lambda p: p.name)
    if not dirs:
        return IndexDatabase(budget=budget)
    workers = workers or min(8, len(dirs))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(
            lambda d: _index_one(d, budget, deterministic), dirs))
    records.sort(key=lambda r: r.id)
    return IndexDatabase(records=records, budget=budget)


# --- queries --------------------------------------------------------------------

_RECORD_FIELDS = ("id", "path", "passed", "format_version", "task_count")

_OPS = {
    ">=": lambda a, b: a >= b,
    "<=": lambda a, b: a <= b,
    "!=": lambda a, b: a != b,
    ">": lambda a, b: a > b,
    "<": lambda a, b: a < b,
    "=": lambda a, b: a == b,
}

_FIELD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")
_NUMBER_RE = re.compile(r"-?\d+(\.\d+)?([eE][+-]?\d+)?")


def known_fields() -> set[str]:
    return set(_RECORD_FIELDS) | set(ALL_METRICS) | {"task"}


@dataclass(frozen=True)
class _Clause:
    field: str
    op: str
    value: object


def parse_filter(expr: str) -> list[_Clause]:
    """Grammar: clause ('&' clause)*; clause = field [op value].

    Fields are metric names, record fields, or ``task``; values are numbers,
    booleans, or bare identifiers (task type names).
    """
    clauses = []
    pos = 0
    text = expr
    n = len(text)

    def skip_ws(p):
        while p < n and text[p].isspace():
            p += 1
        return p

    while True:
        pos = skip_ws(pos)
        m = _FIELD_RE.match(text, pos)
        if not m:
            raise FilterParseError("expected a field name", pos)
        fieldname = m.group(0)
        pos = skip_ws(m.end())
        op = None
        for candidate in (">=", "<=", "!=", ">", "<", "="):
            if text.startswith(candidate, pos):
                op = candidate
                pos += len(candidate)
                break
        if op is None:
            # bare field: boolean truthiness
            clauses.append(_Clause(field=fieldname, op="=", value=True))
        else:
            pos = skip_ws(pos)
            mnum = _NUMBER_RE.match(text, pos)
            mid = _FIELD_RE.match(text, pos)
            if mnum:
                raw = mnum.group(0)
                value = float(raw) if any(c in raw for c in ".eE") else int(raw)
                pos = mnum.end()
            elif mid:
                word = mid.group(0)
                value = {"true": True, "false": False}.get(word.lower(), word)
                pos = mid.end()
            else:
                raise FilterParseError("expected a comparison value", pos)
            clauses.append(_Clause(field=fieldname, op=op, value=value))
        pos = skip_ws(pos)
        if pos >= n:
            break
        if text[pos] != "&":
            raise FilterParseError("expected '&' between clauses", pos)
        pos += 1
    return clauses


def _field_value(record: IndexRecord, name: str):
    if name == "id":
        return record.id
    if name == "path":
        return record.path
    if name == "passed":
        return record.passed
    if name == "format_version":
        return record.format_version
    if name == "task_count":
        return len(record.task_types)
    return record.metric_value(name)


def _matches(record: IndexRecord, clause: _Clause) -> bool:
    if clause.field == "task":
        return str(clause.value) in record.task_types
    value = _field_value(record, clause.field)
    if value is None:
        return False
    try:
        return bool(_OPS[clause.op](value, clause.value))
    except TypeError:
        return False


def query_index(db: IndexDatabase, filter_expr: str | None = None,
                sort_key: str | None = None, descending: bool = False
                ) -> list[IndexRecord]:
    """Filter then stably sort records; the database is never mutated."""
    clauses = parse_filter(filter_expr) if filter_expr else []
    for c in clauses:
        if c.field not in known_fields():
            raise UnknownField(f"unknown filter field {c.field!r}")
    records = [r for r in db.records
               if all(_matches(r, c) for c in clauses)]
    if sort_key is not None:
        if sort_key not in known_fields() or sort_key == "task":
            raise UnknownField(f"unknown sort key {sort_key!r}")
        if sort_key in ("id", "path", "format_version"):
            keyf = lambda r: _field_value(r, sort_key)  # noqa: E731
        else:
            def keyf(r, _name=sort_key):
                v = _field_value(r, _name)
                if v is None or (isinstance(v, float) and v != v):
                    return (1, 0.0)
                return (0, float(v))
        records = sorted(records, key=keyf, reverse=descending)
    return records


# --- rendering -------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if value != value:
            return "nan"
        return repr(value)
    return str(value)


def _expand_fields(fields: list[str]) -> list[str]:
    out = []
    for f in fields:
        if f == "tasks":
            out.extend(TASK_COLUMNS)
        else:
            out.append(f)
    return out


def render_table(records: list[IndexRecord], fields: list[str],
                 fmt: str = "markdown") -> str:
    """Render records as markdown, JSON, or CSV.

    The pseudo-field ``tasks`` expands to one check/blank column per task
    type in the fixed order. JSON and CSV are loss-free for the selected
    fields.
    """
    for f in fields:
        if f != "tasks" and f not in known_fields():
            raise UnknownField(f"unknown field {f!r}")
    columns = _expand_fields(fields)

    def value_of(record: IndexRecord, column: str):
        if column in TASK_COLUMNS:
            return column in record.task_types
        return _field_value(record, column)

    if fmt == "json":
        rows = [{"id": r.id, **{c: value_of(r, c) for c in columns}}
                for r in records]
        return json.dumps(rows, indent=2, allow_nan=True)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id"] + columns)
        for r in records:
            writer.writerow([r.id] + [_cell(value_of(r, c)) for c in columns])
        return buf.getvalue()
    if fmt == "markdown":
        header = ["dataset"] + columns
        lines = ["| " + " | ".join(header) + " |",
                 "| " + " | ".join("---" for _ in header) + " |"]
        for r in records:
            cells = [r.id]
            for c in columns:
                v = value_of(r, c)
                if c in TASK_COLUMNS:
                    cells.append("✓" if v else "")
                else:
                    cells.append(_cell(v))
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines)
    raise ValueError(f"unknown render format {fmt!r}")
