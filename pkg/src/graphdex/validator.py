"""Dataset validation: structural, referential, and semantic checks.

Checks never abort on the first defect; they accumulate findings with
stable machine-readable codes so CI pipelines can pattern-match. Later
check families are gated on earlier ones succeeding, which keeps a single
injected defect mapped to a single finding code.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset_view import combine_graph_and_task, find_task_files
from .errors import (
    BadRatio,
    EmptySplit,
    GraphdexError,
    IndexOutOfRange,
    MissingField,
    OverlappingSplit,
    UnknownTaskType,
)
from .graph_store import (
    METADATA_FILE,
    GraphSchema,
    GraphStorage,
    load_graph_from_schema,
    parse_metadata,
)
from .task_config import CLASSIFICATION_TYPES, TaskConfig, parse_task, resolve_splits
from .tensor_store import dtype_tag, read_array, read_sparse


class Code(str, enum.Enum):
    """Frozen public finding codes; CI consumers may rely on these strings."""

    # binary containers
    BAD_MAGIC = "BAD_MAGIC"
    UNSUPPORTED_DTYPE = "UNSUPPORTED_DTYPE"
    UNSUPPORTED_LAYOUT = "UNSUPPORTED_LAYOUT"
    TRUNCATED_PAYLOAD = "TRUNCATED_PAYLOAD"
    MISSING_KEY = "MISSING_KEY"
    INCONSISTENT_SPARSE = "INCONSISTENT_SPARSE"
    # metadata and graph structure
    SCHEMA_ERROR = "SCHEMA_ERROR"
    DUPLICATE_GROUP = "DUPLICATE_GROUP"
    DANGLING_EDGE = "DANGLING_EDGE"
    SHAPE_MISMATCH = "SHAPE_MISMATCH"
    DTYPE_MISMATCH = "DTYPE_MISMATCH"
    MISSING_METADATA = "MISSING_METADATA"
    MISSING_DATA_FILE = "MISSING_DATA_FILE"
    # tasks
    TASK_PARSE = "TASK_PARSE"
    UNKNOWN_TASK_TYPE = "UNKNOWN_TASK_TYPE"
    MISSING_NUM_CLASSES = "MISSING_NUM_CLASSES"
    MISSING_FIELD = "MISSING_FIELD"
    BAD_RATIO = "BAD_RATIO"
    MISSING_ATTRIBUTE = "MISSING_ATTRIBUTE"
    SPLIT_OVERLAP = "SPLIT_OVERLAP"
    SPLIT_OUT_OF_RANGE = "SPLIT_OUT_OF_RANGE"
    EMPTY_SPLIT = "EMPTY_SPLIT"
    LABEL_OUT_OF_RANGE = "LABEL_OUT_OF_RANGE"
    LABEL_NAN = "LABEL_NAN"
    VIEW_CONSTRUCTION = "VIEW_CONSTRUCTION"
    # auxiliary files
    NO_README = "NO_README"
    NO_LICENSE = "NO_LICENSE"
    NO_URLS = "NO_URLS"
    NO_TASK = "NO_TASK"
    URLS_PARSE = "URLS_PARSE"
    UNHOSTED_DATA = "UNHOSTED_DATA"


_WARNINGS = frozenset({Code.NO_README, Code.NO_LICENSE, Code.NO_URLS,
                       Code.NO_TASK, Code.LABEL_NAN})


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" | "warning"
    code: str
    path: str  # file name, optionally + '#' + JSON pointer
    message: str

    def to_dict(self) -> dict:
        return {"severity": self.severity, "code": self.code,
                "path": self.path, "message": self.message}


@dataclass
class ValidationReport:
    findings: list[Finding]

    @property
    def passed(self) -> bool:
        return not any(f.severity == "error" for f in self.findings)

    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}

    def error_codes(self) -> set[str]:
        return {f.code for f in self.errors()}

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "findings": [f.to_dict() for f in self.findings]}

    def to_text(self) -> str:
        lines = [f"{f.severity.upper():7s} {f.code:20s} {f.path}: {f.message}"
                 for f in self.findings]
        verdict = "PASSED" if self.passed else "FAILED"
        n_err = len(self.errors())
        n_warn = len(self.findings) - n_err
        lines.append(f"{verdict}: {n_err} error(s), {n_warn} warning(s)")
        return "\n".join(lines)


class _Collector:
    def __init__(self):
        self.findings: list[Finding] = []

    def add(self, code: Code, path: str, message: str) -> None:
        severity = "warning" if code in _WARNINGS else "error"
        self.findings.append(Finding(severity=severity, code=code.value,
                                     path=path, message=message))

    def add_exc(self, exc: GraphdexError, path: str) -> None:
        try:
            code = Code(exc.code)
        except ValueError:
            code = Code.SCHEMA_ERROR
        self.add(code, path, str(exc))

    def report(self) -> ValidationReport:
        ordered = sorted(self.findings, key=lambda f: (f.code, f.path, f.message))
        return ValidationReport(findings=ordered)


def _check_file_set(base: Path, out: _Collector) -> GraphSchema | None:
    """Presence and parseability of the required files; returns the schema."""
    schema = None
    meta = base / METADATA_FILE
    if not meta.is_file():
        out.add(Code.MISSING_METADATA, METADATA_FILE, "metadata.json is missing")
    else:
        try:
            schema = parse_metadata(meta.read_text())
        except GraphdexError as exc:
            out.add_exc(exc, METADATA_FILE + "#" + getattr(exc, "pointer", ""))
    if not (base / "README.md").is_file():
        out.add(Code.NO_README, "README.md", "dataset has no README.md")
    if not (base / "LICENSE").is_file():
        out.add(Code.NO_LICENSE, "LICENSE", "dataset has no explicit license")
    if not find_task_files(base):
        out.add(Code.NO_TASK, ".", "no task_*.json file found")

    urls_path = base / "urls.json"
    if not urls_path.is_file():
        out.add(Code.NO_URLS, "urls.json", "urls.json is missing; data is not hosted")
        return schema
    try:
        urls = json.loads(urls_path.read_text())
        if not isinstance(urls, dict):
            raise ValueError("urls.json must map file names to URLs")
    except ValueError as exc:
        out.add(Code.URLS_PARSE, "urls.json", f"unparseable urls.json: {exc}")
        return schema
    if schema is not None:
        referenced = {ref.file for _, ref in schema.data_refs()}
        for task_path in find_task_files(base):
            try:
                task = parse_task(task_path.read_text(), base_dir=base)
            except Exception:
                continue
            for ref in (task.split.train_ref if task.split else None,
                        task.split.val_ref if task.split else None,
                        task.split.test_ref if task.split else None,
                        task.val_neg, task.test_neg):
                if ref is not None:
                    referenced.add(ref.file)
        for fname in sorted(referenced - set(urls)):
            out.add(Code.UNHOSTED_DATA, "urls.json",
                    f"referenced data file {fname!r} has no hosting URL")
    return schema


def validate_file_set(path: str | Path) -> ValidationReport:
    """File-level checks only: required files present, parseable, and hosted."""
    base = Path(path)
    if not base.is_dir():
        raise FileNotFoundError(f"dataset directory {base} does not exist")
    out = _Collector()
    _check_file_set(base, out)
    return out.report()


def _check_tensors(base: Path, schema: GraphSchema, out: _Collector) -> bool:
    """Per-ref decode checks; returns True when every tensor loads cleanly."""
    declared: dict[str, str] = {}
    for g in schema.node_groups:
        prefix = "/Node" if g.name == "Node" else f"/Node/{g.name}"
        for a in g.attributes:
            declared[f"{prefix}/{a.name}"] = a.dtype
    for g in schema.edge_groups:
        prefix = "/Edge" if g.name == "Edge" else f"/Edge/{g.name}"
        for a in g.attributes:
            declared[f"{prefix}/{a.name}"] = a.dtype
    for a in schema.graph_level.attributes:
        declared[f"/Graph/{a.name}"] = a.dtype

    layouts: dict[str, str] = {}
    for g in schema.node_groups:
        prefix = "/Node" if g.name == "Node" else f"/Node/{g.name}"
        for a in g.attributes:
            layouts[f"{prefix}/{a.name}"] = a.layout
    for g in schema.edge_groups:
        prefix = "/Edge" if g.name == "Edge" else f"/Edge/{g.name}"
        for a in g.attributes:
            layouts[f"{prefix}/{a.name}"] = a.layout
    for a in schema.graph_level.attributes:
        layouts[f"/Graph/{a.name}"] = a.layout

    ok = True
    for pointer, ref in schema.data_refs():
        locus = f"{METADATA_FILE}#{pointer}"
        fpath = ref.resolve(base)
        if not fpath.is_file():
            out.add(Code.MISSING_DATA_FILE, locus, f"data file {ref.file!r} is missing")
            ok = False
            continue
        try:
            if layouts.get(pointer) == "sparse":
                t = read_sparse(fpath, ref.key or pointer.rsplit("/", 1)[-1])
                actual = dtype_tag(t.data.dtype)
            else:
                arr = read_array(fpath, ref.key)
                actual = arr.dtype.name
        except GraphdexError as exc:
            out.add_exc(exc, locus)
            ok = False
            continue
        except OSError as exc:
            out.add(Code.MISSING_DATA_FILE, locus, f"data file unreadable: {exc}")
            ok = False
            continue
        want = declared.get(pointer)
        if want is not None and actual != want:
            out.add(Code.DTYPE_MISMATCH, locus,
                    f"declared dtype {want!r} but stored payload is {actual!r}")
            ok = False
    return ok


def _check_labels(task: TaskConfig, target, locus: str, out: _Collector) -> bool:
    """Range/NaN scan over a classification target; False on error findings."""
    if not isinstance(target, np.ndarray):
        return True
    values = np.asarray(target)
    if values.dtype.kind == "f":
        nan_count = int(np.isnan(values).sum())
        if nan_count:
            out.add(Code.LABEL_NAN, locus,
                    f"{nan_count} NaN label value(s); treated as unlabeled")
        values = values[~np.isnan(values)]
    if task.num_classes is None or values.size == 0:
        return True
    bad = (values < 0) | (values >= task.num_classes) | (values != np.floor(values))
    if bad.any():
        example = values[bad][0]
        out.add(Code.LABEL_OUT_OF_RANGE, locus,
                f"label value {example} outside [0, {task.num_classes})")
        return False
    return True


def _check_task(base: Path, task_path: Path, storage: GraphStorage | None,
                out: _Collector) -> None:
    name = task_path.name
    try:
        task = parse_task(task_path.read_text(), base_dir=base)
    except json.JSONDecodeError as exc:
        out.add(Code.TASK_PARSE, name, f"task file is not valid JSON: {exc}")
        return
    except MissingField as exc:
        code = Code.MISSING_NUM_CLASSES if exc.field == "num_classes" else Code.MISSING_FIELD
        out.add(code, name, str(exc))
        return
    except UnknownTaskType as exc:
        out.add(Code.UNKNOWN_TASK_TYPE, name, str(exc))
        return
    except BadRatio as exc:
        out.add(Code.BAD_RATIO, name, str(exc))
        return
    except GraphdexError as exc:
        out.add_exc(exc, name)
        return

    if storage is None:
        return  # graph-dependent checks need a loaded graph

    task_ok = True
    paths = list(task.features)
    if task.target:
        paths.append(task.target)
    if task.time_attribute:
        paths.append(task.time_attribute)
    for p in paths:
        if not storage.has_attribute(p):
            out.add(Code.MISSING_ATTRIBUTE, name, f"attribute path {p!r} not in graph")
            task_ok = False

    for label, ref in (("val_neg", task.val_neg), ("test_neg", task.test_neg)):
        if ref is None:
            continue
        fpath = ref.resolve(base)
        if not fpath.is_file():
            out.add(Code.MISSING_DATA_FILE, name, f"{label} file {ref.file!r} is missing")
            task_ok = False
            continue
        try:
            arr = read_array(fpath, ref.key)
            if arr.ndim != 2 or arr.shape[1] != 2 or arr.dtype.kind not in "iu":
                out.add(Code.SHAPE_MISMATCH, name,
                        f"{label} must be a (K, 2) integer edge array")
                task_ok = False
        except GraphdexError as exc:
            out.add_exc(exc, name)
            task_ok = False

    if task_ok:
        try:
            resolve_splits(task, storage)
        except IndexOutOfRange as exc:
            out.add(Code.SPLIT_OUT_OF_RANGE, name, str(exc))
            task_ok = False
        except OverlappingSplit as exc:
            out.add(Code.SPLIT_OVERLAP, name, str(exc))
            task_ok = False
        except EmptySplit as exc:
            out.add(Code.EMPTY_SPLIT, name, str(exc))
            task_ok = False
        except GraphdexError as exc:
            out.add_exc(exc, name)
            task_ok = False
        except OSError as exc:
            out.add(Code.MISSING_DATA_FILE, name, f"split data unreadable: {exc}")
            task_ok = False

    if task.task_type in CLASSIFICATION_TYPES and task.target \
            and storage.has_attribute(task.target):
        labels_ok = _check_labels(task, storage.get_attribute(task.target),
                                  f"{name}#{task.target}", out)
        task_ok = task_ok and labels_ok

    # structural stand-in for a short training run: the view must build and
    # yield one batch
    if task_ok:
        try:
            view = combine_graph_and_task(storage, task)
            _, target, mask = view.batch("train")
            if target is not None and isinstance(target, np.ndarray):
                start, stop = view.target_range
                _ = target[mask[start:stop]]
        except Exception as exc:  # anything here is a defect by definition
            out.add(Code.VIEW_CONSTRUCTION, name,
                    f"could not build a dataset view: {exc}")


def validate_dataset(path: str | Path) -> ValidationReport:
    """Run every check family over a dataset directory.

    Raises OSError only when the directory itself is unreadable; all dataset
    defects come back as findings.
    """
    base = Path(path)
    if not base.is_dir():
        raise FileNotFoundError(f"dataset directory {base} does not exist")
    out = _Collector()
    schema = _check_file_set(base, out)

    storage = None
    if schema is not None:
        tensors_ok = _check_tensors(base, schema, out)
        if tensors_ok:
            try:
                storage = load_graph_from_schema(schema, base)
            except GraphdexError as exc:
                out.add_exc(exc, METADATA_FILE)

    for task_path in find_task_files(base):
        _check_task(base, task_path, storage, out)

    return out.report()
