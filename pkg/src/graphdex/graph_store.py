"""Dataset metadata parsing and in-memory heterogeneous graph storage.

A dataset directory holds ``metadata.json`` plus the binary files it points
at. Metadata layout::

    {
      "description": "...",
      "citation": "...",
      "is_heterogeneous": false,
      "is_directed": false,
      "data": {
        "Node":  { "<attr>": {entry}, ... , "_NodeList": [start, stop] },
        "Edge":  { "_Edge": {ref}, "<attr>": {entry}, ... },
        "Graph": { "_NodeList": {ref}, "_EdgeList": {ref}, "<attr>": {entry} }
      }
    }

Heterogeneous datasets nest one object per group inside ``Node``/``Edge``;
each node group must declare its contiguous global id range via
``_NodeList: [start, stop)``. An attribute entry is
``{"description", "type", "format", "file", "key"}`` with ``format`` one of
``dense``/``sparse`` and ``type`` a dtype tag from the tensor store.
Node ids are global across groups; edge ids are global in group declaration
order. Undirected datasets store each edge once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .errors import (
    DanglingEdge,
    DuplicateGroup,
    MissingAttribute,
    SchemaError,
    ShapeMismatch,
)
from .tensor_store import (
    SUPPORTED_TAGS,
    SparseMatrix,
    container_keys,
    dtype_tag,
    read_array,
    read_sparse,
    sparse_equal,
    write_entries,
)

Tensor = np.ndarray | SparseMatrix

METADATA_FILE = "metadata.json"
DATA_FILE = "data.npz"

_RESERVED = {"_Edge", "_NodeList", "_EdgeList"}


# --- schema types ---------------------------------------------------------------


@dataclass(frozen=True)
class DataRef:
    """Relative pointer to a tensor: file plus optional container key."""

    file: str
    key: str | None = None

    def resolve(self, base: Path) -> Path:
        return Path(base) / self.file


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    dtype: str
    layout: str  # "dense" | "sparse"
    ref: DataRef
    description: str = ""


@dataclass(frozen=True)
class NodeGroupSchema:
    name: str
    attributes: tuple[AttributeSpec, ...]
    id_range: tuple[int, int] | None = None


@dataclass(frozen=True)
class EdgeGroupSchema:
    name: str
    edge_ref: DataRef
    attributes: tuple[AttributeSpec, ...]


@dataclass(frozen=True)
class GraphLevelSchema:
    node_list: DataRef | None = None
    edge_list: DataRef | None = None
    attributes: tuple[AttributeSpec, ...] = ()


@dataclass(frozen=True)
class GraphSchema:
    description: str
    citation: str
    is_heterogeneous: bool
    is_directed: bool
    node_groups: tuple[NodeGroupSchema, ...]
    edge_groups: tuple[EdgeGroupSchema, ...]
    graph_level: GraphLevelSchema

    def data_refs(self) -> list[tuple[str, DataRef]]:
        """All (pointer, ref) pairs in the schema, in document order."""
        out = []
        for g in self.node_groups:
            prefix = "/Node" if g.name == "Node" else f"/Node/{g.name}"
            out += [(f"{prefix}/{a.name}", a.ref) for a in g.attributes]
        for g in self.edge_groups:
            prefix = "/Edge" if g.name == "Edge" else f"/Edge/{g.name}"
            out.append((f"{prefix}/_Edge", g.edge_ref))
            out += [(f"{prefix}/{a.name}", a.ref) for a in g.attributes]
        gl = self.graph_level
        if gl.node_list:
            out.append(("/Graph/_NodeList", gl.node_list))
        if gl.edge_list:
            out.append(("/Graph/_EdgeList", gl.edge_list))
        out += [(f"/Graph/{a.name}", a.ref) for a in gl.attributes]
        return out


# --- metadata parsing -------------------------------------------------------------


def _no_duplicate_keys(pairs):
    seen = set()
    for k, _ in pairs:
        if k in seen:
            raise DuplicateGroup(f"duplicate key {k!r} in metadata")
        seen.add(k)
    return dict(pairs)


def _parse_ref(obj, pointer: str) -> DataRef:
    if not isinstance(obj, dict) or "file" not in obj:
        raise SchemaError("expected an object with a 'file' key", pointer)
    file = obj["file"]
    if not isinstance(file, str) or not file:
        raise SchemaError("'file' must be a non-empty string", f"{pointer}/file")
    p = Path(file)
    if p.is_absolute() or ".." in p.parts:
        raise SchemaError("data refs must be relative and stay inside the dataset",
                          f"{pointer}/file")
    key = obj.get("key")
    if key is not None and not isinstance(key, str):
        raise SchemaError("'key' must be a string", f"{pointer}/key")
    return DataRef(file=file, key=key)


def _parse_attr(name: str, obj, pointer: str) -> AttributeSpec:
    if not isinstance(obj, dict):
        raise SchemaError("attribute entry must be an object", pointer)
    for req in ("type", "format", "file"):
        if req not in obj:
            raise SchemaError(f"attribute entry lacks {req!r}", pointer)
    dtype = obj["type"]
    if dtype not in SUPPORTED_TAGS:
        raise SchemaError(f"unknown dtype tag {dtype!r}", f"{pointer}/type")
    layout = obj["format"]
    if layout not in ("dense", "sparse"):
        raise SchemaError(f"format must be 'dense' or 'sparse', got {layout!r}",
                          f"{pointer}/format")
    ref = _parse_ref(obj, pointer)
    return AttributeSpec(name=name, dtype=dtype, layout=layout, ref=ref,
                         description=str(obj.get("description", "")))


def _parse_range(obj, pointer: str) -> tuple[int, int]:
    ok = (isinstance(obj, list) and len(obj) == 2
          and all(isinstance(v, int) and v >= 0 for v in obj) and obj[0] <= obj[1])
    if not ok:
        raise SchemaError("node range must be [start, stop] with 0 <= start <= stop", pointer)
    return (obj[0], obj[1])


def _parse_node_level(level, hetero: bool) -> tuple[NodeGroupSchema, ...]:
    if not isinstance(level, dict):
        raise SchemaError("'Node' must be an object", "/Node")
    if not hetero:
        attrs = []
        id_range = None
        for name, val in level.items():
            if name == "_NodeList":
                id_range = _parse_range(val, "/Node/_NodeList")
            elif name.startswith("_"):
                raise SchemaError(f"unknown reserved key {name!r}", f"/Node/{name}")
            else:
                attrs.append(_parse_attr(name, val, f"/Node/{name}"))
        return (NodeGroupSchema(name="Node", attributes=tuple(attrs), id_range=id_range),)
    groups = []
    for gname, gobj in level.items():
        if gname.startswith("_"):
            raise SchemaError("heterogeneous 'Node' holds one object per group",
                              f"/Node/{gname}")
        if not isinstance(gobj, dict):
            raise SchemaError("node group must be an object", f"/Node/{gname}")
        attrs = []
        id_range = None
        for name, val in gobj.items():
            if name == "_NodeList":
                id_range = _parse_range(val, f"/Node/{gname}/_NodeList")
            elif name.startswith("_"):
                raise SchemaError(f"unknown reserved key {name!r}", f"/Node/{gname}/{name}")
            else:
                attrs.append(_parse_attr(name, val, f"/Node/{gname}/{name}"))
        if id_range is None:
            raise SchemaError("heterogeneous node groups must declare '_NodeList'",
                              f"/Node/{gname}/_NodeList")
        groups.append(NodeGroupSchema(name=gname, attributes=tuple(attrs), id_range=id_range))
    if not groups:
        raise SchemaError("heterogeneous 'Node' declares no groups", "/Node")
    # groups own contiguous, non-overlapping global id ranges tiling [0, N)
    spans = sorted((g.id_range, g.name) for g in groups)
    expect = 0
    for (start, stop), name in spans:
        if start != expect:
            raise SchemaError(
                f"node group ranges must tile [0, N) without gaps; group {name!r} "
                f"starts at {start}, expected {expect}", f"/Node/{name}/_NodeList")
        expect = stop
    return tuple(groups)


def _parse_edge_group(name: str, obj, pointer: str) -> EdgeGroupSchema:
    if not isinstance(obj, dict):
        raise SchemaError("edge group must be an object", pointer)
    if "_Edge" not in obj:
        raise SchemaError("edge group lacks the reserved '_Edge' ref", f"{pointer}/_Edge")
    edge_ref = _parse_ref(obj["_Edge"], f"{pointer}/_Edge")
    attrs = []
    for aname, val in obj.items():
        if aname == "_Edge":
            continue
        if aname.startswith("_"):
            raise SchemaError(f"unknown reserved key {aname!r}", f"{pointer}/{aname}")
        attrs.append(_parse_attr(aname, val, f"{pointer}/{aname}"))
    return EdgeGroupSchema(name=name, edge_ref=edge_ref, attributes=tuple(attrs))


def _parse_edge_level(level, hetero: bool) -> tuple[EdgeGroupSchema, ...]:
    if level is None:
        return ()
    if not isinstance(level, dict):
        raise SchemaError("'Edge' must be an object", "/Edge")
    if not hetero:
        return (_parse_edge_group("Edge", level, "/Edge"),)
    groups = []
    for gname, gobj in level.items():
        if gname.startswith("_"):
            raise SchemaError("heterogeneous 'Edge' holds one object per group",
                              f"/Edge/{gname}")
        groups.append(_parse_edge_group(gname, gobj, f"/Edge/{gname}"))
    return tuple(groups)


def _parse_graph_level(level) -> GraphLevelSchema:
    if level is None:
        return GraphLevelSchema()
    if not isinstance(level, dict):
        raise SchemaError("'Graph' must be an object", "/Graph")
    node_list = edge_list = None
    attrs = []
    for name, val in level.items():
        if name == "_NodeList":
            node_list = _parse_ref(val, "/Graph/_NodeList")
        elif name == "_EdgeList":
            edge_list = _parse_ref(val, "/Graph/_EdgeList")
        elif name.startswith("_"):
            raise SchemaError(f"unknown reserved key {name!r}", f"/Graph/{name}")
        else:
            attrs.append(_parse_attr(name, val, f"/Graph/{name}"))
    if edge_list is not None and node_list is None:
        raise SchemaError("'_EdgeList' without '_NodeList' is meaningless", "/Graph/_EdgeList")
    return GraphLevelSchema(node_list=node_list, edge_list=edge_list, attributes=tuple(attrs))


def parse_metadata(text: str) -> GraphSchema:
    """Parse and structurally validate a metadata document.

    Raises SchemaError (with a JSON-pointer into the data section) or
    DuplicateGroup. Data refs are checked for shape, not resolved.
    """
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"metadata is not valid JSON: {exc}", "") from exc
    if not isinstance(doc, dict):
        raise SchemaError("metadata must be a JSON object", "")
    data = doc.get("data")
    if not isinstance(data, dict):
        raise SchemaError("metadata lacks the 'data' object", "/data")
    unknown = set(data) - {"Node", "Edge", "Graph"}
    if unknown:
        raise SchemaError(f"unknown data sections {sorted(unknown)}", "/data")
    if "Node" not in data:
        raise SchemaError("'data' lacks the 'Node' section", "/Node")
    hetero = doc.get("is_heterogeneous", False)
    directed = doc.get("is_directed", True)
    if not isinstance(hetero, bool):
        raise SchemaError("'is_heterogeneous' must be a boolean", "/is_heterogeneous")
    if not isinstance(directed, bool):
        raise SchemaError("'is_directed' must be a boolean", "/is_directed")
    return GraphSchema(
        description=str(doc.get("description", "")),
        citation=str(doc.get("citation", "")),
        is_heterogeneous=hetero,
        is_directed=directed,
        node_groups=_parse_node_level(data["Node"], hetero),
        edge_groups=_parse_edge_level(data.get("Edge"), hetero),
        graph_level=_parse_graph_level(data.get("Graph")),
    )


# --- in-memory storage -------------------------------------------------------------


@dataclass
class NodeGroup:
    name: str
    start: int
    count: int
    attributes: dict[str, Tensor] = dc_field(default_factory=dict)

    @property
    def stop(self) -> int:
        return self.start + self.count


@dataclass
class EdgeGroup:
    name: str
    edges: np.ndarray  # (M_g, 2) int64, global node ids
    attributes: dict[str, Tensor] = dc_field(default_factory=dict)
    src_group: str | None = None
    dst_group: str | None = None

    @property
    def count(self) -> int:
        return len(self.edges)


@dataclass
class GraphEntry:
    """Membership of one graph; ``None`` means "all nodes/edges"."""

    node_ids: np.ndarray | None = None
    edge_ids: np.ndarray | None = None


@dataclass
class GraphStorage:
    """Materialized heterogeneous graph; immutable by convention after load."""

    node_groups: list[NodeGroup]
    edge_groups: list[EdgeGroup]
    graphs: list[GraphEntry]
    graph_attributes: dict[str, Tensor] = dc_field(default_factory=dict)
    directed: bool = True
    is_heterogeneous: bool = False
    description: str = ""
    citation: str = ""

    @property
    def num_nodes(self) -> int:
        return sum(g.count for g in self.node_groups)

    @property
    def num_edges(self) -> int:
        return sum(g.count for g in self.edge_groups)

    @property
    def num_graphs(self) -> int:
        return len(self.graphs)

    def edges_concat(self) -> np.ndarray:
        """All edges stacked in group declaration order, shape (M, 2).

        Single-group graphs return the stored array itself (no copy).
        """
        if not self.edge_groups:
            return np.zeros((0, 2), dtype=np.int64)
        if len(self.edge_groups) == 1:
            return self.edge_groups[0].edges
        return np.concatenate([g.edges for g in self.edge_groups], axis=0)

    def get_attribute(self, path: str) -> Tensor:
        """Resolve 'Level/attr' or 'Level/group/attr'; raises MissingAttribute."""
        parts = path.split("/")
        try:
            if parts[0] == "Node":
                groups = {g.name: g for g in self.node_groups}
                if len(parts) == 2 and not self.is_heterogeneous:
                    return groups["Node"].attributes[parts[1]]
                if len(parts) == 3:
                    return groups[parts[1]].attributes[parts[2]]
            elif parts[0] == "Edge":
                groups = {g.name: g for g in self.edge_groups}
                if len(parts) == 2 and not self.is_heterogeneous:
                    return groups["Edge"].attributes[parts[1]]
                if len(parts) == 3:
                    return groups[parts[1]].attributes[parts[2]]
            elif parts[0] == "Graph" and len(parts) == 2:
                return self.graph_attributes[parts[1]]
        except KeyError:
            pass
        raise MissingAttribute(f"no attribute at path {path!r}")

    def has_attribute(self, path: str) -> bool:
        try:
            self.get_attribute(path)
            return True
        except MissingAttribute:
            return False

    def attribute_range(self, path: str) -> tuple[int, int]:
        """Global entity id range [start, stop) the attribute's rows cover."""
        parts = path.split("/")
        if parts[0] == "Node" and len(parts) == 3:
            for g in self.node_groups:
                if g.name == parts[1]:
                    return (g.start, g.stop)
        if parts[0] == "Edge" and len(parts) == 3:
            off = 0
            for g in self.edge_groups:
                if g.name == parts[1]:
                    return (off, off + g.count)
                off += g.count
        if parts[0] == "Node":
            return (0, self.num_nodes)
        if parts[0] == "Edge":
            return (0, self.num_edges)
        return (0, self.num_graphs)

    def collect_node_attribute(self, name: str) -> np.ndarray | None:
        """Dense global node attribute assembled across groups, or None.

        Requires every group to carry a dense attribute ``name`` with
        matching trailing shape.
        """
        parts = []
        for g in sorted(self.node_groups, key=lambda g: g.start):
            arr = g.attributes.get(name)
            if not isinstance(arr, np.ndarray):
                return None
            parts.append(arr)
        if not parts:
            return None
        try:
            return parts[0] if len(parts) == 1 else np.concatenate(parts, axis=0)
        except ValueError:
            return None


def _first_dim(t: Tensor) -> int:
    if isinstance(t, SparseMatrix):
        return t.shape[0]
    if t.ndim == 0:
        raise ShapeMismatch("0-d arrays cannot serve as attributes")
    return t.shape[0]


def validate_storage(g: GraphStorage) -> None:
    """Check all in-memory invariants; raises ShapeMismatch/DanglingEdge/SchemaError."""
    n = g.num_nodes
    starts = sorted((grp.start, grp.stop, grp.name) for grp in g.node_groups)
    expect = 0
    for start, stop, name in starts:
        if start != expect:
            raise SchemaError(f"node group {name!r} range [{start},{stop}) leaves a gap")
        expect = stop
    for grp in g.node_groups:
        for aname, t in grp.attributes.items():
            if _first_dim(t) != grp.count:
                raise ShapeMismatch(
                    f"Node/{grp.name}/{aname}: leading dimension {_first_dim(t)} "
                    f"!= group node count {grp.count}")
    for grp in g.edge_groups:
        e = grp.edges
        if e.ndim != 2 or e.shape[1] != 2:
            raise ShapeMismatch(f"Edge/{grp.name}: edge list must have shape (M, 2)")
        if not np.issubdtype(e.dtype, np.integer):
            raise ShapeMismatch(f"Edge/{grp.name}: edge ids must be integers")
        if len(e) and (e.min() < 0 or e.max() >= n):
            bad = int(e.max()) if e.max() >= n else int(e.min())
            raise DanglingEdge(
                f"Edge/{grp.name}: endpoint id {bad} outside [0, {n})")
        for aname, t in grp.attributes.items():
            if _first_dim(t) != grp.count:
                raise ShapeMismatch(
                    f"Edge/{grp.name}/{aname}: leading dimension {_first_dim(t)} "
                    f"!= group edge count {grp.count}")
    m = g.num_edges
    if not g.graphs:
        raise SchemaError("graphs list must hold at least the implicit entry")
    for i, entry in enumerate(g.graphs):
        for ids, bound, what in ((entry.node_ids, n, "node"), (entry.edge_ids, m, "edge")):
            if ids is None:
                continue
            if len(ids) and (ids.min() < 0 or ids.max() >= bound):
                raise DanglingEdge(f"graph {i}: {what} membership id outside [0, {bound})")
    ngraphs = g.num_graphs
    for aname, t in g.graph_attributes.items():
        if _first_dim(t) != ngraphs:
            raise ShapeMismatch(
                f"Graph/{aname}: leading dimension {_first_dim(t)} != graph count {ngraphs}")


# --- loading --------------------------------------------------------------------


def _load_tensor(base: Path, spec: AttributeSpec) -> Tensor:
    path = spec.ref.resolve(base)
    if spec.layout == "sparse":
        return read_sparse(path, spec.ref.key or spec.name)
    return read_array(path, spec.ref.key)


def _load_membership(base: Path, ref: DataRef, total: int, what: str) -> list[np.ndarray]:
    """Decode graph membership: 1-D id map, 2-D indicator, or sparse indicator."""
    path = ref.resolve(base)
    t: Tensor
    if ref.key is not None and f"{ref.key}.data" in set(container_keys(path)):
        t = read_sparse(path, ref.key)
    else:
        t = read_array(path, ref.key)
    if isinstance(t, SparseMatrix):
        rows, cols = t.shape
        if cols != total:
            raise ShapeMismatch(
                f"Graph/_{what}: membership columns {cols} != element count {total}")
        sp = t.to_scipy().tocsr()
        return [np.sort(sp.indices[sp.indptr[i]:sp.indptr[i + 1]]).astype(np.int64)
                for i in range(rows)]
    if t.ndim == 1:
        if len(t) != total:
            raise ShapeMismatch(
                f"Graph/_{what}: membership map length {len(t)} != element count {total}")
        if not np.issubdtype(t.dtype, np.integer):
            raise SchemaError(f"Graph/_{what}: membership map must hold integer graph ids")
        if total and t.min() < 0:
            raise SchemaError(f"Graph/_{what}: negative graph id in membership map")
        count = int(t.max()) + 1 if total else 0
        return [np.flatnonzero(t == i).astype(np.int64) for i in range(count)]
    if t.ndim == 2:
        if t.shape[1] != total:
            raise ShapeMismatch(
                f"Graph/_{what}: membership columns {t.shape[1]} != element count {total}")
        return [np.flatnonzero(row).astype(np.int64) for row in t]
    raise SchemaError(f"Graph/_{what}: membership must be 1-D, 2-D, or sparse")


def load_graph(path: str | Path) -> GraphStorage:
    """Load a dataset directory into a fully materialized GraphStorage."""
    base = Path(path)
    schema = parse_metadata((base / METADATA_FILE).read_text())
    return load_graph_from_schema(schema, base)


def load_graph_from_schema(schema: GraphSchema, base: Path) -> GraphStorage:
    node_groups = []
    for gs in schema.node_groups:
        attrs = {a.name: _load_tensor(base, a) for a in gs.attributes}
        if gs.id_range is not None:
            start, count = gs.id_range[0], gs.id_range[1] - gs.id_range[0]
        else:
            start = 0
            dims = {_first_dim(t) for t in attrs.values()}
            if len(dims) > 1:
                raise ShapeMismatch(
                    f"Node/{gs.name}: attributes disagree on node count: {sorted(dims)}")
            count = dims.pop() if dims else -1  # fill from edges below
        node_groups.append(NodeGroup(name=gs.name, start=start, count=count, attributes=attrs))

    edge_groups = []
    for gs in schema.edge_groups:
        e = read_array(gs.edge_ref.resolve(base), gs.edge_ref.key)
        if e.ndim != 2 or e.shape[1] != 2:
            raise ShapeMismatch(f"Edge/{gs.name}: edge list must have shape (M, 2)")
        if not np.issubdtype(e.dtype, np.integer):
            raise ShapeMismatch(f"Edge/{gs.name}: edge ids must be integers")
        attrs = {a.name: _load_tensor(base, a) for a in gs.attributes}
        edge_groups.append(EdgeGroup(name=gs.name, edges=e.astype(np.int64),
                                     attributes=attrs))

    # resolve a node count left open by an attribute-free homogeneous group
    if len(node_groups) == 1 and node_groups[0].count < 0:
        max_id = -1
        for eg in edge_groups:
            if len(eg.edges):
                max_id = max(max_id, int(eg.edges.max()))
        node_groups[0].count = max_id + 1

    storage = GraphStorage(
        node_groups=node_groups,
        edge_groups=edge_groups,
        graphs=[GraphEntry()],
        directed=schema.is_directed,
        is_heterogeneous=schema.is_heterogeneous,
        description=schema.description,
        citation=schema.citation,
    )

    # src/dst group classification from global id ranges
    if schema.is_heterogeneous:
        for eg in storage.edge_groups:
            if len(eg.edges):
                eg.src_group = _owning_group(storage.node_groups, eg.edges[:, 0])
                eg.dst_group = _owning_group(storage.node_groups, eg.edges[:, 1])
    else:
        for eg in storage.edge_groups:
            eg.src_group = eg.dst_group = "Node"

    gl = schema.graph_level
    if gl.node_list is not None:
        node_sets = _load_membership(base, gl.node_list, storage.num_nodes, "NodeList")
        if gl.edge_list is not None:
            edge_sets = _load_membership(base, gl.edge_list, storage.num_edges, "EdgeList")
            if len(edge_sets) != len(node_sets):
                raise ShapeMismatch(
                    f"Graph/_EdgeList: {len(edge_sets)} graphs != {len(node_sets)} in _NodeList")
        else:
            edge_sets = _derive_edge_membership(storage.edges_concat(), node_sets)
        storage.graphs = [GraphEntry(node_ids=ns, edge_ids=es)
                          for ns, es in zip(node_sets, edge_sets)]

    storage.graph_attributes = {a.name: _load_tensor(base, a) for a in gl.attributes}
    validate_storage(storage)
    return storage


def _owning_group(groups: list[NodeGroup], ids: np.ndarray) -> str | None:
    lo, hi = int(ids.min()), int(ids.max())
    for g in groups:
        if g.start <= lo and hi < g.stop:
            return g.name
    return None


def _derive_edge_membership(edges: np.ndarray, node_sets: list[np.ndarray]) -> list[np.ndarray]:
    sets = [set(ns.tolist()) for ns in node_sets]
    out: list[list[int]] = [[] for _ in node_sets]
    for i, (u, v) in enumerate(edges.tolist()):
        hit = False
        for gi, s in enumerate(sets):
            if u in s and v in s:
                out[gi].append(i)
                hit = True
        if not hit:
            raise SchemaError(
                f"edge {i} ({u}->{v}) belongs to no graph; supply an explicit '_EdgeList'",
                "/Graph/_NodeList")
    return [np.asarray(ids, dtype=np.int64) for ids in out]


# --- writing --------------------------------------------------------------------


def _tensor_entries(key: str, t: Tensor) -> dict[str, np.ndarray]:
    if isinstance(t, SparseMatrix):
        t.validate()
        entries = {f"{key}.data": t.data,
                   f"{key}.shape": np.asarray(t.shape, dtype=np.int64)}
        if t.format == "csr":
            entries[f"{key}.indptr"] = t.indptr
            entries[f"{key}.indices"] = t.indices
        else:
            entries[f"{key}.row"] = t.row
            entries[f"{key}.col"] = t.col
        return entries
    return {key: t}


def _attr_metadata(key: str, t: Tensor, description: str = "") -> dict:
    layout = "sparse" if isinstance(t, SparseMatrix) else "dense"
    tag = dtype_tag(t.data.dtype if isinstance(t, SparseMatrix) else t.dtype)
    return {"description": description, "type": tag, "format": layout,
            "file": DATA_FILE, "key": key}


def write_graph(graph: GraphStorage, path: str | Path) -> None:
    """Write ``metadata.json`` + ``data.npz`` so load_graph restores the value.

    Invariants are checked before anything is emitted.
    """
    validate_storage(graph)
    base = Path(path)
    base.mkdir(parents=True, exist_ok=True)
    entries: dict[str, np.ndarray] = {}
    hetero = graph.is_heterogeneous

    node_section: dict = {}
    for grp in sorted(graph.node_groups, key=lambda g: g.start):
        prefix = f"Node/{grp.name}" if hetero else "Node"
        section: dict = {}
        for aname, t in grp.attributes.items():
            key = f"{prefix}/{aname}"
            entries.update(_tensor_entries(key, t))
            section[aname] = _attr_metadata(key, t)
        section["_NodeList"] = [grp.start, grp.stop]
        if hetero:
            node_section[grp.name] = section
        else:
            node_section = section

    edge_section: dict = {}
    for grp in graph.edge_groups:
        prefix = f"Edge/{grp.name}" if hetero else "Edge"
        section = {"_Edge": {"file": DATA_FILE, "key": f"{prefix}/_Edge"}}
        entries[f"{prefix}/_Edge"] = grp.edges.astype(np.int64)
        for aname, t in grp.attributes.items():
            key = f"{prefix}/{aname}"
            entries.update(_tensor_entries(key, t))
            section[aname] = _attr_metadata(key, t)
        if hetero:
            edge_section[grp.name] = section
        else:
            edge_section = section

    graph_section: dict = {}
    multi = not (graph.num_graphs == 1 and graph.graphs[0].node_ids is None)
    if multi:
        graph_section["_NodeList"] = {"file": DATA_FILE, "key": "Graph/_NodeList"}
        graph_section["_EdgeList"] = {"file": DATA_FILE, "key": "Graph/_EdgeList"}
        entries.update(_membership_entries("Graph/_NodeList", graph.num_nodes,
                                           [g.node_ids for g in graph.graphs]))
        entries.update(_membership_entries("Graph/_EdgeList", graph.num_edges,
                                           [g.edge_ids for g in graph.graphs]))
    for aname, t in graph.graph_attributes.items():
        key = f"Graph/{aname}"
        entries.update(_tensor_entries(key, t))
        graph_section[aname] = _attr_metadata(key, t)

    doc = {
        "description": graph.description,
        "citation": graph.citation,
        "is_heterogeneous": hetero,
        "is_directed": graph.directed,
        "data": {"Node": node_section, "Edge": edge_section, "Graph": graph_section},
    }
    if not graph.edge_groups:
        del doc["data"]["Edge"]
    if not graph_section:
        del doc["data"]["Graph"]

    write_entries(base / DATA_FILE, entries)
    (base / METADATA_FILE).write_text(json.dumps(doc, indent=2) + "\n")


def _membership_entries(key: str, total: int,
                        id_sets: list[np.ndarray | None]) -> dict[str, np.ndarray]:
    sets = [np.arange(total, dtype=np.int64) if ids is None else np.sort(ids)
            for ids in id_sets]
    counts = np.zeros(total, dtype=np.int64)
    for ids in sets:
        counts[ids] += 1
    if total == 0 or (counts == 1).all():
        # partition: compact 1-D graph-id map
        mapping = np.zeros(total, dtype=np.int64)
        for gi, ids in enumerate(sets):
            mapping[ids] = gi
        return {key: mapping}
    # overlapping membership: sparse COO indicator (graphs x elements)
    row = np.concatenate([np.full(len(ids), gi, dtype=np.int64)
                          for gi, ids in enumerate(sets)]) if sets else np.zeros(0, np.int64)
    col = np.concatenate(sets) if sets else np.zeros(0, np.int64)
    m = SparseMatrix(format="coo", shape=(len(sets), total),
                     data=np.ones(len(col), dtype=np.int8), row=row, col=col)
    return _tensor_entries(key, m)


# --- equality -------------------------------------------------------------------


def _tensor_equal(a: Tensor, b: Tensor) -> bool:
    if isinstance(a, SparseMatrix) != isinstance(b, SparseMatrix):
        return False
    if isinstance(a, SparseMatrix):
        return sparse_equal(a, b)
    return a.dtype == b.dtype and a.shape == b.shape and a.tobytes() == b.tobytes()


def _attrs_equal(a: dict[str, Tensor], b: dict[str, Tensor]) -> bool:
    return set(a) == set(b) and all(_tensor_equal(a[k], b[k]) for k in a)


def graphs_equal(a: GraphStorage, b: GraphStorage) -> bool:
    """Structural equality: groups, edges, memberships, attribute bytes."""
    if (a.directed != b.directed or a.is_heterogeneous != b.is_heterogeneous
            or a.num_graphs != b.num_graphs):
        return False
    an = {g.name: g for g in a.node_groups}
    bn = {g.name: g for g in b.node_groups}
    if set(an) != set(bn):
        return False
    for name, ga in an.items():
        gb = bn[name]
        if (ga.start, ga.count) != (gb.start, gb.count) or not _attrs_equal(
                ga.attributes, gb.attributes):
            return False
    ae = {g.name: g for g in a.edge_groups}
    be = {g.name: g for g in b.edge_groups}
    if set(ae) != set(be):
        return False
    for name, ga in ae.items():
        gb = be[name]
        if not np.array_equal(ga.edges, gb.edges) or not _attrs_equal(
                ga.attributes, gb.attributes):
            return False
    for ea, eb in zip(a.graphs, b.graphs):
        na = np.arange(a.num_nodes) if ea.node_ids is None else np.sort(ea.node_ids)
        nb = np.arange(b.num_nodes) if eb.node_ids is None else np.sort(eb.node_ids)
        ma = np.arange(a.num_edges) if ea.edge_ids is None else np.sort(ea.edge_ids)
        mb = np.arange(b.num_edges) if eb.edge_ids is None else np.sort(eb.edge_ids)
        if not (np.array_equal(na, nb) and np.array_equal(ma, mb)):
            return False
    return _attrs_equal(a.graph_attributes, b.graph_attributes)
