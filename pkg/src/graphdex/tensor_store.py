"""Reader/writer for binary array files and multi-array containers.

Single arrays use the NPY v1.0 layout (magic ``\\x93NUMPY``, version bytes
``(1, 0)``, u16 little-endian header length, ASCII header dict padded to a
64-byte boundary). Multi-array containers are uncompressed ZIP archives of
such files; keys are entry names without the ``.npy`` extension. Decoding is
bit-exact: no dtype promotion, no byte swapping (big-endian payloads are
rejected), and column-major payloads are rejected rather than transposed.
"""

from __future__ import annotations

import ast
import io
import struct
import zipfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    InconsistentSparse,
    MissingKey,
    TruncatedPayload,
    UnsupportedDtype,
    UnsupportedLayout,
)

MAGIC = b"\x93NUMPY"
VERSION = bytes((1, 0))
_ZIP_MAGIC = b"PK"

# Canonical dtype tags and their on-disk descriptors (little-endian only).
TAG_TO_DESCR = {
    "int8": "|i1",
    "int16": "<i2",
    "int32": "<i4",
    "int64": "<i8",
    "uint8": "|u1",
    "float32": "<f4",
    "float64": "<f8",
    "bool": "|b1",
}
_DESCR_TO_TAG = {v: k for k, v in TAG_TO_DESCR.items()}
# Writers in the wild mark one-byte types with '<' instead of '|'.
_DESCR_TO_TAG.update({"<i1": "int8", "<u1": "uint8", "<b1": "bool"})

SUPPORTED_TAGS = frozenset(TAG_TO_DESCR)


def dtype_tag(dtype: np.dtype) -> str:
    """Canonical tag for a numpy dtype, or UnsupportedDtype."""
    name = np.dtype(dtype).name
    if name not in SUPPORTED_TAGS:
        raise UnsupportedDtype(f"dtype {name!r} is not in the supported set")
    return name


def _check_supported(arr: np.ndarray) -> None:
    dtype_tag(arr.dtype)
    if arr.dtype.byteorder == ">":
        raise UnsupportedDtype("big-endian arrays are not supported")


# --- NPY encoding --------------------------------------------------------------

def _encode_npy(arr: np.ndarray) -> bytes:
    _check_supported(arr)
    descr = TAG_TO_DESCR[dtype_tag(arr.dtype)]
    shape = arr.shape
    if len(shape) == 1:
        shape_repr = f"({shape[0]},)"
    else:
        shape_repr = "(" + ", ".join(str(d) for d in shape) + ")"
    header = "{'descr': %r, 'fortran_order': False, 'shape': %s, }" % (descr, shape_repr)
    # magic(6) + version(2) + hlen(2) + header + '\n' must be 64-aligned
    pad = (-(len(MAGIC) + 4 + len(header) + 1)) % 64
    header = header + " " * pad + "\n"
    payload = np.ascontiguousarray(arr).tobytes()
    return MAGIC + VERSION + struct.pack("<H", len(header)) + header.encode("latin1") + payload


def _decode_npy(buf: bytes, name: str) -> np.ndarray:
    if len(buf) < 8 or buf[:6] != MAGIC:
        raise BadMagic(f"{name}: not an array file (bad magic)")
    if buf[6:8] != VERSION:
        raise BadMagic(f"{name}: unsupported format version {tuple(buf[6:8])}")
    if len(buf) < 10:
        raise TruncatedPayload(f"{name}: header length field missing")
    (hlen,) = struct.unpack("<H", buf[8:10])
    header_end = 10 + hlen
    if len(buf) < header_end:
        raise TruncatedPayload(f"{name}: header shorter than declared")
    try:
        meta = ast.literal_eval(buf[10:header_end].decode("latin1"))
    except (ValueError, SyntaxError) as exc:
        raise BadMagic(f"{name}: unparseable header dict") from exc
    if not isinstance(meta, dict) or not {"descr", "fortran_order", "shape"} <= set(meta):
        raise BadMagic(f"{name}: header dict missing required keys")
    if meta["fortran_order"]:
        raise UnsupportedLayout(f"{name}: column-major arrays are rejected; re-export row-major")
    descr = meta["descr"]
    if not isinstance(descr, str):
        raise UnsupportedDtype(f"{name}: structured dtypes are not supported")
    if descr.startswith(">"):
        raise UnsupportedDtype(f"{name}: big-endian dtype {descr!r} rejected")
    tag = _DESCR_TO_TAG.get(descr)
    if tag is None:
        raise UnsupportedDtype(f"{name}: dtype {descr!r} is not in the supported set")
    shape = meta["shape"]
    if not isinstance(shape, tuple) or not all(isinstance(d, int) and d >= 0 for d in shape):
        raise BadMagic(f"{name}: malformed shape {shape!r}")
    count = 1
    for d in shape:
        count *= d
    dt = np.dtype(TAG_TO_DESCR[tag])
    nbytes = count * dt.itemsize
    payload = buf[header_end : header_end + nbytes]
    if len(payload) < nbytes:
        raise TruncatedPayload(
            f"{name}: payload holds {len(payload)} bytes, shape {shape} needs {nbytes}"
        )
    # frombuffer keeps the array read-only, matching the immutability contract
    return np.frombuffer(payload, dtype=dt).reshape(shape)


# --- container helpers ----------------------------------------------------------

def _is_container(path: Path) -> bool:
    with open(path, "rb") as f:
        return f.read(2) == _ZIP_MAGIC


def container_keys(path: str | Path) -> list[str]:
    """Entry keys of a multi-array container (names without extension)."""
    with zipfile.ZipFile(path) as zf:
        return [n[: -len(".npy")] if n.endswith(".npy") else n for n in zf.namelist()]


def _read_container_entry(path: Path, key: str) -> bytes:
    with zipfile.ZipFile(path) as zf:
        name = key + ".npy"
        if name not in zf.namelist():
            raise MissingKey(
                f"{path.name}: no entry {key!r}; available: {sorted(container_keys(path))}"
            )
        return zf.read(name)


def read_array(path: str | Path, key: str | None = None) -> np.ndarray:
    """Decode one dense array from a file or container entry.

    Raises BadMagic, UnsupportedDtype, UnsupportedLayout, TruncatedPayload,
    or MissingKey.
    """
    path = Path(path)
    if _is_container(path):
        if key is None:
            raise MissingKey(f"{path.name} is a container; a key is required")
        return _decode_npy(_read_container_entry(path, key), f"{path.name}:{key}")
    if key is not None:
        raise MissingKey(f"{path.name} is a single-array file; key {key!r} cannot resolve")
    return _decode_npy(path.read_bytes(), path.name)


def write_array(array: np.ndarray, path: str | Path, key: str | None = None) -> None:
    """Write one dense array; with a key, add/replace the container entry."""
    path = Path(path)
    if key is None:
        path.write_bytes(_encode_npy(array))
        return
    write_entries(path, {key: array}, replace=False)


def write_entries(
    path: str | Path, entries: dict[str, np.ndarray], replace: bool = True
) -> None:
    """Write a multi-array container (uncompressed zip).

    With ``replace=False`` and an existing container, entries are merged into
    it (new keys overriding old ones).
    """
    path = Path(path)
    merged: dict[str, bytes] = {}
    if not replace and path.exists():
        with zipfile.ZipFile(path) as zf:
            for name in zf.namelist():
                k = name[: -len(".npy")] if name.endswith(".npy") else name
                merged[k] = zf.read(name)
    for k, arr in entries.items():
        merged[k] = _encode_npy(arr)
    buf = io.BytesIO()
    with zipfile.ZipFile(buf, "w", compression=zipfile.ZIP_STORED) as zf:
        for k in merged:
            zf.writestr(k + ".npy", merged[k])
    path.write_bytes(buf.getvalue())


# --- sparse matrices ---------------------------------------------------------

_CSR_PARTS = ("data", "indices", "indptr", "shape")
_COO_PARTS = ("row", "col", "data", "shape")


@dataclass(frozen=True)
class SparseMatrix:
    """A 2-D sparse matrix in CSR or COO layout."""

    format: str  # "csr" | "coo"
    shape: tuple[int, int]
    data: np.ndarray
    indptr: np.ndarray | None = None
    indices: np.ndarray | None = None
    row: np.ndarray | None = None
    col: np.ndarray | None = None

    @property
    def nnz(self) -> int:
        return len(self.data)

    def validate(self) -> None:
        rows, cols = self.shape
        if rows < 0 or cols < 0:
            raise InconsistentSparse(f"negative shape {self.shape}")
        if self.format == "csr":
            ip = self.indptr
            if ip is None or self.indices is None:
                raise InconsistentSparse("csr matrix lacks indptr/indices")
            if len(ip) != rows + 1:
                raise InconsistentSparse(f"indptr length {len(ip)} != rows+1 ({rows + 1})")
            if rows >= 0 and (len(ip) == 0 or ip[0] != 0):
                raise InconsistentSparse("indptr[0] must be 0")
            if np.any(np.diff(ip) < 0):
                raise InconsistentSparse("indptr must be non-decreasing")
            if ip[-1] != self.nnz or len(self.indices) != self.nnz:
                raise InconsistentSparse("indptr[-1], indices, and data disagree on nnz")
            if self.nnz and (self.indices.min() < 0 or self.indices.max() >= cols):
                raise InconsistentSparse("column index out of range")
        elif self.format == "coo":
            if self.row is None or self.col is None:
                raise InconsistentSparse("coo matrix lacks row/col")
            if not (len(self.row) == len(self.col) == self.nnz):
                raise InconsistentSparse("row, col, and data lengths disagree")
            if self.nnz:
                if self.row.min() < 0 or self.row.max() >= rows:
                    raise InconsistentSparse("row index out of range")
                if self.col.min() < 0 or self.col.max() >= cols:
                    raise InconsistentSparse("column index out of range")
        else:
            raise InconsistentSparse(f"unknown sparse format {self.format!r}")

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=self.data.dtype)
        if self.format == "csr":
            for r in range(self.shape[0]):
                sl = slice(self.indptr[r], self.indptr[r + 1])
                out[r, self.indices[sl]] = self.data[sl]
        else:
            out[self.row, self.col] = self.data
        return out

    def to_scipy(self):
        import scipy.sparse as sp

        if self.format == "csr":
            return sp.csr_matrix((self.data, self.indices, self.indptr), shape=self.shape)
        return sp.coo_matrix((self.data, (self.row, self.col)), shape=self.shape)


def read_sparse(path: str | Path, key_prefix: str) -> SparseMatrix:
    """Read a sparse matrix stored as ``key_prefix + '.data'/...`` entries."""
    path = Path(path)
    if not _is_container(path):
        raise MissingKey(f"{path.name}: sparse matrices live in containers only")
    keys = set(container_keys(path))
    is_csr = f"{key_prefix}.indptr" in keys
    is_coo = f"{key_prefix}.row" in keys
    parts = _CSR_PARTS if is_csr else _COO_PARTS
    if not (is_csr or is_coo):
        raise MissingKey(f"{path.name}: no sparse entries under prefix {key_prefix!r}")
    arrays = {}
    for part in parts:
        k = f"{key_prefix}.{part}"
        if k not in keys:
            raise MissingKey(f"{path.name}: sparse entry {k!r} is missing")
        arrays[part] = read_array(path, k)
    shape_arr = arrays.pop("shape")
    if shape_arr.shape != (2,):
        raise InconsistentSparse(f"{key_prefix}: shape entry must hold [rows, cols]")
    shape = (int(shape_arr[0]), int(shape_arr[1]))
    if is_csr:
        m = SparseMatrix(format="csr", shape=shape, data=arrays["data"],
                         indptr=arrays["indptr"], indices=arrays["indices"])
    else:
        m = SparseMatrix(format="coo", shape=shape, data=arrays["data"],
                         row=arrays["row"], col=arrays["col"])
    m.validate()
    return m


def write_sparse(matrix: SparseMatrix, path: str | Path, key_prefix: str,
                 replace: bool = False) -> None:
    matrix.validate()
    entries = {f"{key_prefix}.data": matrix.data,
               f"{key_prefix}.shape": np.asarray(matrix.shape, dtype=np.int64)}
    if matrix.format == "csr":
        entries[f"{key_prefix}.indptr"] = matrix.indptr
        entries[f"{key_prefix}.indices"] = matrix.indices
    else:
        entries[f"{key_prefix}.row"] = matrix.row
        entries[f"{key_prefix}.col"] = matrix.col
    write_entries(path, entries, replace=replace)


def sparse_equal(a: SparseMatrix, b: SparseMatrix) -> bool:
    if a.format != b.format or a.shape != b.shape:
        return False
    pairs = [(a.data, b.data)]
    if a.format == "csr":
        pairs += [(a.indptr, b.indptr), (a.indices, b.indices)]
    else:
        pairs += [(a.row, b.row), (a.col, b.col)]
    return all(x.dtype == y.dtype and np.array_equal(x, y) for x, y in pairs)
