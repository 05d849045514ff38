"""Exception types shared across the toolkit.

Every error carries a stable ``code`` string; the validator reuses these
codes in its findings so CLI and CI consumers see one vocabulary.
"""


class GraphdexError(Exception):
    """Base class for all toolkit errors."""

    code = "ERROR"


# --- binary container errors -------------------------------------------------

class BadMagic(GraphdexError):
    """File does not start with a recognized array-file header."""

    code = "BAD_MAGIC"


class UnsupportedDtype(GraphdexError):
    """Element type is outside the supported numeric set (or big-endian)."""

    code = "UNSUPPORTED_DTYPE"


class UnsupportedLayout(GraphdexError):
    """Array is stored column-major; only row-major payloads are accepted."""

    code = "UNSUPPORTED_LAYOUT"


class TruncatedPayload(GraphdexError):
    """Buffer is shorter than the header-declared shape implies."""

    code = "TRUNCATED_PAYLOAD"


class MissingKey(GraphdexError):
    """Requested entry is absent from a multi-array container."""

    code = "MISSING_KEY"


class InconsistentSparse(GraphdexError):
    """Stored sparse arrays violate the CSR/COO structural invariants."""

    code = "INCONSISTENT_SPARSE"


# --- metadata / graph errors -------------------------------------------------

class SchemaError(GraphdexError):
    """Structurally invalid metadata; ``pointer`` locates the offending field."""

    code = "SCHEMA_ERROR"

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(message if not pointer else f"{message} (at {pointer})")
        self.pointer = pointer


class DuplicateGroup(SchemaError):
    code = "DUPLICATE_GROUP"


class DanglingEdge(GraphdexError):
    """Edge endpoint id falls outside the node id space."""

    code = "DANGLING_EDGE"


class ShapeMismatch(GraphdexError):
    """Attribute leading dimension disagrees with its level's element count."""

    code = "SHAPE_MISMATCH"


# --- task errors -------------------------------------------------------------

class UnknownTaskType(GraphdexError):
    code = "UNKNOWN_TASK_TYPE"


class MissingField(GraphdexError):
    """A per-type required task field is absent."""

    code = "MISSING_FIELD"

    def __init__(self, field: str, message: str = ""):
        super().__init__(message or f"required field '{field}' is missing")
        self.field = field


class BadRatio(GraphdexError):
    code = "BAD_RATIO"


class IndexOutOfRange(GraphdexError):
    code = "INDEX_OUT_OF_RANGE"


class OverlappingSplit(GraphdexError):
    code = "SPLIT_OVERLAP"


class EmptySplit(GraphdexError):
    code = "EMPTY_SPLIT"


# --- dataset view errors -----------------------------------------------------

class MissingAttribute(GraphdexError):
    code = "MISSING_ATTRIBUTE"


class DatasetNotFound(GraphdexError):
    code = "DATASET_NOT_FOUND"


class TaskNotFound(GraphdexError):
    code = "TASK_NOT_FOUND"


# --- index / query errors ----------------------------------------------------

class FilterParseError(GraphdexError):
    """Filter expression is malformed; ``position`` is the failing offset."""

    code = "FILTER_PARSE"

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownField(GraphdexError):
    code = "UNKNOWN_FIELD"


# --- conversion errors ---------------------------------------------------------

class RaggedInput(GraphdexError):
    """Input rows have inconsistent lengths or counts."""

    code = "RAGGED_INPUT"


class NonIntegerId(GraphdexError):
    code = "NON_INTEGER_ID"
