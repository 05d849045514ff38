"""graphdex: file-based graph dataset storage, validation, metrics, and indexing."""

__version__ = "0.1.0"

# Version of the on-disk dataset format this package reads and writes.
FORMAT_VERSION = "1.0"

from .dataset_view import DatasetView, combine_graph_and_task, get_dataset  # noqa: E402
from .graph_store import (  # noqa: E402
    DataRef,
    EdgeGroup,
    GraphEntry,
    GraphSchema,
    GraphStorage,
    NodeGroup,
    graphs_equal,
    load_graph,
    parse_metadata,
    write_graph,
)
from .task_config import (  # noqa: E402
    SplitMasks,
    SplitSpec,
    TaskConfig,
    TaskType,
    list_task_types,
    parse_task,
    parse_task_file,
    resolve_splits,
)
from .tensor_store import (  # noqa: E402
    SparseMatrix,
    read_array,
    read_sparse,
    write_array,
    write_sparse,
)
from .validator import ValidationReport, validate_dataset, validate_file_set  # noqa: E402
from .metrics import (  # noqa: E402
    ApproxBudget,
    LabeledGraphView,
    MetricReport,
    compute_all,
    view_from_storage,
)
from .index import (  # noqa: E402
    CitationChain,
    IndexDatabase,
    IndexRecord,
    build_index,
    load_index,
    parse_citation,
    query_index,
    render_table,
    save_index,
)
from .convert import convert_edgelist  # noqa: E402

__all__ = [
    "FORMAT_VERSION",
    "ApproxBudget",
    "CitationChain",
    "DataRef",
    "DatasetView",
    "EdgeGroup",
    "GraphEntry",
    "GraphSchema",
    "GraphStorage",
    "IndexDatabase",
    "IndexRecord",
    "LabeledGraphView",
    "MetricReport",
    "NodeGroup",
    "SparseMatrix",
    "SplitMasks",
    "SplitSpec",
    "TaskConfig",
    "TaskType",
    "ValidationReport",
    "build_index",
    "combine_graph_and_task",
    "compute_all",
    "convert_edgelist",
    "get_dataset",
    "graphs_equal",
    "list_task_types",
    "load_graph",
    "load_index",
    "parse_citation",
    "parse_metadata",
    "parse_task",
    "parse_task_file",
    "query_index",
    "read_array",
    "read_sparse",
    "render_table",
    "resolve_splits",
    "save_index",
    "validate_dataset",
    "validate_file_set",
    "view_from_storage",
    "write_array",
    "write_graph",
    "write_sparse",
]
