"""tgkit: a temporal graph engine.

One immutable event store, one time-granularity algebra, and one typed
hook pipeline serve both event-stream (continuous-time) and snapshot
(discrete-time) workflows, with non-neural link-prediction baselines and
ranked evaluation on top.
"""

from tgkit.baselines import (
    EdgeBankMemory,
    EdgeBankResult,
    LabelStream,
    edgebank_predict,
    edgebank_update,
    evaluate_edgebank,
    evaluate_persistent_forecast,
    persistent_forecast,
)
from tgkit.dataset import (
    DatasetManifest,
    IdMap,
    SplitSpec,
    chronological_split,
    load_csv,
    load_negatives,
    parse_manifest,
    resolve_split,
    write_events_csv,
)
from tgkit.discretize import discretize, discretize_naive
from tgkit.granularity import (
    Ordering,
    ReductionOp,
    TimeGranularity,
    bucket_of,
    compare_granularity,
    ticks_between,
)
from tgkit.graph import (
    EdgeEvent,
    GraphStats,
    NodeEvent,
    TemporalGraph,
    build_graph,
    graph_stats,
    lower_bound,
)
from tgkit.hooks import (
    Hook,
    HookContract,
    HookManager,
    PrecomputedNegativesHook,
    Recipe,
    RecencyNeighborHook,
    UniformNegativesHook,
    UniformNeighborHook,
    validate_recipe,
)
from tgkit.loader import (
    BUILTIN_ATTRS,
    BatchSpec,
    ByEvents,
    ByTime,
    EventSlice,
    GraphView,
    MaterializedBatch,
    iterate,
    iterate_by_events,
    iterate_by_time,
    materialize,
    slice_view,
)
from tgkit.metrics import growth_labels, mrr, ndcg_at_k, sample_uniform_negatives
from tgkit.neighbors import (
    Neighbors,
    RecencyBuffer,
    TemporalAdjacency,
    multihop_query,
    recency_query,
    recency_update,
    uniform_query,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BUILTIN_ATTRS",
    "BatchSpec",
    "ByEvents",
    "ByTime",
    "DatasetManifest",
    "EdgeBankMemory",
    "EdgeBankResult",
    "EdgeEvent",
    "EventSlice",
    "GraphStats",
    "GraphView",
    "Hook",
    "HookContract",
    "HookManager",
    "IdMap",
    "LabelStream",
    "MaterializedBatch",
    "Neighbors",
    "NodeEvent",
    "Ordering",
    "PrecomputedNegativesHook",
    "Recipe",
    "RecencyBuffer",
    "RecencyNeighborHook",
    "ReductionOp",
    "SplitSpec",
    "TemporalAdjacency",
    "TemporalGraph",
    "TimeGranularity",
    "UniformNegativesHook",
    "UniformNeighborHook",
    "build_graph",
    "bucket_of",
    "chronological_split",
    "compare_granularity",
    "discretize",
    "discretize_naive",
    "edgebank_predict",
    "edgebank_update",
    "evaluate_edgebank",
    "evaluate_persistent_forecast",
    "graph_stats",
    "growth_labels",
    "iterate",
    "iterate_by_events",
    "iterate_by_time",
    "load_csv",
    "load_negatives",
    "lower_bound",
    "materialize",
    "mrr",
    "multihop_query",
    "ndcg_at_k",
    "parse_manifest",
    "persistent_forecast",
    "recency_query",
    "recency_update",
    "resolve_split",
    "sample_uniform_negatives",
    "slice_view",
    "ticks_between",
    "uniform_query",
    "validate_recipe",
    "write_events_csv",
]
