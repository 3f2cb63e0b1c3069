"""hogkit: hierarchical overlap graphs in linear time.

Library entry points re-exported here cover the full pipeline: load
and validate patterns, build the Aho-Corasick trie, compute per-node
leaf lists, mark longest-overlap nodes with one of three variants,
contract to the final graph, and verify everything against a
brute-force oracle.
"""

from . import errors
from .ac_trie import (
    AcTrie,
    EulerEvent,
    EulerEvents,
    EventKind,
    NodeId,
    build_trie,
    euler_traversal,
)
from .graph_build import (
    BuildResult,
    LabelSlice,
    OverlapGraph,
    build_ehog,
    build_graph,
    check_graph,
    contract,
    graphs_equal,
    hog_from_ehog,
    parse_json,
    recompute_suffix_links,
    serialize,
)
from .mark_hog import (
    ALGORITHMS,
    MarkResult,
    MarkState,
    mark_all_optimal,
    mark_all_per_leaf,
    mark_all_quadratic,
    mark_single_leaf,
)
from .oracle import (
    VerifyReport,
    all_overlaps,
    ehog_node_oracle,
    hog_node_oracle,
    longest_overlap,
    verify_graph,
)
from .overlap_index import LeafLists, compute_leaf_lists
from .pattern_set import PatternSet, load_patterns, partition_contained, validate

__version__ = "0.1.0"

__all__ = [
    "AcTrie",
    "ALGORITHMS",
    "BuildResult",
    "EulerEvent",
    "EulerEvents",
    "EventKind",
    "LabelSlice",
    "LeafLists",
    "MarkResult",
    "MarkState",
    "NodeId",
    "OverlapGraph",
    "PatternSet",
    "VerifyReport",
    "all_overlaps",
    "build_ehog",
    "build_graph",
    "build_trie",
    "check_graph",
    "compute_leaf_lists",
    "contract",
    "ehog_node_oracle",
    "errors",
    "euler_traversal",
    "graphs_equal",
    "hog_from_ehog",
    "hog_node_oracle",
    "load_patterns",
    "longest_overlap",
    "mark_all_optimal",
    "mark_all_per_leaf",
    "mark_all_quadratic",
    "mark_single_leaf",
    "parse_json",
    "partition_contained",
    "recompute_suffix_links",
    "serialize",
    "validate",
    "verify_graph",
]
