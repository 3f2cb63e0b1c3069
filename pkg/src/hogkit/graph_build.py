"""Contracted overlap graphs: the final HOG, the extended variant, and
serialization.

A contracted graph keeps the root, all leaves, and a chosen subset of
internal trie nodes; every dropped internal node is merged into its
nearest kept ancestor, and the incoming edge label widens accordingly.
Edge labels are never materialized: each one is a slice
``patterns[pattern][start:end]`` into an original pattern, so a merge
is an O(1) offset change and total memory stays linear in the input.

Kept-node selection differs per kind: the extended graph keeps every
internal node lying on some leaf's suffix-link path (every overlap),
the HOG keeps only the nodes flagged by a marking run (longest
overlaps), and ``kind="trie"`` keeps everything. Suffix links of the
contracted graph point to the first kept node on the base structure's
suffix-link chain, resolved once per base node via memoization.

The marking pipeline runs on either base: a trie, or an already
contracted extended graph. Both expose the same arrays, so
:func:`contract` and friends do not care which one they are given.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .ac_trie import AcTrie, build_trie, euler_traversal, gc_paused
from .errors import FormatError, InvariantError
from .mark_hog import MARKERS, MarkResult
from .overlap_index import compute_leaf_lists
from .pattern_set import PatternSet

GRAPH_KINDS = ("trie", "ehog", "hog")


@dataclass(frozen=True)
class LabelSlice:
    """Edge label as a window into one of the input patterns."""

    pattern: int
    start: int
    end: int


@dataclass
class OverlapGraph:
    """Contracted prefix tree with suffix links.

    Parallel arrays per node: ``parent``, the label slice
    (``label_pat``, ``label_start``, ``label_end``; ``label_end`` is
    also the length of the node's string), ordered ``children``,
    ``suffix_link`` (longest proper suffix present in the graph) and
    ``pattern_tag`` (pattern index on leaves). Node 0 is the empty
    root. Immutable once built.
    """

    kind: str
    patterns: tuple[bytes, ...]
    parent: list[int]
    label_pat: list[int]
    label_start: list[int]
    label_end: list[int]
    children: list[list[int]]
    suffix_link: list[int]
    pattern_tag: list[int]
    leaf_ids: list[int]

    @property
    def num_nodes(self) -> int:
        return len(self.parent)

    @property
    def n(self) -> int:
        return len(self.leaf_ids)

    def is_leaf(self, v: int) -> bool:
        return self.pattern_tag[v] >= 0

    def node_string(self, v: int) -> bytes:
        if v == 0:
            return b""
        return self.patterns[self.label_pat[v]][: self.label_end[v]]

    def label_bytes(self, v: int) -> bytes:
        return self.patterns[self.label_pat[v]][self.label_start[v] : self.label_end[v]]

    def label_slice(self, v: int) -> LabelSlice:
        return LabelSlice(self.label_pat[v], self.label_start[v], self.label_end[v])

    def node_strings(self) -> set[bytes]:
        return {self.node_string(v) for v in range(self.num_nodes)}

    def internal_strings(self) -> set[bytes]:
        return {
            self.node_string(v)
            for v in range(1, self.num_nodes)
            if self.pattern_tag[v] < 0
        }


def _tree_arrays(base):
    if isinstance(base, AcTrie):
        return base.parent, base.depth, base.witness, base.pattern_tag
    return base.parent, base.label_end, base.label_pat, base.pattern_tag


def contract(base, in_hog, kind: str = "hog") -> OverlapGraph:
    """Merge every unflagged internal node of ``base`` into its parent.

    ``base`` is a trie or a contracted graph; ``in_hog`` flags the
    nodes to keep (root and all leaves must be flagged). Children
    re-attach to their nearest kept ancestor and edge labels widen by
    moving the slice start up to that ancestor's depth. Runs in one
    pass over the nodes; sibling order is inherited from the base,
    whose node ids ascend lexicographically, and the strict label
    ordering of re-attached siblings is asserted rather than assumed.
    """
    parent_b, end_b, wit_b, tag_b = _tree_arrays(base)
    count = len(parent_b)
    if not in_hog[0]:
        raise InvariantError("contraction requires the root to be kept")
    for leaf in base.leaf_ids:
        if not in_hog[leaf]:
            raise InvariantError(f"contraction requires leaf node {leaf} to be kept")

    new_id = [-1] * count
    nearest = [0] * count  # nearest kept ancestor-or-self
    new_id[0] = 0
    parent = [0]
    label_pat = [-1]
    label_start = [0]
    label_end = [0]
    pattern_tag = [-1]
    children: list[list[int]] = [[]]
    m = 1
    for v in range(1, count):
        pv = parent_b[v]
        if in_hog[v]:
            new_id[v] = m
            nearest[v] = v
            anc = nearest[pv]
            pa = new_id[anc]
            parent.append(pa)
            label_pat.append(wit_b[v])
            label_start.append(end_b[anc])
            label_end.append(end_b[v])
            pattern_tag.append(tag_b[v])
            children.append([])
            children[pa].append(m)
            m += 1
        else:
            nearest[v] = nearest[pv]

    # Sibling labels must ascend strictly in byte order. Merged
    # siblings can share a first byte (drop 'a' under the root and
    # both "ab..." and "ac..." re-attach there), so the comparison is
    # on whole labels, which sorted insertion orders for free.
    patterns = base.patterns
    for v in range(m):
        kids = children[v]
        if len(kids) > 1:
            labels = [
                patterns[label_pat[c]][label_start[c] : label_end[c]] for c in kids
            ]
            if any(a >= b for a, b in zip(labels, labels[1:])):
                raise InvariantError(
                    f"children of contracted node {v} are not in ascending label order"
                )

    graph = OverlapGraph(
        kind=kind,
        patterns=patterns,
        parent=parent,
        label_pat=label_pat,
        label_start=label_start,
        label_end=label_end,
        children=children,
        suffix_link=[0] * m,
        pattern_tag=pattern_tag,
        leaf_ids=[new_id[leaf] for leaf in base.leaf_ids],
    )
    return recompute_suffix_links(graph, base, new_id)


def recompute_suffix_links(graph: OverlapGraph, base, new_id: list[int]) -> OverlapGraph:
    """Point each kept node at the first kept node on its base suffix chain.

    ``new_id`` maps base node ids to graph ids (-1 for dropped nodes).
    Chains are resolved with memoization so every base node is walked
    at most once across the whole call, keeping the rebuild linear.
    Mutates ``graph.suffix_link`` in place and returns the graph.
    """
    slink_b = base.suffix_link
    suffix_link = graph.suffix_link
    cache: dict[int, int] = {}
    for v in range(1, len(slink_b)):
        if new_id[v] < 0:
            continue
        w = slink_b[v]
        path: list[int] = []
        while True:
            if new_id[w] >= 0:
                kept = w
                break
            hit = cache.get(w)
            if hit is not None:
                kept = hit
                break
            path.append(w)
            w = slink_b[w]
        for u in path:
            cache[u] = kept
        suffix_link[new_id[v]] = new_id[kept]
    return graph


def build_ehog(trie: AcTrie) -> OverlapGraph:
    """Contract the trie down to the internal nodes that are overlaps.

    An internal node is an overlap of some ordered pattern pair exactly
    when it lies on the suffix-link path of some leaf, so one walk per
    leaf (with early exit on already-visited nodes) finds the keep set.
    """
    keep = bytearray(trie.num_nodes)
    keep[0] = 1
    slink = trie.suffix_link
    tags = trie.pattern_tag
    for leaf in trie.leaf_ids:
        keep[leaf] = 1
        w = slink[leaf]
        while w and not keep[w]:
            if tags[w] >= 0:
                raise InvariantError(
                    f"suffix path through leaf node {w}; input is not factor-free"
                )
            keep[w] = 1
            w = slink[w]
    return contract(trie, keep, kind="ehog")


def hog_from_ehog(ehog: OverlapGraph, algorithm: str = "optimal") -> OverlapGraph:
    """Run the marking pipeline with the extended graph as the base.

    Produces a HOG identical (as a labeled graph) to contracting the
    trie directly; the extended graph is just a smaller base to walk.
    """
    lists = compute_leaf_lists(ehog)
    events = euler_traversal(ehog)
    result = MARKERS[algorithm](ehog, lists, events)
    return contract(ehog, result.in_hog, kind="hog")


@dataclass
class BuildResult:
    """A built graph plus the instrumentation the CLI reports."""

    graph: OverlapGraph
    trie_nodes: int
    list_entries: int
    mark: Optional[MarkResult] = None
    ehog_nodes: Optional[int] = None


def build_graph(
    ps: PatternSet,
    kind: str = "hog",
    algorithm: str = "optimal",
    via_ehog: bool = False,
) -> BuildResult:
    """One-call pipeline from a validated pattern set to a graph."""
    if kind not in GRAPH_KINDS:
        raise ValueError(f"unknown graph kind {kind!r}, expected one of {GRAPH_KINDS}")
    if algorithm not in MARKERS:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {tuple(MARKERS)}")
    with gc_paused():
        trie = build_trie(ps)
        trie_nodes = trie.num_nodes
        if kind == "trie":
            graph = contract(trie, bytearray(b"\x01") * trie_nodes, kind="trie")
            return BuildResult(graph=graph, trie_nodes=trie_nodes, list_entries=0)
        if kind == "ehog":
            graph = build_ehog(trie)
            return BuildResult(graph=graph, trie_nodes=trie_nodes, list_entries=0)
        base = build_ehog(trie) if via_ehog else trie
        lists = compute_leaf_lists(base)
        events = euler_traversal(base)
        result = MARKERS[algorithm](base, lists, events)
        graph = contract(base, result.in_hog, kind="hog")
        return BuildResult(
            graph=graph,
            trie_nodes=trie_nodes,
            list_entries=lists.total_entries,
            mark=result,
            ehog_nodes=base.num_nodes if via_ehog else None,
        )


def check_graph(graph: OverlapGraph) -> None:
    """Linear structural self-check; raises :class:`InvariantError`.

    Verifies label-slice chaining (which, by induction from the root,
    makes every root path spell the node's string), leaf/pattern
    bijection, strictly ascending sibling bytes, and that every suffix
    link points at a strictly shorter node whose string is a proper
    suffix. Needs no oracle, so it runs at any scale.
    """
    patterns = graph.patterns
    parent = graph.parent
    ls, le, lp = graph.label_start, graph.label_end, graph.label_pat
    if parent[0] != 0 or le[0] != 0 or graph.suffix_link[0] != 0:
        raise InvariantError("malformed root node")
    for v in range(1, graph.num_nodes):
        if not 0 <= ls[v] < le[v] <= len(patterns[lp[v]]):
            raise InvariantError(f"node {v} has a bad label slice")
        if ls[v] != le[parent[v]]:
            raise InvariantError(f"node {v} label does not chain onto its parent")
        w = graph.suffix_link[v]
        if le[w] >= le[v]:
            raise InvariantError(f"suffix link of node {v} is not shorter")
        if le[w] and patterns[lp[w]][: le[w]] != patterns[lp[v]][le[v] - le[w] : le[v]]:
            raise InvariantError(f"suffix link of node {v} is not a suffix")
    seen = set()
    for idx, leaf in enumerate(graph.leaf_ids):
        if graph.pattern_tag[leaf] != idx or graph.node_string(leaf) != patterns[idx]:
            raise InvariantError(f"leaf of pattern {idx} does not spell the pattern")
        if graph.children[leaf]:
            raise InvariantError(f"leaf node {leaf} has children")
        seen.add(leaf)
    for v in range(1, graph.num_nodes):
        if graph.pattern_tag[v] >= 0 and v not in seen:
            raise InvariantError(f"stray leaf tag on node {v}")
    for v in range(graph.num_nodes):
        kids = graph.children[v]
        for a, b in zip(kids, kids[1:]):
            if patterns[lp[a]][ls[a] : le[a]] >= patterns[lp[b]][ls[b] : le[b]]:
                raise InvariantError(f"children of node {v} not in ascending label order")


# ---------------------------------------------------------------------------
# Serialization


def _canonical_order(graph: OverlapGraph) -> list[int]:
    # Breadth-first with children in ascending byte order; this is the
    # canonical node numbering used by every serializer, so two graphs
    # built through different routes serialize identically.
    order = [0]
    pos = 0
    children = graph.children
    while pos < len(order):
        order.extend(children[order[pos]])
        pos += 1
    return order


def _label_text(graph: OverlapGraph, v: int) -> str:
    return graph.label_bytes(v).decode("latin-1")


def to_json_document(graph: OverlapGraph) -> dict:
    """Plain-dict form of the graph with canonical BFS node ids."""
    order = _canonical_order(graph)
    new = [0] * graph.num_nodes
    for i, v in enumerate(order):
        new[v] = i
    nodes = []
    tree_edges = []
    suffix_links = []
    for i, v in enumerate(order):
        tag = graph.pattern_tag[v]
        nodes.append(
            {
                "id": i,
                "string_len": graph.label_end[v],
                "is_leaf": tag >= 0,
                "pattern": tag if tag >= 0 else None,
            }
        )
        if i:
            tree_edges.append(
                {
                    "from": new[graph.parent[v]],
                    "to": i,
                    "label": _label_text(graph, v),
                }
            )
            suffix_links.append({"from": i, "to": new[graph.suffix_link[v]]})
    return {
        "kind": graph.kind,
        "nodes": nodes,
        "tree_edges": tree_edges,
        "suffix_links": suffix_links,
    }


def _dot_escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in '"\\':
            out.append("\\" + ch)
        elif 32 <= ord(ch) < 127:
            out.append(ch)
        else:
            out.append(f"\\\\x{ord(ch):02x}")
    return "".join(out)


def to_dot(graph: OverlapGraph) -> str:
    """GraphViz rendering: solid labeled tree edges, dashed suffix links."""
    order = _canonical_order(graph)
    new = [0] * graph.num_nodes
    for i, v in enumerate(order):
        new[v] = i
    lines = [f"digraph {graph.kind} {{", "  node [shape=circle];"]
    for i, v in enumerate(order):
        if v == 0:
            lines.append('  0 [label="eps"];')
            continue
        shape = ' shape=doublecircle' if graph.pattern_tag[v] >= 0 else ""
        text = _dot_escape(graph.node_string(v).decode("latin-1"))
        lines.append(f'  {i} [label="{text}"{shape}];')
    for i, v in enumerate(order):
        if i:
            lab = _dot_escape(_label_text(graph, v))
            lines.append(f'  {new[graph.parent[v]]} -> {i} [label="{lab}"];')
    for i, v in enumerate(order):
        if i:
            lines.append(f"  {i} -> {new[graph.suffix_link[v]]} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize(graph: OverlapGraph, fmt: str = "json") -> bytes:
    """Stable byte serialization (``json`` or ``dot``)."""
    if fmt == "json":
        doc = to_json_document(graph)
        return (json.dumps(doc, indent=2) + "\n").encode("ascii")
    if fmt == "dot":
        return to_dot(graph).encode("ascii", errors="backslashreplace")
    raise ValueError(f"unknown serialization format {fmt!r}")


def parse_json(data: bytes | str) -> OverlapGraph:
    """Rebuild an :class:`OverlapGraph` from its JSON serialization."""
    try:
        doc = json.loads(data)
        kind = doc["kind"]
        raw_nodes = doc["nodes"]
        raw_edges = doc["tree_edges"]
        raw_links = doc["suffix_links"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise FormatError(f"bad graph document: {exc}") from exc
    count = len(raw_nodes)
    if count == 0 or raw_nodes[0]["id"] != 0:
        raise FormatError("graph document must contain node 0 as the root")

    parent = [0] * count
    labels: list[bytes] = [b""] * count
    children: list[list[int]] = [[] for _ in range(count)]
    for e in raw_edges:
        a, b = e["from"], e["to"]
        parent[b] = a
        labels[b] = e["label"].encode("latin-1")
        children[a].append(b)
    strings: list[bytes] = [b""] * count
    for node in raw_nodes[1:]:
        i = node["id"]
        strings[i] = strings[parent[i]] + labels[i]
        if len(strings[i]) != node["string_len"]:
            raise FormatError(f"node {i}: string_len does not match its path labels")

    tags = [-1] * count
    by_pattern: dict[int, int] = {}
    for node in raw_nodes:
        if node["is_leaf"]:
            if node["pattern"] is None:
                raise FormatError(f"leaf node {node['id']} has no pattern index")
            tags[node["id"]] = node["pattern"]
            by_pattern[node["pattern"]] = node["id"]
    if sorted(by_pattern) != list(range(len(by_pattern))) or not by_pattern:
        raise FormatError("leaf pattern indices are not dense")
    patterns = tuple(strings[by_pattern[i]] for i in range(len(by_pattern)))

    witness = [-1] * count
    for i in range(count - 1, 0, -1):
        if tags[i] >= 0:
            witness[i] = tags[i]
        elif children[i]:
            witness[i] = witness[children[i][0]]
        else:
            raise FormatError(f"internal node {i} has no children")
    suffix_link = [0] * count
    for link in raw_links:
        suffix_link[link["from"]] = link["to"]

    graph = OverlapGraph(
        kind=kind,
        patterns=patterns,
        parent=parent,
        label_pat=witness,
        label_start=[len(strings[parent[i]]) if i else 0 for i in range(count)],
        label_end=[len(strings[i]) for i in range(count)],
        children=children,
        suffix_link=suffix_link,
        pattern_tag=tags,
        leaf_ids=[by_pattern[i] for i in range(len(by_pattern))],
    )
    check_graph(graph)
    return graph


def graphs_equal(a: OverlapGraph, b: OverlapGraph) -> bool:
    """Structural equality via canonical serialization."""
    return serialize(a) == serialize(b)
