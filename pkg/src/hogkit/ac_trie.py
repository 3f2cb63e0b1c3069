"""Aho-Corasick trie over a pattern set, plus its Euler traversal.

The trie is stored as a flat node arena: parallel arrays indexed by a
dense integer ``NodeId`` (0 is the root), with one global hash map
``(node << 8) | byte -> child`` for child lookup. Nodes are the
distinct prefixes of the patterns; with a factor-free input the leaves
are exactly the patterns.

Construction inserts patterns in lexicographic order. Sorted insertion
means each new pattern extends the current rightmost path at the point
given by its longest common prefix with the previous pattern, so whole
suffix chains are appended with bulk operations instead of per-byte
walks. It also makes every child list ascend by edge byte for free, and
it lets the Euler (first/last/leaf visit) event stream be rebuilt from
the recorded chain boundaries without touching child maps at all.

Suffix links follow the classical rule: the link of a node is the
longest proper suffix of its string that is itself a node. They are
computed in one pass over the nodes in non-decreasing depth order via
the usual fall-back recurrence through the parent's link. Everything
here is a constant number of passes over the input bytes.
"""

from __future__ import annotations

import gc
from contextlib import contextmanager
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import InvariantError
from .pattern_set import PatternSet

NodeId = int
ROOT: NodeId = 0


class EventKind(IntEnum):
    FIRST_VISIT = 0
    LAST_VISIT = 1
    LEAF_VISIT = 2


class EulerEvent(NamedTuple):
    kind: EventKind
    node: NodeId


class EulerEvents(Sequence):
    """Packed Euler event sequence.

    Events are stored as ``(node << 2) | kind`` integers in ``codes``;
    indexing and iteration decode to :class:`EulerEvent`. The packed
    form exists so that marking a million-node trie does not allocate a
    million tuples; consumers that care iterate ``codes`` directly.
    """

    __slots__ = ("codes",)

    def __init__(self, codes: list[int]):
        self.codes = codes

    def __len__(self) -> int:
        return len(self.codes)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return EulerEvents(self.codes[index])
        code = self.codes[index]
        return EulerEvent(EventKind(code & 3), code >> 2)

    def __iter__(self) -> Iterator[EulerEvent]:
        for code in self.codes:
            yield EulerEvent(EventKind(code & 3), code >> 2)

    def __repr__(self) -> str:
        return f"EulerEvents({len(self.codes)} events)"


@contextmanager
def gc_paused():
    """Pause the cyclic collector during bulk arena construction.

    Building a million-node arena allocates millions of tracked
    objects; letting generational collections rescan them mid-build
    costs more than the build itself. Nothing cyclic is created here,
    so pausing is safe. No-op when the collector is already off.
    """
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def _lcp(a: bytes, b: bytes) -> int:
    """Length of the longest common prefix of two byte strings."""
    n = min(len(a), len(b))
    if n == 0 or a[0] != b[0]:
        return 0
    lo, hi = 1, n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if a[:mid] == b[:mid]:
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass
class AcTrie:
    """Node arena for the prefix trie with suffix links.

    Per-node arrays: ``parent``, ``depth`` (string length),
    ``byte_label`` (incoming edge byte), ``suffix_link``,
    ``witness`` (index of a pattern having the node's string as prefix)
    and ``pattern_tag`` (pattern index on leaves, -1 elsewhere).
    ``leaf_ids[i]`` is the leaf node of pattern ``i``. The structure is
    immutable after :func:`build_trie` and safe to share.
    """

    patterns: tuple[bytes, ...]
    parent: list[int]
    depth: list[int]
    byte_label: bytearray
    suffix_link: list[int]
    witness: list[int]
    pattern_tag: list[int]
    leaf_ids: list[int]
    children: dict[int, int]
    # Sorted-insertion bookkeeping, consumed by the Euler generator:
    # pattern indices in lexicographic order and, per sorted position,
    # the first node id of the freshly created chain and the lcp with
    # the previous pattern.
    sorted_order: list[int]
    chain_base: list[int]
    chain_lcp: list[int]

    @property
    def num_nodes(self) -> int:
        return len(self.parent)

    @property
    def n(self) -> int:
        return len(self.leaf_ids)

    def is_leaf(self, v: NodeId) -> bool:
        return self.pattern_tag[v] >= 0

    def node_string(self, v: NodeId) -> bytes:
        if v == ROOT:
            return b""
        return self.patterns[self.witness[v]][: self.depth[v]]

    def lookup(self, s: bytes) -> NodeId | None:
        """Node whose string equals ``s``, or None."""
        v = ROOT
        get = self.children.get
        for b in s:
            nxt = get((v << 8) | b)
            if nxt is None:
                return None
            v = nxt
        return v

    def children_of(self, v: NodeId) -> list[tuple[int, NodeId]]:
        """(byte, child) pairs in ascending byte order.

        Probes all 256 byte keys; meant for inspection and tests, not
        for hot loops.
        """
        base = v << 8
        get = self.children.get
        out = []
        for b in range(256):
            w = get(base | b)
            if w is not None:
                out.append((b, w))
        return out


def build_trie(ps: PatternSet) -> AcTrie:
    """Build the trie of all pattern prefixes with suffix links.

    Work and memory are bounded by a constant times the total input
    length. Raises :class:`InvariantError` if the set turns out not to
    be factor-free in a way visible here (one pattern a prefix of
    another), which means validation was skipped or bypassed.
    """
    with gc_paused():
        return _build_trie(ps)


def _build_trie(ps: PatternSet) -> AcTrie:
    patterns = ps.patterns
    n = len(patterns)
    order = sorted(range(n), key=patterns.__getitem__)

    parent: list[int] = [ROOT]
    depth: list[int] = [0]
    byte_label = bytearray(1)
    witness: list[int] = [-1]
    pattern_tag: list[int] = [-1]
    children: dict[int, int] = {}
    leaf_ids: list[int] = [-1] * n
    chain_base: list[int] = []
    chain_lcp: list[int] = []

    stack = [ROOT]  # stack[d] = node at depth d on the rightmost path
    prev = b""
    for pi in order:
        p = patterns[pi]
        m = len(p)
        l = _lcp(prev, p)
        if l == m:
            raise InvariantError(f"duplicate pattern {p[:40]!r} reached the trie")
        if prev and l == len(prev):
            raise InvariantError(
                f"pattern {prev[:40]!r} is a prefix of {p[:40]!r}; input is not factor-free"
            )
        base = len(parent)
        parent.append(stack[l])
        if m - l > 1:
            parent.extend(range(base, base + m - l - 1))
        nxt = len(parent)
        depth.extend(range(l + 1, m + 1))
        byte_label.extend(p[l:])
        witness.extend([pi] * (m - l))
        pattern_tag.extend([-1] * (m - l - 1))
        pattern_tag.append(pi)
        del stack[l + 1 :]
        stack.extend(range(base, nxt))
        leaf_ids[pi] = nxt - 1
        chain_base.append(base)
        chain_lcp.append(l)
        prev = p

    # Sorted insertion never looks a child up, so the lookup map is
    # built once in bulk instead of per pattern.
    count = len(parent)
    keys = [(parent[v] << 8) | byte_label[v] for v in range(1, count)]
    children.update(zip(keys, range(1, count)))

    suffix_link = _suffix_links(parent, depth, byte_label, children)
    return AcTrie(
        patterns=patterns,
        parent=parent,
        depth=depth,
        byte_label=byte_label,
        suffix_link=suffix_link,
        witness=witness,
        pattern_tag=pattern_tag,
        leaf_ids=leaf_ids,
        children=children,
        sorted_order=order,
        chain_base=chain_base,
        chain_lcp=chain_lcp,
    )


def _suffix_links(
    parent: list[int], depth: list[int], byte_label: bytearray, children: dict[int, int]
) -> list[int]:
    # Nodes must be processed in non-decreasing depth so that every
    # link read on the fall-back chain is already final; arena ids are
    # chain-ordered, not depth-ordered, hence the argsort.
    count = len(parent)
    slink = [ROOT] * count
    if count <= 1:
        return slink
    by_depth = np.argsort(
        np.fromiter(depth, dtype=np.int64, count=count), kind="stable"
    ).tolist()
    get = children.get
    for v in by_depth[1:]:
        pv = parent[v]
        if pv:
            f = slink[pv]
            c = byte_label[v]
            w = get((f << 8) | c)
            while w is None and f:
                f = slink[f]
                w = get((f << 8) | c)
            if w is not None:
                slink[v] = w
        # depth-1 nodes keep the root link
    return slink


def euler_traversal(structure) -> EulerEvents:
    """Deterministic Euler walk: children in ascending byte order.

    Internal nodes emit FIRST_VISIT before their subtree and LAST_VISIT
    after it; each leaf emits a single LEAF_VISIT. Accepts an
    :class:`AcTrie` (fast chain-based generation) or any contracted
    graph exposing ordered ``children`` lists and ``pattern_tag``. Uses
    explicit worklists throughout, so recursion depth never depends on
    pattern length.
    """
    if isinstance(structure, AcTrie):
        return EulerEvents(_euler_codes_trie(structure))
    return EulerEvents(_euler_codes_generic(structure.children, structure.pattern_tag))


_FIRST = int(EventKind.FIRST_VISIT)
_LAST = int(EventKind.LAST_VISIT)
_LEAF = int(EventKind.LEAF_VISIT)


def _euler_codes_trie(trie: AcTrie) -> list[int]:
    # Replays the sorted insertion: between consecutive patterns, close
    # the part of the rightmost path below their common prefix, then
    # open the chain that insertion created for the new pattern.
    codes = [ROOT << 2 | _FIRST]
    stack = [ROOT]
    leaf_ids = trie.leaf_ids
    for pos, pi in enumerate(trie.sorted_order):
        l = trie.chain_lcp[pos]
        if len(stack) - 1 > l:
            seg = stack[l + 1 :]
            del stack[l + 1 :]
            codes.extend((v << 2) | _LAST for v in reversed(seg))
        base = trie.chain_base[pos]
        leaf = leaf_ids[pi]
        if leaf > base:
            codes.extend(range(base << 2, leaf << 2, 4))  # FIRST_VISIT == 0
            stack.extend(range(base, leaf))
        codes.append((leaf << 2) | _LEAF)
    codes.extend((v << 2) | _LAST for v in reversed(stack))
    return codes


def _euler_codes_generic(children: list[list[int]], pattern_tag: list[int]) -> list[int]:
    codes = [ROOT << 2 | _FIRST]
    node_stack = [ROOT]
    iter_stack = [iter(children[ROOT])]
    while iter_stack:
        c = next(iter_stack[-1], -1)
        if c < 0:
            iter_stack.pop()
            codes.append((node_stack.pop() << 2) | _LAST)
        elif pattern_tag[c] >= 0:
            codes.append((c << 2) | _LEAF)
        else:
            codes.append(c << 2)
            node_stack.append(c)
            iter_stack.append(iter(children[c]))
    return codes


def event_codes(events) -> list[int]:
    """Packed codes for an event sequence in either representation."""
    if isinstance(events, EulerEvents):
        return events.codes
    return [(node << 2) | int(kind) for kind, node in events]
