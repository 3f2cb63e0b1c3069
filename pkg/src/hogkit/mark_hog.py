"""Marking the internal nodes that carry a longest overlap.

An internal node belongs to the final overlap hierarchy exactly when
it is the longest string that is simultaneously a proper suffix of
some pattern x and a proper prefix of some pattern v, i.e. the deepest
node on v's root path whose leaf list contains x. Three interchangeable
strategies compute the same flags:

``per-leaf``
    Reference scan. For one target leaf at a time, walk its root path
    and remember, per pattern x, the last node whose list contains x;
    those survivors are marked. O(total_length) per leaf.

``quadratic``
    One Euler walk. Each pattern x owns a stack of the currently open
    ancestors whose list contains x; a first visit pushes, a last
    visit pops. Every leaf visit inspects all n stacks and marks each
    exposed top. O(total_length + n^2) overall.

``optimal``
    Same walk and stacks, but leaf visits only touch stacks whose top
    changed since they were last inspected. A pending list (plus a
    per-stack membership flag) records stacks with an unmarked top:
    every push enrolls its stack, and a pop re-enrolls the stack if the
    newly exposed top is still unmarked. Each pending entry is
    consumed exactly once, so the whole run is O(total_length).

One subtlety in the pending bookkeeping: a stack can drain to empty
after being enrolled (its last pop happens before the next leaf visit,
and the pop branch never unenrolls). Leaf processing therefore skips,
and lazily unenrolls, stacks that turn up empty. A skipped stack has
nothing exposed, so nothing is lost, and the next push enrolls it
again.

The operation counter makes cost claims falsifiable: one unit per
event processed, per stack push or pop, per pending-list insertion or
removal, per mark, and (quadratic only) per stack inspected during a
leaf visit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ac_trie import EventKind, event_codes
from .errors import InvariantError
from .overlap_index import LeafLists

ALGORITHMS = ("optimal", "quadratic", "per-leaf")

_FIRST = int(EventKind.FIRST_VISIT)
_LAST = int(EventKind.LAST_VISIT)
_LEAF = int(EventKind.LEAF_VISIT)


@dataclass
class MarkState:
    """Working state of a marking run.

    ``in_hog`` flags membership per node (root and leaves preset),
    ``stacks[x]`` holds the open ancestors whose list contains pattern
    x in increasing depth, ``pending``/``in_pending`` track stacks with
    a fresh unmarked top (optimal variant only).
    """

    in_hog: bytearray
    stacks: list[list[int]]
    pending: list[int] = field(default_factory=list)
    in_pending: bytearray = b""
    op_counter: int = 0

    @classmethod
    def initial(cls, structure) -> "MarkState":
        in_hog = bytearray(len(structure.parent))
        in_hog[0] = 1
        for leaf in structure.leaf_ids:
            in_hog[leaf] = 1
        n = len(structure.leaf_ids)
        return cls(
            in_hog=in_hog,
            stacks=[[] for _ in range(n)],
            in_pending=bytearray(n),
        )


@dataclass
class MarkResult:
    in_hog: bytearray
    op_counter: int
    algorithm: str
    pushes: int = 0
    pops: int = 0
    marks: int = 0
    peak_stack_entries: int = 0


def mark_single_leaf(structure, lists: LeafLists, leaf: int) -> set[int]:
    """Nodes carrying the longest overlap into one target leaf.

    Walks the ancestral path from the root down to ``leaf`` and keeps,
    for every pattern x met in a leaf list along the way, the deepest
    such node. Returns the set of survivors (empty when nothing
    overlaps the leaf).
    """
    parent = structure.parent
    path: list[int] = []
    v = parent[leaf]
    while v:
        path.append(v)
        v = parent[v]
    last: dict[int, int] = {}
    for y in reversed(path):  # root-to-leaf order; deeper entries win
        for x in lists.of(y):
            last[x] = y
    return set(last.values())


def mark_all_per_leaf(structure, lists: LeafLists, events=None, *, check_invariants: bool = False) -> MarkResult:
    """Reference marking: union of :func:`mark_single_leaf` over all leaves."""
    del events, check_invariants  # event stream not used by this variant
    state = MarkState.initial(structure)
    in_hog = state.in_hog
    parent = structure.parent
    ops = marks = 0
    for leaf in structure.leaf_ids:
        path: list[int] = []
        v = parent[leaf]
        while v:
            path.append(v)
            v = parent[v]
        ops += len(path)
        last: dict[int, int] = {}
        for y in reversed(path):
            entries = lists.of(y)
            ops += len(entries)
            for x in entries:
                last[x] = y
        for y in last.values():
            in_hog[y] = 1
            marks += 1
    ops += marks
    return MarkResult(in_hog=in_hog, op_counter=ops, algorithm="per-leaf", marks=marks)


def _active_codes(codes: list[int], start: list[int]) -> list[int]:
    # Keep leaf visits plus first/last visits of nodes with a non-empty
    # list; everything else is a no-op for the stack machinery.
    return [c for c in codes if c & 3 == 2 or start[c >> 2] != start[(c >> 2) + 1]]


def mark_all_quadratic(structure, lists: LeafLists, events, *, check_invariants: bool = False) -> MarkResult:
    """Stack-based marking that rescans every stack at every leaf visit."""
    codes = event_codes(events)
    state = MarkState.initial(structure)
    in_hog = state.in_hog
    stacks = state.stacks
    n = len(stacks)
    start, pool = lists.start, lists.pool

    ops = len(codes)
    pushes = pops = marks = 0
    cur = peak = 0
    walk = codes if check_invariants else _active_codes(codes, start)
    checker = _InvariantChecker(structure, lists) if check_invariants else None
    for code in walk:
        if checker:
            checker.before(code, state)
        kind = code & 3
        if kind == _LEAF:
            ops += n
            for s in stacks:
                if s:
                    in_hog[s[-1]] = 1
                    marks += 1
            continue
        v = code >> 2
        lo, hi = start[v], start[v + 1]
        if kind == _FIRST:
            for x in pool[lo:hi]:
                stacks[x].append(v)
            pushes += hi - lo
            cur += hi - lo
            if cur > peak:
                peak = cur
        else:
            for x in pool[lo:hi]:
                top = stacks[x].pop()
                if top != v:
                    raise InvariantError(
                        f"stack of pattern {x} popped node {top}, expected {v}"
                    )
            pops += hi - lo
            cur -= hi - lo
    ops += pushes + pops + marks
    return MarkResult(
        in_hog=in_hog,
        op_counter=ops,
        algorithm="quadratic",
        pushes=pushes,
        pops=pops,
        marks=marks,
        peak_stack_entries=peak,
    )


def mark_all_optimal(structure, lists: LeafLists, events, *, check_invariants: bool = False) -> MarkResult:
    """Stack-based marking with the pending list; linear total work."""
    codes = event_codes(events)
    state = MarkState.initial(structure)
    in_hog = state.in_hog
    stacks = state.stacks
    in_pending = state.in_pending
    pending = state.pending
    start, pool = lists.start, lists.pool

    ops = len(codes)
    pushes = pops = marks = pend_ops = 0
    cur = peak = 0
    walk = codes if check_invariants else _active_codes(codes, start)
    checker = _InvariantChecker(structure, lists) if check_invariants else None
    for code in walk:
        if checker:
            checker.before(code, state)
        kind = code & 3
        if kind == _LEAF:
            if pending:
                for x in pending:
                    s = stacks[x]
                    if s:  # drained stacks are skipped and lazily unenrolled
                        in_hog[s[-1]] = 1
                        marks += 1
                    in_pending[x] = 0
                pend_ops += len(pending)
                del pending[:]
            continue
        v = code >> 2
        lo, hi = start[v], start[v + 1]
        if kind == _FIRST:
            for x in pool[lo:hi]:
                stacks[x].append(v)
                if not in_pending[x]:
                    in_pending[x] = 1
                    pending.append(x)
                    pend_ops += 1
            pushes += hi - lo
            cur += hi - lo
            if cur > peak:
                peak = cur
        else:
            for x in pool[lo:hi]:
                s = stacks[x]
                top = s.pop()
                if top != v:
                    raise InvariantError(
                        f"stack of pattern {x} popped node {top}, expected {v}"
                    )
                if s and not in_hog[s[-1]] and not in_pending[x]:
                    in_pending[x] = 1
                    pending.append(x)
                    pend_ops += 1
            pops += hi - lo
            cur -= hi - lo
    ops += pushes + pops + marks + pend_ops
    return MarkResult(
        in_hog=in_hog,
        op_counter=ops,
        algorithm="optimal",
        pushes=pushes,
        pops=pops,
        marks=marks,
        peak_stack_entries=peak,
    )


MARKERS = {
    "optimal": mark_all_optimal,
    "quadratic": mark_all_quadratic,
    "per-leaf": mark_all_per_leaf,
}


class _InvariantChecker:
    """Validates stack contents against the open root path (slow)."""

    def __init__(self, structure, lists: LeafLists):
        self.lists = lists
        self.n = len(structure.leaf_ids)
        self.open_path: list[int] = []
        self.membership: dict[int, set[int]] = {}

    def before(self, code: int, state: MarkState) -> None:
        expected: list[list[int]] = [[] for _ in range(self.n)]
        for v in self.open_path:
            for x in self.membership[v]:
                expected[x].append(v)
        for x in range(self.n):
            if state.stacks[x] != expected[x]:
                raise InvariantError(
                    f"stack of pattern {x} is {state.stacks[x]}, expected {expected[x]}"
                )
        kind = code & 3
        v = code >> 2
        if kind == _FIRST:
            self.open_path.append(v)
            self.membership[v] = set(self.lists.of(v))
        elif kind == _LAST:
            popped = self.open_path.pop()
            if popped != v:
                raise InvariantError(f"open path closed {popped}, expected {v}")
            del self.membership[popped]
