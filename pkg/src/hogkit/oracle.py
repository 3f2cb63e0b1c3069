"""Brute-force ground truth for overlaps and graph verification.

Everything here works by direct string comparison on the raw patterns
and deliberately shares no code with the construction pipeline. Cost
is O(n^2 * L^2) in the worst case, so verification refuses inputs past
a size guard (default total length 100000, overridable through the
HOGKIT_SIZE_GUARD environment variable or per call).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .errors import SizeGuardError
from .pattern_set import PatternSet

DEFAULT_SIZE_GUARD = 100_000
SIZE_GUARD_ENV = "HOGKIT_SIZE_GUARD"


def all_overlaps(p: bytes, q: bytes) -> set[int]:
    """Lengths l with suffix(p, l) == prefix(q, l), proper on both sides."""
    out = set()
    for l in range(1, min(len(p), len(q))):
        if p[-l:] == q[:l]:
            out.add(l)
    return out


def longest_overlap(p: bytes, q: bytes) -> int:
    """Length of the longest overlap of the ordered pair, 0 if none."""
    lengths = all_overlaps(p, q)
    return max(lengths) if lengths else 0


def hog_node_oracle(ps: PatternSet) -> set[bytes]:
    """Expected HOG node strings: patterns, longest overlaps, empty string."""
    nodes = {b""}
    nodes.update(ps.patterns)
    for p in ps.patterns:
        for q in ps.patterns:
            l = longest_overlap(p, q)
            if l:
                nodes.add(q[:l])
    return nodes


def ehog_node_oracle(ps: PatternSet) -> set[bytes]:
    """Expected extended-graph node strings: every overlap, not just longest."""
    nodes = {b""}
    nodes.update(ps.patterns)
    for p in ps.patterns:
        for q in ps.patterns:
            for l in all_overlaps(p, q):
                nodes.add(q[:l])
    return nodes


def trie_node_oracle(ps: PatternSet) -> set[bytes]:
    """Expected trie node strings: every prefix of every pattern."""
    nodes = {b""}
    for p in ps.patterns:
        for k in range(1, len(p) + 1):
            nodes.add(p[:k])
    return nodes


_NODE_ORACLES = {
    "hog": hog_node_oracle,
    "ehog": ehog_node_oracle,
    "trie": trie_node_oracle,
}


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: list[str] = field(default_factory=list)


@dataclass
class VerifyReport:
    kind: str
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            lines.append(f"[{status}] {self.kind}: {c.name}")
            lines.extend(f"    {d}" for d in c.details)
        lines.append(
            f"{self.kind}: all checks pass" if self.ok else f"{self.kind}: CHECKS FAILED"
        )
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "details": c.details}
                for c in self.checks
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _guard_limit(override: int | None) -> int:
    if override is not None:
        return override
    env = os.environ.get(SIZE_GUARD_ENV)
    return int(env) if env else DEFAULT_SIZE_GUARD


def _show(s: bytes) -> str:
    return s.decode("latin-1") if s else "(empty)"


def verify_graph(graph, ps: PatternSet, *, size_guard: int | None = None) -> VerifyReport:
    """Check a built graph against the brute-force definitions.

    Compares the node string set with the matching oracle, then checks
    per node that the parent is the longest proper prefix present in
    the graph, the suffix link the longest proper suffix, the path
    labels spell the node string, and the leaves map one-to-one onto
    the patterns. Check failures become report entries; only the size
    guard raises.
    """
    limit = _guard_limit(size_guard)
    if ps.total_length > limit:
        raise SizeGuardError(
            f"total pattern length {ps.total_length} exceeds verification guard {limit}"
            f" (raise it with {SIZE_GUARD_ENV} or size_guard=...)"
        )

    checks: list[CheckResult] = []
    strings = [graph.node_string(v) for v in range(graph.num_nodes)]
    present = set(strings)

    expected = _NODE_ORACLES[graph.kind](ps)
    missing = sorted(expected - present)
    extra = sorted(present - expected)
    details = [f"missing node: {_show(s)}" for s in missing[:10]]
    details += [f"unexpected node: {_show(s)}" for s in extra[:10]]
    checks.append(CheckResult("node set matches oracle", not details, details))
    if len(present) != graph.num_nodes:
        checks.append(
            CheckResult("node strings unique", False, ["duplicate node strings"])
        )

    e1_bad: list[str] = []
    for v in range(1, graph.num_nodes):
        s = strings[v]
        want = b""
        for k in range(len(s) - 1, 0, -1):
            if s[:k] in present:
                want = s[:k]
                break
        if strings[graph.parent[v]] != want:
            e1_bad.append(
                f"parent of {_show(s)} is {_show(strings[graph.parent[v]])},"
                f" expected {_show(want)}"
            )
    checks.append(CheckResult("tree edges are longest proper prefixes", not e1_bad, e1_bad[:10]))

    e2_bad: list[str] = []
    for v in range(1, graph.num_nodes):
        s = strings[v]
        want = b""
        for k in range(len(s) - 1, 0, -1):
            if s[len(s) - k :] in present:
                want = s[len(s) - k :]
                break
        if strings[graph.suffix_link[v]] != want:
            e2_bad.append(
                f"suffix link of {_show(s)} is {_show(strings[graph.suffix_link[v]])},"
                f" expected {_show(want)}"
            )
    checks.append(CheckResult("suffix links are longest proper suffixes", not e2_bad, e2_bad[:10]))

    spell_bad: list[str] = []
    for v in range(1, graph.num_nodes):
        if strings[graph.parent[v]] + graph.label_bytes(v) != strings[v]:
            spell_bad.append(f"labels along the path to {_show(strings[v])} do not spell it")
    checks.append(CheckResult("path labels spell node strings", not spell_bad, spell_bad[:10]))

    leaf_bad: list[str] = []
    leaf_strings = {strings[v] for v in graph.leaf_ids}
    if leaf_strings != set(ps.patterns):
        leaf_bad.append("leaf strings differ from the pattern set")
    for idx, leaf in enumerate(graph.leaf_ids):
        if graph.pattern_tag[leaf] != idx:
            leaf_bad.append(f"leaf of pattern {idx} carries tag {graph.pattern_tag[leaf]}")
    checks.append(CheckResult("leaves are exactly the patterns", not leaf_bad, leaf_bad[:10]))

    return VerifyReport(kind=graph.kind, checks=checks)
