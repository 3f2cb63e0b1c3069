"""Per-node lists of the leaves that have the node's string as suffix.

For every internal node v, L_v collects the pattern indices x such
that v's string is a proper suffix of pattern x. The lists are filled
by walking each leaf's suffix-link path up to (but excluding) the
root, so the total number of entries is at most total_length - n.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .errors import InvariantError


@dataclass
class LeafLists:
    """Flat pool of list entries, partitioned by node (CSR layout).

    ``pool[start[v]:start[v+1]]`` holds L_v as pattern indices in the
    order the leaves were processed (ascending pattern index). The root
    keeps an empty slice by construction.
    """

    start: list[int]
    pool: list[int]

    @property
    def total_entries(self) -> int:
        return len(self.pool)

    def of(self, v: int) -> list[int]:
        return self.pool[self.start[v] : self.start[v + 1]]

    def size(self, v: int) -> int:
        return self.start[v + 1] - self.start[v]


def compute_leaf_lists(structure) -> LeafLists:
    """Fill L_v for all internal nodes of a trie or contracted graph.

    Walks the suffix-link chain of every leaf once, appending the
    leaf's pattern index to each visited node. Every visited node must
    be internal; hitting a leaf means the pattern set was not
    factor-free and raises :class:`InvariantError`.
    """
    slink = structure.suffix_link
    tags = structure.pattern_tag
    num_nodes = len(slink)

    seq_nodes: list[int] = []
    seq_pats: list[int] = []
    for x, leaf in enumerate(structure.leaf_ids):
        w = slink[leaf]
        while w:
            if tags[w] >= 0:
                raise InvariantError(
                    f"suffix path of pattern {x} passes through leaf node {w}; "
                    "input is not factor-free"
                )
            seq_nodes.append(w)
            seq_pats.append(x)
            w = slink[w]

    counts = [0] * num_nodes
    for w in seq_nodes:
        counts[w] += 1
    start = [0]
    start.extend(accumulate(counts))
    pool = [0] * len(seq_nodes)
    cursor = start[:-1]  # copy; next write position per node
    for w, x in zip(seq_nodes, seq_pats):
        pool[cursor[w]] = x
        cursor[w] += 1
    return LeafLists(start=start, pool=pool)
