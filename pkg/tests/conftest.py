import random

import pytest

from hogkit import build_trie, euler_traversal, validate
from hogkit.cli import random_instance
from hogkit.overlap_index import compute_leaf_lists

# The worked three-pattern example used throughout: every structure it
# produces (trie, extended graph, HOG) is small enough to derive by hand.
EXAMPLE_PATTERNS = (b"aabaa", b"aadbd", b"dbdaa")


@pytest.fixture
def example_ps():
    return validate(list(EXAMPLE_PATTERNS))


@pytest.fixture
def example_trie(example_ps):
    return build_trie(example_ps)


def node_map(structure):
    """node string -> node id, for either a trie or a contracted graph."""
    return {structure.node_string(v): v for v in range(structure.num_nodes)}


def marked_internal_strings(structure, flags):
    return {
        structure.node_string(v)
        for v in range(1, structure.num_nodes)
        if flags[v] and structure.pattern_tag[v] < 0
    }


def trie_pipeline(ps):
    trie = build_trie(ps)
    lists = compute_leaf_lists(trie)
    events = euler_traversal(trie)
    return trie, lists, events


def corpus_instance(seed):
    """One deterministic small instance; alphabet size cycles 1, 2, 4."""
    return random_instance(max_n=8, max_len=12, sigma=(1, 2, 4)[seed % 3], seed=seed)


def random_byte_patterns(seed, max_n=6, max_len=8):
    """Raw byte-string patterns over the full byte range (not factor-free)."""
    rng = random.Random(seed)
    return [
        bytes(rng.randrange(256) for _ in range(rng.randint(1, max_len)))
        for _ in range(rng.randint(1, max_n))
    ]
