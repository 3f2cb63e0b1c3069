"""Loading and validation of the input string set.

Patterns are raw byte strings; the alphabet is the full byte range
0-255. A validated set is *factor-free*: no pattern is empty, no two
are identical, and none occurs as a substring of another. The
downstream trie construction relies on factor-freeness to keep the
patterns exactly at the leaves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import BinaryIO, Iterable, Union

from .errors import (
    ContainedPatternError,
    DuplicatePatternError,
    EmptyPatternError,
    EmptySetError,
    FormatError,
)

FORMATS = ("auto", "lines", "fasta")
POLICIES = ("strict", "drop_contained")


@dataclass(frozen=True)
class PatternSet:
    """Immutable, validated collection of byte-string patterns.

    Patterns keep their input order; ``n`` and ``total_length`` follow
    the usual bookkeeping (``total_length`` is the cumulative number of
    bytes across all patterns). Construction rejects empty or duplicate
    patterns; use :func:`validate` to additionally enforce
    factor-freeness. Instances are safe to share across threads.
    """

    patterns: tuple[bytes, ...]
    n: int = field(init=False)
    total_length: int = field(init=False)

    def __post_init__(self) -> None:
        if not self.patterns:
            raise EmptySetError("pattern set is empty")
        for p in self.patterns:
            if not p:
                raise EmptyPatternError("empty pattern")
        if len(set(self.patterns)) != len(self.patterns):
            raise DuplicatePatternError("duplicate pattern in set")
        object.__setattr__(self, "n", len(self.patterns))
        object.__setattr__(self, "total_length", sum(map(len, self.patterns)))

    def __iter__(self):
        return iter(self.patterns)

    def __len__(self) -> int:
        return self.n


def load_patterns(source: Union[bytes, bytearray, BinaryIO], fmt: str = "auto") -> list[bytes]:
    """Read raw patterns from ``source`` in ``lines`` or ``fasta`` format.

    ``source`` is either a bytes object or a binary file-like. With
    ``fmt="auto"`` a leading ``>`` byte selects FASTA, anything else is
    treated as newline-delimited. ``lines`` keeps each non-empty line as
    one pattern; ``fasta`` concatenates the sequence lines of each
    record and drops the headers. No validation happens here; feed the
    result to :func:`validate`.
    """
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        data = source.read()
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    if fmt == "auto":
        fmt = "fasta" if data[:1] == b">" else "lines"
    if fmt == "lines":
        return [line for line in data.splitlines() if line]
    return _parse_fasta(data)


def _parse_fasta(data: bytes) -> list[bytes]:
    records: list[bytes] = []
    header: bytes | None = None
    chunks: list[bytes] = []
    for line in data.splitlines():
        if line.startswith(b">"):
            if header is not None:
                records.append(_finish_record(header, chunks))
            header = line
            chunks = []
        elif line:
            if header is None:
                raise FormatError("FASTA data before the first '>' header")
            chunks.append(line)
    if header is not None:
        records.append(_finish_record(header, chunks))
    return records


def _finish_record(header: bytes, chunks: list[bytes]) -> bytes:
    seq = b"".join(chunks)
    if not seq:
        raise FormatError(f"FASTA record with empty sequence: {header[:40]!r}")
    return seq


def partition_contained(raw: Iterable[bytes]) -> tuple[list[bytes], list[bytes]]:
    """Split ``raw`` into (kept, dropped) so that kept is factor-free.

    Duplicates beyond the first occurrence and any pattern that occurs
    inside a strictly longer one are dropped. Both lists preserve input
    order. Quadratic in the number of patterns; intended for desk-scale
    inputs.
    """
    kept: list[bytes] = []
    dropped: list[bytes] = []
    seen: set[bytes] = set()
    uniques: list[bytes] = []
    for p in raw:
        if p in seen:
            dropped.append(p)
        else:
            seen.add(p)
            uniques.append(p)
    for p in uniques:
        if any(len(q) > len(p) and p in q for q in uniques):
            dropped.append(p)
        else:
            kept.append(p)
    return kept, dropped


def validate(raw: Iterable[bytes], policy: str = "strict", *, check_containment: bool = True) -> PatternSet:
    """Turn raw patterns into a validated :class:`PatternSet`.

    ``strict`` raises on any violation; ``drop_contained`` silently
    removes duplicates and contained patterns (use
    :func:`partition_contained` first if you need the dropped list).
    Empty patterns are rejected under both policies.

    The substring scan behind factor-freeness costs O(n^2 * L) with the
    naive check used here. For large machine-generated inputs that are
    factor-free by construction, pass ``check_containment=False`` to
    skip it; duplicate detection stays on.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}, expected one of {POLICIES}")
    patterns = list(raw)
    if not patterns:
        raise EmptySetError("no patterns in input")
    for p in patterns:
        if not p:
            raise EmptyPatternError("empty pattern in input")

    if policy == "drop_contained":
        kept, _ = partition_contained(patterns)
        if not kept:
            raise EmptySetError("no pattern survived drop_contained")
        return PatternSet(tuple(kept))

    if len(set(patterns)) != len(patterns):
        seen: set[bytes] = set()
        for p in patterns:
            if p in seen:
                raise DuplicatePatternError(f"duplicate pattern {p[:40]!r}")
            seen.add(p)
    if check_containment:
        by_len = sorted(patterns, key=len)
        for i, p in enumerate(by_len):
            for q in by_len[i + 1 :]:
                if len(q) > len(p) and p in q:
                    raise ContainedPatternError(
                        f"pattern {p[:40]!r} is a substring of {q[:40]!r}"
                    )
    return PatternSet(tuple(patterns))
