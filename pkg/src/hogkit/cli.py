"""Command-line front end: build, verify, and bench.

Exit codes: 0 success, 1 I/O failure, 2 validation failure or size
guard, 3 internal invariant breach, 4 verification check failure.
Output is byte-deterministic given the input bytes, flags, and seed.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass

import numpy as np

from .ac_trie import build_trie, euler_traversal
from .errors import (
    FormatError,
    HogkitError,
    InvariantError,
    SizeGuardError,
    ValidationError,
)
from .graph_build import (
    build_ehog,
    build_graph,
    check_graph,
    contract,
    graphs_equal,
    hog_from_ehog,
    serialize,
)
from .mark_hog import MARKERS
from .oracle import verify_graph
from .overlap_index import compute_leaf_lists
from .pattern_set import PatternSet, load_patterns, partition_contained, validate

ALPHA = b"abcdefghijklmnopqrstuvwxyz"
CSV_HEADER = "algo,n,total_length,wall_time_ns,op_counter,node_count,list_entries"


# ---------------------------------------------------------------------------
# Synthetic inputs (seeded, deterministic)


def random_reads(n: int, length: int, sigma: int = 4, seed: int = 0) -> list[bytes]:
    """Uniform random reads over the first ``sigma`` lowercase letters."""
    if not 1 <= sigma <= len(ALPHA):
        raise ValueError(f"sigma must be in 1..{len(ALPHA)}")
    rng = random.Random(seed)
    letters = ALPHA[:sigma]
    if 256 % sigma == 0:
        table = bytes(letters[b % sigma] for b in range(256))
        return [rng.randbytes(length).translate(table) for _ in range(n)]
    return [bytes(rng.choices(letters, k=length)) for _ in range(n)]


def overlap_dense(n: int, length: int, seed: int = 0) -> list[bytes]:
    """Adversarial family: every ordered pair overlaps on the border ``aba``.

    Each pattern is ``aba`` + a distinct b/c interior + ``aba``, all of
    the same length, so the set is factor-free by construction and
    every leaf keeps a non-empty stack alive through the whole Euler
    walk. That makes the full-rescan marking variant pay its quadratic
    price while the pending-list variant stays linear.
    """
    border = b"aba"
    interior = length - 2 * len(border)
    need = max(1, (n - 1).bit_length())
    if interior < need:
        raise ValueError(
            f"length {length} too short to encode {n} distinct interiors"
        )
    pats = []
    for i in range(n):
        code = format(i, "b").rjust(interior, "0")
        pats.append(border + code.replace("0", "b").replace("1", "c").encode() + border)
    random.Random(seed).shuffle(pats)
    return pats


def random_instance(max_n: int = 8, max_len: int = 12, sigma: int = 2, seed: int = 0) -> PatternSet:
    """Small random pattern set, made factor-free by dropping contained reads."""
    rng = random.Random(seed)
    letters = ALPHA[:sigma]
    count = rng.randint(1, max_n)
    raw = [
        bytes(rng.choices(letters, k=rng.randint(1, max_len))) for _ in range(count)
    ]
    kept, _ = partition_contained(raw)
    return validate(kept)


# ---------------------------------------------------------------------------
# verify orchestration


def verify_instance(ps: PatternSet, *, size_guard: int | None = None) -> tuple[bool, list[str]]:
    """Full cross-check of one pattern set; returns (ok, report lines).

    Builds the trie, runs all three marking variants, builds the HOG
    through both the direct and the extended-graph route, and verifies
    the trie, extended graph, and HOG against the brute-force oracle.
    """
    lines: list[str] = []
    ok = True

    trie = build_trie(ps)
    lists = compute_leaf_lists(trie)
    events = euler_traversal(trie)
    marks = {name: fn(trie, lists, events) for name, fn in MARKERS.items()}
    flags = {name: bytes(r.in_hog) for name, r in marks.items()}
    agree = len(set(flags.values())) == 1
    ok &= agree
    lines.append(f"[{'pass' if agree else 'FAIL'}] marking variants agree: "
                 + " ".join(sorted(flags)))

    hog = contract(trie, marks["optimal"].in_hog, kind="hog")
    ehog = build_ehog(trie)
    hog_via = hog_from_ehog(ehog)
    routes = graphs_equal(hog, hog_via)
    ok &= routes
    lines.append(f"[{'pass' if routes else 'FAIL'}] direct and extended-graph routes agree")

    trie_graph = contract(trie, bytearray(b"\x01") * trie.num_nodes, kind="trie")
    for graph in (trie_graph, ehog, hog):
        check_graph(graph)
        report = verify_graph(graph, ps, size_guard=size_guard)
        ok &= report.ok
        lines.append(report.to_text())
    return ok, lines


# ---------------------------------------------------------------------------
# bench records


@dataclass
class BenchRecord:
    """One timed marking run; serializes as a CSV row."""

    algo: str
    n: int
    total_length: int
    wall_time_ns: int
    op_counter: int
    node_count: int
    list_entries: int

    def row(self) -> str:
        return (
            f"{self.algo},{self.n},{self.total_length},{self.wall_time_ns},"
            f"{self.op_counter},{self.node_count},{self.list_entries}"
        )


def bench_marking(ps: PatternSet, algos: list[str]) -> list[BenchRecord]:
    """Time the marking phase of each requested variant on one input."""
    trie = build_trie(ps)
    lists = compute_leaf_lists(trie)
    events = euler_traversal(trie)
    records = []
    for algo in algos:
        fn = MARKERS[algo]
        t0 = time.perf_counter_ns()
        result = fn(trie, lists, events)
        t1 = time.perf_counter_ns()
        records.append(
            BenchRecord(
                algo=algo,
                n=ps.n,
                total_length=ps.total_length,
                wall_time_ns=t1 - t0,
                op_counter=result.op_counter,
                node_count=trie.num_nodes,
                list_entries=lists.total_entries,
            )
        )
    return records


def loglog_slopes(records: list[BenchRecord]) -> dict[str, float]:
    """Least-squares slope of log(op_counter) against log(total_length)."""
    slopes: dict[str, float] = {}
    by_algo: dict[str, list[BenchRecord]] = {}
    for r in records:
        by_algo.setdefault(r.algo, []).append(r)
    for algo, rs in by_algo.items():
        if len({r.total_length for r in rs}) < 2:
            continue
        x = np.log([r.total_length for r in rs])
        y = np.log([max(r.op_counter, 1) for r in rs])
        slopes[algo] = float(np.polyfit(x, y, 1)[0])
    return slopes


# ---------------------------------------------------------------------------
# commands


def _read_pattern_set(args) -> PatternSet:
    if args.input:
        with open(args.input, "rb") as fh:
            data = fh.read()
    else:
        data = sys.stdin.buffer.read()
    raw = load_patterns(data, args.format)
    policy = "drop_contained" if args.policy == "drop-contained" else "strict"
    if policy == "drop_contained":
        kept, dropped = partition_contained(raw)
        for p in dropped:
            print(f"dropped contained/duplicate pattern: {p.decode('latin-1')}", file=sys.stderr)
        raw = kept
    return validate(raw, "strict", check_containment=not args.no_containment_check)


def cmd_build(args) -> int:
    ps = _read_pattern_set(args)
    built = build_graph(ps, kind=args.graph, algorithm=args.algo, via_ehog=args.via_ehog)
    check_graph(built.graph)
    if args.output in ("json", "dot"):
        sys.stdout.buffer.write(serialize(built.graph, args.output))
        return 0
    graph = built.graph
    internal = sum(
        1 for v in range(1, graph.num_nodes) if graph.pattern_tag[v] < 0
    )
    stats = [
        ("kind", graph.kind),
        ("n", ps.n),
        ("total_length", ps.total_length),
        ("trie_nodes", built.trie_nodes),
        ("graph_nodes", graph.num_nodes),
        ("internal_nodes", internal),
        ("tree_edges", graph.num_nodes - 1),
        ("suffix_links", graph.num_nodes - 1),
        ("list_entries", built.list_entries),
    ]
    if built.ehog_nodes is not None:
        stats.append(("ehog_nodes", built.ehog_nodes))
    if built.mark is not None:
        stats.append(("algorithm", built.mark.algorithm))
        stats.append(("mark_ops", built.mark.op_counter))
        stats.append(("peak_stack_entries", built.mark.peak_stack_entries))
    for key, value in stats:
        print(f"{key} {value}")
    return 0


def _parse_kv(tokens: list[str]) -> dict[str, int]:
    out: dict[str, int] = {}
    for tok in tokens:
        key, _, value = tok.partition("=")
        if not value:
            raise ValidationError(f"bad key=value token {tok!r}")
        out[key] = int(value)
    return out


def cmd_verify(args) -> int:
    if args.random is not None:
        params = _parse_kv(args.random)
        unknown = set(params) - {"n", "len", "sigma", "seed", "reps"}
        if unknown:
            raise ValidationError(f"unknown --random keys: {sorted(unknown)}")
        reps = params.get("reps", 100)
        seed = params.get("seed", 0)
        failures = 0
        for i in range(reps):
            ps = random_instance(
                max_n=params.get("n", 8),
                max_len=params.get("len", 12),
                sigma=params.get("sigma", 2),
                seed=seed + i,
            )
            ok, lines = verify_instance(ps, size_guard=args.size_guard)
            if not ok:
                failures += 1
                print(f"instance seed={seed + i} FAILED")
                print("\n".join(lines))
        print(f"instances {reps}")
        print(f"failures {failures}")
        print("all checks pass" if failures == 0 else "CHECKS FAILED")
        return 0 if failures == 0 else 4

    ps = _read_pattern_set(args)
    ok, lines = verify_instance(ps, size_guard=args.size_guard)
    print("\n".join(lines))
    print("all checks pass" if ok else "CHECKS FAILED")
    return 0 if ok else 4


def cmd_bench(args) -> int:
    algos = args.algos.split(",")
    for algo in algos:
        if algo not in MARKERS:
            raise ValidationError(f"unknown algorithm {algo!r}")
    records: list[BenchRecord] = []
    for idx, spec in enumerate(args.sizes):
        n_str, _, len_str = spec.partition("x")
        n, length = int(n_str), int(len_str)
        if args.family == "random":
            raw = random_reads(n, length, sigma=args.sigma, seed=args.seed + idx)
        else:
            raw = overlap_dense(n, length, seed=args.seed + idx)
        # Generated families are factor-free by construction; skip the
        # quadratic containment scan at bench scale.
        ps = validate(raw, "strict", check_containment=False)
        records.extend(bench_marking(ps, algos))

    lines = [CSV_HEADER] + [r.row() for r in records]
    csv_text = "\n".join(lines) + "\n"
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(csv_text)
        slope_out = sys.stdout
    else:
        sys.stdout.write(csv_text)
        slope_out = sys.stderr
    for algo, slope in sorted(loglog_slopes(records).items()):
        print(f"slope algo={algo} {slope:.3f}", file=slope_out)
    return 0


# ---------------------------------------------------------------------------
# parser / entry point


def _add_input_flags(sub) -> None:
    sub.add_argument("--input", help="input file (default: stdin)")
    sub.add_argument("--format", choices=("auto", "lines", "fasta"), default="auto")
    sub.add_argument("--policy", choices=("strict", "drop-contained"), default="strict")
    sub.add_argument(
        "--no-containment-check",
        action="store_true",
        help="skip the O(n^2 * L) substring scan; input must be factor-free",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hogkit",
        description="Build and verify hierarchical overlap graphs in linear time.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("build", help="build a graph and print it")
    _add_input_flags(b)
    b.add_argument("--graph", choices=("hog", "ehog", "trie"), default="hog")
    b.add_argument("--algo", choices=tuple(MARKERS), default="optimal")
    b.add_argument("--via-ehog", action="store_true",
                   help="build the HOG through the extended graph")
    b.add_argument("--output", choices=("json", "dot", "stats"), default="json")
    b.set_defaults(func=cmd_build)

    v = subs.add_parser("verify", help="cross-check against the brute-force oracle")
    _add_input_flags(v)
    v.add_argument("--random", nargs="*", metavar="KEY=VALUE",
                   help="verify seeded random instances, e.g. n=8 len=12 sigma=2 seed=42 reps=1000")
    v.add_argument("--size-guard", type=int, default=None,
                   help="override the brute-force size guard (env HOGKIT_SIZE_GUARD)")
    v.set_defaults(func=cmd_verify)

    be = subs.add_parser("bench", help="time the marking variants and emit CSV")
    be.add_argument("--sizes", nargs="+", required=True, metavar="NxLEN",
                    help="instance sizes, e.g. 1000x100 2000x100")
    be.add_argument("--family", choices=("random", "overlap-dense"), default="random")
    be.add_argument("--sigma", type=int, default=4)
    be.add_argument("--algos", default="optimal", help="comma-separated variant list")
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--csv", help="write CSV here instead of stdout")
    be.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return 3
    except HogkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
