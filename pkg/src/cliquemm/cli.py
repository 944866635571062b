"""Command-line front end.

Exit codes:
  0  success (detect: YES)
  1  detect: NO
  2  bad flags, unreadable or malformed input
  3  memory / work guard refused the computation
  4  a reported clique failed re-verification
  5  algorithms disagree (verify, bench)
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import astuple, dataclass
from pathlib import Path
from typing import Callable

import numba
import numpy as np

from . import cliques
from .errors import InputError, LimitExceeded, VerificationError
from .graph import Graph, complete, emit_dimacs, emit_edge_list, empty, gen_gnp, gen_planted, parse_graph
from .guards import Limits
from .matrix import BACKENDS, DEFAULT_TILE, IntMatrix, matmul_blocked, matmul_naive, trace

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_GUARD, EXIT_SELFCHECK, EXIT_DISAGREE = 0, 1, 2, 3, 4, 5

BENCH_HEADER = ("algorithm", "n", "p", "r", "q", "k1", "seed", "count", "elapsed_ms")


@dataclass
class BenchRecord:
    algorithm: str
    n: int
    p: str
    r: int
    q: str
    k1: str
    seed: str
    count: str
    elapsed_ms: int

    @classmethod
    def from_row(cls, row: dict) -> "BenchRecord":
        return cls(
            row["algorithm"], int(row["n"]), row["p"], int(row["r"]), row["q"], row["k1"],
            row["seed"], row["count"], int(row["elapsed_ms"]),
        )


def write_records(records, out, header: bool = True) -> None:
    w = csv.writer(out, lineterminator="\n")
    if header:
        w.writerow(BENCH_HEADER)
    for rec in records:
        w.writerow(astuple(rec))


def read_records(text: str) -> list[BenchRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != BENCH_HEADER:
        raise InputError(f"unexpected CSV header {reader.fieldnames}")
    return [BenchRecord.from_row(row) for row in reader]


def _append_csv(path: str, records) -> None:
    p = Path(path)
    new = not p.exists() or p.stat().st_size == 0
    with p.open("a", newline="") as fh:
        write_records(records, fh, header=new)


def _dash(v) -> str:
    return "-" if v is None else str(v)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _limits(args) -> Limits:
    return Limits(args.max_entries, args.max_work, args.max_subsets)


def _load(path: str) -> Graph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_graph(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    planted = None
    if args.model == "gnp":
        G = gen_gnp(args.n, args.p, args.seed)
    elif args.model == "planted":
        if args.r is None:
            raise InputError("--model planted needs --r")
        G, planted = gen_planted(args.n, args.p, args.r, args.seed)
    elif args.model == "complete":
        G = complete(args.n)
    else:
        G = empty(args.n)
    text = emit_dimacs(G) if args.format == "dimacs" else emit_edge_list(G)
    line = " ".join(map(str, planted)) + "\n" if planted is not None else None
    if args.out in (None, "-"):
        sys.stdout.write(text)
        if line is not None:
            sys.stderr.write(line)
    else:
        Path(args.out).write_text(text)
        if line is not None:
            Path(args.out + ".planted").write_text(line)
    return EXIT_OK


def cmd_count(args) -> int:
    G = _load(args.input)
    rep = cliques.run_count(args.algo, G, args.r, args.q, args.k1, args.backend, args.tile, _limits(args))
    print(f"count={rep.count}")
    if args.csv:
        rec = BenchRecord(
            args.algo, G.n, "-", args.r, _dash(rep.q), _dash(rep.k1), "-", str(rep.count),
            int(rep.elapsed * 1000),
        )
        _append_csv(args.csv, [rec])
    return EXIT_OK


def cmd_detect(args) -> int:
    G = _load(args.input)
    limits = _limits(args)
    if args.algo == "alg3":
        q = cliques.default_q(args.r) if args.q is None else args.q
        yes = cliques.detect_alg3(G, args.r, q, limits)
    else:
        rep = cliques.run_count(args.algo, G, args.r, args.q, args.k1, args.backend, args.tile, limits)
        yes = rep.count > 0
    print("YES" if yes else "NO")
    return EXIT_OK if yes else EXIT_NO


def cmd_find(args) -> int:
    G = _load(args.input)
    res = cliques.run_find(args.algo, G, args.r, args.q, args.k1, args.backend, args.tile, _limits(args))
    cliques.verified(G, args.r, res)
    print(" ".join(map(str, res.vertices)) if res.found else "none")
    return EXIT_OK


def _all_counts(G: Graph, r: int, backend: str, tile: int, limits: Limits) -> list[tuple[str, int]]:
    out = [
        ("brute", cliques.count_bruteforce(G, r, limits).count),
        ("triangle", cliques.count_triangle_method(G, r, backend, tile, limits).count),
        ("alg1", cliques.count_alg1(G, r, None, backend, tile, limits).count),
        ("alg2", cliques.count_alg2(G, r, backend, tile, limits).count),
    ]
    for q in range(1, r - 1):
        out.append((f"alg3[q={q}]", cliques.count_alg3(G, r, q, backend, tile, limits).count))
    if r == 3:
        A = G.adjacency()
        out.append(("ir", cliques.count_triangles_ir(G, backend, tile).count))
        out.append(("trace/6", trace(matmul_blocked(matmul_blocked(A, A), A)) // 6))
    return out


# replaced in tests to inject a faulty counter
COUNTERS: Callable[..., list[tuple[str, int]]] = _all_counts


def cmd_verify(args) -> int:
    limits = _limits(args)
    failures = 0
    for n in args.n_list:
        for p in args.p_list:
            for seed in args.seeds:
                G = gen_gnp(n, p, seed)
                for r in args.r_list:
                    counts = COUNTERS(G, r, args.backend, args.tile, limits)
                    expected = counts[0][1]
                    bad = [(name, c) for name, c in counts if c != expected]
                    cells = " ".join(f"{name}={c}" for name, c in counts)
                    status = "ok" if not bad else "MISMATCH"
                    print(f"n={n} p={p} seed={seed} r={r} {cells} {status}")
                    if bad and not failures:
                        name, got = bad[0]
                        print(
                            f"first disagreement: instance n={n} p={p} seed={seed} r={r} "
                            f"algorithm={name} expected={expected} got={got}",
                            file=sys.stderr,
                        )
                    failures += bool(bad)
    print(f"{'all agree' if not failures else f'{failures} instance(s) disagree'}")
    return EXIT_OK if not failures else EXIT_DISAGREE


def cmd_bench(args) -> int:
    limits = _limits(args)
    records: list[BenchRecord] = []
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    status = EXIT_OK
    try:
        write_records([], out)
        for n in args.n_list:
            G = gen_gnp(n, args.p, args.seed)
            group: list[BenchRecord] = []
            for algo in args.algos:
                q = (cliques.default_q(args.r) if args.q is None else args.q) if algo == "alg3" else None
                k1 = (args.k1 or cliques.default_split(args.r - 1)) if algo == "alg1" else None
                t0 = time.perf_counter()
                try:
                    rep = cliques.run_count(algo, G, args.r, q, k1, args.backend, args.tile, limits)
                    count, ms = str(rep.count), int((time.perf_counter() - t0) * 1000)
                except LimitExceeded as exc:
                    print(f"skipped {algo} at n={n}: {exc}", file=sys.stderr)
                    count, ms = "skipped", -1
                rec = BenchRecord(algo, n, str(args.p), args.r, _dash(q), _dash(k1), str(args.seed), count, ms)
                group.append(rec)
                write_records([rec], out, header=False)
                out.flush()
            records.extend(group)
            seen = {rec.count for rec in group if rec.count != "skipped"}
            if len(seen) > 1:
                detail = ", ".join(f"{rec.algorithm}={rec.count}" for rec in group)
                print(f"verification error at n={n}: {detail}", file=sys.stderr)
                status = EXIT_DISAGREE
                break
    finally:
        if out is not sys.stdout:
            out.close()
    return status


def cmd_matmul_bench(args) -> int:
    """Time the naive and tiled backends on the same seeded 0..7 matrices."""
    rng = np.random.default_rng(args.seed)
    rows = []
    for n in args.n_list:
        X = IntMatrix(rng.integers(0, 8, (n, n), dtype=np.uint64))
        Y = IntMatrix(rng.integers(0, 8, (n, n), dtype=np.uint64))
        results = {}
        for backend, fn in (("naive", matmul_naive), ("blocked", lambda a, b: matmul_blocked(a, b, args.tile))):
            fn(IntMatrix.zeros(1, 1), IntMatrix.zeros(1, 1))  # warm the JIT
            t0 = time.perf_counter()
            Z = fn(X, Y)
            ms = (time.perf_counter() - t0) * 1000
            results[backend] = Z
            rows.append((backend, n, args.tile if backend == "blocked" else "-", f"{ms:.1f}", int(Z.data.sum())))
        if results["naive"] != results["blocked"]:
            print(f"verification error: backends differ at n={n}", file=sys.stderr)
            return EXIT_DISAGREE
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("backend", "n", "tile", "elapsed_ms", "checksum"))
        w.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cliquemm",
        description="Count, detect and find K_r copies with matrix-product based algorithms.",
        epilog=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = argparse.ArgumentParser(add_help=False)
    compute.add_argument("--backend", choices=BACKENDS, default="blocked", help="matrix multiply backend")
    compute.add_argument("--tile", type=int, default=DEFAULT_TILE, help="tile size of the blocked backend")
    compute.add_argument("--threads", type=int, default=1, help="worker threads for the blocked backend")
    compute.add_argument("--max-entries", type=int, default=1 << 27, help="largest dense matrix allowed")
    compute.add_argument("--max-work", type=int, default=1 << 34, help="most multiply-adds per product")
    compute.add_argument("--max-subsets", type=int, default=10**8, help="largest brute-force scan")

    g = sub.add_parser("gen", help="generate a graph file")
    g.add_argument("--model", choices=("gnp", "planted", "complete", "empty"), required=True)
    g.add_argument("--n", type=int, required=True, help="vertex count")
    g.add_argument("--p", type=float, default=0.5, help="edge probability (gnp, planted)")
    g.add_argument("--r", type=int, help="planted clique size")
    g.add_argument("--seed", type=int, default=0, help="PRNG seed")
    g.add_argument("--format", choices=("edgelist", "dimacs"), default="edgelist")
    g.add_argument("--out", help="output path (default stdout); planted set goes to OUT.planted")
    g.set_defaults(func=cmd_gen)

    def instance(sp, algos, default_algo):
        sp.add_argument("--in", dest="input", required=True, help="edge-list or DIMACS file, '-' for stdin")
        sp.add_argument("--r", type=int, required=True, help="clique size")
        sp.add_argument("--algo", choices=algos, default=default_algo)
        sp.add_argument("--q", type=int, help="base clique size for alg3 (default max(1, r//3))")
        sp.add_argument("--k1", type=int, help="tensor split for alg1 (default ceil((r-1)/2))")

    c = sub.add_parser("count", parents=[compute], help="count K_r copies; prints count=<v>")
    instance(c, cliques.ALGORITHMS, "alg1")
    c.add_argument("--csv", help="append a result row to this CSV file")
    c.set_defaults(func=cmd_count)

    d = sub.add_parser("detect", parents=[compute], help="print YES (exit 0) or NO (exit 1)")
    instance(d, ("alg1", "alg2", "alg3"), "alg3")
    d.set_defaults(func=cmd_detect)

    f = sub.add_parser("find", parents=[compute], help="print the vertices of one K_r copy, or 'none'")
    instance(f, ("alg1", "alg2", "alg3"), "alg1")
    f.set_defaults(func=cmd_find)

    v = sub.add_parser("verify", parents=[compute], help="cross-check all counters on a seeded sweep")
    v.add_argument("--n-list", type=_int_list, default=[10, 14, 18, 22])
    v.add_argument("--p-list", type=_float_list, default=[0.3, 0.5, 0.7])
    v.add_argument("--r-list", type=_int_list, default=[3, 4, 5, 6])
    v.add_argument("--seeds", type=_int_list, default=[1, 2, 3])
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[compute], help="time counters on G(n, p); CSV output")
    b.add_argument("--n-list", type=_int_list, required=True)
    b.add_argument("--p", type=float, default=0.5)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--algos", type=lambda s: [a for a in s.split(",") if a], default=["alg1", "alg2"])
    b.add_argument("--q", type=int)
    b.add_argument("--k1", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", help="output path (default stdout)")
    b.set_defaults(func=cmd_bench)

    m = sub.add_parser("matmul-bench", help="time naive vs blocked multiply; CSV output")
    m.add_argument("--n-list", type=_int_list, default=[128, 256, 512])
    m.add_argument("--tile", type=int, default=DEFAULT_TILE)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--csv", help="output path (default stdout)")
    m.set_defaults(func=cmd_matmul_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "algos", None):
        unknown = [a for a in args.algos if a not in cliques.ALGORITHMS]
        if unknown:
            print(f"error: unknown algorithm(s) {unknown}", file=sys.stderr)
            return EXIT_USAGE
    threads = getattr(args, "threads", None)
    if threads is not None:
        numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_SELFCHECK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
