"""Counting, detecting and finding copies of K_r.

Five counters are provided and must always agree:

``brute``     exhaustive scan of all r-subsets (the oracle)
``triangle``  the classic reduction to triangle counting in an auxiliary
              tripartite graph whose nodes are copies of three near-equal
              sub-cliques
``alg1``      list K_{r-1} copies, add up how many vertices extend each one
              (read off an (r-1)-dimensional common-neighbour tensor), divide by r
``alg2``      list K_{r-2} copies, build the vertex-by-copy extension matrix B,
              sum ``B @ B.T`` over edges, divide by C(r, 2)
``alg3``      list K_q copies, split the missing r-q vertices into two
              near-equal cliques s1, s2 inside each copy's extension set,
              join them with one rectangular product

Each counter returns the raw over-count (``tally``) alongside the exact
divisor so the divisibility can be audited.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, VerificationError
from .graph import CliqueList, Graph, common_mask, enumerate_cliques, is_clique
from .guards import DEFAULT_LIMITS, Limits
from .matrix import DEFAULT_TILE, BoolMatrix, IntMatrix, bool_matmul, matmul, transpose
from .multidim import common_neighbors_tensor, default_split, find_witness

ALGORITHMS = ("brute", "triangle", "alg1", "alg2", "alg3")


@dataclass(frozen=True)
class CountReport:
    algorithm: str
    r: int
    count: int
    q: int | None = None
    k1: int | None = None
    tally: int = 0
    divisor: int = 1
    elapsed: float = 0.0


@dataclass(frozen=True)
class FindResult:
    vertices: tuple[int, ...] | None = None

    @property
    def found(self) -> bool:
        return self.vertices is not None


def _exact_div(tally: int, divisor: int, algorithm: str) -> int:
    if tally % divisor:
        raise VerificationError(f"{algorithm}: tally {tally} not divisible by {divisor}")
    return tally // divisor


def _check_r(r: int, low: int = 3) -> None:
    if r < low:
        raise InputError(f"clique size r must be >= {low}, got {r}")


def _adj_bool(G: Graph) -> np.ndarray:
    return G.adj.to_dense()


def _membership(copies: CliqueList, n: int) -> np.ndarray:
    """``(len, n)`` 0/1 matrix: row i marks the vertices of copy i."""
    out = np.zeros((len(copies), n), dtype=np.uint64)
    if len(copies):
        arr = copies.as_array()
        out[np.arange(len(copies))[:, None], arr] = 1
    return out


def _common_rows(adj: np.ndarray, copies: CliqueList) -> np.ndarray:
    """``(len, n)`` 0/1 matrix: row i marks vertices adjacent to all of copy i."""
    n = adj.shape[0]
    if not len(copies):
        return np.zeros((0, n), dtype=np.uint64)
    arr = copies.as_array()
    rows = adj[arr[:, 0]].copy()
    for j in range(1, copies.t):
        rows &= adj[arr[:, j]]
    return rows.astype(np.uint64)


def _containment(adj, outer: CliqueList, inner: CliqueList, mm, limits: Limits, what: str) -> np.ndarray:
    """Boolean ``(len(outer), len(inner))``: inner copy lies in outer's common neighbourhood.

    For cliques a and b this holds exactly when a and b are disjoint and
    a ∪ b is a clique.
    """
    n = adj.shape[0]
    limits.product(len(outer), n, len(inner), what)
    hits = mm(IntMatrix._own(_common_rows(adj, outer)), IntMatrix._own(_membership(inner, n).T.copy()))
    return hits.data == inner.t


def _mm(backend: str, tile: int):
    return lambda X, Y: matmul(X, Y, backend, tile)


# ---------------------------------------------------------------------------
# oracle and baselines
# ---------------------------------------------------------------------------


def count_bruteforce(G: Graph, r: int, limits: Limits = DEFAULT_LIMITS) -> CountReport:
    """Scan every r-subset of vertices and test it for completeness."""
    _check_r(r, 1)
    start = time.perf_counter()
    limits.subsets(math.comb(G.n, r), "brute-force scan")
    masks = G.masks
    count = 0
    for S in itertools.combinations(range(G.n), r):
        bits = 0
        for v in S:
            bits |= 1 << v
        # S is a clique iff every member is adjacent to all other members
        if all((bits ^ (1 << v)) & ~masks[v] == 0 for v in S):
            count += 1
    return CountReport("brute", r, count, tally=count, elapsed=time.perf_counter() - start)


def count_triangles_ir(G: Graph, backend: str = "blocked", tile: int = DEFAULT_TILE) -> CountReport:
    """Triangles from ``C = A @ A``: summing ``C[i, j]`` over edges counts each triangle 3 times."""
    start = time.perf_counter()
    A = G.adjacency()
    C = matmul(A, A, backend, tile)
    upper = np.triu(_adj_bool(G), 1)
    tally = int(C.data[upper].sum(dtype=np.uint64))
    count = _exact_div(tally, 3, "ir")
    return CountReport("ir", 3, count, tally=tally, divisor=3, elapsed=time.perf_counter() - start)


def triangle_parts(r: int) -> tuple[int, int, int]:
    return r // 3, (r + 1) // 3, (r + 2) // 3


def count_triangle_method(
    G: Graph,
    r: int,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> CountReport:
    """Count K_r as triangles of an auxiliary tripartite graph.

    Node classes are the copies of K_p1, K_p2, K_p3 with p1 + p2 + p3 = r;
    two copies from different classes are joined when they are disjoint and
    their union is a clique.  Every K_r gives one auxiliary triangle per
    ordered partition of its vertices into parts of those sizes.
    """
    _check_r(r)
    start = time.perf_counter()
    mm = _mm(backend, tile)
    p1, p2, p3 = triangle_parts(r)
    cache: dict[int, CliqueList] = {}
    for p in (p1, p2, p3):
        if p not in cache:
            cache[p] = enumerate_cliques(G, p)
    L1, L2, L3 = cache[p1], cache[p2], cache[p3]
    adj = _adj_bool(G)
    m12 = _containment(adj, L1, L2, mm, limits, "triangle method M12")
    m23 = _containment(adj, L2, L3, mm, limits, "triangle method M23")
    m13 = _containment(adj, L1, L3, mm, limits, "triangle method M13")
    limits.product(len(L1), len(L2), len(L3), "triangle method M12 @ M23")
    paths = mm(IntMatrix._own(m12.astype(np.uint64)), IntMatrix._own(m23.astype(np.uint64)))
    tally = int(paths.data[m13].sum(dtype=np.uint64))
    divisor = math.factorial(r) // (math.factorial(p1) * math.factorial(p2) * math.factorial(p3))
    count = _exact_div(tally, divisor, "triangle")
    return CountReport(
        "triangle", r, count, tally=tally, divisor=divisor, elapsed=time.perf_counter() - start
    )


# ---------------------------------------------------------------------------
# extension by one vertex: (r-1)-dimensional product
# ---------------------------------------------------------------------------


def _alg1_tensor(G, r, k1, backend, tile, limits):
    _check_r(r)
    k = r - 1
    if k1 is None:
        k1 = default_split(k)
    L = enumerate_cliques(G, k)
    D = common_neighbors_tensor(G, k, k1, backend, limits, tile)
    return L, D, k1


def count_alg1(
    G: Graph,
    r: int,
    k1: int | None = None,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> CountReport:
    """Sum, over K_{r-1} copies, the number of vertices adjacent to the whole copy."""
    start = time.perf_counter()
    L, D, k1 = _alg1_tensor(G, r, k1, backend, tile, limits)
    tally = int(D.entries(L.as_array()).sum(dtype=np.uint64)) if len(L) else 0
    count = _exact_div(tally, r, "alg1")
    return CountReport(
        "alg1", r, count, k1=k1, tally=tally, divisor=r, elapsed=time.perf_counter() - start
    )


def find_alg1(
    G: Graph,
    r: int,
    k1: int | None = None,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> FindResult:
    L, D, _ = _alg1_tensor(G, r, k1, backend, tile, limits)
    if not len(L):
        return FindResult()
    hits = np.flatnonzero(D.entries(L.as_array()))
    if not hits.size:
        return FindResult()
    C = L[int(hits[0])]
    A = G.adjacency()
    w = find_witness([A] * len(C), C)
    return FindResult(tuple(sorted(C + (w,))))


# ---------------------------------------------------------------------------
# extension by an edge: vertex x K_{r-2} incidence
# ---------------------------------------------------------------------------


def _alg2_product(G, r, backend, tile, limits):
    _check_r(r)
    L = enumerate_cliques(G, r - 2)
    adj = _adj_bool(G)
    limits.product(G.n, len(L), G.n, "extension product B @ B.T")
    # B[v, H] = 1 iff v extends H by one vertex
    B = IntMatrix._own(np.ascontiguousarray(_common_rows(adj, L).T))
    C = matmul(B, transpose(B), backend, tile)
    return L, B, C, adj


def count_alg2(
    G: Graph,
    r: int,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> CountReport:
    """Each edge {v, u} lies in ``(B @ B.T)[v, u]`` copies of K_r."""
    start = time.perf_counter()
    L, B, C, adj = _alg2_product(G, r, backend, tile, limits)
    tally = int(C.data[np.triu(adj, 1)].sum(dtype=np.uint64))
    divisor = math.comb(r, 2)
    count = _exact_div(tally, divisor, "alg2")
    return CountReport(
        "alg2", r, count, tally=tally, divisor=divisor, elapsed=time.perf_counter() - start
    )


def find_alg2(
    G: Graph,
    r: int,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> FindResult:
    L, B, C, adj = _alg2_product(G, r, backend, tile, limits)
    pairs = np.argwhere(np.triu(adj, 1) & (C.data > 0))
    if not len(pairs):
        return FindResult()
    v, u = (int(x) for x in pairs[0])
    h = find_witness([B, B], (v, u))
    return FindResult(tuple(sorted(L[h] + (v, u))))


# ---------------------------------------------------------------------------
# generalised split extension
# ---------------------------------------------------------------------------


@dataclass
class _Alg3Setup:
    L: CliqueList
    r1: int
    r2: int
    rows1: CliqueList
    rows2: CliqueList
    B1: np.ndarray
    B2: np.ndarray


def default_q(r: int) -> int:
    return max(1, r // 3)


def split_sizes(r: int, q: int) -> tuple[int, int]:
    return (r - q + 1) // 2, (r - q) // 2


def _alg3_setup(G: Graph, r: int, q: int, limits: Limits) -> _Alg3Setup:
    _check_r(r)
    if not 1 <= q <= r - 2:
        raise InputError(f"q={q} outside [1, {r - 2}] for r={r}")
    r1, r2 = split_sizes(r, q)
    L = enumerate_cliques(G, q)
    per_copy1: list[list[tuple[int, ...]]] = []
    per_copy2: list[list[tuple[int, ...]]] = []
    for H in L:
        ext = common_mask(G, H)
        first = enumerate_cliques(G, r1, within=ext).copies
        per_copy1.append(first)
        per_copy2.append(first if r2 == r1 else enumerate_cliques(G, r2, within=ext).copies)

    def incidence(per_copy, size):
        # rows: only the r_i-sets that occur for some H, in lexicographic order
        rows = CliqueList(size, sorted({s for copies in per_copy for s in copies}))
        limits.entries(len(rows) * len(L), f"incidence matrix for K_{size} extensions")
        index = {s: i for i, s in enumerate(rows.copies)}
        B = np.zeros((len(rows), len(L)), dtype=np.uint64)
        for h, copies in enumerate(per_copy):
            for s in copies:
                B[index[s], h] = 1
        return rows, B

    rows1, B1 = incidence(per_copy1, r1)
    rows2, B2 = incidence(per_copy2, r2)
    return _Alg3Setup(L, r1, r2, rows1, rows2, B1, B2)


def count_alg3(
    G: Graph,
    r: int,
    q: int,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> CountReport:
    """Count K_r by joining K_{r1} and K_{r2} extensions of each K_q copy.

    Every K_r is seen once for each choice of its q-vertex copy H and each
    ordered split of the other r - q vertices into (s1, s2), hence the divisor
    C(r, q) * C(r - q, r1).
    """
    start = time.perf_counter()
    s = _alg3_setup(G, r, q, limits)
    n_l = len(s.L)
    limits.product(len(s.rows1), n_l, len(s.rows2), "split product B1 @ B2.T")
    C = matmul(IntMatrix._own(s.B1), IntMatrix._own(s.B2.T.copy()), backend, tile)
    joinable = _containment(_adj_bool(G), s.rows1, s.rows2, _mm(backend, tile), limits, "split join test")
    tally = int(C.data[joinable].sum(dtype=np.uint64))
    divisor = math.comb(r, q) * math.comb(r - q, s.r1)
    count = _exact_div(tally, divisor, "alg3")
    return CountReport(
        "alg3", r, count, q=q, tally=tally, divisor=divisor, elapsed=time.perf_counter() - start
    )


def _alg3_first_pair(G: Graph, s: _Alg3Setup, limits: Limits):
    """First (row1, row2) in lexicographic order with a common H and s1 ∪ s2 an (r-q)-clique."""
    limits.product(len(s.rows1), len(s.L), len(s.rows2), "Boolean split product")
    B1 = BoolMatrix.from_dense(s.B1 != 0)
    B2 = BoolMatrix.from_dense(s.B2 != 0)
    C = bool_matmul(B1, transpose(B2))
    size = s.r1 + s.r2
    for i in range(C.rows):
        s1 = s.rows1[i]
        for j in C.row_indices(i):
            s2 = s.rows2[int(j)]
            union = set(s1) | set(s2)
            if len(union) == size and is_clique(G, union):
                return i, int(j)
    return None


def detect_alg3(G: Graph, r: int, q: int, limits: Limits = DEFAULT_LIMITS) -> bool:
    s = _alg3_setup(G, r, q, limits)
    return _alg3_first_pair(G, s, limits) is not None


def find_alg3(G: Graph, r: int, q: int, limits: Limits = DEFAULT_LIMITS) -> FindResult:
    s = _alg3_setup(G, r, q, limits)
    pair = _alg3_first_pair(G, s, limits)
    if pair is None:
        return FindResult()
    i, j = pair
    h = find_witness([s.B1, s.B2], (i, j))
    return FindResult(tuple(sorted(s.L[h] + s.rows1[i] + s.rows2[j])))


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def run_count(
    algorithm: str,
    G: Graph,
    r: int,
    q: int | None = None,
    k1: int | None = None,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> CountReport:
    if algorithm == "brute":
        return count_bruteforce(G, r, limits)
    if algorithm == "triangle":
        return count_triangle_method(G, r, backend, tile, limits)
    if algorithm == "alg1":
        return count_alg1(G, r, k1, backend, tile, limits)
    if algorithm == "alg2":
        return count_alg2(G, r, backend, tile, limits)
    if algorithm == "alg3":
        return count_alg3(G, r, default_q(r) if q is None else q, backend, tile, limits)
    raise InputError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def run_find(
    algorithm: str,
    G: Graph,
    r: int,
    q: int | None = None,
    k1: int | None = None,
    backend: str = "blocked",
    tile: int = DEFAULT_TILE,
    limits: Limits = DEFAULT_LIMITS,
) -> FindResult:
    if algorithm == "alg1":
        return find_alg1(G, r, k1, backend, tile, limits)
    if algorithm == "alg2":
        return find_alg2(G, r, backend, tile, limits)
    if algorithm == "alg3":
        return find_alg3(G, r, default_q(r) if q is None else q, limits)
    raise InputError(f"find needs alg1, alg2 or alg3, got {algorithm!r}")


def verified(G: Graph, r: int, result: FindResult) -> FindResult:
    """Re-check a found copy; raise if it is not an r-clique."""
    if result.vertices is not None:
        vs: Sequence[int] = result.vertices
        if len(set(vs)) != r or not is_clique(G, vs):
            raise VerificationError(f"reported copy {vs} is not a K_{r}")
    return result
