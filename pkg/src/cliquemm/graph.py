"""Simple undirected host graphs: construction, generators, I/O and clique listing.

Vertices are ``0..n-1``.  Adjacency is kept as a bit-packed :class:`BoolMatrix`
and, for the combinatorial routines, as one Python-int bitmask per vertex
(bit ``u`` of ``masks[v]`` is set iff ``{u, v}`` is an edge).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError
from .matrix import BoolMatrix, IntMatrix
from .rng import XorShift64Star, probability_threshold


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "_masks", "_int_adj")

    def __init__(self, adj: BoolMatrix):
        if adj.rows != adj.cols:
            raise InputError(f"adjacency must be square, got {adj.rows}x{adj.cols}")
        dense = adj.to_dense()
        if dense.size and dense.diagonal().any():
            raise InputError("self-loops are not allowed")
        if not np.array_equal(dense, dense.T):
            raise InputError("adjacency must be symmetric")
        self.n = adj.rows
        self.adj = adj
        self._masks = tuple(int.from_bytes(adj.words[v].tobytes(), "little") for v in range(self.n))
        self._int_adj = None

    @classmethod
    def from_dense(cls, dense) -> "Graph":
        return cls(BoolMatrix.from_dense(dense))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise InputError("vertex count must be non-negative")
        dense = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            dense[u, v] = dense[v, u] = True
        return cls.from_dense(dense)

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def adjacency(self) -> IntMatrix:
        """0/1 integer adjacency matrix (cached)."""
        if self._int_adj is None:
            self._int_adj = self.adj.lift()
        return self._int_adj

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._masks[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self._masks[v])

    def degree(self, v: int) -> int:
        return self._masks[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in _bits(self._masks[u] >> (u + 1), u + 1)]

    @property
    def num_edges(self) -> int:
        return sum(m.bit_count() for m in self._masks) // 2

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._masks == other._masks

    def __hash__(self) -> int:
        return hash((self.n, self._masks))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def _bits(mask: int, offset: int = 0) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1 + offset)
        mask ^= low
    return out


@dataclass(frozen=True)
class CliqueList:
    """Copies of ``K_t`` as strictly increasing vertex tuples, sorted."""

    t: int
    copies: list[tuple[int, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.copies)

    def __iter__(self):
        return iter(self.copies)

    def __getitem__(self, i) -> tuple[int, ...]:
        return self.copies[i]

    def as_array(self) -> np.ndarray:
        if not self.copies:
            return np.zeros((0, self.t), dtype=np.int64)
        return np.asarray(self.copies, dtype=np.int64)


# ---------------------------------------------------------------------------
# constructors and generators
# ---------------------------------------------------------------------------


def complete(n: int) -> Graph:
    dense = np.ones((n, n), dtype=bool)
    np.fill_diagonal(dense, False)
    return Graph.from_dense(dense)


def empty(n: int) -> Graph:
    return Graph.from_dense(np.zeros((n, n), dtype=bool))


def _gnp_dense(n: int, p, rng: XorShift64Star) -> np.ndarray:
    threshold = probability_threshold(p)
    dense = np.zeros((n, n), dtype=bool)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.coin(threshold):
                dense[u, v] = dense[v, u] = True
    return dense


def gen_gnp(n: int, p, seed: int) -> Graph:
    """Erdős–Rényi ``G(n, p)``.

    Pairs ``(u, v)``, ``u < v``, are visited in lexicographic order and each
    consumes one draw of the seeded xorshift64* stream.
    """
    try:
        rng = XorShift64Star(seed)
        return Graph.from_dense(_gnp_dense(n, p, rng))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def gen_planted(n: int, p, r: int, seed: int) -> tuple[Graph, tuple[int, ...]]:
    """``G(n, p)`` background plus a forced clique on ``r`` random vertices.

    The planted set is drawn after the background edges, from the same stream,
    by a partial Fisher–Yates shuffle.
    """
    if not 0 <= r <= n:
        raise InputError(f"planted size r={r} must lie in [0, n={n}]")
    try:
        rng = XorShift64Star(seed)
        dense = _gnp_dense(n, p, rng)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    perm = list(range(n))
    for i in range(r):
        j = i + rng.below(n - i)
        perm[i], perm[j] = perm[j], perm[i]
    planted = tuple(sorted(perm[:r]))
    for a in planted:
        for b in planted:
            if a != b:
                dense[a, b] = True
    return Graph.from_dense(dense), planted


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------


def _int_fields(line: str, lineno: int, expected: int) -> list[int]:
    parts = line.split()
    if len(parts) != expected:
        raise InputError(f"line {lineno}: expected {expected} fields, got {line!r}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise InputError(f"line {lineno}: non-integer field in {line!r}") from None


def parse_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"`` (0-based)."""
    lines = [(i, ln) for i, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise InputError("empty edge list")
    n, m = _int_fields(lines[0][1], lines[0][0], 2)
    if n < 0 or m < 0:
        raise InputError("header counts must be non-negative")
    body = lines[1:]
    if len(body) != m:
        raise InputError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for lineno, ln in body:
        u, v = _int_fields(ln, lineno, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"line {lineno}: vertex out of range [0, {n})")
        if u == v:
            raise InputError(f"line {lineno}: self-loop at vertex {u}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def emit_edge_list(G: Graph) -> str:
    edges = G.edges()
    out = [f"{G.n} {len(edges)}"]
    out.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(out) + "\n"


def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS ``p edge n m`` / ``e u v`` (1-based) text."""
    n = None
    m = 0
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if not ln or ln.startswith("c"):
            continue
        tag, *rest = ln.split()
        if tag == "p":
            if n is not None:
                raise InputError(f"line {lineno}: duplicate problem line")
            if len(rest) != 3 or rest[0] not in ("edge", "col"):
                raise InputError(f"line {lineno}: malformed problem line {raw!r}")
            n, m = _int_fields(" ".join(rest[1:]), lineno, 2)
        elif tag == "e":
            if n is None:
                raise InputError(f"line {lineno}: edge before problem line")
            u, v = _int_fields(" ".join(rest), lineno, 2)
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError(f"line {lineno}: vertex out of range [1, {n}]")
            if u == v:
                raise InputError(f"line {lineno}: self-loop at vertex {u}")
            edges.append((u - 1, v - 1))
        else:
            raise InputError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise InputError("missing 'p edge n m' header")
    if len(edges) != m:
        raise InputError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def emit_dimacs(G: Graph) -> str:
    edges = G.edges()
    out = [f"p edge {G.n} {len(edges)}"]
    out.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> Graph:
    """Auto-detect DIMACS (first content line starts with ``c`` or ``p``) or edge list."""
    for ln in text.splitlines():
        ln = ln.strip()
        if ln:
            return parse_dimacs(text) if ln[0] in "cp" else parse_edge_list(text)
    raise InputError("empty graph file")


# ---------------------------------------------------------------------------
# cliques and neighbourhoods
# ---------------------------------------------------------------------------


def _check_vertices(G: Graph, S: Iterable[int]) -> list[int]:
    verts = list(S)
    for v in verts:
        if not 0 <= v < G.n:
            raise InputError(f"vertex {v} out of range for n={G.n}")
    return verts


def common_mask(G: Graph, vertices: Iterable[int]) -> int:
    """Bitmask of vertices adjacent to every vertex in ``vertices``."""
    mask = (1 << G.n) - 1
    for v in vertices:
        mask &= G.masks[v]
    return mask


def enumerate_cliques(G: Graph, t: int, within: int | None = None) -> CliqueList:
    """All copies of ``K_t`` in ``G`` (or in ``G[within]`` for a vertex bitmask).

    Ordered backtracking: a partial clique is only extended by vertices larger
    than its last vertex that lie in the common neighbourhood so far, so each
    copy is produced once and in lexicographic order.
    """
    if t < 1:
        raise InputError(f"clique size must be >= 1, got {t}")
    masks = G.masks
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def extend(cand: int, need: int) -> None:
        if need == 0:
            out.append(tuple(prefix))
            return
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            prefix.append(v)
            extend(cand & masks[v], need - 1)
            prefix.pop()

    start = (1 << G.n) - 1 if within is None else within
    extend(start, t)
    return CliqueList(t, out)


def extension_set(G: Graph, H: Sequence[int]) -> frozenset[int]:
    """Vertices adjacent to every vertex of the clique ``H``."""
    verts = _check_vertices(G, H)
    if not is_clique(G, verts):
        raise InputError(f"{tuple(H)} is not a clique")
    return frozenset(_bits(common_mask(G, verts)))


def is_clique(G: Graph, S: Iterable[int]) -> bool:
    verts = _check_vertices(G, S)
    masks = G.masks
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if not masks[u] >> v & 1:
                return False
    return True


def common_neighbor_count(G: Graph, vertices: Iterable[int]) -> int:
    return common_mask(G, _check_vertices(G, vertices)).bit_count()
