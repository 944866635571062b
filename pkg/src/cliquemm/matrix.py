"""Dense exact integer and Boolean matrices.

Integer matrices hold unsigned 64-bit entries in row-major order; Boolean
matrices are bit-packed row by row.  Two multiplication backends are
provided, a straightforward triple loop and a cache-tiled loop, both compiled
with numba and both exact.
"""

from __future__ import annotations

import os
from typing import TYPE_CHECKING

import numba
import numpy as np
from numba import njit, prange

from .errors import InputError

if TYPE_CHECKING:
    from .graph import Graph

DEFAULT_TILE = 64
BACKENDS = ("naive", "blocked")

_U64_LIMIT = 1 << 64

# the TBB layer probe warns on older system TBB builds; workqueue is enough here
if "NUMBA_THREADING_LAYER" not in os.environ:
    numba.config.THREADING_LAYER = "workqueue"


class IntMatrix:
    """Immutable dense matrix of unsigned 64-bit integers."""

    __slots__ = ("_data",)

    def __init__(self, data):
        if isinstance(data, IntMatrix):
            arr = data._data
        else:
            raw = np.asarray(data)
            if raw.dtype == object or raw.dtype.kind == "f":
                raise InputError("IntMatrix entries must be integers")
            if raw.dtype.kind == "i" and raw.size and raw.min() < 0:
                raise InputError("IntMatrix entries must be non-negative")
            if raw.ndim == 1 and raw.size == 0:
                raw = raw.reshape(0, 0)
            if raw.ndim != 2:
                raise InputError(f"IntMatrix needs a 2-d array, got {raw.ndim}-d")
            arr = np.ascontiguousarray(raw, dtype=np.uint64)
            if arr is raw:
                arr = arr.copy()
            arr.setflags(write=False)
        self._data = arr

    @classmethod
    def _own(cls, arr: np.ndarray) -> "IntMatrix":
        # takes ownership of a fresh contiguous uint64 array without copying
        arr.setflags(write=False)
        obj = cls.__new__(cls)
        obj._data = arr
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls._own(np.zeros((rows, cols), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(np.eye(n, dtype=np.uint64))

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def data(self) -> np.ndarray:
        """Read-only ``(rows, cols)`` uint64 view."""
        return self._data

    def __getitem__(self, idx) -> int:
        i, j = idx
        return int(self._data[i, j])

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}x{self.cols})"

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self._data]

    def to_bool(self) -> "BoolMatrix":
        return BoolMatrix.from_dense(self._data != 0)


class BoolMatrix:
    """Immutable bit-packed Boolean matrix.

    Row ``i`` is stored in ``words[i]`` as bytes with little-endian bit order,
    so bit ``j`` lives in byte ``j // 8`` at position ``j % 8``.  Bits past
    ``cols`` in the last byte of a row are always zero.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        width = (cols + 7) // 8
        if words.shape != (rows, width):
            raise InputError(f"packed shape {words.shape} does not fit {rows}x{cols}")
        words = np.ascontiguousarray(words, dtype=np.uint8)
        if cols % 8 and rows:
            words = words.copy()
            words[:, -1] &= np.uint8((1 << (cols % 8)) - 1)
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.words = words

    @classmethod
    def from_dense(cls, dense) -> "BoolMatrix":
        arr = np.asarray(dense)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise InputError(f"BoolMatrix needs a 2-d array, got {arr.ndim}-d")
        rows, cols = arr.shape
        words = np.packbits(arr.astype(bool), axis=1, bitorder="little")
        if words.shape[1] != (cols + 7) // 8:
            words = np.zeros((rows, (cols + 7) // 8), dtype=np.uint8)
        return cls(rows, cols, words)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BoolMatrix":
        return cls(rows, cols, np.zeros((rows, (cols + 7) // 8), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> "BoolMatrix":
        return cls.from_dense(np.eye(n, dtype=bool))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        if self.cols == 0:
            return np.zeros((self.rows, 0), dtype=bool)
        return np.unpackbits(self.words, axis=1, count=self.cols, bitorder="little").astype(bool)

    def row_indices(self, i: int) -> np.ndarray:
        """Column indices of the set bits in row ``i``, ascending."""
        return np.flatnonzero(np.unpackbits(self.words[i], count=self.cols, bitorder="little"))

    def lift(self) -> IntMatrix:
        """0/1 integer copy."""
        return IntMatrix(self.to_dense().astype(np.uint64))

    def __getitem__(self, idx) -> bool:
        i, j = idx
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) outside {self.rows}x{self.cols}")
        return bool((self.words[i, j >> 3] >> (j & 7)) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoolMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.words, other.words))

    def __repr__(self) -> str:
        return f"BoolMatrix({self.rows}x{self.cols})"


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _naive_kernel(x, y, out):
    n, m = x.shape
    p = y.shape[1]
    for i in range(n):
        for j in range(p):
            s = np.uint64(0)
            for l in range(m):
                s += x[i, l] * y[l, j]
            out[i, j] = s


@njit(cache=True, parallel=True)
def _blocked_kernel(x, y, out, tile):
    n, m = x.shape
    p = y.shape[1]
    n_tiles = (n + tile - 1) // tile
    # each row tile is owned by one worker, so writes never collide
    for bi in prange(n_tiles):
        i0 = bi * tile
        i1 = min(i0 + tile, n)
        for l0 in range(0, m, tile):
            l1 = min(l0 + tile, m)
            for j0 in range(0, p, tile):
                j1 = min(j0 + tile, p)
                for i in range(i0, i1):
                    for l in range(l0, l1):
                        a = x[i, l]
                        if a != 0:
                            for j in range(j0, j1):
                                out[i, j] += a * y[l, j]


def _check_product(X: IntMatrix, Y: IntMatrix) -> None:
    if X.cols != Y.rows:
        raise InputError(f"cannot multiply {X.rows}x{X.cols} by {Y.rows}x{Y.cols}")
    if X.data.size and Y.data.size:
        bound = int(X.data.max()) * int(Y.data.max()) * X.cols
        if bound >= _U64_LIMIT:
            raise OverflowError("product entries may exceed 64 bits")


def matmul_naive(X: IntMatrix, Y: IntMatrix) -> IntMatrix:
    """Reference product: one dot product per output entry."""
    _check_product(X, Y)
    out = np.zeros((X.rows, Y.cols), dtype=np.uint64)
    if X.rows and Y.cols and X.cols:
        _naive_kernel(X.data, Y.data, out)
    return IntMatrix._own(out)


def matmul_blocked(X: IntMatrix, Y: IntMatrix, tile: int = DEFAULT_TILE) -> IntMatrix:
    """Cache-tiled product, bit-identical to :func:`matmul_naive`."""
    if tile < 1:
        raise InputError(f"tile must be >= 1, got {tile}")
    _check_product(X, Y)
    out = np.zeros((X.rows, Y.cols), dtype=np.uint64)
    if X.rows and Y.cols and X.cols:
        _blocked_kernel(X.data, Y.data, out, tile)
    return IntMatrix._own(out)


def matmul(X: IntMatrix, Y: IntMatrix, backend: str = "blocked", tile: int = DEFAULT_TILE) -> IntMatrix:
    if backend == "blocked":
        return matmul_blocked(X, Y, tile)
    if backend == "naive":
        return matmul_naive(X, Y)
    raise InputError(f"unknown backend {backend!r}; expected one of {BACKENDS}")


def bool_matmul(X: BoolMatrix, Y: BoolMatrix) -> BoolMatrix:
    """Boolean product: ``out[i, j] = OR_l (X[i, l] AND Y[l, j])``.

    Each output row is the OR of the packed rows of ``Y`` selected by the set
    bits of the corresponding row of ``X``.
    """
    if X.cols != Y.rows:
        raise InputError(f"cannot multiply {X.rows}x{X.cols} by {Y.rows}x{Y.cols}")
    out = np.zeros((X.rows, Y.words.shape[1]), dtype=np.uint8)
    for i in range(X.rows):
        idx = X.row_indices(i)
        if idx.size:
            np.bitwise_or.reduce(Y.words[idx], axis=0, out=out[i])
    return BoolMatrix(X.rows, Y.cols, out)


def transpose(X):
    if isinstance(X, IntMatrix):
        return IntMatrix(X.data.T)
    if isinstance(X, BoolMatrix):
        return BoolMatrix.from_dense(X.to_dense().T)
    raise TypeError(f"cannot transpose {type(X).__name__}")


def trace(X: IntMatrix) -> int:
    if X.rows != X.cols:
        raise InputError(f"trace of non-square {X.rows}x{X.cols} matrix")
    return sum(int(X.data[i, i]) for i in range(X.rows))


def two_path_counts(G: "Graph", backend: str = "blocked") -> IntMatrix:
    """``A @ A`` for the adjacency matrix ``A``: common-neighbour counts."""
    A = G.adjacency()
    return matmul(A, A, backend)
