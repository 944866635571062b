"""k-dimensional matrix product of k n x n matrices.

For inputs ``A_1..A_k`` the product is the k-index tensor

    D[i_1, ..., i_k] = sum_l A_1[i_1, l] * A_2[i_2, l] * ... * A_k[i_k, l]

It is computed by flattening: the first ``k1`` matrices are combined into an
``n**k1 x n`` matrix whose row for the tuple ``(i_1..i_k1)`` is the elementwise
product of the corresponding input rows, the remaining ``k2 = k - k1`` into an
``n**k2 x n`` matrix the same way, and one rectangular product ``left @ right.T``
yields ``D`` as an ``n**k1 x n**k2`` matrix.

Tuples map to flat indices big-endian: ``row = sum_j i_j * n**(k1 - 1 - j)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .guards import DEFAULT_LIMITS, Limits
from .matrix import DEFAULT_TILE, IntMatrix, matmul, transpose


@dataclass(frozen=True, eq=False)
class MultiDimProduct:
    k: int
    n: int
    k1: int
    flat: IntMatrix

    @property
    def k2(self) -> int:
        return self.k - self.k1

    def _index(self, part: Sequence[int]) -> int:
        idx = 0
        for i in part:
            if not 0 <= i < self.n:
                raise IndexError(f"index {i} outside [0, {self.n})")
            idx = idx * self.n + i
        return idx

    def entry(self, t: Sequence[int]) -> int:
        if len(t) != self.k:
            raise InputError(f"expected a {self.k}-tuple, got {len(t)} indices")
        return self.flat[self._index(t[: self.k1]), self._index(t[self.k1:])]

    def entries(self, tuples) -> np.ndarray:
        """Vectorised :meth:`entry` over an ``(m, k)`` integer array."""
        tuples = np.asarray(tuples, dtype=np.int64).reshape(-1, self.k)
        weights = self.n ** np.arange(self.k - 1, -1, -1, dtype=np.int64)
        rows = tuples[:, : self.k1] @ weights[self.k2:]
        cols = tuples[:, self.k1:] @ weights[self.k1:]
        return self.flat.data[rows, cols]

    def tensor(self) -> np.ndarray:
        """Dense ``(n,) * k`` view of the product, independent of the split."""
        return self.flat.data.reshape((self.n,) * self.k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiDimProduct):
            return NotImplemented
        return (self.k, self.n) == (other.k, other.n) and bool(
            np.array_equal(self.tensor(), other.tensor())
        )


def default_split(k: int) -> int:
    return (k + 1) // 2


def _validate(mats: Sequence, k1: int | None) -> tuple[list[np.ndarray], int, int]:
    k = len(mats)
    if k < 2:
        raise InputError(f"need at least 2 matrices, got {k}")
    arrs = [(m if isinstance(m, IntMatrix) else IntMatrix(m)).data for m in mats]
    n = arrs[0].shape[0]
    for a in arrs:
        if a.shape != (n, n):
            raise InputError(f"all matrices must be {n}x{n}, got {a.shape[0]}x{a.shape[1]}")
        if a.size and a.max() > 1:
            raise InputError("matrix entries must be 0 or 1")
    if k1 is None:
        k1 = default_split(k)
    if not 1 <= k1 <= k - 1:
        raise InputError(f"split k1={k1} outside [1, {k - 1}]")
    return arrs, n, k1


def _row_products(arrs: Sequence[np.ndarray]) -> np.ndarray:
    out = arrs[0]
    cols = out.shape[1]
    for a in arrs[1:]:
        out = (out[:, None, :] * a[None, :, :]).reshape(-1, cols)
    return np.ascontiguousarray(out)


def flatten(mats: Sequence, k1: int, limits: Limits = DEFAULT_LIMITS) -> tuple[IntMatrix, IntMatrix]:
    """Return the ``n**k1 x n`` and ``n**k2 x n`` tuple-product matrices."""
    arrs, n, k1 = _validate(mats, k1)
    k2 = len(arrs) - k1
    limits.entries(n ** k1 * n, "flattened left operand")
    limits.entries(n ** k2 * n, "flattened right operand")
    return IntMatrix(_row_products(arrs[:k1])), IntMatrix(_row_products(arrs[k1:]))


def kdim_product(
    mats: Sequence,
    k1: int | None = None,
    backend: str = "blocked",
    limits: Limits = DEFAULT_LIMITS,
    tile: int = DEFAULT_TILE,
) -> MultiDimProduct:
    """k-dimensional product via one rectangular multiplication."""
    arrs, n, k1 = _validate(mats, k1)
    k = len(arrs)
    limits.product(n ** k1, n, n ** (k - k1), f"{k}-dimensional product")
    left, right = flatten(arrs, k1, limits)
    return MultiDimProduct(k, n, k1, matmul(left, transpose(right), backend, tile))


def kdim_product_reference(mats: Sequence, limits: Limits = DEFAULT_LIMITS) -> MultiDimProduct:
    """Evaluate the defining sum tuple by tuple in plain Python."""
    arrs, n, k1 = _validate(mats, None)
    k = len(arrs)
    limits.entries(n ** k, f"{k}-dimensional reference product")
    rows = [a.tolist() for a in arrs]
    values = []
    for t in itertools.product(range(n), repeat=k):
        total = 0
        for l in range(n):
            prod = 1
            for j, i in enumerate(t):
                prod *= rows[j][i][l]
                if not prod:
                    break
            total += prod
        values.append(total)
    flat = np.array(values, dtype=np.uint64).reshape(n ** k1, n ** (k - k1))
    return MultiDimProduct(k, n, k1, IntMatrix(flat))


def common_neighbors_tensor(
    G,
    k: int,
    k1: int | None = None,
    backend: str = "blocked",
    limits: Limits = DEFAULT_LIMITS,
    tile: int = DEFAULT_TILE,
) -> MultiDimProduct:
    """k-dimensional product of k copies of the adjacency matrix of ``G``.

    Entry ``(v_1..v_k)`` is the number of vertices adjacent to all of
    ``v_1..v_k``.
    """
    if k < 2:
        raise InputError(f"k must be >= 2, got {k}")
    A = G.adjacency()
    return kdim_product([A] * k, k1, backend, limits, tile)


def find_witness(mats: Sequence, t: Sequence[int]) -> int | None:
    """Smallest ``l`` with ``mats[j][t[j], l] == 1`` for every ``j``, else None.

    The matrices may be rectangular as long as they share a column count.
    """
    if len(mats) != len(t):
        raise InputError(f"{len(mats)} matrices but {len(t)} indices")
    rows = [(m if isinstance(m, IntMatrix) else IntMatrix(m)).data[i] for m, i in zip(mats, t)]
    hits = np.logical_and.reduce([r != 0 for r in rows])
    nz = np.flatnonzero(hits)
    return int(nz[0]) if nz.size else None
