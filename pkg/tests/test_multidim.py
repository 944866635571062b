import itertools

import numpy as np
import pytest

from cliquemm.errors import InputError, LimitExceeded
from cliquemm.graph import Graph, complete, gen_gnp
from cliquemm.guards import Limits
from cliquemm.matrix import IntMatrix, matmul_naive, transpose
from cliquemm.multidim import (
    common_neighbors_tensor,
    find_witness,
    flatten,
    kdim_product,
    kdim_product_reference,
)

CYCLE5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def rand01(rng, n, k):
    return [IntMatrix(rng.integers(0, 2, (n, n))) for _ in range(k)]


class TestFlatten:
    def test_k2_unchanged(self):
        mats = rand01(np.random.default_rng(0), 5, 2)
        left, right = flatten(mats, 1)
        assert left == mats[0] and right == mats[1]

    def test_all_ones(self):
        ones = IntMatrix(np.ones((2, 2), dtype=np.uint64))
        left, right = flatten([ones] * 3, 2)
        assert left.shape == (4, 2) and left.data.min() == 1
        assert right.shape == (2, 2)

    def test_rows_are_elementwise_products(self):
        mats = rand01(np.random.default_rng(11), 4, 3)
        left, right = flatten(mats, 1)
        a = [m.tolist() for m in mats]
        assert left.tolist() == a[0]
        for j1, j2 in [(0, 0), (1, 3), (3, 2), (2, 1)]:
            row = [a[1][j1][l] * a[2][j2][l] for l in range(4)]
            assert right.tolist()[j1 * 4 + j2] == row

    def test_errors(self):
        I = IntMatrix.identity(3)
        with pytest.raises(InputError):
            flatten([I, IntMatrix.identity(4)], 1)
        with pytest.raises(InputError):
            flatten([I, IntMatrix(2 * np.eye(3, dtype=int))], 1)
        with pytest.raises(InputError):
            flatten([I, I, I], 3)
        with pytest.raises(InputError):
            flatten([I, IntMatrix.zeros(3, 2)], 1)


class TestKdimProduct:
    def test_k2_is_product_with_transpose(self):
        mats = rand01(np.random.default_rng(3), 6, 2)
        D = kdim_product(mats)
        expected = matmul_naive(mats[0], transpose(mats[1]))
        assert all(D.entry((i, j)) == expected[i, j] for i in range(6) for j in range(6))

    def test_k4_triple(self):
        A = complete(4).adjacency()
        assert kdim_product([A] * 3).entry((0, 1, 2)) == 1

    def test_splits_agree_with_reference(self):
        mats = rand01(np.random.default_rng(6), 6, 3)
        ref = kdim_product_reference(mats)
        assert kdim_product(mats, 1) == ref
        assert kdim_product(mats, 2) == ref

    def test_reference_zero_and_ones(self):
        z = IntMatrix.zeros(3, 3)
        assert not kdim_product_reference([z] * 3).tensor().any()
        ones = IntMatrix(np.ones((3, 3), dtype=np.uint64))
        for k in (2, 3, 4):
            assert (kdim_product_reference([ones] * k).tensor() == 3).all()

    def test_reference_k4_cross_check(self):
        mats = rand01(np.random.default_rng(44), 4, 4)
        assert kdim_product_reference(mats) == kdim_product(mats, 2)

    def test_entry_layout_big_endian(self):
        mats = rand01(np.random.default_rng(9), 3, 4)
        D = kdim_product(mats, 3)
        a = [m.tolist() for m in mats]
        for t in itertools.product(range(3), repeat=4):
            direct = sum(a[0][t[0]][l] * a[1][t[1]][l] * a[2][t[2]][l] * a[3][t[3]][l] for l in range(3))
            assert D.entry(t) == direct
            assert D.flat[t[0] * 9 + t[1] * 3 + t[2], t[3]] == direct

    def test_entries_vectorised(self):
        mats = rand01(np.random.default_rng(12), 5, 3)
        D = kdim_product(mats, 2)
        tuples = list(itertools.product(range(5), repeat=3))
        assert list(D.entries(tuples)) == [D.entry(t) for t in tuples]

    def test_memory_guard(self):
        A = complete(10).adjacency()
        with pytest.raises(LimitExceeded):
            kdim_product([A] * 4, 2, limits=Limits(max_entries=5000))
        with pytest.raises(LimitExceeded):
            kdim_product_reference([A] * 4, limits=Limits(max_entries=5000))

    def test_permutation_symmetry(self):
        A = gen_gnp(7, 0.5, 1).adjacency()
        T = kdim_product([A] * 3).tensor()
        for perm in itertools.permutations(range(3)):
            assert np.array_equal(T, T.transpose(perm))


class TestCommonNeighbours:
    def test_k4(self):
        assert common_neighbors_tensor(complete(4), 3).entry((0, 1, 2)) == 1

    def test_c5(self):
        assert common_neighbors_tensor(CYCLE5, 2).entry((0, 2)) == 1

    def test_gnp_all_triples(self):
        G = gen_gnp(12, 0.5, 21)
        nbrs = [set(G.neighbors(v)) for v in range(G.n)]
        D = common_neighbors_tensor(G, 3)
        for t in itertools.product(range(12), repeat=3):
            assert D.entry(t) == len(nbrs[t[0]] & nbrs[t[1]] & nbrs[t[2]])

    def test_range(self):
        G = gen_gnp(9, 0.7, 2)
        D = common_neighbors_tensor(G, 3)
        for t in itertools.product(range(9), repeat=3):
            assert 0 <= D.entry(t) <= G.n - len(set(t))

    def test_k_too_small(self):
        with pytest.raises(InputError):
            common_neighbors_tensor(complete(3), 1)


class TestWitness:
    def test_all_ones_gives_zero(self):
        ones = IntMatrix(np.ones((4, 4), dtype=np.uint64))
        assert find_witness([ones] * 3, (1, 2, 3)) == 0

    def test_k4_unique(self):
        A = complete(4).adjacency()
        assert find_witness([A] * 3, (0, 1, 2)) == 3

    def test_absent(self):
        A = CYCLE5.adjacency()
        assert find_witness([A] * 3, (0, 1, 2)) is None

    def test_soundness_random(self):
        rng = np.random.default_rng(77)
        for _ in range(100):
            k = int(rng.integers(2, 5))
            n = int(rng.integers(2, 8))
            mats = [IntMatrix((rng.random((n, n)) < 0.5).astype(int)) for _ in range(k)]
            t = tuple(int(x) for x in rng.integers(0, n, k))
            w = find_witness(mats, t)
            entry = kdim_product_reference(mats).entry(t)
            if w is None:
                assert entry == 0
            else:
                assert all(m[i, w] == 1 for m, i in zip(mats, t))
                assert all(not all(m[i, l] for m, i in zip(mats, t)) for l in range(w))
