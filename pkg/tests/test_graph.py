import itertools
import math

import numpy as np
import pytest

from cliquemm.cliques import count_bruteforce
from cliquemm.errors import InputError
from cliquemm.graph import (
    Graph,
    common_neighbor_count,
    complete,
    emit_dimacs,
    emit_edge_list,
    empty,
    enumerate_cliques,
    extension_set,
    gen_gnp,
    gen_planted,
    is_clique,
    parse_dimacs,
    parse_edge_list,
    parse_graph,
)
from cliquemm.multidim import common_neighbors_tensor
from cliquemm.rng import XorShift64Star, probability_threshold

PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])
CYCLE5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def assert_simple(G):
    A = G.adj.to_dense()
    assert np.array_equal(A, A.T)
    assert not A.diagonal().any()


def exhaustive_cliques(G, t):
    return [S for S in itertools.combinations(range(G.n), t) if all(G.has_edge(u, v) for u, v in itertools.combinations(S, 2))]


class TestRng:
    def test_golden_stream(self):
        # frozen from an independent numpy-uint64 implementation of splitmix64 + xorshift64*
        rng = XorShift64Star(42)
        assert [rng.next_u64() for _ in range(4)] == [
            3580622183945639842,
            10378725325292465923,
            8967075514996744559,
            5001014893397904463,
        ]
        assert XorShift64Star(0).next_u64() == 8916199331640804048

    def test_thresholds(self):
        assert probability_threshold(0) == 0
        assert probability_threshold(1) == 1 << 53
        assert probability_threshold(0.5) == 1 << 52
        with pytest.raises(ValueError):
            probability_threshold(1.5)

    def test_below_in_range(self):
        rng = XorShift64Star(3)
        draws = [rng.below(7) for _ in range(2000)]
        assert set(draws) == set(range(7))


class TestGraph:
    def test_rejects_self_loop_and_asymmetry(self):
        with pytest.raises(InputError):
            Graph.from_edges(3, [(1, 1)])
        bad = np.zeros((3, 3), dtype=bool)
        bad[0, 1] = True
        with pytest.raises(InputError):
            Graph.from_dense(bad)
        with pytest.raises(InputError):
            Graph.from_edges(3, [(0, 3)])

    def test_edges_sorted(self):
        G = Graph.from_edges(4, [(3, 2), (1, 0), (2, 0)])
        assert G.edges() == [(0, 1), (0, 2), (2, 3)]
        assert G.num_edges == 3


class TestGenerators:
    def test_gnp_extremes(self):
        assert gen_gnp(9, 0, 1) == empty(9)
        assert gen_gnp(9, 1, 1) == complete(9)

    def test_gnp_deterministic(self):
        assert gen_gnp(20, 0.5, 42) == gen_gnp(20, 0.5, 42)
        assert gen_gnp(20, 0.5, 42) != gen_gnp(20, 0.5, 43)

    def test_gnp_frozen_instance(self):
        G = gen_gnp(20, 0.5, 42)
        assert G.num_edges == 87
        assert G.edges()[:5] == [(0, 1), (0, 3), (0, 4), (0, 7), (0, 11)]

    def test_gnp_bad_p(self):
        with pytest.raises(InputError):
            gen_gnp(5, 1.2, 0)

    @pytest.mark.parametrize("n,p,seed", [(10, 0.3, 1), (40, 0.5, 2), (25, 0.9, 3)])
    def test_simple(self, n, p, seed):
        assert_simple(gen_gnp(n, p, seed))
        assert_simple(gen_planted(n, p, 5, seed)[0])

    def test_planted_on_empty_background(self):
        G, S = gen_planted(10, 0, 4, 123)
        assert len(S) == 4 and G.num_edges == 6
        assert len(enumerate_cliques(G, 4)) == 1
        assert len(enumerate_cliques(G, 3)) == math.comb(4, 3)

    @pytest.mark.parametrize("seed", range(10))
    def test_planted_is_clique(self, seed):
        G, S = gen_planted(20, 0.3, 6, seed)
        assert is_clique(G, S) and len(set(S)) == 6

    def test_planted_oracle(self):
        G, S = gen_planted(30, 0.3, 6, 7)
        assert S == (3, 6, 9, 11, 18, 29)
        assert count_bruteforce(G, 6).count >= 1

    def test_planted_too_big(self):
        with pytest.raises(InputError):
            gen_planted(4, 0.5, 5, 0)

    def test_complete_and_empty(self):
        assert complete(1) == empty(1)
        assert complete(4).num_edges == 6
        assert not empty(6).adj.to_dense().any()


class TestFormats:
    def test_edge_list(self):
        assert parse_edge_list("3 2\n0 1\n1 2\n") == PATH3

    def test_dimacs(self):
        assert parse_dimacs("p edge 3 2\ne 1 2\ne 2 3\n") == PATH3

    def test_dimacs_comments_and_autodetect(self):
        text = "c a path\nc\np edge 3 2\ne 1 2\ne 2 3\n"
        assert parse_graph(text) == PATH3
        assert parse_graph("3 2\n0 1\n1 2\n") == PATH3

    def test_emit_bit_exact(self):
        assert emit_edge_list(PATH3) == "3 2\n0 1\n1 2\n"
        assert emit_dimacs(PATH3) == "p edge 3 2\ne 1 2\ne 2 3\n"

    def test_roundtrip(self):
        G = gen_gnp(16, 0.5, 5)
        assert parse_edge_list(emit_edge_list(G)) == G
        assert parse_dimacs(emit_dimacs(G)) == G
        text = emit_edge_list(G)
        assert emit_edge_list(parse_edge_list(text)) == text

    def test_duplicate_edges_idempotent(self):
        assert parse_edge_list("3 3\n0 1\n1 0\n1 2\n") == PATH3

    @pytest.mark.parametrize(
        "text",
        [
            "",
            "3\n0 1\n",
            "3 2\n0 1\n",
            "3 1\n0 3\n",
            "3 1\n1 1\n",
            "3 1\n0 x\n",
            "-1 0\n",
        ],
    )
    def test_edge_list_errors(self, text):
        with pytest.raises(InputError):
            parse_edge_list(text)

    @pytest.mark.parametrize(
        "text",
        [
            "e 1 2\n",
            "p edge 3\n",
            "p edge 3 1\ne 0 1\n",
            "p edge 3 1\ne 2 2\n",
            "p edge 3 2\ne 1 2\n",
            "p edge 3 1\np edge 3 1\ne 1 2\n",
            "p edge 3 1\nx 1 2\n",
        ],
    )
    def test_dimacs_errors(self, text):
        with pytest.raises(InputError):
            parse_dimacs(text)


class TestCliques:
    def test_k5_triangles(self):
        L = enumerate_cliques(complete(5), 3)
        assert len(L) == 10 and L.copies == sorted(L.copies)

    def test_c5_triangle_free(self):
        assert len(enumerate_cliques(CYCLE5, 3)) == 0

    def test_singletons(self):
        assert enumerate_cliques(CYCLE5, 1).copies == [(v,) for v in range(5)]

    def test_gnp15_k4(self):
        G = gen_gnp(15, 0.5, 1)
        assert enumerate_cliques(G, 4).copies == exhaustive_cliques(G, 4)

    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("p", [0.3, 0.6, 0.8])
    def test_exhaustive_agreement(self, seed, p):
        G = gen_gnp(16, p, seed)
        for t in range(1, 6):
            L = enumerate_cliques(G, t)
            assert L.copies == exhaustive_cliques(G, t)
            assert all(is_clique(G, c) for c in L)

    @pytest.mark.parametrize("n", range(1, 11))
    def test_complete_closed_form(self, n):
        for t in range(1, 6):
            assert len(enumerate_cliques(complete(n), t)) == math.comb(n, t)

    def test_within_mask(self):
        G = complete(6)
        L = enumerate_cliques(G, 2, within=0b101001)
        assert L.copies == [(0, 3), (0, 5), (3, 5)]

    def test_bad_size(self):
        with pytest.raises(InputError):
            enumerate_cliques(CYCLE5, 0)


class TestExtensionAndClique:
    def test_k4(self):
        assert extension_set(complete(4), (0, 1, 2)) == {3}

    def test_star(self):
        star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
        assert extension_set(star, (1,)) == {0}

    def test_pairs_gnp(self):
        G = gen_gnp(12, 0.6, 4)
        for H in enumerate_cliques(G, 2):
            assert extension_set(G, H) == set(G.neighbors(H[0])) & set(G.neighbors(H[1]))

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_clique_extension(self, seed):
        G = gen_gnp(14, 0.6, seed)
        for t in (1, 2, 3):
            for H in enumerate_cliques(G, t):
                ext = extension_set(G, H)
                assert ext == {v for v in range(G.n) if v not in H and is_clique(G, H + (v,))}
                assert not ext & set(H)

    def test_not_a_clique(self):
        with pytest.raises(InputError):
            extension_set(CYCLE5, (0, 2))

    def test_is_clique(self):
        k4_minus = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)])
        assert is_clique(k4_minus, [2])
        assert is_clique(k4_minus, [])
        assert not is_clique(k4_minus, [0, 1, 2, 3])
        with pytest.raises(InputError):
            is_clique(k4_minus, [4])

    def test_common_neighbor_count(self):
        assert common_neighbor_count(complete(4), (0, 1, 2)) == 1
        assert common_neighbor_count(empty(6), (0, 3)) == 0

    def test_common_neighbor_count_vs_tensor(self):
        G = gen_gnp(20, 0.5, 9)
        rng = np.random.default_rng(0)
        D3 = common_neighbors_tensor(G, 3)
        for _ in range(50):
            t = tuple(int(x) for x in rng.integers(0, 20, 3))
            assert common_neighbor_count(G, t) == D3.entry(t)
