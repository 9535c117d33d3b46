import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heintze.algebra import derived_subalgebra, jacobi_violations
from heintze.corpus import random_graph
from heintze.errors import InputError, TooLarge
from heintze.graphs import DirectedGraph, build_algebra, derivation_from_weights, graph_isomorphic
from heintze.invariants import compare, make_heintze
from heintze.spectral import char_poly, leibniz_violations

from conftest import diag

TRIANGLE = DirectedGraph(3, ((0, 1), (1, 2), (0, 2)))
TWO_EDGES = DirectedGraph(4, ((0, 1), (2, 3)))


def to_nx(g):
    out = nx.Graph()
    out.add_nodes_from(range(g.vertex_count))
    out.add_edges_from(g.edges)
    return out


class TestBuild:
    def test_gamma1(self):
        a = build_algebra(TRIANGLE)
        assert a.dim == 6 and a.nilpotency_class == 2
        assert a.labels == ("X1", "X2", "X3", "Z1", "Z2", "Z3")

    def test_edgeless(self):
        a = build_algebra(DirectedGraph(4, ()))
        assert a.dim == 4 and a.is_abelian()

    def test_gamma2(self):
        a = build_algebra(TWO_EDGES)
        assert a.dim == 6 and derived_subalgebra(a).dim == 2

    @pytest.mark.parametrize("edges", [((0, 0),), ((0, 1), (1, 0)), ((0, 5),)])
    def test_invalid(self, edges):
        with pytest.raises(InputError):
            DirectedGraph(3, edges)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_always_valid(self, seed):
        g = random_graph(random.Random(seed), 6)
        a = build_algebra(g)
        assert not jacobi_violations(a)
        assert a.dim == g.vertex_count + g.edge_count


class TestWeights:
    def test_alpha(self):
        assert derivation_from_weights(TRIANGLE, [1, 2, 3]).matrix == diag(1, 2, 3, 3, 5, 4)

    def test_beta(self):
        assert derivation_from_weights(TWO_EDGES, [1, 2, 3, 3]).matrix == diag(1, 2, 3, 3, 3, 6)

    def test_all_ones(self):
        assert derivation_from_weights(TRIANGLE, [1, 1, 1]).matrix == diag(1, 1, 1, 2, 2, 2)

    def test_rejects_non_positive(self):
        with pytest.raises(InputError):
            derivation_from_weights(TRIANGLE, [1, 0, 2])

    def test_wrong_count(self):
        with pytest.raises(InputError):
            derivation_from_weights(TRIANGLE, [1, 2])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10_000))
    def test_leibniz(self, seed):
        rng = random.Random(seed)
        g = random_graph(rng, 6)
        a = build_algebra(g)
        d = derivation_from_weights(g, [rng.randint(1, 5) for _ in range(g.vertex_count)], a)
        assert not leibniz_violations(a, d.matrix)


class TestIsomorphism:
    def test_gamma1_gamma2(self):
        assert graph_isomorphic(TRIANGLE, TWO_EDGES) == (False, None)

    def test_self(self):
        assert graph_isomorphic(TRIANGLE, TRIANGLE) == (True, (0, 1, 2))

    def test_relabeled_triangle(self):
        for perm in itertools.permutations(range(3)):
            g = DirectedGraph(3, tuple((perm[s], perm[t]) for s, t in TRIANGLE.edges))
            ok, w = graph_isomorphic(TRIANGLE, g)
            assert ok
            assert frozenset(frozenset((w[s], w[t])) for s, t in TRIANGLE.edges) == g.undirected()

    def test_orientation_ignored(self):
        g = DirectedGraph(3, ((1, 0), (2, 1), (2, 0)))
        assert graph_isomorphic(TRIANGLE, g)[0]

    def test_path_vs_star(self):
        path = DirectedGraph(4, ((0, 1), (1, 2), (2, 3)))
        star = DirectedGraph(4, ((0, 1), (0, 2), (0, 3)))
        assert not graph_isomorphic(path, star)[0]

    def test_too_large(self):
        g = DirectedGraph(13, ())
        with pytest.raises(TooLarge):
            graph_isomorphic(g, g)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 100_000))
    def test_matches_networkx(self, seed):
        rng = random.Random(seed)
        g1 = random_graph(rng, 6)
        if rng.random() < 0.5:
            perm = list(range(g1.vertex_count))
            rng.shuffle(perm)
            g2 = DirectedGraph(g1.vertex_count, tuple((perm[t], perm[s]) if rng.random() < 0.5 else (perm[s], perm[t])
                                                      for s, t in g1.edges))
        else:
            g2 = random_graph(rng, 6)
        ok, _ = graph_isomorphic(g1, g2)
        assert ok == nx.is_isomorphic(to_nx(g1), to_nx(g2))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000))
    def test_witness_transports_invariants(self, seed):
        rng = random.Random(seed)
        g1 = random_graph(rng, 5)
        perm = list(range(g1.vertex_count))
        rng.shuffle(perm)
        g2 = DirectedGraph(g1.vertex_count, tuple((perm[s], perm[t]) for s, t in g1.edges))
        ok, w = graph_isomorphic(g1, g2)
        assert ok
        a1, a2 = build_algebra(g1), build_algebra(g2)
        assert a1.dim == a2.dim
        assert derived_subalgebra(a1).dim == derived_subalgebra(a2).dim
        w1 = [rng.randint(1, 4) for _ in range(g1.vertex_count)]
        w2 = [0] * g1.vertex_count
        for v, img in enumerate(w):
            w2[img] = w1[v]
        d1 = derivation_from_weights(g1, w1, a1)
        d2 = derivation_from_weights(g2, w2, a2)
        assert char_poly(d1.matrix) == char_poly(d2.matrix)


def test_headline_round_trip():
    a1, a2 = build_algebra(TRIANGLE), build_algebra(TWO_EDGES)
    h1 = make_heintze(a1, derivation_from_weights(TRIANGLE, [1, 2, 3], a1))
    h2 = make_heintze(a2, derivation_from_weights(TWO_EDGES, [1, 2, 3, 3], a2))
    assert compare(h1, h2).outcome == "CharPoly"
