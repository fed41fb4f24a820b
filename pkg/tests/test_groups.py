from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from cubecage import InputError, PreconditionError, ResourceError, SimplicialGraph
from cubecage.complexes import grid_with_end_rows, path
from cubecage.groups import (format_word, parse_word, product_tight_cage, raag_ball,
                             raag_boundary_equals_BX, raag_reduce, racg_ball,
                             racg_boundary_equals_BX, racg_has_straight_links,
                             racg_is_infinite, racg_reduce, type_partition)
from cubecage.hyperplanes import reducibility_witness
from cubecage.io import load_graph
from oracles import cayley_ball, raag_heap, racg_element, tits_matrices

EDGE = SimplicialGraph.from_edges("ab", [("a", "b")])
TWO_POINTS = SimplicialGraph.from_edges("ab", [])
SINGLE = SimplicialGraph.from_edges("a", [])


def graphs_up_to(n):
    """Every labelled simplicial graph on vertex sets 'a', 'ab', ... of size <= n."""
    for k in range(1, n + 1):
        vs = "abcd"[:k]
        pairs = list(combinations(vs, 2))
        for mask in range(1 << len(pairs)):
            yield SimplicialGraph.from_edges(vs, [p for i, p in enumerate(pairs) if mask >> i & 1])


SMALL_GRAPHS = list(graphs_up_to(4))


class TestReduce:
    def test_examples(self):
        assert format_word(racg_reduce("aba", EDGE)) == "b"
        assert format_word(racg_reduce("abab", TWO_POINTS)) == "abab"
        assert format_word(raag_reduce("a b a^-1", EDGE)) == "b"
        assert raag_reduce("a a^-1", SINGLE) == ()

    def test_unknown_generator(self):
        with pytest.raises(InputError):
            racg_reduce("az", EDGE)

    def test_parse_round_trip(self):
        w = parse_word("a b^-1 a", EDGE, involutive=False)
        assert w == (("a", 1), ("b", -1), ("a", 1))
        assert parse_word(format_word(w), EDGE, involutive=False) == w

    def test_reduction_is_idempotent_and_shortlex(self):
        gamma = SimplicialGraph.from_edges("abc", [("a", "c")])
        for word in ("cab", "ca", "acbca", "cc"):
            r = racg_reduce(word, gamma)
            assert racg_reduce(r, gamma) == r
        # a and c commute, so the shortlex representative puts a first
        assert format_word(racg_reduce("ca", gamma)) == "ac"


@settings(max_examples=150)
@given(st.sampled_from(SMALL_GRAPHS), st.data())
def test_racg_reduce_matches_tits_representation(gamma, data):
    letters = list(gamma.vertices)
    u = data.draw(st.lists(st.sampled_from(letters), max_size=6))
    v = data.draw(st.lists(st.sampled_from(letters), max_size=6))
    mats = tits_matrices(gamma)
    same = racg_element(u, gamma, mats) == racg_element(v, gamma, mats)
    ru = racg_reduce(tuple((x, 1) for x in u), gamma)
    rv = racg_reduce(tuple((x, 1) for x in v), gamma)
    assert (ru == rv) == same
    # a normal form never gets longer and denotes the same element
    assert len(ru) <= len(u)
    assert racg_element([x for x, _ in ru], gamma, mats) == racg_element(u, gamma, mats)


@settings(max_examples=150)
@given(st.sampled_from(SMALL_GRAPHS), st.data())
def test_raag_reduce_matches_heaps(gamma, data):
    letters = [(x, e) for x in gamma.vertices for e in (1, -1)]
    u = tuple(data.draw(st.lists(st.sampled_from(letters), max_size=6)))
    v = tuple(data.draw(st.lists(st.sampled_from(letters), max_size=6)))
    same = raag_heap(u, gamma) == raag_heap(v, gamma)
    assert (raag_reduce(u, gamma) == raag_reduce(v, gamma)) == same
    assert raag_heap(raag_reduce(u, gamma), gamma) == raag_heap(u, gamma)


class TestBalls:
    def test_sizes(self):
        assert racg_ball(TWO_POINTS, 3).n == 7
        assert racg_ball(EDGE, 2).n == 4
        assert raag_ball(EDGE, 2).n == 13

    def test_d_infinity_ball_is_a_path(self):
        b = racg_ball(TWO_POINTS, 3)
        assert sorted(map(len, b.hyperplanes)) == [1] * 6
        assert sorted(b.labels[v] for v in b.frontier) == ["aba", "bab"]

    @pytest.mark.parametrize("gamma", SMALL_GRAPHS[::3])
    @pytest.mark.parametrize("involutive", [True, False])
    def test_words_match_cayley_graph(self, gamma, involutive):
        radius = 3
        ball = (racg_ball if involutive else raag_ball)(gamma, radius)
        oracle = cayley_ball(gamma, radius, involutive)
        inside = [i for i, w in enumerate(ball.words) if len(w) <= radius]
        assert len(inside) == len(oracle)
        for i in inside:
            w = ball.words[i]
            key = (racg_element([x for x, _ in w], gamma) if involutive else raag_heap(w, gamma))
            assert oracle[key][0] == len(w) == ball.dist[0, i]

    @pytest.mark.parametrize("gamma", SMALL_GRAPHS)
    def test_identity_classes_follow_the_graph(self, gamma):
        for ball in (racg_ball(gamma, 2), raag_ball(gamma, 2)):
            at_identity = {}
            for k, hp in enumerate(ball.hyperplanes):
                if any(0 in e for e in hp.edges):
                    at_identity[ball.class_generator(k)] = k
            assert set(at_identity) == set(gamma.vertices)
            assert len(set(at_identity.values())) == gamma.order
            adj = {frozenset(e) for e in gamma.edges}
            for s, t in combinations(gamma.vertices, 2):
                crossed = bool(ball.crossing[at_identity[s], at_identity[t]])
                assert crossed == (frozenset((s, t)) in adj)

    @pytest.mark.parametrize("gamma", SMALL_GRAPHS[::2])
    def test_growth(self, gamma):
        sizes = [racg_ball(gamma, r).n for r in range(1, 6)]
        assert sizes == sorted(sizes)
        if gamma.is_complete():
            assert sizes[-1] == sizes[-2] == 2 ** gamma.order
        else:
            assert len(set(sizes)) == len(sizes)

    def test_cap(self):
        p4 = SimplicialGraph.from_edges("abcd", [("a", "b"), ("b", "c"), ("c", "d")])
        with pytest.raises(ResourceError):
            racg_ball(p4, 10, cap=100)
        with pytest.raises(InputError):
            racg_ball(p4, 0)


class TestCriteria:
    def test_straight_links(self, fixtures):
        star = SimplicialGraph.from_edges("oxyz", [("o", "x"), ("o", "y"), ("o", "z")])
        assert racg_has_straight_links(star) is False
        assert racg_has_straight_links(load_graph(fixtures / "p4.json")) is True
        k3 = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c"), ("a", "c")])
        assert racg_is_infinite(k3) is False
        assert racg_is_infinite(TWO_POINTS) is True

    def test_certificates(self, fixtures):
        c4 = racg_boundary_equals_BX(load_graph(fixtures / "c4.json"))
        assert c4.equal is False and c4.join is not None
        p4 = racg_boundary_equals_BX(load_graph(fixtures / "p4.json"))
        assert p4.summary() == "∂X = B(X): true (Γ not a join)"
        assert raag_boundary_equals_BX(SINGLE).equal is True
        k3 = SimplicialGraph.from_edges("abc", [("a", "b"), ("b", "c"), ("a", "c")])
        assert racg_boundary_equals_BX(k3).infinite is False

    def test_certificate_carries_product_cage(self, fixtures):
        cert = racg_boundary_equals_BX(load_graph(fixtures / "c4.json"), radius=4)
        assert cert.product_cage is not None and cert.product_cage.passed


class TestProductCage:
    def test_grid_middle_column(self):
        g = grid_with_end_rows(3, 5)
        rows, cols = reducibility_witness(g)
        tc = product_tight_cage(g, (cols, rows), 7)
        assert tc.passed and sorted(t.cls for t in tc.T) == [1, 5]
        assert tc.core == frozenset(range(5, 10))

    def test_c4_ball_at_identity(self, fixtures):
        ball = racg_ball(load_graph(fixtures / "c4.json"), 4)
        tc = product_tight_cage(ball, type_partition(ball, "ac"), ball.identity)
        assert tc.passed and len(tc.T) == 2

    def test_non_reducible(self):
        p = path(4)
        with pytest.raises(PreconditionError):
            product_tight_cage(p, ((0, 1), (2, 3)), 0)

    def test_single_minimal_halfspace(self, fixtures):
        ball = racg_ball(load_graph(fixtures / "p3.json"), 4)
        cert = racg_boundary_equals_BX(load_graph(fixtures / "p3.json"), radius=4)
        assert cert.equal is False and cert.product_cage is None
        assert "|T| >= 2" in cert.note
        assert ball.n > 0
