from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from cubecage import InputError
from cubecage.complexes import grid, hypercube, path, star
from cubecage.hyperplanes import edge_halfspace
from cubecage.ultrafilters import (Ultrafilter, consistent_mask, enumerate_consistent,
                                   hyperplane_weight, is_consistent, minimal_by_carrier,
                                   minimal_by_order, minimal_halfspaces, nested_pairs, principal,
                                   uf_distance, vertex_of)
from strategies import complexes


def test_principal_examples():
    p = path(2)
    alpha = principal(p, 1)
    assert edge_halfspace(p, 0, 1) in alpha
    assert edge_halfspace(p, 2, 1) in alpha
    e = path(1)
    assert principal(e, 0) != principal(e, 1)
    assert principal(e, 0).orientation == (0,)


def test_inconsistent_orientation():
    p = path(2)
    toward_ends = Ultrafilter((edge_halfspace(p, 1, 0).side, edge_halfspace(p, 1, 2).side))
    assert not is_consistent(p, toward_ends)
    with pytest.raises(InputError):
        vertex_of(p, toward_ends)


def test_weights_and_distance_examples():
    p = path(2)
    assert hyperplane_weight(p, 0, 0) == Fraction(1)
    assert hyperplane_weight(p, 1, 0) == Fraction(1, 2)
    assert uf_distance(p, principal(p, 0), principal(p, 2), 0) == 1
    assert uf_distance(p, principal(p, 1), principal(p, 1), 0) == 0
    assert uf_distance(hypercube(2), principal(hypercube(2), 0), principal(hypercube(2), 1), 0) == 1


def test_minimal_halfspace_examples():
    p = path(3)
    assert [h.vertices for h in minimal_halfspaces(p, principal(p, 3))] == [frozenset({3})]
    s = star(3)
    mins = minimal_halfspaces(s, principal(s, 0))
    assert len(mins) == 3 and all(0 in h.vertices for h in mins)
    q = hypercube(2)
    assert len(minimal_halfspaces(q, principal(q, 0))) == 2


@given(complexes(max_size=20))
def test_bijection_with_vertices(c):
    if c.num_classes > 12:
        return
    found = enumerate_consistent(c)
    assert sorted(vertex_of(c, a) for a in found) == list(range(c.n))
    for a in found:
        assert a == principal(c, vertex_of(c, a))


@given(complexes(max_size=20))
def test_consistency_matches_pairwise_intersection(c):
    if c.num_classes > 10:
        return
    rows = np.array(list(product((0, 1), repeat=c.num_classes)), dtype=np.int8)
    mask = consistent_mask(c, rows)
    for row, ok in zip(rows, mask):
        assert bool(ok) == oracles.consistent_by_pairs(c, row) == is_consistent(c, tuple(row))


@given(complexes(max_size=30))
def test_nested_pairs_are_nested(c):
    for i, s, j, t in nested_pairs(c):
        small = c.sides[:, i] == bool(s)
        big = c.sides[:, j] == bool(t)
        assert not (small & ~big).any()


@given(complexes(max_size=30), st.data())
def test_metric_axioms(c, data):
    b, u, v, w = (data.draw(st.integers(0, c.n - 1)) for _ in range(4))
    a, bb, cc = principal(c, u), principal(c, v), principal(c, w)
    duv = uf_distance(c, a, bb, b)
    assert duv == uf_distance(c, bb, a, b)
    assert (duv == 0) == (u == v)
    assert uf_distance(c, a, cc, b) <= duv + uf_distance(c, bb, cc, b)


@given(complexes(max_size=30), st.data())
def test_minimal_halfspace_routes_agree(c, data):
    alpha = principal(c, data.draw(st.integers(0, c.n - 1)))
    assert minimal_by_order(c, alpha) == minimal_by_carrier(c, alpha) == minimal_halfspaces(c, alpha)


def test_grid_count():
    assert len(enumerate_consistent(grid(3, 5))) == 15
