"""Hyperplanes (Θ-classes), halfspaces, carriers and the crossing structure."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import networkx as nx
import numpy as np

from .errors import InputError, VerificationError
from .graph import SimplicialGraph
from .median import CubeComplex, link


@dataclass(frozen=True, order=True)
class Halfspace:
    """One side of a hyperplane. Equality and order use ``(cls, side)`` only."""

    cls: int
    side: int
    vertices: frozenset = field(default=frozenset(), compare=False, repr=False)
    carrier: frozenset = field(default=frozenset(), compare=False, repr=False)

    @property
    def key(self) -> tuple[int, int]:
        return (self.cls, self.side)

    def __str__(self) -> str:
        return f"{self.cls}:{self.side}"


@dataclass(frozen=True)
class Hyperplane:
    id: int
    edges: tuple  # dual edges as index pairs
    halfspaces: tuple  # (side 0, side 1); side 0 contains vertex 0

    def __len__(self) -> int:
        return len(self.edges)


def _build(c: CubeComplex) -> tuple:
    out = []
    for cid, eids in enumerate(c.class_edges):
        edges = tuple(c.edges[e] for e in eids)
        col = c.sides[:, cid]
        one = frozenset(int(x) for x in np.nonzero(col)[0])
        zero = frozenset(range(c.n)) - one
        ends = {x for e in edges for x in e}
        hs = (Halfspace(cid, 0, zero, frozenset(ends & zero)),
              Halfspace(cid, 1, one, frozenset(ends & one)))
        out.append(Hyperplane(cid, edges, hs))
    return tuple(out)



def theta_classes(c: CubeComplex) -> tuple[Hyperplane, ...]:
    return c.hyperplanes


def halfspace(c: CubeComplex, cls: int, side: int) -> Halfspace:
    if not 0 <= cls < c.num_classes or side not in (0, 1):
        raise InputError(f"no halfspace {cls}:{side}")
    return c.hyperplanes[cls].halfspaces[side]


def complement(c: CubeComplex, h: Halfspace) -> Halfspace:
    return c.hyperplanes[h.cls].halfspaces[1 - h.side]


def side_of(c: CubeComplex, cls: int, v: int) -> int:
    return int(c.sides[v, cls])


def halfspace_containing(c: CubeComplex, cls: int, v: int) -> Halfspace:
    return halfspace(c, cls, side_of(c, cls, v))


def edge_halfspace(c: CubeComplex, a: int, b: int) -> Halfspace:
    """The halfspace of the class dual to edge ``ab`` that contains ``b``."""
    if b not in c.adj[a]:
        raise InputError(f"{c.label(a)!r} and {c.label(b)!r} are not adjacent")
    return halfspace_containing(c, c.class_of(a, b), b)


def _cls(h) -> int:
    return h.id if isinstance(h, Hyperplane) else int(h)


def crosses_by_square(c: CubeComplex, h1, h2) -> bool:
    return bool(c.crossing[_cls(h1), _cls(h2)])


def crosses_by_quadrants(c: CubeComplex, h1, h2) -> bool:
    a, b = c.sides[:, _cls(h1)], c.sides[:, _cls(h2)]
    return bool((a & b).any() and (a & ~b).any() and (~a & b).any() and (~a & ~b).any())


def crosses(c: CubeComplex, h1, h2) -> bool:
    i, j = _cls(h1), _cls(h2)
    if i == j:
        raise InputError("a hyperplane is not compared with itself")
    sq, quad = crosses_by_square(c, i, j), crosses_by_quadrants(c, i, j)
    if sq != quad:
        raise VerificationError(f"crossing tests disagree on classes {i}, {j}")
    return sq


def crossing_graph(c: CubeComplex) -> SimplicialGraph:
    k = c.num_classes
    edges = [(i, j) for i in range(k) for j in range(i + 1, k) if c.crossing[i, j]]
    return SimplicialGraph(tuple(range(k)), tuple(edges))


def reducibility_witness(c: CubeComplex):
    """Two nonempty class sets such that every class of one crosses every class of
    the other, or None.  The first part contains class 0."""
    if c.num_classes == 0:
        raise InputError("complex has no hyperplanes")
    g = crossing_graph(c)
    if g.order < 2:
        return None
    comp = g.complement().to_networkx()
    first = nx.node_connected_component(comp, 0)
    if len(first) == g.order:
        return None
    return (tuple(sorted(first)), tuple(i for i in range(g.order) if i not in first))


def is_reducible(c: CubeComplex) -> bool:
    return reducibility_witness(c) is not None


def dimension(c: CubeComplex) -> int:
    best = 0
    for v in range(c.n):
        lk = link(c, v)
        if not lk.vertices:
            continue
        size = max(len(q) for q in nx.find_cliques(lk.to_networkx()))
        best = max(best, size)
    return best


def separating_hyperplanes(c: CubeComplex, u: int, v: int) -> tuple[int, ...]:
    return tuple(int(i) for i in np.nonzero(c.sides[u] != c.sides[v])[0])


def is_subset(h: Halfspace, k: Halfspace) -> bool:
    return h.vertices <= k.vertices


def intersection(c: CubeComplex, hs: Iterable[Halfspace]) -> frozenset[int]:
    out = frozenset(range(c.n))
    for h in hs:
        out &= h.vertices
    return out


def is_sector(c: CubeComplex, hs: Iterable[Halfspace]) -> bool:
    ids = sorted({h.cls for h in hs})
    return all(c.crossing[i, j] for i, j in combinations(ids, 2))


def contained_hyperplanes(c: CubeComplex, hs: Iterable[Halfspace]) -> tuple[int, ...]:
    """Classes whose dual edges lie entirely inside the intersection of ``hs``."""
    hs = list(hs)
    region = intersection(c, hs)
    own = {h.cls for h in hs}
    out = []
    for hp in c.hyperplanes:
        if hp.id in own:
            continue
        if all(a in region and b in region for a, b in hp.edges):
            out.append(hp.id)
    return tuple(out)


def straight_links_failure(c: CubeComplex, at: Iterable[int]):
    """First ``(v, x)`` such that every other edge at ``v`` has a class crossing
    the class of edge ``vx``; None if all vertices of ``at`` have straight links."""
    for v in sorted(set(at)):
        classes = [c.class_of(v, x) for x in c.adj[v]]
        for i, x in enumerate(c.adj[v]):
            if not any(not c.crossing[classes[i], classes[j]]
                       for j in range(len(classes)) if j != i):
                return (v, x)
    return None


def has_straight_links(c: CubeComplex, at: Iterable[int]) -> bool:
    return straight_links_failure(c, at) is None


def carrier(c: CubeComplex, cls: int) -> frozenset[int]:
    hp = c.hyperplanes[cls]
    return hp.halfspaces[0].carrier | hp.halfspaces[1].carrier


def depth(c: CubeComplex, h: Halfspace) -> int:
    """How far the halfspace reaches beyond its hyperplane's carrier."""
    verts = sorted(h.vertices)
    car = sorted(carrier(c, h.cls))
    return int(c.dist[np.ix_(verts, car)].min(axis=1).max())
