"""Standard small complexes and a random median-graph generator."""
from __future__ import annotations

import random
from itertools import combinations

from .graph import SimplicialGraph
from .median import CubeComplex


def path(n_edges: int) -> CubeComplex:
    return CubeComplex(SimplicialGraph.from_edges(range(n_edges + 1),
                                                  [(i, i + 1) for i in range(n_edges)]))


def star(leaves: int) -> CubeComplex:
    """Centre 0 with leaves 1..leaves."""
    return CubeComplex(SimplicialGraph.from_edges(range(leaves + 1),
                                                  [(0, i) for i in range(1, leaves + 1)]))


def hypercube(d: int) -> CubeComplex:
    n = 1 << d
    edges = [(v, v | (1 << i)) for v in range(n) for i in range(d) if not v & (1 << i)]
    return CubeComplex(SimplicialGraph.from_edges(range(n), edges))


def grid(a: int, b: int, frontier=()) -> CubeComplex:
    """Product of a path on ``a`` vertices and a path on ``b`` vertices.

    Vertex ``x * b + y`` sits in column ``x`` (``0 <= x < a``) and row ``y``.
    """
    vid = lambda x, y: x * b + y  # noqa: E731
    edges = [(vid(x, y), vid(x + 1, y)) for x in range(a - 1) for y in range(b)]
    edges += [(vid(x, y), vid(x, y + 1)) for x in range(a) for y in range(b - 1)]
    return CubeComplex(SimplicialGraph.from_edges(range(a * b), edges), frontier)


def grid_with_end_rows(a: int, b: int) -> CubeComplex:
    """Grid whose frontier is the first and last row, so columns run into it."""
    return grid(a, b, frontier=[x * b + y for x in range(a) for y in (0, b - 1)])


def from_labels(labels) -> CubeComplex:
    """Median graph spanned by hypercube labels (ints) with Hamming-1 adjacency."""
    labels = list(labels)
    pos = {x: i for i, x in enumerate(labels)}
    width = max(labels).bit_length() if labels else 0
    edges = []
    for x, i in pos.items():
        for bit in range(width):
            y = x ^ (1 << bit)
            j = pos.get(y)
            if j is not None and i < j:
                edges.append((i, j))
    return CubeComplex(SimplicialGraph.from_edges(range(len(labels)), edges))


def random_median_labels(rng: random.Random, size: int, max_dim: int | None = None,
                         max_seeds: int = 3) -> list[int]:
    """Grow a median graph by peripheral convex expansions.

    Each step picks the convex hull of a few random vertices and glues on a copy of
    it along a fresh coordinate.  With ``max_dim=1`` the result is a tree; with
    ``max_dim=2`` the hulls used are restricted to trees, so no 3-cube appears.
    """
    verts = [0]
    width = 0
    while len(verts) < size:
        room = size - len(verts)
        for _ in range(20):
            seeds = rng.sample(verts, min(len(verts), rng.randint(1, max_seeds)))
            varying = 0
            for s in seeds:
                varying |= s ^ seeds[0]
            fixed = seeds[0] & ~varying
            hull = [x for x in verts if x & ~varying == fixed]
            if len(hull) > room:
                continue
            if max_dim is not None and _dim_at_least(hull, max_dim):
                continue
            break
        else:
            hull = [rng.choice(verts)]
        bit = 1 << width
        width += 1
        verts.extend(x | bit for x in hull)
    return verts


def _dim_at_least(hull: list[int], d: int) -> bool:
    """True if the label set contains a ``d``-dimensional subcube."""
    if d <= 0:
        return True
    hs = set(hull)
    for x in hull:
        flips = [1 << i for i in range(max(hull).bit_length()) if x ^ (1 << i) in hs]
        for combo in combinations(flips, d):
            masks = [0]
            for f in combo:
                masks += [m | f for m in masks]
            if all(x ^ m in hs for m in masks):
                return True
    return False


def random_median(rng: random.Random, size: int, max_dim: int | None = None) -> CubeComplex:
    return from_labels(random_median_labels(rng, size, max_dim))
