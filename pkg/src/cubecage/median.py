"""Finite CAT(0) cube complexes, stored as their median 1-skeleta.

A finite graph is the 1-skeleton of a finite CAT(0) cube complex exactly when it is a
median graph, so a complex is determined by its skeleton: squares and higher cubes are
recovered combinatorially.  Internally every vertex is an index ``0..n-1`` in the order
of ``skeleton.vertices``; public helpers take and return indices.
"""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import InputError, NotMedianError
from .graph import SimplicialGraph, is_join, join_decomposition

__all__ = [
    "CubeComplex", "is_median", "median_failure", "median", "distance_and_geodesic",
    "interval", "is_convex", "convex_hull", "link", "is_join", "join_decomposition",
    "helly_witness",
]

_MIX = (np.uint64(0x9E3779B97F4A7C15), np.uint64(0xBF58476D1CE4E5B9),
        np.uint64(0x94D049BB133111EB))


def _row_hash(words: np.ndarray) -> np.ndarray:
    """splitmix64-style hash of the last axis of a uint64 array."""
    golden, m1, m2 = _MIX
    h = np.zeros(words.shape[:-1], dtype=np.uint64)
    with np.errstate(over="ignore"):
        for i in range(words.shape[-1]):
            z = words[..., i] + golden * np.uint64(i + 1) + h
            z = (z ^ (z >> np.uint64(30))) * m1
            z = (z ^ (z >> np.uint64(27))) * m2
            h = z ^ (z >> np.uint64(31))
    return h


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class _Skeleton:
    """Index-level structure of a connected graph, with the median test."""

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]):
        self.n = n
        self.edges = [tuple(sorted(e)) for e in edges]
        self.edges.sort()
        self.edge_id = {e: i for i, e in enumerate(self.edges)}
        nbrs = [[] for _ in range(n)]
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        self.adj = tuple(tuple(sorted(x)) for x in nbrs)
        self.dist = self._distances()
        self.failure = None  # reason string when not median
        self.squares: list[tuple[int, int, int, int]] = []
        self.edge_class = np.zeros(len(self.edges), dtype=np.int64)
        self.class_edges: list[tuple[int, ...]] = []
        self.sides = np.zeros((n, 0), dtype=bool)
        self._analyse()

    def _distances(self) -> np.ndarray:
        if self.n == 0:
            raise InputError("graph has no vertices")
        if not self.edges:
            if self.n > 1:
                raise InputError("graph is disconnected")
            return np.zeros((1, 1), dtype=np.int64)
        a = np.array(self.edges)
        m = csr_matrix((np.ones(len(a)), (a[:, 0], a[:, 1])), shape=(self.n, self.n))
        d = shortest_path(m, directed=False, unweighted=True)
        if np.isinf(d).any():
            raise InputError("graph is disconnected")
        return d.astype(np.int64)

    def edge(self, a: int, b: int) -> int:
        return self.edge_id[(a, b) if a < b else (b, a)]

    def _analyse(self) -> None:
        d = self.dist
        if not self.edges:
            return
        ea = np.array([e[0] for e in self.edges])
        eb = np.array([e[1] for e in self.edges])
        if np.any(d[0, ea] == d[0, eb]):
            self.failure = "odd cycle"
            return
        # squares: a is the least vertex, b < d its two cycle neighbours
        adjset = [set(x) for x in self.adj]
        for a in range(self.n):
            later = [x for x in self.adj[a] if x > a]
            for b, dd in combinations(later, 2):
                for c in adjset[b] & adjset[dd]:
                    if c > a:
                        self.squares.append((a, b, c, dd))
        uf = _UnionFind(len(self.edges))
        for a, b, c, dd in self.squares:
            uf.union(self.edge(a, b), self.edge(dd, c))
            uf.union(self.edge(b, c), self.edge(a, dd))
        roots: dict[int, int] = {}
        members: list[list[int]] = []
        for i in range(len(self.edges)):
            r = uf.find(i)
            if r not in roots:
                roots[r] = len(members)
                members.append([])
            self.edge_class[i] = roots[r]
            members[roots[r]].append(i)
        self.class_edges = [tuple(m) for m in members]
        k = len(members)
        sides = np.zeros((self.n, k), dtype=bool)
        for cid, m in enumerate(members):
            u, v = self.edges[m[0]]
            near_u = d[:, u] < d[:, v]
            sides[:, cid] = ~near_u if near_u[0] else near_u
        self.sides = sides
        # each class must be exactly the cut between its two sides
        cut = sides[ea] != sides[eb]
        expected = np.zeros_like(cut)
        expected[np.arange(len(self.edges)), self.edge_class] = True
        if not np.array_equal(cut, expected):
            self.failure = "square classes are not cuts"
            return
        s = sides.astype(np.int64)
        hamming = s @ (1 - s).T + (1 - s) @ s.T
        if not np.array_equal(hamming, d):
            self.failure = "not isometric to its hypercube labelling"
            return
        if not self.squares:
            return  # every edge is a bridge, so the graph is a tree
        bad = self._majority_failure()
        if bad is not None:
            self.failure = "majority vertex missing for %r" % (bad,)

    def _majority_failure(self):
        # In a partial cube the only candidate median of (u, v, w) is the coordinatewise
        # majority; the graph is median iff that label is always a vertex.
        n, k = self.sides.shape
        words = (k + 63) // 64
        padded = np.zeros((n, words * 64), dtype=bool)
        padded[:, :k] = self.sides
        packed = np.packbits(padded, axis=1, bitorder="little").view(np.uint64)
        vh = _row_hash(packed)
        if len(np.unique(vh)) < n:
            return self._majority_failure_exact(packed)
        order = np.argsort(vh, kind="stable")
        sorted_h = vh[order]
        block = max(1, 2_000_000 // max(1, n * words))
        for u in range(n):
            for lo in range(u, n, block):
                vs = packed[lo:min(n, lo + block)]
                common = vs & packed[u]
                diff = vs ^ packed[u]
                ws = packed[lo:]  # w >= v >= u covers every unordered triple
                maj = common[:, None, :] | (diff[:, None, :] & ws[None, :, :])
                mh = _row_hash(maj)
                pos = np.searchsorted(sorted_h, mh)
                pos = np.minimum(pos, n - 1)
                cand = order[pos]
                ok = (sorted_h[pos] == mh) & (packed[cand] == maj).all(axis=2)
                if not ok.all():
                    i, w = np.argwhere(~ok)[0]
                    return (u, lo + int(i), lo + int(w))
        return None

    def _majority_failure_exact(self, packed):
        rows = {packed[i].tobytes() for i in range(self.n)}
        for u in range(self.n):
            for v in range(u, self.n):
                common = packed[u] & packed[v]
                diff = packed[u] ^ packed[v]
                maj = common[None, :] | (diff[None, :] & packed)
                for w in range(self.n):
                    if maj[w].tobytes() not in rows:
                        return (u, v, w)
        return None

    def failing_triple(self):
        """Search for a triple without exactly one median (brute force, used for reports)."""
        d = self.dist
        n = self.n
        for u in range(n):
            for v in range(u, n):
                s = d[u] + d[v]
                total = d[u, v] + d[v] + d[u]  # perimeter for each w
                counts = ((s[None, :] + d) * 2 == total[:, None]).sum(axis=1)
                bad = np.nonzero(counts != 1)[0]
                if len(bad):
                    return (u, v, int(bad[0]))
        return None


class CubeComplex:
    """A finite CAT(0) cube complex given by its median skeleton and a frontier set.

    The frontier marks vertices on the boundary sphere of a ball cut out of an
    infinite complex; it is empty for genuinely finite inputs.
    """

    def __init__(self, skeleton: SimplicialGraph, frontier: Iterable = ()):
        self.skeleton = skeleton
        self.labels = tuple(skeleton.vertices)
        self._index = {v: i for i, v in enumerate(self.labels)}
        edges = [(self._index[a], self._index[b]) for a, b in skeleton.edges]
        sk = _Skeleton(len(self.labels), edges)
        if sk.failure is not None:
            triple = sk.failing_triple()
            named = None if triple is None else tuple(self.labels[i] for i in triple)
            raise NotMedianError(f"not a median graph ({sk.failure}); failing triple {named}",
                                 named)
        self._sk = sk
        self.n = sk.n
        self.edges = sk.edges
        self.adj = sk.adj
        self.dist = sk.dist
        self.squares = sk.squares
        self.edge_class = sk.edge_class
        self.class_edges = sk.class_edges
        self.sides = sk.sides
        fr = []
        for v in frontier:
            if v not in self._index:
                raise InputError(f"frontier vertex {v!r} is not a vertex")
            fr.append(self._index[v])
        self.frontier = frozenset(fr)

    # -- identifiers -------------------------------------------------------
    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown vertex {label!r}") from None

    def label(self, i: int):
        return self.labels[i]

    def has_vertex(self, label) -> bool:
        return label in self._index

    @property
    def num_classes(self) -> int:
        return len(self.class_edges)

    def edge_index(self, a: int, b: int) -> int:
        return self._sk.edge(a, b)

    def class_of(self, a: int, b: int) -> int:
        return int(self.edge_class[self._sk.edge(a, b)])

    # -- derived data ------------------------------------------------------
    @cached_property
    def frontier_distance(self) -> np.ndarray:
        """Distance of every vertex to the frontier (a large value if there is none)."""
        if not self.frontier:
            return np.full(self.n, np.iinfo(np.int64).max // 4, dtype=np.int64)
        return self.dist[:, sorted(self.frontier)].min(axis=1)

    def interior(self, margin: int = 1) -> list[int]:
        """Vertices at distance at least ``margin`` from the frontier."""
        fd = self.frontier_distance
        return [v for v in range(self.n) if fd[v] >= margin]

    @cached_property
    def crossing(self) -> np.ndarray:
        """Boolean class-by-class matrix: True where two classes share a square."""
        k = self.num_classes
        m = np.zeros((k, k), dtype=bool)
        for a, b, c, d in self.squares:
            i = self.class_of(a, b)
            j = self.class_of(a, d)
            m[i, j] = m[j, i] = True
        return m

    @cached_property
    def hyperplanes(self) -> tuple:
        """Θ-classes as ``Hyperplane`` records, indexed by class id."""
        from .hyperplanes import _build
        return _build(self)

    @cached_property
    def halfspaces(self) -> tuple:
        """All halfspaces, ordered by (class id, side)."""
        return tuple(h for hp in self.hyperplanes for h in hp.halfspaces)

    def __repr__(self) -> str:
        return (f"CubeComplex(vertices={self.n}, edges={len(self.edges)}, "
                f"classes={self.num_classes}, frontier={len(self.frontier)})")


def is_median(g: SimplicialGraph) -> bool:
    """True iff every vertex triple of the connected graph ``g`` has exactly one median."""
    if not g.vertices:
        raise InputError("graph has no vertices")
    index = {v: i for i, v in enumerate(g.vertices)}
    sk = _Skeleton(len(index), [(index[a], index[b]) for a, b in g.edges])
    return sk.failure is None


def median_failure(g: SimplicialGraph):
    """A vertex triple of ``g`` without a unique median, or None if ``g`` is median."""
    index = {v: i for i, v in enumerate(g.vertices)}
    sk = _Skeleton(len(index), [(index[a], index[b]) for a, b in g.edges])
    if sk.failure is None:
        return None
    t = sk.failing_triple()
    return None if t is None else tuple(g.vertices[i] for i in t)


def median(c: CubeComplex, u: int, v: int, w: int) -> int:
    d = c.dist
    half = (d[u, v] + d[v, w] + d[u, w]) // 2
    hits = np.nonzero(d[u] + d[v] + d[w] == half)[0]
    return int(hits[0])


def distance_and_geodesic(c: CubeComplex, u: int, v: int) -> tuple[int, list[int]]:
    """Distance and the lexicographically least geodesic from ``u`` to ``v``."""
    d = c.dist
    path = [u]
    x = u
    while x != v:
        x = next(y for y in c.adj[x] if d[y, v] == d[x, v] - 1)
        path.append(x)
    return int(d[u, v]), path


def interval(c: CubeComplex, u: int, v: int) -> frozenset[int]:
    d = c.dist
    return frozenset(int(x) for x in np.nonzero(d[u] + d[v] == d[u, v])[0])


def _escape(c: CubeComplex, s: frozenset[int]):
    # A geodesic between two members leaves s iff, at some member u, a neighbour
    # x outside s is one step closer to another member.
    members = np.fromiter(sorted(s), dtype=np.int64)
    d = c.dist
    for u in members:
        du = d[u, members]
        for x in c.adj[u]:
            if x not in s and np.any(d[x, members] < du):
                yield x


def is_convex(c: CubeComplex, s: Iterable[int]) -> bool:
    s = frozenset(s)
    if not s:
        raise InputError("convexity of the empty set is not defined here")
    return next(_escape(c, s), None) is None


def convex_hull(c: CubeComplex, s: Iterable[int]) -> frozenset[int]:
    s = frozenset(s)
    if not s:
        raise InputError("hull of the empty set")
    while True:
        extra = set(_escape(c, s))
        if not extra:
            return s
        s = s | extra


def link(c: CubeComplex, v: int) -> SimplicialGraph:
    """Link of ``v``: one vertex per incident edge (named by its far endpoint)."""
    nb = c.adj[v]
    sets = {x: set(c.adj[x]) for x in nb}
    edges = [(x, y) for x, y in combinations(nb, 2) if len(sets[x] & sets[y]) > 1]
    return SimplicialGraph(tuple(nb), tuple(edges))


def helly_witness(c: CubeComplex, sets: Sequence[Iterable[int]]):
    """Return ``(vertex, None)`` for a point of the total intersection, or
    ``(None, (i, j))`` naming two disjoint members."""
    fs = [frozenset(s) for s in sets]
    for i, s in enumerate(fs):
        if not s or not is_convex(c, s):
            raise InputError(f"set {i} is empty or not convex")
    for i, j in combinations(range(len(fs)), 2):
        if not fs[i] & fs[j]:
            return None, (i, j)
    if not fs:
        return 0, None
    common = frozenset.intersection(*fs)
    return min(common), None

