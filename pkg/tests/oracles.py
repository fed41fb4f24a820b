"""Brute-force reference implementations used to check the library.

Nothing here imports the library's own algorithms: distances come from networkx
BFS, classes from the Djoković–Winkler relation, and group equality from linear
representations or heaps of pieces.
"""
from __future__ import annotations

from itertools import combinations, product

import networkx as nx
import numpy as np


def graph_of(c) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(c.n))
    g.add_edges_from(c.edges)
    return g


def bfs_distances(g: nx.Graph) -> dict:
    return dict(nx.all_pairs_shortest_path_length(g))


def medians(d: dict, nodes, u, v, w) -> list:
    return [x for x in nodes
            if d[u][x] + d[x][v] == d[u][v]
            and d[v][x] + d[x][w] == d[v][w]
            and d[u][x] + d[x][w] == d[u][w]]


def is_median_graph(g: nx.Graph) -> bool:
    if g.number_of_nodes() == 0 or not nx.is_connected(g):
        return False
    d = bfs_distances(g)
    nodes = list(g.nodes)
    return all(len(medians(d, nodes, u, v, w)) == 1
               for u, v, w in combinations(nodes, 3))


def interval(d: dict, nodes, u, v) -> set:
    return {x for x in nodes if d[u][x] + d[x][v] == d[u][v]}


def is_convex(d: dict, nodes, s) -> bool:
    s = set(s)
    return all(interval(d, nodes, u, v) <= s for u, v in combinations(s, 2))


def hull(d: dict, nodes, s) -> set:
    s = set(s)
    while True:
        grown = set(s)
        for u, v in combinations(s, 2):
            grown |= interval(d, nodes, u, v)
        if grown == s:
            return s
        s = grown


def djokovic_classes(g: nx.Graph) -> list[frozenset]:
    """Edge classes of the Djoković–Winkler relation, closed transitively."""
    d = bfs_distances(g)
    edges = [tuple(sorted(e)) for e in g.edges]
    parent = list(range(len(edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in combinations(range(len(edges)), 2):
        (x, y), (u, v) = edges[i], edges[j]
        if d[x][u] + d[y][v] != d[x][v] + d[y][u]:
            parent[find(i)] = find(j)
    groups = {}
    for i, e in enumerate(edges):
        groups.setdefault(find(i), set()).add(e)
    return [frozenset(s) for s in groups.values()]


def consistent_by_pairs(c, orientation) -> bool:
    """Every two chosen halfspaces intersect (pairwise Helly suffices in median graphs)."""
    sides = c.sides
    chosen = [sides[:, i] == bool(s) for i, s in enumerate(orientation)]
    return all((a & b).any() for a, b in combinations(chosen, 2)) and all(a.any() for a in chosen)


# -- right-angled Coxeter groups: Tits representation ------------------------

def tits_matrices(gamma) -> dict:
    """Reflection matrices of the Tits representation, with bilinear form
    B(s, s) = 1, B(s, t) = 0 on edges and -1 on non-edges.  The representation is
    faithful, so matrix equality is group equality."""
    vs = list(gamma.vertices)
    n = len(vs)
    adj = {frozenset(e) for e in gamma.edges}
    B = np.zeros((n, n), dtype=np.int64)
    for i, s in enumerate(vs):
        for j, t in enumerate(vs):
            B[i, j] = 1 if i == j else (0 if frozenset((s, t)) in adj else -1)
    out = {}
    for i, s in enumerate(vs):
        m = np.eye(n, dtype=np.int64)
        m[i, :] -= 2 * B[i, :]
        out[s] = m
    return out


def racg_element(word, gamma, mats=None) -> tuple:
    mats = mats or tits_matrices(gamma)
    m = np.eye(len(gamma.vertices), dtype=np.int64)
    for s in word:
        m = m @ mats[s]
    return tuple(m.flatten())


# -- right-angled Artin groups: heaps of pieces --------------------------------

def raag_heap(word, gamma) -> tuple:
    """Heap (piling) normal form: one stack per generator, pushing a letter onto its
    own stack and a blocker onto the stacks of generators it does not commute with.
    Two words are equal in the group iff their heaps agree."""
    vs = list(gamma.vertices)
    adj = {frozenset(e) for e in gamma.edges}
    stacks = {v: [] for v in vs}
    for g, e in word:
        blocked = [v for v in vs if v != g and frozenset((v, g)) not in adj]
        top = stacks[g][-1] if stacks[g] else None
        if top == (g, -e):
            stacks[g].pop()
            for v in blocked:
                stacks[v].pop()
        else:
            stacks[g].append((g, e))
            for v in blocked:
                stacks[v].append(0)
    return tuple(tuple(stacks[v]) for v in vs)


def racg_heap(word, gamma) -> tuple:
    """Heap normal form for involutive generators."""
    vs = list(gamma.vertices)
    adj = {frozenset(e) for e in gamma.edges}
    stacks = {v: [] for v in vs}
    for g in word:
        blocked = [v for v in vs if v != g and frozenset((v, g)) not in adj]
        if stacks[g] and stacks[g][-1] == g:
            stacks[g].pop()
            for v in blocked:
                stacks[v].pop()
        else:
            stacks[g].append(g)
            for v in blocked:
                stacks[v].append(0)
    return tuple(tuple(stacks[v]) for v in vs)


def cayley_ball(gamma, radius: int, involutive: bool) -> dict:
    """Word length of every element within ``radius``, keyed by its oracle form."""
    if involutive:
        mats = tits_matrices(gamma)
        key = lambda w: racg_element(w, gamma, mats)  # noqa: E731
        letters = list(gamma.vertices)
    else:
        key = lambda w: raag_heap(w, gamma)  # noqa: E731
        letters = [(v, e) for v in gamma.vertices for e in (1, -1)]
    seen = {key(()): (0, ())}
    layer = [()]
    for r in range(1, radius + 1):
        nxt = []
        for w in layer:
            for a in letters:
                w2 = w + (a,)
                k = key(w2)
                if k not in seen:
                    seen[k] = (r, w2)
                    nxt.append(w2)
        layer = nxt
    return seen


def all_words(letters, max_len: int):
    for n in range(max_len + 1):
        yield from product(letters, repeat=n)
