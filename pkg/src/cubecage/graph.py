"""Simple undirected graphs, used both as cube-complex skeleta and as defining graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable

import networkx as nx

from .errors import InputError


def sort_key(v):
    # ids may mix ints and strings; keep ints first and in numeric order
    return (0, v, "") if isinstance(v, int) and not isinstance(v, bool) else (1, 0, str(v))


@dataclass(frozen=True)
class SimplicialGraph:
    """A loopless graph without parallel edges.

    ``vertices`` fixes the vertex order used for every deterministic tie-break.
    Edges are stored as pairs ``(a, b)`` with ``a`` before ``b`` in that order.
    """

    vertices: tuple
    edges: tuple
    labels: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        index = {v: i for i, v in enumerate(self.vertices)}
        if len(index) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        seen = set()
        normalized = []
        for e in self.edges:
            if len(e) != 2:
                raise InputError(f"edge {e!r} does not have two endpoints")
            a, b = e
            if a not in index or b not in index:
                raise InputError(f"edge {e!r} has an endpoint that is not a vertex")
            if a == b:
                raise InputError(f"loop at {a!r}")
            if index[a] > index[b]:
                a, b = b, a
            if (a, b) in seen:
                raise InputError(f"parallel edge {a!r}-{b!r}")
            seen.add((a, b))
            normalized.append((a, b))
        normalized.sort(key=lambda e: (index[e[0]], index[e[1]]))
        object.__setattr__(self, "edges", tuple(normalized))

    @classmethod
    def from_edges(cls, vertices: Iterable[Hashable], edges: Iterable, labels=None, *, sort=True):
        vs = list(vertices)
        if sort:
            vs.sort(key=sort_key)
        return cls(tuple(vs), tuple(tuple(e) for e in edges), labels)

    @property
    def order(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        adj = self.adjacency()
        start = self.vertices[0]
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == len(self.vertices)

    def complement(self) -> "SimplicialGraph":
        present = set(self.edges)
        vs = self.vertices
        missing = [(vs[i], vs[j]) for i in range(len(vs)) for j in range(i + 1, len(vs))
                   if (vs[i], vs[j]) not in present]
        return SimplicialGraph(vs, tuple(missing), self.labels)

    def induced(self, keep: Iterable) -> "SimplicialGraph":
        keep = set(keep)
        vs = tuple(v for v in self.vertices if v in keep)
        es = tuple(e for e in self.edges if e[0] in keep and e[1] in keep)
        return SimplicialGraph(vs, es, self.labels)

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return len(self.edges) == n * (n - 1) // 2

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def join_decomposition(g: SimplicialGraph):
    """Return ``(V1, V2)`` with every V1-V2 pair adjacent, or None if ``g`` is not a join.

    V1 is the complement component containing the first vertex.
    """
    if g.order == 0:
        raise InputError("join test needs at least one vertex")
    if g.order == 1:
        return None
    comp = g.complement().to_networkx()
    first = nx.node_connected_component(comp, g.vertices[0])
    if len(first) == g.order:
        return None
    v1 = tuple(v for v in g.vertices if v in first)
    v2 = tuple(v for v in g.vertices if v not in first)
    return v1, v2


def join_bipartitions(g: SimplicialGraph) -> list[tuple[tuple, tuple]]:
    """Every ``(V1, V2)`` join splitting, V1 always holding the first vertex.

    The splittings are the groupings of complement components into two nonempty sides.
    """
    if g.order < 2:
        return []
    comps = [set(c) for c in nx.connected_components(g.complement().to_networkx())]
    comps.sort(key=lambda c: min(g.vertices.index(v) for v in c))
    out = []
    rest = comps[1:]
    for mask in range(1 << len(rest)):
        if mask == (1 << len(rest)) - 1:
            continue
        side = set(comps[0]).union(*(c for i, c in enumerate(rest) if mask >> i & 1))
        out.append((tuple(v for v in g.vertices if v in side),
                    tuple(v for v in g.vertices if v not in side)))
    return out


def is_join(g: SimplicialGraph) -> bool:
    return join_decomposition(g) is not None
