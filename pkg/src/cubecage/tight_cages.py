"""Tight cages: detection, cores, sectorless extension, core rigidity, loose hyperplanes.

Unboundedness of a core cannot be observed in a finite complex.  Two proxies stand in
for it and are both reported:

* ``frontier``: the core comes within ``FRONTIER_REACH`` of the frontier and its
  distances to the frontier span at least the threshold, so it runs from the
  interior out to the edge (used whenever the complex has one).  In a word-length
  ball two walls of a core only coexist up to radius R - 1, so a core never touches
  the sphere itself; the span requirement rejects small cores that merely sit near it;
* ``depth``: the core's radius is at least a threshold (used otherwise).

On complexes with a frontier, the edge condition and the link check are evaluated only
at core vertices at distance >= ``margin`` from the frontier, where every square through
the vertex is present.  A core with no such vertex fails the edge condition.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .hyperplanes import Halfspace, dimension, halfspace_containing
from .median import CubeComplex, is_join, link

DEFAULT_THRESHOLD = 2
DEFAULT_MARGIN = 2
FRONTIER_REACH = 1

CONDITIONS = ("size", "sector", "unbounded", "edges")


@dataclass(frozen=True)
class TightCage:
    S: tuple
    T: tuple
    core: frozenset
    verdicts: dict = field(compare=False)
    proxy: str = field(compare=False)
    core_meets_frontier: bool = field(compare=False)
    core_depth: int = field(compare=False)
    core_span: int = field(compare=False)
    assessed: frozenset = field(compare=False, repr=False)
    failure: str | None = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return all(self.verdicts[k] for k in CONDITIONS)

    @property
    def sectorless(self) -> bool:
        return not self.S


def core(c: CubeComplex, S: Iterable[Halfspace], T: Iterable[Halfspace]) -> frozenset[int]:
    out = frozenset(range(c.n))
    for t in T:
        out &= t.carrier
    for s in S:
        out &= s.vertices
    return out


def core_radius(c: CubeComplex, y: Iterable[int]) -> int:
    """Least eccentricity of a vertex of ``y`` measured inside ``y``; -1 when empty."""
    ys = sorted(y)
    if not ys:
        return -1
    return int(c.dist[np.ix_(ys, ys)].max(axis=1).min())


def _assessed(c: CubeComplex, y: frozenset[int], margin: int) -> frozenset[int]:
    if not c.frontier:
        return y
    fd = c.frontier_distance
    return frozenset(v for v in y if fd[v] >= margin)


def _unbounded_proxy(c: CubeComplex, y: frozenset[int], threshold: int):
    depth = core_radius(c, y)
    if not c.frontier:
        return "depth", False, depth, 0, depth >= threshold
    fd = [int(c.frontier_distance[v]) for v in y]
    meets = bool(fd) and min(fd) <= FRONTIER_REACH
    span = max(fd) - min(fd) if fd else 0
    return "frontier", meets, depth, span, meets and span >= threshold


def check_tight_cage(c: CubeComplex, S: Sequence[Halfspace], T: Sequence[Halfspace],
                     threshold: int = DEFAULT_THRESHOLD,
                     margin: int = DEFAULT_MARGIN) -> TightCage:
    S = tuple(sorted(set(S)))
    T = tuple(sorted(set(T)))
    cross = c.crossing
    failure = None
    verdicts = {"size": len(T) >= 2}
    if not verdicts["size"]:
        failure = f"only {len(T)} halfspace(s) in T"

    sector = True
    for s in S:
        for h in S + T:
            if h.cls != s.cls and not cross[s.cls, h.cls]:
                sector = False
                failure = failure or f"class {s.cls} of S misses class {h.cls}"
    verdicts["sector"] = sector

    y = core(c, S, T)
    proxy, meets, depth, span, unbounded = _unbounded_proxy(c, y, threshold)
    verdicts["unbounded"] = bool(y) and unbounded
    if not verdicts["unbounded"]:
        failure = failure or ("empty core" if not y else f"core fails the {proxy} proxy")

    assessed = _assessed(c, y, margin)
    named = {h.cls for h in S + T}
    t_classes = [t.cls for t in T]
    edges_ok = bool(assessed)
    if not assessed:
        failure = failure or "no core vertex far enough from the frontier to assess"
    for v in sorted(assessed):
        for x in c.adj[v]:
            k = c.class_of(v, x)
            if k in named:
                continue
            if not all(cross[k, t] for t in t_classes):
                edges_ok = False
                failure = failure or f"class {k} at vertex {c.label(v)!r} misses a class of T"
                break
        if not edges_ok:
            break
    verdicts["edges"] = edges_ok
    return TightCage(S, T, y, verdicts, proxy, meets, depth, span, assessed, failure)


def core_links_are_joins(c: CubeComplex, tc: TightCage) -> bool:
    return core_link_failure(c, tc) is None


def core_link_failure(c: CubeComplex, tc: TightCage):
    """First assessed core vertex whose link is not a join, or None."""
    for v in sorted(tc.assessed):
        if len(c.adj[v]) >= 2 and not is_join(link(c, v)):
            return v
    return None


def rigid_partners(c: CubeComplex, h: Halfspace, margin: int = DEFAULT_MARGIN):
    """Halfspaces ``k`` whose carriers meet ``C+(h)`` with ``k``'s class not crossing
    ``h``'s; None when one of them has a different carrier (``h`` is not core rigid).

    With a frontier, carriers are compared only on vertices at least ``margin`` away
    from it, since short hyperplanes cut off by the frontier are not real obstructions.
    """
    out = []
    row = c.crossing[h.cls]
    own = _assessed(c, h.carrier, margin)
    for k in c.halfspaces:
        if k.cls == h.cls or row[k.cls]:
            continue
        theirs = _assessed(c, k.carrier, margin)
        if not (theirs & own):
            continue
        if theirs != own:
            return None
        out.append(k)
    return out


def is_core_rigid(c: CubeComplex, h: Halfspace, margin: int = DEFAULT_MARGIN) -> bool:
    return rigid_partners(c, h, margin) is not None


def _candidate(c: CubeComplex, h: Halfspace, threshold: int, margin: int):
    partners = rigid_partners(c, h, margin)
    if partners is None:
        return None
    ok = _unbounded_proxy(c, h.carrier, threshold)[-1]
    if not ok:
        return None
    tc = check_tight_cage(c, (), [h] + partners, threshold, margin)
    return tc if tc.passed else None


def find_sectorless_tight_cages(c: CubeComplex, threshold: int = DEFAULT_THRESHOLD,
                                margin: int = DEFAULT_MARGIN,
                                threads: int = 1) -> list[TightCage]:
    """Scan core-rigid halfspaces and keep the sectorless tight cages they generate."""
    hs = list(c.halfspaces)
    c.crossing  # build shared data before any worker threads start
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            found = list(pool.map(lambda h: _candidate(c, h, threshold, margin), hs))
    else:
        found = [_candidate(c, h, threshold, margin) for h in hs]
    unique = {tc.T: tc for tc in found if tc is not None}
    return [unique[k] for k in sorted(unique)]


def exhaustive_tight_cages(c: CubeComplex, max_size: int = 4,
                           threshold: int = DEFAULT_THRESHOLD,
                           margin: int = DEFAULT_MARGIN) -> list[TightCage]:
    """All passing ``(S, T)`` with ``|S| + |T| <= max_size``, by direct enumeration.

    A nonempty core forces the carriers of T to share a vertex, so T ranges over
    subsets of the halfspaces whose carriers contain a common vertex.
    """
    at_vertex = [[] for _ in range(c.n)]
    for h in c.halfspaces:
        for v in h.carrier:
            at_vertex[v].append(h)
    seen = {}
    cross = c.crossing
    for v in range(c.n):
        local = sorted(at_vertex[v])
        for size in range(2, max_size + 1):
            for T in combinations(local, size):
                if (frozenset(), T) in seen:
                    continue
                seen[(frozenset(), T)] = check_tight_cage(c, (), T, threshold, margin)
                room = max_size - size
                if room <= 0:
                    continue
                tcls = [t.cls for t in T]
                pool = [s for s in c.halfspaces
                        if s.cls not in tcls and all(cross[s.cls, j] for j in tcls)]
                for m in range(1, room + 1):
                    for S in combinations(pool, m):
                        key = (frozenset(S), T)
                        if key not in seen:
                            seen[key] = check_tight_cage(c, S, T, threshold, margin)
    return sorted((tc for tc in seen.values() if tc.passed), key=lambda t: (t.S, t.T))


def extend_to_sectorless(c: CubeComplex, tc: TightCage,
                         threshold: int = DEFAULT_THRESHOLD,
                         margin: int = DEFAULT_MARGIN) -> TightCage:
    """Absorb the single sector halfspace of a 2-dimensional tight cage.

    With ``Z`` the intersection of the carriers of T, every class dual to an edge
    leaving ``Z`` that crosses all classes crossing ``Z`` is added to T, oriented
    toward ``Z``.
    """
    if dimension(c) != 2:
        raise PreconditionError("sectorless extension is defined for 2-dimensional complexes")
    if not tc.S:
        return tc
    if len(tc.S) > 1:
        raise PreconditionError("a 2-dimensional tight cage has at most one sector halfspace")
    z = core(c, (), tc.T)
    inside = {c.class_of(a, b) for a, b in c.edges if a in z and b in z}
    extra = set()
    for v in sorted(z):
        for x in c.adj[v]:
            if x in z:
                continue
            k = c.class_of(v, x)
            if all(c.crossing[k, j] for j in inside if j != k):
                extra.add(halfspace_containing(c, k, v))
    return check_tight_cage(c, (), sorted(set(tc.T) | extra), threshold, margin)


def find_loose_hyperplanes(c: CubeComplex, cages: list[TightCage] | None = None,
                           threshold: int = DEFAULT_THRESHOLD,
                           margin: int = DEFAULT_MARGIN) -> list[tuple[int, Halfspace]]:
    """Classes with exactly one side whose positive carrier is a sectorless core.

    Each entry is ``(class id, the side whose carrier is a core)``.
    """
    if cages is None:
        cages = find_sectorless_tight_cages(c, threshold, margin)
    cores = {tc.core for tc in cages}
    out = []
    for hp in c.hyperplanes:
        a, b = hp.halfspaces
        if (a.carrier in cores) != (b.carrier in cores):
            out.append((hp.id, a if a.carrier in cores else b))
    return out
