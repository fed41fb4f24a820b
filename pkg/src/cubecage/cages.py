"""Cages inside an ultrafilter and the reduction procedure that produces them."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import InputError, VerificationError
from .hyperplanes import Halfspace, contained_hyperplanes
from .median import CubeComplex
from .ultrafilters import Ultrafilter, separators_from


@dataclass(frozen=True)
class Cage:
    halfspaces: tuple  # sorted by (class id, side)
    anchor: int  # least vertex in the common positive carrier
    ultrafilter: Ultrafilter = field(repr=False)


def common_carrier(hs: Iterable[Halfspace]) -> frozenset[int]:
    hs = list(hs)
    if not hs:
        return frozenset()
    return frozenset.intersection(*(h.carrier for h in hs))


def is_cage(c: CubeComplex, K: Iterable[Halfspace], alpha: Ultrafilter) -> bool:
    K = list(K)
    return bool(K) and all(h in alpha for h in K) and bool(common_carrier(K))


def prec(c: CubeComplex, H1: Iterable[Halfspace], H2: Iterable[Halfspace]) -> bool:
    """Every member of ``H1`` lies inside some member of ``H2``."""
    H2 = list(H2)
    return all(any(h.vertices <= k.vertices for k in H2) for h in H1)


def _prune(hs: list[Halfspace], trace) -> list[Halfspace]:
    keep = []
    for h in hs:
        smaller = next((k for k in hs if k.vertices < h.vertices), None)
        if smaller is None:
            keep.append(h)
        elif trace is not None:
            trace.append({"op": "drop", "halfspace": str(h), "inside": str(smaller)})
    return keep


def _bridge(c: CubeComplex, src: frozenset[int], dst: frozenset[int]) -> list[int]:
    """Lexicographically least shortest path from ``src`` to ``dst``."""
    d = c.dist
    targets = sorted(dst)
    to_dst = d[:, targets].min(axis=1)
    start = min(src, key=lambda v: (to_dst[v], v))
    path = [start]
    x = start
    while to_dst[x] > 0:
        x = next(y for y in c.adj[x] if to_dst[y] == to_dst[x] - 1)
        path.append(x)
    return path


def carrier_gap(c: CubeComplex, hs: list[Halfspace]) -> int:
    """Sum over member pairs of the distance between their positive carriers."""
    total = 0
    for h, k in combinations(hs, 2):
        total += int(c.dist[np.ix_(sorted(h.carrier), sorted(k.carrier))].min())
    return total


def cage_reduce(c: CubeComplex, H: Iterable[Halfspace], alpha: Ultrafilter,
                trace: list | None = None) -> Cage:
    """Shrink a finite subset of ``alpha`` to a cage below it.

    Members that contain another member are dropped; then, while two members have
    disjoint positive carriers, the first edge of the least shortest path between the
    carriers names a class whose ``alpha``-side lies inside one of the two, and it
    replaces that member.
    """
    hs = sorted(set(H))
    if not hs:
        raise InputError("cage reduction needs at least one halfspace")
    outside = [h for h in hs if h not in alpha]
    if outside:
        raise InputError(f"halfspaces {[str(h) for h in outside]} are not in the ultrafilter")
    hs = _prune(hs, trace)
    budget = carrier_gap(c, hs)
    steps = 0
    while True:
        pair = next(((h, k) for h, k in combinations(hs, 2)
                     if not h.carrier & k.carrier), None)
        if pair is None:
            break
        h, k = pair
        route = _bridge(c, h.carrier, k.carrier)
        new = alpha.halfspace(c, c.class_of(route[0], route[1]))
        if new.vertices <= h.vertices:
            old = h
        elif new.vertices <= k.vertices:
            old = k
        else:
            raise VerificationError(f"replacement {new} lies in neither {h} nor {k}")
        if trace is not None:
            trace.append({"op": "replace", "old": str(old), "new": str(new),
                          "path": [c.label(v) for v in route]})
        hs = sorted(set(hs) - {old} | {new})
        hs = _prune(hs, trace)
        steps += 1
        if steps > budget:
            raise VerificationError("cage reduction exceeded its carrier-distance budget")
    anchor = min(common_carrier(hs))
    return Cage(tuple(hs), anchor, alpha)


def neighbourhood_halfspaces(c: CubeComplex, alpha: Ultrafilter, R: int, b: int):
    """The ``alpha``-sides of classes at distance at most ``R`` from ``b``, where a
    class is at distance 1 + (number of classes separating it from ``b``)."""
    dist = [separators_from(c, i, b) + 1 for i in range(c.num_classes)]
    near = [alpha.halfspace(c, i) for i in range(c.num_classes) if dist[i] <= R]
    if not near and c.num_classes:
        i = min(range(c.num_classes), key=lambda i: (dist[i], i))
        near = [alpha.halfspace(c, i)]
    return near


def cage_neighborhood(c: CubeComplex, alpha: Ultrafilter, R: int, b: int,
                      trace: list | None = None) -> Cage:
    if R < 1:
        raise InputError("radius must be at least 1")
    return cage_reduce(c, neighbourhood_halfspaces(c, alpha, R, b), alpha, trace)


def cage_contains_hyperplane(c: CubeComplex, K: Cage | Iterable[Halfspace]):
    """A class lying inside the intersection of the cage's halfspaces, or None."""
    hs = K.halfspaces if isinstance(K, Cage) else tuple(K)
    inside = contained_hyperplanes(c, hs)
    return inside[0] if inside else None
