"""Ultrafilters as hyperplane orientations, the base-point metric and minimal halfspaces.

On a finite complex every ultrafilter satisfies the descending chain condition, so the
consistent orientations are exactly the principal ones and the Roller boundary is
empty.  Boundary statements are therefore never represented as data here.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, VerificationError
from .hyperplanes import Halfspace, halfspace
from .median import CubeComplex


@dataclass(frozen=True)
class Ultrafilter:
    """``orientation[i]`` is the side (0 or 1) chosen for class ``i``."""

    orientation: tuple

    def __contains__(self, h: Halfspace) -> bool:
        return self.orientation[h.cls] == h.side

    def halfspace(self, c: CubeComplex, cls: int) -> Halfspace:
        return halfspace(c, cls, self.orientation[cls])

    def halfspaces(self, c: CubeComplex) -> tuple[Halfspace, ...]:
        return tuple(self.halfspace(c, i) for i in range(len(self.orientation)))


def principal(c: CubeComplex, v: int) -> Ultrafilter:
    return Ultrafilter(tuple(int(x) for x in c.sides[v]))


def nested_pairs(c: CubeComplex) -> np.ndarray:
    """Rows ``(i, s, j, t)`` with halfspace ``i:s`` strictly inside ``j:t``, i != j."""
    return _nested(c)


@lru_cache(maxsize=64)
def _nested(c: CubeComplex) -> np.ndarray:
    one = c.sides.astype(np.int64)
    zero = 1 - one
    by_side = (zero, one)
    rows = []
    for s in (0, 1):
        for t in (0, 1):
            # number of vertices on side s of i and side t of j
            count = by_side[s].T @ by_side[t]
            # i:s inside j:(1-t)  iff quadrant (s, t) is empty
            for i, j in zip(*np.nonzero(count == 0)):
                if i != j:
                    rows.append((i, s, j, 1 - t))
    return np.array(sorted(rows), dtype=np.int64).reshape(-1, 4)


def _check_total(c: CubeComplex, orientation: Sequence[int]) -> None:
    if len(orientation) != c.num_classes or any(x not in (0, 1) for x in orientation):
        raise InputError("orientation must give a side 0/1 for every class")


def is_consistent(c: CubeComplex, orientation: Sequence[int] | Ultrafilter) -> bool:
    if isinstance(orientation, Ultrafilter):
        orientation = orientation.orientation
    _check_total(c, orientation)
    o = np.asarray(orientation)
    p = nested_pairs(c)
    if not len(p):
        return True
    return not np.any((o[p[:, 0]] == p[:, 1]) & (o[p[:, 2]] != p[:, 3]))


def consistent_mask(c: CubeComplex, orientations: np.ndarray) -> np.ndarray:
    """Vectorised consistency test for a stack of orientations (rows)."""
    p = nested_pairs(c)
    ok = np.ones(len(orientations), dtype=bool)
    for i, s, j, t in p:
        ok &= ~((orientations[:, i] == s) & (orientations[:, j] != t))
    return ok


def enumerate_consistent(c: CubeComplex, max_classes: int = 20) -> list[Ultrafilter]:
    """Brute force over all 2^n orientations."""
    n = c.num_classes
    if n > max_classes:
        raise InputError(f"{n} classes exceed the enumeration limit {max_classes}")
    out = []
    chunk = 1 << min(n, 14)
    for start in range(0, 1 << n, chunk):
        codes = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        bits = ((codes[:, None] >> np.arange(n)) & 1).astype(np.int64)
        for row in bits[consistent_mask(c, bits)]:
            out.append(Ultrafilter(tuple(int(x) for x in row)))
    return out


def vertex_of(c: CubeComplex, alpha: Ultrafilter) -> int:
    if not is_consistent(c, alpha):
        raise InputError("orientation is not consistent, so it names no vertex")
    hits = np.nonzero((c.sides == np.asarray(alpha.orientation, dtype=bool)).all(axis=1))[0]
    if len(hits) != 1:
        raise VerificationError("consistent orientation without a unique vertex")
    return int(hits[0])


def separators_from(c: CubeComplex, cls: int, b: int) -> int:
    """Number of classes having the whole hyperplane ``cls`` on the far side from ``b``."""
    ends = sorted({x for e in c.hyperplanes[cls].edges for x in e})
    far = c.sides[ends] != c.sides[b]
    return int(far.all(axis=0).sum())


def hyperplane_weight(c: CubeComplex, cls: int, b: int) -> Fraction:
    return Fraction(1, separators_from(c, cls, b) + 1)


def uf_distance(c: CubeComplex, alpha: Ultrafilter, beta: Ultrafilter, b: int) -> Fraction:
    diff = [i for i, (x, y) in enumerate(zip(alpha.orientation, beta.orientation)) if x != y]
    return max((hyperplane_weight(c, i, b) for i in diff), default=Fraction(0))


def minimal_by_order(c: CubeComplex, alpha: Ultrafilter) -> tuple[Halfspace, ...]:
    mine = alpha.halfspaces(c)
    out = []
    for h in mine:
        if not any(k.cls != h.cls and k.vertices < h.vertices for k in mine):
            out.append(h)
    return tuple(out)


def minimal_by_carrier(c: CubeComplex, alpha: Ultrafilter) -> tuple[Halfspace, ...]:
    v = vertex_of(c, alpha)
    return tuple(h for h in alpha.halfspaces(c) if v in h.carrier)


def minimal_halfspaces(c: CubeComplex, alpha: Ultrafilter) -> tuple[Halfspace, ...]:
    a, b = minimal_by_order(c, alpha), minimal_by_carrier(c, alpha)
    if a != b:
        raise VerificationError(f"minimal halfspace characterisations disagree: {a} vs {b}")
    return a


def orientation_of(halfspaces: Iterable[Halfspace], c: CubeComplex) -> dict:
    return {h.cls: h.side for h in halfspaces}
