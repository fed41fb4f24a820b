"""Collapsing hyperplane orbits and the uncage pipeline for 2-dimensional complexes.

Collapsing a class identifies the two endpoints of each of its dual edges.  The
quotient of a median graph by a Θ-class is again median, and every other class
survives as exactly one class of the quotient; ``CollapseMap.lift`` records that
correspondence.  Group actions are finite: a list of vertex permutations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import InputError, NotMedianError, PreconditionError, VerificationError
from .graph import SimplicialGraph, sort_key
from .hyperplanes import Halfspace, dimension, has_straight_links, halfspace, side_of
from .median import CubeComplex, _UnionFind
from .tight_cages import (DEFAULT_MARGIN, DEFAULT_THRESHOLD, find_loose_hyperplanes,
                          find_sectorless_tight_cages)

DEFAULT_WORD_LENGTH = 6


class AutomorphismAction:
    """A group acting on ``c`` through generator permutations of vertex indices."""

    def __init__(self, c: CubeComplex, generators=()):
        self.complex = c
        gens = []
        for i, g in enumerate(generators):
            g = tuple(int(x) for x in g)
            if sorted(g) != list(range(c.n)):
                raise InputError(f"generator {i} is not a permutation of {c.n} vertices")
            for a, b in c.edges:
                if g[b] not in c.adj[g[a]]:
                    raise InputError(f"generator {i} sends edge {c.label(a)!r}-{c.label(b)!r} "
                                     f"to a non-edge")
            gens.append(g)
        self.generators = tuple(gens)
        self.class_maps = tuple(_class_map(c, g) for g in gens)

    @classmethod
    def trivial(cls, c: CubeComplex) -> "AutomorphismAction":
        return cls(c, ())

    @classmethod
    def from_labels(cls, c: CubeComplex, images) -> "AutomorphismAction":
        """Generators given as image lists: entry ``i`` is the image of the ``i``-th vertex."""
        gens = []
        for g in images:
            if len(g) != c.n:
                raise InputError(f"generator has {len(g)} images for {c.n} vertices")
            gens.append([c.index(x) for x in g])
        return cls(c, gens)

    @classmethod
    def from_data(cls, c: CubeComplex, data: dict) -> "AutomorphismAction":
        if not isinstance(data, dict) or not isinstance(data.get("generators"), list):
            raise InputError("action data needs a 'generators' list")
        return cls.from_labels(c, data["generators"])

    def to_data(self) -> dict:
        return {"generators": [[self.complex.label(x) for x in g] for g in self.generators]}

    def elements(self, max_length: int = DEFAULT_WORD_LENGTH):
        """Distinct group elements reachable by words of length <= ``max_length``.

        Returns ``(word, permutation)`` pairs in breadth-first order, each with its
        first shortest word; letters are ``(generator, exponent)``.
        """
        ident = tuple(range(self.complex.n))
        letters = []
        for i, g in enumerate(self.generators):
            inv = [0] * len(g)
            for a, b in enumerate(g):
                inv[b] = a
            letters.append(((i, 1), g))
            if tuple(inv) != g:
                letters.append(((i, -1), tuple(inv)))
        seen = {ident: ()}
        frontier = [ident]
        for _ in range(max_length):
            nxt = []
            for p in frontier:
                for letter, g in letters:
                    q = tuple(g[x] for x in p)
                    if q not in seen:
                        seen[q] = seen[p] + (letter,)
                        nxt.append(q)
            frontier = nxt
        return [(w, p) for p, w in seen.items()]


def _class_map(c: CubeComplex, g) -> tuple:
    out = [-1] * c.num_classes
    for e, (a, b) in enumerate(c.edges):
        k = int(c.edge_class[e])
        img = c.class_of(g[a], g[b])
        if out[k] == -1:
            out[k] = img
        elif out[k] != img:
            raise VerificationError(f"automorphism splits class {k}")
    return tuple(out)


def format_element(word) -> str:
    if not word:
        return "1"
    return " ".join(f"g{i}" if e == 1 else f"g{i}^-1" for i, e in word)


def hyperplane_orbit(c: CubeComplex, action: AutomorphismAction, cls: int) -> frozenset[int]:
    if not 0 <= cls < c.num_classes:
        raise InputError(f"no class {cls}")
    orbit = {cls}
    todo = [cls]
    while todo:
        k = todo.pop()
        for m in action.class_maps:
            if m[k] not in orbit:
                orbit.add(m[k])
                todo.append(m[k])
    return frozenset(orbit)


@dataclass(frozen=True)
class CollapseMap:
    source: CubeComplex
    target: CubeComplex
    projection: tuple  # source vertex index -> target vertex index
    lift: tuple  # target class -> source class
    orbit: frozenset = field(default=frozenset())

    def lift_halfspace(self, h: Halfspace) -> Halfspace:
        """The source halfspace projecting onto the target halfspace ``h``."""
        k = self.lift[h.cls]
        tv = next(iter(h.vertices))
        u = self.projection.index(tv)
        return halfspace(self.source, k, side_of(self.source, k, u))


def identity_map(c: CubeComplex) -> CollapseMap:
    return CollapseMap(c, c, tuple(range(c.n)), tuple(range(c.num_classes)), frozenset())


def collapse_hyperplane(c: CubeComplex, cls: int) -> CollapseMap:
    if not 0 <= cls < c.num_classes:
        raise InputError(f"no class {cls}")
    uf = _UnionFind(c.n)
    for e in c.class_edges[cls]:
        a, b = c.edges[e]
        uf.union(a, b)
    fibre = {}
    for v in range(c.n):
        fibre.setdefault(uf.find(v), []).append(v)
    name = {r: min((c.label(v) for v in vs), key=sort_key) for r, vs in fibre.items()}
    edges = set()
    for e, (a, b) in enumerate(c.edges):
        if int(c.edge_class[e]) == cls:
            continue
        x, y = name[uf.find(a)], name[uf.find(b)]
        if x != y:
            edges.add((x, y) if sort_key(x) < sort_key(y) else (y, x))
    g = SimplicialGraph.from_edges(name.values(), sorted(edges, key=lambda e: (sort_key(e[0]), sort_key(e[1]))))
    frontier = sorted({name[uf.find(v)] for v in c.frontier}, key=sort_key)
    try:
        target = CubeComplex(g, frontier)
    except NotMedianError as exc:
        raise VerificationError(f"collapse of class {cls} is not median: {exc}") from exc
    proj = tuple(target.index(name[uf.find(v)]) for v in range(c.n))
    lift = [-1] * target.num_classes
    for e, (a, b) in enumerate(c.edges):
        k = int(c.edge_class[e])
        if k == cls:
            continue
        t = target.class_of(proj[a], proj[b])
        if lift[t] == -1:
            lift[t] = k
    return CollapseMap(c, target, proj, tuple(lift), frozenset({cls}))


def compose(first: CollapseMap, second: CollapseMap) -> CollapseMap:
    if first.target is not second.source:
        raise InputError("maps do not compose")
    proj = tuple(second.projection[p] for p in first.projection)
    lift = tuple(first.lift[k] for k in second.lift)
    orbit = first.orbit | {first.lift[k] for k in second.orbit}
    return CollapseMap(first.source, second.target, proj, lift, frozenset(orbit))


def collapse_orbit(c: CubeComplex, action: AutomorphismAction, cls: int) -> CollapseMap:
    """Collapse every class in the orbit of ``cls``, one at a time in ascending id."""
    m = identity_map(c)
    for k in sorted(hyperplane_orbit(c, action, cls)):
        current = m.lift.index(k)
        m = compose(m, collapse_hyperplane(m.target, current))
    return m


def induced_action(m: CollapseMap, action: AutomorphismAction) -> AutomorphismAction:
    """Push the action through the projection; fails if the map is not equivariant."""
    gens = []
    for i, g in enumerate(action.generators):
        img = [-1] * m.target.n
        for u in range(m.source.n):
            t, s = m.projection[u], m.projection[g[u]]
            if img[t] == -1:
                img[t] = s
            elif img[t] != s:
                raise VerificationError(f"projection is not equivariant for generator g{i} "
                                        f"at vertex {m.source.label(u)!r}")
        gens.append(img)
    return AutomorphismAction(m.target, gens)


@dataclass
class CollapseReport:
    checks: dict
    witnesses: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _separating_counts(c: CubeComplex, keep: list[int]) -> np.ndarray:
    s = c.sides[:, keep].astype(np.int64)
    return s @ (1 - s).T + (1 - s) @ s.T


def verify_collapse_properties(m: CollapseMap) -> CollapseReport:
    """Check the basic properties of a collapse exactly, over all vertices and classes."""
    src, tgt = m.source, m.target
    checks, wit = {}, {}

    try:
        CubeComplex(tgt.skeleton)
        checks["median"] = True
    except NotMedianError as exc:
        checks["median"] = False
        wit["median"] = exc.triple

    survivors = sorted(set(range(src.num_classes)) - m.orbit)
    lifted = list(m.lift)
    checks["surjective"] = set(m.projection) == set(range(tgt.n))
    checks["class_bijection"] = sorted(lifted) == survivors
    if not checks["class_bijection"]:
        wit["class_bijection"] = {"lift": lifted, "expected": survivors}
    back = {k: t for t, k in enumerate(lifted)}
    for e, (a, b) in enumerate(src.edges):
        k = int(src.edge_class[e])
        pa, pb = m.projection[a], m.projection[b]
        if k in m.orbit:
            if pa != pb:
                checks["class_bijection"] = False
                wit.setdefault("class_bijection", ("orbit edge survives", a, b))
        elif pa == pb or back.get(k) != tgt.class_of(pa, pb):
            checks["class_bijection"] = False
            wit.setdefault("class_bijection", ("edge not sent to its class", a, b))

    checks["crossing"] = True
    if checks["class_bijection"]:
        for t1, t2 in combinations(range(tgt.num_classes), 2):
            if tgt.crossing[t1, t2] != src.crossing[lifted[t1], lifted[t2]]:
                checks["crossing"] = False
                wit["crossing"] = (lifted[t1], lifted[t2])
                break

    counts = _separating_counts(src, survivors)
    p = np.asarray(m.projection)
    bad = np.argwhere(tgt.dist[np.ix_(p, p)] != counts)
    checks["distance"] = len(bad) == 0
    if len(bad):
        u, v = (int(x) for x in bad[0])
        wit["distance"] = (src.label(u), src.label(v))
    return CollapseReport(checks, wit)


# -- carrier reflections ---------------------------------------------------

def is_carrier_reflection(c: CubeComplex, g, h: Halfspace) -> bool:
    g = tuple(g)
    if frozenset(g[v] for v in h.carrier) != h.carrier:
        return False
    a, b = c.hyperplanes[h.cls].edges[0]
    return c.class_of(g[a], g[b]) != h.cls


def core_carrier_reflection(c: CubeComplex, action: AutomorphismAction,
                            max_length: int = DEFAULT_WORD_LENGTH, cages=None,
                            threshold: int = DEFAULT_THRESHOLD, margin: int = DEFAULT_MARGIN):
    """First ``(word, halfspace)`` with the element reflecting a core carrier, or None."""
    if not action.generators:
        return None
    if cages is None:
        cages = find_sectorless_tight_cages(c, threshold, margin)
    members = sorted({t for tc in cages for t in tc.T})
    if not members:
        return None
    for word, g in action.elements(max_length):
        for h in members:
            if is_carrier_reflection(c, g, h):
                return word, h
    return None


def acts_without_core_carrier_reflections(c: CubeComplex, action: AutomorphismAction,
                                          max_length: int = DEFAULT_WORD_LENGTH, **kw) -> bool:
    return core_carrier_reflection(c, action, max_length, **kw) is None


# -- pipeline --------------------------------------------------------------

def nested_orbit_triple(c: CubeComplex, orbit) -> tuple | None:
    """Three pairwise disjoint orbit classes, the middle one separating the outer two,
    with touching carriers on both sides; None when there is no such triple."""
    hp = c.hyperplanes
    carriers = {k: hp[k].halfspaces[0].carrier | hp[k].halfspaces[1].carrier for k in orbit}
    for trio in combinations(sorted(orbit), 3):
        if any(c.crossing[x, y] for x, y in combinations(trio, 2)):
            continue
        for mid in trio:
            a, b = (k for k in trio if k != mid)
            if not (carriers[a] & carriers[mid] and carriers[mid] & carriers[b]):
                continue
            sa = {side_of(c, mid, v) for v in carriers[a] - carriers[mid]}
            sb = {side_of(c, mid, v) for v in carriers[b] - carriers[mid]}
            if len(sa) == 1 and len(sb) == 1 and sa != sb:
                return a, mid, b
    return None


def lift_failures(m: CollapseMap, source_cages, target_cages) -> list:
    """Pairs of target halfspaces sharing a sectorless cage whose lifts share none."""
    shared = set()
    for tc in source_cages:
        for a, b in combinations(tc.T, 2):
            shared.add((a.key, b.key))
    out = []
    for tc in target_cages:
        for a, b in combinations(tc.T, 2):
            la, lb = m.lift_halfspace(a), m.lift_halfspace(b)
            pair = tuple(sorted((la.key, lb.key)))
            if pair not in shared:
                out.append((str(a), str(b)))
    return out


def uncage_pipeline(c: CubeComplex, action: AutomorphismAction | None = None,
                    threshold: int = DEFAULT_THRESHOLD, margin: int = DEFAULT_MARGIN,
                    max_length: int = DEFAULT_WORD_LENGTH):
    """Collapse loose hyperplane orbits until no sectorless tight cage or loose class is left.

    Returns ``(final complex, composed map, log)``; the log is a list of JSON-ready
    dicts, one per step and a final ``stop`` record.
    """
    if action is None:
        action = AutomorphismAction.trivial(c)
    if dimension(c) > 2:
        raise PreconditionError(f"complex has dimension {dimension(c)}; need at most 2")
    cages = find_sectorless_tight_cages(c, threshold, margin)
    hit = core_carrier_reflection(c, action, max_length, cages)
    if hit is not None:
        word, h = hit
        err = PreconditionError(f"core carrier reflection: g = {format_element(word)} "
                                f"stabilises the carrier of h = {h} but not its hyperplane")
        err.witness = (format_element(word), str(h))
        raise err

    total = identity_map(c)
    cur, act = c, action
    straight = has_straight_links(c, c.interior(1))
    log = []
    step = 0
    while True:
        if not cages:
            log.append({"stop": "no sectorless tight cage", "steps": step})
            break
        loose = find_loose_hyperplanes(cur, cages, threshold, margin)
        if not loose:
            log.append({"stop": "no loose hyperplane", "steps": step})
            break
        cls = loose[0][0]
        orbit = hyperplane_orbit(cur, act, cls)
        triple = nested_orbit_triple(cur, orbit)
        m = collapse_orbit(cur, act, cls)
        report = verify_collapse_properties(m)
        if not report.passed:
            raise VerificationError(f"collapse of orbit {sorted(orbit)} failed: {report.witnesses}")
        new_act = induced_action(m, act)
        new_cages = find_sectorless_tight_cages(m.target, threshold, margin)
        lifts = lift_failures(m, cages, new_cages)
        step += 1
        entry = {
            "step": step,
            "class": cls,
            "orbit": sorted(orbit),
            "vertices": [cur.n, m.target.n],
            "classes": [cur.num_classes, m.target.num_classes],
            "cages": [len(cages), len(new_cages)],
            "cages_non_increasing": len(new_cages) <= len(cages),
            "frontier_exception": len(new_cages) > len(cages),
            "nested_orbit_triple": None if triple is None else list(triple),
            "sequential_collapse_ok": triple is None,
            "lift_ok": not lifts,
            "dimension": dimension(m.target),
            "straight_links_kept": (not straight) or has_straight_links(m.target,
                                                                       m.target.interior(1)),
            "collapse_checks": report.checks,
        }
        if lifts:
            entry["lift_failures"] = lifts
        log.append(entry)
        if triple is not None:
            raise VerificationError(f"orbit {sorted(orbit)} has nested classes {triple}")
        if m.target.num_classes >= cur.num_classes:
            raise VerificationError("collapse did not reduce the class count")
        total = compose(total, m)
        cur, act, cages = m.target, new_act, new_cages
    return cur, total, log
