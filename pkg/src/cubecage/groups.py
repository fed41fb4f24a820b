"""Right-angled Coxeter and Artin groups: normal forms, Cayley balls, boundary certificates.

A word is a tuple of letters ``(generator, exponent)``.  For Coxeter groups every
exponent is +1 (generators are involutions).  Normal forms are shortlex with respect
to the order of ``gamma.vertices`` and, within a generator, ``+1`` before ``-1``.
"""
from __future__ import annotations

import re
from itertools import combinations
from dataclasses import dataclass, field

from .errors import InputError, PreconditionError, ResourceError
from .graph import SimplicialGraph, join_bipartitions, join_decomposition
from .median import CubeComplex
from .tight_cages import DEFAULT_MARGIN, TightCage, check_tight_cage
from .ultrafilters import minimal_halfspaces, principal

DEFAULT_CAP = 20000


class _Alphabet:
    def __init__(self, gamma: SimplicialGraph, involutive: bool):
        if not gamma.vertices:
            raise InputError("defining graph has no vertices")
        self.gamma = gamma
        self.involutive = involutive
        self.rank = {g: i for i, g in enumerate(gamma.vertices)}
        adj = gamma.adjacency()
        self.adj = {g: frozenset(adj[g]) for g in gamma.vertices}
        signs = (1,) if involutive else (1, -1)
        self.letters = tuple((g, e) for g in gamma.vertices for e in signs)

    def commute(self, g, h) -> bool:
        return g == h or h in self.adj[g]

    def key(self, letter) -> tuple:
        return (self.rank[letter[0]], letter[1] == -1)

    def check(self, word) -> tuple:
        out = []
        for letter in word:
            if not isinstance(letter, tuple) or len(letter) != 2:
                raise InputError(f"bad letter {letter!r}")
            g, e = letter
            if g not in self.rank:
                raise InputError(f"unknown generator {g!r}")
            if e not in (1, -1) or (self.involutive and e != 1):
                raise InputError(f"bad exponent {e!r} for generator {g!r}")
            out.append((g, e))
        return tuple(out)

    def cancel(self, word: list) -> list:
        # delete a letter pair that can be brought together and cancels
        changed = True
        while changed:
            changed = False
            for i, (g, e) in enumerate(word):
                for j in range(i + 1, len(word)):
                    h, f = word[j]
                    if h == g:
                        if self.involutive or f == -e:
                            del word[j], word[i]
                            changed = True
                        break
                    if h not in self.adj[g]:
                        break
                if changed:
                    break
        return word

    def lex(self, word) -> tuple:
        # least linear extension of the commutation order of a geodesic word
        rest = list(word)
        out = []
        while rest:
            best = None
            for p, letter in enumerate(rest):
                if all(self.commute(letter[0], rest[q][0]) for q in range(p)):
                    if best is None or self.key(letter) < self.key(rest[best]):
                        best = p
            out.append(rest.pop(best))
        return tuple(out)

    def reduce(self, word) -> tuple:
        return self.lex(self.cancel(list(self.check(word))))

    def times(self, word: tuple, letter) -> tuple:
        """Normal form of ``word * letter`` for a word already in normal form."""
        g, e = letter
        for j in range(len(word) - 1, -1, -1):
            h, f = word[j]
            if h == g:
                if self.involutive or f == -e:
                    return self.lex(word[:j] + word[j + 1:])
                break
            if h not in self.adj[g]:
                break
        return self.lex(word + (letter,))


def parse_word(text: str, gamma: SimplicialGraph, involutive: bool = True) -> tuple:
    """Parse ``"aba"`` (one-character generators) or ``"a b a^-1"`` style words."""
    names = {str(v): v for v in gamma.vertices}
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    if re.search(r"\s", text) or not all(len(n) == 1 for n in names):
        tokens = text.split()
    else:
        tokens = re.findall(r".(?:\^-1|⁻¹)?", text)
    out = []
    for tok in tokens:
        m = re.fullmatch(r"(.+?)(\^-1|⁻¹)?", tok)
        name, inv = m.group(1), m.group(2)
        if name not in names:
            raise InputError(f"unknown generator {name!r}")
        if inv and involutive:
            inv = None  # an involution is its own inverse
        out.append((names[name], -1 if inv else 1))
    return tuple(out)


def format_word(word: tuple) -> str:
    if not word:
        return "1"
    names = [str(g) for g, _ in word]
    if all(e == 1 for _, e in word) and all(len(n) == 1 for n in names):
        return "".join(names)
    return " ".join(n if e == 1 else f"{n}^-1" for n, (_, e) in zip(names, word))


def racg_reduce(word, gamma: SimplicialGraph) -> tuple:
    if isinstance(word, str):
        word = parse_word(word, gamma, True)
    return _Alphabet(gamma, True).reduce(word)


def raag_reduce(word, gamma: SimplicialGraph) -> tuple:
    if isinstance(word, str):
        word = parse_word(word, gamma, False)
    return _Alphabet(gamma, False).reduce(word)


class GroupBall(CubeComplex):
    """A ball in the standard cube complex of a right-angled group.

    ``words[i]`` is the normal form at vertex ``i``; vertices are ordered by shortlex.
    The frontier is every vertex of word length at least ``radius`` (hull completion
    can add a few longer words).
    """

    def __init__(self, gamma, kind, radius, words, edges, gens):
        self.gamma = gamma
        self.kind = kind
        self.radius = radius
        self.words = tuple(words)
        labels = [format_word(w) for w in self.words]
        g = SimplicialGraph(tuple(labels), tuple((labels[a], labels[b]) for a, b in edges))
        super().__init__(g, [labels[i] for i, w in enumerate(self.words) if len(w) >= radius])
        self.edge_generator = {}
        for (a, b), s in zip(edges, gens):
            self.edge_generator[(min(a, b), max(a, b))] = s

    def class_generator(self, cls: int):
        a, b = self.hyperplanes[cls].edges[0]
        return self.edge_generator[(a, b)]

    @property
    def identity(self) -> int:
        return 0


def _ball(gamma: SimplicialGraph, radius: int, involutive: bool, cap: int) -> GroupBall:
    if radius < 1:
        raise InputError("radius must be at least 1")
    alpha = _Alphabet(gamma, involutive)
    index = {(): 0}
    words = [()]
    layer = [()]
    for _ in range(radius):
        nxt = []
        for w in layer:
            for letter in alpha.letters:
                u = alpha.times(w, letter)
                if len(u) == len(w) + 1 and u not in index:
                    index[u] = len(words)
                    words.append(u)
                    nxt.append(u)
                    if len(words) > cap:
                        raise ResourceError(f"ball exceeds {cap} vertices")
        layer = nxt
    # complete cubes: when seven corners of a 3-cube spanned at a vertex by three
    # pairwise commuting generators are present, add the eighth
    product = {}

    def times(w, letter):
        key = (w, letter)
        if key not in product:
            product[key] = alpha.times(w, letter)
        return product[key]

    changed = True
    while changed:
        changed = False
        for w in list(words):
            present = [x for x in alpha.letters if times(w, x) in index]
            for s, t, r in combinations(present, 3):
                if len({s[0], t[0], r[0]}) < 3:
                    continue
                if not (alpha.commute(s[0], t[0]) and alpha.commute(s[0], r[0])
                        and alpha.commute(t[0], r[0])):
                    continue
                ws, wt = times(w, s), times(w, t)
                faces = (times(ws, t), times(ws, r), times(wt, r))
                if not all(f in index for f in faces):
                    continue
                corner = times(faces[0], r)
                if corner not in index:
                    index[corner] = len(words)
                    words.append(corner)
                    changed = True
                    if len(words) > cap:
                        raise ResourceError(f"ball exceeds {cap} vertices")
    order = sorted(words, key=lambda w: (len(w), [alpha.key(x) for x in w]))
    pos = {w: i for i, w in enumerate(order)}
    edges, gens = [], []
    for w in order:
        for g in gamma.vertices:
            u = times(w, (g, 1))
            if u in pos and (involutive and pos[w] < pos[u] or not involutive):
                edges.append((pos[w], pos[u]))
                gens.append(g)
    kind = "RACG" if involutive else "RAAG"
    return GroupBall(gamma, kind, radius, order, edges, gens)


def racg_ball(gamma: SimplicialGraph, radius: int, cap: int = DEFAULT_CAP) -> GroupBall:
    return _ball(gamma, radius, True, cap)


def raag_ball(gamma: SimplicialGraph, radius: int, cap: int = DEFAULT_CAP) -> GroupBall:
    return _ball(gamma, radius, False, cap)


def racg_has_straight_links(gamma: SimplicialGraph) -> bool:
    """No generator commutes with all the others."""
    n = gamma.order
    if n == 0:
        raise InputError("defining graph has no vertices")
    adj = gamma.adjacency()
    return all(len(adj[v]) < n - 1 for v in gamma.vertices)


def racg_is_infinite(gamma: SimplicialGraph) -> bool:
    if gamma.order == 0:
        raise InputError("defining graph has no vertices")
    return not gamma.is_complete()


@dataclass
class Certificate:
    group: str
    infinite: bool
    equal: bool
    reason: str
    join: tuple | None = None
    product_cage: TightCage | None = field(default=None, repr=False)
    note: str | None = None

    def summary(self) -> str:
        return f"∂X = B(X): {'true' if self.equal else 'false'} ({self.reason})"


def _join_text(parts) -> str:
    return " * ".join("{" + ",".join(str(v) for v in p) + "}" for p in parts)


def _certify(group: str, gamma: SimplicialGraph, infinite: bool, radius: int | None) -> Certificate:
    if not infinite:
        return Certificate(group, False, True, "W_Γ finite, both boundaries empty")
    parts = join_decomposition(gamma)
    if parts is None:
        return Certificate(group, True, True, "Γ not a join")
    cert = Certificate(group, True, False, f"Γ is a join: {_join_text(parts)}", join=parts)
    if radius:
        ball = (racg_ball if group == "RACG" else raag_ball)(gamma, radius)
        notes = []
        for first, second in (o for pair in join_bipartitions(gamma) for o in (pair, pair[::-1])):
            witness = type_partition(ball, first)
            try:
                tc = product_tight_cage(ball, witness, ball.identity)
            except PreconditionError as exc:
                notes.append(f"factor {_join_text([first])}: {exc}")
                continue
            if tc.passed:
                cert.product_cage = tc
                break
            notes.append(f"factor {_join_text([first])}: product cage fails ({tc.failure})")
        if cert.product_cage is None:
            cert.note = "; ".join(notes)
    return cert


def racg_boundary_equals_BX(gamma: SimplicialGraph, radius: int | None = None) -> Certificate:
    return _certify("RACG", gamma, racg_is_infinite(gamma), radius)


def raag_boundary_equals_BX(gamma: SimplicialGraph, radius: int | None = None) -> Certificate:
    if gamma.order == 0:
        raise InputError("defining graph has no vertices")
    return _certify("RAAG", gamma, True, radius)


def type_partition(ball: GroupBall, generators) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split the classes of a group ball by the generator labelling their edges."""
    gens = set(generators)
    first = tuple(i for i in range(ball.num_classes) if ball.class_generator(i) in gens)
    second = tuple(i for i in range(ball.num_classes) if ball.class_generator(i) not in gens)
    return first, second


def _deep_classes(c: CubeComplex, margin: int) -> set[int]:
    fd = c.frontier_distance
    return {hp.id for hp in c.hyperplanes
            if any(min(fd[a], fd[b]) >= margin for a, b in hp.edges)}


def product_tight_cage(c: CubeComplex, witness, v: int,
                       margin: int = DEFAULT_MARGIN) -> TightCage:
    """Tight cage from a product splitting: T is the set of minimal halfspaces of the
    principal ultrafilter at ``v`` whose classes lie in the first factor.

    With a frontier, the parts must cross completely only among classes reaching at
    least ``margin`` into the interior; the ball cuts off the others.
    """
    first, second = (tuple(sorted(p)) for p in witness)
    if not first or not second or set(first) & set(second) \
            or len(first) + len(second) != c.num_classes:
        raise PreconditionError("witness must split all classes into two nonempty parts")
    cross = c.crossing
    deep = _deep_classes(c, margin)
    if not all(cross[i, j] for i in first for j in second if i in deep and j in deep):
        raise PreconditionError("witness parts do not cross completely; complex not split")
    firsts = set(first)
    T = [h for h in minimal_halfspaces(c, principal(c, v)) if h.cls in firsts]
    if len(T) < 2:
        raise PreconditionError(
            f"only {len(T)} minimal halfspace in the first factor at this vertex; "
            "tight cages need |T| >= 2 and that requirement is kept strict")
    return check_tight_cage(c, (), T, margin=margin)
