"""Words in a right-angled Artin group and pure symmetric automorphisms.

Words are tuples of signed ints (vertex ``v`` ↦ ``v+1``, inverse ↦
``-(v+1)``).  A *normal form* is the graphically reduced word that is
lexicographically least in its commutation class, letters ordered by
(vertex id, sign) with the positive letter first.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from . import _kernels as K
from .errors import InputError, ValidityError
from .graph import SimplicialGraph, bits, to_mask

Word = tuple  # tuple[int, ...]


# -- letters ---------------------------------------------------------------

def letter(v: int, sign: int = 1) -> int:
    return (v + 1) if sign > 0 else -(v + 1)


def vertex_of(x: int) -> int:
    return abs(x) - 1


def sign_of(x: int) -> int:
    return 1 if x > 0 else -1


def parse_word(g: SimplicialGraph, text: str) -> Word:
    """Parse ``x x b x^-1`` style words; ``1`` or an empty string is the identity."""
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        name, exp = tok, 1
        if "^" in tok:
            name, _, e = tok.partition("^")
            try:
                exp = int(e)
            except ValueError:
                raise InputError(f"bad exponent in token {tok!r}") from None
        v = g.vertex(name)
        out.extend([letter(v, 1 if exp > 0 else -1)] * abs(exp))
    return tuple(out)


def format_word(g: SimplicialGraph, w: Sequence[int]) -> str:
    if not w:
        return "1"
    return " ".join(g.labels[vertex_of(x)] + ("" if x > 0 else "^-1") for x in w)


# -- group operations ------------------------------------------------------

def reduce(g: SimplicialGraph, w: Iterable[int]) -> Word:
    """Canonical graphically reduced representative of ``w``."""
    return tuple(K.normal_form(list(w), g))


def multiply(g: SimplicialGraph, *ws: Sequence[int]) -> Word:
    flat: list[int] = []
    for w in ws:
        flat.extend(w)
    return reduce(g, flat)


def invert_raw(w: Sequence[int]) -> list[int]:
    return [-x for x in reversed(w)]


def invert(g: SimplicialGraph, w: Sequence[int]) -> Word:
    return reduce(g, invert_raw(w))


def power(g: SimplicialGraph, w: Sequence[int], k: int) -> Word:
    base = list(w) if k >= 0 else invert_raw(w)
    return reduce(g, base * abs(k))


def conjugate(g: SimplicialGraph, h: Sequence[int], w: Sequence[int]) -> Word:
    """h·w·h^-1."""
    return reduce(g, list(h) + list(w) + invert_raw(h))


def abelianization(g: SimplicialGraph, w: Iterable[int]) -> tuple[int, ...]:
    e = [0] * g.n
    for x in w:
        e[vertex_of(x)] += sign_of(x)
    return tuple(e)


def cyclic_reduce(g: SimplicialGraph, w: Iterable[int]) -> tuple[Word, Word]:
    """Return (c, h) with c cyclically reduced and w = h·c·h^-1."""
    red = K.reduce_word(list(w), g)
    core, stripped = K.cyclic_core_py(red, g._adj)
    return tuple(K.canonical(core, g)), reduce(g, stripped)


def cyclic_length(g: SimplicialGraph, w: Iterable[int]) -> int:
    red = K.reduce_word(list(w), g)
    core, _ = K.cyclic_core_py(red, g._adj)
    return len(core)


def first_pile(g: SimplicialGraph, w: Sequence[int]) -> list[int]:
    """Positions of letters of a reduced word that can be shuffled to the front."""
    out = []
    for i, x in enumerate(w):
        vx = vertex_of(x)
        if all(vertex_of(y) != vx and g.adjacent(vx, vertex_of(y)) for y in w[:i]):
            out.append(i)
    return out


# -- tri-state answers -----------------------------------------------------

class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    witness: Word | None = None

    @property
    def yes(self) -> bool:
        return self.verdict is Verdict.YES

    @property
    def no(self) -> bool:
        return self.verdict is Verdict.NO

    @property
    def unknown(self) -> bool:
        return self.verdict is Verdict.UNKNOWN


YES = Verdict.YES
NO = Verdict.NO
UNKNOWN = Verdict.UNKNOWN


def is_conjugate(g: SimplicialGraph, u: Sequence[int], v: Sequence[int], bound: int = 6) -> Decision:
    """Decide whether v = x·u·x^-1 for some x.

    Cyclic reductions are compared by a breadth-first search over
    rotations (moving a first-pile letter to the back).  The rotation
    orbit of a cyclically reduced word is finite; if it is exhausted the
    answer is a definite No.  ``bound`` caps the search depth.
    """
    cu, hu = cyclic_reduce(g, u)
    cv, hv = cyclic_reduce(g, v)
    if len(cu) != len(cv) or abelianization(g, cu) != abelianization(g, cv):
        return Decision(NO)

    def witness(t):
        # cv = t^-1 cu t, hence v = (hv t^-1 hu^-1) u (hv t^-1 hu^-1)^-1
        return multiply(g, hv, invert_raw(t), invert_raw(hu))

    if cu == cv:
        return Decision(YES, witness(()))
    seen = {cu: ()}
    frontier = [cu]
    for _ in range(bound):
        nxt = []
        for s in frontier:
            t = seen[s]
            for i in first_pile(g, s):
                x = s[i]
                rot = tuple(K.canonical(list(s[:i] + s[i + 1:]) + [x], g))
                if rot in seen:
                    continue
                t2 = reduce(g, list(t) + [x])
                if rot == cv:
                    return Decision(YES, witness(t2))
                seen[rot] = t2
                nxt.append(rot)
        if not nxt:
            return Decision(NO)
        frontier = nxt
    return Decision(UNKNOWN)


# -- partial conjugations and their products ------------------------------

@dataclass(frozen=True, order=True)
class PartialConjugation:
    """C^a_A: conjugate the vertices in ``support`` by the letter ``conjugator``."""

    conjugator: int
    support: int  # vertex bitmask

    @property
    def vertex(self) -> int:
        return vertex_of(self.conjugator)

    @property
    def sign(self) -> int:
        return sign_of(self.conjugator)

    def inverse(self) -> "PartialConjugation":
        return PartialConjugation(-self.conjugator, self.support)

    def support_set(self) -> frozenset[int]:
        return frozenset(bits(self.support))

    def describe(self, g: SimplicialGraph) -> str:
        a = format_word(g, (self.conjugator,))
        return f"C[{a}; {{{','.join(g.labels[v] for v in bits(self.support))}}}]"


def make_partial_conjugation(g: SimplicialGraph, a: int, A, sign: int | None = None) -> PartialConjugation:
    """Validated C^a_A.

    ``a`` is a letter code, or a vertex id/label when ``sign`` is given.
    ``A`` is an iterable of vertex ids/labels or a bitmask.
    """
    if sign is not None:
        a = letter(g.vertex(a), sign)
    if not isinstance(a, int) or a == 0 or abs(a) > g.n:
        raise InputError(f"bad conjugator {a!r}")
    mask = A if isinstance(A, int) else to_mask(g.vertex(x) for x in A)
    v = vertex_of(a)
    if mask == 0:
        raise ValidityError("partial conjugation support must be non-empty")
    if mask & g.star_mask(v):
        raise ValidityError("support meets the star of the conjugator")
    if not g.is_union_of_components(v, mask):
        raise ValidityError("support is not a union of components of the star complement")
    return PartialConjugation(a, mask)


@dataclass(frozen=True)
class SymmetricAutomorphism:
    """Product f_1 ∘ f_2 ∘ … ∘ f_k of partial conjugations (f_k acts first)."""

    factors: tuple[PartialConjugation, ...] = ()

    @classmethod
    def of(cls, *factors: PartialConjugation) -> "SymmetricAutomorphism":
        return cls(tuple(factors))

    def __mul__(self, other: "SymmetricAutomorphism") -> "SymmetricAutomorphism":
        return SymmetricAutomorphism(self.factors + other.factors)

    def inverse(self) -> "SymmetricAutomorphism":
        return SymmetricAutomorphism(tuple(f.inverse() for f in reversed(self.factors)))

    def power(self, k: int) -> "SymmetricAutomorphism":
        base = self if k >= 0 else self.inverse()
        return SymmetricAutomorphism(base.factors * abs(k))

    def operative_vertices(self) -> frozenset[int]:
        return frozenset(f.vertex for f in self.factors)

    def describe(self, g: SimplicialGraph) -> str:
        return " ".join(f.describe(g) for f in self.factors) or "id"


IDENTITY = SymmetricAutomorphism()


def pc_power(f: PartialConjugation, k: int) -> SymmetricAutomorphism:
    return SymmetricAutomorphism.of(f).power(k)


@dataclass(frozen=True)
class Basis:
    """Images of the standard generators under some marking automorphism."""

    images: tuple[Word, ...]
    marking: SymmetricAutomorphism = field(default=IDENTITY, compare=False)


@lru_cache(maxsize=1 << 16)
def _images(g: SimplicialGraph, factors: tuple[PartialConjugation, ...]) -> tuple[Word, ...]:
    imgs = [[letter(v)] for v in range(g.n)]
    for f in reversed(factors):
        a, A = f.conjugator, f.support
        new = []
        for w in imgs:
            sub: list[int] = []
            for x in w:
                if A >> vertex_of(x) & 1:
                    sub.extend((a, x, -a))
                else:
                    sub.append(x)
            new.append(K.reduce_word(sub, g))
        imgs = new
    return tuple(tuple(K.canonical(w, g)) for w in imgs)


def images(g: SimplicialGraph, alpha: SymmetricAutomorphism) -> Basis:
    return Basis(_images(g, alpha.factors), alpha)


def substitute(g: SimplicialGraph, imgs: Sequence[Sequence[int]], w: Iterable[int]) -> Word:
    flat: list[int] = []
    for x in w:
        img = imgs[vertex_of(x)]
        flat.extend(img if x > 0 else invert_raw(img))
    return reduce(g, flat)


def apply(g: SimplicialGraph, alpha: SymmetricAutomorphism, w: Iterable[int]) -> Word:
    return substitute(g, _images(g, alpha.factors), w)


def apply_inverse(g: SimplicialGraph, alpha: SymmetricAutomorphism, w: Iterable[int]) -> Word:
    return apply(g, alpha.inverse(), w)


def same_automorphism(g: SimplicialGraph, alpha: SymmetricAutomorphism, beta: SymmetricAutomorphism) -> bool:
    return _images(g, alpha.factors) == _images(g, beta.factors)


def exponent_data(g: SimplicialGraph, alpha: SymmetricAutomorphism) -> list[list[int]]:
    """``e[a][v]``: signed number of C^a factors whose support contains v.

    This is the a-coordinate of the abelianized conjugator of α(v), which
    is well defined modulo the star of v.
    """
    e = [[0] * g.n for _ in range(g.n)]
    for f in alpha.factors:
        row = e[f.vertex]
        for v in bits(f.support):
            row[v] += f.sign
    return e


def _inner_exponents(g: SimplicialGraph, e) -> list[int | None] | None:
    """Per-vertex exponent a conjugator would need, or None if impossible."""
    out: list[int | None] = []
    for a in range(g.n):
        outside = [e[a][v] for v in range(g.n) if not g.in_star(v, a)]
        if not outside:
            out.append(None)  # a is central
            continue
        if any(x != outside[0] for x in outside):
            return None
        out.append(outside[0])
    return out


def _is_conjugation_by(g, imgs, w) -> bool:
    winv = invert_raw(w)
    return all(imgs[v] == reduce(g, list(w) + [letter(v)] + winv) for v in range(g.n))


def _is_clique(g: SimplicialGraph, mask: int) -> bool:
    vs = bits(mask)
    return all(g.adjacent(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])


def _words_up_to(g: SimplicialGraph, mask: int, bound: int):
    """Normal forms of length ≤ bound in the subgroup generated by ``mask``."""
    gens = [c for v in bits(mask) for c in (letter(v), letter(v, -1))]
    seen = {(): None}
    yield ()
    frontier = [()]
    for _ in range(bound):
        nxt = []
        for w in frontier:
            for x in gens:
                nw = reduce(g, w + (x,))
                if len(nw) == len(w) + 1 and nw not in seen:
                    seen[nw] = None
                    nxt.append(nw)
                    yield nw
        frontier = nxt


def is_inner(g: SimplicialGraph, alpha: SymmetricAutomorphism, bound: int = 6) -> Decision:
    """Decide whether α is conjugation by a single element.

    Exact when α uses a single operative vertex, when the abelianized
    exponent data rule it out, or when some non-central vertex has a star
    that is a clique modulo the centre (the candidate conjugator is then
    unique).  Otherwise a bounded search over the coset of the centralizer
    of one generator is run and Unknown is returned on failure.
    """
    e = exponent_data(g, alpha)
    G = _inner_exponents(g, e)
    if G is None:
        return Decision(NO)
    imgs = _images(g, alpha.factors)
    ops = alpha.operative_vertices()
    if len(ops) <= 1:
        if not ops:
            return Decision(YES, ())
        (a,) = ops
        k = G[a] if G[a] is not None else 0
        return Decision(YES, power(g, (letter(a),), k))
    noncentral = [v for v in range(g.n) if G[v] is not None]
    if not noncentral:
        return Decision(YES, ())
    centre = to_mask(v for v in range(g.n) if G[v] is None)

    def ok_abelian(w):
        ab = abelianization(g, w)
        return all(ab[a] == G[a] for a in noncentral)

    def coset_base(v0):
        core, h = cyclic_reduce(g, imgs[v0])
        assert core == (letter(v0),)
        return h

    for v0 in noncentral:
        rest = g.star_mask(v0) & ~centre
        if _is_clique(g, rest):
            h = coset_base(v0)
            ab = abelianization(g, h)
            c = [letter(u, 1 if G[u] - ab[u] > 0 else -1) for u in bits(rest)
                 for _ in range(abs(G[u] - ab[u]))]
            cand = multiply(g, h, c)
            if _is_conjugation_by(g, imgs, cand):
                return Decision(YES, cand)
            return Decision(NO)
    v0 = min(noncentral, key=lambda v: (bin(g.star_mask(v)).count("1"), v))
    h = coset_base(v0)
    rest = g.star_mask(v0) & ~centre
    for c in _words_up_to(g, rest, bound):
        cand = multiply(g, h, c)
        if ok_abelian(cand) and _is_conjugation_by(g, imgs, cand):
            return Decision(YES, cand)
    return Decision(UNKNOWN)


def inner_automorphism(g: SimplicialGraph, w: Sequence[int]) -> SymmetricAutomorphism:
    """Conjugation by ``w`` written as a product of partial conjugations."""
    factors = []
    for x in w:
        comp = g.all_mask & ~g.star_mask(vertex_of(x))
        if comp:
            factors.append(PartialConjugation(x, comp))
    return SymmetricAutomorphism(tuple(factors))


# -- presentation -------------------------------------------------------------

def commutator(x: SymmetricAutomorphism, y: SymmetricAutomorphism) -> SymmetricAutomorphism:
    return x * y * x.inverse() * y.inverse()


def relation_instances(g: SimplicialGraph):
    """Every instance of the defining commutation relations of ΣPAut.

    Yields ``(family, automorphism)`` where the automorphism must be the
    identity.  Families: "i" same or adjacent operative vertices, "ii"
    non-adjacent with distinct shared or a subordinate support, "iii" the
    shared/dominant product relation.
    """
    from .graph import ComponentClass

    gens = [(a, C) for a in range(g.n) for C in g.component_masks(a)]

    def pc(a, C):
        return SymmetricAutomorphism.of(PartialConjugation(letter(a), C))

    for a, A in gens:
        for b, B in gens:
            if (a, A) >= (b, B):
                continue
            if a == b or g.adjacent(a, b):
                yield "i", commutator(pc(a, A), pc(b, B))
                continue
            ca = g.classify_component(a, b, A)
            cb = g.classify_component(b, a, B)
            shared_distinct = (ca is ComponentClass.SHARED and cb is ComponentClass.SHARED
                               and A != B)
            if shared_distinct or ComponentClass.SUBORDINATE in (ca, cb):
                yield "ii", commutator(pc(a, A), pc(b, B))
    for a in range(g.n):
        for b in range(g.n):
            if g.in_star(a, b):
                continue
            for A in g.component_masks(a):
                if g.classify_component(a, b, A) is not ComponentClass.SHARED:
                    continue
                B = g.dominant_component_mask(a, b)
                yield "iii", commutator(pc(a, A) * pc(a, B), pc(b, A))
