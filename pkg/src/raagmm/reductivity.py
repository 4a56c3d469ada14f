"""Heights of bases and reductivity of symmetric automorphisms.

``red_W(X, α) = Σ |g|_X − Σ |g|_{α(X)}`` over a multiset W of cyclic
words.  With X = β(V) this is Σ|β⁻¹(w)| − Σ|(αβ)⁻¹(w)|, evaluated by the
substitution kernel in :mod:`raagmm._kernels`.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import PreconditionError
from .graph import SimplicialGraph, bits
from .whitehead import BasedPartition, VertexType
from .words import (
    IDENTITY, Basis, PartialConjugation, SymmetricAutomorphism, Word, _images, apply,
    cyclic_reduce, letter, parse_word, pc_power, vertex_of,
)


@dataclass(frozen=True)
class WordSet:
    """Multiset of cyclically reduced words, stored as canonical cores."""

    words: tuple[Word, ...]

    @classmethod
    def from_words(cls, g: SimplicialGraph, words: Iterable[Sequence[int]]) -> "WordSet":
        return cls(tuple(cyclic_reduce(g, w)[0] for w in words))

    @classmethod
    def parse(cls, g: SimplicialGraph, text: str) -> "WordSet":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        return cls.from_words(g, [parse_word(g, ln) for ln in lines if ln])

    def __len__(self):
        return len(self.words)

    def total_length(self) -> int:
        return sum(len(w) for w in self.words)

    def max_length(self) -> int:
        return max((len(w) for w in self.words), default=0)


def word_set(g: SimplicialGraph, words) -> WordSet:
    return words if isinstance(words, WordSet) else WordSet.from_words(g, words)


def transform(g: SimplicialGraph, alpha: SymmetricAutomorphism, W: WordSet) -> WordSet:
    """α(W): apply α to every word and cyclically reduce."""
    return WordSet.from_words(g, (apply(g, alpha, w) for w in W.words))


@lru_cache(maxsize=4096)
def _flat(W: WordSet):
    offsets = [0]
    flat: list[int] = []
    for w in W.words:
        flat.extend(w)
        offsets.append(len(flat))
    return flat, offsets


def _img_flat(imgs):
    offsets = [0]
    flat: list[int] = []
    for w in imgs:
        flat.extend(w)
        offsets.append(len(flat))
    return flat, offsets


def _marking(X) -> SymmetricAutomorphism:
    if X is None:
        return IDENTITY
    if isinstance(X, Basis):
        return X.marking
    return X


def height(g: SimplicialGraph, X, W) -> int:
    """Σ_{w∈W} |w|_X where X = β(V) is given by its marking β (or None for V)."""
    W = word_set(g, W)
    beta = _marking(X)
    if not W.words:
        return 0
    flat, offsets = _flat(W)
    if not beta.factors:
        return W.total_length()
    imgs = _images(g, beta.inverse().factors)
    img_flat, img_offsets = _img_flat(imgs)
    return K.height_total(flat, offsets, img_flat, img_offsets, g)


def red(g: SimplicialGraph, X, alpha: SymmetricAutomorphism, W) -> int:
    """red_W(X, α) = height(X) − height(α(X))."""
    W = word_set(g, W)
    beta = _marking(X)
    return height(g, beta, W) - height(g, alpha * beta, W)


def red_v(g: SimplicialGraph, alpha: SymmetricAutomorphism, W) -> int:
    """red_W(α) at the standard basis."""
    return red(g, None, alpha, W)


# -- adjacency counters -------------------------------------------------

def _project(g: SimplicialGraph, w: Sequence[int], b: int) -> list[int]:
    lk = g.link_mask(vertex_of(b))
    return [x for x in w if not lk >> vertex_of(x) & 1]


def adjacency_counter(g: SimplicialGraph, W, b: int, c: int, d: int) -> int:
    """⟨c, d⟩_{W,b}: cyclic subsegments (c u d⁻¹)^{±1} with u in lk(b)."""
    W = word_set(g, W)
    lk = g.link_mask(vertex_of(b))
    if lk >> vertex_of(c) & 1 or lk >> vertex_of(d) & 1:
        raise PreconditionError("adjacency counter letters must avoid lk(b)")
    total = 0
    for w in W.words:
        p = _project(g, w, b)
        k = len(p)
        for i in range(k):
            x, y = p[i], p[(i + 1) % k]
            if (x == c and y == -d) or (x == d and y == -c):
                total += 1
    return total


def set_counter(g: SimplicialGraph, W, b: int, B: Iterable[int], C: Iterable[int]) -> int:
    """⟨B, C⟩_{W,b} summed over eligible letter pairs; letters of lk(b) are skipped."""
    W = word_set(g, W)
    lk = g.link_mask(vertex_of(b))
    Bs = {x for x in B if not lk >> vertex_of(x) & 1}
    Cs = {x for x in C if not lk >> vertex_of(x) & 1}
    total = 0
    for w in W.words:
        p = _project(g, w, b)
        k = len(p)
        for i in range(k):
            x, y = p[i], p[(i + 1) % k]
            fwd = x in Bs and -y in Cs
            bwd = -y in Bs and x in Cs
            total += fwd + bwd - (fwd and bwd and x == -y)
    return total


def _letters(g: SimplicialGraph, mask: int) -> set[int]:
    return {s * (v + 1) for v in bits(mask) for s in (1, -1)}


def red_via_day(g: SimplicialGraph, beta: PartialConjugation, W) -> tuple[int, int]:
    """Both adjacency-counter expressions for red_W(C^b_B)."""
    W = word_set(g, W)
    b = beta.conjugator
    Bpm = _letters(g, beta.support)
    L = _letters(g, g.all_mask)
    rest = L - Bpm - {b}
    form1 = set_counter(g, W, b, {b}, Bpm) - set_counter(g, W, b, Bpm, rest)
    form2 = set_counter(g, W, b, {b}, L) - set_counter(g, W, b, Bpm | {b}, rest)
    return form1, form2


def red_power_via_day(g: SimplicialGraph, beta: PartialConjugation, k: int, W) -> int:
    """red_W(β^k) = Σ_{j<k} red_{β^{-j}W}(β), each term by the counter formula."""
    if k < 0:
        return red_power_via_day(g, beta.inverse(), -k, W)
    W = word_set(g, W)
    total = 0
    step = pc_power(beta, -1)
    for _ in range(k):
        total += red_via_day(g, beta, W)[0]
        W = transform(g, step, W)
    return total


# -- partition and vertex-type reductivity ---------------------------------

@dataclass(frozen=True)
class Reductivity:
    value: int
    interior: bool = True  # maximum attained strictly inside the exponent box
    witness: SymmetricAutomorphism | None = None

    @property
    def bound_limited(self) -> bool:
        return not self.interior


def default_bound(W: WordSet) -> int:
    return max(1, W.max_length())


def carried_automorphism(A: BasedPartition, exponents: Sequence[int]) -> SymmetricAutomorphism:
    factors: list[PartialConjugation] = []
    for P, k in zip(A.petals, exponents):
        factors.extend(pc_power(PartialConjugation(letter(A.operative), P), k).factors)
    return SymmetricAutomorphism(tuple(factors))


def exponent_classes(petals: int, bound: int) -> np.ndarray:
    """One representative per class of [−bound, bound]^petals modulo the
    all-ones vector, constant class excluded.

    Representatives have last coordinate 0; a vector d is in range iff the
    spread of d ∪ {0} is at most 2·bound.  Rows are ordered by spread, then
    L1 norm, then lexicographically, which fixes tie-breaking.
    """
    if petals < 2:
        return np.zeros((0, petals), dtype=np.int64)
    span = np.arange(-2 * bound, 2 * bound + 1, dtype=np.int64)
    grids = np.meshgrid(*([span] * (petals - 1)), indexing="ij")
    d = np.stack([gr.ravel() for gr in grids], axis=1)
    full = np.concatenate([d, np.zeros((len(d), 1), dtype=np.int64)], axis=1)
    spread = full.max(axis=1) - full.min(axis=1)
    keep = (spread <= 2 * bound) & (spread > 0)
    full, spread = full[keep], spread[keep]
    l1 = np.abs(full).sum(axis=1)
    keys = [full[:, j] for j in range(petals - 1, -1, -1)] + [l1, spread]
    return full[np.lexsort(keys)]


def centered(row: np.ndarray) -> list[int]:
    """Shift a class representative so it sits in the symmetric box."""
    mx, mn = int(row.max()), int(row.min())
    t = -((mx + mn) // 2)
    return [int(x) + t for x in row]


def carried_heights(g: SimplicialGraph, A: BasedPartition, W: WordSet, exps) -> np.ndarray:
    """Σ_w |α⁻¹(w)| for every row of exponents, α = Π_P (C^a_P)^{k_P}."""
    flat, offsets = _flat(W)
    petal_of = [-1] * g.n
    for i, P in enumerate(A.petals):
        for v in bits(P):
            petal_of[v] = i
    exps = np.asarray(exps, dtype=np.int64).reshape(-1, len(A.petals))
    if not flat:
        return np.zeros(len(exps), dtype=np.int64)
    return K.carried_heights(flat, offsets, petal_of, A.operative + 1, exps, g)


def partition_reductivity(g: SimplicialGraph, A: BasedPartition, W, exponent_bound: int | None = None) -> Reductivity:
    """Max of red over carried non-inner automorphisms with exponents in the box.

    red is invariant under composing with inner automorphisms, so the search
    runs over exponent vectors modulo the all-ones direction.  Petal powers
    at one operative factor do not split additively, so the search is joint.
    """
    W = word_set(g, W)
    if A.is_trivial():
        return Reductivity(0, witness=IDENTITY)
    B = default_bound(W) if exponent_bound is None else exponent_bound
    exps = exponent_classes(len(A.petals), B)
    h = carried_heights(g, A, W, exps)
    i = int(np.argmin(h))  # first minimum in the fixed row order
    row = exps[i]
    spread = int(row.max() - row.min())
    return Reductivity(W.total_length() - int(h[i]), spread <= 2 * B - 2,
                       carried_automorphism(A, centered(row)))


def partition_reductivity_bruteforce(g: SimplicialGraph, A: BasedPartition, W, bound: int) -> int:
    """Direct scan of the whole box through red(); test oracle only."""
    W = word_set(g, W)
    if A.is_trivial():
        return 0
    best = None
    for ks in product(range(-bound, bound + 1), repeat=len(A.petals)):
        if len(set(ks)) == 1:
            continue
        r = red_v(g, carried_automorphism(A, ks), W)
        best = r if best is None else max(best, r)
    return best


def vertex_reductivity(g: SimplicialGraph, V: VertexType, W, bound: int | None = None) -> Reductivity:
    """Max over carried non-inner products.

    Factors at distinct operative vertices of one vertex type add up, and a
    product is inner only when every factor is, so the answer is the sum of
    the non-negative per-factor maxima, or the largest one if all are negative.
    """
    W = word_set(g, W)
    per = [partition_reductivity(g, A, W, bound) for A in V.partitions if not A.is_trivial()]
    if not per:
        return Reductivity(0, witness=IDENTITY)
    pos = [r for r in per if r.value >= 0]
    if pos:
        chosen = pos
        value = sum(r.value for r in pos)
    else:
        chosen = [max(per, key=lambda r: r.value)]
        value = chosen[0].value
    witness = SymmetricAutomorphism(tuple(f for r in chosen for f in r.witness.factors))
    return Reductivity(value, all(r.interior for r in chosen), witness)


def is_reductive(g, V, W, bound=None) -> bool:
    r = (partition_reductivity if isinstance(V, BasedPartition) else vertex_reductivity)(g, V, W, bound)
    return r.value >= 0


def is_strictly_reductive(g, V, W, bound=None) -> bool:
    r = (partition_reductivity if isinstance(V, BasedPartition) else vertex_reductivity)(g, V, W, bound)
    return r.value > 0


# -- exhaustive search ----------------------------------------------------

def all_partial_conjugations(g: SimplicialGraph):
    """Every C^a_A, a ∈ V^±, A a non-empty union of components, in a fixed order:
    vertex id, then sign (+ first), then subsets of the component list by index."""
    for v in range(g.n):
        comps = g.component_masks(v)
        for sign in (1, -1):
            for sel in range(1, 1 << len(comps)):
                A = 0
                for i in bits(sel):
                    A |= comps[i]
                yield PartialConjugation(letter(v, sign), A)


def find_strictly_reductive(g: SimplicialGraph, W) -> tuple[PartialConjugation, int] | None:
    W = word_set(g, W)
    for f in all_partial_conjugations(g):
        r = red_v(g, SymmetricAutomorphism.of(f), W)
        if r > 0:
            return f, r
    return None


def reductivity_table(g: SimplicialGraph, W) -> list[tuple[PartialConjugation, int]]:
    W = word_set(g, W)
    return [(f, red_v(g, SymmetricAutomorphism.of(f), W)) for f in all_partial_conjugations(g)]


def w0(g: SimplicialGraph) -> WordSet:
    """{a_i a_j : i < j}."""
    return WordSet.from_words(g, [(letter(i), letter(j)) for i in range(g.n) for j in range(i + 1, g.n)])
