"""Based partitions, vertex types and the Whitehead poset of a graph.

A based partition at ``a`` is stored as its operative vertex and a sorted
tuple of petal bitmasks partitioning V − st(a); the singleton {a} is
implicit.  A vertex type holds one based partition per vertex.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import BudgetExceeded, InputError, JoinUndefined, PreconditionError, ValidityError
from .graph import SimplicialGraph, bits, lowest, to_mask
from .words import (
    PartialConjugation, SymmetricAutomorphism, _images, conjugate, exponent_data, letter, power,
)


@dataclass(frozen=True, order=True)
class BasedPartition:
    operative: int
    petals: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.petals)

    def is_trivial(self) -> bool:
        return len(self.petals) <= 1

    def petal_sets(self) -> list[frozenset[int]]:
        return [frozenset(bits(p)) for p in self.petals]

    def petal_of(self, v: int) -> int | None:
        for p in self.petals:
            if p >> v & 1:
                return p
        return None


def _sorted_petals(petals: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted((p for p in petals if p), key=lowest))


def make_partition(g: SimplicialGraph, a, petals) -> BasedPartition:
    """Validated based partition; ``petals`` are vertex iterables or bitmasks."""
    a = g.vertex(a)
    masks = [p if isinstance(p, int) else to_mask(g.vertex(x) for x in p) for p in petals]
    if any(m == 0 for m in masks):
        raise ValidityError("petals must be non-empty")
    union = 0
    for m in masks:
        if union & m:
            raise ValidityError("petals overlap")
        union |= m
    if union != g.all_mask & ~g.star_mask(a):
        raise ValidityError("petals must partition the complement of st(a)")
    for m in masks:
        if not g.is_union_of_components(a, m):
            raise ValidityError("petal is not a union of components of the star complement")
    return BasedPartition(a, _sorted_petals(masks))


def trivial_partition(g: SimplicialGraph, a: int) -> BasedPartition:
    rest = g.all_mask & ~g.star_mask(a)
    return BasedPartition(a, (rest,) if rest else ())


def is_valid_partition(g: SimplicialGraph, A: BasedPartition) -> bool:
    try:
        return make_partition(g, A.operative, A.petals) == A
    except ValidityError:
        return False


def parse_partition(g: SimplicialGraph, text: str) -> BasedPartition:
    """Parse ``a: {b,c}|{d}``."""
    m = re.fullmatch(r"\s*([^:\s]+)\s*:\s*(.*?)\s*", text)
    if not m:
        raise InputError(f"bad partition literal {text!r}")
    a = g.vertex(m.group(1))
    body = m.group(2)
    petals = []
    if body:
        for chunk in body.split("|"):
            chunk = chunk.strip()
            if not (chunk.startswith("{") and chunk.endswith("}")):
                raise InputError(f"bad petal {chunk!r} in {text!r}")
            names = [x.strip() for x in chunk[1:-1].split(",") if x.strip()]
            petals.append([g.vertex(x) for x in names])
    return make_partition(g, a, petals)


def format_partition(g: SimplicialGraph, A: BasedPartition) -> str:
    petals = "|".join("{" + ",".join(g.labels[v] for v in bits(p)) + "}" for p in A.petals)
    return f"{g.labels[A.operative]}: {petals}"


# -- crossings and compatibility ------------------------------------------

def crossings(g: SimplicialGraph, A: BasedPartition, B: BasedPartition) -> int:
    a, b = A.operative, B.operative
    if a == b:
        raise PreconditionError("crossings needs distinct operative factors")
    if g.in_star(a, b):
        return 0
    count = 0
    for P in A.petals:
        if P >> b & 1:
            continue
        for Q in B.petals:
            if not Q >> a & 1 and P & Q:
                count += 1
    return count


def compatible(g: SimplicialGraph, A: BasedPartition, B: BasedPartition) -> bool:
    a, b = A.operative, B.operative
    if g.in_star(a, b):
        return True
    return crossings(g, A, B) == 0


def compatible_structural(g: SimplicialGraph, A: BasedPartition, B: BasedPartition) -> bool:
    """Compatibility via dominant petals: every non-dominant petal of one
    partition, together with st(a) − lk(b), sits inside the petal of the
    other that contains its operative factor."""
    a, b = A.operative, B.operative
    if g.in_star(a, b):
        return True

    def side(X, Y, x, y):
        need = (g.star_mask(x) & ~g.link_mask(y))
        for P in X.petals:
            if not P >> y & 1:
                need |= P
        dom = Y.petal_of(x)
        return need & ~dom == 0

    return side(A, B, a, b) and side(B, A, b, a)


def partition_leq(A: BasedPartition, B: BasedPartition) -> bool:
    """A ≤ B iff every petal of B lies inside a petal of A."""
    if A.operative != B.operative:
        raise PreconditionError("partition_leq needs a common operative factor")
    return all(any(Q & ~P == 0 for P in A.petals) for Q in B.petals)


def dominant_petal(g: SimplicialGraph, A: BasedPartition, b: int) -> int:
    if g.in_star(b, A.operative):
        raise PreconditionError("dominant petal undefined: vertex lies in the star of the operative factor")
    return A.petal_of(b)


def join_partitions(A: BasedPartition, B: BasedPartition) -> BasedPartition:
    if A.operative != B.operative:
        raise PreconditionError("join_partitions needs a common operative factor")
    return BasedPartition(A.operative, _sorted_petals(P & Q for P in A.petals for Q in B.petals))


def refine(g: SimplicialGraph, A: BasedPartition, S: BasedPartition) -> BasedPartition:
    """Split the petals of A (other than the one holding c) along S."""
    a, c = A.operative, S.operative
    if a == c or compatible(g, A, S):
        return A
    D = A.petal_of(c)
    qs = [Q for Q in S.petals if not Q >> a & 1]
    new = []
    for P in A.petals:
        if P == D:
            new.append(P)
            continue
        covered = 0
        for Q in qs:
            if P & Q:
                new.append(P & Q)
                covered |= P & Q
        new.append(P & ~covered)
    return BasedPartition(a, _sorted_petals(new))


def disjoin(g: SimplicialGraph, A: BasedPartition, S: BasedPartition) -> BasedPartition:
    """Merge into D^c every petal of the refinement that still crosses S.

    Petals are read off the refinement A′ rather than A itself; this is
    what makes A″ ≤ A′ hold and reproduces the worked example
    A″ = {{3},{11},{1},{4,5,6,7,9}}.
    """
    a, c = A.operative, S.operative
    if a == c or g.in_star(a, c):
        return A
    R = refine(g, A, S)
    D = R.petal_of(c)
    qs = [Q for Q in S.petals if not Q >> a & 1]
    merged = D
    keep = []
    for P in R.petals:
        if P == D:
            continue
        if any(P & Q for Q in qs):
            merged |= P
        else:
            keep.append(P)
    return BasedPartition(a, _sorted_petals(keep + [merged]))


# -- vertex types -----------------------------------------------------------

@dataclass(frozen=True, order=True)
class VertexType:
    partitions: tuple[BasedPartition, ...]

    def __getitem__(self, a: int) -> BasedPartition:
        return self.partitions[a]

    def key(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.petals for p in self.partitions)

    def is_nuclear(self) -> bool:
        return all(p.is_trivial() for p in self.partitions)


def nuclear(g: SimplicialGraph) -> VertexType:
    return VertexType(tuple(trivial_partition(g, a) for a in range(g.n)))


def make_vtype(g: SimplicialGraph, partitions: Sequence[BasedPartition] | dict) -> VertexType:
    """Vertex type from one partition per vertex (missing vertices get the
    trivial partition when a dict is passed); checks pairwise compatibility."""
    if isinstance(partitions, dict):
        parts = [trivial_partition(g, a) for a in range(g.n)]
        for k, A in partitions.items():
            parts[g.vertex(k)] = A
    else:
        parts = list(partitions)
    if len(parts) != g.n or any(p.operative != i for i, p in enumerate(parts)):
        raise ValidityError("a vertex type needs exactly one partition per vertex, in order")
    V = VertexType(tuple(parts))
    if not is_pairwise_compatible(g, V.partitions):
        raise ValidityError("partitions of a vertex type must be pairwise compatible")
    return V


def is_pairwise_compatible(g: SimplicialGraph, parts: Sequence[BasedPartition]) -> bool:
    return all(compatible(g, A, B) for i, A in enumerate(parts) for B in parts[i + 1:])


def vtype_leq(V: VertexType, W: VertexType) -> bool:
    return all(partition_leq(A, B) for A, B in zip(V.partitions, W.partitions))


def join_vtypes(g: SimplicialGraph, vtypes: Sequence[VertexType]) -> VertexType:
    if not vtypes:
        return nuclear(g)
    for i, V in enumerate(vtypes):
        for W in vtypes[i + 1:]:
            for A in V.partitions:
                for B in W.partitions:
                    if A.operative != B.operative and not compatible(g, A, B):
                        raise JoinUndefined("vertex types are not pairwise compatible")
    parts = []
    for a in range(g.n):
        J = vtypes[0][a]
        for V in vtypes[1:]:
            J = join_partitions(J, V[a])
        parts.append(J)
    return VertexType(tuple(parts))


def rank(V: VertexType) -> int:
    return sum(max(p.length, 1) - 1 for p in V.partitions)


def s_contained(g: SimplicialGraph, V: VertexType, a: int, b: int, S: BasedPartition) -> bool:
    """V_a is S-contained in V_b, i.e. D^c of V_b ⊆ D^c of V_a."""
    c = S.operative
    Da = dominant_petal(g, V[a], c)
    Db = dominant_petal(g, V[b], c)
    return Db & ~Da == 0


def innermost_set(g: SimplicialGraph, V: VertexType, S: BasedPartition) -> frozenset[int]:
    c = S.operative
    crossing = [a for a in range(g.n) if a != c and crossings(g, V[a], S) > 0]
    dom = {a: V[a].petal_of(c) for a in crossing}
    out = []
    for a in crossing:
        # a is minimal unless some crossing x is properly S-contained in a
        if not any(dom[a] != dom[x] and dom[a] & ~dom[x] == 0 for x in crossing):
            out.append(a)
    return frozenset(out)


def vtype_refine(g: SimplicialGraph, V: VertexType, S: BasedPartition) -> VertexType:
    inner = innermost_set(g, V, S)
    return VertexType(tuple(refine(g, A, S) if A.operative in inner else A for A in V.partitions))


def vtype_disjoin(g: SimplicialGraph, V: VertexType, S: BasedPartition) -> VertexType:
    inner = innermost_set(g, V, S)
    return VertexType(tuple(disjoin(g, A, S) if A.operative in inner else A for A in V.partitions))


def format_vtype(g: SimplicialGraph, V: VertexType, skip_trivial: bool = True) -> str:
    parts = [format_partition(g, A) for A in V.partitions if not (skip_trivial and A.is_trivial())]
    return "; ".join(parts) if parts else "nuclear"


# -- enumeration ------------------------------------------------------------

def set_partitions(items: Sequence):
    """All set partitions of ``items`` (restricted growth strings order)."""
    n = len(items)
    if n == 0:
        yield []
        return
    codes = [0] * n

    def rec(i, top):
        if i == n:
            blocks = [[] for _ in range(top + 1)]
            for item, k in zip(items, codes):
                blocks[k].append(item)
            yield blocks
            return
        for k in range(top + 2):
            codes[i] = k
            yield from rec(i + 1, max(top, k))

    codes[0] = 0
    yield from rec(1, 0)


def enumerate_partitions(g: SimplicialGraph, a: int) -> list[BasedPartition]:
    comps = g.component_masks(a)
    out = []
    for blocks in set_partitions(comps):
        petals = []
        for blk in blocks:
            m = 0
            for c in blk:
                m |= c
            petals.append(m)
        out.append(BasedPartition(a, _sorted_petals(petals)))
    out.sort(key=lambda p: (p.length, p.petals))
    return out


def _petal_array(cands: Sequence[BasedPartition]) -> np.ndarray:
    width = max((c.length for c in cands), default=0) or 1
    arr = np.zeros((len(cands), width), dtype=np.int64)
    for i, c in enumerate(cands):
        arr[i, :c.length] = c.petals
    return arr


class WhiteheadPoset:
    """All vertex types of a graph with their order and cover relations.

    Elements are sorted by (rank, partition key), so the nuclear vertex is
    element 0.  ``order`` is the reflexive order matrix.
    """

    def __init__(self, g: SimplicialGraph, candidates, choice: np.ndarray):
        self.graph = g
        self.candidates = candidates
        elements = [VertexType(tuple(candidates[a][choice[i, a]] for a in range(g.n)))
                    for i in range(choice.shape[0])]
        ranks = [rank(V) for V in elements]
        order = sorted(range(len(elements)), key=lambda i: (ranks[i], elements[i].key()))
        self.choice = choice[order] if len(order) else choice
        self.elements: list[VertexType] = [elements[i] for i in order]
        self.ranks: list[int] = [ranks[i] for i in order]
        self.index = {V.key(): i for i, V in enumerate(self.elements)}
        self.nuclear_index = 0

    def __len__(self):
        return len(self.elements)

    @cached_property
    def order(self) -> np.ndarray:
        g = self.graph
        size = max(len(c) for c in self.candidates) if self.candidates else 1
        tables = np.zeros((g.n, size, size), dtype=np.bool_)
        for a, cands in enumerate(self.candidates):
            for p, A in enumerate(cands):
                for q, B in enumerate(cands):
                    tables[a, p, q] = partition_leq(A, B)
        return K.leq_matrix(np.ascontiguousarray(self.choice, dtype=np.int64), tables)

    @cached_property
    def strict(self) -> np.ndarray:
        s = self.order.copy()
        np.fill_diagonal(s, False)
        return s

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        return K.cover_matrix(self.strict)

    @property
    def covers(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(self.cover_matrix)
        return sorted(zip(i.tolist(), j.tolist()))

    def leq(self, i: int, j: int) -> bool:
        return bool(self.order[i, j])

    def find(self, V: VertexType) -> int | None:
        return self.index.get(V.key())

    def upper_bounds(self, idxs: Sequence[int]) -> np.ndarray:
        mask = np.ones(len(self), dtype=np.bool_)
        for i in idxs:
            mask &= self.order[i]
        return np.nonzero(mask)[0]

    def height(self) -> list[int]:
        """Longest cover-chain length from the nuclear vertex to each element."""
        h = [0] * len(self)
        cm = self.cover_matrix
        for j in range(len(self)):
            below = np.nonzero(cm[:, j])[0]
            if len(below):
                h[j] = 1 + max(h[i] for i in below)
        return h

    def max_chain_elements(self) -> int:
        return 1 + max(self.height(), default=-1)


def enumerate_whitehead_poset(g: SimplicialGraph, max_elements: int = 10 ** 6) -> WhiteheadPoset:
    """Backtracking enumeration of compatible partition choices."""
    cands = [enumerate_partitions(g, a) for a in range(g.n)]
    order = sorted(range(g.n), key=lambda a: (len(g.component_masks(a)), a))
    arrays = [_petal_array(c) for c in cands]
    # compat[(i, j)][p, q] for order positions i < j with non-adjacent vertices
    compat = {}
    for i, a in enumerate(order):
        for j in range(i + 1, g.n):
            b = order[j]
            if g.in_star(a, b):
                continue
            cm = K.crossing_matrix(arrays[a], arrays[b], 1 << a, 1 << b)
            compat[i, j] = cm == 0
    n = g.n
    found: list[list[int]] = []
    pick = [0] * n

    def rec(depth, allowed):
        if depth == n:
            if len(found) >= max_elements:
                raise BudgetExceeded(f"Whitehead poset exceeds {max_elements} elements",
                                     {"elements_found": len(found)})
            found.append(list(pick))
            return
        for p in np.nonzero(allowed[depth])[0].tolist():
            pick[depth] = p
            nxt = allowed
            touched = False
            for j in range(depth + 1, n):
                tab = compat.get((depth, j))
                if tab is None:
                    continue
                if not touched:
                    nxt = list(allowed)
                    touched = True
                nxt[j] = allowed[j] & tab[p]
                if not nxt[j].any():
                    break
            else:
                rec(depth + 1, nxt)

    if n:
        rec(0, [np.ones(len(cands[a]), dtype=np.bool_) for a in order])
    choice = np.zeros((len(found), n), dtype=np.int64)
    for r, sel in enumerate(found):
        for depth, a in enumerate(order):
            choice[r, a] = sel[depth]
    if n == 0:
        choice = np.zeros((1, 0), dtype=np.int64)
    return WhiteheadPoset(g, cands, choice)


# -- carried automorphisms -------------------------------------------------

def carried_generators(V: VertexType) -> list[PartialConjugation]:
    return [PartialConjugation(letter(A.operative), P) for A in V.partitions for P in A.petals]


def _conjugation_exponent(g: SimplicialGraph, img, a: int, v: int) -> int | None:
    """k with img == a^k v a^-k, or None."""
    if g.in_star(a, v):
        return 0 if img == (letter(v),) else None
    if len(img) % 2 == 0:
        return None
    k = (len(img) - 1) // 2
    if k and img[0] == letter(a, -1):
        k = -k
    return k if img == conjugate(g, power(g, (letter(a),), k), (letter(v),)) else None


def is_carried(g: SimplicialGraph, alpha: SymmetricAutomorphism, A: BasedPartition) -> bool:
    a = A.operative
    imgs = _images(g, alpha.factors)
    if imgs[a] != (letter(a),):
        return False
    exps = {}
    for v in range(g.n):
        if v == a:
            continue
        k = _conjugation_exponent(g, imgs[v], a, v)
        if k is None:
            return False
        exps[v] = k
    return all(len({exps[v] for v in bits(P)}) == 1 for P in A.petals)


def full_carrier(g: SimplicialGraph, alpha: SymmetricAutomorphism) -> BasedPartition:
    ops = alpha.operative_vertices()
    if len(ops) != 1:
        raise PreconditionError("full_carrier needs a single operative factor")
    (a,) = ops
    e = exponent_data(g, alpha)[a]
    rest = g.all_mask & ~g.star_mask(a)
    groups: dict[int, int] = {}
    for v in bits(rest):
        groups[e[v]] = groups.get(e[v], 0) | (1 << v)
    if len(groups) <= 1:
        raise PreconditionError("full_carrier of an inner automorphism is undefined")
    return BasedPartition(a, _sorted_petals(groups.values()))
