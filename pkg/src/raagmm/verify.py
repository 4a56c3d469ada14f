"""Randomized and exhaustive checks of the structural identities.

Each suite takes a graph, a ``random.Random`` and a sample count and
returns a :class:`SuiteResult`.  They back ``raagmm verify`` and are
reused by the test-suite, which adds independent oracles on top.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from .complex import (
    boundary_squared_zero, homology, order_complex, stabilizer_rank, whitehead_zero,
)
from .errors import JoinUndefined
from .graph import ComponentClass, SimplicialGraph
from .reductivity import (
    WordSet, all_partial_conjugations, carried_automorphism, find_strictly_reductive,
    red, red_v, red_via_day, transform, w0,
)
from .whitehead import (
    WhiteheadPoset, compatible, compatible_structural, crossings, disjoin,
    enumerate_partitions, is_pairwise_compatible, is_valid_partition, join_vtypes,
    partition_leq, rank, refine, vtype_leq,
)
from .words import (
    IDENTITY, PartialConjugation, SymmetricAutomorphism, letter, pc_power,
    relation_instances, same_automorphism,
)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, detail=None):
        self.checked += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(detail)
        elif not ok:
            self.failures.append(None)

    def to_json(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checked": self.checked,
                "failures": len(self.failures),
                "examples": [f for f in self.failures if f is not None][:5]}


def random_word(g: SimplicialGraph, rng: random.Random, max_len: int) -> list[int]:
    return [rng.choice((1, -1)) * rng.randint(1, g.n) for _ in range(rng.randint(1, max_len))]


def random_word_set(g: SimplicialGraph, rng: random.Random, max_words: int = 8, max_len: int = 10) -> WordSet:
    return WordSet.from_words(g, [random_word(g, rng, max_len) for _ in range(rng.randint(1, max_words))])


def random_graph(rng: random.Random, n: int, p: float = 0.4) -> SimplicialGraph:
    return SimplicialGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_carried(rng: random.Random, A, k: int = 3) -> SymmetricAutomorphism:
    return carried_automorphism(A, [rng.randint(-k, k) for _ in A.petals])


# -- graph and poset --------------------------------------------------------

def suite_components(g: SimplicialGraph, rng=None, samples=0) -> SuiteResult:
    """Every component of Γ − st(a) gets exactly one class relative to b."""
    res = SuiteResult("component_classes")
    for a in range(g.n):
        for b in range(g.n):
            if g.in_star(a, b):
                continue
            for C in g.component_masks(a):
                try:
                    g.classify_component(a, b, C)
                    res.check(True)
                except AssertionError as exc:
                    res.check(False, {"a": a, "b": b, "C": C, "error": str(exc)})
    return res


def suite_poset(g: SimplicialGraph, p: WhiteheadPoset) -> SuiteResult:
    """Nuclear minimum, coordinate-wise order, compatibility, rank along covers."""
    res = SuiteResult("poset_structure")
    n = len(p)
    res.check(bool(p.order[0].all()), "nuclear vertex is not the minimum")
    res.check(int(p.order.all(axis=1).sum()) == 1, "minimum is not unique")
    for V in p.elements:
        res.check(is_pairwise_compatible(g, V.partitions), "element not pairwise compatible")
    step = max(1, n * n // 20000)
    for idx in range(0, n * n, step):
        i, j = divmod(idx, n)
        res.check(bool(p.order[i, j]) == vtype_leq(p.elements[i], p.elements[j]), (i, j))
    for i, j in p.covers:
        res.check(p.ranks[j] > p.ranks[i], ("rank does not increase along cover", i, j))
    return res


def suite_compatibility(g: SimplicialGraph) -> SuiteResult:
    """Crossing-count compatibility agrees with the dominant-petal characterization."""
    res = SuiteResult("compatibility_structural")
    cands = [enumerate_partitions(g, a) for a in range(g.n)]
    for a, b in combinations(range(g.n), 2):
        for A in cands[a]:
            for B in cands[b]:
                res.check(compatible(g, A, B) == compatible_structural(g, A, B),
                          (a, b, A.petals, B.petals))
    return res


def check_refine_disjoin(g: SimplicialGraph, A, S, res: SuiteResult):
    R = refine(g, A, S)
    D = disjoin(g, A, S)
    tag = (A.operative, A.petals, S.operative, S.petals)
    res.check(is_valid_partition(g, R), ("refinement not valid", tag))
    res.check(is_valid_partition(g, D), ("disjunction not valid", tag))
    if A.operative != S.operative:
        res.check(crossings(g, R, S) == crossings(g, A, S), ("refinement changed crossings", tag))
        res.check(crossings(g, D, S) == 0, ("disjunction still crosses", tag))
    res.check(partition_leq(A, R), ("A ≤ A′ fails", tag))
    res.check(partition_leq(D, R), ("A″ ≤ A′ fails", tag))


def suite_refine_disjoin(g: SimplicialGraph, rng: random.Random, samples: int) -> SuiteResult:
    res = SuiteResult("refine_disjoin")
    cands = [enumerate_partitions(g, a) for a in range(g.n)]
    pairs = [(a, c) for a in range(g.n) for c in range(g.n) if a != c and not g.in_star(a, c)]
    for _ in range(samples if pairs else 0):
        a, c = rng.choice(pairs)
        check_refine_disjoin(g, rng.choice(cands[a]), rng.choice(cands[c]), res)
    return res


def suite_joins(g: SimplicialGraph, p: WhiteheadPoset, rng: random.Random, samples: int | None) -> SuiteResult:
    """Join is the least upper bound; incompatible pairs have no upper bound."""
    res = SuiteResult("join_lub")
    n = len(p)
    pairs = list(combinations(range(n), 2)) if samples is None else \
        [tuple(rng.sample(range(n), 2)) for _ in range(samples if n > 1 else 0)]
    for i, j in pairs:
        ub = p.upper_bounds([i, j])
        try:
            J = join_vtypes(g, [p.elements[i], p.elements[j]])
        except JoinUndefined:
            res.check(len(ub) == 0, ("incompatible pair has an upper bound", i, j))
            continue
        k = p.find(J)
        res.check(k is not None, ("join missing from poset", i, j))
        if k is None:
            continue
        res.check(bool(p.order[i, k] and p.order[j, k]), ("join not an upper bound", i, j))
        res.check(all(p.order[k, u] for u in ub), ("join not least", i, j))
    return res


# -- homology and ranks -----------------------------------------------------

def suite_homology(g: SimplicialGraph, p: WhiteheadPoset, max_simplices: int = 2 * 10 ** 6) -> SuiteResult:
    res = SuiteResult("homology")
    for label, poset in (("Wh", p), ("Wh0", whitehead_zero(p))):
        c = order_complex(poset, max_simplices)
        res.check(boundary_squared_zero(c), (label, "boundary of boundary is non-zero"))
        h = homology(c, reduced=True)
        res.check(h.euler_from_cells() == h.euler_from_betti(), (label, "Euler characteristic mismatch"))
        if label == "Wh":
            res.check(h.vanishes(), (label, "reduced homology of the cone is non-zero", h.to_json()))
    return res


def suite_stabilizer(g: SimplicialGraph, p: WhiteheadPoset) -> SuiteResult:
    res = SuiteResult("stabilizer_rank")
    for i, V in enumerate(p.elements):
        res.check(stabilizer_rank(g, V) == rank(V), i)
    return res


def suite_relations(g: SimplicialGraph) -> SuiteResult:
    res = SuiteResult("presentation_relations")
    for fam, alpha in relation_instances(g):
        res.check(same_automorphism(g, alpha, IDENTITY), (fam, alpha.describe(g)))
    return res


# -- reductivity ------------------------------------------------------------

def suite_day(g: SimplicialGraph, rng: random.Random, samples: int) -> SuiteResult:
    """Both counter formulas equal the direct length difference."""
    res = SuiteResult("day_formulas")
    pcs = list(all_partial_conjugations(g))
    if not pcs:
        return res
    while res.checked < samples:
        W = random_word_set(g, rng)
        for f in pcs:
            d = red_v(g, SymmetricAutomorphism.of(f), W)
            f1, f2 = red_via_day(g, f, W)
            res.check(d == f1 == f2, (f.describe(g), W.words, d, f1, f2))
    return res


def _random_auto(g, rng, pcs, length):
    return SymmetricAutomorphism(tuple(rng.choice(pcs) for _ in range(length)))


def suite_cocycle(g: SimplicialGraph, rng: random.Random, samples: int) -> SuiteResult:
    """red_W(X, αβ) = red_W(X, β) + red_W(β(X), α) and the conjugated split form."""
    res = SuiteResult("cocycle")
    pcs = list(all_partial_conjugations(g))
    for _ in range(samples if pcs else 0):
        a, b, x = (_random_auto(g, rng, pcs, rng.randint(0, 3)) for _ in range(3))
        W = random_word_set(g, rng, 4, 8)
        lhs = red(g, x, a * b, W)
        res.check(lhs == red(g, x, b, W) + red(g, b * x, a, W), "cocycle")
        binv = b.inverse()
        split = red_v(g, b, W) + red_v(g, binv * a * b, transform(g, binv, W))
        res.check(red_v(g, a * b, W) == split, "conjugated split")
    return res


def suite_factorization(g: SimplicialGraph, p: WhiteheadPoset, rng: random.Random, samples: int) -> SuiteResult:
    """red of a product of automorphisms carried by partitions of one vertex
    type at distinct operative vertices is the sum of the factor values."""
    res = SuiteResult("factorization_distinct_operatives")
    pool = [V for V in p.elements if sum(not A.is_trivial() for A in V.partitions) >= 1]
    for _ in range(samples if pool else 0):
        V = rng.choice(pool)
        facs = [random_carried(rng, A) for A in V.partitions if not A.is_trivial()]
        rng.shuffle(facs)
        W = random_word_set(g, rng, 4, 8)
        prod = SymmetricAutomorphism(tuple(f for a in facs for f in a.factors))
        res.check(red_v(g, prod, W) == sum(red_v(g, a, W) for a in facs), (V.key(), W.words))
    return res


def suite_powers(g: SimplicialGraph, rng: random.Random, samples: int) -> SuiteResult:
    """Sign of red(α^k) propagates to red(α) for partial conjugations."""
    res = SuiteResult("power_signs")
    pcs = list(all_partial_conjugations(g))
    for _ in range(samples if pcs else 0):
        f = rng.choice(pcs)
        W = random_word_set(g, rng, 4, 8)
        r1 = red_v(g, SymmetricAutomorphism.of(f), W)
        for k in range(2, 6):
            rk = red_v(g, pc_power(f, k), W)
            if rk > 0:
                res.check(r1 > 0, (f.describe(g), k, W.words))
            if rk >= 0:
                res.check(r1 >= 0, (f.describe(g), k, W.words))
    return res


def suite_shared(g: SimplicialGraph, rng: random.Random, samples: int) -> SuiteResult:
    """For a shared union D of components of two non-adjacent vertices,
    C^a_D and C^b_D cannot both be reductive."""
    res = SuiteResult("shared_support_opposition")
    cases = []
    for a in range(g.n):
        for b in range(g.n):
            if a == b or g.in_star(a, b):
                continue
            shared = [C for C in g.component_masks(a)
                      if g.classify_component(a, b, C) is ComponentClass.SHARED]
            for C in shared:
                cases.append((a, b, C))
    for _ in range(samples if cases else 0):
        a, b, D = rng.choice(cases)
        W = random_word_set(g, rng, 4, 8)
        k, t = rng.randint(1, 3), rng.randint(1, 3)
        sa, sb = rng.choice((1, -1)), rng.choice((1, -1))
        ra = red_v(g, pc_power(PartialConjugation(letter(a, sa), D), k), W)
        rb = red_v(g, pc_power(PartialConjugation(letter(b, sb), D), t), W)
        if ra > 0:
            res.check(rb < 0, ("strict", a, b, D, W.words))
        if ra >= 0:
            res.check(rb <= 0, ("weak", a, b, D, W.words))
    return res


def stability_cases(g: SimplicialGraph):
    """Pairs (C^a_A, C^b_B) with distinct operative vertices meeting the
    stability hypotheses: adjacent vertices, or A ∩ B = A ∩ st(b) = B ∩ st(a) = ∅."""
    pcs = list(all_partial_conjugations(g))
    out = []
    for al in pcs:
        for be in pcs:
            a, b = al.vertex, be.vertex
            if a == b:
                continue
            if g.adjacent(a, b):
                out.append((al, be))
            elif not (al.support & be.support or al.support & g.star_mask(b)
                      or be.support & g.star_mask(a)):
                out.append((al, be))
    return out


def suite_stability(g: SimplicialGraph, rng: random.Random, samples: int) -> SuiteResult:
    res = SuiteResult("stability_distinct_operatives")
    cases = stability_cases(g)
    for _ in range(samples if cases else 0):
        al, be = rng.choice(cases)
        W = random_word_set(g, rng, 4, 8)
        k, t = rng.randint(1, 3), rng.randint(1, 3)
        bk = pc_power(be, k)
        res.check(red_v(g, bk, W) == red_v(g, bk, transform(g, pc_power(al, t), W)),
                  (al.describe(g), be.describe(g), k, t, W.words))
    return res


def suite_height_floor(g: SimplicialGraph, rng: random.Random, samples: int) -> SuiteResult:
    """W₀ has height n(n−1) at the standard basis and an exhaustive search
    finds nothing strictly reductive there; α(W₀) always has a hit."""
    from .reductivity import height
    res = SuiteResult("height_floor_and_existence")
    W = w0(g)
    res.check(height(g, None, W) == g.n * (g.n - 1), "height of W0")
    res.check(find_strictly_reductive(g, W) is None, "W0 admits a strictly reductive move")
    pcs = list(all_partial_conjugations(g))
    for _ in range(samples if pcs else 0):
        alpha = _random_auto(g, rng, pcs, rng.randint(1, 3))
        Wa = transform(g, alpha, W)
        if Wa.total_length() == W.total_length():
            continue
        hit = find_strictly_reductive(g, Wa)
        res.check(hit is not None and red_v(g, SymmetricAutomorphism.of(hit[0]), Wa) > 0,
                  alpha.describe(g))
    return res


def run_all(g: SimplicialGraph, p: WhiteheadPoset, seed: int = 0, samples: int = 200,
            max_simplices: int = 2 * 10 ** 6) -> list[SuiteResult]:
    rng = random.Random(seed)
    return [
        suite_components(g),
        suite_poset(g, p),
        suite_compatibility(g),
        suite_refine_disjoin(g, rng, samples),
        suite_joins(g, p, rng, samples),
        suite_homology(g, p, max_simplices),
        suite_stabilizer(g, p),
        suite_relations(g),
        suite_day(g, rng, samples),
        suite_cocycle(g, rng, samples),
        suite_factorization(g, p, rng, samples),
        suite_powers(g, rng, samples),
        suite_shared(g, rng, samples),
        suite_stability(g, rng, samples),
        suite_height_floor(g, rng, min(samples, 50)),
    ]
