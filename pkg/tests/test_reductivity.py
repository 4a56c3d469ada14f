import random

import numpy as np
import pytest

from oracles import free_red_pc
from raagmm.errors import PreconditionError
from raagmm.graph import SimplicialGraph, bits
from raagmm.reductivity import (
    WordSet, adjacency_counter, all_partial_conjugations,
    exponent_classes, find_strictly_reductive, height, is_reductive, is_strictly_reductive,
    partition_reductivity, partition_reductivity_bruteforce, red, red_power_via_day, red_v,
    red_via_day, transform, vertex_reductivity, w0,
)
from raagmm.verify import random_graph, random_word_set
from raagmm.whitehead import (
    enumerate_partitions, enumerate_whitehead_poset, make_vtype, nuclear, parse_partition,
)
from raagmm.words import (
    IDENTITY, PartialConjugation, SymmetricAutomorphism, is_inner, letter,
    make_partial_conjugation, pc_power,
)


def pc(g, a, support, sign=1):
    return make_partial_conjugation(g, a, support, sign)


# -- heights ------------------------------------------------------------------

def test_height_examples(free4, issue_words):
    assert height(free4, None, issue_words) == 6
    assert height(free4, None, w0(free4)) == 12
    assert height(free4, None, WordSet(())) == 0


def test_height_of_moved_basis_exceeds_floor():
    rng = random.Random(2)
    for n in (3, 4):
        g = SimplicialGraph.edgeless(n)
        pcs = list(all_partial_conjugations(g))
        W = w0(g)
        hits = 0
        while hits < 30:
            alpha = SymmetricAutomorphism(tuple(rng.choice(pcs) for _ in range(rng.randint(1, 3))))
            if not is_inner(g, alpha).no:
                continue
            hits += 1
            assert height(g, alpha, W) > n * (n - 1)


def test_height_conjugation_invariance(free4):
    rng = random.Random(8)
    for _ in range(50):
        w = [rng.choice((1, -1)) * rng.randint(1, 4) for _ in range(rng.randint(1, 8))]
        h = [rng.choice((1, -1)) * rng.randint(1, 4) for _ in range(rng.randint(0, 4))]
        conj = h + w + [-x for x in reversed(h)]
        assert height(free4, None, [w]) == height(free4, None, [conj])


# -- reductivity of automorphisms ----------------------------------------------

def test_red_examples(free4, issue_words):
    alpha = pc_power(pc(free4, "x", ["b"]), 2)
    sigma = SymmetricAutomorphism.of(pc(free4, "y", ["b"]))
    assert red_v(free4, alpha, issue_words) == 4
    assert red_v(free4, sigma, issue_words) == -2
    assert red_v(free4, IDENTITY, issue_words) == 0


def test_red_matches_free_group_oracle():
    rng = random.Random(21)
    for n in (3, 4, 5):
        g = SimplicialGraph.edgeless(n)
        pcs = list(all_partial_conjugations(g))
        for _ in range(150):
            W = random_word_set(g, rng, 5, 9)
            f = rng.choice(pcs)
            k = rng.randint(-3, 3)
            want = free_red_pc(f.conjugator, set(bits(f.support)), W.words, abs(k)) if k >= 0 else \
                free_red_pc(-f.conjugator, set(bits(f.support)), W.words, -k)
            assert red_v(g, pc_power(f, k), W) == want


def test_red_inner_invariance():
    rng = random.Random(5)
    for _ in range(100):
        g = random_graph(rng, rng.randint(3, 5))
        pcs = list(all_partial_conjugations(g))
        if not pcs:
            continue
        W = random_word_set(g, rng, 4, 8)
        alpha = SymmetricAutomorphism(tuple(rng.choice(pcs) for _ in range(rng.randint(1, 3))))
        v = rng.randrange(g.n)
        comp = g.all_mask & ~g.star_mask(v)
        if not comp:
            continue
        inner = SymmetricAutomorphism.of(PartialConjugation(letter(v), comp))
        assert red_v(g, alpha * inner, W) == red_v(g, alpha, W)
        assert red_v(g, inner, W) == 0


def test_cocycle_and_split():
    """red(αβ) = red(β) + red_{β⁻¹W}(β⁻¹αβ); the variant conjugating the
    other way round is wrong, and this exhibits a counterexample."""
    g = SimplicialGraph.edgeless(4)
    rng = random.Random(13)
    pcs = list(all_partial_conjugations(g))
    bad_variant = 0
    for _ in range(200):
        a = SymmetricAutomorphism(tuple(rng.choice(pcs) for _ in range(rng.randint(1, 2))))
        b = SymmetricAutomorphism(tuple(rng.choice(pcs) for _ in range(rng.randint(1, 2))))
        W = random_word_set(g, rng, 4, 8)
        binv = b.inverse()
        WB = transform(g, binv, W)
        assert red_v(g, a * b, W) == red_v(g, b, W) + red_v(g, binv * a * b, WB)
        bad_variant += red_v(g, a * b, W) != red_v(g, b, W) + red_v(g, b * a * binv, WB)
    assert bad_variant > 0


def test_red_with_marking(free4, issue_words):
    beta = SymmetricAutomorphism.of(pc(free4, "c", ["y"]))
    alpha = SymmetricAutomorphism.of(pc(free4, "x", ["b"]))
    # red_W(X, α) = h(X) − h(αX)
    assert red(free4, beta, alpha, issue_words) == \
        height(free4, beta, issue_words) - height(free4, alpha * beta, issue_words)


# -- counters and the counter formulas----------------------------------------------

def test_adjacency_counter_example(free4, issue_words):
    x, b = letter(0), letter(2)
    assert adjacency_counter(free4, issue_words, x, x, b) == 1
    assert adjacency_counter(free4, WordSet(()), x, x, b) == 0


def test_adjacency_counter_precondition():
    g = SimplicialGraph.path(3)
    with pytest.raises(PreconditionError):
        adjacency_counter(g, [(1, 3)], letter(1), letter(0), letter(2))


def test_day_examples(free4, issue_words):
    beta = pc(free4, "x", ["b"])
    assert red_via_day(free4, beta, issue_words) == (2, 2)
    unused = pc(free4, "y", ["c"])
    assert red_via_day(free4, unused, [(letter(0), letter(2))]) == (0, 0)
    assert red_power_via_day(free4, beta, 2, issue_words) == 4


def test_day_random_graphs():
    rng = random.Random(17)
    for _ in range(60):
        g = random_graph(rng, rng.randint(2, 6))
        W = random_word_set(g, rng)
        for f in all_partial_conjugations(g):
            d = red_v(g, SymmetricAutomorphism.of(f), W)
            assert red_via_day(g, f, W) == (d, d)
            k = rng.randint(-3, 3)
            assert red_power_via_day(g, f, k, W) == red_v(g, pc_power(f, k), W)


# -- partitions and vertex types -----------------------------------------------

def test_exponent_classes_cover_the_box():
    for petals, bound in [(2, 1), (2, 3), (3, 2), (4, 1)]:
        reps = exponent_classes(petals, bound)
        # each non-constant vector of the box, shifted to last coordinate 0, is a representative
        box = np.array(np.meshgrid(*([np.arange(-bound, bound + 1)] * petals), indexing="ij")).reshape(petals, -1).T
        box = box[box.max(axis=1) != box.min(axis=1)]
        want = {tuple(r - r[-1]) for r in box}
        assert {tuple(r) for r in reps} == want and len(reps) == len(want)


def test_partition_reductivity_examples(free4, issue_words):
    g = free4
    A = parse_partition(g, "x: {b}|{y,c}")
    r = partition_reductivity(g, A, issue_words)
    assert r.value == 4 and r.interior
    assert red_v(g, r.witness, issue_words) == 4
    assert partition_reductivity(g, parse_partition(g, "x: {y,b,c}"), issue_words).value == 0
    # a word set avoiding a and its petals cannot be changed by carried automorphisms
    h = SimplicialGraph.edgeless(5)
    A = parse_partition(h, "0: {1}|{2}|{3,4}")
    W = [(letter(3), letter(4, -1))]
    assert partition_reductivity(h, A, W).value == 0


def test_partition_reductivity_matches_bruteforce():
    rng = random.Random(31)
    checked = 0
    while checked < 60:
        g = random_graph(rng, rng.randint(3, 5), 0.3)
        a = rng.randrange(g.n)
        cands = [A for A in enumerate_partitions(g, a) if not A.is_trivial() and A.length <= 3]
        if not cands:
            continue
        A = rng.choice(cands)
        W = random_word_set(g, rng, 3, 6)
        B = rng.randint(1, 3)
        assert partition_reductivity(g, A, W, B).value == partition_reductivity_bruteforce(g, A, W, B)
        checked += 1


def test_vertex_reductivity(free4, issue_words):
    g = free4
    assert vertex_reductivity(g, nuclear(g), issue_words).value == 0
    assert vertex_reductivity(g, nuclear(g), WordSet(())).value == 0
    V = make_vtype(g, {"x": parse_partition(g, "x: {b}|{y,c}")})
    r = vertex_reductivity(g, V, issue_words)
    assert r.value == 4 and is_strictly_reductive(g, V, issue_words)
    U = make_vtype(g, {"y": parse_partition(g, "y: {b}|{x,c}")})
    ru = vertex_reductivity(g, U, issue_words)
    assert ru.value < 0 and not is_reductive(g, U, issue_words)
    assert red_v(g, ru.witness, issue_words) == ru.value


def test_vertex_reductivity_sums_distinct_factors():
    rng = random.Random(41)
    g = SimplicialGraph.edgeless(4)
    p = enumerate_whitehead_poset(g)
    for V in rng.sample(p.elements, 15):
        W = random_word_set(g, rng, 3, 5)
        r = vertex_reductivity(g, V, W, 2)
        assert red_v(g, r.witness, W) == r.value
        per = [partition_reductivity(g, A, W, 2).value for A in V.partitions if not A.is_trivial()]
        if per:
            assert r.value == (sum(x for x in per if x >= 0) if max(per) >= 0 else max(per))


def test_same_operative_products_do_not_split():
    """Two partial conjugations at one operative vertex with disjoint supports:
    the product can be inner while each factor lowers the height."""
    g = SimplicialGraph.edgeless(3, labels="abc")
    f1 = pc(g, "a", ["b"], -1)
    f2 = pc(g, "a", ["c"], -1)
    W = [(letter(2), letter(1))]  # c b
    prod = SymmetricAutomorphism.of(f1, f2)
    assert is_inner(g, prod).yes
    assert red_v(g, prod, W) == 0
    assert red_v(g, SymmetricAutomorphism.of(f1), W) == -2
    assert red_v(g, SymmetricAutomorphism.of(f2), W) == -2


# -- search -----------------------------------------------------------------

def test_find_strictly_reductive(free4):
    g = free4
    assert find_strictly_reductive(g, w0(g)) is None
    assert find_strictly_reductive(g, WordSet(())) is None
    alpha = pc_power(pc(g, "x", ["b"]), 2)
    W = transform(g, alpha, w0(g))
    f, r = find_strictly_reductive(g, W)
    assert r > 0 and red_v(g, SymmetricAutomorphism.of(f), W) == r


def test_w0_floor_on_random_graphs():
    rng = random.Random(3)
    for _ in range(20):
        g = random_graph(rng, rng.randint(2, 5))
        assert height(g, None, w0(g)) == g.n * (g.n - 1)
        assert find_strictly_reductive(g, w0(g)) is None
