import random

import pytest

from oracles import free_reduce, has_cancellation
from raagmm.errors import InputError, ValidityError
from raagmm.graph import SimplicialGraph
from raagmm.reductivity import WordSet
from raagmm.words import (
    SymmetricAutomorphism, apply, apply_inverse, cyclic_length, cyclic_reduce, images,
    inner_automorphism, invert, is_conjugate, is_inner, make_partial_conjugation,
    multiply, parse_word, pc_power, reduce,
)


@pytest.fixture
def xy_edge():
    return SimplicialGraph.from_labels("xyb", [("x", "y")])


def P(g, text):
    return parse_word(g, text)


def test_reduce_examples(xy_edge, free4):
    g = xy_edge
    assert reduce(g, P(g, "x y x^-1")) == P(g, "y")
    assert reduce(free4, P(free4, "x x^-1 b")) == P(free4, "b")
    assert reduce(g, P(g, "y x y^-1 x")) == P(g, "x x")


def test_group_operations(xy_edge, free4):
    w = P(free4, "x b c^-1 y")
    assert multiply(free4, w, invert(free4, w)) == ()
    assert invert(free4, P(free4, "x b")) == P(free4, "b^-1 x^-1")
    assert multiply(xy_edge, P(xy_edge, "y"), P(xy_edge, "x")) == P(xy_edge, "x y")


def test_cyclic_reduce_examples(xy_edge, free4):
    w = P(free4, "x^2 b x^-2 c")
    assert cyclic_reduce(free4, w) == (w, ())
    assert cyclic_reduce(free4, P(free4, "x b x^-1")) == (P(free4, "b"), P(free4, "x"))
    core, h = cyclic_reduce(xy_edge, P(xy_edge, "x y b x^-1"))
    assert core == P(xy_edge, "y b") and h == P(xy_edge, "x")


def test_cyclic_length_examples(free4):
    assert cyclic_length(free4, P(free4, "x^2 b x^-2 c")) == 6
    assert cyclic_length(free4, ()) == 0


def test_is_conjugate(free4):
    g = free4
    w = P(g, "x b c^-1 b")
    d = is_conjugate(g, w, P(g, "x") + w + P(g, "x^-1"))
    assert d.yes and d.witness == P(g, "x")
    assert is_conjugate(g, P(g, "x"), P(g, "y")).no
    # witness convention: v = t·u·t⁻¹, so cb = b⁻¹(bc)b
    d = is_conjugate(g, P(g, "b c"), P(g, "c b"))
    assert d.yes and d.witness == P(g, "b^-1")


def test_partial_conjugation_validity(free4, path_plus_d):
    make_partial_conjugation(free4, "x", ["b"], sign=1)
    with pytest.raises(ValidityError):
        make_partial_conjugation(path_plus_d, "a", ["c"], sign=1)
    make_partial_conjugation(path_plus_d, "a", ["b", "d"], sign=1)
    with pytest.raises(ValidityError):
        make_partial_conjugation(free4, "x", ["x"], sign=1)
    with pytest.raises(InputError):
        make_partial_conjugation(free4, 0, ["b"])


def test_apply_inverse_examples(free4, issue_words):
    g = free4
    w = issue_words.words[0]
    alpha = pc_power(make_partial_conjugation(g, "x", ["b"], 1), 2)
    assert apply_inverse(g, alpha, w) == P(g, "b c")
    assert apply(g, SymmetricAutomorphism(), w) == reduce(g, w)
    sigma = SymmetricAutomorphism.of(make_partial_conjugation(g, "y", ["b"], 1))
    img = apply_inverse(g, sigma, w)
    assert img == P(g, "x^2 y^-1 b y x^-2 c") and len(img) == 8


def test_images_examples(path_plus_d):
    g = path_plus_d
    f = make_partial_conjugation(g, "a", ["b", "d"], 1)
    assert images(g, SymmetricAutomorphism.of(f)).images == (
        P(g, "a"), P(g, "c"), P(g, "a b a^-1"), P(g, "a d a^-1"))
    assert images(g, SymmetricAutomorphism()).images == tuple((v + 1,) for v in range(4))


def test_is_inner_examples(free4):
    g = free4
    full = make_partial_conjugation(g, "x", ["y", "b", "c"], 1)
    d = is_inner(g, SymmetricAutomorphism.of(full))
    assert d.yes and d.witness == P(g, "x")
    assert is_inner(g, SymmetricAutomorphism.of(make_partial_conjugation(g, "x", ["b"], 1))).no
    # conjugation by xy assembled from two full partial conjugations
    alpha = SymmetricAutomorphism.of(full, make_partial_conjugation(g, "y", ["x", "b", "c"], 1))
    d = is_inner(g, alpha, bound=2)
    assert d.yes and d.witness == P(g, "x y")


def test_inner_automorphism_roundtrip():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(2, 6)
        g = SimplicialGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3])
        w = reduce(g, [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(0, 4))])
        d = is_inner(g, inner_automorphism(g, w))
        assert d.yes
        for v in range(n):
            assert apply(g, inner_automorphism(g, d.witness), [v + 1]) == \
                apply(g, inner_automorphism(g, w), [v + 1])


def test_free_reduction_matches_stack_oracle():
    rng = random.Random(11)
    g = SimplicialGraph.edgeless(4)
    for _ in range(2000):
        w = [rng.choice((1, -1)) * rng.randint(1, 4) for _ in range(rng.randint(0, 14))]
        assert list(reduce(g, w)) == free_reduce(w)


def test_reduced_words_have_no_hidden_cancellation():
    rng = random.Random(12)
    for _ in range(300):
        n = rng.randint(2, 5)
        g = SimplicialGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.5])
        w = [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(0, 9))]
        r = reduce(g, w)
        assert not has_cancellation(r, g.adjacent)


def test_wordset_parse(free4):
    W = WordSet.parse(free4, "# comment\n\nx b x^-1 c\nb c b^-1\n")
    assert W.words == (P(free4, "x b x^-1 c"), P(free4, "c"))
    with pytest.raises(InputError):
        WordSet.parse(free4, "x q")
