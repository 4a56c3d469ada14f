import random

import networkx as nx
import pytest

from raagmm.errors import InputError, PreconditionError
from raagmm.graph import ComponentClass, SimplicialGraph, bits, parse_graph, to_mask


def labels(g, vs):
    return {g.labels[v] for v in vs}


def test_link_examples(fig3):
    assert SimplicialGraph.edgeless(3).link(0) == frozenset()
    assert SimplicialGraph.path(3).link(1) == {0, 2}
    assert labels(fig3, fig3.link(fig3.vertex("3"))) == {"2", "8", "10"}


def test_star_examples():
    assert SimplicialGraph.edgeless(3).star(0) == {0}
    assert SimplicialGraph.path(3).star(1) == {0, 1, 2}
    assert SimplicialGraph.complete(4).star(2) == {0, 1, 2, 3}


def test_star_complement_components(path_plus_d):
    assert SimplicialGraph.edgeless(4).star_complement_components(0) == [{1}, {2}, {3}]
    assert path_plus_d.star_complement_components(0) == [{2}, {3}]
    assert SimplicialGraph.complete(3).star_complement_components(1) == []


def test_classification_path_plus_d(path_plus_d):
    assert path_plus_d.classify_component(0, 2, {3}) is ComponentClass.SHARED
    assert path_plus_d.classify_component(0, 2, {2}) is ComponentClass.DOMINANT


def test_classification_picture(comps):
    # b = C, a = E: relative to a, Γ − st(b) has dominant {E,F,G}, shared {I}, subordinate {A}
    v = comps.vertex
    b, a = v("C"), v("E")
    expect_b = {frozenset("A"): ComponentClass.SUBORDINATE,
                frozenset("I"): ComponentClass.SHARED,
                frozenset("EFG"): ComponentClass.DOMINANT}
    got = {frozenset(labels(comps, bits(C))): comps.classify_component(b, a, C)
           for C in comps.component_masks(b)}
    assert got == expect_b
    expect_a = {frozenset("ABC"): ComponentClass.DOMINANT,
                frozenset("I"): ComponentClass.SHARED,
                frozenset("G"): ComponentClass.SUBORDINATE}
    got = {frozenset(labels(comps, bits(C))): comps.classify_component(a, b, C)
           for C in comps.component_masks(a)}
    assert got == expect_a


def test_classification_errors(path_plus_d):
    with pytest.raises(PreconditionError):
        path_plus_d.classify_component(0, 1, {2})
    with pytest.raises(InputError):
        path_plus_d.classify_component(0, 2, {2, 3})


def test_unknown_vertex():
    g = SimplicialGraph.edgeless(3)
    with pytest.raises(InputError):
        g.link(7)
    with pytest.raises(InputError):
        g.vertex("zz")


def test_sil_pairs():
    assert SimplicialGraph.complete(3).sil_pairs() == []
    g = SimplicialGraph.edgeless(4)
    assert len(g.sil_pairs()) == 6


def _nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def test_components_match_networkx():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 8)
        g = SimplicialGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.35])
        h = _nx(g)
        for a in range(n):
            sub = h.subgraph(set(range(n)) - {a} - set(h[a]))
            want = sorted((sorted(c) for c in nx.connected_components(sub)), key=lambda c: c[0])
            assert [sorted(c) for c in g.star_complement_components(a)] == want
            for b in range(n):
                if g.in_star(a, b):
                    continue
                for C in g.component_masks(a):
                    g.classify_component(a, b, C)  # exactly one class, else AssertionError


def test_parse_json_and_dot():
    g = parse_graph('{"vertices": ["a", "b", "c"], "edges": [["a", "b"]]}')
    assert g.n == 3 and g.adjacent(0, 1) and not g.adjacent(1, 2)
    d = parse_graph("graph { a -- b -- c; d; }")
    assert d.labels == ("a", "b", "c", "d")
    assert d.edges == ((0, 1), (1, 2))


def test_parse_errors_report_position():
    with pytest.raises(InputError, match="line 2"):
        parse_graph('{"vertices": ["a"],\n "edges": [[}')
    with pytest.raises(InputError, match="line"):
        parse_graph("graph {\n a -> b;\n}")
    with pytest.raises(InputError):
        parse_graph('{"vertices": ["a"], "edges": [["a", "q"]]}')
    with pytest.raises(InputError):
        parse_graph('{"vertices": ["a", "b"], "edges": [["a", "a"]]}')


def test_mask_helpers():
    assert bits(0b10110) == [1, 2, 4]
    assert to_mask([1, 2, 4]) == 0b10110
