import itertools
import time

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from conftest import to_nx
from toratlas.errors import BudgetExceeded, CatalogError, DomainError, NoCycleError, ParseError, UnsupportedInput
from toratlas.graph import (CATALOG_NAMES, Graph, automorphisms, builtin, catalog, construct_f11, construct_f14,
                            contains_k33_subdivision, find_isomorphism, four_cycles, girth,
                            is_isomorphic, k33, subdivide, suppress_degree2)


@st.composite
def small_graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph.from_edges(n, chosen)


def brute_automorphisms(g):
    es = set(g.edges)
    out = []
    for p in itertools.permutations(range(g.n)):
        if all(tuple(sorted((p[u], p[v]))) in es for u, v in g.edges):
            out.append(p)
    return sorted(out)


def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(DomainError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(DomainError):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(DomainError):
        Graph.from_edges(2, [(0, 2)])


def test_k33_basics():
    g = builtin("K33")
    assert (g.n, g.m) == (6, 9)
    assert all(g.degree(v) == 3 for v in range(6))
    assert nx.is_bipartite(to_nx(g))


def test_e42_is_two_k33s():
    g = builtin("E42")
    assert (g.n, g.m, len(g.components())) == (12, 18, 2)
    for comp in g.components():
        assert is_isomorphic(g.induced(comp), k33())


def test_unknown_name():
    with pytest.raises(CatalogError):
        builtin("K7")


@pytest.mark.parametrize("ng", catalog(), ids=lambda x: x.name)
def test_catalog_invariants(ng):
    assert ng.check() == []
    g = to_nx(ng.graph)
    # independent girth / cubic checks
    assert nx.girth(g) == ng.expected.girth
    assert all(d == 3 for _, d in g.degree()) == ng.expected.cubic


def test_catalog_transcription_against_networkx_isomorphism():
    assert nx.is_isomorphic(to_nx(construct_f14()), to_nx(builtin("F14")))
    assert not nx.is_isomorphic(to_nx(builtin("F12")), to_nx(builtin("F13")))


def test_f11_construction():
    g = construct_f11()
    assert (g.n, g.m, girth(g)) == (12, 18, 4)
    assert [g.label(v) for v in range(6, 12)] == ["1", "2", "3", "4", "5", "6"]
    chords = [(6, 9), (7, 10), (8, 11)]
    assert is_isomorphic(suppress_degree2(g.without_edges(chords)), k33())


def test_aa_prime_removal_gives_homeomorphic_graphs():
    def drop(name):
        g = builtin(name)
        return suppress_degree2(g.without_edges([(g.vertex_by_label("a"), g.vertex_by_label("a'"))]))
    a, b = drop("F12"), drop("F13")
    assert nx.is_isomorphic(to_nx(a), to_nx(b))


def test_subdivide_counts():
    g = subdivide(k33(), (0, 3), 1)
    assert (g.n, g.m) == (7, 10)
    with pytest.raises(DomainError):
        subdivide(k33(), (0, 1), 1)
    with pytest.raises(DomainError):
        subdivide(k33(), (0, 3), 0)


@given(st.integers(0, 8), st.integers(1, 6))
def test_subdivide_then_suppress(e, k):
    g = k33()
    edge = g.edges[e]
    assert is_isomorphic(suppress_degree2(subdivide(g, edge, k)), g)


def test_suppress_keeps_cubic_graphs():
    assert suppress_degree2(k33()) == k33()


def test_suppress_refuses_parallel_edges():
    # a triangle would collapse to a loop
    triangle = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(UnsupportedInput):
        suppress_degree2(triangle)


@pytest.mark.parametrize("name", ["K33", "K5", "F11", "F12", "F13", "F14", "G1"])
def test_automorphism_count_matches_networkx(name):
    g = builtin(name)
    expected = sum(1 for _ in GraphMatcher(to_nx(g), to_nx(g)).isomorphisms_iter())
    assert len(automorphisms(g)) == expected


def test_known_group_orders():
    assert len(automorphisms(k33())) == 72
    assert len(automorphisms(builtin("K5"))) == 120


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=6))
def test_automorphisms_match_brute_force(g):
    auts = automorphisms(g)
    assert auts == brute_automorphisms(g)
    ident = tuple(range(g.n))
    assert ident in auts
    s = set(auts)
    for p in auts[:5]:
        for q in auts[:5]:
            assert tuple(p[q[v]] for v in range(g.n)) in s


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=7), st.randoms(use_true_random=False))
def test_isomorphism_finds_relabelled_copy(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = g.relabel(perm)
    iso = find_isomorphism(g, h)
    assert iso is not None
    assert all(h.has_edge(iso[u], iso[v]) for u, v in g.edges)


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=6), small_graphs(max_n=6))
def test_isomorphism_agrees_with_networkx(a, b):
    assert is_isomorphic(a, b) == nx.is_isomorphic(to_nx(a), to_nx(b))


def test_search_limit():
    big = Graph.from_edges(17, [(i, i + 1) for i in range(16)])
    with pytest.raises(BudgetExceeded):
        automorphisms(big)


def test_girth():
    assert girth(k33()) == 4
    assert girth(builtin("F13")) == 5
    assert girth(builtin("G1")) == 4
    with pytest.raises(NoCycleError):
        girth(Graph.from_edges(4, [(0, 1), (1, 2), (1, 3)]))


def brute_four_cycles(g):
    found = set()
    for quad in itertools.permutations(range(g.n), 4):
        if all(g.has_edge(quad[i], quad[(i + 1) % 4]) for i in range(4)):
            rots = [quad[i:] + quad[:i] for i in range(4)]
            rots += [tuple(reversed(r)) for r in rots]
            found.add(min(rots))
    return found


def test_four_cycles():
    assert len(four_cycles(k33())) == 9
    assert len(four_cycles(builtin("K5"))) == 15
    assert four_cycles(Graph.from_edges(3, [(0, 1), (1, 2)])) == []


@settings(max_examples=30, deadline=None)
@given(small_graphs(max_n=7))
def test_four_cycles_brute_force(g):
    assert len(four_cycles(g)) == len(brute_four_cycles(g))


@pytest.mark.parametrize("name", ["K33", "F11", "F12", "F13", "F14", "G1", "E42"])
def test_k33_witness(name):
    g = builtin(name)
    t = time.perf_counter()
    w = contains_k33_subdivision(g)
    assert time.perf_counter() - t < 5
    assert w is not None
    w.validate()
    assert is_isomorphic(suppress_degree2(w.subgraph().induced(
        [v for v in range(g.n) if w.subgraph().degree(v)])), k33())


def test_no_k33_in_planar_graphs():
    k4 = Graph.from_edges(4, itertools.combinations(range(4), 2))
    assert contains_k33_subdivision(k4) is None
    assert contains_k33_subdivision(builtin("K5")) is None
    cube = nx.convert_node_labels_to_integers(nx.hypercube_graph(3))
    assert contains_k33_subdivision(Graph.from_edges(8, cube.edges())) is None


def test_k33_in_subdivided_k33():
    g = subdivide(subdivide(k33(), (1, 4), 2), (2, 5), 1)
    assert contains_k33_subdivision(g) is not None


def test_text_round_trip():
    g = builtin("G1")
    assert Graph.from_text(g.to_text()) == g


def test_text_comments_and_errors():
    g = Graph.from_text("# square\n4 4\n0 1\n1 2\n# middle\n2 3\n0 3")
    assert g.m == 4
    with pytest.raises(ParseError, match="line 3"):
        Graph.from_text("3 2\n0 1\n1 1\n")
    with pytest.raises(ParseError, match="line 1"):
        Graph.from_text("three two\n")
    with pytest.raises(ParseError):
        Graph.from_text("3 3\n0 1\n1 2\n")


def test_names_listed():
    assert set(CATALOG_NAMES) == {"K33", "K5", "E42", "F11", "F12", "F13", "F14", "G1"}
