import collections
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from toratlas.enumeration import enumerate_rotation_systems, map_genus, toroidal_classes
from toratlas.errors import CatalogError, DomainError
from toratlas.extension import (REPLAY_NAMES, completion_classes, completion_orbits,
                                decomposition_json, extend_all, extend_reduced, extension_cases, insert_edge,
                                insertion_sites, partial_symmetries, polygon_decomposition, replay_classification,
                                setup, toroidal_h_maps)
from toratlas.graph import builtin, k33
from toratlas.maps import RotationMap, from_rotations, submap


@pytest.fixture
def square(c4):
    return from_rotations(c4, {0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [0, 2]})


def test_chord_splits_face(square):
    sites = insertion_sites(square, 0, 2)
    assert len(sites) == 2  # one per side of the square
    m = insert_edge(square, sites[0])
    assert len(m.faces) == 3 and map_genus(m) == 0


def test_site_errors(square):
    with pytest.raises(DomainError):
        insertion_sites(square, 0, 1)
    with pytest.raises(DomainError):
        insertion_sites(square, 2, 2)
    first, second = insertion_sites(square, 0, 2)
    assert first[0].face(square) != second[0].face(square)
    with pytest.raises(DomainError):
        insert_edge(square, (first[0], second[1]))


def cyc(walk):
    return min(tuple(walk[i:] + walk[:i]) for i in range(len(walk)))


def occurrences(m, face, v):
    return sum(1 for d in face.darts if m.tail(d) == v)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_site_count_formula(data):
    s = setup(data.draw(st.sampled_from(REPLAY_NAMES)))
    maps = toroidal_h_maps(s)
    m = data.draw(st.sampled_from(maps))
    ends = [(x[0], x[-1]) for x in s.missing]
    u, v = data.draw(st.sampled_from([(a, b) for a, b in ends if m.graph.degree(a) and m.graph.degree(b)]
                                     or [(0, 1)]))
    if m.graph.has_edge(u, v):
        return
    want = sum(occurrences(m, f, u) * occurrences(m, f, v) for f in m.faces)
    assert len(insertion_sites(m, u, v)) == want


def test_site_multiplicities_seen():
    # somewhere among the H maps: no common face, a unique site, and a vertex twice on a face
    counts = collections.Counter()
    for name in REPLAY_NAMES:
        s = setup(name)
        for m in toroidal_h_maps(s):
            a, b = s.missing[0][0], s.missing[0][-1]
            counts[len(insertion_sites(m, a, b))] += 1
    assert counts[0] and counts[1] and counts[2]


@pytest.mark.parametrize("name", REPLAY_NAMES)
def test_every_insertion_adds_one_face(name):
    s = setup(name)
    for m in toroidal_h_maps(s)[:12]:
        item = s.missing[0]
        for site in insertion_sites(m, item[0], item[-1]):
            c = insert_edge(m, site, via=item[1:-1], check=False)
            assert len(c.faces) == len(m.faces) + 1
            assert map_genus(c) == map_genus(m) == 1
            # the other faces keep their vertex walks
            split = site[0].face(m)
            old = {cyc(m.face_vertices(f)) for i, f in enumerate(m.faces) if i != split}
            new = {cyc(c.face_vertices(f)) for f in c.faces}
            assert old <= new


def test_via_vertices_must_be_isolated():
    s = setup("F14")
    m = toroidal_h_maps(s)[0]
    sites = insertion_sites(m, 6, 8)
    if sites:
        with pytest.raises(DomainError):
            insert_edge(m, sites[0], via=(0,))


@pytest.mark.parametrize("name", REPLAY_NAMES)
def test_completions_are_exactly_the_embeddings_restricting_to_h(name):
    # brute-force oracle: every genus-1 rotation system of the target graph,
    # restricted to H, must be one of the H maps and be produced by extend_all
    s = setup(name)
    target = s.target()
    full = {m.rotations for m in enumerate_rotation_systems(target) if map_genus(m) == 1}
    grown = set()
    for m in toroidal_h_maps(s):
        for c in extend_all(m, s.missing):
            assert c.graph == target
            grown.add(c.rotations)
    assert grown == full
    for rots in list(full)[:20]:
        assert map_genus(submap(RotationMap(target, rots), s.h)) == 1


@pytest.mark.parametrize("name", REPLAY_NAMES)
def test_replay_matches_direct_classification(name):
    a = [c.canonical for c in replay_classification(name)]
    b = [c.canonical for c in toroidal_classes(builtin(name))]
    assert a == b


def test_f11_cases():
    cases = extension_cases("F11")
    assert len(cases) == 5
    one = [c for c in cases if c.trail_faces == 1]
    assert len(one) == 1
    assert all(c.completions == 0 for c in cases if c.trail_faces != 1)
    # the drawn path of length seven bounds a single face here; eight labelled
    # completions, pairwise related by at most the order-2 symmetry of the case
    assert one[0].completions == 8
    assert len(completion_orbits(one[0].representative, setup("F11").missing)) == 6
    assert len(partial_symmetries(one[0].representative, setup("F11").missing)) == 2


def test_g1_has_a_dead_case_with_sites():
    cases = extension_cases("G1")
    assert len(cases) == 6
    assert sorted(c.completions for c in cases) == [0, 0, 0, 2, 2, 2]


def test_f14_case_counts():
    cases = extension_cases("F14")
    assert len(cases) == 5
    assert sorted(c.completions for c in cases) == [0, 0, 0, 1, 2]


def test_f12_total_completions():
    assert sum(c.completions for c in extension_cases("F12")) == 9


@pytest.mark.parametrize("name", REPLAY_NAMES)
def test_reduced_search_reaches_same_classes(name):
    s = setup(name)
    for m in toroidal_h_maps(s):
        full = {c.canonical for c in completion_classes(extend_all(m, s.missing))}
        red = extend_reduced(m, s.missing)
        assert {c.canonical for c in completion_classes(red)} == full
        assert len(red) <= len(extend_all(m, s.missing))


def test_unknown_setup():
    with pytest.raises(CatalogError):
        setup("K5")


def test_polygon_decomposition_counts():
    for name in ["K33", "F11", "F12", "F14", "G1"]:
        g = builtin(name)
        for c in toroidal_classes(g):
            polys = polygon_decomposition(c.representative)
            assert len(polys) == len(c.representative.faces)
            assert sum(p.sides for p in polys) == 2 * g.m
            seen = collections.Counter(v for p in polys for v in p.vertices)
            assert all(seen[v] == g.degree(v) for v in range(g.n))
            sides = collections.Counter(tuple(sorted(e)) for p in polys for e in p.edges())
            assert all(sides[e] == 2 for e in g.edges)


def test_named_decompositions():
    f11 = toroidal_classes(builtin("F11"))[0].representative
    assert sorted(p.sides for p in polygon_decomposition(f11)) == [4, 4, 4, 4, 10, 10]
    f12 = [c for c in toroidal_classes(builtin("F12")) if c.face_signature == (4, 4, 6, 6, 8, 8)][0]
    assert sorted(p.sides for p in polygon_decomposition(f12.representative)) == [4, 4, 6, 6, 8, 8]
    hom = [c for c in toroidal_classes(k33()) if c.face_signature == (6, 6, 6)][0]
    polys = decomposition_json(polygon_decomposition(hom.representative))
    assert [len(p) for p in polys] == [6, 6, 6]
    assert {x for p in polys for x in p} == {"a1", "a2", "a3", "b1", "b2", "b3"}


RENDER = """
import sys
from toratlas.enumeration import toroidal_classes
from toratlas.graph import builtin
from toratlas.extension import render_decomposition
render_decomposition(toroidal_classes(builtin("F11"))[0].representative, sys.stdout.buffer, "F11")
"""


def test_svg_is_deterministic_across_processes():
    runs = [subprocess.run([sys.executable, "-c", RENDER], capture_output=True, check=True).stdout
            for _ in range(2)]
    assert runs[0] == runs[1]
    assert runs[0].startswith(b"<?xml") and runs[0].count(b"<path") > 6
