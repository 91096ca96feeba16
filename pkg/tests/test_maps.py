import pytest
from hypothesis import given, settings, strategies as st

from toratlas.enumeration import enumerate_rotation_systems
from toratlas.errors import DomainError, ParseError
from toratlas.graph import Graph, builtin, k33
from toratlas.maps import (RotationMap, component_maps, from_rotations, genus_of_map, mirror, relabel,
                           submap)


def naive_faces(g, rotations):
    """Trace faces straight from the rotation lists: arriving at v from u,
    leave towards the neighbour after u in v's rotation."""
    unused = {(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges}
    lengths = []
    while unused:
        start = min(unused)
        u, v = start
        n = 0
        while True:
            unused.discard((u, v))
            n += 1
            rot = rotations[v]
            w = rot[(rot.index(u) + 1) % len(rot)]
            u, v = v, w
            if (u, v) == start:
                break
        lengths.append(n)
    return sorted(lengths)


@st.composite
def random_maps(draw, graph):
    rots = []
    for v in range(graph.n):
        nb = list(graph.adj[v])
        rots.append(draw(st.permutations(nb)) if nb else [])
    return from_rotations(graph, rots)


K5 = builtin("K5")


def test_darts_layout():
    m = from_rotations(k33(), {v: list(k33().adj[v]) for v in range(6)})
    for d in range(m.dart_count):
        assert m.alpha[d] == d ^ 1
        assert m.tail(d) == m.head(d ^ 1)
        assert m.sigma_inv[m.sigma[d]] == d
        assert m.phi[d] == m.sigma[m.alpha[d]]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_faces_match_naive_tracer(data):
    g = data.draw(st.sampled_from([k33(), K5, builtin("F13"), builtin("G1")]))
    m = data.draw(random_maps(g))
    assert m.signature() == tuple(naive_faces(g, m.rotations))
    assert sum(len(f) for f in m.faces) == 2 * g.m


def test_genus_of_k5_maps_is_euler_consistent():
    for m in enumerate_rotation_systems(K5):
        k = genus_of_map(m)
        assert 0 <= k <= 3
        assert g_v_e_f(m) == 2 - 2 * k


def g_v_e_f(m):
    return m.graph.n - m.graph.m + len(m.faces)


def test_planar_c4(c4):
    m = from_rotations(c4, {0: [1, 3], 1: [0, 2], 2: [1, 3], 3: [0, 2]})
    assert m.signature() == (4, 4)
    assert genus_of_map(m) == 0


def test_genus_needs_connected():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    m = from_rotations(g, [[1], [0], [3], [2]])
    with pytest.raises(DomainError):
        genus_of_map(m)
    assert [c for c, _ in component_maps(m)] == [[0, 1], [2, 3]]


def test_isolated_vertex_counts_as_face():
    g = Graph.from_edges(1, [])
    m = from_rotations(g, [[]])
    assert m.face_count() == 1 and genus_of_map(m) == 0


def test_bad_rotation():
    with pytest.raises(DomainError):
        from_rotations(k33(), {0: [3, 4], 1: [3, 4, 5]})
    with pytest.raises(DomainError):
        RotationMap(k33(), ((4, 3, 5),) * 6)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_mirror_keeps_faces(data):
    m = data.draw(random_maps(K5))
    mm = mirror(m)
    assert mm.signature() == m.signature()
    assert mirror(mm) == m


@settings(max_examples=30, deadline=None)
@given(st.data(), st.permutations(range(6)))
def test_relabel_keeps_faces(data, perm):
    m = data.draw(random_maps(k33()))
    r = relabel(m, perm)
    assert r.signature() == m.signature()
    for v in range(6):
        assert r.rotations_dict()[perm[v]] == list(r.rotations[perm[v]])


def test_submap_restricts_rotations():
    g = builtin("F11")
    m = next(iter(enumerate_rotation_systems(g)))
    h = g.without_edges([(6, 9)])
    s = submap(m, h)
    assert list(s.rotations[6]) == [w for w in m.rotations[6] if w != 9]
    with pytest.raises(DomainError):
        submap(m, k33())


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_json_round_trip(data):
    m = data.draw(random_maps(builtin("F12")))
    assert RotationMap.from_json(m.to_json()) == m


def test_json_rejects_garbage():
    with pytest.raises(ParseError):
        RotationMap.from_json({"graph": {"n": 2}})
