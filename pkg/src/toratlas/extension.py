"""Growing embeddings edge by edge: insertion sites, face splitting, completions.

A corner is the angle at a vertex between two consecutive darts of its
rotation. Adding an edge ``uv`` inside a face means choosing a corner of that
face at ``u`` and one at ``v``; the face is cut in two and nothing else
changes. When a vertex occurs twice on a face walk its two corners are
different sites and both are explored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .classification import ClassTable, EmbeddingClass, canonical_form, symmetries
from .enumeration import enumerate_rotation_systems, map_genus
from .errors import CatalogError, DomainError
from .graph import Graph, builtin
from .maps import RotationMap, component_maps, from_rotations, genus_of_map, mirror, relabel


class FaceCorner(NamedTuple):
    """The corner at ``vertex`` just after neighbour ``after`` in its rotation."""

    vertex: int
    after: int

    def dart(self, m: RotationMap) -> int:
        return m.dart(self.vertex, self.after)

    def face(self, m: RotationMap) -> int:
        return m.face_of[m.sigma[self.dart(m)]]


Site = tuple[FaceCorner, FaceCorner]


def _corner_of(m: RotationMap, d: int) -> FaceCorner:
    """Corner through which the face walk leaves along dart ``d``."""
    c = m.sigma_inv[d]
    return FaceCorner(m.tail(c), m.head(c))


def insertion_sites(m: RotationMap, u: int, v: int) -> list[Site]:
    """Every pair of corners at ``u`` and ``v`` lying on a common face."""
    if u == v:
        raise DomainError("an edge needs two distinct endpoints")
    if m.graph.has_edge(u, v):
        raise DomainError(f"({u}, {v}) is already an edge")
    sites = []
    for face in m.faces:
        at_u = [x for x in face.darts if m.tail(x) == u]
        at_v = [x for x in face.darts if m.tail(x) == v]
        for du in at_u:
            for dv in at_v:
                sites.append((_corner_of(m, du), _corner_of(m, dv)))
    return sites


def _walk_count(m: RotationMap) -> int:
    return len(m.faces)


def _genus_sum(m: RotationMap) -> int:
    return sum(genus_of_map(sub) for _, sub in component_maps(m))


def insert_edge(m: RotationMap, site: Site, via: Sequence[int] = (), check: bool = True) -> RotationMap:
    """Draw a new edge through the face shared by the two corners of ``site``.

    ``via`` lists currently isolated vertices to place along the new edge in
    order, turning it into a path. With ``check`` the number of face walks is
    verified to grow by exactly one and the genus to stay put.
    """
    cu, cv = site
    if cu.face(m) != cv.face(m):
        raise DomainError("corners lie on different faces")
    u, v = cu.vertex, cv.vertex
    for w in via:
        if m.graph.degree(w) != 0:
            raise DomainError(f"vertex {w} is not isolated")
    path = [u, *via, v]
    g2 = m.graph.with_edges(list(zip(path, path[1:])))
    rots = [list(r) for r in m.rotations]
    for corner, other in ((cu, path[1]), (cv, path[-2])):
        rot = rots[corner.vertex]
        rot.insert(rot.index(corner.after) + 1, other)
    for i, w in enumerate(via, start=1):
        rots[w] = [path[i - 1], path[i + 1]]
    out = from_rotations(g2, rots)
    if check:
        if _walk_count(out) != _walk_count(m) + 1:
            raise AssertionError("edge insertion did not split exactly one face")
        if _genus_sum(out) != _genus_sum(m):
            raise AssertionError("edge insertion changed the genus")
    return out


def extend_all(m: RotationMap, missing: Sequence[Sequence[int]]) -> list[RotationMap]:
    """All ways to add the ``missing`` edges, in the given order, without crossings.

    Each entry is ``(u, v)`` or a path ``(u, w1, ..., v)`` whose inner
    vertices are still isolated. Depth-first over insertion sites; an empty
    result means the embedding does not extend.
    """
    out: list[RotationMap] = []

    def grow(cur: RotationMap, i: int) -> None:
        if i == len(missing):
            out.append(cur)
            return
        item = missing[i]
        for site in insertion_sites(cur, item[0], item[-1]):
            grow(insert_edge(cur, site, via=item[1:-1]), i + 1)

    grow(m, 0)
    return out


def extend_reduced(m: RotationMap, missing: Sequence[Sequence[int]]) -> list[RotationMap]:
    """Completions with equivalent intermediate steps merged.

    Same search as :func:`extend_all`, except that after each insertion the
    children which are equivalent as partial embeddings (together with the
    items still to add) are collapsed to the first one. This is how a hand
    case analysis argues "without loss of generality". The classes reached
    are the same as for ``extend_all``; the leaf count may depend on the
    order of ``missing``.
    """
    items = [tuple(x) for x in missing]
    if not items:
        return [m]
    item, rest = items[0], items[1:]
    kids: dict = {}
    for site in insertion_sites(m, item[0], item[-1]):
        child = insert_edge(m, site, via=item[1:-1])
        kids.setdefault(case_key(child, rest), child)
    out = []
    for child in kids.values():
        out += extend_reduced(child, rest)
    return out


def pairing_of(m: RotationMap, missing: Sequence[Sequence[int]]) -> dict:
    """Endpoint pairs of the missing items whose ends are both already drawn."""
    pairing = {}
    for item in missing:
        u, v = item[0], item[-1]
        if m.graph.degree(u) and m.graph.degree(v):
            pairing[u] = v
            pairing[v] = u
    return pairing


def _drawn_part(m: RotationMap) -> tuple[list[int], RotationMap]:
    keep = [v for v in range(m.graph.n) if m.graph.degree(v)]
    index = {v: i for i, v in enumerate(keep)}
    sub = m.graph.induced(keep)
    return keep, from_rotations(sub, [[index[w] for w in m.rotations[v]] for v in keep])


def case_key(m: RotationMap, missing: Sequence[Sequence[int]]) -> bytes:
    """Equivalence class of a partial embedding together with the edges still to add."""
    keep, sub = _drawn_part(m)
    index = {v: i for i, v in enumerate(keep)}
    pairing = {index[a]: index[b] for a, b in pairing_of(m, missing).items()}
    return canonical_form(sub, pairing=pairing)


def partial_symmetries(m: RotationMap, missing: Sequence[Sequence[int]]) -> list[tuple[tuple[int, ...], bool]]:
    """Symmetries of a partial embedding that permute the missing items.

    Returned as (vertex permutation of the full vertex set, reflecting).
    Isolated vertices follow the items they sit on.
    """
    keep, sub = _drawn_part(m)
    items = [tuple(x) for x in missing]
    lookup = {}
    for item in items:
        lookup[(item[0], item[-1])] = item
        lookup[(item[-1], item[0])] = item[::-1]
    out = []
    for iso in symmetries(sub):
        local = iso.vertex_permutation()
        perm = {keep[i]: keep[j] for i, j in enumerate(local)}
        ok = True
        pending = list(items)
        while pending and ok:
            progress = [it for it in pending if it[0] in perm and it[-1] in perm]
            if not progress:
                break
            for item in progress:
                image = lookup.get((perm[item[0]], perm[item[-1]]))
                if image is None:
                    ok = False
                    break
                for x, y in zip(item[1:-1], image[1:-1]):
                    if perm.setdefault(x, y) != y:
                        ok = False
                pending.remove(item)
        if not ok or pending:
            continue
        for v in range(m.graph.n):
            perm.setdefault(v, v)
        if sorted(perm.values()) != list(range(m.graph.n)):
            continue
        out.append((tuple(perm[v] for v in range(m.graph.n)), iso.reflecting))
    return out


def completion_orbits(m: RotationMap, missing: Sequence[Sequence[int]],
                      completions: Sequence[RotationMap] = None) -> list[list[int]]:
    """Group completions of ``m`` that differ only by a symmetry of ``m``."""
    if completions is None:
        completions = extend_all(m, missing)
    index = {c.rotations: i for i, c in enumerate(completions)}
    syms = partial_symmetries(m, missing)
    seen = [False] * len(completions)
    orbits = []
    for i, c in enumerate(completions):
        if seen[i]:
            continue
        orbit = set()
        for perm, reflecting in syms:
            img = relabel(c, perm)
            if reflecting:
                img = mirror(img)
            j = index.get(img.rotations)
            if j is None or img.graph != c.graph:
                raise AssertionError("symmetry image is not a completion")
            orbit.add(j)
        for j in orbit:
            seen[j] = True
        orbits.append(sorted(orbit))
    return orbits


def completion_classes(completions: Sequence[RotationMap]) -> list[EmbeddingClass]:
    table = ClassTable()
    for c in completions:
        table.add(c)
    return table.classes()


# -- fixed subdivisions and case replay ---------------------------------


@dataclass(frozen=True)
class Setup:
    """A target graph split into a K33 subdivision ``h`` plus items to add.

    ``trail`` is the highlighted part of ``h`` (a walk of vertices) that
    the hand analysis decorates: the subdivided edge, a directed edge or the
    subdivided 4-cycle.
    """

    name: str
    h: Graph
    missing: tuple[tuple[int, ...], ...]
    kind: str
    trail: tuple[int, ...]

    def target(self) -> Graph:
        return builtin(self.name)


_SETUPS = {
    "F11": ([(6, 9), (7, 10), (8, 11)], "edge", (0, 6, 7, 8, 9, 10, 11, 3)),
    "F12": ([(8, 10), (6, 11), (7, 9)], "directed-edge", (0, 3)),
    "F13": ([(9, 11), (6, 10), (7, 8)], "directed-edge", (0, 3)),
    "F14": ([(6, 10, 8), (7, 11, 9), (10, 11)], "cycle", (0, 6, 3, 7, 1, 8, 4, 9, 0)),
    "G1": ([(6, 9), (7, 8)], "directed-edge", (0, 3)),
}

REPLAY_NAMES = tuple(_SETUPS)


def setup(name: str) -> Setup:
    if name not in _SETUPS:
        raise CatalogError(f"no extension setup for {name!r}; have {', '.join(REPLAY_NAMES)}")
    missing, kind, trail = _SETUPS[name]
    g = builtin(name)
    drop = [(a, b) for item in missing for a, b in zip(item, item[1:])]
    return Setup(name, g.without_edges(drop), tuple(tuple(x) for x in missing), kind, trail)


def toroidal_h_maps(s: Setup) -> list[RotationMap]:
    """Every rotation system of ``s.h`` whose drawn part has genus one."""
    return [m for m in enumerate_rotation_systems(s.h) if map_genus(m) == 1]


def replay_classification(name: str) -> list[EmbeddingClass]:
    """Classes of the target reached by extending every toroidal map of H."""
    s = setup(name)
    table = ClassTable()
    for m in toroidal_h_maps(s):
        for c in extend_all(m, s.missing):
            table.add(c)
    return table.classes()


@dataclass
class ExtensionCase:
    index: int
    representative: RotationMap
    labelled: int
    trail_faces: int
    completions: int
    reduced: int
    signatures: list

    def to_json(self) -> dict:
        return {
            "case": self.index,
            "labelled": self.labelled,
            "signature": list(self.representative.signature()),
            "trail_faces": self.trail_faces,
            "completions": self.completions,
            "reduced": self.reduced,
            "classes": [list(x) for x in self.signatures],
        }


def trail_faces(m: RotationMap, trail: Sequence[int]) -> int:
    """How many distinct faces the edges of ``trail`` border."""
    faces = set()
    for a, b in zip(trail, trail[1:]):
        d = m.dart(a, b)
        faces.add(m.face_of[d])
        faces.add(m.face_of[d ^ 1])
    return len(faces)


def extension_cases(name: str) -> list[ExtensionCase]:
    """Toroidal maps of H grouped up to equivalence, each with its completions.

    Cases are numbered in canonical-form order, which need not agree with
    any hand numbering.
    """
    s = setup(name)
    groups: dict[bytes, list[RotationMap]] = {}
    for m in toroidal_h_maps(s):
        groups.setdefault(case_key(m, s.missing), []).append(m)
    out = []
    for i, key in enumerate(sorted(groups), start=1):
        rep = groups[key][0]
        full = extend_all(rep, s.missing)
        sigs = sorted({c.canonical: c.face_signature for c in completion_classes(full)}.values())
        out.append(ExtensionCase(i, rep, len(groups[key]), trail_faces(rep, s.trail), len(full),
                                 len(extend_reduced(rep, s.missing)), sigs))
    return out


# -- polygon decompositions -------------------------------------------


@dataclass(frozen=True)
class Polygon:
    """One face cut open: corner vertices in walk order."""

    vertices: tuple[int, ...]
    labels: tuple[str, ...]

    @property
    def sides(self) -> int:
        return len(self.vertices)

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]


def polygon_decomposition(m: RotationMap) -> list[Polygon]:
    """One labelled polygon per face; gluing equal labels rebuilds the surface."""
    g = m.graph
    out = []
    for face in m.faces:
        vs = tuple(m.tail(x) for x in face.darts)
        out.append(Polygon(vs, tuple(g.label(v) for v in vs)))
    return out


def decomposition_json(polys: Sequence[Polygon]) -> list[list[str]]:
    return [list(p.labels) for p in polys]



def render_decomposition(m: RotationMap, out, title: str = "") -> None:
    """Draw the face polygons of ``m`` as regular n-gons with labelled corners.

    ``out`` is a path or a binary file object; the SVG bytes depend only on
    the map (fixed hash salt, no date stamp).
    """
    import matplotlib

    matplotlib.use("Agg")
    import math

    import matplotlib.pyplot as plt

    polys = polygon_decomposition(m)
    cols = min(len(polys), 3) or 1
    rows = max(1, math.ceil(len(polys) / cols))
    with matplotlib.rc_context({"svg.hashsalt": "toratlas", "svg.fonttype": "path"}):
        fig, axes = plt.subplots(rows, cols, figsize=(2.6 * cols, 2.6 * rows), squeeze=False)
        for ax in axes.flat:
            ax.set_axis_off()
            ax.set_aspect("equal")
        for ax, poly in zip(axes.flat, polys):
            k = poly.sides
            pts = [(math.cos(math.pi / 2 + 2 * math.pi * i / k), math.sin(math.pi / 2 + 2 * math.pi * i / k))
                   for i in range(k)]
            xs = [p[0] for p in pts] + [pts[0][0]]
            ys = [p[1] for p in pts] + [pts[0][1]]
            ax.fill(xs, ys, color="#e8eef7", zorder=0)
            ax.plot(xs, ys, color="#334", lw=1.2)
            for (x, y), lab in zip(pts, poly.labels):
                ax.plot([x], [y], "o", color="#334", ms=3)
                ax.text(1.22 * x, 1.22 * y, lab, ha="center", va="center", fontsize=8)
            ax.set_xlim(-1.45, 1.45)
            ax.set_ylim(-1.45, 1.45)
            ax.set_title(f"{k}-gon", fontsize=8)
        if title:
            fig.suptitle(title, fontsize=9)
        fig.savefig(out, format="svg", metadata={"Date": None})
        plt.close(fig)
