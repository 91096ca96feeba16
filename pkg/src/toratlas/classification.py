"""Equivalence of (decorated) embeddings: canonical forms, symmetry groups, orbits.

Two maps are equivalent when some dart bijection carries ``alpha`` to
``alpha`` and ``sigma`` to ``sigma`` (orientation preserving) or to
``sigma^-1`` (reflecting), and carries the decoration onto the decoration.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import DomainError
from .graph import _canonical_cycle
from .maps import RotationMap

KINDS = ("none", "directed-edge", "edge", "cycle")


@dataclass(frozen=True)
class Decoration:
    """A highlighted directed edge ``(tail, head)``, edge ``(u, v)`` or cycle.

    Stored by vertices; darts are resolved against a particular map, which is
    unambiguous for simple graphs.
    """

    kind: str = "none"
    vertices: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown decoration kind {self.kind!r}")
        need = {"none": 0, "directed-edge": 2, "edge": 2}.get(self.kind)
        if need is not None and len(self.vertices) != need:
            raise DomainError(f"{self.kind} decoration needs {need} vertices")
        if self.kind == "cycle" and (len(self.vertices) < 3 or len(set(self.vertices)) != len(self.vertices)):
            raise DomainError("cycle decoration needs at least three distinct vertices")

    @classmethod
    def directed_edge(cls, tail: int, head: int) -> "Decoration":
        return cls("directed-edge", (tail, head))

    @classmethod
    def edge(cls, u: int, v: int) -> "Decoration":
        return cls("edge", (min(u, v), max(u, v)))

    @classmethod
    def cycle(cls, vertices: Sequence[int]) -> "Decoration":
        return cls("cycle", _canonical_cycle(list(vertices)))

    def normalized(self) -> "Decoration":
        if self.kind == "edge":
            return Decoration.edge(*self.vertices)
        if self.kind == "cycle":
            return Decoration.cycle(self.vertices)
        return self

    def mapped(self, perm: Sequence[int]) -> "Decoration":
        """Image under the vertex map ``v -> perm[v]``."""
        return Decoration(self.kind, tuple(perm[v] for v in self.vertices)).normalized()

    def tags(self, m: RotationMap) -> list[int]:
        """Per-dart marker: 1 on decorated darts, 0 elsewhere."""
        t = [0] * m.dart_count
        if self.kind == "directed-edge":
            t[m.dart(*self.vertices)] = 1
        elif self.kind == "edge":
            u, v = self.vertices
            t[m.dart(u, v)] = t[m.dart(v, u)] = 1
        elif self.kind == "cycle":
            vs = self.vertices
            for a, b in zip(vs, vs[1:] + vs[:1]):
                t[m.dart(a, b)] = t[m.dart(b, a)] = 1
        return t

    def __str__(self):
        if self.kind == "none":
            return "none"
        sep = "->" if self.kind == "directed-edge" else "-"
        return f"{self.kind}:" + sep.join(map(str, self.vertices))


NO_DECORATION = Decoration()

MapLike = Union[RotationMap, tuple]


def _split(item: MapLike) -> tuple[RotationMap, Decoration]:
    if isinstance(item, RotationMap):
        return item, NO_DECORATION
    m, d = item
    return m, (d if d is not None else NO_DECORATION)


def _orbit_lengths(perm: Sequence[int]) -> list[int]:
    n = len(perm)
    out = [0] * n
    for d in range(n):
        if out[d]:
            continue
        orbit = [d]
        x = perm[d]
        while x != d:
            orbit.append(x)
            x = perm[x]
        for y in orbit:
            out[y] = len(orbit)
    return out


def _rotation_variants(m: RotationMap, allow_reflection: bool):
    yield m.sigma
    if allow_reflection:
        yield m.sigma_inv


def canonical_form(m: RotationMap, d: Optional[Decoration] = None, allow_reflection: bool = True,
                   pairing: Optional[dict] = None) -> bytes:
    """Label-free encoding: equal bytes exactly when the decorated maps are equivalent.

    Each dart is tried as a root; a breadth-first walk along ``sigma`` then
    ``alpha`` numbers every dart, and the resulting table of (sigma, alpha,
    tag) numbers is compared lexicographically. Roots are first filtered by a
    cheap per-dart key so only the most promising ones are walked.

    ``pairing`` is an optional involution on vertices (edges still to be
    added, say) that equivalences must respect; each vertex needs degree >= 1.
    """
    if not m.graph.is_connected():
        raise DomainError("canonical_form needs a connected map")
    d = d or NO_DECORATION
    n = m.dart_count
    tags = d.tags(m)
    degree = [m.graph.degree(m.tail(x)) for x in range(n)]
    if pairing:
        out_darts = {v: [m.dart(v, w) for w in m.graph.adj[v]] for v in pairing.values()}
    best = None
    for s in _rotation_variants(m, allow_reflection):
        flen = _orbit_lengths([s[x ^ 1] for x in range(n)])
        keys = [(-tags[x], degree[x], flen[x], flen[x ^ 1]) for x in range(n)]
        kmin = min(keys) if keys else ()
        for root in range(n):
            if keys[root] != kmin:
                continue
            label = [-1] * n
            label[root] = 0
            order = [root]
            i = 0
            while i < len(order):
                x = order[i]
                for y in (s[x], x ^ 1):
                    if label[y] < 0:
                        label[y] = len(order)
                        order.append(y)
                i += 1
            trace = list(kmin)
            for x in order:
                trace += (label[s[x]], label[x ^ 1], tags[x])
            if pairing:
                for x in order:
                    w = pairing.get(m.tail(x))
                    trace.append(0 if w is None else 1 + min(label[y] for y in out_darts[w]))
            trace = tuple(trace)
            if best is None or trace < best:
                best = trace
    if best is None:
        return struct.pack(">H", 0)
    # key entries may be negative; shift them into the unsigned range
    values = [n] + [v + 1 for v in best]
    return struct.pack(f">{len(values)}H", *values)


def canonical_hex(m: RotationMap, d: Optional[Decoration] = None, allow_reflection: bool = True) -> str:
    return canonical_form(m, d, allow_reflection).hex()


def are_equivalent(a: MapLike, b: MapLike, allow_reflection: bool = True) -> bool:
    m1, d1 = _split(a)
    m2, d2 = _split(b)
    if m1.dart_count != m2.dart_count or m1.graph.n != m2.graph.n:
        return False
    return canonical_form(m1, d1, allow_reflection) == canonical_form(m2, d2, allow_reflection)


# -- explicit isomorphisms -------------------------------------------


@dataclass(frozen=True)
class MapIsomorphism:
    darts: tuple[int, ...]
    reflecting: bool
    source: RotationMap = field(repr=False, compare=False)

    def vertex_permutation(self, target: Optional[RotationMap] = None) -> tuple[int, ...]:
        """The induced vertex map; ``target`` defaults to the source (automorphisms)."""
        target = target or self.source
        perm = [-1] * self.source.graph.n
        for x, y in enumerate(self.darts):
            perm[self.source.tail(x)] = target.tail(y)
        return tuple(perm)

    def compose(self, other: "MapIsomorphism") -> "MapIsomorphism":
        """``self`` after ``other``."""
        return MapIsomorphism(tuple(self.darts[y] for y in other.darts),
                              self.reflecting != other.reflecting, other.source)

    def inverse(self) -> "MapIsomorphism":
        inv = [0] * len(self.darts)
        for x, y in enumerate(self.darts):
            inv[y] = x
        return MapIsomorphism(tuple(inv), self.reflecting, self.source)


def map_isomorphisms(a: MapLike, b: MapLike, allow_reflection: bool = True,
                     limit: Optional[int] = None) -> list[MapIsomorphism]:
    """All isomorphisms from ``a`` onto ``b`` (decorations respected).

    Pins dart 0 of ``a`` to every dart of ``b`` in turn and propagates; a
    connected map admits at most one isomorphism per pinned pair.
    """
    m1, d1 = _split(a)
    m2, d2 = _split(b)
    if not m1.graph.is_connected():
        raise DomainError("map isomorphism search needs a connected map")
    n = m1.dart_count
    if n != m2.dart_count or m1.graph.n != m2.graph.n:
        return []
    if n == 0:
        return [MapIsomorphism((), False, m1)]
    t1, t2 = d1.tags(m1), d2.tags(m2)
    s1 = m1.sigma
    out = []
    for reflecting, s2 in ((False, m2.sigma), (True, m2.sigma_inv)):
        if reflecting and not allow_reflection:
            continue
        for target in range(n):
            f = [-1] * n
            used = [False] * n
            f[0] = target
            used[target] = True
            stack = [0]
            ok = True
            while stack and ok:
                x = stack.pop()
                for y, fy in ((s1[x], s2[f[x]]), (x ^ 1, f[x] ^ 1)):
                    if f[y] < 0:
                        if used[fy]:
                            ok = False
                            break
                        f[y] = fy
                        used[fy] = True
                        stack.append(y)
                    elif f[y] != fy:
                        ok = False
                        break
            if not ok or any(t1[x] != t2[f[x]] for x in range(n)):
                continue
            out.append(MapIsomorphism(tuple(f), reflecting, m1))
            if limit is not None and len(out) >= limit:
                return out
    return out


def symmetries(m: RotationMap, allow_reflection: bool = True,
               decoration: Optional[Decoration] = None) -> list[MapIsomorphism]:
    """The automorphism group of the (decorated) map."""
    return map_isomorphisms((m, decoration), (m, decoration), allow_reflection)


def decoration_orbits(m: RotationMap, decorations: Sequence[Decoration],
                      allow_reflection: bool = True) -> list[list[int]]:
    """Partition decoration indices into orbits of the map's symmetry group."""
    normed = [dec.normalized() for dec in decorations]
    index = {dec: i for i, dec in enumerate(normed)}
    perms = [iso.vertex_permutation() for iso in symmetries(m, allow_reflection)]
    seen = [False] * len(normed)
    orbits = []
    for i, dec in enumerate(normed):
        if seen[i]:
            continue
        orbit = set()
        for p in perms:
            j = index.get(dec.mapped(p))
            if j is None:
                raise DomainError(f"decoration {dec} is not closed under the symmetries")
            orbit.add(j)
        for j in orbit:
            seen[j] = True
        orbits.append(sorted(orbit))
    return orbits


def refined_invariants(m: RotationMap) -> dict:
    """Face signature plus the face-adjacency multigraph (one link per edge)."""
    face_of = m.face_of
    lengths = [len(f) for f in m.faces]
    links = []
    for k in range(m.graph.m):
        a, b = sorted((face_of[2 * k], face_of[2 * k + 1]))
        links.append((a, b))
    profile = sorted(tuple(sorted((lengths[a], lengths[b]))) for a, b in links)
    return {
        "signature": sorted(lengths),
        "face_lengths": lengths,
        "adjacency": sorted(links),
        "adjacency_profile": profile,
    }


# -- classification ---------------------------------------------------


@dataclass
class EmbeddingClass:
    representative: RotationMap
    decoration: Decoration
    canonical: bytes
    face_signature: tuple[int, ...]
    labelled_count: int = 1

    @property
    def canonical_hex(self) -> str:
        return self.canonical.hex()

    def to_json(self) -> dict:
        out = {
            "signature": list(self.face_signature),
            "labelled_count": self.labelled_count,
            "canonical": self.canonical_hex,
            "rotations": {str(v): list(r) for v, r in enumerate(self.representative.rotations)},
        }
        if self.decoration.kind != "none":
            out["decoration"] = {"kind": self.decoration.kind, "vertices": list(self.decoration.vertices)}
        return out


class ClassTable:
    """Canonical form -> class accumulator. Merging is associative and commutative.

    Every entry remembers the ordering key of its representative; the smallest
    key wins, so the outcome does not depend on how inputs were sharded.
    """

    def __init__(self, allow_reflection: bool = True):
        self.allow_reflection = allow_reflection
        self.entries: dict[bytes, list] = {}
        self.total = 0

    def add(self, m: RotationMap, d: Optional[Decoration] = None, key=None, weight: int = 1) -> bytes:
        """Record one input; ``weight`` counts it as that many labelled maps."""
        d = d or NO_DECORATION
        canon = canonical_form(m, d, self.allow_reflection)
        key = self.total if key is None else key
        self.total += weight
        entry = self.entries.get(canon)
        if entry is None:
            self.entries[canon] = [key, m, d, weight]
        else:
            entry[3] += weight
            if key < entry[0]:
                entry[0], entry[1], entry[2] = key, m, d
        return canon

    def merge(self, other: "ClassTable") -> "ClassTable":
        for canon, (key, m, d, count) in other.entries.items():
            entry = self.entries.get(canon)
            if entry is None:
                self.entries[canon] = [key, m, d, count]
            else:
                entry[3] += count
                if key < entry[0]:
                    entry[0], entry[1], entry[2] = key, m, d
        self.total += other.total
        return self

    def classes(self) -> list[EmbeddingClass]:
        out = []
        for canon in sorted(self.entries):
            _, m, d, count = self.entries[canon]
            out.append(EmbeddingClass(m, d, canon, m.signature(), count))
        return out


def classify(items: Iterable[MapLike], allow_reflection: bool = True) -> list[EmbeddingClass]:
    """Partition maps (optionally with decorations) into equivalence classes."""
    table = ClassTable(allow_reflection)
    for item in items:
        m, d = _split(item)
        table.add(m, d)
    return table.classes()
