"""Rotation systems as combinatorial maps on oriented surfaces.

Darts come from the sorted edge list: edge ``k = (u, v)`` with ``u < v``
gives dart ``2k`` leaving ``u`` and dart ``2k + 1`` leaving ``v``, so the
edge involution is ``d ^ 1``. The vertex rotation ``sigma`` sends a dart to
the next dart counterclockwise around its tail. Faces are the cycles of
``phi = sigma o alpha``, i.e. ``phi(d) = sigma[d ^ 1]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence, Union

from .errors import DomainError, ParseError
from .graph import Graph

Rotations = Union[Mapping[int, Sequence[int]], Sequence[Sequence[int]]]


def _normalize_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    if not seq:
        return ()
    i = seq.index(min(seq))
    return tuple(seq[i:]) + tuple(seq[:i])


@dataclass(frozen=True)
class FaceWalk:
    darts: tuple[int, ...]

    def __len__(self):
        return len(self.darts)

    @property
    def length(self) -> int:
        return len(self.darts)


@dataclass(frozen=True)
class RotationMap:
    graph: Graph
    rotations: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.graph
        if len(self.rotations) != g.n:
            raise DomainError("need one rotation per vertex")
        for v, rot in enumerate(self.rotations):
            if len(rot) != len(set(rot)) or set(rot) != set(g.adj[v]):
                raise DomainError(f"rotation at vertex {v} is not a cyclic order of its neighbours")
            if rot != _normalize_cycle(rot):
                raise DomainError("rotations must be normalized; use from_rotations")

    # -- darts ---------------------------------------------------------

    @property
    def dart_count(self) -> int:
        return 2 * self.graph.m

    @cached_property
    def _dart_index(self) -> dict:
        idx = {}
        for k, (u, v) in enumerate(self.graph.edges):
            idx[(u, v)] = 2 * k
            idx[(v, u)] = 2 * k + 1
        return idx

    def dart(self, tail: int, head: int) -> int:
        try:
            return self._dart_index[(tail, head)]
        except KeyError:
            raise DomainError(f"({tail}, {head}) is not an edge") from None

    def tail(self, d: int) -> int:
        u, v = self.graph.edges[d >> 1]
        return v if d & 1 else u

    def head(self, d: int) -> int:
        return self.tail(d ^ 1)

    @cached_property
    def tails(self) -> tuple[int, ...]:
        return tuple(self.tail(d) for d in range(self.dart_count))

    @cached_property
    def sigma(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for v, rot in enumerate(self.rotations):
            k = len(rot)
            for i, w in enumerate(rot):
                out[self.dart(v, w)] = self.dart(v, rot[(i + 1) % k])
        return tuple(out)

    @cached_property
    def sigma_inv(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for d, e in enumerate(self.sigma):
            out[e] = d
        return tuple(out)

    @cached_property
    def alpha(self) -> tuple[int, ...]:
        return tuple(d ^ 1 for d in range(self.dart_count))

    @cached_property
    def phi(self) -> tuple[int, ...]:
        s = self.sigma
        return tuple(s[d ^ 1] for d in range(self.dart_count))

    # -- faces and genus ----------------------------------------------

    @cached_property
    def faces(self) -> tuple[FaceWalk, ...]:
        phi = self.phi
        seen = [False] * self.dart_count
        out = []
        for d in range(self.dart_count):
            if seen[d]:
                continue
            walk = []
            x = d
            while not seen[x]:
                seen[x] = True
                walk.append(x)
                x = phi[x]
            out.append(FaceWalk(tuple(walk)))
        return tuple(out)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        out = [0] * self.dart_count
        for i, f in enumerate(self.faces):
            for d in f.darts:
                out[d] = i
        return tuple(out)

    def face_vertices(self, face: FaceWalk) -> list[int]:
        return [self.tail(d) for d in face.darts]

    def signature(self) -> tuple[int, ...]:
        return tuple(sorted(len(f) for f in self.faces))

    def face_count(self) -> int:
        """Number of faces, counting one face for every isolated vertex."""
        isolated = sum(1 for v in range(self.graph.n) if not self.rotations[v])
        return len(self.faces) + isolated

    def euler_characteristic(self) -> int:
        return self.graph.n - self.graph.m + self.face_count()

    def rotations_dict(self) -> dict[int, list[int]]:
        return {v: list(r) for v, r in enumerate(self.rotations)}

    # -- JSON ----------------------------------------------------------

    def to_json(self) -> dict:
        g = self.graph
        graph = {"n": g.n, "edges": [list(e) for e in g.edges]}
        if g.labels is not None:
            graph["labels"] = list(g.labels)
        return {"graph": graph, "rotations": {str(v): list(r) for v, r in enumerate(self.rotations)}}

    @classmethod
    def from_json(cls, data: dict) -> "RotationMap":
        try:
            gd = data["graph"]
            g = Graph.from_edges(int(gd["n"]), gd["edges"], gd.get("labels"))
            rots = {int(k): [int(x) for x in v] for k, v in data["rotations"].items()}
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed map JSON: {exc}") from None
        return from_rotations(g, rots)


def from_rotations(g: Graph, rotations: Rotations) -> RotationMap:
    """Build a map from per-vertex cyclic neighbour orders.

    ``rotations`` is a mapping or sequence indexed by vertex. Vertices of
    degree 0 may be omitted from a mapping.
    """
    rots = []
    for v in range(g.n):
        if isinstance(rotations, Mapping):
            rot = rotations.get(v, rotations.get(str(v), ()))
        else:
            rot = rotations[v]
        rot = [int(x) for x in rot]
        if len(rot) != len(set(rot)) or set(rot) != set(g.adj[v]):
            raise DomainError(f"rotation at vertex {v} must list exactly its neighbours {list(g.adj[v])}")
        rots.append(_normalize_cycle(rot))
    return RotationMap(g, tuple(rots))


def rotations_of(m: RotationMap) -> dict[int, list[int]]:
    return m.rotations_dict()


def face_orbits(m: RotationMap) -> list[FaceWalk]:
    return list(m.faces)


def genus_of_map(m: RotationMap) -> int:
    """Genus of the closed orientable surface the map is cellularly embedded in."""
    if not m.graph.is_connected():
        raise DomainError("genus_of_map needs a connected graph")
    if m.graph.n == 0:
        return 0
    chi = m.euler_characteristic()
    return (2 - chi) // 2


def mirror(m: RotationMap) -> RotationMap:
    """The same map seen from the other side of the surface."""
    return from_rotations(m.graph, [list(reversed(r)) for r in m.rotations])


def relabel(m: RotationMap, perm: Sequence[int]) -> RotationMap:
    """Transport the map along the vertex bijection ``v -> perm[v]``."""
    g2 = m.graph.relabel(perm)
    rots: list = [None] * m.graph.n
    for v, rot in enumerate(m.rotations):
        rots[perm[v]] = [perm[w] for w in rot]
    return from_rotations(g2, rots)


def submap(m: RotationMap, h: Graph) -> RotationMap:
    """Restrict the rotations to the edges of a spanning subgraph ``h``."""
    if h.n != m.graph.n or any(not m.graph.has_edge(u, v) for u, v in h.edges):
        raise DomainError("submap needs a subgraph on the same vertex set")
    rots = [[w for w in rot if h.has_edge(v, w)] for v, rot in enumerate(m.rotations)]
    return from_rotations(h, rots)


def component_maps(m: RotationMap) -> list[tuple[list[int], RotationMap]]:
    """Split a map into one map per connected component of its graph."""
    out = []
    for comp in m.graph.components():
        index = {v: i for i, v in enumerate(comp)}
        sub = m.graph.induced(comp)
        rots = [[index[w] for w in m.rotations[v]] for v in comp]
        out.append((comp, from_rotations(sub, rots)))
    return out
