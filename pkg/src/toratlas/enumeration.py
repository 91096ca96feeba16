"""Exhaustive rotation-system enumeration, genus, and classification drivers."""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .classification import ClassTable, Decoration, EmbeddingClass, NO_DECORATION
from .errors import BudgetExceeded, DomainError
from .graph import Graph, four_cycles
from .maps import RotationMap, component_maps, from_rotations, genus_of_map

DEFAULT_BUDGET = 10**8
DECORATION_KINDS = ("none", "edge", "directed-edge", "cycle4")


def budget() -> int:
    raw = os.environ.get("TORATLAS_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"TORATLAS_BUDGET must be an integer, got {raw!r}") from None


def rotation_count(g: Graph) -> int:
    return math.prod(math.factorial(max(d - 1, 0)) for d in g.degrees())


def _cyclic_orders(nbrs: Sequence[int]) -> list[tuple[int, ...]]:
    if len(nbrs) <= 2:
        return [tuple(nbrs)]
    first, rest = nbrs[0], nbrs[1:]
    return [(first,) + p for p in itertools.permutations(rest)]


def _pivot(g: Graph) -> Optional[int]:
    best = None
    for v in range(g.n):
        if g.degree(v) >= 3 and (best is None or g.degree(v) > g.degree(best)):
            best = v
    return best


def _choices(g: Graph, mirror_pruned: bool) -> list[list[tuple[int, ...]]]:
    choices = [_cyclic_orders(list(g.adj[v])) for v in range(g.n)]
    if mirror_pruned:
        p = _pivot(g)
        if p is not None:
            # keep one rotation from each {r, reversed r} pair at the pivot
            keep = []
            for r in choices[p]:
                rev = (r[0],) + tuple(reversed(r[1:]))
                if r <= rev:
                    keep.append(r)
            choices[p] = keep
    return choices


def _check_budget(g: Graph) -> None:
    total = rotation_count(g)
    limit = budget()
    if total > limit:
        raise BudgetExceeded(f"{total} rotation systems exceed the budget of {limit}")


def enumerate_rotation_systems(g: Graph, mirror_pruned: bool = False,
                               prefix: Sequence[int] = ()) -> Iterator[RotationMap]:
    """Yield every rotation system of ``g`` once, in a fixed order.

    With ``mirror_pruned`` only one of each mirror pair is produced (one
    rotation per reversal pair at a pivot vertex of degree >= 3); the omitted
    maps are the mirror images of the yielded ones. ``prefix`` pins the choice
    index at the first vertices, which is how the search is sharded.
    """
    _check_budget(g)
    choices = _choices(g, mirror_pruned)
    for i, c in enumerate(prefix):
        choices[i] = [choices[i][c]]
    for combo in itertools.product(*choices):
        yield RotationMap(g, tuple(_normalize(r) for r in combo))


def _normalize(r: tuple[int, ...]) -> tuple[int, ...]:
    if not r:
        return r
    i = r.index(min(r))
    return r[i:] + r[:i]


def _mirror_weight(g: Graph, mirror_pruned: bool) -> int:
    if not mirror_pruned:
        return 1
    p = _pivot(g)
    return 2 if p is not None else 1


# -- genus -------------------------------------------------------------


def _connected_genus(g: Graph) -> tuple[int, Optional[RotationMap]]:
    if g.m == 0:
        return 0, from_rotations(g, [[] for _ in range(g.n)])
    best, witness = None, None
    for m in enumerate_rotation_systems(g, mirror_pruned=True):
        k = genus_of_map(m)
        if best is None or k < best:
            best, witness = k, m
            if k == 0:
                break
    return best, witness


def genus_with_witness(g: Graph) -> tuple[int, list[tuple[list[int], int, RotationMap]]]:
    """Genus plus, per component, (vertex list, genus, minimal-genus map)."""
    parts = []
    for comp in g.components():
        sub = g.induced(comp)
        _check_budget(sub)
        k, m = _connected_genus(sub)
        parts.append((comp, k, m))
    return sum(k for _, k, _ in parts), parts


def genus(g: Graph) -> int:
    """Orientable genus; additive over connected components."""
    return genus_with_witness(g)[0]


def embeds_in_torus(g: Graph) -> bool:
    return genus(g) <= 1


def map_genus(m: RotationMap) -> int:
    """Genus of a possibly disconnected map, summed over components."""
    return sum(genus_of_map(sub) for _, sub in component_maps(m))


# -- classification drivers -------------------------------------------


def decorations_of(g: Graph, kind: str) -> list[Decoration]:
    if kind == "none":
        return [NO_DECORATION]
    if kind == "directed-edge":
        return [Decoration.directed_edge(a, b) for u, v in g.edges for a, b in ((u, v), (v, u))]
    if kind == "edge":
        return [Decoration.edge(u, v) for u, v in g.edges]
    if kind in ("cycle4", "cycle"):
        return [Decoration.cycle(c) for c in four_cycles(g)]
    raise DomainError(f"unknown decoration kind {kind!r}")


@dataclass
class ShardResult:
    table: ClassTable
    histogram: dict = field(default_factory=dict)
    examined: int = 0


def _run_shard(g: Graph, prefix: tuple, target_genus: int, kind: str,
               allow_reflection: bool, mirror_pruned: bool) -> ShardResult:
    table = ClassTable(allow_reflection)
    hist: dict[int, int] = {}
    weight = _mirror_weight(g, mirror_pruned)
    decorations = decorations_of(g, kind)
    examined = 0
    for idx, m in enumerate(enumerate_rotation_systems(g, mirror_pruned, prefix)):
        examined += 1
        k = genus_of_map(m)
        hist[k] = hist.get(k, 0) + weight
        if k != target_genus:
            continue
        for j, dec in enumerate(decorations):
            table.add(m, dec, key=(tuple(prefix), idx, j), weight=weight)
    return ShardResult(table, hist, examined)


def _shard_prefixes(g: Graph, workers: int, mirror_pruned: bool) -> list[tuple]:
    if workers <= 1 or g.n == 0:
        return [()]
    choices = _choices(g, mirror_pruned)
    prefixes: list[tuple] = [()]
    depth = 0
    while len(prefixes) < 4 * workers and depth < g.n:
        prefixes = [p + (c,) for p in prefixes for c in range(len(choices[depth]))]
        depth += 1
    return prefixes


@dataclass
class EnumerationReport:
    graph: str
    total: int
    genus_histogram: dict
    target_genus: int
    classes: list
    decoration: str = "none"
    examined: int = 0
    wall_time: float = 0.0
    components: Optional[list] = None

    def to_json(self) -> dict:
        out = {
            "graph": self.graph,
            "total": self.total,
            "genus_histogram": {str(k): v for k, v in sorted(self.genus_histogram.items())},
            "target_genus": self.target_genus,
            "decoration": self.decoration,
            "classes": [c.to_json() for c in self.classes],
        }
        return out


def enumerate_classes(g: Graph, target_genus: int = 1, kind: str = "none", allow_reflection: bool = True,
                      workers: int = 1, mirror_pruned: Optional[bool] = None,
                      name: str = "graph") -> EnumerationReport:
    """Classify every (rotation system, decoration) of genus ``target_genus``.

    ``workers > 1`` shards the search by the rotation choices at the first
    vertices and merges the per-shard tables; the result is identical for
    every worker count.
    """
    start = time.perf_counter()
    if not g.is_connected():
        raise DomainError("class enumeration needs a connected graph")
    _check_budget(g)
    if mirror_pruned is None:
        mirror_pruned = allow_reflection
    if mirror_pruned and not allow_reflection:
        raise DomainError("mirror pruning is only valid when reflections count as equivalences")
    prefixes = _shard_prefixes(g, workers, mirror_pruned)
    args = [(g, p, target_genus, kind, allow_reflection, mirror_pruned) for p in prefixes]
    if workers <= 1:
        results = [_run_shard(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_shard, *zip(*args)))
    table = ClassTable(allow_reflection)
    hist: dict[int, int] = {}
    examined = 0
    for r in results:
        table.merge(r.table)
        examined += r.examined
        for k, v in r.histogram.items():
            hist[k] = hist.get(k, 0) + v
    return EnumerationReport(name, rotation_count(g), hist, target_genus, table.classes(), kind,
                             examined, time.perf_counter() - start)


def toroidal_classes(g: Graph, workers: int = 1, allow_reflection: bool = True) -> list[EmbeddingClass]:
    """Inequivalent embeddings of ``g`` in the torus.

    A disconnected graph of genus above one has none; a disconnected graph
    that does fit cannot be embedded cellularly and is rejected.
    """
    if not g.is_connected():
        if genus(g) > 1:
            return []
        raise DomainError("toroidal_classes classifies cellular embeddings of connected graphs only")
    return enumerate_classes(g, 1, "none", allow_reflection, workers).classes


def decorated_classes(g: Graph, kind: str, workers: int = 1) -> list[EmbeddingClass]:
    return enumerate_classes(g, 1, kind, True, workers).classes
