"""Command-line front end.

    toratlas genus   --graph K33
    toratlas catalog --graph F14 --genus 1 --format json
    toratlas cases   --graph F11
    toratlas verify-paper --svg figures/
    toratlas render  map.json --svg out.svg

Exit status: 0 ok, 1 a verification check failed, 2 bad usage or input,
3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .classification import Decoration, canonical_form, decoration_orbits, symmetries
from .enumeration import (budget, decorations_of, enumerate_classes, enumerate_rotation_systems,
                          genus, genus_with_witness, map_genus, rotation_count, toroidal_classes)
from .errors import BudgetExceeded, CatalogError, DomainError, ParseError, ToratlasError
from .extension import (REPLAY_NAMES, extension_cases, insert_edge, insertion_sites, polygon_decomposition,
                        render_decomposition, replay_classification, setup, toroidal_h_maps)
from .graph import (CATALOG_NAMES, Graph, builtin, catalog, construct_f14, disjoint_union, four_cycles,
                    is_isomorphic, suppress_degree2)
from .maps import RotationMap, relabel

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

DELIM = "----"


# -- verification ------------------------------------------------------


@dataclass
class Check:
    id: str
    criterion: int
    expected: object
    observed: object
    passed: bool
    runtime: float

    def to_json(self) -> dict:
        return {"id": self.id, "criterion": self.criterion, "expected": self.expected,
                "observed": self.observed, "pass": self.passed, "runtime": round(self.runtime, 3)}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def criterion(self, k: int) -> list[Check]:
        return [c for c in self.checks if c.criterion == k]

    def to_json(self) -> dict:
        return {"version": __version__, "pass": self.passed, "checks": [c.to_json() for c in self.checks]}

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"{mark}  [{c.criterion}] {c.id}: expected {c.expected}, observed {c.observed}"
                         f" ({c.runtime:.2f}s)")
        bad = sum(not c.passed for c in self.checks)
        lines.append(f"{len(self.checks) - bad}/{len(self.checks)} checks passed")
        return "\n".join(lines)


def _sig_multiset(classes) -> list:
    return sorted(list(c.face_signature) for c in classes)


def _timed(report: VerificationReport, cid: str, criterion: int, expected,
           fn: Callable[[], object], limit: Optional[float] = None, compare=None) -> object:
    t0 = time.perf_counter()
    observed = fn()
    dt = time.perf_counter() - t0
    ok = compare(observed) if compare else observed == expected
    if limit is not None and dt > limit:
        ok = False
        observed = f"{observed} (took {dt:.1f}s > {limit}s)"
    report.checks.append(Check(cid, criterion, expected, observed, bool(ok), dt))
    return observed


def _k33_maps():
    classes = toroidal_classes(builtin("K33"))
    return {c.face_signature: c.representative for c in classes}


def _relabel_invariance(name: str, rounds: int = 100) -> bool:
    g = builtin(name)
    for i, c in enumerate(toroidal_classes(g)):
        m = c.representative
        key = canonical_form(m)
        rng = random.Random(f"{name}/{i}")  # fixed per class, so the check is reproducible
        for _ in range(rounds):
            perm = list(range(g.n))
            rng.shuffle(perm)
            if canonical_form(relabel(m, perm)) != key:
                return False
    return True


def _euler_ok(maps) -> bool:
    return all(sum(len(f) for f in m.faces) == 2 * m.graph.m for m in maps)


def run_verification(workers: int = 2, graphs: Optional[dict] = None) -> VerificationReport:
    """Run every acceptance check. ``graphs`` overrides catalog entries (used to
    confirm that a perturbed graph makes the report fail)."""
    graphs = graphs or {}

    def g(name):
        return graphs.get(name) or builtin(name)

    rep = VerificationReport()
    want = {"E42": 0, "F11": 2, "F12": 4, "F13": 2, "F14": 2, "G1": 2}
    cache = {}

    def classes(name):
        if name not in cache:
            cache[name] = toroidal_classes(g(name))
        return cache[name]

    # 1
    t0 = time.perf_counter()
    for name, n in want.items():
        _timed(rep, f"classes.{name}", 1, n, lambda: len(classes(name)))
    rep.checks.append(Check("classes.total_runtime", 1, "< 10 s", round(time.perf_counter() - t0, 2),
                            time.perf_counter() - t0 < 10, time.perf_counter() - t0))
    # 2
    _timed(rep, "baseline.K33", 2, 2, lambda: len(classes("K33")))
    _timed(rep, "baseline.K5", 2, 6, lambda: len(classes("K5")), limit=10)
    _timed(rep, "baseline.K5.systems", 2, 7776, lambda: rotation_count(g("K5")))
    # 3
    sigs = {
        "K33": [[4, 4, 10], [6, 6, 6]],
        "F11": [[4, 4, 4, 4, 10, 10]] * 2,
        "F12": [[4, 4, 6, 6, 8, 8], [4, 4, 7, 7, 7, 7], [5, 5, 5, 5, 8, 8], [5, 5, 5, 5, 8, 8]],
        "F13": [[5, 5, 5, 6, 6, 9], [5, 5, 5, 7, 7, 7]],
        "F14": [[5, 5, 5, 5, 6, 10], [5, 5, 6, 6, 6, 8]],
        "G1": [[4, 4, 6, 6, 10]] * 2,
    }
    for name, s in sigs.items():
        _timed(rep, f"signatures.{name}", 3, s, lambda: _sig_multiset(classes(name)))
    # 4
    for kind, n in (("directed-edge", 6), ("edge", 5), ("cycle4", 5)):
        _timed(rep, f"decorated.K33.{kind}", 4, n,
               lambda: len(enumerate_classes(g("K33"), 1, kind).classes), limit=5)
    # 5
    maps = _k33_maps()
    k = g("K33")
    directed = decorations_of(k, "directed-edge")
    cycles = [Decoration.cycle(c) for c in four_cycles(k)]

    def orbit_sizes(m, decs):
        return sorted(len(o) for o in decoration_orbits(m, decs))

    low, hom = maps.get((4, 4, 10)), maps.get((6, 6, 6))
    _timed(rep, "orbits.4-4-10.directed", 5, [2, 4, 4, 4, 4], lambda: orbit_sizes(low, directed))
    _timed(rep, "orbits.4-4-10.cycles", 5, [1, 2, 2, 4], lambda: orbit_sizes(low, cycles))
    _timed(rep, "orbits.6-6-6.directed", 5, [18], lambda: orbit_sizes(hom, directed))
    _timed(rep, "orbits.6-6-6.cycles", 5, [9], lambda: orbit_sizes(hom, cycles))
    _timed(rep, "symmetries.4-4-10", 5, 4, lambda: len(symmetries(low)))
    _timed(rep, "symmetries.6-6-6", 5, 36, lambda: len(symmetries(hom)))
    # 6
    for name in REPLAY_NAMES:
        _timed(rep, f"replay.{name}", 6, True,
               lambda: {c.canonical for c in replay_classification(name)} == {c.canonical for c in classes(name)})
    cases = extension_cases("F11")
    one_face = [c for c in cases if c.trail_faces == 1]
    _timed(rep, "extension.F11.single-face-case.completions", 6, 4,
           lambda: one_face[0].completions if len(one_face) == 1 else None)
    _timed(rep, "extension.F11.other-cases.completions", 6, [0, 0, 0, 0],
           lambda: [c.completions for c in cases if c.trail_faces != 1])
    # 7
    _timed(rep, "genus.K33", 7, 1, lambda: genus(g("K33")))
    _timed(rep, "genus.E42", 7, 2, lambda: genus(g("E42")))
    pairs = [("K33", "K5"), ("K5", "K5"), ("K33", "F11")]
    _timed(rep, "genus.additivity", 7, True,
           lambda: all(genus(disjoint_union(g(a), g(b))) == genus(g(a)) + genus(g(b)) for a, b in pairs))
    # 8
    _timed(rep, "euler.all-K33-maps", 8, True, lambda: _euler_ok(enumerate_rotation_systems(g("K33"))))
    _timed(rep, "euler.class-representatives", 8, True,
           lambda: _euler_ok(c.representative for name in want for c in classes(name)))
    _timed(rep, "insert_edge.faces-and-genus", 8, True, _insertions_ok)
    _timed(rep, "canonical.relabel-invariance", 8, True,
           lambda: all(_relabel_invariance(n) for n in ("K33", "K5", "F11", "F12", "F13", "F14", "G1")))
    _timed(rep, "workers.identical", 8, True,
           lambda: all([c.canonical for c in enumerate_classes(g(n), workers=1).classes]
                       == [c.canonical for c in enumerate_classes(g(n), workers=workers).classes]
                       for n in ("K33", "F12")))
    # 9
    for ng in catalog():
        gg = g(ng.name)
        _timed(rep, f"catalog.{ng.name}", 9, [], lambda: ng.expected.check(gg))
    _timed(rep, "catalog.F14-construction", 9, True, lambda: is_isomorphic(construct_f14(), g("F14")))
    _timed(rep, "catalog.F12-F13-aa'", 9, True, lambda: _aa_prime_check(g("F12"), g("F13")))
    return rep


def _insertions_ok() -> bool:
    """Every single insertion into every toroidal map of every H: one more
    face, same genus. Counted independently of insert_edge's own guard."""
    for name in REPLAY_NAMES:
        s = setup(name)
        for m in toroidal_h_maps(s):
            for item in s.missing:
                if m.graph.degree(item[0]) == 0 or m.graph.degree(item[-1]) == 0:
                    continue
                for site in insertion_sites(m, item[0], item[-1]):
                    c = insert_edge(m, site, via=item[1:-1], check=False)
                    if len(c.faces) != len(m.faces) + 1 or map_genus(c) != map_genus(m):
                        return False
    return True


def _aa_prime_check(f12: Graph, f13: Graph) -> bool:
    def drop(graph):
        a, b = graph.vertex_by_label("a"), graph.vertex_by_label("a'")
        return suppress_degree2(graph.without_edges([(a, b)]))
    return is_isomorphic(drop(f12), drop(f13))


# -- input -------------------------------------------------------------


def _load_graph(args) -> tuple[str, Graph]:
    if args.graph:
        return args.graph, builtin(args.graph)
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return path.stem, Graph.from_text(text)


def _load_map(path: str) -> RotationMap:
    try:
        raw = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if isinstance(data, dict) and "map" in data:
        data = data["map"]
    try:
        return RotationMap.from_json(data)
    except DomainError as exc:
        raise ParseError(str(exc)) from None


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _rot_text(m: RotationMap) -> str:
    g = m.graph
    return "\n".join(f"  {g.label(v)}: " + " ".join(g.label(w) for w in r) for v, r in enumerate(m.rotations))


# -- commands ----------------------------------------------------------


def cmd_genus(args) -> int:
    name, g = _load_graph(args)
    total, parts = genus_with_witness(g)
    payload = {
        "graph": name,
        "genus": total,
        "components": [{"vertices": comp, "genus": k, "witness": m.to_json()} for comp, k, m in parts],
    }
    lines = [f"{name}: genus {total}"]
    if len(parts) > 1:
        lines.append("  = " + " + ".join(str(k) for _, k, _ in parts) + " over components")
    for i, (comp, k, m) in enumerate(parts):
        lines.append(f"component {i} (vertices {comp}), genus {k}, witness rotations:")
        lines.append(_rot_text(m))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _write_svgs(classes, directory: str, stem: str) -> list[str]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, c in enumerate(classes, start=1):
        p = out / f"{stem}-class{i}.svg"
        sig = ",".join(map(str, c.face_signature))
        render_decomposition(c.representative, str(p), title=f"{stem} class {i} [{sig}]")
        files.append(str(p))
    return files


def cmd_catalog(args) -> int:
    name, g = _load_graph(args)
    if not g.is_connected():
        total, parts = genus_with_witness(g)
        if args.genus == 1 and total > 1:
            report = {"graph": name, "genus": total, "target_genus": args.genus, "classes": []}
            _emit(args, report, f"{name}: genus {total}, so 0 classes in genus {args.genus}")
            return EXIT_OK
        raise DomainError("catalog needs a connected graph (or one too big for the target surface)")
    rep = enumerate_classes(g, args.genus, args.decoration, workers=args.threads, name=name)
    payload = rep.to_json()
    for entry, c in zip(payload["classes"], rep.classes):
        entry["map"] = c.representative.to_json()
    if args.polygons:
        for entry, c in zip(payload["classes"], rep.classes):
            entry["polygons"] = [list(p.labels) for p in polygon_decomposition(c.representative)]
    lines = [f"{name}: {rep.total} rotation systems, genus histogram "
             + ", ".join(f"{k}:{v}" for k, v in sorted(rep.genus_histogram.items())),
             f"{len(rep.classes)} classes in genus {args.genus} (decoration: {args.decoration})"]
    for i, (entry, c) in enumerate(zip(payload["classes"], rep.classes), start=1):
        lines.append(f"class {i}: signature {list(c.face_signature)}, labelled {c.labelled_count}"
                     + (f", decoration {c.decoration}" if c.decoration.kind != "none" else ""))
        lines.append(_rot_text(c.representative))
        for poly in entry.get("polygons", []):
            lines.append("  polygon " + " ".join(poly))
    if args.svg:
        payload["figures"] = _write_svgs(rep.classes, args.svg, name)
        lines.append("figures: " + ", ".join(payload["figures"]))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_cases(args) -> int:
    if args.graph not in REPLAY_NAMES:
        raise CatalogError(f"no extension setup for {args.graph!r}; have {', '.join(REPLAY_NAMES)}")
    cases = extension_cases(args.graph)
    payload = {"graph": args.graph, "cases": [c.to_json() for c in cases]}
    lines = [f"{args.graph}: {len(cases)} inequivalent toroidal maps of H"]
    for c in cases:
        lines.append(f"case {c.index}: H signature {list(c.representative.signature())}, "
                     f"labelled {c.labelled}, trail on {c.trail_faces} face(s), "
                     f"completions {c.completions} (merged stepwise {c.reduced}), "
                     f"classes {[list(s) for s in c.signatures]}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = run_verification(workers=max(2, args.threads))
    payload = rep.to_json()
    if args.svg:
        figs = []
        for name in ("K33", "F11", "F12", "F13", "F14", "G1"):
            figs += _write_svgs(toroidal_classes(builtin(name)), args.svg, name)
        payload["figures"] = figs
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(rep.summary())
        print(DELIM)
        print(json.dumps(payload, sort_keys=True))
        print(DELIM)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_render(args) -> int:
    m = _load_map(args.map)
    if args.svg:
        render_decomposition(m, args.svg)
    else:
        render_decomposition(m, sys.stdout.buffer)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toratlas", description="Torus embeddings of small graphs.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--graph", choices=CATALOG_NAMES, help="built-in graph")
        src.add_argument("--file", help="graph text file ('n m' then one 'u v' per line)")

    def common(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--threads", type=int, default=1, help="worker processes")

    sp = sub.add_parser("genus", help="genus with a witness rotation system")
    graph_args(sp)
    common(sp)
    sp.set_defaults(func=cmd_genus)

    sp = sub.add_parser("catalog", help="inequivalent embeddings of a given genus")
    graph_args(sp)
    common(sp)
    sp.add_argument("--genus", type=int, default=1)
    sp.add_argument("--decoration", choices=("none", "edge", "directed-edge", "cycle4"), default="none")
    sp.add_argument("--polygons", action="store_true", help="include face polygon decompositions")
    sp.add_argument("--svg", metavar="DIR", help="write one decomposition SVG per class")
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("cases", help="extension case table over the fixed K33 subdivision")
    sp.add_argument("--graph", required=True, choices=REPLAY_NAMES)
    common(sp)
    sp.set_defaults(func=cmd_cases)

    sp = sub.add_parser("verify-paper", help="run the acceptance checks")
    common(sp)
    sp.add_argument("--svg", metavar="DIR", help="also write class decomposition figures here")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="polygon decomposition of a map as SVG")
    sp.add_argument("map", help="map JSON file, or - for stdin")
    sp.add_argument("--svg", metavar="PATH", help="output file (default stdout)")
    sp.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        budget()
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, CatalogError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ToratlasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
