"""Command line front end.

Every command reads a defining graph (JSON with ``vertices`` and ``edges``,
or ``fixture:NAME`` for a built-in graph), runs one verification or
construction and writes a deterministic JSON report. Exit status is 0 when
all checks pass, 1 on a verification failure and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import blowup as bl
from .census import census, check_collection
from .fixtures import FIXTURES
from .graph import (DefiningGraph, GraphError, central_clique, clique_counts, maximal_cliques,
                    twist_dominant)
from .isometry import cubical_isometries, trivial_h1_audit
from .metrics import (StraighteningError, TotalLabelOrder, free_face_check, random_allowable,
                      straighten, structure_from_dict, unit_structure, validate_allowable)
from .partitions import compatible_collections, enumerate_partitions, sing_and_max
from .tori import TorusError, all_maximal_tori, chain_tori, intersect_tori, torus_cover_check

COMMANDS = ("graph-info", "partitions", "collections", "blowup-build", "blowup-verify", "tori-verify",
            "metric-random", "metric-validate", "metric-straighten", "audit", "census")


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str
    collection: int = 0
    seed: int = 0
    t: list[float] = field(default_factory=lambda: [0.0, 0.25, 0.5, 0.75, 1.0])
    out: str | None = None
    format: str = "json"
    structure: str | None = None
    unit: bool = False

    def to_dict(self) -> dict:
        return {"command": self.command, "graph": self.graph, "collection": self.collection,
                "seed": self.seed, "t": list(self.t), "format": self.format,
                "structure": self.structure, "unit_metric": self.unit}


def load_graph(source: str) -> DefiningGraph:
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        if name not in FIXTURES:
            raise InputError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}")
        return FIXTURES[name]
    try:
        data = json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read graph {source}: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("vertices"), list) \
            or not isinstance(data.get("edges", []), list):
        raise InputError("graph JSON needs a 'vertices' list and an 'edges' list")
    try:
        return DefiningGraph.from_lists([str(v) for v in data["vertices"]], data.get("edges", []))
    except (GraphError, TypeError) as exc:
        raise InputError(f"malformed graph: {exc}") from exc


def _select(G: DefiningGraph, index: int):
    cols = compatible_collections(G)
    if not 0 <= index < len(cols):
        raise InputError(f"collection index {index} out of range (0..{len(cols) - 1})")
    return cols[index]


def _graph_dict(G: DefiningGraph) -> dict:
    return {"vertices": list(G.vertices), "edges": G.edge_list()}


def cmd_graph_info(cfg: RunConfig, G: DefiningGraph) -> tuple[dict, bool]:
    return {
        "graph": _graph_dict(G),
        "links": {v: G.sorted(G.link(v)) for v in G.vertices},
        "twist_dominant": [v for v in G.vertices if twist_dominant(G, v)],
        "maximal_cliques": [G.sorted(c) for c in maximal_cliques(G)],
        "center": G.sorted(central_clique(G)),
        "clique_counts": clique_counts(G),
        "salvetti_euler": bl.salvetti_euler(G),
    }, True


def cmd_partitions(cfg, G):
    parts = []
    for P in enumerate_partitions(G):
        sing, mx = sing_and_max(G, P)
        parts.append({**P.to_dict(G), "sing": G.sorted(sing), "max": G.sorted(mx), "text": str(P)})
    return {"count": len(parts), "partitions": parts}, True


def cmd_collections(cfg, G):
    parts = enumerate_partitions(G)
    cols = compatible_collections(G, parts)
    return {"partitions": len(parts), "count": len(cols),
            "collections": [[parts.index(P) for P in Pi] for Pi in cols]}, True


def cmd_blowup_build(cfg, G):
    B = bl.build_blowup(G, _select(G, cfg.collection))
    if cfg.format == "dot":
        return bl.to_dot(B), True
    return bl.complex_to_dict(B), True


def cmd_blowup_verify(cfg, G):
    Pi = _select(G, cfg.collection)
    rep = check_collection(G, Pi, cfg.collection)
    return rep.to_dict(), not rep.violations


def cmd_tori_verify(cfg, G):
    B = bl.build_blowup(G, _select(G, cfg.collection))
    violations = []
    try:
        tori = all_maximal_tori(B)
    except TorusError as exc:
        return {"violations": [str(exc)]}, False
    ok, _ = torus_cover_check(B, tori)
    if not ok:
        violations.append("maximal cubes outside every maximal torus")
    pairs = []
    for i, T1 in enumerate(tori):
        for T2 in tori[i + 1:]:
            entry = {"tori": [list(T1.clique), list(T2.clique)]}
            try:
                I = intersect_tori(B, T1, T2)
                entry.update(f_vector=list(I.f_vector()), K_f_vector=list(I.K_f_vector()),
                             common=list(I.clique), K_acyclic=I.K_acyclic)
                if not I.K_acyclic:
                    violations.append(f"K not acyclic for {T1.clique}, {T2.clique}")
            except TorusError as exc:
                entry["intersection"] = str(exc)
            try:
                entry["chain"] = [list(T.clique) for T in chain_tori(B, T1, T2, tori)]
            except TorusError as exc:
                violations.append(str(exc))
            pairs.append(entry)
    return {
        "tori": [{"clique": list(T.clique), "f_vector": list(T.f_vector()),
                  "cycle_lengths": list(T.cycle_lengths())} for T in tori],
        "cover": ok,
        "pairs": pairs,
        "violations": violations,
    }, not violations


def _structure(cfg, B):
    order = TotalLabelOrder.default(B)
    if cfg.structure:
        try:
            data = json.loads(Path(cfg.structure).read_text())
            return order, structure_from_dict(B, data.get("structure", data))
        except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
            raise InputError(f"cannot read structure {cfg.structure}: {exc}") from exc
    if cfg.unit:
        return order, unit_structure(B, order)
    return order, random_allowable(B, order, cfg.seed)


def cmd_metric_random(cfg, G):
    B = bl.build_blowup(G, _select(G, cfg.collection))
    order, S = _structure(cfg, B)
    ok, reasons = validate_allowable(B, order, S)
    return {"structure": S.to_dict(B), "allowable": ok, "reasons": reasons}, ok


def cmd_metric_validate(cfg, G):
    B = bl.build_blowup(G, _select(G, cfg.collection))
    order, S = _structure(cfg, B)
    ok, reasons = validate_allowable(B, S.order, S)
    return {"allowable": ok, "reasons": reasons, "free_faces": not free_face_check(B, S)}, ok


def cmd_metric_straighten(cfg, G):
    B = bl.build_blowup(G, _select(G, cfg.collection))
    order, S = _structure(cfg, B)
    steps, good = [], True
    for t in cfg.t:
        try:
            St = straighten(B, S, t)
        except StraighteningError as exc:
            steps.append({"t": t, "error": str(exc)})
            good = False
            continue
        drift = max((abs(float(np.linalg.norm(cm.matrix()[:, j])) - St.lengths[A])
                     for cm in St.cubes.values() for j, A in enumerate(cm.labels)), default=0.0)
        ok, reasons = validate_allowable(B, St.order, St)
        good &= ok and drift <= 1e-9 and (t < 1 or St.is_rectilinear())
        steps.append({"t": t, "allowable": ok, "reasons": reasons, "max_length_drift": drift,
                      "rectilinear": St.is_rectilinear()})
    return {"steps": steps}, good


def cmd_audit(cfg, G):
    B = bl.build_blowup(G, _select(G, cfg.collection))
    order, S = _structure(cfg, B)
    isos = cubical_isometries(B, S)
    rep = trivial_h1_audit(B, S, isos)
    rep["h1_images"] = [[list(r) for r in M] for M in rep["h1_images"]]
    return rep, rep["passed"]


def cmd_census(cfg, G):
    rep = census(G)
    return rep, rep["passed"]


HANDLERS = {
    "graph-info": cmd_graph_info, "partitions": cmd_partitions, "collections": cmd_collections,
    "blowup-build": cmd_blowup_build, "blowup-verify": cmd_blowup_verify, "tori-verify": cmd_tori_verify,
    "metric-random": cmd_metric_random, "metric-validate": cmd_metric_validate,
    "metric-straighten": cmd_metric_straighten, "audit": cmd_audit, "census": cmd_census,
}


def run_command(cfg: RunConfig) -> tuple[int, dict | str]:
    try:
        G = load_graph(cfg.graph)
        body, ok = HANDLERS[cfg.command](cfg, G)
    except InputError as exc:
        return 2, {"config": cfg.to_dict(), "error": str(exc)}
    if isinstance(body, str):
        return (0 if ok else 1), body
    return (0 if ok else 1), {"config": cfg.to_dict(), "passed": ok, **body}


def render(report: dict | str) -> str:
    if isinstance(report, str):
        return report
    return json.dumps(report, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="raagcx", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--graph", required=True, help="graph JSON file or fixture:NAME")
    p.add_argument("--collection", type=int, default=0, help="index into the compatible collections")
    p.add_argument("--seed", type=int, default=0, help="seed for random allowable structures")
    p.add_argument("--t", default="0,0.25,0.5,0.75,1", help="comma separated straightening times")
    p.add_argument("--out", help="write the report here and print a summary")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--structure", help="structure JSON (as written by metric-random)")
    p.add_argument("--unit", action="store_true", help="use the unit rectilinear metric")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        ts = [float(x) for x in args.t.split(",") if x.strip()]
    except ValueError:
        print(f"error: bad --t value {args.t!r}", file=sys.stderr)
        return 2
    cfg = RunConfig(args.command, args.graph, args.collection, args.seed, ts, args.out, args.format,
                    args.structure, args.unit)
    status, report = run_command(cfg)
    text = render(report)
    if cfg.out:
        Path(cfg.out).write_text(text)
        print(f"{cfg.command}: {['pass', 'fail', 'input error'][status]} -> {cfg.out}")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
