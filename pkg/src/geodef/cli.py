"""The ``geodef`` command line.

Exit codes: 0 success, 1 a verification check failed, 2 bad input (missing
file, parse error, mismatched fields), 3 a capacity bound was exceeded,
4 the result carries the two-element-field caveat.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from dataclasses import field as _field
from pathlib import Path

from .affine import MAX_AFFINE, affaut, affine_from_perm
from .autgrp import MAX_POINTS, brute_force_aut, decompose
from .checks import DEFAULT_SEED, DEVIATIONS, SUITE_NAMES, SUITES, run_suite
from .defin import compare_concepts, hasse, theorem1_check
from .errors import CapacityExceeded, GeodefError
from .geom import materialize
from .io import data_path, load_geo, relation_symbol

SCHEMA = "geodef.report/1"

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAPACITY, EXIT_CAVEAT = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    field: str | None = None
    dim: int | None = None
    geometries: list = _field(default_factory=list)
    relation: str | None = None
    out: str | None = None
    format: str = "text"
    seed: int = DEFAULT_SEED
    capacity: int | None = None
    only: list = _field(default_factory=list)

    def __post_init__(self):
        if self.dim is not None and self.dim < 2:
            raise GeodefError(f"dimension must be at least 2, got {self.dim}")


class InputError(GeodefError):
    pass


def _resolve_path(name: str) -> Path:
    path = Path(name)
    if path.exists():
        return path
    shipped = data_path("geometries") / path.name
    if shipped.exists():
        return shipped
    raise InputError(f"no such file: {name}")


def _load(cfg: RunConfig, name: str):
    return load_geo(_resolve_path(name)).build(cfg.field, cfg.dim)


def _one_geometry(cfg: RunConfig):
    if len(cfg.geometries) != 1:
        raise InputError("exactly one --geometry is required")
    return _load(cfg, cfg.geometries[0])


def _perm_list(p):
    return [int(x) for x in p]


# -- commands ---------------------------------------------------------------


def cmd_aut(cfg: RunConfig):
    G = _one_geometry(cfg)
    group = brute_force_aut(G, cfg.capacity or MAX_POINTS)
    table = []
    note = None
    try:
        for alpha in group:
            A, phi = decompose(alpha, G)
            table.append({"map": _perm_list(alpha), "affine": A.encode(), "frobenius": phi.exponent})
    except GeodefError as exc:
        table, note = [], f"no decomposition: {exc}"
    report = {
        "geometry": G.names,
        "field": G.field.spec(),
        "dim": G.d,
        "size": len(group),
        "elements": [_perm_list(p) for p in group],
        "decomposition": table,
        "decomposition_note": note,
    }
    lines = [f"|Aut| = {len(group)}"]
    if table:
        counts = {}
        for row in table:
            counts[row["frobenius"]] = counts.get(row["frobenius"], 0) + 1
        lines += [f"  Frobenius exponent {e}: {c} maps" for e, c in sorted(counts.items())]
    elif note:
        lines.append(f"  {note}")
    return report, "\n".join(lines) + "\n", EXIT_OK


def cmd_affaut(cfg: RunConfig):
    G = _one_geometry(cfg)
    group = affaut(G, cfg.capacity or MAX_AFFINE)
    maps = [affine_from_perm(G.space, p).encode() for p in group]
    report = {
        "geometry": G.names,
        "field": G.field.spec(),
        "dim": G.d,
        "size": len(group),
        "elements": [_perm_list(p) for p in group],
        "affine": maps,
    }
    # one map per line as "L;t", entries in base-q digit encoding
    lines = [f"|AffAut| = {len(group)}"] + maps
    return report, "\n".join(lines) + "\n", EXIT_OK


def _relation_text(cfg: RunConfig) -> str:
    if not cfg.relation:
        raise InputError("--relation is required")
    path = Path(cfg.relation)
    if path.suffix in (".fol", ".rel", ".txt"):
        if not path.exists():
            raise InputError(f"no such file: {cfg.relation}")
        return " ".join(line.split("#", 1)[0] for line in path.read_text().splitlines()).strip()
    return cfg.relation


def cmd_definable(cfg: RunConfig):
    G = _one_geometry(cfg)
    text = _relation_text(cfg)
    R = materialize(relation_symbol(text, G.d), G.field, G.d)
    rep = theorem1_check(R, G, name=text)
    out = rep.as_dict()
    lines = [
        f"relation: {text}",
        f"  (i)   definable in G:                    {rep.definable}",
        f"  (ii)  field-definable and Aut-closed:    {rep.field_aut}",
        f"  (iii) field-definable and AffAut-closed: {rep.field_affaut}",
        f"  consistent: {rep.consistent}",
    ]
    if rep.caveat:
        lines.append(f"  caveat: {rep.caveat}")
    code = EXIT_CAVEAT if rep.caveat else (EXIT_OK if rep.consistent else EXIT_FAILED)
    return out, "\n".join(lines) + "\n", code


def cmd_compare(cfg: RunConfig):
    if len(cfg.geometries) != 2:
        raise InputError("compare needs two --geometry files")
    G, H = (_load(cfg, g) for g in cfg.geometries)
    v = compare_concepts(G, H)
    out = v.as_dict()
    out["left"], out["right"] = cfg.geometries
    lines = [f"Cn(left) vs Cn(right): {v.verdict.symbol}"]
    if v.left_witness:
        lines.append(f"  witness in left: {v.left_witness}")
    if v.right_witness:
        lines.append(f"  witness in right: {v.right_witness}")
    return out, "\n".join(lines) + "\n", EXIT_OK


def cmd_hasse(cfg: RunConfig):
    if not cfg.geometries:
        raise InputError("hasse needs at least one --geometry")
    named, seen = [], {}
    for g in cfg.geometries:
        stem = Path(g).stem
        seen[stem] = seen.get(stem, 0) + 1
        name = stem if seen[stem] == 1 else f"{stem}#{seen[stem]}"
        named.append((name, _load(cfg, g)))
    h = hasse(named)
    out = {"nodes": h.nodes, "edges": [list(e) for e in h.edges], "classes": h.classes}
    return out, h.to_dot(), EXIT_OK


def cmd_verify(cfg: RunConfig):
    only = [name for item in cfg.only for name in item.split(",") if name]
    unknown = sorted(set(only) - set(SUITE_NAMES))
    if unknown:
        raise InputError(f"unknown check {unknown[0]!r}; choose from {', '.join(SUITE_NAMES)}")
    results = []
    lines = []
    for suite in SUITES:
        if only and suite.name not in only:
            continue
        r = run_suite(suite, cfg.seed)
        results.append(r.as_dict())
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {suite.number:2d} {suite.name}: {suite.title}")
    failed = sum(not r["passed"] for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    lines += [f"deviation: {d}" for d in DEVIATIONS]
    report = {"seed": cfg.seed, "checks": results, "passed": failed == 0, "deviations": list(DEVIATIONS)}
    return report, "\n".join(lines) + "\n", EXIT_OK if failed == 0 else EXIT_FAILED


COMMANDS = {
    "aut": cmd_aut,
    "affaut": cmd_affaut,
    "definable": cmd_definable,
    "compare": cmd_compare,
    "hasse": cmd_hasse,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geodef", description="Definability in finite coordinate geometries.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="field spec such as gf(5) or gf(2^2)")
    common.add_argument("--dim", type=int, help="dimension d >= 2")
    common.add_argument("--geometry", action="append", default=[], help=".geo file (repeatable)")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("text", "json", "dot"), default=None)
    common.add_argument("--capacity", type=int, help="enumeration bound (points for aut, affine maps for affaut)")
    helps = {
        "aut": "full automorphism group by backtracking",
        "affaut": "affine automorphisms",
        "definable": "three-way definability check for one relation",
        "compare": "compare the concept sets of two geometries",
        "hasse": "Hasse diagram of concept sets (DOT)",
        "verify": "run the built-in verification suites",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text)
        if name == "definable":
            p.add_argument("--relation", help="'formula : arity', a macro such as @lambda, or a file")
        if name == "verify":
            p.add_argument("--only", action="append", default=[], help=f"one of: {', '.join(SUITE_NAMES)}")
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return parser


def _render(fmt: str, command: str, report: dict, text: str) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, "command": command, **report}, indent=2, sort_keys=True) + "\n"
    return text


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fmt = args.format or ("dot" if args.command == "hasse" else "text")
    try:
        cfg = RunConfig(
            command=args.command,
            field=args.field,
            dim=args.dim,
            geometries=args.geometry,
            relation=getattr(args, "relation", None),
            out=args.out,
            format=fmt,
            seed=getattr(args, "seed", DEFAULT_SEED),
            capacity=args.capacity,
            only=getattr(args, "only", []),
        )
        if fmt == "dot" and cfg.command != "hasse":
            raise InputError("dot output is only available for hasse")
        report, text, code = COMMANDS[cfg.command](cfg)
    except CapacityExceeded as exc:
        print(f"geodef: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (GeodefError, OSError) as exc:
        print(f"geodef: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rendered = _render(fmt, cfg.command, report, text)
    if cfg.out:
        Path(cfg.out).write_text(rendered)
    else:
        sys.stdout.write(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
