"""Command-line interface: ``eqhitchin <command> --config run.json``.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence, TextIO

from .assembly import (
    ComponentModel,
    build_V,
    galois_check,
    index_series,
    integrand,
    load_components,
    root_data,
    series_report,
    validate_model,
)
from .combinatorics import (
    GeometryInput,
    components_report,
    count_weight_tuples,
    enumerate_weight_tuples,
    fixed_point_data,
    make_weight_tuple,
    seifert,
)
from .errors import EqHitchinError
from .oracles import IntersectionOracle
from .verification import SUITES, Check, run_suite

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigProblem(Exception):
    pass


@dataclass
class RunConfig:
    geometry: GeometryInput | None
    components: list[tuple[ComponentModel, IntersectionOracle]] = field(default_factory=list)
    depth: int = 4
    k: int = 1
    base_dir: Path = Path(".")
    raw: dict = field(default_factory=dict)

    @property
    def p(self) -> int | None:
        if self.geometry is not None:
            return self.geometry.p
        return self.raw.get("p")


def load_config(path: str | None, depth: int | None = None, k: int | None = None) -> RunConfig:
    if path is None:
        raise ConfigProblem("--config is required for this command")
    cfg_path = Path(path)
    if not cfg_path.is_file():
        raise ConfigProblem(f"config file {path} does not exist")
    try:
        raw = json.loads(cfg_path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigProblem(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigProblem("config must be a JSON object")
    base = cfg_path.parent
    geom = GeometryInput.from_json(raw["geometry"]) if "geometry" in raw else None
    p = geom.p if geom is not None else raw.get("p")
    dep = int(depth if depth is not None else raw.get("depth", 4))
    if dep < 1:
        raise ConfigProblem("depth must be >= 1")
    comps = []
    if raw.get("components"):
        if p is None:
            raise ConfigProblem("components need a geometry or a top-level p")
        for e in raw["components"]:
            m = e.get("model")
            if isinstance(m, str) and not (base / m).is_file() and not Path(m).is_file():
                raise ConfigProblem(f"model file {m} does not exist")
        comps = load_components(raw["components"], base, int(p))
    return RunConfig(geom, comps, dep, int(k if k is not None else raw.get("k", 1)), base, raw)


# output helpers

def _dump(obj: Any, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n")


def _table(rows: list[list[Any]], header: list[str], out: TextIO) -> None:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for n, r in enumerate(cells):
        out.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
        if n == 0:
            out.write("  ".join("-" * w for w in widths) + "\n")


def _require_geometry(cfg: RunConfig) -> GeometryInput:
    if cfg.geometry is None:
        raise ConfigProblem("config has no geometry")
    return cfg.geometry


# commands

def cmd_derive(args, cfg: RunConfig, out: TextIO) -> int:
    geom = _require_geometry(cfg)
    der = geom.derived()
    fpd = fixed_point_data(geom)
    report = {
        "p": geom.p,
        "genus": geom.genus,
        "quotient_genus": geom.quotient_genus,
        "monodromy_residue": geom.monodromy_residue(),
        "points": [{**q.to_json(), **der[q.label].to_json()} for q in geom.points],
        "fixed_point_data": fpd.to_json(),
    }
    if args.format == "json":
        _dump(report, out)
    else:
        out.write(f"p = {geom.p}, g = {geom.genus}, quotient genus = {geom.quotient_genus}\n")
        _table([[q.label, q.n, q.l, der[q.label].m, der[q.label].b, der[q.label].k_seif, der[q.label].sqrt_exp]
                for q in geom.points], ["point", "n", "alpha_exp", "m", "b", "k", "sqrt_exp"], out)
        _fpd_table(fpd, out)
    return EXIT_OK


def _fpd_table(fpd, out: TextIO) -> None:
    out.write(f"fixed point data: genus {fpd.genus}, l0 = {fpd.l0}\n")
    _table([[k[0], k[1], v] for k, v in fpd.counts], ["zeta^-n", "alpha_exp", "count"], out)


def _parse_tuple(geom: GeometryInput, text: str):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError as exc:
        raise ConfigProblem(f"--tuple must be comma separated integers, got {text!r}") from exc
    return make_weight_tuple(geom, vals)


def cmd_components(args, cfg: RunConfig, out: TextIO) -> int:
    geom = _require_geometry(cfg)
    if args.tuple:
        tuples = [_parse_tuple(geom, t) for t in args.tuple]
    else:
        tuples = [i for i, _ in enumerate_weight_tuples(geom)]
    if args.limit is not None:
        tuples = tuples[:args.limit]
    report = components_report(geom, tuples)
    if args.format == "json":
        # JSON lines: one weight tuple per line
        for entry in report:
            out.write(json.dumps(entry, sort_keys=False, ensure_ascii=False) + "\n")
    else:
        out.write(f"{len(report)} of {count_weight_tuples(geom)} weight tuples\n")
        rows = []
        for e in report:
            itxt = ",".join(str(v) for v in e["i"].values())
            if not e["components"]:
                rows.append([itxt, "-", "-", "-", "-", "-", "-"])
            for c in e["components"]:
                rows.append([itxt, c["c"], ",".join(map(str, c["j"].values())), c["l_j"],
                             ",".join(f"{v:+d}" for v in c["eps"].values()), ",".join(c["D_ij"]) or "{}",
                             "ok" if c["c_ij_ok"] else "FAIL"])
        _table(rows, ["i", "c", "j", "l_j", "eps", "D_ij", "c_ij"], out)
    return EXIT_OK


def cmd_seifert(args, cfg: RunConfig, out: TextIO) -> int:
    geom = _require_geometry(cfg)
    s = seifert(geom, rational=args.rational)
    fpd = fixed_point_data(geom)
    if args.format == "json":
        _dump({"seifert": s.to_json(), "fixed_point_data": fpd.to_json()}, out)
    else:
        b = s.to_json()["b"]
        pairs = ", ".join(f"({k}, {p})" for k, p in s.pairs)
        out.write(f"(b, g~, pairs) = ({b}, {s.genus}, [{pairs}])\n")
        _fpd_table(fpd, out)
    return EXIT_OK


def _verify_kwargs(args, cfg: RunConfig | None) -> dict:
    kw: dict = {}
    if args.p is not None:
        kw["cyclotomic"] = {"ps": (args.p,)}
        kw["inversion"] = {"ps": (args.p,)}
        kw["root"] = {"ps": (args.p,)}
        kw["galois"] = {"ps": (args.p,)}
        kw["iki-uku"] = {"ps": (args.p,)}
    if cfg is not None:
        if cfg.geometry is not None and cfg.geometry.points:
            g = cfg.geometry
            kw.setdefault("combinatorics", {})["triples"] = ((g.p, g.genus, g.r),)
            kw["assembly"] = {"geometries": (g,)}
            kw["determination"] = {"geometries": (g,)}
        elif cfg.geometry is not None:
            kw["combinatorics"] = {"triples": ()}
        if cfg.components:
            kw.setdefault("galois", {})["extra"] = [m for m, _ in cfg.components if not m.line_classes]
    return kw


def _model_checks(cfg: RunConfig) -> list[Check]:
    out = []
    for m, _o in cfg.components:
        if not m.line_classes and (cfg.geometry is None or not cfg.geometry.points):
            continue
        try:
            checks = validate_model(cfg.geometry, m)
        except EqHitchinError as exc:
            out.append(Check("models", f"model {m.name}", False, {"error": str(exc)}))
            continue
        bad = sorted(k for k, v in checks.items() if not v)
        out.append(Check("models", f"model {m.name}", not bad, {"failed": bad} if bad else {}))
    return out


def cmd_verify(args, cfg: RunConfig | None, out: TextIO) -> int:
    suite = args.suite or "all"
    if suite != "all" and suite not in SUITES:
        raise ConfigProblem(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    checks = run_suite(suite, **_verify_kwargs(args, cfg))
    if cfg is not None:
        checks += _model_checks(cfg)
    ok = all(c.ok for c in checks)
    if args.format == "json":
        _dump({"ok": ok, "checks": [c.to_json() for c in checks]}, out)
    else:
        for c in checks:
            out.write(f"{'PASS' if c.ok else 'FAIL'}  [{c.suite}] {c.name}\n")
            if not c.ok:
                out.write("      " + json.dumps(c.detail, sort_keys=True)[:2000] + "\n")
        out.write(f"{sum(c.ok for c in checks)}/{len(checks)} checks passed\n")
    return EXIT_OK if ok else EXIT_FAIL


def _require_components(cfg: RunConfig) -> None:
    if not cfg.components:
        raise ConfigProblem("config lists no components (models with oracles)")


def cmd_integrand(args, cfg: RunConfig, out: TextIO) -> int:
    _require_components(cfg)
    results = []
    for m, _o in cfg.components:
        V = build_V(cfg.geometry, m)
        results.append((m, root_data(m, V), integrand(m, V, cfg.k, cfg.depth)))
    if args.format == "json":
        _dump({"k": cfg.k, "depth": cfg.depth,
               "components": [{"model": m.name, "root_data": rd.to_json(), "integrand": s.to_json()}
                              for m, rd, s in results]}, out)
    else:
        for m, rd, s in results:
            out.write(f"[{m.name}] nu~ = {rd.nu}\n  {s}\n")
    return EXIT_OK


def cmd_index(args, cfg: RunConfig, out: TextIO) -> int:
    _require_components(cfg)
    s = index_series(cfg.components, cfg.geometry, cfg.k, cfg.depth, jobs=args.jobs)
    rep = series_report(s)
    if args.format == "json":
        _dump({"k": cfg.k, "depth": cfg.depth, **rep}, out)
    else:
        out.write(f"index series (k = {cfg.k}): {s}\n")
        out.write(f"constant term: {s.coefficient(0).const_coeff()}\n")
        out.write(f"pure rational: {'yes' if rep['pure'] else 'no'}\n")
    return EXIT_OK


def cmd_galois(args, cfg: RunConfig, out: TextIO) -> int:
    _require_components(cfg)
    if cfg.geometry is not None and cfg.geometry.points:
        raise ConfigProblem("the Galois check needs a geometry without fixed points")
    results = []
    for m, _o in cfg.components:
        rep = galois_check(m, cfg.k, cfg.depth)
        results.append((m, rep))
    ok = all(r.ok for _, r in results)
    if args.format == "json":
        _dump({"ok": ok, "models": [{"model": m.name, **r.to_json()} for m, r in results]}, out)
    else:
        for m, r in results:
            out.write(f"{'PASS' if r.ok else 'FAIL'}  {m.name}")
            out.write("\n" if r.ok else f"  (first mismatch at t^{r.first_mismatch})\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "derive": cmd_derive,
    "components": cmd_components,
    "seifert": cmd_seifert,
    "verify": cmd_verify,
    "integrand": cmd_integrand,
    "index": cmd_index,
    "galois-check": cmd_galois,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="eqhitchin", description="Exact localization data for equivariant Hitchin indices.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--depth", type=int, help="t^-1 truncation depth")
    ap.add_argument("--k", type=int, help="power of the determinant line bundle")
    ap.add_argument("--format", choices=("json", "table"), default="table")
    ap.add_argument("--suite", help="verification suite: " + ", ".join(SUITES + ("all",)))
    ap.add_argument("--tuple", action="append", help="weight tuple as CSV (repeatable)")
    ap.add_argument("--limit", type=int, help="maximum number of weight tuples to report")
    ap.add_argument("--p", type=int, help="prime for the identity suites")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for the index sum")
    ap.add_argument("--rational", action="store_true", help="Seifert b with rational reciprocals")
    return ap


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.depth is not None and args.depth < 1:
            raise ConfigProblem("--depth must be >= 1")
        if args.command == "verify" and args.config is None:
            cfg = None
        else:
            cfg = load_config(args.config, args.depth, args.k)
        return COMMANDS[args.command](args, cfg, out)
    except ConfigProblem as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except (EqHitchinError, KeyError, TypeError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
