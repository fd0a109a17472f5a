"""Command-line front end: ``mgcolor {generate,solve,exact,compare,sweep,verify}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .floor_division import build_scheme, verify_scheme
from .geometry import ConnectionModel, GeneratorConfig
from .instances import ALGORITHMS, Instance, make_instance, run_algorithm
from .io import (InstanceFormatError, load_coloring, load_instance, save_coloring,
                 save_instance, save_json)
from .matrix_graph import is_proper, is_proper_on_spatial, reuse_ratio, validity_check
from .oracle import OracleTooLarge, exact_mgc
from .solver import SolveConfig, solve_mgc
from .sweep import AXES, ExperimentSpec, SweepPoint, parse_values, run_sweep, summarize, write_csv

EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2

# slack for the approximation certificate
CERT_TOL = 1e-12


def _instance_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("instance")
    g.add_argument("--graph", type=Path, help="instance directory written by `generate`")
    g.add_argument("--m", type=int, default=10, help="rows of the cell grid")
    g.add_argument("--n", type=int, default=50, help="columns of the cell grid")
    g.add_argument("--lambda", dest="lam", type=float, default=1.6, help="point density")
    g.add_argument("--radius", type=float, default=0.5, help="boolean model radius r (links within 2r)")
    g.add_argument("--cell-size", type=float, default=1.0)
    g.add_argument("--edge-density", type=float, default=0.6)
    g.add_argument("--pf", type=float, default=1.0, help="probability a color weight is 1")
    g.add_argument("--colors", type=int, default=6)
    g.add_argument("--seed", type=int, default=0)


def _solve_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--floor-height", type=int, default=3)
    p.add_argument("--exact-mode", action="store_true", help="solve every color exactly")
    p.add_argument("--workers", type=int, default=1)


def _config(ns: argparse.Namespace) -> GeneratorConfig:
    return GeneratorConfig.for_grid(ns.m, ns.n, ns.cell_size, lam=ns.lam,
                                    model=ConnectionModel.boolean(ns.radius),
                                    edge_density=ns.edge_density, colors=ns.colors,
                                    p_f=ns.pf, seed=ns.seed)


def _instance(ns: argparse.Namespace) -> Instance:
    if ns.graph is not None:
        return load_instance(ns.graph)
    return make_instance(_config(ns))


def cmd_generate(ns: argparse.Namespace) -> int:
    inst = _instance(ns)
    out = save_instance(ns.out, inst)
    print(json.dumps({"out": str(out), "points": inst.spatial.n_points,
                      "edges": len(inst.spatial.edges), "dropped": len(inst.dropped),
                      "M": inst.graph.M, "N": inst.graph.N}))
    return 0


def cmd_solve(ns: argparse.Namespace) -> int:
    inst = _instance(ns)
    coloring, report = solve_mgc(inst.graph, inst.weights, inst.colors,
                                 SolveConfig(L=ns.floor_height, exact_mode=ns.exact_mode,
                                             workers=ns.workers))
    final = validity_check(inst.graph, coloring, inst.dropped, inst.weights)
    summary = report.to_dict()
    summary["fbar_after_validity_check"] = reuse_ratio(inst.graph, final, inst.weights, inst.colors)
    if ns.out is not None:
        ns.out.mkdir(parents=True, exist_ok=True)
        if ns.graph is None:
            save_instance(ns.out / "instance", inst)
        save_coloring(ns.out / "coloring.json", inst.graph, final)
        save_coloring(ns.out / "coloring_matrix.json", inst.graph, coloring)
        save_json(ns.out / "report.json", summary)
    print(json.dumps({"fbar": summary["fbar"], "fbar_after_validity_check":
                      summary["fbar_after_validity_check"], "guarantee": report.guarantee,
                      "transitions": report.transitions, "max_catalog": report.max_catalog}))
    return 0


def cmd_exact(ns: argparse.Namespace) -> int:
    inst = _instance(ns)
    try:
        res = exact_mgc(inst.graph, inst.weights, inst.colors)
    except OracleTooLarge as exc:
        print(f"exact: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if ns.out is not None:
        ns.out.mkdir(parents=True, exist_ok=True)
        save_coloring(ns.out / "coloring_exact.json", inst.graph, res.coloring)
    print(json.dumps({"fbar_m": res.value, "nodes": res.nodes, "methods": list(res.methods)}))
    return 0


def _algorithms(values: list[str] | None, default: tuple[str, ...]) -> tuple[str, ...]:
    if not values:
        return default
    out = []
    for v in values:
        out.extend(x for x in v.split(",") if x)
    for a in out:
        if a not in ALGORITHMS:
            raise argparse.ArgumentTypeError(f"unknown algorithm {a!r}")
    return tuple(out)


def cmd_compare(ns: argparse.Namespace) -> int:
    algs = _algorithms(ns.algorithm, ("mgc", "greedy", "sfr"))
    inst = _instance(ns)
    rows = {}
    for alg in algs:
        try:
            run = run_algorithm(inst, alg, L=ns.floor_height, exact_mode=ns.exact_mode)
        except OracleTooLarge as exc:
            print(f"{alg}: {exc}", file=sys.stderr)
            return EXIT_BAD_INPUT
        rows[alg] = {"fbar": run.fbar, "guarantee": run.guarantee, "wall_ms": round(run.wall_ms, 3)}
        if ns.out is not None and ns.save_colorings:
            ns.out.mkdir(parents=True, exist_ok=True)
            save_coloring(ns.out / f"coloring_{alg}.json", inst.graph, run.final)
    if ns.out is not None:
        ns.out.mkdir(parents=True, exist_ok=True)
        save_json(ns.out / "compare.json", rows)
    print(json.dumps(rows))
    return 0


def cmd_sweep(ns: argparse.Namespace) -> int:
    base = SweepPoint(M=ns.m, N=ns.n, lam=ns.lam, radius=ns.radius, cell_size=ns.cell_size,
                      edge_density=ns.edge_density, p_f=ns.pf, colors=ns.colors, L=ns.floor_height)
    spec = ExperimentSpec(ns.axis, parse_values(ns.values), base, ns.seeds, ns.seed,
                          _algorithms(ns.algorithm, ("mgc",)))
    save_dir = None
    if ns.save_colorings:
        if ns.out is None:
            raise ValueError("--save-colorings needs --out")
        save_dir = ns.out.with_name(ns.out.name + ".colorings")
    rows = run_sweep(spec, workers=ns.workers, save_dir=save_dir)
    if ns.out is not None:
        write_csv(ns.out, rows)
    key = {"N": "N", "L": "L", "Ed": "Ed", "Vd": "lam"}[ns.axis]
    for (value, alg), (mean, se, n) in summarize(rows, key).items():
        print(f"{ns.axis}={value:g}\t{alg}\tmean_fbar={mean:.5f}\tse={se:.5f}\tn={n}")
    return 0


def cmd_verify(ns: argparse.Namespace) -> int:
    inst = _instance(ns)
    L = ns.floor_height
    checks: list[tuple[str, bool | None, str]] = []
    fresh, report = solve_mgc(inst.graph, inst.weights, inst.colors,
                              SolveConfig(L=L, exact_mode=ns.exact_mode))
    if ns.coloring is not None:
        final = load_coloring(ns.coloring, inst.graph)
        matrix_col = final
        redo = validity_check(inst.graph, fresh, inst.dropped, inst.weights)
        checks.append(("deterministic re-solve", redo == final, "coloring file vs fresh solve"))
    else:
        matrix_col = fresh
        final = validity_check(inst.graph, fresh, inst.dropped, inst.weights)
    ok, bad = is_proper(inst.graph, matrix_col)
    checks.append(("proper on matrix graph", ok, f"{len(bad)} violations"))
    ok, bad = is_proper_on_spatial(inst.spatial, inst.graph, final)
    checks.append(("proper on spatial graph after validity check", ok, f"{len(bad)} violations"))
    if not report.exact:
        rep = verify_scheme(build_scheme(inst.graph.M, L))
        checks.append(("floor-division scheme", rep.ok, rep.failure or "all properties hold"))
    fbar = reuse_ratio(inst.graph, matrix_col, inst.weights, inst.colors)
    try:
        opt = exact_mgc(inst.graph, inst.weights, inst.colors).value
        factor = report.guarantee
        checks.append(("approximation certificate", fbar >= factor * opt - CERT_TOL,
                       f"fbar={fbar:.6f} >= {factor:.4f} * {opt:.6f}"))
    except OracleTooLarge as exc:
        checks.append(("approximation certificate", None, f"skipped: {exc}"))
    failed = False
    for name, res, detail in checks:
        tag = "SKIP" if res is None else ("PASS" if res else "FAIL")
        failed |= res is False
        print(f"{tag}  {name}: {detail}")
    return EXIT_CHECK_FAILED if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mgcolor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample an instance and write it as JSON")
    _instance_args(p)
    p.add_argument("--out", type=Path, required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="floor-division approximation")
    _instance_args(p)
    _solve_args(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="exact solve for small instances")
    _instance_args(p)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("compare", help="run several algorithms on one instance")
    _instance_args(p)
    _solve_args(p)
    p.add_argument("--algorithm", action="append", help=f"one of {','.join(ALGORITHMS)}; repeatable")
    p.add_argument("--out", type=Path)
    p.add_argument("--save-colorings", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="parameter sweep to CSV")
    _instance_args(p)
    p.add_argument("--floor-height", type=int, default=3)
    p.add_argument("--axis", choices=AXES, required=True)
    p.add_argument("--values", required=True, help='"1..40" or "0.2,0.4,0.6"')
    p.add_argument("--seeds", type=int, default=5, help="replicates per point")
    p.add_argument("--algorithm", action="append")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, help="results CSV")
    p.add_argument("--save-colorings", action="store_true",
                   help="also write every final coloring next to the CSV")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="re-check properness, certificate and scheme")
    _instance_args(p)
    _solve_args(p)
    p.add_argument("--coloring", type=Path, help="coloring JSON written by `solve`")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.func(ns)
    except (InstanceFormatError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
