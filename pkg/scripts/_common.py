"""Shared plumbing for the experiment scripts."""
from __future__ import annotations

import argparse
from pathlib import Path

from mgcolor.sweep import ExperimentSpec, SweepPoint, run_sweep, summarize, write_csv


def parser(description: str, out: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--colors", type=int, default=6)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--root-seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("results") / out)
    return p


def run(axis: str, values, base: SweepPoint, ns, algorithms=("mgc",)) -> None:
    spec = ExperimentSpec(axis, tuple(float(v) for v in values), base, ns.seeds, ns.root_seed,
                          tuple(algorithms))
    rows = run_sweep(spec, workers=ns.workers)
    ns.out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(ns.out, rows)
    key = {"N": "N", "L": "L", "Ed": "Ed", "Vd": "lam"}[axis]
    print(f"{axis:>6} {'algorithm':>9} {'mean fbar':>10} {'stderr':>8} {'n':>4}")
    for (value, alg), (mean, se, n) in summarize(rows, key).items():
        print(f"{value:6g} {alg:>9} {mean:10.5f} {se:8.5f} {n:4d}")
    print(f"wrote {len(rows)} rows to {ns.out}")
