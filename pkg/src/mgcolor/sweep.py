"""Parameter sweeps producing one CSV row per (point, algorithm, replicate).

Replicate ``s`` of a sweep with root seed ``R`` uses instance seed
``derive_seed(R, s)`` at every sweep point, so points along the ``L`` and
``Ed`` axes are compared on the same point process draws.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .geometry import ConnectionModel, GeneratorConfig
from .instances import make_instance, run_algorithm
from .io import save_coloring
from .seeding import derive_seed

CSV_COLUMNS = ("M", "N", "lambda", "r", "a", "Ed", "pf", "C", "L", "algorithm", "seed",
               "fbar", "guarantee", "wall_ms")
AXES = ("N", "L", "Ed", "Vd")


@dataclass(frozen=True)
class SweepPoint:
    M: int = 10
    N: int = 50
    lam: float = 1.6
    radius: float = 0.5
    cell_size: float = 1.0
    edge_density: float = 0.6
    p_f: float = 1.0
    colors: int = 6
    L: int = 3

    def config(self, seed: int) -> GeneratorConfig:
        return GeneratorConfig.for_grid(self.M, self.N, self.cell_size, lam=self.lam,
                                        model=ConnectionModel.boolean(self.radius),
                                        edge_density=self.edge_density, colors=self.colors,
                                        p_f=self.p_f, seed=seed)

    def at(self, axis: str, value: float) -> SweepPoint:
        if axis == "N":
            return replace(self, N=int(value))
        if axis == "L":
            return replace(self, L=int(value))
        if axis == "Ed":
            return replace(self, edge_density=float(value))
        if axis == "Vd":
            # effective vertex density = expected active links per cell = lam * a^2 * p_f
            if self.p_f <= 0:
                raise ValueError("vertex-density axis needs p_f > 0")
            return replace(self, lam=float(value) / (self.cell_size ** 2 * self.p_f))
        raise ValueError(f"unknown axis {axis!r}; choose from {AXES}")


@dataclass(frozen=True)
class ExperimentSpec:
    axis: str
    values: tuple[float, ...]
    base: SweepPoint = SweepPoint()
    seeds: int = 5
    root_seed: int = 0
    algorithms: tuple[str, ...] = ("mgc",)

    def __post_init__(self) -> None:
        if self.axis not in AXES:
            raise ValueError(f"unknown axis {self.axis!r}")
        if self.seeds < 1:
            raise ValueError("need at least one seed per point")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("axis values must be strictly increasing")

    def points(self) -> list[SweepPoint]:
        return [self.base.at(self.axis, v) for v in self.values]


@dataclass(frozen=True)
class ResultRow:
    M: int
    N: int
    lam: float
    r: float
    a: float
    Ed: float
    pf: float
    C: int
    L: int
    algorithm: str
    seed: int
    fbar: float
    guarantee: float
    wall_ms: float = field(compare=False)

    def as_csv(self) -> dict[str, object]:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["lambda"] = d.pop("lam")
        return {k: (repr(v) if isinstance(v, float) else v) for k, v in d.items()}

    @classmethod
    def from_csv(cls, rec: dict[str, str]) -> ResultRow:
        return cls(M=int(rec["M"]), N=int(rec["N"]), lam=float(rec["lambda"]), r=float(rec["r"]),
                   a=float(rec["a"]), Ed=float(rec["Ed"]), pf=float(rec["pf"]), C=int(rec["C"]),
                   L=int(rec["L"]), algorithm=rec["algorithm"], seed=int(rec["seed"]),
                   fbar=float(rec["fbar"]), guarantee=float(rec["guarantee"]),
                   wall_ms=float(rec["wall_ms"]))

    def sort_key(self) -> tuple:
        return (self.M, self.N, self.lam, self.r, self.a, self.Ed, self.pf, self.C, self.L,
                self.algorithm, self.seed)


def coloring_path(directory: Path, row: ResultRow) -> Path:
    name = (f"{row.algorithm}_M{row.M}_N{row.N}_lam{row.lam!r}_r{row.r!r}_a{row.a!r}_Ed{row.Ed!r}"
            f"_pf{row.pf!r}_C{row.C}_L{row.L}_s{row.seed}.json")
    return Path(directory) / name


def run_point(point: SweepPoint, seed: int, algorithms: Sequence[str],
              save_dir: Path | None = None) -> list[ResultRow]:
    """One instance, every algorithm. With ``save_dir`` the final colorings are written too."""
    inst = make_instance(point.config(seed))
    rows = []
    for alg in algorithms:
        run = run_algorithm(inst, alg, L=point.L)
        row = ResultRow(point.M, point.N, point.lam, point.radius, point.cell_size,
                        point.edge_density, point.p_f, point.colors, point.L, alg, seed,
                        run.fbar, run.guarantee, run.wall_ms)
        if save_dir is not None:
            save_coloring(coloring_path(save_dir, row), inst.graph, run.final)
        rows.append(row)
    return rows


def _task(args: tuple) -> list[ResultRow]:
    return run_point(*args)


def run_sweep(spec: ExperimentSpec, workers: int = 1, save_dir: Path | None = None) -> list[ResultRow]:
    """Run every point; rows come back sorted by parameters, never by completion order."""
    if save_dir is not None:
        Path(save_dir).mkdir(parents=True, exist_ok=True)
    tasks = [(p, derive_seed(spec.root_seed, s), spec.algorithms, save_dir)
             for p in spec.points() for s in range(spec.seeds)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_task, tasks))
    else:
        chunks = [_task(t) for t in tasks]
    return sorted((r for c in chunks for r in c), key=ResultRow.sort_key)


def write_csv(path, rows: Iterable[ResultRow]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in rows:
            w.writerow(r.as_csv())


def read_csv(path) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [ResultRow.from_csv(rec) for rec in reader]


def parse_values(text: str) -> tuple[float, ...]:
    """``"1..40"`` (inclusive integer range) or a comma list such as ``"0.2,0.4"``."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(float(v) for v in range(int(lo), int(hi) + 1))
    return tuple(float(v) for v in text.split(","))


def summarize(rows: Iterable[ResultRow], key: str) -> dict[tuple, tuple[float, float, int]]:
    """Mean, standard error and count of ``fbar`` grouped by (``key``, algorithm)."""
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        groups.setdefault((getattr(r, key), r.algorithm), []).append(r.fbar)
    out = {}
    for k, vals in sorted(groups.items()):
        n = len(vals)
        mean = sum(vals) / n
        var = sum((v - mean) ** 2 for v in vals) / (n - 1) if n > 1 else 0.0
        out[k] = (mean, math.sqrt(var / n), n)
    return out
