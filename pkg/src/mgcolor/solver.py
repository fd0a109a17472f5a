"""Approximate matrix-graph coloring via floor divisions.

Each color is handled on its own: with vertex weights ``u = w * mu(., c)`` a
maximum-weight independent set is approximated by solving, for every floor
division, the floors without their marginal rows exactly, then refilling
each marginal row with an exact solve constrained by the selections already
fixed around it. The best division wins and receives the color. The result
keeps at least ``(L - 1) / L`` of the optimal weight for every color.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .floor_division import FloorDivisionScheme, build_scheme
from .matrix_graph import Coloring, MatrixGraph, WeightAssignment, per_color_nwc, reuse_ratio
from .vector_dp import (DEFAULT_CELL_CAP, ConstraintSets, VectorGraph, enumerate_cell_is,
                        solve_mwis_1d, stack_rows)


@dataclass(frozen=True)
class SolveConfig:
    L: int = 3
    exact_mode: bool = False
    workers: int = 1
    cell_cap: int = DEFAULT_CELL_CAP

    def __post_init__(self) -> None:
        if not self.exact_mode and self.L < 2:
            raise ValueError("floor height L must be at least 2 unless exact_mode is set")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass
class ColorReport:
    color: int
    t_star: int | None
    division_nwc: list[float]
    inner_nwc: list[float]
    B_c: float
    transitions: int
    max_catalog: int


@dataclass
class SolveReport:
    L: int
    exact: bool
    fbar: float
    guarantee: float
    colors: list[ColorReport] = field(default_factory=list)

    @property
    def transitions(self) -> int:
        return sum(c.transitions for c in self.colors)

    @property
    def max_catalog(self) -> int:
        return max((c.max_catalog for c in self.colors), default=1)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["transitions"] = self.transitions
        d["max_catalog"] = self.max_catalog
        return d


def induced_marginal_constraints(g: MatrixGraph, row: int, selected: frozenset[int] | set[int],
                                 columns: tuple[int, int] | None = None,
                                 cap: int = DEFAULT_CELL_CAP) -> ConstraintSets:
    """Admissible sets for each cell of ``row`` given the selections fixed around it.

    ``Y_n`` keeps the independent sets of cell ``(row, n)`` with no vertex adjacent
    to a selected vertex in rows ``row - 1`` or ``row + 1``.
    """
    lo, hi = columns if columns is not None else (1, g.N)
    allowed = []
    for n in range(lo, hi + 1):
        cell = tuple(g.cell(row, n))
        blocked = frozenset(
            v for v in cell
            if any(abs(int(g.row[x]) - row) == 1 for x in g.adjacency[v] & selected))
        sets = enumerate_cell_is(cell, g.adjacency, cap).sets()
        allowed.append({a for a in sets if not a & blocked})
    return ConstraintSets(allowed)


def _weight(u: np.ndarray, chosen: frozenset[int] | set[int]) -> float:
    return float(sum(u[v] for v in sorted(chosen)))


class _Plan:
    """Vector-graph views shared by every color of one solve."""

    def __init__(self, g: MatrixGraph, scheme: FloorDivisionScheme | None) -> None:
        self.g = g
        self.scheme = scheme
        self.views: dict[tuple[int, ...], VectorGraph] = {}
        if scheme is None:
            self._view(tuple(range(1, g.M + 1)))
            return
        for div in scheme.divisions:
            for f in div:
                if f.inner_rows:
                    self._view(f.inner_rows)
                if f.marginal is not None:
                    self._view((f.marginal,))

    def _view(self, rows: tuple[int, ...]) -> VectorGraph:
        if rows not in self.views:
            self.views[rows] = stack_rows(self.g, rows)
        return self.views[rows]


def _solve_color(plan: _Plan, weights: WeightAssignment, c: int, cap: int) -> tuple[frozenset[int], ColorReport]:
    g = plan.g
    u = weights.u(c)
    total = float(u.sum())
    if total == 0:
        L = plan.scheme.L if plan.scheme else 0
        return frozenset(), ColorReport(c, None if plan.scheme is None else 0,
                                        [0.0] * L, [0.0] * L, 0.0, 0, 1)
    if plan.scheme is None:
        res = solve_mwis_1d(plan.views[tuple(range(1, g.M + 1))], u, prune_zero=True, cap=cap)
        return res.selected, ColorReport(c, None, [res.nwc], [res.nwc], res.nwc,
                                         res.transitions, res.K)

    transitions, max_k = 0, 1
    candidates, division_nwc, inner_nwc = [], [], []
    for div in plan.scheme.divisions:
        inner: set[int] = set()
        for f in div:
            if f.inner_rows:
                res = solve_mwis_1d(plan.views[f.inner_rows], u, prune_zero=True, cap=cap)
                inner |= res.selected
                transitions += res.transitions
                max_k = max(max_k, res.K)
        fixed = frozenset(inner)
        chosen = set(fixed)
        for f in div:
            if f.marginal is None:
                continue
            Y = induced_marginal_constraints(g, f.marginal, fixed, cap=cap)
            res = solve_mwis_1d(plan.views[(f.marginal,)], u, Y, prune_zero=True, cap=cap)
            chosen |= res.selected
            transitions += res.transitions
            max_k = max(max_k, res.K)
        candidates.append(frozenset(chosen))
        inner_nwc.append(_weight(u, fixed) / total)
        division_nwc.append(_weight(u, chosen) / total)
    t_star = int(np.argmax(division_nwc))  # first maximum
    return candidates[t_star], ColorReport(c, t_star, division_nwc, inner_nwc,
                                           division_nwc[t_star], transitions, max_k)


def solve_mgc(g: MatrixGraph, weights: WeightAssignment, colors: int | None = None,
              cfg: SolveConfig = SolveConfig()) -> tuple[Coloring, SolveReport]:
    """Color ``g`` with the floor-division approximation (or exactly, see below).

    ``cfg.exact_mode`` or ``L >= M`` stacks all rows into one vector graph and
    solves every color exactly.
    """
    colors = weights.colors if colors is None else colors
    weights.check(g, colors)
    exact = cfg.exact_mode or cfg.L >= g.M
    plan = _Plan(g, None if exact else build_scheme(g.M, cfg.L))

    def run(c: int) -> tuple[frozenset[int], ColorReport]:
        return _solve_color(plan, weights, c, cfg.cell_cap)

    if cfg.workers > 1 and colors > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(run, range(colors)))
    else:
        results = [run(c) for c in range(colors)]

    coloring = Coloring.empty(g.n_vertices, colors)
    for c, (chosen, _) in enumerate(results):
        coloring.assign[sorted(chosen), c] = True
    reports = [r for _, r in results]
    for r in reports:
        r.B_c = per_color_nwc(coloring, weights, r.color)
    report = SolveReport(L=cfg.L, exact=exact, fbar=reuse_ratio(g, coloring, weights, colors),
                         guarantee=1.0 if exact else (cfg.L - 1) / cfg.L, colors=reports)
    return coloring, report
