"""Exact solvers for small matrix graphs.

Two independent routes compute the maximum-weight independent set:

* ``enumerate``: depth-first search over the product of per-cell independent
  sets, pruning cross-cell conflicts and branches whose optimistic bound
  cannot beat the incumbent;
* ``dp``: the vector dynamic program on the graph with all rows stacked into
  one big cell per column.

``exact_mwis`` runs whichever routes fit the size limits and insists that
their optimal values agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix_graph import Coloring, MatrixGraph, WeightAssignment, color_share, reuse_ratio
from .vector_dp import DEFAULT_CELL_CAP, CatalogTooLarge, enumerate_cell_is, solve_mwis_1d, stack_rows

MAX_ENUM_VERTICES = 26
MAX_COLUMN_VERTICES = DEFAULT_CELL_CAP  # K^M <= 2^20 per stacked column
MAX_DP_STEP = 1 << 26  # largest K_n * K_{n+1} the stacked DP may face


class OracleTooLarge(ValueError):
    pass


class OracleDisagreement(AssertionError):
    pass


@dataclass
class OracleResult:
    selected: frozenset[int] | None
    value: float
    nodes: int
    coloring: Coloring | None = None
    methods: tuple[str, ...] = ()


def _cell_sets(cell: list[int], adj_mask: dict[int, int]) -> list[int]:
    sets = [0]
    for v in cell:
        sets += [s | 1 << v for s in sets if not s & adj_mask[v]]
    return sets


def _weight(u: np.ndarray, chosen) -> float:
    return float(sum(u[v] for v in sorted(chosen)))


def mwis_by_enumeration(g: MatrixGraph, u: np.ndarray) -> tuple[frozenset[int], float, int]:
    """Branch and bound over cell catalogs; returns ``(set, weight, nodes)``."""
    adj_mask = {v: sum(1 << x for x in g.adjacency[v]) for v in range(g.n_vertices)}
    cells = [list(g.cell(m, n)) for m in range(1, g.M + 1) for n in range(1, g.N + 1)]
    catalogs = []
    for cell in cells:
        options = []
        for s in _cell_sets(cell, adj_mask):
            members = [v for v in cell if s >> v & 1]
            nb = 0
            for v in members:
                nb |= adj_mask[v]
            options.append((_weight(u, members), s, nb))
        options.sort(key=lambda o: (-o[0], o[1]))
        catalogs.append(options)
    suffix = [0.0] * (len(cells) + 1)
    for k in range(len(cells) - 1, -1, -1):
        suffix[k] = suffix[k + 1] + catalogs[k][0][0]

    best_w, best_s, nodes = -1.0, 0, 0
    stack = [(0, 0, 0, 0.0)]  # (cell index, chosen mask, blocked mask, weight)
    while stack:
        k, chosen, blocked, w = stack.pop()
        nodes += 1
        if k == len(cells):
            if w > best_w:
                best_w, best_s = w, chosen
            continue
        if w + suffix[k] <= best_w:
            continue
        # push in reverse so the heaviest option is explored first
        for ow, s, nb in reversed(catalogs[k]):
            if not s & blocked and w + ow + suffix[k + 1] > best_w:
                stack.append((k + 1, chosen | s, blocked | nb, w + ow))
    selected = frozenset(v for v in range(g.n_vertices) if best_s >> v & 1)
    return selected, _weight(u, selected), nodes


def mwis_by_stacked_dp(g: MatrixGraph, u: np.ndarray) -> tuple[frozenset[int], float, int]:
    res = solve_mwis_1d(stack_rows(g, range(1, g.M + 1)), u, cap=MAX_COLUMN_VERTICES)
    return res.selected, res.weight, res.transitions


def _dp_step(g: MatrixGraph) -> int:
    """Largest product of consecutive stacked-column catalog sizes."""
    view = stack_rows(g, range(1, g.M + 1))
    try:
        K = [enumerate_cell_is(c, view.adjacency, MAX_COLUMN_VERTICES).K for c in view.cells]
    except CatalogTooLarge:
        return MAX_DP_STEP + 1
    return max((a * b for a, b in zip(K, K[1:])), default=max(K, default=1))


def exact_mwis(g: MatrixGraph, u: np.ndarray | list[float], method: str = "both",
               max_enum_vertices: int = MAX_ENUM_VERTICES) -> OracleResult:
    """Exact MWIS. ``method`` is ``"both"``, ``"enumerate"`` or ``"dp"``.

    With ``"both"`` every route within its size limit runs; at least one must fit.
    The returned value is the normalized weighted cardinality.
    """
    u = np.asarray(u, dtype=float)
    if len(u) != g.n_vertices:
        raise ValueError("weight vector length mismatch")
    total = float(u.sum())
    enum_ok = g.n_vertices <= max_enum_vertices
    max_col = max((sum(len(g.cell(m, n)) for m in range(1, g.M + 1)) for n in range(1, g.N + 1)),
                  default=0)
    dp_ok = max_col <= MAX_COLUMN_VERTICES and _dp_step(g) <= MAX_DP_STEP
    wanted = {"both": ("enumerate", "dp"), "enumerate": ("enumerate",), "dp": ("dp",)}[method]
    runs = []
    if "enumerate" in wanted and enum_ok:
        runs.append(("enumerate",) + mwis_by_enumeration(g, u))
    if "dp" in wanted and dp_ok:
        runs.append(("dp",) + mwis_by_stacked_dp(g, u))
    if not runs:
        raise OracleTooLarge(f"{g.n_vertices} vertices, {max_col} per column: too large for {method}")
    ref = runs[0]
    for other in runs[1:]:
        if not math.isclose(other[2], ref[2], rel_tol=1e-12, abs_tol=1e-12):
            raise OracleDisagreement(f"{ref[0]} found {ref[2]}, {other[0]} found {other[2]}")
    name, selected, weight, _ = ref
    return OracleResult(selected, weight / total if total > 0 else 0.0,
                        sum(r[3] for r in runs), methods=tuple(r[0] for r in runs))


def exact_mgc(g: MatrixGraph, weights: WeightAssignment, colors: int | None = None,
              method: str = "both", max_enum_vertices: int = MAX_ENUM_VERTICES) -> OracleResult:
    """Optimal multi-coloring; ``value`` is the optimal weighted reuse ratio."""
    colors = weights.colors if colors is None else colors
    weights.check(g, colors)
    coloring = Coloring.empty(g.n_vertices, colors)
    nodes, fbar, methods = 0, 0.0, set()
    for c in range(colors):
        u = weights.u(c)
        if u.sum() == 0:
            continue
        res = exact_mwis(g, u, method, max_enum_vertices)
        coloring.assign[sorted(res.selected), c] = True
        nodes += res.nodes
        methods.update(res.methods)
        fbar += color_share(weights, c) * res.value
    fbar /= colors
    # value must match the metric recomputed from the witness
    check = reuse_ratio(g, coloring, weights, colors)
    if not math.isclose(check, fbar, rel_tol=1e-9, abs_tol=1e-12):
        raise OracleDisagreement(f"decomposed value {fbar} != recomputed {check}")
    return OracleResult(None, check, nodes, coloring, tuple(sorted(methods)))
