"""Exact maximum-weight independent sets on vector graphs.

A vector graph is a sequence of cells ``V_1..V_N`` whose edges stay inside a
cell or join consecutive cells. The solver enumerates every independent set
of every cell (the cell's state catalog) and runs a Viterbi-style pass over
the columns, keeping for each state the best prefix that ends in it.

Cell independent sets are bitmasks over the cell's local vertex order; the
catalog is sorted by mask value, so the empty set is always state 0.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .matrix_graph import MatrixGraph

DEFAULT_CELL_CAP = 20
# largest compatibility block materialized at once
_BLOCK = 1 << 22


class CatalogTooLarge(ValueError):
    pass


class Infeasible(RuntimeError):
    pass


@dataclass(frozen=True)
class VectorGraph:
    """Cells of vertex keys plus an adjacency map restricted to those vertices."""

    cells: tuple[tuple[int, ...], ...]
    adjacency: Mapping[int, frozenset[int]]
    position: dict[int, tuple[int, int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        pos: dict[int, tuple[int, int]] = {}
        for n, cell in enumerate(self.cells):
            for k, v in enumerate(cell):
                if v in pos:
                    raise ValueError(f"vertex {v} appears twice")
                pos[v] = (n, k)
        for v, nbrs in self.adjacency.items():
            if v not in pos:
                raise ValueError(f"adjacency mentions unknown vertex {v}")
            for x in nbrs:
                if x not in pos or x == v:
                    raise ValueError(f"bad neighbour {x} of {v}")
                if abs(pos[x][0] - pos[v][0]) > 1:
                    raise ValueError(f"edge {v}-{x} skips a cell")
                if v not in self.adjacency.get(x, ()):
                    raise ValueError(f"asymmetric adjacency at {v}-{x}")
        object.__setattr__(self, "position", pos)

    @classmethod
    def from_edges(cls, cells: Sequence[Sequence[int]], edges: Iterable[tuple[int, int]]) -> VectorGraph:
        cells = tuple(tuple(int(v) for v in c) for c in cells)
        adj: dict[int, set[int]] = {v: set() for c in cells for v in c}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        return cls(cells, {v: frozenset(s) for v, s in adj.items()})

    @property
    def N(self) -> int:
        return len(self.cells)

    @property
    def vertices(self) -> list[int]:
        return [v for c in self.cells for v in c]

    def neighbours(self, v: int) -> frozenset[int]:
        return self.adjacency.get(v, frozenset())


@dataclass(frozen=True)
class CellISCatalog:
    """All independent sets of one cell, as masks over ``vertices``."""

    vertices: tuple[int, ...]
    masks: np.ndarray

    @property
    def K(self) -> int:
        return len(self.masks)

    def members(self, k: int) -> frozenset[int]:
        m = int(self.masks[k])
        return frozenset(v for j, v in enumerate(self.vertices) if m >> j & 1)

    def sets(self) -> list[frozenset[int]]:
        return [self.members(k) for k in range(self.K)]


def _nbrs(adjacency: Mapping[int, frozenset[int]] | Sequence[frozenset[int]], v: int):
    if isinstance(adjacency, (tuple, list)):
        return adjacency[v]
    return adjacency.get(v, ())


def _enumerate(vertices: Sequence[int], adjacency: Mapping[int, frozenset[int]],
               weights: Sequence[float] | None, cap: int) -> tuple[np.ndarray, np.ndarray]:
    k = len(vertices)
    if k > cap:
        raise CatalogTooLarge(f"cell has {k} vertices, cap is {cap}")
    local = {v: j for j, v in enumerate(vertices)}
    masks = np.zeros(1, dtype=np.int64)
    wts = np.zeros(1)
    for j, v in enumerate(vertices):
        lower = 0
        for x in _nbrs(adjacency, v):
            jx = local.get(x)
            if jx is not None and jx < j:
                lower |= 1 << jx
        ok = (masks & lower) == 0
        masks = np.concatenate([masks, masks[ok] | (1 << j)])
        if weights is not None:
            wts = np.concatenate([wts, wts[ok] + weights[j]])
    order = np.argsort(masks, kind="stable")
    return masks[order], wts[order] if weights is not None else wts


def enumerate_cell_is(vertices: Sequence[int], adjacency: Mapping[int, frozenset[int]],
                      cap: int = DEFAULT_CELL_CAP) -> CellISCatalog:
    """Every independent set of the subgraph induced by ``vertices``, empty set included."""
    masks, _ = _enumerate(tuple(vertices), adjacency, None, cap)
    return CellISCatalog(tuple(vertices), masks)


@dataclass
class ConstraintSets:
    """Per-cell admissible independent sets; ``None`` leaves a cell unconstrained."""

    allowed: list[set[frozenset[int]] | None]

    @classmethod
    def unconstrained(cls, N: int) -> ConstraintSets:
        return cls([None] * N)

    def __len__(self) -> int:
        return len(self.allowed)


@dataclass
class MWISResult:
    selected: frozenset[int]
    weight: float
    nwc: float
    transitions: int
    catalog_sizes: list[int]

    @property
    def K(self) -> int:
        return max(self.catalog_sizes, default=1)


def _next_masks(masks: np.ndarray, to_next: Sequence[int]) -> np.ndarray:
    out = np.zeros_like(masks)
    for j, nb in enumerate(to_next):
        if nb:
            out |= np.where((masks >> j) & 1 == 1, nb, 0)
    return out


def solve_mwis_1d(g: VectorGraph, u: Mapping[int, float] | Sequence[float] | np.ndarray,
                  constraints: ConstraintSets | None = None, *, prune_zero: bool = False,
                  cap: int = DEFAULT_CELL_CAP) -> MWISResult:
    """Maximum-weight independent set with ``S_n`` in ``Y_n`` for every cell.

    With ``prune_zero`` vertices of weight 0 are left out of the catalogs and
    only the admissible sets free of such vertices are kept. The witness never
    contains zero-weight vertices and is always admissible; for constraint sets
    closed under taking subsets (the only kind the floor solver builds) the
    optimal weight is unchanged. Ties go to the smallest predecessor state and, at the end, to the
    smallest final state.
    """
    N = g.N
    if constraints is not None and len(constraints) != N:
        raise ValueError(f"{len(constraints)} constraint sets for {N} cells")
    total = float(sum(u[v] for v in g.vertices))
    if N == 0:
        return MWISResult(frozenset(), 0.0, 0.0, 0, [])

    cell_verts: list[tuple[int, ...]] = []
    for cell in g.cells:
        if any(u[v] < 0 for v in cell):
            raise ValueError("vertex weights must be non-negative")
        cell_verts.append(tuple(v for v in cell if u[v] > 0) if prune_zero else cell)

    masks_list, back = [], []
    best = prev_next = None
    transitions = 0
    sizes = []
    for n, verts in enumerate(cell_verts):
        masks, wts = _enumerate(verts, g.adjacency, [float(u[v]) for v in verts], cap)
        sizes.append(len(masks))
        admissible = np.ones(len(masks), dtype=bool)
        allowed = constraints.allowed[n] if constraints is not None else None
        if allowed is not None:
            if prune_zero:
                active = frozenset(verts)
                allowed = {y for y in allowed if y <= active}
            cat = CellISCatalog(verts, masks)
            admissible = np.array([cat.members(k) in allowed for k in range(len(masks))], dtype=bool)

        if n == 0:
            cur = np.where(admissible, wts, -np.inf)
            back.append(None)
        else:
            K0, K1 = len(best), len(masks)
            transitions += K0 * K1
            arg = np.zeros(K1, dtype=np.int64)
            val = np.full(K1, -np.inf)
            step = max(1, _BLOCK // max(K0, 1))
            for lo in range(0, K1, step):
                hi = min(K1, lo + step)
                compat = (prev_next[:, None] & masks[None, lo:hi]) == 0
                cand = np.where(compat, best[:, None], -np.inf)
                a = np.argmax(cand, axis=0)
                arg[lo:hi] = a
                val[lo:hi] = cand[a, np.arange(hi - lo)]
            cur = np.where(admissible & np.isfinite(val), val + wts, -np.inf)
            back.append(arg)
        if not np.isfinite(cur).any():
            raise Infeasible(f"no admissible state at cell {n + 1}")
        masks_list.append(masks)
        if n + 1 < N:
            nxt = {v: j for j, v in enumerate(cell_verts[n + 1])}
            to_next = []
            for v in verts:
                nb = 0
                for x in _nbrs(g.adjacency, v):
                    jx = nxt.get(x)
                    if jx is not None:
                        nb |= 1 << jx
                to_next.append(nb)
            prev_next = _next_masks(masks, to_next)
        best = cur

    k = int(np.argmax(best))
    chosen: list[int] = []
    for n in range(N - 1, -1, -1):
        m = int(masks_list[n][k])
        chosen.extend(v for j, v in enumerate(cell_verts[n]) if m >> j & 1)
        if n > 0:
            k = int(back[n][k])
    selected = frozenset(chosen)
    weight = float(sum(u[v] for v in sorted(selected)))
    return MWISResult(selected, weight, weight / total if total > 0 else 0.0, transitions, sizes)


def stack_rows(g: MatrixGraph, rows: Sequence[int], columns: tuple[int, int] | None = None) -> VectorGraph:
    """View the given rows (1-based, in this order) as one vector graph.

    Big cell ``n`` holds the vertices of cells ``(m, n)`` for ``m`` in ``rows``;
    ``columns`` is an inclusive 1-based range, default all columns. Only edges
    already present in ``g`` are kept, so rows that are not adjacent in ``g``
    (such as ``M`` and ``1``) form disconnected layers.
    """
    rows = [int(m) for m in rows]
    if len(set(rows)) != len(rows):
        raise ValueError(f"duplicate rows in {rows}")
    if any(not 1 <= m <= g.M for m in rows):
        raise ValueError(f"rows {rows} outside 1..{g.M}")
    lo, hi = columns if columns is not None else (1, g.N)
    if not 1 <= lo <= hi <= g.N:
        raise ValueError(f"column range {lo}..{hi} outside 1..{g.N}")
    cells = tuple(tuple(v for m in rows for v in g.cell(m, n)) for n in range(lo, hi + 1))
    inside = {v for c in cells for v in c}
    adjacency = {v: g.adjacency[v] & inside for v in inside}
    return VectorGraph(cells, adjacency)
