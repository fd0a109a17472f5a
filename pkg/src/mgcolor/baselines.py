"""Comparison heuristics: greedy list coloring and a lattice soft frequency reuse."""
from __future__ import annotations

import numpy as np

from .matrix_graph import Coloring, MatrixGraph, WeightAssignment


def greedy_list_coloring(g: MatrixGraph, weights: WeightAssignment, colors: int | None = None) -> Coloring:
    """Assign (vertex, color) pairs in decreasing ``w * mu`` order while conflict-free.

    Ties go to the lexicographically smaller vertex, then the smaller color.
    Pairs of zero weight are never assigned. Assignments only ever add
    conflicts, so one pass in priority order equals repeatedly picking the
    best assignable pair.
    """
    colors = weights.colors if colors is None else colors
    weights.check(g, colors)
    out = Coloring.empty(g.n_vertices, colors)
    score = weights.w[:, None] * weights.mu[:, :colors]
    vs, cs = np.nonzero(score > 0)
    order = np.lexsort((cs, vs, -score[vs, cs]))
    for k in order:
        v, c = int(vs[k]), int(cs[k])
        if not any(out.assign[x, c] for x in g.adjacency[v]):
            out.assign[v, c] = True
    return out


def sfr_bands(colors: int, edge_band_size: int | None = None) -> list[list[int]]:
    """The three edge sub-bands; whatever is left over belongs to no cell edge."""
    if colors < 4:
        raise ValueError(f"soft frequency reuse needs at least 4 colors, got {colors}")
    s = colors // 3 if edge_band_size is None else edge_band_size
    if s < 1 or 3 * s > colors:
        raise ValueError(f"edge sub-band size {s} does not fit {colors} colors")
    return [list(range(k * s, (k + 1) * s)) for k in range(3)]


def simplified_sfr(g: MatrixGraph, weights: WeightAssignment, colors: int | None = None,
                   edge_band_size: int | None = None) -> Coloring:
    """Soft frequency reuse on the cell lattice.

    Cell ``(m, n)`` owns edge sub-band ``(m + n) mod 3``. A vertex with a
    neighbour in another cell is a cell-edge vertex and may only use its
    cell's sub-band; a cell-centre vertex may use every color, since it can
    only conflict inside its own cell. Cells are visited in lexicographic
    order, edge vertices before centre vertices, each taking every allowed
    color that is still conflict-free.
    """
    colors = weights.colors if colors is None else colors
    weights.check(g, colors)
    bands = sfr_bands(colors, edge_band_size)
    out = Coloring.empty(g.n_vertices, colors)
    for m in range(1, g.M + 1):
        for n in range(1, g.N + 1):
            cell = list(g.cell(m, n))
            own = set(cell)
            edge = [v for v in cell if g.adjacency[v] - own]
            centre = [v for v in cell if not g.adjacency[v] - own]
            band = bands[(m + n) % 3]
            for v, allowed in [(v, band) for v in edge] + [(v, range(colors)) for v in centre]:
                for c in allowed:
                    if weights.w[v] * weights.mu[v, c] <= 0:
                        continue
                    if not any(out.assign[x, c] for x in g.adjacency[v]):
                        out.assign[v, c] = True
    return out
