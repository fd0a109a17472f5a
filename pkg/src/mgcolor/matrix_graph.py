"""Matrix graphs, multi-colorings and reuse-ratio metrics.

A matrix graph is an ``M x N`` lattice of cells; vertex ``(m, n, i)`` is the
``i``-th vertex of cell ``(m, n)`` (all 1-based). Edges may only join a cell
to itself or to one of its 8 neighbours; there is no wraparound.

Internally vertices are numbered ``0..V-1`` in lexicographic ``(m, n, i)``
order, colorings are boolean ``(V, C)`` arrays and colors are 0-based. The
JSON forms use 1-based colors.
"""
from __future__ import annotations

import math

from dataclasses import dataclass
from typing import Any, Iterable, NamedTuple, Sequence

import numpy as np

from .geometry import SpatialGraph, cell_indices, grid_shape


class VertexRef(NamedTuple):
    m: int
    n: int
    i: int


class MatrixGraph:
    """Immutable matrix graph.

    ``cell_sizes[m-1][n-1]`` is the vertex count ``l_{m,n}``; ``edges`` are
    pairs of vertex indices. ``source_ids`` optionally maps each vertex to the
    spatial-graph point it came from.
    """

    def __init__(self, M: int, N: int, cell_sizes: Sequence[Sequence[int]],
                 edges: Iterable[tuple[int, int]] = (),
                 source_ids: Sequence[int] | None = None) -> None:
        sizes = np.asarray(cell_sizes, dtype=np.int64).reshape(M, N)
        if M < 1 or N < 1:
            raise ValueError("grid dimensions must be positive")
        if np.any(sizes < 0):
            raise ValueError("negative cell size")
        self.M, self.N = int(M), int(N)
        self.cell_sizes = sizes
        self._start = np.concatenate([[0], np.cumsum(sizes.ravel())])
        self.n_vertices = int(self._start[-1])
        self.vertices: tuple[VertexRef, ...] = tuple(
            VertexRef(m + 1, n + 1, i + 1)
            for m in range(M) for n in range(N) for i in range(sizes[m, n]))
        self.row = np.array([v.m for v in self.vertices], dtype=np.int64)
        self.col = np.array([v.n for v in self.vertices], dtype=np.int64)

        e = np.array(sorted({(min(a, b), max(a, b)) for a, b in edges}), dtype=np.int64).reshape(-1, 2)
        if len(e):
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loop in matrix graph")
            if e.min() < 0 or e.max() >= self.n_vertices:
                raise ValueError("edge endpoint out of range")
            bad = (np.abs(self.row[e[:, 0]] - self.row[e[:, 1]]) > 1) | \
                  (np.abs(self.col[e[:, 0]] - self.col[e[:, 1]]) > 1)
            if bad.any():
                a, b = e[np.argmax(bad)]
                raise ValueError(f"edge {self.vertices[a]}-{self.vertices[b]} joins non-adjacent cells")
        self.edges = e
        adj: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for a, b in e:
            adj[a].add(int(b))
            adj[b].add(int(a))
        self.adjacency: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)

        if source_ids is not None:
            source_ids = tuple(int(s) for s in source_ids)
            if len(source_ids) != self.n_vertices:
                raise ValueError("source_ids length mismatch")
        self.source_ids = source_ids

    @classmethod
    def from_refs(cls, M: int, N: int, cell_sizes: Sequence[Sequence[int]],
                  edges: Iterable[tuple[VertexRef, VertexRef]]) -> MatrixGraph:
        probe = cls(M, N, cell_sizes)
        return cls(M, N, cell_sizes, [(probe.index(a), probe.index(b)) for a, b in edges])

    def index(self, ref: tuple[int, int, int]) -> int:
        m, n, i = ref
        if not (1 <= m <= self.M and 1 <= n <= self.N and 1 <= i <= self.cell_sizes[m - 1, n - 1]):
            raise KeyError(f"no vertex {tuple(ref)}")
        return int(self._start[(m - 1) * self.N + (n - 1)] + i - 1)

    def cell(self, m: int, n: int) -> range:
        """Vertex indices of cell ``(m, n)`` (1-based)."""
        k = (m - 1) * self.N + (n - 1)
        return range(int(self._start[k]), int(self._start[k + 1]))

    @property
    def edge_refs(self) -> set[tuple[VertexRef, VertexRef]]:
        return {(self.vertices[a], self.vertices[b]) for a, b in self.edges}

    def __repr__(self) -> str:
        return f"MatrixGraph(M={self.M}, N={self.N}, V={self.n_vertices}, E={len(self.edges)})"

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {
            "M": self.M, "N": self.N,
            "cells": self.cell_sizes.tolist(),
            "edges": [[list(self.vertices[a]), list(self.vertices[b])] for a, b in self.edges],
        }
        if self.source_ids is not None:
            d["source_ids"] = list(self.source_ids)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> MatrixGraph:
        probe = cls(d["M"], d["N"], d["cells"])
        edges = [(probe.index(a), probe.index(b)) for a, b in d["edges"]]
        return cls(d["M"], d["N"], d["cells"], edges, d.get("source_ids"))


@dataclass(frozen=True)
class DroppedEdges:
    """Spatial edges ``(id_i, id_j)`` whose endpoints landed in non-adjacent cells."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


class WeightAssignment:
    """Vertex weights ``w`` (shape ``(V,)``) and color weights ``mu`` (shape ``(V, C)``)."""

    def __init__(self, w: Sequence[float] | np.ndarray, mu: Sequence[Sequence[float]] | np.ndarray) -> None:
        w = np.asarray(w, dtype=float).reshape(-1)
        mu = np.asarray(mu, dtype=float)
        if mu.ndim != 2:
            mu = mu.reshape(len(w), -1)
        if mu.shape[0] != len(w):
            raise ValueError("mu must have one row per vertex")
        if np.any(w < 0) or np.any(mu < 0):
            raise ValueError("weights must be non-negative")
        self.w, self.mu = w, mu

    @classmethod
    def unit(cls, n_vertices: int, colors: int) -> WeightAssignment:
        return cls(np.ones(n_vertices), np.ones((n_vertices, colors)))

    @property
    def colors(self) -> int:
        return self.mu.shape[1]

    def u(self, c: int) -> np.ndarray:
        """Per-color MWIS weights ``w_v * mu(v, c)``."""
        return self.w * self.mu[:, c]

    def check(self, graph: MatrixGraph, colors: int | None = None) -> None:
        if len(self.w) != graph.n_vertices:
            raise ValueError(f"weights cover {len(self.w)} vertices, graph has {graph.n_vertices}")
        if colors is not None and self.colors != colors:
            raise ValueError(f"color weights cover {self.colors} colors, expected {colors}")

    def to_dict(self) -> dict[str, Any]:
        return {"colors": self.colors, "w": self.w.tolist(), "mu": self.mu.tolist()}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> WeightAssignment:
        mu = np.asarray(d["mu"], dtype=float).reshape(len(d["w"]), d["colors"])
        return cls(d["w"], mu)


class Coloring:
    """Multi-coloring as a boolean ``(V, C)`` assignment array."""

    def __init__(self, assign: np.ndarray) -> None:
        self.assign = np.asarray(assign, dtype=bool)
        if self.assign.ndim != 2:
            raise ValueError("assignment must be a (V, C) array")

    @classmethod
    def empty(cls, n_vertices: int, colors: int) -> Coloring:
        return cls(np.zeros((n_vertices, colors), dtype=bool))

    @property
    def colors(self) -> int:
        return self.assign.shape[1]

    def copy(self) -> Coloring:
        return Coloring(self.assign.copy())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Coloring) and np.array_equal(self.assign, other.assign)

    def to_sparse(self, graph: MatrixGraph) -> list[list[int]]:
        """``[m, n, i, c]`` rows with 1-based color ``c``."""
        vs, cs = np.nonzero(self.assign)
        return [[*graph.vertices[v], int(c) + 1] for v, c in zip(vs, cs)]

    @classmethod
    def from_sparse(cls, graph: MatrixGraph, rows: Iterable[Sequence[int]], colors: int) -> Coloring:
        out = cls.empty(graph.n_vertices, colors)
        for m, n, i, c in rows:
            if not 1 <= c <= colors:
                raise ValueError(f"color {c} outside 1..{colors}")
            out.assign[graph.index((m, n, i)), c - 1] = True
        return out


def build_from_spatial(g: SpatialGraph, a: float,
                       shape: tuple[int, int] | None = None) -> tuple[MatrixGraph, DroppedEdges]:
    """Partition ``g`` into ``a``-squares.

    The grid shape comes from the graph's config region unless given. Within
    a cell, vertices are ordered by point id.
    """
    if shape is None:
        if g.config is None:
            raise ValueError("grid shape unknown: pass shape= or a graph with a config")
        shape = grid_shape(g.config.width, g.config.height, a)
    M, N = shape
    rows, cols = cell_indices(g.xy, a, M, N)
    order = np.lexsort((np.arange(g.n_points), cols, rows))
    vertex_of = np.empty(g.n_points, dtype=np.int64)
    vertex_of[order] = np.arange(g.n_points)
    sizes = np.zeros((M, N), dtype=np.int64)
    np.add.at(sizes, (rows, cols), 1)

    kept, dropped = [], []
    for i, j in g.edges:
        if abs(rows[i] - rows[j]) > 1 or abs(cols[i] - cols[j]) > 1:
            dropped.append((int(i), int(j)))
        else:
            kept.append((int(vertex_of[i]), int(vertex_of[j])))
    graph = MatrixGraph(M, N, sizes, kept, source_ids=order.tolist())
    return graph, DroppedEdges(tuple(dropped))


def _vertex_lookup(graph: MatrixGraph) -> dict[int, int]:
    if graph.source_ids is None:
        raise ValueError("matrix graph carries no source ids")
    return {s: v for v, s in enumerate(graph.source_ids)}


def validity_check(graph: MatrixGraph, coloring: Coloring, dropped: DroppedEdges,
                   weights: WeightAssignment) -> Coloring:
    """Cancel color collisions on dropped edges.

    For each dropped edge (in sorted order) and color held by both ends, the
    end with the smaller ``w * mu(., c)`` loses the color; ties drop it from
    the lexicographically larger vertex.
    """
    out = coloring.copy()
    if not len(dropped):
        return out
    lookup = _vertex_lookup(graph)
    for s, t in sorted(dropped.pairs):
        a, b = lookup[s], lookup[t]
        for c in np.nonzero(out.assign[a] & out.assign[b])[0]:
            ua, ub = weights.w[a] * weights.mu[a, c], weights.w[b] * weights.mu[b, c]
            if ua < ub:
                loser = a
            elif ub < ua:
                loser = b
            else:
                loser = max(a, b)  # index order is lexicographic VertexRef order
            out.assign[loser, c] = False
    return out


def per_vertex_reuse(coloring: Coloring, weights: WeightAssignment) -> np.ndarray:
    """``f_v = (1/C) sum_c C(v,c) mu(v,c)``."""
    return (coloring.assign * weights.mu).sum(axis=1) / coloring.colors


def reuse_ratio(graph: MatrixGraph, coloring: Coloring, weights: WeightAssignment,
                colors: int | None = None) -> float:
    """Weighted reuse ratio; 0 when the total vertex weight is 0.

    The numerator is an exactly rounded sum divided once at the end, so two
    colorings that hold the same multiset of ``w * mu`` values score the same
    float regardless of which vertices carry them.
    """
    weights.check(graph, colors if colors is not None else coloring.colors)
    total = math.fsum(weights.w)
    if total == 0:
        return 0.0
    held = (weights.w[:, None] * weights.mu)[coloring.assign]
    return math.fsum(held) / (coloring.colors * total)


def per_color_nwc(coloring: Coloring, weights: WeightAssignment, c: int) -> float:
    """Normalized weighted cardinality of the vertices holding color ``c``."""
    u = weights.u(c)
    total = u.sum()
    if total == 0:
        return 0.0
    return float(u[coloring.assign[:, c]].sum() / total)


def color_share(weights: WeightAssignment, c: int) -> float:
    """``sum_v w_v mu(v,c) / sum_v w_v``, the factor multiplying ``B_c`` in the reuse ratio."""
    total = weights.w.sum()
    return 0.0 if total == 0 else float(weights.u(c).sum() / total)


def _violations(edges: np.ndarray, assign: np.ndarray) -> list[tuple[int, int, int]]:
    if len(edges) == 0:
        return []
    clash = assign[edges[:, 0]] & assign[edges[:, 1]]
    ks, cs = np.nonzero(clash)
    return [(int(edges[k, 0]), int(edges[k, 1]), int(c)) for k, c in zip(ks, cs)]


def is_proper(graph: MatrixGraph, coloring: Coloring
              ) -> tuple[bool, list[tuple[tuple[VertexRef, VertexRef], int]]]:
    """Scan every edge and color; returns ``(ok, [((u, v), c), ...])`` with 0-based ``c``."""
    bad = _violations(graph.edges, coloring.assign)
    return not bad, [((graph.vertices[a], graph.vertices[b]), c) for a, b, c in bad]


def is_proper_on_spatial(spatial: SpatialGraph, graph: MatrixGraph, coloring: Coloring
                         ) -> tuple[bool, list[tuple[int, int, int]]]:
    """Properness against the original spatial edges; violations as ``(id_i, id_j, c)``."""
    if len(spatial.edges) == 0:
        return True, []
    lookup = _vertex_lookup(graph)
    mapped = np.array([[lookup[int(i)], lookup[int(j)]] for i, j in spatial.edges], dtype=np.int64)
    bad = _violations(mapped, coloring.assign)
    src = graph.source_ids
    return not bad, [(src[a], src[b], c) for a, b, c in bad]
