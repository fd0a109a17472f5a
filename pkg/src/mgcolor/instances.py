"""Instance assembly and a uniform entry point for every algorithm."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .baselines import greedy_list_coloring, simplified_sfr
from .geometry import GeneratorConfig, SpatialGraph, cell_indices, generate, sample_color_weights
from .matrix_graph import (Coloring, DroppedEdges, MatrixGraph, WeightAssignment, build_from_spatial,
                           reuse_ratio, validity_check)
from .oracle import exact_mgc
from .solver import SolveConfig, SolveReport, solve_mgc

ALGORITHMS = ("mgc", "exact", "greedy", "sfr")


@dataclass
class Instance:
    config: GeneratorConfig
    spatial: SpatialGraph
    graph: MatrixGraph
    dropped: DroppedEdges
    weights: WeightAssignment

    @property
    def colors(self) -> int:
        return self.config.colors


def weights_for(spatial: SpatialGraph, graph: MatrixGraph, config: GeneratorConfig) -> WeightAssignment:
    """Unit vertex weights; color weights drawn per point and carried to its vertex."""
    mu_by_point = sample_color_weights(spatial.n_points, config.colors, config.p_f, config.seed)
    order = np.asarray(graph.source_ids, dtype=np.int64)
    return WeightAssignment(np.ones(graph.n_vertices), mu_by_point[order].reshape(-1, config.colors))


def assemble(spatial: SpatialGraph, config: GeneratorConfig) -> Instance:
    graph, dropped = build_from_spatial(spatial, config.cell_size, config.grid_shape)
    return Instance(config, spatial, graph, dropped, weights_for(spatial, graph, config))


def make_instance(config: GeneratorConfig) -> Instance:
    return assemble(generate(config), config)


def cap_cell_occupancy(spatial: SpatialGraph, cap: int) -> SpatialGraph:
    """Keep at most ``cap`` points per cell (lowest ids first), renumbering the rest."""
    cfg = spatial.config
    if cfg is None:
        raise ValueError("spatial graph carries no config")
    M, N = cfg.grid_shape
    rows, cols = cell_indices(spatial.xy, cfg.cell_size, M, N)
    seen: dict[tuple[int, int], int] = {}
    keep = []
    for p in range(spatial.n_points):
        key = (int(rows[p]), int(cols[p]))
        if seen.get(key, 0) < cap:
            seen[key] = seen.get(key, 0) + 1
            keep.append(p)
    new_id = {p: k for k, p in enumerate(keep)}
    edges = [(new_id[i], new_id[j]) for i, j in spatial.edges if i in new_id and j in new_id]
    return SpatialGraph(spatial.xy[keep], np.array(edges, dtype=np.int64).reshape(-1, 2), cfg)


@dataclass
class AlgorithmRun:
    algorithm: str
    coloring: Coloring      # proper on the matrix graph
    final: Coloring         # after the validity check, proper on the spatial graph
    fbar_matrix: float
    fbar: float
    guarantee: float
    wall_ms: float
    report: SolveReport | None = None


def run_algorithm(inst: Instance, algorithm: str, L: int = 3, exact_mode: bool = False,
                  workers: int = 1) -> AlgorithmRun:
    """Run one algorithm; ``fbar`` is measured after the validity check."""
    report, guarantee = None, 0.0
    start = time.perf_counter()
    if algorithm == "mgc":
        coloring, report = solve_mgc(inst.graph, inst.weights, inst.colors,
                                     SolveConfig(L=L, exact_mode=exact_mode, workers=workers))
        guarantee = report.guarantee
    elif algorithm == "exact":
        coloring = exact_mgc(inst.graph, inst.weights, inst.colors).coloring
        guarantee = 1.0
    elif algorithm == "greedy":
        coloring = greedy_list_coloring(inst.graph, inst.weights, inst.colors)
    elif algorithm == "sfr":
        coloring = simplified_sfr(inst.graph, inst.weights, inst.colors)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    wall_ms = (time.perf_counter() - start) * 1e3
    final = validity_check(inst.graph, coloring, inst.dropped, inst.weights)
    return AlgorithmRun(algorithm, coloring, final,
                        reuse_ratio(inst.graph, coloring, inst.weights, inst.colors),
                        reuse_ratio(inst.graph, final, inst.weights, inst.colors),
                        guarantee, wall_ms, report)
