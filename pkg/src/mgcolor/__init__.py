"""Frequency-reuse allocation on matrix conflict graphs."""
from .baselines import greedy_list_coloring, simplified_sfr
from .floor_division import FloorDivisionScheme, build_scheme, verify_scheme
from .geometry import ConnectionModel, GeneratorConfig, SpatialGraph, generate, excluded_edge_bound
from .instances import Instance, make_instance, run_algorithm
from .matrix_graph import (Coloring, MatrixGraph, VertexRef, WeightAssignment, build_from_spatial,
                           is_proper, per_color_nwc, reuse_ratio, validity_check)
from .oracle import exact_mgc, exact_mwis
from .solver import SolveConfig, SolveReport, solve_mgc
from .vector_dp import VectorGraph, solve_mwis_1d, stack_rows

__version__ = "0.1.0"
