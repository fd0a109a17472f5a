import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mgcolor.geometry import ConnectionModel, GeneratorConfig, SpatialGraph, generate
from mgcolor.matrix_graph import (Coloring, DroppedEdges, MatrixGraph, VertexRef, WeightAssignment,
                                  build_from_spatial, color_share, is_proper, is_proper_on_spatial,
                                  per_color_nwc, per_vertex_reuse, reuse_ratio, validity_check)

from _support import small_geometric_instance


def two_points(p, q, edge=True):
    c = GeneratorConfig(lam=1.0, width=4.0, height=4.0, model=ConnectionModel.boolean(2.0))
    edges = np.array([[0, 1]] if edge else [], dtype=np.int64).reshape(-1, 2)
    return SpatialGraph(np.array([p, q], dtype=float), edges, c)


def k2():
    return MatrixGraph(1, 1, [[2]], [(0, 1)])


def test_edgeless_spatial_graph():
    c = GeneratorConfig(lam=1.0, width=4.0, height=4.0, model=ConnectionModel.boolean(0.0), seed=2)
    g, dropped = build_from_spatial(generate(c), 1.0)
    assert len(g.edges) == 0 and len(dropped) == 0


def test_column_gap_is_dropped():
    g, dropped = build_from_spatial(two_points((0.5, 0.5), (2.5, 0.5)), 1.0)
    assert len(g.edges) == 0
    assert list(dropped) == [(0, 1)]
    assert g.vertices[0][:2] == (1, 1) and g.vertices[1][:2] == (3, 1)


def test_diagonal_neighbour_is_kept():
    g, dropped = build_from_spatial(two_points((0.5, 0.5), (1.5, 1.5)), 1.0)
    assert len(dropped) == 0
    assert g.edge_refs == {(VertexRef(1, 1, 1), VertexRef(2, 2, 1))}


def test_far_boundary_belongs_to_last_cell():
    g, _ = build_from_spatial(two_points((4.0, 4.0), (0.0, 0.0), edge=False), 1.0)
    assert {v[:2] for v in g.vertices} == {(1, 1), (4, 4)}


def test_rejects_non_local_edge():
    with pytest.raises(ValueError):
        MatrixGraph(1, 3, [[1, 0, 1]], [(0, 1)])


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), a=st.sampled_from([0.25, 0.5, 1.0]), lam=st.floats(0.2, 3.0))
def test_reconstruction_identity(seed, a, lam):
    c = GeneratorConfig(lam=lam, width=4.0, height=3.0, model=ConnectionModel.boolean(0.6),
                        cell_size=a, edge_density=0.7, seed=seed)
    sp = generate(c)
    g, dropped = build_from_spatial(sp, a)
    src = g.source_ids
    kept = {tuple(sorted((src[i], src[j]))) for i, j in g.edges}
    lost = {tuple(sorted(p)) for p in dropped}
    assert kept.isdisjoint(lost)
    assert kept | lost == {tuple(sorted(map(int, e))) for e in sp.edges}
    assert g.n_vertices == sp.n_points


def test_vertex_order_is_lexicographic():
    inst = small_geometric_instance(3, M=4, N=5, lam=2.0, cap=5)
    refs = list(inst.graph.vertices)
    assert refs == sorted(refs)
    for k, r in enumerate(refs):
        assert inst.graph.index(r) == k


def test_json_round_trip():
    inst = small_geometric_instance(4)
    g = inst.graph
    h = MatrixGraph.from_dict(g.to_dict())
    assert h.to_dict() == g.to_dict()
    assert np.array_equal(h.edges, g.edges)
    w = WeightAssignment.from_dict(inst.weights.to_dict())
    assert np.array_equal(w.w, inst.weights.w) and np.array_equal(w.mu, inst.weights.mu)


def test_validity_check_examples():
    g = MatrixGraph(1, 3, [[1, 0, 1]], [], source_ids=[0, 1])
    w = WeightAssignment([2.0, 5.0], [[1.0], [1.0]])
    both = Coloring(np.array([[True], [True]]))
    assert validity_check(g, both, DroppedEdges(()), w) == both
    out = validity_check(g, both, DroppedEdges(((0, 1),)), w)
    assert out.assign.tolist() == [[False], [True]]
    one = Coloring(np.array([[True], [False]]))
    assert validity_check(g, one, DroppedEdges(((0, 1),)), w) == one


def test_validity_tie_goes_against_larger_vertex():
    g = MatrixGraph(1, 3, [[1, 0, 1]], [], source_ids=[0, 1])
    w = WeightAssignment([1.0, 1.0], [[1.0], [1.0]])
    out = validity_check(g, Coloring(np.ones((2, 1), bool)), DroppedEdges(((0, 1),)), w)
    assert out.assign.tolist() == [[True], [False]]


def test_reuse_ratio_examples():
    single = MatrixGraph(1, 1, [[1]])
    w1 = WeightAssignment.unit(1, 2)
    assert reuse_ratio(single, Coloring(np.ones((1, 2), bool)), w1) == 1.0
    assert reuse_ratio(single, Coloring.empty(1, 2), w1) == 0.0
    g = k2()
    w = WeightAssignment.unit(2, 2)
    best = Coloring(np.array([[True, False], [False, True]]))
    assert is_proper(g, best)[0]
    assert reuse_ratio(g, best, w) == 0.5
    assert reuse_ratio(g, best, WeightAssignment([0.0, 0.0], np.ones((2, 2)))) == 0.0


def test_per_color_nwc_examples():
    g = MatrixGraph(1, 2, [[2, 1]])
    w = WeightAssignment.unit(3, 1)
    assert per_color_nwc(Coloring(np.ones((3, 1), bool)), w, 0) == 1.0
    assert per_color_nwc(Coloring.empty(3, 1), w, 0) == 0.0
    half = Coloring(np.array([[True], [False]]))
    assert per_color_nwc(half, WeightAssignment.unit(2, 1), 0) == 0.5
    assert per_color_nwc(half, WeightAssignment([1.0, 1.0], [[0.0], [0.0]]), 0) == 0.0


def test_properness_examples():
    g = MatrixGraph(1, 1, [[2]], [(0, 1)])
    assert is_proper(g, Coloring.empty(2, 3)) == (True, [])
    bad = Coloring.empty(2, 3)
    bad.assign[:, 1] = True
    ok, viol = is_proper(g, bad)
    assert not ok and viol == [((VertexRef(1, 1, 1), VertexRef(1, 1, 2)), 1)]


def test_sparse_coloring_round_trip():
    inst = small_geometric_instance(6)
    rng = np.random.default_rng(0)
    col = Coloring(rng.random((inst.graph.n_vertices, 3)) < 0.4)
    assert Coloring.from_sparse(inst.graph, col.to_sparse(inst.graph), 3) == col
    assert all(1 <= e[3] <= 3 for e in col.to_sparse(inst.graph))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_decomposition_identity(seed):
    rng = np.random.default_rng(seed)
    inst = small_geometric_instance(seed % 1000, lam=1.5, cap=4)
    V, C = inst.graph.n_vertices, 3
    w = WeightAssignment(rng.random(V) * 3, rng.random((V, C)))
    col = Coloring(rng.random((V, C)) < 0.5)
    f = reuse_ratio(inst.graph, col, w)
    dec = sum(color_share(w, c) * per_color_nwc(col, w, c) for c in range(C)) / C
    assert abs(f - dec) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_validity_check_properties(seed):
    from mgcolor.solver import solve_mgc
    inst = small_geometric_instance(seed % 5000, lam=2.0, cell_size=0.5, radius=0.5, cap=3)
    col, _ = solve_mgc(inst.graph, inst.weights)
    out = validity_check(inst.graph, col, inst.dropped, inst.weights)
    assert is_proper(inst.graph, out)[0]
    assert is_proper_on_spatial(inst.spatial, inst.graph, out)[0]
    assert np.all(per_vertex_reuse(out, inst.weights) <= per_vertex_reuse(col, inst.weights))
    removed = (col.assign & ~out.assign).sum(axis=0)
    assert np.all(removed <= len(inst.dropped))
    assert not np.any(out.assign & ~col.assign)
