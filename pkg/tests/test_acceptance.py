"""Acceptance criteria, each at its stated tolerance and time budget."""
import math
import statistics
import time

import numpy as np
import pytest

from mgcolor.floor_division import build_scheme, verify_scheme
from mgcolor.geometry import ConnectionModel, GeneratorConfig, excluded_edge_bound, measure_excluded_edge_rate
from mgcolor.instances import ALGORITHMS, make_instance, run_algorithm
from mgcolor.matrix_graph import is_proper, is_proper_on_spatial
from mgcolor.oracle import exact_mgc
from mgcolor.solver import SolveConfig, solve_mgc
from mgcolor.sweep import ExperimentSpec, SweepPoint, run_sweep, summarize
from mgcolor.vector_dp import ConstraintSets, enumerate_cell_is, solve_mwis_1d

from _support import all_independent_sets, random_vector_graph, small_geometric_instance

pytestmark = pytest.mark.slow


def test_guarantee_on_small_instances(verdict):
    start = time.perf_counter()
    violations, worst = [], math.inf
    for s in range(100):
        Ed = (0.4, 0.8)[s % 2]
        L = (2, 3)[(s // 2) % 2]
        inst = small_geometric_instance(1000 + s, M=4, N=5, edge_density=Ed, colors=3, cap=3, lam=1.2)
        assert inst.graph.cell_sizes.max() <= 3
        _, rep = solve_mgc(inst.graph, inst.weights, cfg=SolveConfig(L=L))
        opt = exact_mgc(inst.graph, inst.weights).value
        slack = rep.fbar - (1 - 1 / L) * opt
        worst = min(worst, slack)
        if slack < -1e-12:
            violations.append((s, rep.fbar, opt, L))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 120
    verdict("1 floor-division guarantee", ok,
            f"{len(violations)} violations / 100, min slack {worst:.4g}, {elapsed:.1f}s")
    assert ok, violations


def _brute_force(g, edges, u, allowed):
    """Best weight over independent sets whose cell parts are all admissible."""
    best = -1.0
    cell_sets = [set(c) for c in g.cells]
    for s in all_independent_sets(g.vertices, edges):
        if allowed is not None and any(
                y is not None and frozenset(s & c) not in y for c, y in zip(cell_sets, allowed)):
            continue
        best = max(best, sum(u[v] for v in s))
    return best


def test_vector_dp_exactness(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(20240601)
    mismatches = 0
    for k in range(200):
        g, edges = random_vector_graph(rng, max_n=8, max_per_cell=3)
        u = {v: float(rng.integers(0, 10)) for v in g.vertices}
        allowed = None
        if k < 50:
            allowed = []
            for cell in g.cells:
                sets = enumerate_cell_is(cell, g.adjacency).sets()
                allowed.append({s for s in sets if rng.random() < 0.6} | {frozenset()})
        res = solve_mwis_1d(g, u, ConstraintSets(allowed) if allowed else None)
        if res.weight != _brute_force(g, edges, u, allowed):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and elapsed < 60
    verdict("2 vector-graph DP exactness", ok,
            f"{mismatches} mismatches / 200 (50 constrained), {elapsed:.1f}s")
    assert ok


def test_floor_division_scheme(verdict):
    start = time.perf_counter()
    failures = []
    for M in range(3, 31):
        for L in range(2, M):
            rep = verify_scheme(build_scheme(M, L))
            if not rep.ok:
                failures.append((M, L, rep.failure))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 10
    verdict("3 floor-division scheme", ok, f"{len(failures)} failing (M, L) pairs, {elapsed:.2f}s")
    assert ok, failures[:3]


def test_excluded_edge_bound(verdict):
    start = time.perf_counter()
    zero_rates = []
    for a in (1.0, 2.0):
        cfg = GeneratorConfig(lam=2.0, width=8.0, height=8.0, model=ConnectionModel.boolean(0.5),
                              cell_size=a, edge_density=1.0, seed=77)
        zero_rates.append(measure_excluded_edge_rate(cfg, trials=50).samples.max())
    part1 = all(r == 0.0 for r in zero_rates)

    cfg = GeneratorConfig(lam=2.0, width=8.0, height=8.0, model=ConnectionModel.boolean(0.5),
                          cell_size=0.4, edge_density=1.0, seed=78)
    est = measure_excluded_edge_rate(cfg, trials=200)
    bound = excluded_edge_bound(2.0, cfg.model, 0.4)
    part2 = est.mean < bound + 3 * est.stderr

    value = excluded_edge_bound(1.0, ConnectionModel.boolean(0.5), 0.5)
    rng = np.random.default_rng(4242)
    n = 8_000_000
    pts = rng.uniform(-1.0, 1.0, size=(n, 2))
    hit = (np.hypot(pts[:, 0], pts[:, 1]) <= 1.0) & ((np.abs(pts[:, 0]) > 0.5) | (np.abs(pts[:, 1]) > 0.5))
    mc, mc_se = 2.0 * hit.mean(), 2.0 * hit.std() / math.sqrt(n)
    part3 = abs(value - (math.pi - 1) / 2) <= 1e-6 and abs(value - mc) <= 3 * mc_se
    elapsed = time.perf_counter() - start
    ok = part1 and part2 and part3 and elapsed < 120
    verdict("4 excluded-edge bound", ok,
            f"a>=2r max rate {max(zero_rates)}; measured {est.mean:.4f}+-{est.stderr:.4f} vs bound "
            f"{bound:.4f}; closed form {value:.9f}, Monte-Carlo {mc:.5f}+-{mc_se:.5f}; {elapsed:.1f}s")
    assert ok


def test_properness_end_to_end(verdict):
    bad, dropped_total, runs = [], 0, 0
    for s in range(100):
        inst = small_geometric_instance(5000 + s, M=4, N=6, cell_size=0.5, radius=0.5, lam=3.0,
                                        edge_density=(0.5, 0.9)[s % 2], colors=4, cap=3)
        dropped_total += len(inst.dropped)
        for alg in ALGORITHMS:
            run = run_algorithm(inst, alg, L=(2, 3)[s % 2])
            runs += 1
            if not is_proper(inst.graph, run.coloring)[0]:
                bad.append((s, alg, "matrix"))
            if not is_proper_on_spatial(inst.spatial, inst.graph, run.final)[0]:
                bad.append((s, alg, "spatial"))
    ok = not bad and dropped_total > 0
    verdict("5 properness and validity", ok,
            f"{len(bad)} violations over {runs} runs; {dropped_total} dropped edges exercised")
    assert ok, bad[:5]


def _means(rows, key):
    return {k[0]: v for k, v in summarize(rows, key).items()}


def test_trend_reproduction(verdict):
    start = time.perf_counter()
    base = SweepPoint(M=10, N=20)
    by_n = _means(run_sweep(ExperimentSpec("N", (5.0, 10.0, 20.0, 40.0), base, seeds=20)), "N")
    by_ed = _means(run_sweep(ExperimentSpec("Ed", (0.6, 0.8), base, seeds=20)), "Ed")
    by_l = _means(run_sweep(ExperimentSpec("L", (2.0, 3.0, 4.0, 5.0), base, seeds=20)), "L")
    elapsed = time.perf_counter() - start

    gap = abs(by_n[40][0] - by_n[20][0])
    part_a = gap < 0.02
    part_b = by_ed[0.8][0] < by_ed[0.6][0]
    steps = []
    for lo, hi in zip((2, 3, 4), (3, 4, 5)):
        (m0, se0, _), (m1, se1, _) = by_l[lo], by_l[hi]
        steps.append(m1 >= m0 - math.hypot(se0, se1))
    part_c = all(steps)
    ok = part_a and part_b and part_c and elapsed < 600
    fmt = lambda d: ", ".join(f"{k:g}:{v[0]:.4f}" for k, v in sorted(d.items()))
    verdict("6 trend reproduction", ok,
            f"(a) |f(40)-f(20)|={gap:.4f} [{fmt(by_n)}]; (b) Ed {fmt(by_ed)}; (c) L {fmt(by_l)} "
            f"steps={steps}; {elapsed:.0f}s")
    assert ok


def test_exact_mode_identity(verdict):
    mismatches = []
    for s in range(50):
        inst = small_geometric_instance(9000 + s, M=4, N=5, edge_density=(0.4, 0.8)[s % 2],
                                        p_f=(1.0, 0.7)[(s // 2) % 2], colors=3, cap=3, lam=1.2)
        _, rep = solve_mgc(inst.graph, inst.weights, cfg=SolveConfig(exact_mode=True))
        opt = exact_mgc(inst.graph, inst.weights).value
        if rep.fbar != opt:
            mismatches.append((s, rep.fbar, opt))
    ok = not mismatches
    verdict("7 exact-mode identity", ok, f"{len(mismatches)} mismatches / 50")
    assert ok, mismatches[:3]


def _solve_time(point, seed, repeats=3):
    inst = make_instance(point.config(seed))
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        solve_mgc(inst.graph, inst.weights, cfg=SolveConfig(L=point.L))
        best = min(best, time.perf_counter() - t0)
    return best


def test_linear_scaling(verdict):
    base = SweepPoint(M=8, L=3, colors=3, edge_density=0.6)
    _solve_time(base.at("N", 20), 0, repeats=1)  # warm-up
    ratios = []
    for s in range(10):
        t100 = _solve_time(base.at("N", 100), 300 + s)
        t200 = _solve_time(base.at("N", 200), 300 + s)
        ratios.append(t200 / t100)
    med = statistics.median(ratios)
    ok = 1.5 <= med <= 3.0
    verdict("8 linear scaling", ok, f"median time ratio N=200/N=100 = {med:.3f} "
            f"(range {min(ratios):.2f}..{max(ratios):.2f})")
    assert ok
