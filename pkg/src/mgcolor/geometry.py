"""Random conflict graphs from the random connection model.

Points come from a homogeneous Poisson process on a rectangle; each pair is
joined with probability ``g(x_i - x_j) * edge_density``. The module also
computes the expected per-vertex count of edges lost when the plane is cut
into ``a``-squares and only neighbouring squares keep their conflicts, and
measures that quantity by simulation.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from typing import Any

import numpy as np
from scipy import integrate
from scipy.spatial import cKDTree

from .seeding import STAGE_EDGES, STAGE_POINTS, STAGE_TRIAL, STAGE_WEIGHTS, derive_seed, rng_for

BOOLEAN = "boolean"
RADIAL_EXPONENTIAL = "radial-exponential"

# below this the connection probability is treated as zero
G_TRUNCATION = 1e-12


@dataclass(frozen=True)
class ConnectionModel:
    """Radially nonincreasing connection function ``g``.

    ``boolean``: ``g(x) = 1`` iff ``|x| <= 2 * radius``.
    ``radial-exponential``: ``g(x) = exp(-beta * |x|**2)``.
    """

    kind: str = BOOLEAN
    radius: float = 0.5
    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.kind == BOOLEAN:
            if self.radius < 0:
                raise ValueError("boolean radius must be non-negative")
        elif self.kind == RADIAL_EXPONENTIAL:
            if self.beta <= 0:
                raise ValueError("beta must be positive")
        else:
            raise ValueError(f"unknown connection kind {self.kind!r}")

    @classmethod
    def boolean(cls, radius: float) -> ConnectionModel:
        return cls(BOOLEAN, radius=radius)

    @classmethod
    def radial_exponential(cls, beta: float) -> ConnectionModel:
        return cls(RADIAL_EXPONENTIAL, beta=beta)

    def profile(self, dist: np.ndarray | float) -> np.ndarray:
        """``g`` as a function of the distance ``|x|``."""
        d = np.asarray(dist, dtype=float)
        if self.kind == BOOLEAN:
            return (d <= 2.0 * self.radius).astype(float)
        return np.exp(-self.beta * d * d)

    def __call__(self, offset: np.ndarray) -> np.ndarray:
        offset = np.asarray(offset, dtype=float)
        return self.profile(np.hypot(offset[..., 0], offset[..., 1]))

    @property
    def support(self) -> float:
        """Distance beyond which ``g`` is zero (or below the truncation level)."""
        if self.kind == BOOLEAN:
            return 2.0 * self.radius
        return math.sqrt(-math.log(G_TRUNCATION) / self.beta)

    def plane_integral(self) -> float:
        """``e(g)``, the integral of ``g`` over the whole plane."""
        if self.kind == BOOLEAN:
            return math.pi * (2.0 * self.radius) ** 2
        return math.pi / self.beta

    def to_dict(self) -> dict[str, Any]:
        if self.kind == BOOLEAN:
            return {"kind": self.kind, "radius": self.radius}
        return {"kind": self.kind, "beta": self.beta}

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> ConnectionModel:
        return cls(d["kind"], radius=d.get("radius", 0.5), beta=d.get("beta", 1.0))


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of one random instance.

    The region is ``[0, width) x [0, height)``; the first coordinate indexes
    rows of the matrix graph and the second indexes columns, so a region of
    ``M*a x N*a`` yields an ``M x N`` matrix graph.
    """

    lam: float = 1.6
    width: float = 10.0
    height: float = 50.0
    model: ConnectionModel = field(default_factory=ConnectionModel)
    cell_size: float = 1.0
    edge_density: float = 0.6
    colors: int = 6
    p_f: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        # lam == 0 is allowed and yields the empty graph
        if self.lam < 0:
            raise ValueError(f"point density must be non-negative, got {self.lam}")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("region dimensions must be positive")
        if self.cell_size <= 0:
            raise ValueError("cell size must be positive")
        if not 0.0 <= self.edge_density <= 1.0:
            raise ValueError("edge density must lie in [0, 1]")
        if not 0.0 <= self.p_f <= 1.0:
            raise ValueError("p_f must lie in [0, 1]")
        if self.colors < 1:
            raise ValueError("need at least one color")
        self.grid_shape  # validates divisibility

    @classmethod
    def for_grid(cls, M: int, N: int, cell_size: float = 1.0, **kw: Any) -> GeneratorConfig:
        return cls(width=M * cell_size, height=N * cell_size, cell_size=cell_size, **kw)

    @property
    def grid_shape(self) -> tuple[int, int]:
        return grid_shape(self.width, self.height, self.cell_size)

    @property
    def area(self) -> float:
        return self.width * self.height

    def with_seed(self, seed: int) -> GeneratorConfig:
        return replace(self, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["model"] = self.model.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> GeneratorConfig:
        d = dict(d)
        d["model"] = ConnectionModel.from_dict(d["model"])
        return cls(**d)


def grid_shape(width: float, height: float, a: float) -> tuple[int, int]:
    M, N = round(width / a), round(height / a)
    if M < 1 or N < 1 or not math.isclose(M * a, width, rel_tol=1e-9) \
            or not math.isclose(N * a, height, rel_tol=1e-9):
        raise ValueError(f"region {width} x {height} is not a multiple of cell size {a}")
    return M, N


def cell_indices(xy: np.ndarray, a: float, M: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    """0-based (row, column) of the half-open ``a``-square holding each point.

    Points on the far boundary clamp into the last row/column.
    """
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    rows = np.clip(np.floor(xy[:, 0] / a).astype(np.int64), 0, M - 1)
    cols = np.clip(np.floor(xy[:, 1] / a).astype(np.int64), 0, N - 1)
    return rows, cols


@dataclass(eq=False)
class SpatialGraph:
    """Points in the plane (ids ``0..n-1``) and conflict edges ``(i, j)``, ``i < j``."""

    xy: np.ndarray
    edges: np.ndarray
    config: GeneratorConfig | None = None

    def __post_init__(self) -> None:
        self.xy = np.asarray(self.xy, dtype=float).reshape(-1, 2)
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            e = np.sort(e, axis=1)
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loop in edge list")
            if e.min() < 0 or e.max() >= len(self.xy):
                raise ValueError("edge endpoint out of range")
            e = np.unique(e, axis=0)
        self.edges = e

    @property
    def n_points(self) -> int:
        return len(self.xy)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}

    def identical(self, other: SpatialGraph) -> bool:
        return (np.array_equal(self.xy, other.xy) and np.array_equal(self.edges, other.edges))

    def to_dict(self) -> dict[str, Any]:
        return {
            "points": [{"id": i, "x": float(x), "y": float(y)} for i, (x, y) in enumerate(self.xy)],
            "edges": self.edges.tolist(),
            "config": self.config.to_dict() if self.config is not None else None,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> SpatialGraph:
        pts = sorted(d["points"], key=lambda p: p["id"])
        if [p["id"] for p in pts] != list(range(len(pts))):
            raise ValueError("point ids must be 0..n-1")
        xy = np.array([[p["x"], p["y"]] for p in pts], dtype=float).reshape(-1, 2)
        cfg = d.get("config")
        return cls(xy, np.array(d["edges"], dtype=np.int64).reshape(-1, 2),
                   GeneratorConfig.from_dict(cfg) if cfg else None)


def generate(config: GeneratorConfig) -> SpatialGraph:
    """Sample a conflict graph. Deterministic in ``config.seed``."""
    rng = rng_for(config.seed, STAGE_POINTS)
    count = rng.poisson(config.lam * config.area)
    xy = np.column_stack([rng.uniform(0.0, config.width, count),
                          rng.uniform(0.0, config.height, count)])

    edge_rng = rng_for(config.seed, STAGE_EDGES)
    if count < 2 or config.edge_density == 0.0:
        return SpatialGraph(xy, np.empty((0, 2), np.int64), config)
    pairs = cKDTree(xy).query_pairs(config.model.support, output_type="ndarray")
    if len(pairs) == 0:
        return SpatialGraph(xy, np.empty((0, 2), np.int64), config)
    pairs = np.sort(pairs, axis=1)
    pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    dist = np.hypot(*(xy[pairs[:, 0]] - xy[pairs[:, 1]]).T)
    prob = config.model.profile(dist) * config.edge_density
    keep = edge_rng.random(len(pairs)) < prob
    return SpatialGraph(xy, pairs[keep], config)


def sample_color_weights(vertex_count: int, colors: int, p_f: float, seed: int) -> np.ndarray:
    """Bernoulli(``p_f``) color-weight table of shape ``(vertex_count, colors)``."""
    rng = rng_for(seed, STAGE_WEIGHTS)
    return (rng.random((vertex_count, colors)) < p_f).astype(float)


def _disk_square_area(R: float, a: float) -> float:
    """Area of the disk of radius ``R`` intersected with ``[-a, a]^2``."""
    if R <= 0:
        return 0.0
    if R <= a:
        return math.pi * R * R
    if R >= a * math.sqrt(2.0):
        return 4.0 * a * a

    def arc(x: float) -> float:  # antiderivative of sqrt(R^2 - x^2)
        return 0.5 * (x * math.sqrt(max(R * R - x * x, 0.0)) + R * R * math.asin(min(x / R, 1.0)))

    x0 = math.sqrt(R * R - a * a)
    quarter = a * x0 + arc(a) - arc(x0)
    return 4.0 * quarter


def outside_square_integral(model: ConnectionModel, a: float) -> float:
    """Integral of ``g`` over ``{|x1| > a or |x2| > a}``."""
    if a <= 0:
        raise ValueError("cell size must be positive")
    R = model.support
    if model.kind == BOOLEAN:
        return model.plane_integral() - _disk_square_area(R, a)
    if a >= R:
        return 0.0

    def f(y: float, x: float) -> float:
        return float(model.profile(math.hypot(x, y)))

    opts = dict(epsabs=0.0, epsrel=1e-10)
    # first quadrant of the region: {x > a} plus {x <= a, y > a}
    strip, err1 = integrate.dblquad(f, a, R, 0.0, R, **opts)
    cap, err2 = integrate.dblquad(f, 0.0, a, a, R, **opts)
    total = 4.0 * (strip + cap)
    if not math.isfinite(total):
        raise ArithmeticError("connection-function integral diverged")
    return total


def excluded_edge_bound(lam: float, model: ConnectionModel, a: float) -> float:
    """Upper bound on the expected dropped edges per vertex, ``(lam/2) * int_Omega g``."""
    if lam < 0:
        raise ValueError("point density must be non-negative")
    if lam == 0:
        return 0.0
    return 0.5 * lam * outside_square_integral(model, a)


def excluded_edge_count(graph: SpatialGraph, a: float, M: int, N: int) -> int:
    """Number of edges joining cells that are not 8-neighbours."""
    if len(graph.edges) == 0:
        return 0
    rows, cols = cell_indices(graph.xy, a, M, N)
    i, j = graph.edges[:, 0], graph.edges[:, 1]
    far = (np.abs(rows[i] - rows[j]) > 1) | (np.abs(cols[i] - cols[j]) > 1)
    return int(far.sum())


def excluded_edge_rate(graph: SpatialGraph, a: float, M: int, N: int) -> float:
    if graph.n_points == 0:
        return 0.0
    return excluded_edge_count(graph, a, M, N) / graph.n_points


@dataclass(frozen=True)
class RateEstimate:
    mean: float
    stderr: float
    samples: np.ndarray

    def __float__(self) -> float:
        return self.mean


def measure_excluded_edge_rate(config: GeneratorConfig, trials: int,
                               a: float | None = None) -> RateEstimate:
    """Monte-Carlo mean of ``E_c / |V|`` over ``trials`` fresh instances.

    ``a`` defaults to the config's cell size and must divide the region.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    a = config.cell_size if a is None else a
    M, N = grid_shape(config.width, config.height, a)
    rates = np.empty(trials)
    for k in range(trials):
        g = generate(config.with_seed(derive_seed(config.seed, STAGE_TRIAL, k)))
        rates[k] = excluded_edge_rate(g, a, M, N)
    se = float(rates.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return RateEstimate(float(rates.mean()), se, rates)
