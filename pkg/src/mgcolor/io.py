"""JSON persistence for instances, colorings and solve reports.

An instance directory holds ``spatial.json`` (points, edges, generator
config), ``matrix.json`` and ``weights.json``. The matrix graph is always
rebuilt from the spatial graph on load and checked against the stored copy.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .geometry import SpatialGraph
from .instances import Instance
from .matrix_graph import Coloring, MatrixGraph, WeightAssignment, build_from_spatial


class InstanceFormatError(ValueError):
    pass


def _write(path: Path, obj: Any) -> None:
    path.write_text(json.dumps(obj, indent=1) + "\n")


def _read(path: Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc}") from exc


def save_instance(directory: str | Path, inst: Instance) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    _write(d / "spatial.json", inst.spatial.to_dict())
    _write(d / "matrix.json", inst.graph.to_dict())
    _write(d / "weights.json", inst.weights.to_dict())
    return d


def load_instance(directory: str | Path) -> Instance:
    d = Path(directory)
    try:
        spatial = SpatialGraph.from_dict(_read(d / "spatial.json"))
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"malformed spatial.json: {exc}") from exc
    cfg = spatial.config
    if cfg is None:
        raise InstanceFormatError("spatial.json has no generator config")
    graph, dropped = build_from_spatial(spatial, cfg.cell_size, cfg.grid_shape)
    try:
        if (d / "matrix.json").exists():
            stored = MatrixGraph.from_dict(_read(d / "matrix.json"))
            if stored.to_dict() != graph.to_dict():
                raise InstanceFormatError("matrix.json does not match the spatial graph")
        weights = WeightAssignment.from_dict(_read(d / "weights.json"))
        weights.check(graph, cfg.colors)
    except InstanceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"malformed instance: {exc}") from exc
    return Instance(cfg, spatial, graph, dropped, weights)


def coloring_to_dict(graph: MatrixGraph, coloring: Coloring) -> dict[str, Any]:
    return {"colors": coloring.colors, "assign": coloring.to_sparse(graph)}


def coloring_from_dict(graph: MatrixGraph, d: dict[str, Any]) -> Coloring:
    try:
        return Coloring.from_sparse(graph, d["assign"], d["colors"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InstanceFormatError(f"malformed coloring: {exc}") from exc


def save_coloring(path: str | Path, graph: MatrixGraph, coloring: Coloring) -> None:
    _write(Path(path), coloring_to_dict(graph, coloring))


def load_coloring(path: str | Path, graph: MatrixGraph) -> Coloring:
    return coloring_from_dict(graph, _read(Path(path)))


def save_json(path: str | Path, obj: Any) -> None:
    def default(o: Any) -> Any:
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(f"not serializable: {type(o)}")
    Path(path).write_text(json.dumps(obj, indent=1, default=default) + "\n")
