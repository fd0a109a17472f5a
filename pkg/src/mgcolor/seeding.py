"""Seed splitting.

Every random draw in the package comes from a generator keyed by a root seed
plus a tuple of integer keys, ``numpy.random.SeedSequence(root, spawn_key=keys)``.
Keys used by the package:

* ``(STAGE_POINTS,)`` / ``(STAGE_EDGES,)`` -- point and edge sampling of one instance
* ``(STAGE_WEIGHTS,)`` -- color-weight table of one instance
* ``(STAGE_TRIAL, k)`` -- the k-th Monte-Carlo replicate derived from a config seed

Sweeps derive the root seed of point ``p``, replicate ``s`` as
``derive_seed(root, p, s)`` so results never depend on execution order.
"""
from __future__ import annotations

import numpy as np

STAGE_POINTS = 0
STAGE_EDGES = 1
STAGE_WEIGHTS = 2
STAGE_TRIAL = 3


def _sequence(root: int, keys: tuple[int, ...]) -> np.random.SeedSequence:
    if root < 0:
        raise ValueError(f"seed must be non-negative, got {root}")
    return np.random.SeedSequence(int(root), spawn_key=tuple(int(k) for k in keys))


def rng_for(root: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(_sequence(root, keys))


def derive_seed(root: int, *keys: int) -> int:
    """A 63-bit child seed, stable across platforms and numpy versions."""
    lo, hi = _sequence(root, keys).generate_state(2, dtype=np.uint32)
    return int((int(hi) << 32 | int(lo)) & 0x7FFF_FFFF_FFFF_FFFF)
