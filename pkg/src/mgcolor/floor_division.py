"""Cyclic floor-division schemes.

Rows ``1..M`` are cut into floors of at most ``L`` rows in ``L`` different
ways (divisions ``t = 0..L-1``). Each floor may own one marginal row; once
the marginal rows of a division are removed no two floors touch, and over
the whole scheme every row is marginal exactly once.

Floor labels wrap modulo ``M`` (a floor may read ``(10, 1)`` for ``M = 10``)
but graph adjacency never does: rows ``M`` and ``1`` are not neighbours.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable


@dataclass(frozen=True)
class Floor:
    rows: tuple[int, ...]
    marginal: int | None = None

    @property
    def inner_rows(self) -> tuple[int, ...]:
        """Rows with the marginal row taken out, in floor order."""
        return tuple(m for m in self.rows if m != self.marginal)


@dataclass(frozen=True)
class FloorDivisionScheme:
    M: int
    L: int
    divisions: tuple[tuple[Floor, ...], ...]
    Q: int = field(init=False)
    r: int = field(init=False)

    def __post_init__(self) -> None:
        Q = math.ceil(self.M / self.L)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "r", self.M - self.L * (Q - 1))

    def marginal_rows(self, t: int) -> list[int]:
        return [f.marginal for f in self.divisions[t] if f.marginal is not None]

    def to_dict(self) -> dict[str, Any]:
        return {
            "M": self.M, "L": self.L, "Q": self.Q, "r": self.r,
            "divisions": [[{"rows": list(f.rows), "marginal": f.marginal} for f in div]
                          for div in self.divisions],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> FloorDivisionScheme:
        divs = tuple(tuple(Floor(tuple(f["rows"]), f["marginal"]) for f in div) for div in d["divisions"])
        return cls(d["M"], d["L"], divs)


def build_scheme(M: int, L: int) -> FloorDivisionScheme:
    """The ``L``-division cyclic scheme for ``M`` rows, ``2 <= L < M``."""
    if not 2 <= L < M:
        raise ValueError(f"floor height must satisfy 2 <= L < M, got L={L}, M={M}")
    Q = math.ceil(M / L)
    r = M - L * (Q - 1)
    base = [tuple(range(L * (j - 1) + 1, L * j + 1)) for j in range(1, Q)]
    base.append(tuple(range(L * (Q - 1) + 1, M + 1)))

    def shift(m: int, t: int) -> int:
        return (m - 1 + t) % M + 1

    divisions = []
    for t in range(L):
        if t < r:
            floors = [Floor(tuple(shift(m, t) for m in rows), shift(L * j + 1, t))
                      for j, rows in enumerate(base)]
        else:
            floors = [Floor(tuple(m + t for m in base[j]), t + L * j + 1) for j in range(Q - 2)]
            floors.append(Floor(tuple(range(L * (Q - 2) + 1 + t, M + 1)), t + L * (Q - 2) + 1))
            floors.append(Floor(tuple(range(1, t + 1)), None))
        divisions.append(tuple(floors))
    return FloorDivisionScheme(M, L, tuple(divisions))


@dataclass
class SchemeReport:
    ok: bool
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _adjacent(a: int, b: int) -> bool:
    return abs(a - b) == 1


def verify_scheme(scheme: FloorDivisionScheme,
                  adjacent: Callable[[int, int], bool] = _adjacent) -> SchemeReport:
    """Check every structural property of ``scheme``; stops at the first counterexample."""
    M, L = scheme.M, scheme.L
    everything = set(range(1, M + 1))
    if len(scheme.divisions) != L:
        return SchemeReport(False, f"{len(scheme.divisions)} divisions, expected {L}")
    marginal_count = dict.fromkeys(everything, 0)
    inner_count = dict.fromkeys(everything, 0)
    for t, div in enumerate(scheme.divisions):
        seen: list[int] = [m for f in div for m in f.rows]
        if sorted(seen) != sorted(everything):
            return SchemeReport(False, f"division {t} does not partition rows 1..{M}")
        floor_of = {}
        for j, f in enumerate(div, start=1):
            if len(f.rows) > L:
                return SchemeReport(False, f"floor F_{t}^{j} has {len(f.rows)} > {L} rows")
            if f.marginal is not None and f.marginal not in f.rows:
                return SchemeReport(False, f"marginal row {f.marginal} not in floor F_{t}^{j}")
            if len(f.inner_rows) > L - 1:
                return SchemeReport(False, f"floor F_{t}^{j} keeps {len(f.inner_rows)} > {L - 1} inner rows")
            if t >= scheme.r and j == scheme.Q and f.marginal is not None:
                return SchemeReport(False, f"last floor of division {t} has a marginal row")
            for m in f.rows:
                floor_of[m] = j
            if f.marginal is not None:
                marginal_count[f.marginal] += 1
            for m in f.inner_rows:
                inner_count[m] += 1
        marg = set(scheme.marginal_rows(t))
        for a in everything:
            for b in everything:
                if a < b and adjacent(a, b) and floor_of[a] != floor_of[b] \
                        and a not in marg and b not in marg:
                    return SchemeReport(False, f"division {t}: rows {a},{b} touch across floors")
    for m in sorted(everything):
        if marginal_count[m] != 1:
            return SchemeReport(False, f"row {m} is marginal {marginal_count[m]} times")
        if inner_count[m] != L - 1:
            return SchemeReport(False, f"row {m} is non-marginal in {inner_count[m]} divisions")
    return SchemeReport(True)
