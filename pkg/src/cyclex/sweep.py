"""Periodic projection engine, cycle extraction, and cycle verification.

A sweep applies the family's projections in reverse order (the last set
first), so a converged sweep's outputs read back-to-front as the cycle
tuple (y_1, ..., y_m) with y_i = P_i y_{i+1} cyclically.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import SolverConfig
from .errors import LengthMismatch, NotConverged
from .geometry import Family, as_vector


@dataclass(frozen=True)
class Cycle:
    """An ordered tuple of points with its recomputed cycle residual."""

    points: tuple
    residual: float

    @classmethod
    def from_points(cls, family: Family, points) -> "Cycle":
        pts = tuple(as_vector(p, family.dim) for p in points)
        return cls(points=pts, residual=cycle_residual(family, pts))

    def to_dict(self, sweeps: int, stop_reason: str) -> dict:
        return {
            "points": [[float(c) for c in p] for p in self.points],
            "residual": float(self.residual),
            "sweeps": int(sweeps),
            "stop_reason": stop_reason,
        }


@dataclass(frozen=True)
class TrajectoryPoint:
    sweep: int
    inner: int
    set_index: int
    point: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """Every projection output of a run, in chronological order."""

    start: np.ndarray
    iterates: tuple
    stop_reason: str  # "converged" | "max_iterations"
    sweeps_used: int

    def sweep_ends(self):
        """The sweep boundary points x_0, x_m, x_{2m}, ... as one array."""
        m = max(r.inner for r in self.iterates) + 1 if self.iterates else 0
        ends = [self.start]
        ends.extend(r.point for r in self.iterates if r.inner == m - 1)
        return np.asarray(ends)


def default_order(m: int):
    """Application order of a sweep: last set first, first set last."""
    return tuple(range(m - 1, -1, -1))


def sweep_once(family: Family, x, order: Optional[Sequence[int]] = None):
    """One full sweep from ``x``.

    Returns the final point and the m intermediate projection outputs in
    application order.  ``order`` lists 0-based set indices; the default
    applies set m-1 first, then m-2, ..., then set 0.
    """
    x = as_vector(x, family.dim)
    if order is None:
        order = default_order(family.m)
    else:
        order = tuple(int(i) for i in order)
        if sorted(order) != list(range(family.m)):
            raise ValueError("order must be a permutation of 0..m-1")
    intermediates = []
    for i in order:
        x = family.sets[i].project(x)
        intermediates.append(x)
    return x, intermediates


def cycle_residual(family: Family, points) -> float:
    """max_i ||y_i - P_i y_{i+1}|| with indices cyclic (y_{m+1} = y_1).

    Zero exactly on cycles; otherwise the worst defect of the cycle
    relations over the family.
    """
    pts = [as_vector(p, family.dim) for p in points]
    if len(pts) != family.m:
        raise LengthMismatch(f"expected {family.m} points, got {len(pts)}")
    worst = 0.0
    for i in range(family.m):
        succ = pts[(i + 1) % family.m]
        gap = float(np.linalg.norm(pts[i] - family.sets[i].project(succ)))
        if gap > worst:
            worst = gap
    return worst


def run_periodic(family: Family, x0, cfg: Optional[SolverConfig] = None):
    """Iterate full sweeps from ``x0`` until the sweep displacement settles.

    Stops when ||x_{m(n+1)} - x_{mn}|| <= cfg.sweep_tol, then reads the
    last sweep's outputs as the candidate cycle (the output of set i is
    reported as y_i).  Returns ``(Trajectory, Cycle)``.

    Raises NotConverged, with the trajectory and best candidate attached,
    when the sweep budget runs out or the candidate's residual exceeds
    cfg.cycle_tol.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    x = as_vector(x0, family.dim).copy()
    if not any(s.bounded for s in family.sets):
        warnings.warn(
            "no set in the family is bounded; the periodic iteration may not settle",
            RuntimeWarning,
            stacklevel=2,
        )
    order = default_order(family.m)
    records = []
    stop_reason = "max_iterations"
    sweeps_used = 0
    intermediates = None
    for n in range(cfg.max_sweeps):
        x_prev = x
        x, intermediates = sweep_once(family, x)
        records.extend(
            TrajectoryPoint(sweep=n, inner=k, set_index=order[k], point=p)
            for k, p in enumerate(intermediates)
        )
        sweeps_used = n + 1
        if float(np.linalg.norm(x - x_prev)) <= cfg.sweep_tol:
            stop_reason = "converged"
            break
    cycle = Cycle.from_points(family, tuple(reversed(intermediates)))
    trajectory = Trajectory(
        start=as_vector(x0, family.dim).copy(),
        iterates=tuple(records),
        stop_reason=stop_reason,
        sweeps_used=sweeps_used,
    )
    if stop_reason != "converged" or cycle.residual > cfg.cycle_tol:
        raise NotConverged(
            f"periodic run stopped after {sweeps_used} sweeps "
            f"(stop_reason={stop_reason}, residual={cycle.residual:.3e})",
            trajectory=trajectory,
            cycle=cycle,
        )
    return trajectory, cycle


def min_distance_pair(c1, c2, x0, cfg: Optional[SolverConfig] = None):
    """Closest pair between two sets by alternating projections.

    Returns ``((y1, y2), distance)`` where y1 in c1, y2 in c2 form a
    two-set cycle; when the run converges the distance is the minimal
    distance between the sets.
    """
    family = Family((c1, c2))
    _, cycle = run_periodic(family, x0, cfg)
    y1, y2 = cycle.points
    return (y1, y2), float(np.linalg.norm(y1 - y2))


def write_trajectory_csv(trajectory: Trajectory, dim: int, path) -> None:
    """One row per projection application: sweep,n_inner,set_index,x_0..x_{d-1}."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sweep", "n_inner", "set_index"] + [f"x_{j}" for j in range(dim)])
        for rec in trajectory.iterates:
            writer.writerow(
                [rec.sweep, rec.inner, rec.set_index] + [repr(float(c)) for c in rec.point]
            )
