"""Product-space solvers: relaxed projected gradient and parallel projections.

Tuples (y_1, ..., y_m) are handled as (m, d) float arrays, one block per
row, normed by the product norm sqrt(sum_i ||y_i||^2).  The constraint is
the product set C_1 x ... x C_m whose projection acts blockwise.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import SolverConfig
from .errors import BlockCountMismatch, DimensionMismatch, InvalidStepSize, NotConverged, TooFewSets
from .geometry import Family, as_vector

PARALLEL_VARIANTS = ("others_mean", "full_mean")


def as_product_point(blocks, m: Optional[int] = None, dim: Optional[int] = None) -> np.ndarray:
    """Coerce to a finite (m, d) float64 array of stacked blocks."""
    y = np.asarray(blocks, dtype=float)
    if y.ndim == 1:
        y = y[None, :]
    if y.ndim != 2 or y.size == 0:
        raise ValueError(f"expected an (m, d) tuple of blocks, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise ValueError("tuple has non-finite coordinates")
    if m is not None and y.shape[0] != m:
        raise BlockCountMismatch(f"tuple has {y.shape[0]} blocks, expected {m}")
    if dim is not None and y.shape[1] != dim:
        raise DimensionMismatch(f"blocks have dimension {y.shape[1]}, expected {dim}")
    return y


def project_blocks(family: Family, y: np.ndarray) -> np.ndarray:
    """Projection onto the product set: each block onto its own set."""
    return np.stack([family.sets[i].project(y[i]) for i in range(family.m)])


def diagonal_project(y: np.ndarray) -> np.ndarray:
    """Projection onto the diagonal: every block replaced by the block mean."""
    mean = y.mean(axis=0)
    return np.broadcast_to(mean, y.shape).copy()


class PairwiseSquared:
    """Phi(y) = (1/(2(m-1))) * sum_{i<j} ||y_i - y_j||^2.

    The gradient norm is exactly m/(m-1), so beta = 1 - 1/m.
    """

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("pairwise objective needs m >= 2")
        self.m = int(m)

    @property
    def lipschitz_inverse_beta(self) -> float:
        return self.m / (self.m - 1.0)

    def value(self, y: np.ndarray) -> float:
        total = 0.0
        for i in range(self.m):
            for j in range(i + 1, self.m):
                d = y[i] - y[j]
                total += float(d @ d)
        return total / (2.0 * (self.m - 1.0))

    def gradient(self, y: np.ndarray) -> np.ndarray:
        s = y.sum(axis=0)
        return y - (s - y) / (self.m - 1.0)


class CyclicSquared:
    """Phi(y) = sum_i ||y_i - y_{i+1}||^2 with cyclic indexing.

    8 is a Lipschitz constant of the gradient for every m (the spectral
    bound of the cyclic second-difference operator).
    """

    lipschitz_inverse_beta = 8.0

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("cyclic objective needs m >= 2")
        self.m = int(m)

    def value(self, y: np.ndarray) -> float:
        d = y - np.roll(y, -1, axis=0)
        return float(np.sum(d * d))

    def gradient(self, y: np.ndarray) -> np.ndarray:
        return 2.0 * (2.0 * y - np.roll(y, 1, axis=0) - np.roll(y, -1, axis=0))


class QuadraticToTarget:
    """Phi(y) = 0.5 * ||y - target||^2 in the product norm."""

    lipschitz_inverse_beta = 1.0

    def __init__(self, target):
        self.target = as_product_point(target)
        self.m = self.target.shape[0]

    def value(self, y: np.ndarray) -> float:
        d = y - self.target
        return 0.5 * float(np.sum(d * d))

    def gradient(self, y: np.ndarray) -> np.ndarray:
        return y - self.target


def eval_objective(obj, y) -> float:
    """Objective value at a tuple, after block-count validation."""
    return obj.value(as_product_point(y, m=obj.m))


def grad_objective(obj, y) -> np.ndarray:
    """Objective gradient at a tuple, one block per row."""
    return obj.gradient(as_product_point(y, m=obj.m))


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    objective: float
    displacement: float
    stationarity: float
    blocks: np.ndarray


@dataclass(frozen=True)
class ProductSolution:
    """Limit tuple of a product-space run plus its certification residuals."""

    blocks: np.ndarray
    fair_point: np.ndarray
    objective: float
    stationarity: float
    membership: float
    iterations: int
    stop_reason: str
    log: tuple

    def to_dict(self) -> dict:
        return {
            "points": [[float(c) for c in b] for b in self.blocks],
            "residual": float(self.stationarity),
            "sweeps": int(self.iterations),
            "stop_reason": self.stop_reason,
            "objective": float(self.objective),
            "fair_point": [float(c) for c in self.fair_point],
        }


def _relaxation(cfg: SolverConfig, n: int, delta: float) -> float:
    lam = cfg.relaxation(n)
    if not 0.0 <= lam <= delta:
        raise InvalidStepSize(f"lambda_{n} = {lam} outside [0, {delta}]")
    return lam


def solve_projected_gradient(family: Family, obj, x0, cfg: Optional[SolverConfig] = None):
    """Relaxed projected-gradient iteration over the product of the sets.

    Runs x_{i,n+1} = x_{i,n} + lambda_n (P_i(x_{i,n} - gamma G_i(x_n)) - x_{i,n})
    blockwise until the product-space displacement drops below
    cfg.sweep_tol.  gamma must lie in ]0, 2*beta[ for the objective's
    gradient Lipschitz bound 1/beta; the default is gamma = beta.

    Returns a ProductSolution whose blocks lie in their sets (within
    cfg.cycle_tol) and satisfy the blockwise fixed-point identity within
    cfg.fixpoint_tol.  Raises NotConverged (solution attached) otherwise.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    x = as_product_point(x0, m=family.m, dim=family.dim).copy()
    if obj.m != family.m:
        raise BlockCountMismatch(f"objective expects m={obj.m}, family has m={family.m}")
    beta = 1.0 / float(obj.lipschitz_inverse_beta)
    gamma = beta if cfg.gamma is None else float(cfg.gamma)
    if not 0.0 < gamma < 2.0 * beta:
        raise InvalidStepSize(f"gamma = {gamma} outside ]0, {2.0 * beta}[")
    delta = min(1.0, beta / gamma) + 0.5

    log = [IterationRecord(0, obj.value(x), math.nan, math.nan, x.copy())]
    stop_reason = "max_iterations"
    iterations = 0
    for n in range(cfg.max_iters):
        grad = obj.gradient(x)
        proj = project_blocks(family, x - gamma * grad)
        stationarity = float(np.max(np.linalg.norm(proj - x, axis=1)))
        lam = _relaxation(cfg, n, delta)
        x_new = x + lam * (proj - x)
        displacement = float(np.linalg.norm(x_new - x))
        x = x_new
        iterations = n + 1
        log.append(IterationRecord(iterations, obj.value(x), displacement, stationarity, x.copy()))
        if displacement <= cfg.sweep_tol:
            stop_reason = "converged"
            break

    solution = _certify(family, x, obj, gamma, iterations, stop_reason, log)
    if (
        stop_reason != "converged"
        or solution.membership > cfg.cycle_tol
        or solution.stationarity > cfg.fixpoint_tol
    ):
        raise NotConverged(
            f"projected-gradient run stopped after {iterations} iterations "
            f"(stop_reason={stop_reason}, stationarity={solution.stationarity:.3e})",
            solution=solution,
        )
    return solution


def solve_parallel(family: Family, x0, cfg: Optional[SolverConfig] = None, variant: str = "others_mean"):
    """Parallel projections: every block projects a mean of the others.

    variant "others_mean" iterates x_{i,n+1} = P_i(mean of the other
    blocks) and needs m >= 3; "full_mean" iterates x_{i,n+1} = P_i(mean of
    all blocks) and works for m >= 2.  The limit tuple minimizes the sum
    of squared pairwise distances over the product of the sets, and the
    block average of the limit is the returned fair point.
    """
    if variant not in PARALLEL_VARIANTS:
        raise ValueError(f"variant must be one of {PARALLEL_VARIANTS}")
    m = family.m
    if variant == "others_mean" and m < 3:
        raise TooFewSets("others_mean needs at least three sets")
    cfg = cfg if cfg is not None else SolverConfig()
    x = as_product_point(x0, m=m, dim=family.dim).copy()
    pairwise = PairwiseSquared(m)

    log = [IterationRecord(0, pairwise.value(x), math.nan, math.nan, x.copy())]
    stop_reason = "max_iterations"
    iterations = 0
    for n in range(cfg.max_iters):
        s = x.sum(axis=0)
        if variant == "others_mean":
            target = (s - x) / (m - 1.0)
        else:
            target = np.broadcast_to(s / m, x.shape)
        proj = project_blocks(family, target)
        stationarity = float(np.max(np.linalg.norm(proj - x, axis=1)))
        displacement = float(np.linalg.norm(proj - x))
        x = proj
        iterations = n + 1
        log.append(IterationRecord(iterations, pairwise.value(x), displacement, stationarity, x.copy()))
        if displacement <= cfg.sweep_tol:
            stop_reason = "converged"
            break

    s = x.sum(axis=0)
    target = (s - x) / (m - 1.0) if variant == "others_mean" else np.broadcast_to(s / m, x.shape)
    stationarity = float(np.max(np.linalg.norm(project_blocks(family, target) - x, axis=1)))
    membership = float(np.max(np.linalg.norm(project_blocks(family, x) - x, axis=1)))
    solution = ProductSolution(
        blocks=x,
        fair_point=x.mean(axis=0),
        objective=pairwise.value(x),
        stationarity=stationarity,
        membership=membership,
        iterations=iterations,
        stop_reason=stop_reason,
        log=tuple(log),
    )
    if stop_reason != "converged" or solution.stationarity > cfg.fixpoint_tol:
        raise NotConverged(
            f"parallel run stopped after {iterations} iterations "
            f"(stop_reason={stop_reason}, stationarity={solution.stationarity:.3e})",
            solution=solution,
        )
    return solution


def _certify(family, x, obj, gamma, iterations, stop_reason, log) -> ProductSolution:
    grad = obj.gradient(x)
    proj = project_blocks(family, x - gamma * grad)
    stationarity = float(np.max(np.linalg.norm(proj - x, axis=1)))
    membership = float(np.max(np.linalg.norm(project_blocks(family, x) - x, axis=1)))
    return ProductSolution(
        blocks=x,
        fair_point=x.mean(axis=0),
        objective=obj.value(x),
        stationarity=stationarity,
        membership=membership,
        iterations=iterations,
        stop_reason=stop_reason,
        log=tuple(log),
    )


def fair_point_residual(family: Family, y) -> float:
    """||y - mean_i P_i y||: zero iff y is the average of its projections.

    Stationarity of phi(y) = sum_i ||y - P_i y||^2 is equivalent to that
    average property, so a small residual certifies an approximate
    minimizer of phi.
    """
    v = as_vector(y, family.dim)
    mean = np.mean([s.project(v) for s in family.sets], axis=0)
    return float(np.linalg.norm(v - mean))


def fixpoint_check(family: Family, blocks):
    """Residuals of the two alternating fixed-point identities.

    Returns (r1, r2) with r1 = ||y - P_C(P_D y)|| and r2 = ||z - P_D(P_C z)||
    where z = P_D y, P_C projects blockwise and P_D onto the diagonal.
    Small r1 certifies y as a minimizer of the pairwise objective over the
    product; small r2 certifies the block average as a fair point.
    """
    y = as_product_point(blocks, m=family.m, dim=family.dim)
    z = diagonal_project(y)
    pcz = project_blocks(family, z)
    r1 = float(np.linalg.norm(y - pcz))
    r2 = float(np.linalg.norm(z - diagonal_project(pcz)))
    return r1, r2


def write_iteration_csv(log, path) -> None:
    """Iteration log rows: iter,objective_value,displacement,stationarity_residual,blocks."""
    if not log:
        raise ValueError("empty iteration log")
    m, d = log[0].blocks.shape
    header = ["iter", "objective_value", "displacement", "stationarity_residual"]
    header += [f"block{i}_x{j}" for i in range(m) for j in range(d)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for rec in log:
            row = [
                rec.iteration,
                repr(float(rec.objective)),
                repr(float(rec.displacement)),
                repr(float(rec.stationarity)),
            ]
            row += [repr(float(c)) for c in rec.blocks.ravel()]
            writer.writerow(row)
