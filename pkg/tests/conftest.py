"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import math

import numpy as np

from cyclex import (
    AffineSubspace,
    Ball,
    Box,
    Ellipsoid,
    Halfspace,
    Ray,
    Segment,
    Singleton,
)

VARIANTS = (
    "singleton",
    "segment",
    "ray",
    "ball",
    "box",
    "halfspace",
    "affine",
    "ellipsoid",
)


def random_unit(rng, dim):
    while True:
        g = rng.standard_normal(dim)
        n = float(np.linalg.norm(g))
        if n > 1e-6:
            return g / n


def make_set(variant, dim, rng):
    """A random instance of one catalog variant in the given dimension."""
    if variant == "singleton":
        return Singleton(rng.uniform(-5, 5, dim))
    if variant == "segment":
        a = rng.uniform(-5, 5, dim)
        if rng.random() < 0.05:
            return Segment(a, a)  # degenerate endpoint pair
        return Segment(a, rng.uniform(-5, 5, dim))
    if variant == "ray":
        return Ray(random_unit(rng, dim) * rng.uniform(0.5, 2.0))
    if variant == "ball":
        return Ball(rng.uniform(-5, 5, dim), rng.uniform(0.0, 3.0))
    if variant == "box":
        lower = rng.uniform(-5, 0, dim)
        return Box(lower, lower + rng.uniform(0.0, 4.0, dim))
    if variant == "halfspace":
        return Halfspace(random_unit(rng, dim), rng.uniform(-5, 5))
    if variant == "affine":
        k = int(rng.integers(1, dim + 1))
        q, _ = np.linalg.qr(rng.standard_normal((dim, k)))
        return AffineSubspace(rng.uniform(-5, 5, dim), q.T)
    if variant == "ellipsoid":
        return Ellipsoid(rng.uniform(-5, 5, dim), rng.uniform(0.3, 3.0, dim))
    raise ValueError(variant)


def ellipse_boundary_oracle(ellipsoid: Ellipsoid, x, grid=4096):
    """Nearest boundary point of a 2-D ellipse by dense search over the
    boundary parameterization: grid scan, golden section, then a bisection
    polish on the (analytic) distance derivative, which sidesteps the
    sqrt-eps accuracy floor of comparison-only minimization.

    Independent of the secular-equation path; valid for exterior points,
    where the nearest point of the solid ellipse lies on the boundary.
    """
    c = ellipsoid.center
    a1, a2 = ellipsoid.axes
    x = np.asarray(x, float)

    def boundary(theta):
        return np.stack([c[0] + a1 * np.cos(theta), c[1] + a2 * np.sin(theta)], axis=-1)

    def dist2(theta):
        p = boundary(theta)
        d = p - x
        return np.sum(d * d, axis=-1)

    def ddist2(theta):
        px = c[0] + a1 * math.cos(theta)
        py = c[1] + a2 * math.sin(theta)
        return -2.0 * ((x[0] - px) * (-a1 * math.sin(theta)) + (x[1] - py) * (a2 * math.cos(theta)))

    thetas = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    k = int(np.argmin(dist2(thetas)))
    span = 2.0 * math.pi / grid
    lo, hi = thetas[k] - span, thetas[k] + span

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    u, v = hi - invphi * (hi - lo), lo + invphi * (hi - lo)
    fu, fv = dist2(u), dist2(v)
    while hi - lo > 1e-6:
        if fu < fv:
            hi, v, fv = v, u, fu
            u = hi - invphi * (hi - lo)
            fu = dist2(u)
        else:
            lo, u, fu = u, v, fv
            v = lo + invphi * (hi - lo)
            fv = dist2(v)

    glo, ghi = ddist2(lo), ddist2(hi)
    if glo < 0.0 < ghi:
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if ddist2(mid) < 0.0:
                lo = mid
            else:
                hi = mid
    return boundary(0.5 * (lo + hi))


def central_difference_gradient(obj, y, h=1e-6):
    """Blockwise central finite differences of an objective's value."""
    y = np.asarray(y, float)
    grad = np.zeros_like(y)
    for i in range(y.shape[0]):
        for j in range(y.shape[1]):
            bump = np.zeros_like(y)
            bump[i, j] = h
            grad[i, j] = (obj.value(y + bump) - obj.value(y - bump)) / (2.0 * h)
    return grad


def equilateral_ball_family_oracle(centers, radius):
    """Symmetric limit of the parallel scheme on equidistant balls.

    Reduces to the travel distance t of every block from its center
    toward the common centroid and solves the 1-D fixed-point equation
    t = min(radius, distance from center to the mean of the other blocks)
    by bisection on [0, R0].
    """
    centers = np.asarray(centers, float)
    centroid = centers.mean(axis=0)
    r0 = float(np.linalg.norm(centroid - centers[0]))

    def step(t):
        # mean of the others sits at distance r0 + (r0 - t)/2 from a center
        return min(radius, r0 + 0.5 * (r0 - t))

    lo, hi = 0.0, r0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if step(mid) > mid:
            lo = mid
        else:
            hi = mid
    t = 0.5 * (lo + hi)
    blocks = []
    for c in centers:
        v = (centroid - c) / np.linalg.norm(centroid - c)
        blocks.append(c + t * v)
    return np.asarray(blocks), t
