"""Exact nearest-point projections onto a catalog of closed convex sets.

Points are plain 1-D float64 numpy arrays.  Every set variant stores its
defining data read-only and exposes ``project``, a membership ``sample``
used by probe-style tests, and a JSON ``descriptor`` round-trip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EllipsoidNewtonFailure

ORTHONORMAL_TOL = 1e-12

_SECULAR_TOL = 1e-13
_SECULAR_MAX_ITER = 200


def as_vector(x, dim=None) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D float64 array, optionally checking length."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"expected a nonempty 1-D point, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("point has non-finite coordinates")
    if dim is not None and v.shape[0] != dim:
        raise DimensionMismatch(f"point has dimension {v.shape[0]}, expected {dim}")
    return v


def _frozen(x, name="value") -> np.ndarray:
    v = np.array(x, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D array")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} has non-finite entries")
    v.flags.writeable = False
    return v


class ConvexSet:
    """A nonempty closed convex subset of R^dim with an exact projection."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    @property
    def bounded(self) -> bool:
        raise NotImplementedError

    def project(self, x) -> np.ndarray:
        """Nearest point of the set to ``x``."""
        return self._project(as_vector(x, self.dim))

    def _project(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """A random member of the set (distribution unspecified)."""
        raise NotImplementedError

    def descriptor(self) -> dict:
        """JSON-serializable descriptor, inverse of :func:`from_descriptor`."""
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Singleton(ConvexSet):
    """The one-point set {point}."""

    point: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _frozen(self.point, "point"))

    @property
    def dim(self):
        return self.point.shape[0]

    bounded = True

    def _project(self, x):
        return self.point.copy()

    def sample(self, rng):
        return self.point.copy()

    def descriptor(self):
        return {"type": "singleton", "point": self.point.tolist()}


@dataclass(frozen=True, eq=False)
class Segment(ConvexSet):
    """The closed segment [a, b]."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", _frozen(self.a, "a"))
        object.__setattr__(self, "b", _frozen(self.b, "b"))
        if self.a.shape[0] != self.b.shape[0]:
            raise DimensionMismatch("b must match the dimension of a")

    @property
    def dim(self):
        return self.a.shape[0]

    bounded = True

    def _project(self, x):
        d = self.b - self.a
        dd = float(d @ d)
        if dd == 0.0:
            return self.a.copy()
        t = float((x - self.a) @ d) / dd
        # clamped parameters return the stored endpoint bit-exactly
        if t <= 0.0:
            return self.a.copy()
        if t >= 1.0:
            return self.b.copy()
        return self.a + t * d

    def sample(self, rng):
        t = rng.random()
        return self.a + t * (self.b - self.a)

    def descriptor(self):
        return {"type": "segment", "a": self.a.tolist(), "b": self.b.tolist()}


@dataclass(frozen=True, eq=False)
class Ray(ConvexSet):
    """The ray {t * direction : t >= 0} anchored at the origin."""

    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "direction", _frozen(self.direction, "direction"))
        if float(self.direction @ self.direction) == 0.0:
            raise ValueError("direction must be nonzero")

    @property
    def dim(self):
        return self.direction.shape[0]

    bounded = False

    def _project(self, x):
        u = self.direction
        t = float(x @ u) / float(u @ u)
        if t <= 0.0:
            return np.zeros(self.dim)
        return t * u

    def sample(self, rng):
        return (10.0 * rng.random()) * self.direction

    def descriptor(self):
        return {"type": "ray", "direction": self.direction.tolist()}


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    """The closed ball of given center and radius."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center, "center"))
        object.__setattr__(self, "radius", float(self.radius))
        if not math.isfinite(self.radius) or self.radius < 0.0:
            raise ValueError("radius must be finite and >= 0")

    @property
    def dim(self):
        return self.center.shape[0]

    bounded = True

    def _project(self, x):
        w = x - self.center
        n = float(np.linalg.norm(w))
        if n <= self.radius:
            return x.copy()
        return self.center + (self.radius / n) * w

    def sample(self, rng):
        u = rng.standard_normal(self.dim)
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            return self.center.copy()
        r = self.radius * rng.random() ** (1.0 / self.dim)
        return self.center + (r / nu) * u

    def descriptor(self):
        return {"type": "ball", "center": self.center.tolist(), "radius": self.radius}


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    """The axis-aligned box [lower, upper]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", _frozen(self.lower, "lower"))
        object.__setattr__(self, "upper", _frozen(self.upper, "upper"))
        if self.lower.shape[0] != self.upper.shape[0]:
            raise DimensionMismatch("upper must match the dimension of lower")
        if np.any(self.lower > self.upper):
            raise ValueError("lower must be <= upper componentwise")

    @property
    def dim(self):
        return self.lower.shape[0]

    bounded = True

    def _project(self, x):
        return np.clip(x, self.lower, self.upper)

    def sample(self, rng):
        return self.lower + rng.random(self.dim) * (self.upper - self.lower)

    def descriptor(self):
        return {"type": "box", "lower": self.lower.tolist(), "upper": self.upper.tolist()}


@dataclass(frozen=True, eq=False)
class Halfspace(ConvexSet):
    """The halfspace {y : <normal, y> <= offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", _frozen(self.normal, "normal"))
        object.__setattr__(self, "offset", float(self.offset))
        if float(self.normal @ self.normal) == 0.0:
            raise ValueError("normal must be nonzero")
        if not math.isfinite(self.offset):
            raise ValueError("offset must be finite")

    @property
    def dim(self):
        return self.normal.shape[0]

    bounded = False

    def _project(self, x):
        s = float(self.normal @ x) - self.offset
        if s <= 0.0:
            return x.copy()
        return x - (s / float(self.normal @ self.normal)) * self.normal

    def sample(self, rng):
        g = 5.0 * rng.standard_normal(self.dim)
        s = float(self.normal @ g) - self.offset
        if s <= 0.0:
            return g
        # reflect across the boundary to land strictly inside
        return g - (2.0 * s / float(self.normal @ self.normal)) * self.normal

    def descriptor(self):
        return {"type": "halfspace", "normal": self.normal.tolist(), "offset": self.offset}


@dataclass(frozen=True, eq=False)
class AffineSubspace(ConvexSet):
    """An affine subspace given by an anchor and an orthonormal basis.

    ``basis`` holds the direction-space basis as rows; rows must be
    pairwise orthonormal to within ``ORTHONORMAL_TOL``.
    """

    anchor: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "anchor", _frozen(self.anchor, "anchor"))
        b = np.array(self.basis, dtype=float)
        if b.ndim != 2 or b.shape[0] == 0:
            raise ValueError("basis must be a nonempty 2-D array of row vectors")
        if not np.all(np.isfinite(b)):
            raise ValueError("basis has non-finite entries")
        if b.shape[1] != self.anchor.shape[0]:
            raise DimensionMismatch("basis vectors must match anchor dimension")
        if b.shape[0] > b.shape[1]:
            raise ValueError("basis has more vectors than the ambient dimension")
        gram = b @ b.T
        if float(np.max(np.abs(gram - np.eye(b.shape[0])))) > ORTHONORMAL_TOL:
            raise ValueError(f"basis rows must be orthonormal to {ORTHONORMAL_TOL:g}")
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @property
    def dim(self):
        return self.anchor.shape[0]

    bounded = False

    def _project(self, x):
        w = x - self.anchor
        return self.anchor + self.basis.T @ (self.basis @ w)

    def sample(self, rng):
        t = 5.0 * rng.standard_normal(self.basis.shape[0])
        return self.anchor + self.basis.T @ t

    def descriptor(self):
        return {"type": "affine", "anchor": self.anchor.tolist(), "basis": self.basis.tolist()}


@dataclass(frozen=True, eq=False)
class Ellipsoid(ConvexSet):
    """The solid ellipsoid {y : sum(((y_i - c_i)/axes_i)^2) <= 1}.

    The only variant without a closed-form projection: exterior points are
    projected by solving the scalar secular equation for the Lagrange
    multiplier with Newton steps inside a bisection safeguard.
    """

    center: np.ndarray
    axes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center, "center"))
        object.__setattr__(self, "axes", _frozen(self.axes, "axes"))
        if self.center.shape[0] != self.axes.shape[0]:
            raise DimensionMismatch("axes must match center dimension")
        if np.any(self.axes <= 0.0):
            raise ValueError("axes must be positive")

    @property
    def dim(self):
        return self.center.shape[0]

    bounded = True

    def _project(self, x):
        w = x - self.center
        a2 = self.axes * self.axes
        if float(np.sum((w / self.axes) ** 2)) <= 1.0:
            return x.copy()

        aw2 = a2 * w * w  # (a_i w_i)^2

        def secular(t):
            return float(np.sum(aw2 / (a2 + t) ** 2)) - 1.0

        lo = 0.0
        hi = float(np.linalg.norm(w)) * float(np.max(self.axes))
        # enlarge until the bracket straddles the root (f(0) > 0 outside)
        while secular(hi) > 0.0:
            hi *= 2.0
            if not math.isfinite(hi):
                raise EllipsoidNewtonFailure("secular equation could not be bracketed")

        t = lo
        f = secular(t)
        for _ in range(_SECULAR_MAX_ITER):
            if abs(f) <= _SECULAR_TOL:
                break
            df = -2.0 * float(np.sum(aw2 / (a2 + t) ** 3))
            t_new = t - f / df if df != 0.0 else 0.5 * (lo + hi)
            if not lo < t_new < hi:
                t_new = 0.5 * (lo + hi)
            f_new = secular(t_new)
            if f_new > 0.0:
                lo = t_new
            else:
                hi = t_new
            t, f = t_new, f_new
        else:
            raise EllipsoidNewtonFailure(
                f"secular residual {f:.3e} after {_SECULAR_MAX_ITER} iterations"
            )
        return self.center + (a2 * w) / (a2 + t)

    def sample(self, rng):
        u = rng.standard_normal(self.dim)
        nu = float(np.linalg.norm(u))
        if nu == 0.0:
            return self.center.copy()
        r = rng.random() ** (1.0 / self.dim)
        return self.center + self.axes * (r / nu) * u

    def descriptor(self):
        return {"type": "ellipsoid", "center": self.center.tolist(), "axes": self.axes.tolist()}


@dataclass(frozen=True, eq=False)
class Family:
    """An ordered family of m >= 2 convex sets sharing one ambient space."""

    sets: tuple

    def __post_init__(self):
        sets = tuple(self.sets)
        if len(sets) < 2:
            raise ValueError("a family needs at least two sets")
        dim = sets[0].dim
        for i, s in enumerate(sets):
            if not isinstance(s, ConvexSet):
                raise TypeError(f"sets[{i}] is not a ConvexSet")
            if s.dim != dim:
                raise DimensionMismatch(f"sets[{i}] has dimension {s.dim}, expected {dim}")
        object.__setattr__(self, "sets", sets)

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def dim(self) -> int:
        return self.sets[0].dim

    def descriptor(self):
        return [s.descriptor() for s in self.sets]


def project(s: ConvexSet, x) -> np.ndarray:
    """Nearest point of ``s`` to ``x``."""
    return s.project(x)


def min_norm_point(s: ConvexSet) -> np.ndarray:
    """The element of minimal norm of ``s`` (projection of the origin)."""
    return s.project(np.zeros(s.dim))


def contains(s: ConvexSet, x, tol: float) -> bool:
    """Whether ``x`` is within distance ``tol`` of ``s``."""
    if tol < 0.0:
        raise ValueError("tolerance must be >= 0")
    x = as_vector(x, s.dim)
    return float(np.linalg.norm(x - s.project(x))) <= tol


_DESCRIPTOR_FIELDS = {
    "singleton": ("point",),
    "segment": ("a", "b"),
    "ray": ("direction",),
    "ball": ("center", "radius"),
    "box": ("lower", "upper"),
    "halfspace": ("normal", "offset"),
    "affine": ("anchor", "basis"),
    "ellipsoid": ("center", "axes"),
}


def from_descriptor(desc: dict) -> ConvexSet:
    """Build a set from its JSON descriptor (see each variant's ``descriptor``)."""
    if not isinstance(desc, dict):
        raise ValueError("set descriptor must be a JSON object")
    kind = desc.get("type")
    if kind not in _DESCRIPTOR_FIELDS:
        known = ", ".join(sorted(_DESCRIPTOR_FIELDS))
        raise ValueError(f"unknown set type {kind!r} (known: {known})")
    missing = [f for f in _DESCRIPTOR_FIELDS[kind] if f not in desc]
    if missing:
        raise ValueError(f"{kind} descriptor missing fields: {', '.join(missing)}")
    extra = set(desc) - set(_DESCRIPTOR_FIELDS[kind]) - {"type"}
    if extra:
        raise ValueError(f"{kind} descriptor has unknown fields: {', '.join(sorted(extra))}")
    if kind == "singleton":
        return Singleton(desc["point"])
    if kind == "segment":
        return Segment(desc["a"], desc["b"])
    if kind == "ray":
        return Ray(desc["direction"])
    if kind == "ball":
        return Ball(desc["center"], desc["radius"])
    if kind == "box":
        return Box(desc["lower"], desc["upper"])
    if kind == "halfspace":
        return Halfspace(desc["normal"], desc["offset"])
    if kind == "affine":
        return AffineSubspace(desc["anchor"], desc["basis"])
    return Ellipsoid(desc["center"], desc["axes"])
