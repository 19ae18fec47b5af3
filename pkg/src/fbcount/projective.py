"""Points and lines of RP^2 with the round metric of the double-covering sphere.

A projective point is stored as a unit 3-vector in sign-canonical form (largest
absolute coordinate positive, ties broken by index order).  An oriented
geodesic is stored by its signed unit pole; the traversal direction at a point
``x`` on the geodesic is ``pole x x``.
"""
from __future__ import annotations

import math

import numpy as np

from .config import DEFAULT
from .errors import DegeneratePair, OnBoundary, PointNotOnGeodesic


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    n = math.sqrt(float(v @ v))
    if n == 0.0:
        raise ValueError("zero vector has no direction")
    return v / n


def canonical(v) -> np.ndarray:
    """Unit representative whose largest-magnitude coordinate is positive."""
    u = _unit(v)
    # argmax returns the first index on ties, which is the tie-break rule
    i = int(np.argmax(np.abs(u)))
    if u[i] < 0:
        u = -u
    return u


def canonical_rows(v: np.ndarray) -> np.ndarray:
    """Vectorised :func:`canonical` over the rows of an (n, 3) array."""
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    idx = np.argmax(np.abs(v), axis=-1)
    s = np.sign(np.take_along_axis(v, idx[..., None], axis=-1))
    return v * s


class ProjectivePoint:
    __slots__ = ("rep",)

    def __init__(self, v):
        rep = canonical(v)
        rep.flags.writeable = False
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, name, value):
        raise AttributeError("ProjectivePoint is immutable")

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return bool(np.array_equal(self.rep, other.rep))

    def __hash__(self):
        return hash(self.rep.tobytes())

    def __repr__(self):
        x, y, z = self.rep
        return f"ProjectivePoint({x:.12g}, {y:.12g}, {z:.12g})"


class OrientedGeodesic:
    __slots__ = ("pole",)

    def __init__(self, pole):
        p = _unit(pole)
        p.flags.writeable = False
        object.__setattr__(self, "pole", p)

    def __setattr__(self, name, value):
        raise AttributeError("OrientedGeodesic is immutable")

    def reversed(self) -> "OrientedGeodesic":
        return OrientedGeodesic(-self.pole)

    @property
    def line(self) -> ProjectivePoint:
        """The unoriented projective line, identified with its canonical pole."""
        return ProjectivePoint(self.pole)

    def contains(self, p: ProjectivePoint, tol: float = 1e-10) -> bool:
        return abs(float(p.rep @ self.pole)) < tol

    def __eq__(self, other):
        if not isinstance(other, OrientedGeodesic):
            return NotImplemented
        return bool(np.array_equal(self.pole, other.pole))

    def __hash__(self):
        return hash(self.pole.tobytes())

    def __repr__(self):
        x, y, z = self.pole
        return f"OrientedGeodesic(pole=({x:.12g}, {y:.12g}, {z:.12g}))"


def proj_distance(p: ProjectivePoint, q: ProjectivePoint) -> float:
    c = min(1.0, abs(float(p.rep @ q.rep)))
    # arccos loses precision near 0; atan2 of |cross| and |dot| does not
    s = float(np.linalg.norm(np.cross(p.rep, q.rep)))
    return math.atan2(s, c)


def dualize_point(p: ProjectivePoint) -> OrientedGeodesic:
    return OrientedGeodesic(p.rep)


def dualize_geodesic(g: OrientedGeodesic) -> ProjectivePoint:
    return ProjectivePoint(g.pole)


def geodesic_through(p: ProjectivePoint, q: ProjectivePoint, tol_sep: float | None = None) -> OrientedGeodesic:
    tol_sep = DEFAULT.tol_sep if tol_sep is None else tol_sep
    if proj_distance(p, q) <= tol_sep:
        raise DegeneratePair("points coincide within tol_sep")
    return OrientedGeodesic(np.cross(p.rep, q.rep))


def point_along(g: OrientedGeodesic, start: ProjectivePoint, s: float) -> ProjectivePoint:
    x = start.rep
    if abs(float(x @ g.pole)) > 1e-10:
        raise PointNotOnGeodesic(f"|x.pole| = {abs(float(x @ g.pole)):.3g}")
    return ProjectivePoint(math.cos(s) * x + math.sin(s) * np.cross(g.pole, x))


def region_sign(x, pole1, pole2) -> float:
    """Raw sign of (x.pole1)(x.pole2); invariant under x -> -x."""
    return float(np.sign((np.asarray(x) @ pole1) * (np.asarray(x) @ pole2)))


def region_class(x: ProjectivePoint, g1: OrientedGeodesic, g2: OrientedGeodesic,
                 tol_on: float | None = None) -> int:
    tol_on = DEFAULT.tol_on if tol_on is None else tol_on
    d1 = float(x.rep @ g1.pole)
    d2 = float(x.rep @ g2.pole)
    if abs(d1) <= tol_on or abs(d2) <= tol_on:
        raise OnBoundary("point lies on a bounding geodesic")
    return 1 if d1 * d2 > 0 else -1
