"""Triangles, barycentric coordinates and affine maps in the plane.

Scalar inputs (a single point) return the small named tuples below; ``(n, 2)``
arrays of points are handled in one vectorized pass and return arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DegenerateTriangle, OutOfRange

#: relative degeneracy threshold, scaled by the squared diameter
DEGENERACY_RTOL = 1e-12
#: default classify tolerance, scaled by the diameter
CLASSIFY_RTOL = 1e-9


class Point(NamedTuple):
    x: float
    y: float


class Barycentric(NamedTuple):
    """Weights of corners A, B and C."""

    w1: float
    w2: float
    w3: float


class FaceClass(NamedTuple):
    tag: str  # "outside", "vertex", "edge" or "interior"
    k: int | None  # dimension of the smallest containing face


def _as_point(p) -> Point:
    x, y = (float(v) for v in p)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite point {p!r}")
    return Point(x, y)


@dataclass(frozen=True)
class Triangle:
    """Nondegenerate triangle with labeled corners A, B, C.

    Corner order matters: subdivision digits and discrepancy anchors are
    defined relative to it.
    """

    a: Point
    b: Point
    c: Point

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _as_point(getattr(self, name)))
        if abs(self.cross2()) <= DEGENERACY_RTOL * self.diameter**2:
            raise DegenerateTriangle(f"corners {self.a}, {self.b}, {self.c} are collinear")

    @property
    def vertices(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    def cross2(self) -> float:
        """Twice the signed area (positive when A, B, C run anticlockwise)."""
        return (self.b.x - self.a.x) * (self.c.y - self.a.y) - (self.b.y - self.a.y) * (
            self.c.x - self.a.x
        )

    @property
    def area(self) -> float:
        return 0.5 * abs(self.cross2())

    @property
    def diameter(self) -> float:
        a, b, c = self.a, self.b, self.c
        return max(math.dist(a, b), math.dist(b, c), math.dist(a, c))

    @property
    def centroid(self) -> Point:
        return Point((self.a.x + self.b.x + self.c.x) / 3, (self.a.y + self.b.y + self.c.y) / 3)

    @property
    def inradius(self) -> float:
        a, b, c = self.a, self.b, self.c
        return 2 * self.area / (math.dist(a, b) + math.dist(b, c) + math.dist(a, c))

    def bounding_box(self) -> tuple[float, float, float, float]:
        v = self.vertices
        return v[:, 0].min(), v[:, 1].min(), v[:, 0].max(), v[:, 1].max()

    def same_corners(self, other: Triangle, tol: float = 1e-12) -> bool:
        """True when both triangles have the same corner set, in any order."""
        mine = sorted(self.vertices.tolist())
        theirs = sorted(other.vertices.tolist())
        return bool(np.allclose(mine, theirs, rtol=0, atol=tol))


def make_triangle(a, b, c) -> Triangle:
    return Triangle(_as_point(a), _as_point(b), _as_point(c))


def reference_triangle(kind: str) -> Triangle:
    """Named reference triangles.

    ``equilateral_unit_area`` has side ``2 / 3**0.25`` and area 1,
    ``pillards_cools`` is ((0,0), (0,1), (1,1)) and ``right_unit`` is
    ((0,0), (0,1), (1,0)).
    """
    if kind == "equilateral_unit_area":
        side = 2.0 / 3.0**0.25
        return Triangle((0.0, 0.0), (side, 0.0), (side / 2, side * math.sqrt(3.0) / 2))
    if kind == "pillards_cools":
        return Triangle((0.0, 0.0), (0.0, 1.0), (1.0, 1.0))
    if kind == "right_unit":
        return Triangle((0.0, 0.0), (0.0, 1.0), (1.0, 0.0))
    raise ValueError(f"unknown reference triangle {kind!r}")


def to_barycentric(t: Triangle, p):
    """Barycentric weights of ``p`` with respect to ``t``.

    ``w3`` is computed as ``1 - w1 - w2`` so the weights sum to one exactly.
    Accepts a single point (returns :class:`Barycentric`) or an ``(n, 2)``
    array (returns an ``(n, 3)`` array).
    """
    pts = np.asarray(p, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    c = np.array(t.c)
    # p - C = w1 (A - C) + w2 (B - C)
    e1 = np.array(t.a) - c
    e2 = np.array(t.b) - c
    det = e1[0] * e2[1] - e1[1] * e2[0]
    dx = pts[:, 0] - c[0]
    dy = pts[:, 1] - c[1]
    w1 = (dx * e2[1] - dy * e2[0]) / det
    w2 = (e1[0] * dy - e1[1] * dx) / det
    out = np.column_stack([w1, w2, 1.0 - w1 - w2])
    if single:
        return Barycentric(*(float(v) for v in out[0]))
    return out


def from_barycentric(t: Triangle, w):
    """Affine combination ``w1 A + w2 B + w3 C`` (vectorized over rows)."""
    ws = np.asarray(w, dtype=float)
    pts = np.atleast_2d(ws) @ t.vertices
    if ws.ndim == 1:
        return Point(float(pts[0, 0]), float(pts[0, 1]))
    return pts


@dataclass(frozen=True)
class AffineMap:
    linear: np.ndarray = field(repr=False)
    translation: np.ndarray = field(repr=False)

    def __call__(self, p):
        return apply(self, p)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))


def affine_map(src: Triangle, dst: Triangle) -> AffineMap:
    """The unique affine map sending the corners of ``src`` to those of ``dst``."""
    if not isinstance(src, Triangle):
        src = Triangle(*src)
    s = np.column_stack([np.subtract(src.b, src.a), np.subtract(src.c, src.a)])
    d = np.column_stack([np.subtract(dst.b, dst.a), np.subtract(dst.c, dst.a)])
    linear = d @ np.linalg.inv(s)
    translation = np.array(dst.a) - linear @ np.array(src.a)
    linear.setflags(write=False)
    translation.setflags(write=False)
    return AffineMap(linear, translation)


def apply(m: AffineMap, p):
    pts = np.asarray(p, dtype=float)
    out = np.atleast_2d(pts) @ m.linear.T + m.translation
    if pts.ndim == 1:
        return Point(float(out[0, 0]), float(out[0, 1]))
    return out


def map_triangle(m: AffineMap, t: Triangle) -> Triangle:
    return Triangle(*(apply(m, v) for v in (t.a, t.b, t.c)))


def default_tol(t: Triangle) -> float:
    return CLASSIFY_RTOL * t.diameter


def _segment_distance(pts: np.ndarray, p0: np.ndarray, p1: np.ndarray) -> np.ndarray:
    d = p1 - p0
    s = np.clip(((pts - p0) @ d) / (d @ d), 0.0, 1.0)
    return np.hypot(*(pts - (p0 + s[:, None] * d)).T)


def face_dimension(t: Triangle, pts, tol: float | None = None) -> np.ndarray:
    """Smallest containing face dimension per point; -1 for outside.

    Vertex (0) is tested before edge (1), which is tested before the
    barycentric sign test for interior (2).
    """
    if tol is None:
        tol = default_tol(t)
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    verts = t.vertices
    out = np.full(len(pts), -1, dtype=np.int8)

    near_vertex = np.zeros(len(pts), dtype=bool)
    for v in verts:
        near_vertex |= np.hypot(*(pts - v).T) <= tol
    near_edge = np.zeros(len(pts), dtype=bool)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        near_edge |= _segment_distance(pts, verts[i], verts[j]) <= tol
    inside = to_barycentric(t, pts).min(axis=1) > 0

    out[inside] = 2
    out[near_edge] = 1
    out[near_vertex] = 0
    return out


def classify(t: Triangle, p, tol: float | None = None) -> FaceClass:
    k = int(face_dimension(t, [p], tol)[0])
    return FaceClass(("outside", "vertex", "edge", "interior")[k + 1], None if k < 0 else k)


def corner_box_fraction(t_frac, u_frac):
    """Relative area of the corner-anchored parallelogram clipped to the triangle.

    With side fractions ``t`` and ``u`` measured from the anchor corner, the
    clipped region covers ``2 t u - max(0, t + u - 1)**2`` of the triangle.
    Broadcasts over array arguments.
    """
    t = np.asarray(t_frac, dtype=float)
    u = np.asarray(u_frac, dtype=float)
    if np.any((t < 0) | (t > 1) | (u < 0) | (u > 1)) or np.any(np.isnan(t) | np.isnan(u)):
        raise OutOfRange("side fractions must lie in [0, 1]")
    excess = np.maximum(t + u - 1.0, 0.0)
    out = 2.0 * t * u - excess * excess
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Ordered points tied to a domain triangle, plus a generator descriptor."""

    domain: Triangle
    points: np.ndarray = field(repr=False)
    meta: str = ""

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def check_inside(self, tol: float | None = None) -> None:
        """Raise ``ValueError`` if any point lies outside the closed domain."""
        if len(self.points) and np.any(face_dimension(self.domain, self.points, tol) < 0):
            raise ValueError("sample set has points outside its domain")

    def barycentric(self) -> np.ndarray:
        return to_barycentric(self.domain, self.points)

    def mapped(self, m: AffineMap, meta: str | None = None) -> SampleSet:
        return SampleSet(map_triangle(m, self.domain), apply(m, self.points), self.meta if meta is None else meta)
