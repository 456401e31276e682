"""Rotated-lattice (Kronecker-type) point sets on a triangle.

A copy of Z^2 scaled by 1/sqrt(2N) is rotated by an angle whose tangent is a
quadratic irrational and clipped to R = ((0,0), (0,1), (1,0)). The points
are then mapped affinely onto any target triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotAdmissible, OutOfRange
from .geometry import SampleSet, Triangle, affine_map, apply, face_dimension, reference_triangle
from .vdc import vdc_point

CLIP_TOL = 1e-12


def _is_square(c: int) -> bool:
    return c >= 0 and math.isqrt(c) ** 2 == c


@dataclass(frozen=True)
class QuadraticIrrationalTangent:
    """The number ``(a + b sqrt(c)) / d`` used as the tangent of the angle."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer")
            object.__setattr__(self, name, int(v))
        if self.b == 0 or self.d == 0:
            raise ValueError("b and d must be nonzero")
        if self.c <= 0 or _is_square(self.c):
            raise ValueError("c must be a positive non-square integer")

    @property
    def value(self) -> float:
        return (self.a + self.b * math.sqrt(self.c)) / self.d

    @property
    def angle(self) -> float:
        """The angle in (0, pi) whose tangent is :attr:`value`."""
        return math.atan(self.value) % math.pi

    def normalized(self) -> QuadraticIrrationalTangent:
        """Same number with ``d > 0`` and common factors removed."""
        a, b, c, d = self.a, self.b, self.c, self.d
        if d < 0:
            a, b, d = -a, -b, -d
        g = math.gcd(math.gcd(a, b), d)
        return QuadraticIrrationalTangent(a // g, b // g, c, d // g)


def default_angle() -> QuadraticIrrationalTangent:
    """tan(3 pi / 8) = 1 + sqrt(2)."""
    return QuadraticIrrationalTangent(1, 1, 2, 1)


def check_admissible(q: QuadraticIrrationalTangent):
    """Exact forms of tan(alpha), tan(alpha - pi/2) and tan(alpha - 3 pi/4).

    All three must be finite quadratic irrationals, which makes them badly
    approximable. With ``tan(alpha) = (a + b sqrt c) / d``::

        tan(alpha - pi/2)   = -d / (a + b sqrt c)
                            = (-d a + b d sqrt c) / (a^2 - b^2 c)
        tan(alpha - 3 pi/4) = (d + a + b sqrt c) / (d - a - b sqrt c)
                            = (d^2 - a^2 + b^2 c + 2 b d sqrt c) / ((d - a)^2 - b^2 c)

    Raises
    ------
    NotAdmissible
        If a denominator vanishes (impossible for non-square ``c``).
    """
    a, b, c, d = q.a, q.b, q.c, q.d
    den1 = a * a - b * b * c
    den2 = (d - a) ** 2 - b * b * c
    if den1 == 0 or den2 == 0:
        raise NotAdmissible(f"{q} gives an infinite derived tangent")
    perp = QuadraticIrrationalTangent(-d * a, b * d, c, den1).normalized()
    diag = QuadraticIrrationalTangent(d * d - a * a + b * b * c, 2 * b * d, c, den2).normalized()
    return q.normalized(), perp, diag


@dataclass(frozen=True)
class LatticeConfig:
    """Parameters of one lattice point set.

    ``angle`` is either a :class:`QuadraticIrrationalTangent` or, only with
    ``unsafe_angle=True``, a raw angle in radians that carries no discrepancy
    guarantee. If ``shift`` is None and ``seed`` is given, a shift uniform on
    [-1/2, 1/2)^2 is drawn from the seed.
    """

    n: int
    angle: QuadraticIrrationalTangent | float = default_angle()
    shift: tuple[float, float] | None = None
    exact_count: bool = False
    seed: int | None = None
    unsafe_angle: bool = False

    def __post_init__(self):
        if self.n <= 1:
            raise OutOfRange("lattice target N must exceed 1")
        if not isinstance(self.angle, QuadraticIrrationalTangent) and not self.unsafe_angle:
            raise ValueError("raw radian angles need unsafe_angle=True")
        if self.shift is not None:
            sx, sy = (float(v) for v in self.shift)
            if not (-0.5 <= sx < 0.5 and -0.5 <= sy < 0.5):
                raise OutOfRange("shift must lie in [-1/2, 1/2)^2")
            object.__setattr__(self, "shift", (sx, sy))

    @property
    def radians(self) -> float:
        if isinstance(self.angle, QuadraticIrrationalTangent):
            return self.angle.angle
        return float(self.angle)

    def resolved_shift(self) -> tuple[float, float] | None:
        if self.shift is not None:
            return self.shift
        if self.seed is not None:
            return random_shift(self.seed)
        return None


def random_shift(seed: int) -> tuple[float, float]:
    sx, sy = np.random.default_rng(seed).uniform(-0.5, 0.5, size=2)
    return float(sx), float(sy)


def _rotated_grid(n_target: int, alpha: float, shift) -> np.ndarray:
    n = math.ceil(math.sqrt(2 * n_target)) + 1
    ij = np.arange(-n, n + 1, dtype=float)
    grid = np.stack(np.meshgrid(ij, ij, indexing="ij"), axis=-1).reshape(-1, 2)
    if shift is not None:
        grid = grid + np.asarray(shift)
    ca, sa = math.cos(alpha), math.sin(alpha)
    rot = np.array([[ca, -sa], [sa, ca]])
    return (grid / math.sqrt(2 * n_target)) @ rot.T


def _adjust_count(pts: np.ndarray, n: int, domain: Triangle) -> np.ndarray:
    if len(pts) > n:
        return pts[:n]
    extra = []
    i = 0
    while len(pts) + len(extra) < n:
        p = np.array(vdc_point(domain, i))
        i += 1
        have = np.vstack([pts, *extra]) if extra else pts
        if len(have) and np.min(np.hypot(*(have - p).T)) <= CLIP_TOL:
            continue
        extra.append(p[None, :])
    pts = np.vstack([pts, *extra]) if extra else pts
    return pts[np.lexsort((pts[:, 1], pts[:, 0]))]


def kronecker_lattice(cfg: LatticeConfig) -> SampleSet:
    """Rotated lattice points in R, sorted lexicographically by (x, y).

    With ``exact_count`` the sorted list is truncated, or padded with
    van der Corput points of R that are not already present.
    """
    R = reference_triangle("right_unit")
    shift = cfg.resolved_shift()
    pts = _rotated_grid(cfg.n, cfg.radians, shift)
    pts = pts[face_dimension(R, pts, CLIP_TOL) >= 0]
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]
    if cfg.exact_count:
        pts = _adjust_count(pts, cfg.n, R)
    angle = cfg.angle if isinstance(cfg.angle, QuadraticIrrationalTangent) else f"{cfg.radians!r}rad"
    meta = f"lattice(n={cfg.n},angle={angle},shift={shift},exact_count={cfg.exact_count})"
    return SampleSet(R, pts, meta)


def kronecker_on_triangle(cfg: LatticeConfig, target: Triangle) -> SampleSet:
    """Lattice points mapped from R onto ``target``: A + (C-A) x1 + (B-A) x2."""
    base = kronecker_lattice(cfg)
    m = affine_map(base.domain, target)
    return SampleSet(target, apply(m, base.points), base.meta)
