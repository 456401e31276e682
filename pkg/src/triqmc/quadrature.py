"""Equal-weight QMC quadrature on triangles and convergence studies.

The estimate of the integral of ``f`` over the domain is
``vol(domain) / N * sum_i sum_m f(x_i + m) w(x_i + m)``, where ``w`` is 1 in
the interior, 1/2 on an edge and 1/4 at a corner, and ``m`` runs over integer
translations. Translations are only used when the domain fits inside one unit
cell; otherwise a point could be counted twice in the interior.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from ._rng import derive_seed
from .errors import MissingExactIntegral, WrongDomain
from .generators import Generator
from .geometry import (
    SampleSet,
    Triangle,
    default_tol,
    face_dimension,
    from_barycentric,
    reference_triangle,
    to_barycentric,
)

_WEIGHT_BY_DIM = np.array([0.25, 0.5, 1.0, 0.0])  # index -1 (outside) wraps to 0.0
ORACLE_DEPTH = 10
ORACLE_AGREEMENT = 1e-9


def face_weights(t: Triangle, pts, tol: float | None = None) -> np.ndarray:
    return _WEIGHT_BY_DIM[face_dimension(t, pts, tol)]


def face_weight(t: Triangle, p, tol: float | None = None) -> float:
    """0 outside, 1 inside, 1/2 on an edge, 1/4 at a corner."""
    return float(face_weights(t, [p], tol)[0])


def fits_unit_cell(t: Triangle, tol: float = 1e-12) -> bool:
    x0, y0, x1, y1 = t.bounding_box()
    return x1 - x0 <= 1.0 + tol and y1 - y0 <= 1.0 + tol


def integer_shifts(t: Triangle, pts: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Integer vectors m for which some ``pts + m`` can touch ``t``."""
    if len(pts) == 0 or not fits_unit_cell(t):
        return np.zeros((1, 2), dtype=int)
    if tol is None:
        tol = default_tol(t)
    x0, y0, x1, y1 = t.bounding_box()
    mx = range(math.ceil(x0 - tol - pts[:, 0].max()), math.floor(x1 + tol - pts[:, 0].min()) + 1)
    my = range(math.ceil(y0 - tol - pts[:, 1].max()), math.floor(y1 + tol - pts[:, 1].min()) + 1)
    return np.array([(i, j) for i in mx for j in my], dtype=int).reshape(-1, 2)


@dataclass(frozen=True)
class Integrand:
    """A vectorized test function on a fixed domain.

    ``func`` maps an ``(n, 2)`` array of points to ``n`` values.
    ``exact`` is the integral over ``domain`` (None when unknown) and
    ``provenance`` says where it came from.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    domain: Triangle
    exact: float | None = None
    smoothness: str = "smooth"
    provenance: str = ""

    def __call__(self, pts) -> np.ndarray:
        return np.asarray(self.func(np.atleast_2d(np.asarray(pts, dtype=float))), dtype=float)

    @property
    def descriptor(self) -> str:
        return f"{self.name} [{self.smoothness}; exact: {self.provenance or 'unknown'}]"


def weighted_mean(ps: SampleSet, f, tol: float | None = None) -> float:
    """Boundary-weighted sample mean over all integer translates of the points."""
    n = len(ps)
    if n == 0:
        return 0.0
    total = 0.0
    for m in integer_shifts(ps.domain, ps.points, tol):
        moved = ps.points + m
        w = face_weights(ps.domain, moved, tol)
        hit = w > 0
        if hit.any():
            total += float(np.dot(w[hit], f(moved[hit])))
    return total / n


def integrate(ps: SampleSet, f, tol: float | None = None) -> float:
    return ps.domain.area * weighted_mean(ps, f, tol)


# exact integrals ---------------------------------------------------------


def monomial_integral(domain: Triangle, p: int, q: int, r: int) -> float:
    """Integral of w1^p w2^q w3^r over the domain: 2 vol p! q! r! / (p+q+r+2)!."""
    num = math.factorial(p) * math.factorial(q) * math.factorial(r)
    return 2.0 * domain.area * num / math.factorial(p + q + r + 2)


def subdivision_barycentrics(depth: int) -> np.ndarray:
    """Barycentric centroids of the 4^depth cells of the uniform subdivision."""
    m = 2**depth
    i, j = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    i, j = i.ravel(), j.ravel()
    up = i + j <= m - 1
    down = i + j <= m - 2
    w = np.vstack(
        [
            np.column_stack([(i[up] + 1 / 3) / m, (j[up] + 1 / 3) / m]),
            np.column_stack([(i[down] + 2 / 3) / m, (j[down] + 2 / 3) / m]),
        ]
    )
    return np.column_stack([w, 1.0 - w[:, 0] - w[:, 1]])


def centroid_rule(domain: Triangle, f, depth: int) -> float:
    pts = from_barycentric(domain, subdivision_barycentrics(depth))
    return domain.area * float(np.mean(f(pts)))


def oracle_integral(domain: Triangle, f, depth: int = ORACLE_DEPTH) -> float:
    """Richardson-extrapolated centroid rule at ``depth``.

    The extrapolations at ``depth - 1`` and ``depth`` must agree to
    ``ORACLE_AGREEMENT``; otherwise ``ArithmeticError`` is raised.
    """
    rules = [centroid_rule(domain, f, d) for d in (depth - 2, depth - 1, depth)]
    coarse = (4 * rules[1] - rules[0]) / 3
    fine = (4 * rules[2] - rules[1]) / 3
    if abs(fine - coarse) > ORACLE_AGREEMENT * max(1.0, abs(fine)):
        raise ArithmeticError(f"oracle did not settle: {coarse!r} vs {fine!r}")
    return fine


def clip_halfplane(poly: np.ndarray, point, normal) -> np.ndarray:
    """Part of a convex polygon where ``(x - point) . normal <= 0``."""
    side = (poly - np.asarray(point)) @ np.asarray(normal)
    out = []
    for k in range(len(poly)):
        j = (k + 1) % len(poly)
        if side[k] <= 0:
            out.append(poly[k])
        if (side[k] < 0 < side[j]) or (side[j] < 0 < side[k]):
            s = side[k] / (side[k] - side[j])
            out.append(poly[k] + s * (poly[j] - poly[k]))
    return np.array(out).reshape(-1, 2)


def polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


# built-in integrands -----------------------------------------------------

HALFPLANE_ANCHOR = (0.4, 0.35, 0.25)
HALFPLANE_ANGLE = 1.0


@lru_cache(maxsize=64)
def _cos2pi_exact(domain: Triangle) -> float:
    return oracle_integral(domain, _cos2pi)


def _cos2pi(pts):
    return np.cos(2 * np.pi * (pts[:, 0] + pts[:, 1]))


def builtin_integrands(domain: Triangle | None = None) -> list[Integrand]:
    """Test integrands with exact integrals over ``domain``.

    Defaults to the unit-area equilateral triangle. Barycentric monomials are
    named ``mono_pqr`` (total degree up to 4).
    """
    if domain is None:
        domain = reference_triangle("equilateral_unit_area")
    vol = domain.area
    out = [Integrand("const1", lambda x: np.ones(len(x)), domain, vol, "smooth", "volume")]

    for deg in range(5):
        for p in range(deg, -1, -1):
            for q in range(deg - p, -1, -1):
                r = deg - p - q

                def mono(x, p=p, q=q, r=r):
                    w = to_barycentric(domain, x)
                    return w[:, 0] ** p * w[:, 1] ** q * w[:, 2] ** r

                out.append(
                    Integrand(
                        f"mono_{p}{q}{r}", mono, domain, monomial_integral(domain, p, q, r), "smooth", "factorial formula"
                    )
                )

    out.append(
        Integrand(
            "cos2pi",
            _cos2pi,
            domain,
            _cos2pi_exact(domain),
            "smooth",
            f"Richardson centroid rule, depth {ORACLE_DEPTH}",
        )
    )

    def absdiff(x):
        w = to_barycentric(domain, x)
        return np.abs(w[:, 0] - w[:, 1])

    out.append(Integrand("absdiff", absdiff, domain, vol / 3, "lipschitz", "closed form vol/3"))

    anchor = np.array(from_barycentric(domain, HALFPLANE_ANCHOR))
    normal = np.array([math.cos(HALFPLANE_ANGLE), math.sin(HALFPLANE_ANGLE)])

    def halfplane(x):
        return ((x - anchor) @ normal <= 0).astype(float)

    hp_area = polygon_area(clip_halfplane(domain.vertices, anchor, normal))
    out.append(Integrand("halfplane", halfplane, domain, hp_area, "discontinuous", "polygon clipping"))

    center = np.array(domain.centroid)
    radius = min(0.2 * math.sqrt(vol), 0.5 * domain.inradius)

    def disc(x):
        return (np.hypot(*(x - center).T) <= radius).astype(float)

    out.append(Integrand("disc", disc, domain, math.pi * radius**2, "discontinuous", "disc area"))
    return out


def get_integrand(name: str, domain: Triangle | None = None) -> Integrand:
    table = {f.name: f for f in builtin_integrands(domain)}
    try:
        return table[name]
    except KeyError:
        raise KeyError(f"unknown integrand {name!r}; available: {', '.join(table)}") from None


# convergence studies -----------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    mean: float
    abs_err: float
    rmse: float
    R: int
    seed: int


CSV_HEADER = ("N", "mean", "abs_err", "rmse", "R", "seed")


def _estimates(gen: Generator, f: Integrand, n: int, seeds: Sequence[int | None], workers: int) -> np.ndarray:
    def one(seed):
        return integrate(gen.sample(n, seed), f)

    if workers > 1 and len(seeds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return np.array(list(pool.map(one, seeds)))
    return np.array([one(s) for s in seeds])


def convergence_study(
    generator: Generator,
    f: Integrand,
    Ns: Sequence[int],
    R: int = 1,
    seed: int = 0,
    workers: int = 1,
) -> list[ConvergenceRow]:
    """Integration error against N, one row per N in increasing order.

    Randomized generators are replicated ``R`` times with seeds
    ``seed ^ splitmix64(r)``; deterministic generators run once. Replicates
    are summed in a fixed order, so reruns reproduce results bit for bit.
    """
    if f.exact is None:
        raise MissingExactIntegral(f"{f.name} has no exact integral")
    if not generator.domain.same_corners(f.domain):
        raise WrongDomain("generator and integrand live on different triangles")
    if R < 1:
        raise ValueError("R must be at least 1")
    reps = R if generator.randomized else 1
    seeds = [derive_seed(seed, r) for r in range(reps)] if generator.randomized else [None]
    rows = []
    for n in sorted(Ns):
        est = _estimates(generator, f, n, seeds, workers)
        err = est - f.exact
        rows.append(
            ConvergenceRow(
                N=int(n),
                mean=float(np.mean(est)),
                abs_err=float(np.mean(np.abs(err))),
                rmse=float(np.sqrt(np.mean(err * err))),
                R=reps,
                seed=int(seed),
            )
        )
    return rows


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def rows_to_csv(rows: Sequence[ConvergenceRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.N, fmt_float(r.mean), fmt_float(r.abs_err), fmt_float(r.rmse), r.R, r.seed])
    return buf.getvalue()


def rows_to_json(rows: Sequence[ConvergenceRow]) -> str:
    return json.dumps([asdict(r) for r in rows], indent=2)


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
