"""Parallelogram, anchored-box and subtriangle discrepancies of point sets.

For an anchor corner, a point with barycentric weights ``(s, r)`` toward the
two other corners lies in the anchored parallelogram with side fractions
``(t, u)`` iff ``s <= t`` and ``r <= u`` (``<`` for the open variant), and the
clipped parallelogram holds ``corner_box_fraction(t, u)`` of the area. All
discrepancies here are therefore computed in barycentric coordinates and are
invariant under affine maps of the domain.

Exact suprema are taken over the closure of each family: the count is
constant between consecutive point coordinates while the volume is monotone,
so the supremum sits at a point coordinate (or 1) approached from one side.
Approaching from below gives the open count, from above the closed one.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import EmptySampleSet, OutOfRange, WrongDomain
from .geometry import SampleSet, corner_box_fraction, reference_triangle
from .vdc import locate

__all__ = [
    "SampleSet",
    "Witness",
    "DiscrepancyReport",
    "signed_discrepancy",
    "parallelogram_discrepancy",
    "parallelogram_discrepancy_grid",
    "pc_discrepancy",
    "subtriangle_discrepancy",
]

CORNERS = ("A", "B", "C")
# barycentric columns (toward t, toward u) for each anchor corner
_ANCHOR_AXES = {"A": (1, 2), "B": (2, 0), "C": (0, 1)}
TIE_TOL = 1e-12
EXACT_MAX_POINTS = 20_000
_BLOCK_CELLS = 4_000_000


@dataclass(frozen=True)
class Witness:
    corner: str | None
    t: float
    u: float
    incl_t: bool
    incl_u: bool


@dataclass(frozen=True)
class DiscrepancyReport:
    family: str  # "parallelogram", "anchored_box" or "subtriangle"
    value: float
    witness: Witness
    n_points: int
    approximate: bool = False

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "value": self.value,
            "witness": asdict(self.witness),
            "approximate": self.approximate,
            "n_points": self.n_points,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def snap_ties(values: np.ndarray, tol: float = TIE_TOL) -> np.ndarray:
    """Merge values closer than ``tol`` (chained) onto the smallest of each run.

    Coordinates that are equal in exact arithmetic can differ in the last bits
    after a change of coordinates; snapping keeps them tied.
    """
    v = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    if v.size == 0:
        return v
    order = np.argsort(v, kind="stable")
    sv = v[order]
    starts = np.concatenate([[True], np.diff(sv) > tol])
    rep = sv[starts][np.cumsum(starts) - 1]
    out = np.empty_like(v)
    out[order] = rep
    return out


def _anchor_coords(ps: SampleSet, corner: str) -> tuple[np.ndarray, np.ndarray]:
    if corner not in _ANCHOR_AXES:
        raise ValueError(f"corner must be one of {CORNERS}")
    w = ps.barycentric()
    i, j = _ANCHOR_AXES[corner]
    return snap_ties(w[:, i]), snap_ties(w[:, j])


def _count(s, r, t, u, incl, tol=TIE_TOL) -> int:
    # a coordinate within tol of the parameter counts as lying on the boundary
    in_t = s <= t + tol if incl[0] else s < t - tol
    in_u = r <= u + tol if incl[1] else r < u - tol
    return int(np.count_nonzero(in_t & in_u))


def signed_discrepancy(ps: SampleSet, corner: str, t: float, u: float, incl=(True, True)) -> float:
    """Relative area minus relative count for one anchored parallelogram."""
    if not (0.0 <= t <= 1.0 and 0.0 <= u <= 1.0):
        raise OutOfRange("t and u must lie in [0, 1]")
    if len(ps) == 0:
        raise EmptySampleSet("no points")
    s, r = _anchor_coords(ps, corner)
    return corner_box_fraction(t, u) - _count(s, r, t, u, incl) / len(ps)


def _dominance_rows(qrank: np.ndarray, p_lo: int, p_hi: int, ncols: int) -> np.ndarray:
    """Rows ``p_lo..p_hi`` of M[p, q] = #{i < p : qrank[i] < q}."""
    base = np.zeros(ncols + 1, dtype=np.int32)
    base[1:] = np.cumsum(np.bincount(qrank[:p_lo], minlength=ncols))
    rows = p_hi - p_lo
    inc = np.zeros((rows + 1, ncols + 1), dtype=np.int32)
    inc[0] = base
    inc[np.arange(1, rows + 1), qrank[p_lo:p_hi] + 1] = 1
    inc[1:] = np.cumsum(inc[1:], axis=1, dtype=np.int32)
    return np.cumsum(inc, axis=0, dtype=np.int32)


def _sup_anchored(s, r, volume, allow_closed_at_one=True):
    """Exact sup of |volume(t, u) - count / N| over anchored boxes in (s, r).

    Returns ``(value, t, u, closed)``. Only the all-open and all-closed count
    variants are evaluated: at a fixed (t, u) every mixed count lies between
    them, so a mixed variant can never be the strict maximum.
    """
    n = len(s)
    order = np.argsort(s, kind="stable")
    s_sorted = s[order]
    r_sorted = np.sort(r)
    # rank of each point's r among all r, in s-sorted order
    qrank = np.empty(n, dtype=np.int64)
    qrank[np.argsort(r, kind="stable")] = np.arange(n)
    qrank = qrank[order]

    tv = np.unique(np.concatenate([s, [1.0]]))
    uv = np.unique(np.concatenate([r, [1.0]]))
    p_open = np.searchsorted(s_sorted, tv, side="left")
    p_closed = np.searchsorted(s_sorted, tv, side="right")
    q_open = np.searchsorted(r_sorted, uv, side="left")
    q_closed = np.searchsorted(r_sorted, uv, side="right")
    if not allow_closed_at_one:
        p_closed = np.where(tv >= 1.0, p_open, p_closed)
        q_closed = np.where(uv >= 1.0, q_open, q_closed)

    best = (-1.0, 0.0, 0.0, False)
    block = max(1, _BLOCK_CELLS // (n + 1))
    for lo in range(0, len(tv), block):
        hi = min(lo + block, len(tv))
        p_lo, p_hi = int(p_open[lo]), int(p_closed[hi - 1])
        rows = _dominance_rows(qrank, p_lo, p_hi, n)
        vol = volume(tv[lo:hi, None], uv[None, :])
        for closed, p_idx, q_idx in ((False, p_open, q_open), (True, p_closed, q_closed)):
            counts = rows[p_idx[lo:hi] - p_lo][:, q_idx]
            dev = np.abs(vol - counts / n)
            k = int(np.argmax(dev))
            if dev.flat[k] > best[0]:
                i, j = divmod(k, len(uv))
                best = (float(dev.flat[k]), float(tv[lo + i]), float(uv[j]), closed)
    return best


def parallelogram_discrepancy(ps: SampleSet) -> DiscrepancyReport:
    """Exact parallelogram discrepancy, the sup over anchors A, B and C.

    O(N^2) time per corner; meant for N up to about 20 000.
    """
    n = len(ps)
    if n == 0:
        raise EmptySampleSet("no points")
    if n > EXACT_MAX_POINTS:
        raise ValueError(f"exact mode is limited to {EXACT_MAX_POINTS} points; use the grid estimate")
    best = None
    for corner in CORNERS:
        s, r = _anchor_coords(ps, corner)
        value, t, u, closed = _sup_anchored(s, r, corner_box_fraction)
        if best is None or value > best.value:
            best = DiscrepancyReport("parallelogram", value, Witness(corner, t, u, closed, closed), n)
    return best


def parallelogram_discrepancy_grid(ps: SampleSet, resolution: int) -> DiscrepancyReport:
    """Lower bound on the parallelogram discrepancy from a (t, u) grid.

    Each anchor is probed at ``linspace(0, 1, resolution)`` in both
    parameters with open and closed counting.
    """
    n = len(ps)
    if n == 0:
        raise EmptySampleSet("no points")
    if resolution < 2:
        raise OutOfRange("resolution must be at least 2")
    grid = np.linspace(0.0, 1.0, resolution)
    vol = corner_box_fraction(grid[:, None], grid[None, :])
    best = None
    for corner in CORNERS:
        s, r = _anchor_coords(ps, corner)
        s_sorted, r_sorted = np.sort(s), np.sort(r)
        qrank = np.empty(n, dtype=np.int64)
        qrank[np.argsort(r, kind="stable")] = np.arange(n)
        qrank = qrank[np.argsort(s, kind="stable")]
        rows = _dominance_rows(qrank, 0, n, n)
        for closed, side in ((False, "left"), (True, "right")):
            p = np.searchsorted(s_sorted, grid, side=side)
            q = np.searchsorted(r_sorted, grid, side=side)
            dev = np.abs(vol - rows[p][:, q] / n)
            k = int(np.argmax(dev))
            i, j = divmod(k, resolution)
            if best is None or dev.flat[k] > best.value:
                w = Witness(corner, float(grid[i]), float(grid[j]), closed, closed)
                best = DiscrepancyReport("parallelogram", float(dev.flat[k]), w, n, approximate=True)
    return best


def box_fraction_pc(a1, a2):
    """Fraction of T_PC = ((0,0), (0,1), (1,1)) inside the box [0,a1) x [0,a2)."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    area = np.where(a1 <= a2, a1 * a2 - 0.5 * a1 * a1, 0.5 * a2 * a2)
    return 2.0 * area


def pc_discrepancy(ps: SampleSet) -> DiscrepancyReport:
    """Exact anchored-box discrepancy on T_PC.

    Boxes are half-open, ``[0, a1) x [0, a2)`` with ``a`` in ``[0, 1)^2``, so
    the closed count is only a limit below 1.
    """
    if not ps.domain.same_corners(reference_triangle("pillards_cools")):
        raise WrongDomain("anchored-box discrepancy is defined on T_PC only")
    n = len(ps)
    if n == 0:
        raise EmptySampleSet("no points")
    x = snap_ties(ps.points[:, 0])
    y = snap_ties(ps.points[:, 1])
    value, a1, a2, closed = _sup_anchored(x, y, box_fraction_pc, allow_closed_at_one=False)
    return DiscrepancyReport("anchored_box", value, Witness(None, a1, a2, closed, closed), n)


def subtriangle_counts(ps: SampleSet, k: int) -> np.ndarray:
    if not 0 <= k <= 8:
        raise OutOfRange("depth must be in 0..8")
    return np.bincount(locate(ps.domain, ps.points, k), minlength=4**k)


def subtriangle_discrepancy(ps: SampleSet, k: int) -> float:
    """Largest |1/4^k - count/N| over the 4^k cells of the depth-k subdivision.

    Points on internal cell edges go to the corner cell, see
    :func:`triqmc.vdc.locate`.
    """
    n = len(ps)
    if n == 0:
        raise EmptySampleSet("no points")
    return float(np.max(np.abs(1.0 / 4**k - subtriangle_counts(ps, k) / n)))
