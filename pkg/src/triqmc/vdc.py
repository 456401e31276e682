"""Extensible triangular van der Corput sequence and its nested scrambling.

Index ``i`` is written in base 4, least significant digit first. Each digit
picks one of four half-scale subtriangles (0 the central, inverted one; 1, 2
and 3 the ones at corners A, B and C) and the point is the centroid of the
triangle reached after the last digit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import hash_keys, to_unit
from .errors import BadDigit, DepthTooSmall, OutOfRange
from .geometry import Point, SampleSet, Triangle, to_barycentric

# Row j gives child corner j as weights of the parent corners (A, B, C).
CHILD_WEIGHTS = np.array(
    [
        [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]],
        [[1.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.5, 0.0, 0.5]],
        [[0.5, 0.5, 0.0], [0.0, 1.0, 0.0], [0.0, 0.5, 0.5]],
        [[0.5, 0.0, 0.5], [0.0, 0.5, 0.5], [0.0, 0.0, 1.0]],
    ]
)

DEFAULT_DEPTH = 16
MAX_DEPTH = 30
LEAF_MODES = ("centroid", "uniform_leaf")

# All 24 permutations of (0, 1, 2, 3) in Fisher-Yates order: a hash h selects
# swaps j3 = h % 4, j2 = (h // 4) % 3, j1 = (h // 12) % 2.
def _fisher_yates_table() -> np.ndarray:
    table = np.empty((24, 4), dtype=np.int64)
    for h in range(24):
        perm = [0, 1, 2, 3]
        r = h
        for i in (3, 2, 1):
            j = r % (i + 1)
            r //= i + 1
            perm[i], perm[j] = perm[j], perm[i]
        table[h] = perm
    return table


_PERMS = _fisher_yates_table()


def base4_digits(i: int) -> list[int]:
    """Little-endian base-4 digits of ``i``; empty for zero."""
    if i < 0:
        raise OutOfRange("index must be nonnegative")
    digits = []
    while i:
        i, d = divmod(i, 4)
        digits.append(d)
    return digits


def _digit_matrix(idx: np.ndarray, depth: int) -> np.ndarray:
    """``(n, depth)`` array of little-endian base-4 digits, zero-padded."""
    idx = np.asarray(idx, dtype=np.int64)
    shifts = 2 * np.arange(depth, dtype=np.int64)
    return (idx[:, None] >> shifts) & 3


def child_triangle(t: Triangle, d: int) -> Triangle:
    if d not in (0, 1, 2, 3):
        raise BadDigit(f"digit {d!r} not in 0..3")
    return Triangle(*(CHILD_WEIGHTS[d] @ t.vertices))


def descend(t: Triangle, ds) -> Triangle:
    for d in ds:
        t = child_triangle(t, d)
    return t


def _descend_many(t: Triangle, digits: np.ndarray, lengths: np.ndarray | None = None) -> np.ndarray:
    """Corner arrays ``(n, 3, 2)`` after descending each row of ``digits``.

    Row ``i`` stops after ``lengths[i]`` digits when ``lengths`` is given.
    """
    n, depth = digits.shape
    corners = np.broadcast_to(t.vertices, (n, 3, 2)).copy()
    for k in range(depth):
        child = np.einsum("nij,njk->nik", CHILD_WEIGHTS[digits[:, k]], corners)
        corners = child if lengths is None else np.where((k < lengths)[:, None, None], child, corners)
    return corners


def _n_digits(i_max: int) -> int:
    return max(1, int(i_max).bit_length() + 1 >> 1)


def vdc_point(t: Triangle, i: int) -> Point:
    """Centroid of the subtriangle addressed by the base-4 digits of ``i``."""
    return descend(t, base4_digits(i)).centroid


def vdc_points(t: Triangle, indices) -> np.ndarray:
    """Vectorized :func:`vdc_point` over an integer array, as ``(n, 2)``."""
    idx = np.asarray(indices, dtype=np.int64).reshape(-1)
    if idx.size and idx.min() < 0:
        raise OutOfRange("indices must be nonnegative")
    depth = _n_digits(idx.max()) if idx.size else 1
    # stop at each index's own digit count so a point never depends on its neighbours
    digits = _digit_matrix(idx, depth)
    nz = digits != 0
    lengths = np.where(nz.any(axis=1), depth - np.argmax(nz[:, ::-1], axis=1), 0)
    return _descend_many(t, digits, lengths).mean(axis=1)


def vdc_sequence(t: Triangle, n: int, start: int = 0) -> SampleSet:
    """Points ``f(start), ..., f(start + n - 1)`` of the sequence on ``t``."""
    if n < 1:
        raise OutOfRange("n must be at least 1")
    if start < 0:
        raise OutOfRange("start must be nonnegative")
    pts = vdc_points(t, np.arange(start, start + n, dtype=np.int64))
    return SampleSet(t, pts, f"vdc(n={n},start={start})")


@dataclass(frozen=True)
class ScrambleSeed:
    seed: int
    depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if not 1 <= self.depth <= MAX_DEPTH:
            raise OutOfRange(f"scramble depth must be in 1..{MAX_DEPTH}")


def scramble_digits(digits: np.ndarray, seed: int) -> np.ndarray:
    """Nested uniform scrambling of base-4 digit rows.

    Digit ``k`` is passed through a permutation of {0,1,2,3} chosen by hashing
    the seed with the original digits before it, so every prefix node of the
    digit tree gets its own independent permutation. Nothing is stored.
    """
    n, depth = digits.shape
    out = np.empty_like(digits)
    # prefix key: a leading 1 followed by the k earlier digits, unique per node
    prefix = np.ones(n, dtype=np.uint64)
    for k in range(depth):
        h = hash_keys(seed, prefix)
        perm = _PERMS[(h % np.uint64(24)).astype(np.int64)]
        out[:, k] = np.take_along_axis(perm, digits[:, k : k + 1], axis=1)[:, 0]
        prefix = (prefix << np.uint64(2)) | digits[:, k].astype(np.uint64)
    return out


def scrambled_vdc(
    t: Triangle,
    n: int,
    seed: ScrambleSeed | int,
    start: int = 0,
    mode: str = "centroid",
) -> SampleSet:
    """Nested-uniform scrambled van der Corput points.

    The scrambled digits of ``i`` select a depth-``seed.depth`` leaf triangle.
    With ``mode="centroid"`` the point is that leaf's centroid; with
    ``mode="uniform_leaf"`` it is uniform within the leaf, drawn from hashes of
    ``(seed, i)`` so prefixes stay stable.

    Raises
    ------
    DepthTooSmall
        If the scramble depth cannot hold every index below ``start + n``.
    """
    if not isinstance(seed, ScrambleSeed):
        seed = ScrambleSeed(int(seed))
    if n < 1:
        raise OutOfRange("n must be at least 1")
    if mode not in LEAF_MODES:
        raise ValueError(f"mode must be one of {LEAF_MODES}")
    last = start + n - 1
    if last >= 4**seed.depth:
        raise DepthTooSmall(f"depth {seed.depth} cannot address index {last}")
    idx = np.arange(start, start + n, dtype=np.int64)
    digits = scramble_digits(_digit_matrix(idx, seed.depth), seed.seed)
    corners = _descend_many(t, digits)
    if mode == "centroid":
        pts = corners.mean(axis=1)
    else:
        u = to_unit(hash_keys(seed.seed, idx.astype(np.uint64), np.arange(2, dtype=np.uint64)[:, None]))
        u1, u2 = u[0], u[1]
        flip = u1 + u2 > 1.0
        u1 = np.where(flip, 1.0 - u1, u1)
        u2 = np.where(flip, 1.0 - u2, u2)
        p0 = corners[:, 0]
        pts = p0 + u1[:, None] * (corners[:, 1] - p0) + u2[:, None] * (corners[:, 2] - p0)
    meta = f"vdc-scrambled(n={n},start={start},seed={seed.seed},depth={seed.depth},mode={mode})"
    return SampleSet(t, pts, meta)


def locate(t: Triangle, pts, depth: int) -> np.ndarray:
    """Depth-``depth`` subdivision address of each point, as an integer.

    The address packs digits little-endian exactly like the index that would
    generate the cell's centroid. A point on an internal edge is assigned to
    the corner cell (digit 1, 2, 3 tried in that order) rather than the
    central one; points outside ``t`` are located by the same rule.
    """
    w = np.atleast_2d(to_barycentric(t, pts))
    addr = np.zeros(len(w), dtype=np.int64)
    for k in range(depth):
        d = np.zeros(len(w), dtype=np.int64)
        for corner in (3, 2, 1):
            d = np.where(w[:, corner - 1] >= 0.5, corner, d)
        new = 2.0 * w
        rows = np.arange(len(w))
        corner_rows = d > 0
        new[rows[corner_rows], d[corner_rows] - 1] -= 1.0
        new[~corner_rows] = 1.0 - 2.0 * w[~corner_rows]
        w = new
        addr |= d << (2 * k)
    return addr
