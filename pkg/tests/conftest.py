import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from triqmc.geometry import Triangle, reference_triangle

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def equilateral():
    return reference_triangle("equilateral_unit_area")


@pytest.fixture
def right_unit():
    return reference_triangle("right_unit")


@pytest.fixture
def abc_right():
    """A=(0,0), B=(1,0), C=(0,1): the labeling used in the subdivision examples."""
    return Triangle((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))


def random_triangle(rng, scale=10.0):
    while True:
        v = rng.uniform(-scale, scale, size=(3, 2))
        cross = (v[1, 0] - v[0, 0]) * (v[2, 1] - v[0, 1]) - (v[1, 1] - v[0, 1]) * (v[2, 0] - v[0, 0])
        diam = max(np.hypot(*(v[i] - v[j])) for i, j in ((0, 1), (1, 2), (0, 2)))
        if abs(cross) > 0.05 * diam**2:
            return Triangle(*v)


def uniform_in(t: Triangle, n: int, rng) -> np.ndarray:
    u = rng.random((n, 2))
    flip = u.sum(axis=1) > 1
    u[flip] = 1 - u[flip]
    v = t.vertices
    return v[0] + u[:, :1] * (v[1] - v[0]) + u[:, 1:] * (v[2] - v[0])


coords = st.floats(-10, 10, allow_nan=False)


@st.composite
def triangles(draw):
    pts = [(draw(coords), draw(coords)) for _ in range(3)]
    (ax, ay), (bx, by), (cx, cy) = pts
    cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    diam = max(math.dist(pts[0], pts[1]), math.dist(pts[1], pts[2]), math.dist(pts[0], pts[2]))
    from hypothesis import assume

    assume(diam > 1e-3 and abs(cross) > 0.05 * diam**2)
    return Triangle(*pts)


# one PASS/FAIL line per acceptance criterion in the terminal summary
_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        detail = dict(report.user_properties).get("criterion", report.nodeid.split("::")[-1])
        _ACCEPTANCE.append((detail, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for detail, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {detail}")
