import copy
import random

import pytest

from dividekit import divide_core as dc
from dividekit import fixtures

GENUINE = ("A2", "A3", "D4", "TRI")


@pytest.fixture(scope="session")
def raw():
    """Fresh copies of the bundled divide fixtures."""
    data = {n: fixtures.load(n) for n in GENUINE}
    return lambda name: copy.deepcopy(data[name])


@pytest.fixture(scope="session")
def signed():
    cache = {}

    def get(name, anchor=None):
        key = (name, anchor)
        if key not in cache:
            cache[key] = dc.analyse(fixtures.load(name), anchor=anchor)
        return cache[key]
    return get


def random_typed_diagram(seed, n=None, density=0.4):
    """A random AGamma-shaped diagram: typed vertices, edges only between
    different types.  Not necessarily realisable by a divide."""
    rng = random.Random(seed)
    n = n or rng.randint(1, 9)
    records = [(rng.choice("-0+"), "x%d" % i) for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if records[i][0] != records[j][0] and rng.random() < density:
                edges.append((records[i][1], records[j][1]))
    return dc.make_agamma(records, edges)


def random_genuine(seed):
    rng = random.Random(seed)
    kind = rng.randrange(3)
    if kind == 0:
        return fixtures.random_lines(rng.randint(2, 6), seed)
    if kind == 1:
        return fixtures.sine_divide(rng.randint(1, 5))
    return fixtures.load(rng.choice(GENUINE))


def analytic_cusp(rng, ell=0.5, n=200):
    """A random anti-parallel corner from explicit parametrizations.

    Incoming a(s) = c - s u + k1 s^2 m + j1 s^3 m and outgoing
    b(s) = c - s u + k2 s^2 m + j2 s^3 m, with m the left normal of u.  The
    chord b(s) - a(s) tends to the direction of (k2 - k1) m, so the limiting
    sign of det(chord, xi) is sign((k2 - k1) det(m, xi)).  Returns the two
    sampled segments, the field value at c and that limiting sign.
    """
    import math

    import numpy as np

    from dividekit import winding as wd

    c = np.array([rng.uniform(-2, 2), rng.uniform(-2, 2)])
    phi = rng.uniform(0, 2 * math.pi)
    u = np.array([math.cos(phi), math.sin(phi)])
    m = np.array([-u[1], u[0]])
    while True:
        k1, k2 = rng.uniform(-3, 3), rng.uniform(-3, 3)
        if abs(k2 - k1) > 0.05:
            break
    j1, j2 = rng.uniform(-2, 2), rng.uniform(-2, 2)
    while True:
        psi = rng.uniform(0, 2 * math.pi)
        xi = np.array([math.cos(psi), math.sin(psi)]) * rng.uniform(0.2, 3)
        # stay away from xi normal to u, where the limit sign is undecided
        if abs(m[0] * xi[1] - m[1] * xi[0]) > 0.05 * np.linalg.norm(xi):
            break

    def branch(k, j):
        ss = np.linspace(0.0, ell, n + 1)
        pts = c - np.outer(ss, u) + np.outer(k * ss ** 2 + j * ss ** 3, m)
        tans = -u + np.outer(2 * k * ss + 3 * j * ss ** 2, m)
        return pts, tans

    pa, ta = branch(k1, j1)
    pb, tb = branch(k2, j2)
    seg_in = wd.Segment(pa[::-1].copy(), -ta[::-1].copy())
    seg_out = wd.Segment(pb, tb)
    det_m = m[0] * xi[1] - m[1] * xi[0]
    sign = 1 if (k2 - k1) * det_m > 0 else -1
    return seg_in, seg_out, xi, sign


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
