"""Bundled fixture divides and small generators of genuine divides.

The JSON files under data/ were produced by regenerate() from the drawings
below; load() only reads them back.
"""

import json
import math
import os
import random

from .drawing import clip_to_disk, divide_from_polylines, sample_curve

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
NAMES = ("A2", "A3", "D4", "TRI", "XCUSP")

# x(y^3 - x^4): two branches meeting with multiplicity 3; the first side of
# the separating curve has genus 3, the other genus 0, four boundary curves each
XCUSP = {"name": "XCUSP", "g1": 3, "g2": 0, "nu12": 3, "boundaries": 4,
         "known_windings": [0, 0, 0], "windings": [-8, -2], "delta": [1, 0]}


class UnknownFixture(KeyError):
    pass


def _rotate(pts, a):
    c, s = math.cos(a), math.sin(a)
    return [(c * x - s * y, s * x + c * y) for x, y in pts]


def _lens_arc(k, centre=0.25, rad=0.42, gap=0.35):
    # circle of radius rad around a point at distance `centre`, entered and
    # left along rays pointing away from the origin
    th = 2 * math.pi * k / 3 + math.pi / 2
    cx, cy = centre * math.cos(th), centre * math.sin(th)
    a0, a1 = th + gap, th + 2 * math.pi - gap
    p0 = (cx + rad * math.cos(a0), cy + rad * math.sin(a0))
    p1 = (cx + rad * math.cos(a1), cy + rad * math.sin(a1))
    ux, uy = math.cos(th), math.sin(th)
    lead = [(p0[0] + s * ux, p0[1] + s * uy) for s in [1.5 - 0.05 * i for i in range(31)]]
    circ = [(cx + rad * math.cos(a0 + (a1 - a0) * i / 300),
             cy + rad * math.sin(a0 + (a1 - a0) * i / 300)) for i in range(301)]
    tail = [(p1[0] + s * ux, p1[1] + s * uy) for s in [0.05 * i for i in range(1, 31)]]
    return clip_to_disk(lead + circ + tail)


def drawings():
    a2 = [clip_to_disk(sample_curve(
        lambda t: (0.7 * (t * t - 1) + 0.2, 0.7 * t * (t * t - 1)), -2.2, 2.2, 400))]
    a3 = [clip_to_disk(sample_curve(lambda t: (t, 0.0), -1.5, 1.5, 50)),
          clip_to_disk(sample_curve(lambda t: (t, t * t - 0.3), -1.5, 1.5, 300))]
    line = clip_to_disk(sample_curve(lambda t: (t, -0.3), -1.5, 1.5, 10))
    d4 = [line, _rotate(line, 2 * math.pi / 3), _rotate(line, 4 * math.pi / 3)]
    tri = [_lens_arc(k) for k in range(3)]
    return {"A2": a2, "A3": a3, "D4": d4, "TRI": tri}


def regenerate(directory=DATA_DIR):
    os.makedirs(directory, exist_ok=True)
    for name, pls in drawings().items():
        raw = divide_from_polylines(pls)
        raw["name"] = name
        with open(os.path.join(directory, name + ".json"), "w") as fh:
            json.dump(raw, fh, indent=1, sort_keys=True)
            fh.write("\n")
    with open(os.path.join(directory, "XCUSP.json"), "w") as fh:
        json.dump(XCUSP, fh, indent=1, sort_keys=True)
        fh.write("\n")


def path_of(name):
    if name not in NAMES:
        raise UnknownFixture(name)
    return os.path.join(DATA_DIR, name + ".json")


def load(name):
    with open(path_of(name)) as fh:
        return json.load(fh)


def dump_text(name):
    with open(path_of(name)) as fh:
        return fh.read()


# --- random genuine divides for property tests ----------------------------------

def random_lines(n, seed):
    """n chords of the unit disk in general position (each pair meets at most once)."""
    rng = random.Random(seed)
    for _ in range(200):
        pls = []
        for _ in range(n):
            a = rng.uniform(0, 2 * math.pi)
            off = rng.uniform(-0.6, 0.6)
            ux, uy = math.cos(a), math.sin(a)
            nx, ny = -uy, ux
            pls.append(clip_to_disk([(off * nx + t * ux, off * ny + t * uy)
                                     for t in (-1.5, -0.5, 0.5, 1.5)]))
        raw = divide_from_polylines(pls)
        if _connected(raw) and _generic(raw, pls):
            return raw
    raise RuntimeError("could not draw a connected line arrangement")


def sine_divide(n, amp=0.5):
    """A horizontal line against a sine wave: a divide of A_n type (n crossings + ...)."""
    k = n + 1
    wave = clip_to_disk(sample_curve(
        lambda t: (t, amp * math.sin(math.pi * k * (t + 0.9) / 1.8)), -1.2, 1.2, 60 * k))
    line = clip_to_disk(sample_curve(lambda t: (t, 0.013), -1.5, 1.5, 20))
    return divide_from_polylines([line, wave])


def _connected(raw):
    from .divide_core import validate_divide, Disconnected
    try:
        validate_divide(raw)
    except Disconnected:
        return False
    return True


def _generic(raw, pls, eps=1e-3):
    # reject near-triple points so the combinatorics is stable
    pts = list(raw.get("layout", {}).get("crossings", {}).values())
    for i in range(len(pts)):
        if math.hypot(*pts[i]) > 0.97:
            return False
        for j in range(i + 1, len(pts)):
            if math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]) < eps:
                return False
    return True
