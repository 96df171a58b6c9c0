"""Winding numbers of piecewise C^1 planar curves against a vector field,
the +/-pi corner rule, coherence arithmetic and the K_{p,q} boundary model.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

TWO_PI = 2 * math.pi


class FieldVanishes(ValueError):
    pass


class AngleStepTooLarge(ValueError):
    pass


class DegenerateChord(ValueError):
    pass


class NotAntiParallel(ValueError):
    pass


class NotCoprime(ValueError):
    pass


class PointAtVertex(ValueError):
    pass


# --- vector fields -------------------------------------------------------------

@dataclass
class PlanarVectorField:
    name: str
    func: object           # (x array, y array) -> (u array, v array)

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        u, v = self.func(pts[..., 0], pts[..., 1])
        return np.stack(np.broadcast_arrays(u, v), axis=-1).astype(float)


def constant_field(a, b):
    return PlanarVectorField("constant:%g,%g" % (a, b), lambda x, y: (a + 0 * x, b + 0 * y))


def rotational_field():
    return PlanarVectorField("rotational", lambda x, y: (-y, x))


def hamiltonian_field(expr):
    """(df/dy, -df/dx) for a polynomial f(x, y) given as text."""
    import sympy
    x, y = sympy.symbols("x y")
    f = sympy.sympify(expr, locals={"x": x, "y": y})
    fx = sympy.lambdify((x, y), sympy.diff(f, x), "numpy")
    fy = sympy.lambdify((x, y), sympy.diff(f, y), "numpy")
    return PlanarVectorField("hamiltonian:%s" % expr, lambda a, b: (fy(a, b), -fx(a, b)))


def parse_field(text):
    """'constant:a,b', 'rotational' or 'hamiltonian:<polynomial in x, y>'."""
    kind, _, arg = text.partition(":")
    if kind == "constant":
        a, b = (float(t) for t in arg.split(","))
        return constant_field(a, b)
    if kind == "rotational":
        return rotational_field()
    if kind == "hamiltonian":
        return hamiltonian_field(arg)
    raise ValueError("unknown field %r" % text)


# --- curves --------------------------------------------------------------------

@dataclass
class Segment:
    samples: np.ndarray     # (n, 2)
    tangents: np.ndarray    # (n, 2)

    def reversed(self):
        return Segment(self.samples[::-1].copy(), -self.tangents[::-1].copy())

    def length(self):
        return float(np.sum(np.linalg.norm(np.diff(self.samples, axis=0), axis=1)))

    def point_at(self, s, from_end=False):
        """Point at arclength s from the start (or from the end)."""
        pts = self.samples[::-1] if from_end else self.samples
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        s = min(max(s, 0.0), cum[-1])
        k = int(np.searchsorted(cum, s, side="right")) - 1
        k = min(k, len(seg) - 1)
        t = 0.0 if seg[k] == 0 else (s - cum[k]) / seg[k]
        return pts[k] + t * (pts[k + 1] - pts[k])


def make_segment(samples, tangents=None):
    pts = np.asarray(samples, dtype=float)
    if tangents is None:
        tangents = np.gradient(pts, axis=0)
    return Segment(pts, np.asarray(tangents, dtype=float))


def segment_from_function(f, df, t0, t1, n=400):
    ts = np.linspace(t0, t1, n + 1)
    pts = np.array([f(t) for t in ts], dtype=float)
    tans = np.array([df(t) for t in ts], dtype=float)
    return Segment(pts, tans)


@dataclass
class PiecewisePlanarCurve:
    segments: list
    closed: bool = True

    def reversed(self):
        return PiecewisePlanarCurve([s.reversed() for s in reversed(self.segments)], self.closed)

    def corners(self):
        """(index, incoming segment, outgoing segment) at each junction."""
        k = len(self.segments)
        out = [(i, self.segments[i], self.segments[i + 1]) for i in range(k - 1)]
        if self.closed:
            out.append((k - 1, self.segments[-1], self.segments[0]))
        return out

    def to_json(self):
        return {"closed": self.closed,
                "segments": [{"samples": s.samples.tolist(), "tangents": s.tangents.tolist()}
                             for s in self.segments]}


def curve_from_json(doc):
    segs = [make_segment(s["samples"], s.get("tangents")) for s in doc["segments"]]
    return PiecewisePlanarCurve(segs, bool(doc.get("closed", True)))


def check_closed(curve, tol=1e-9):
    segs = curve.segments
    pairs = list(zip(segs, segs[1:])) + ([(segs[-1], segs[0])] if curve.closed else [])
    for a, b in pairs:
        if np.linalg.norm(a.samples[-1] - b.samples[0]) > tol:
            raise ValueError("consecutive segments do not share an endpoint")


# --- angles ----------------------------------------------------------------------

def _wrap(a):
    return (a + math.pi) % TWO_PI - math.pi


def segment_angle(seg, field, max_step=math.pi / 4, min_norm=1e-12):
    """Total change of the angle from the field to the tangent along one segment."""
    xi = field(seg.samples)
    nx = np.linalg.norm(xi, axis=1)
    if np.any(nx < min_norm):
        k = int(np.argmin(nx))
        raise FieldVanishes("field vanishes near %s" % (seg.samples[k].tolist(),))
    if np.any(np.linalg.norm(seg.tangents, axis=1) < min_norm):
        raise ValueError("zero tangent sample")
    rel = np.arctan2(seg.tangents[:, 1], seg.tangents[:, 0]) - np.arctan2(xi[:, 1], xi[:, 0])
    inc = _wrap(np.diff(rel))
    if inc.size and np.max(np.abs(inc)) > max_step:
        raise AngleStepTooLarge("angle step %.3g exceeds %.3g; sample more finely"
                                % (float(np.max(np.abs(inc))), max_step))
    return float(np.sum(inc))


def _det(a, b):
    return float(a[0] * b[1] - a[1] * b[0])


def corner_sign(u, v, xi, chord, tol=1e-12, angle_tol=1e-6):
    """+pi if det(chord, xi) > 0, -pi if < 0, for anti-parallel u, v."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    cosang = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    if cosang > -1 + angle_tol:
        raise NotAntiParallel("tangents are not anti-parallel (cos = %.6g)" % cosang)
    chord, xi = np.asarray(chord, float), np.asarray(xi, float)
    dt = _det(chord, xi)
    if abs(dt) <= tol * max(np.linalg.norm(chord) * np.linalg.norm(xi), 1e-300):
        raise DegenerateChord("chord is parallel to the field")
    return math.pi if dt > 0 else -math.pi


def corner_chord(seg_in, seg_out, offset):
    """q - p for p on the incoming segment and q on the outgoing one, both at
    arclength `offset` from the corner."""
    p = seg_in.point_at(offset, from_end=True)
    q = seg_out.point_at(offset)
    return q - p


def corner_angle(seg_in, seg_out, field, rel_offset=1e-3, refinements=3, angle_tol=1e-6):
    """Turning angle at a junction, with the chord rule for cusps."""
    u, v = seg_in.tangents[-1], seg_out.tangents[0]
    th = _wrap(math.atan2(v[1], v[0]) - math.atan2(u[1], u[0]))
    cosang = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    if cosang > -1 + angle_tol:
        return th
    xi = field(seg_out.samples[0])
    scale = min(seg_in.length(), seg_out.length())
    off = rel_offset * scale
    # the chord tends to the normal of the corner tangent; its tangential part
    # only carries sampling error, which can outweigh the normal part when xi
    # is nearly normal to the tangent
    t = np.asarray(u, float) / np.linalg.norm(u) - np.asarray(v, float) / np.linalg.norm(v)
    t /= np.linalg.norm(t)
    for _ in range(refinements + 1):
        chord = corner_chord(seg_in, seg_out, off)
        chord = chord - float(np.dot(chord, t)) * t
        try:
            return corner_sign(u, v, xi, chord, angle_tol=angle_tol)
        except DegenerateChord:
            off /= 10
    raise DegenerateChord("chord stays parallel to the field after %d refinements" % refinements)


def winding_number(curve, field, max_step=math.pi / 4, rel_offset=1e-3):
    """Winding number in turns: (sum of segment angles + corner angles) / 2 pi."""
    total = sum(segment_angle(s, field, max_step) for s in curve.segments)
    for _, a, b in curve.corners():
        total += corner_angle(a, b, field, rel_offset)
    return total / TWO_PI


def winding_report(curve, field, max_step=math.pi / 4, rel_offset=1e-3):
    segs = [segment_angle(s, field, max_step) for s in curve.segments]
    corners = [corner_angle(a, b, field, rel_offset) for _, a, b in curve.corners()]
    w = (sum(segs) + sum(corners)) / TWO_PI
    return {"winding": w, "segment_angles": segs, "corner_angles": corners,
            "nearest_integer": round(w), "integer_error": abs(w - round(w)),
            "half_integer_error": abs(w - (math.floor(w) + 0.5))}


# --- test curves ---------------------------------------------------------------------

def circle(r=1.0, n=400, ccw=True, centre=(0.0, 0.0)):
    s = 1 if ccw else -1
    cx, cy = centre
    seg = segment_from_function(lambda t: (cx + r * math.cos(s * t), cy + r * math.sin(s * t)),
                                lambda t: (-s * r * math.sin(s * t), s * r * math.cos(s * t)),
                                0.0, TWO_PI, n)
    return PiecewisePlanarCurve([seg], True)


def polygon(vertices, n=20):
    segs = []
    k = len(vertices)
    for i in range(k):
        a = np.asarray(vertices[i], float)
        b = np.asarray(vertices[(i + 1) % k], float)
        pts = np.array([a + (b - a) * j / n for j in range(n + 1)])
        segs.append(Segment(pts, np.tile(b - a, (n + 1, 1))))
    return PiecewisePlanarCurve(segs, True)


def _bump(g, n):
    # y = sin^2(pi x) g(x) over [0, 1]; horizontal at both ends
    xs = np.linspace(0.0, 1.0, n + 1)
    gv = np.array([g(x) for x in xs])
    h = 1e-6
    dg = np.array([(g(x + h) - g(x - h)) / (2 * h) for x in xs])
    s2 = np.sin(np.pi * xs) ** 2
    ys = s2 * gv
    dy = 2 * np.pi * np.sin(np.pi * xs) * np.cos(np.pi * xs) * gv + s2 * dg
    return np.stack([xs, ys], 1), np.stack([np.ones_like(xs), dy], 1)


def var_type_curve(g_arc, g_image, start=(0.0, 0.0), end=(1.0, 0.0), n=400):
    """Closed curve a * (-b): a and its image b run from start to end, both
    leaving and arriving along the start->end direction, and meet only there."""
    p0, p1 = np.asarray(start, float), np.asarray(end, float)
    d = p1 - p0
    rot = np.array([[d[0], -d[1]], [d[1], d[0]]])
    segs = []
    for g in (g_arc, g_image):
        pts, tans = _bump(g, n)
        segs.append(Segment(pts @ rot.T + p0, tans @ rot.T))
    return PiecewisePlanarCurve([segs[0], segs[1].reversed()], True)


def figure_eight(n=800):
    """Gerono lemniscate x = sin t, y = sin t cos t, one segment."""
    seg = segment_from_function(lambda t: (math.sin(t), math.sin(t) * math.cos(t)),
                                lambda t: (math.cos(t), math.cos(2 * t)), 0.0, TWO_PI, n)
    return PiecewisePlanarCurve([seg], True)


def smooth_figure_eight(n=400):
    """Oriented smoothing at the double point: the two lobes as closed curves
    with one corner each."""
    lobes = []
    for t0, t1 in ((0.0, math.pi), (math.pi, TWO_PI)):
        seg = segment_from_function(lambda t: (math.sin(t), math.sin(t) * math.cos(t)),
                                    lambda t: (math.cos(t), math.cos(2 * t)), t0, t1, n)
        lobes.append(PiecewisePlanarCurve([seg], True))
    return lobes


def surgery_winding_sum(curves, field, tol=1e-6, **kw):
    """Sum of winding numbers of the curves left after smoothing."""
    vals = [winding_number(c, field, **kw) for c in curves]
    total = float(sum(vals))
    return {"per_curve": vals, "total": total, "zero": abs(total) < tol}


# --- coherence -----------------------------------------------------------------------

def subsurface_chi(genus, boundaries):
    return 2 - 2 * genus - boundaries


def coherence_check(chi, assignments):
    """Check sum of boundary winding numbers == chi; a single None/'x' entry is solved for."""
    unknown = [i for i, a in enumerate(assignments) if a is None or a == "x"]
    if len(unknown) > 1:
        raise ValueError("at most one unknown winding number")
    known = sum(int(a) for a in assignments if not (a is None or a == "x"))
    if unknown:
        x = chi - known
        vals = list(assignments)
        vals[unknown[0]] = x
        return {"chi": chi, "solved": x, "index": unknown[0], "assignments": vals, "ok": True}
    return {"chi": chi, "sum": known, "assignments": list(assignments), "ok": known == chi}


# --- K_{p,q} -------------------------------------------------------------------------

@dataclass
class KpqModel:
    p: int
    q: int
    rotation: dict                       # vertex -> ccw list of neighbours
    faces: list                          # each a list of darts (u, w)
    position: dict = field(default_factory=dict)   # dart -> index along face 0

    @property
    def boundary_count(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return self.p * self.q

    @property
    def euler_characteristic(self):
        return self.p + self.q - self.p * self.q

    @property
    def betti(self):
        return 1 - self.euler_characteristic

    @property
    def genus(self):
        return (2 - self.euler_characteristic - self.boundary_count) // 2

    @property
    def boundary_length(self):
        """Metric length: every dart is an edge side of length 1/2."""
        return Fraction(sum(len(f) for f in self.faces), 2)

    def summary(self):
        return {"p": self.p, "q": self.q, "boundary_components": self.boundary_count,
                "boundary_darts": sum(len(f) for f in self.faces),
                "boundary_length": str(self.boundary_length),
                "genus": self.genus, "betti": self.betti, "euler_characteristic": self.euler_characteristic}


def _kpq_rotation(p, q, reverse=False):
    # a_i at (i, 0), b_j at (j, 1); ccw order of the edges at each vertex
    rot = {}
    for i in range(1, p + 1):
        order = [("b", j) for j in range(q, 0, -1)]
        rot[("a", i)] = order[::-1] if reverse else order
    for j in range(1, q + 1):
        order = [("a", i) for i in range(1, p + 1)]
        rot[("b", j)] = order[::-1] if reverse else order
    return rot


def build_kpq_relaxed(p, q, reverse=False):
    """K_{p,q} ribbon graph without the coprimality requirement."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    rot = _kpq_rotation(p, q, reverse)

    def nxt(dart):
        u, w = dart
        r = rot[w]
        return (w, r[(r.index(u) + 1) % len(r)])

    darts = [(u, w) for u in rot for w in rot[u]]
    seen, faces = set(), []
    for dart in darts:
        if dart in seen:
            continue
        face, x = [], dart
        while x not in seen:
            seen.add(x)
            face.append(x)
            x = nxt(x)
        faces.append(face)
    model = KpqModel(p, q, rot, faces)
    model.position = {dart: k for k, dart in enumerate(faces[0])}
    return model


def build_kpq(p, q):
    if gcd(p, q) != 1:
        raise NotCoprime("gcd(%d, %d) = %d" % (p, q, gcd(p, q)))
    return build_kpq_relaxed(p, q)


def _dart_count(model):
    return len(model.faces[0])


def boundary_point(model, theta):
    """(dart, offset in [0, 1/2)) for a point of the boundary circle R / pq Z."""
    theta = Fraction(theta) % model.boundary_length
    k = int(theta * 2)
    return model.faces[0][k], theta - Fraction(k, 2)


def involution(model, theta):
    """Partner point: the same point of the graph seen from the other edge side."""
    dart, u = boundary_point(model, theta)
    partner = (dart[1], dart[0])
    return Fraction(model.position[partner], 2) + Fraction(1, 2) - u


def kpq_monodromy_shift(model, theta, t):
    """(theta, t) -> (theta + (1 - t), t) on the collar boundary x [0, 1]."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    return ((Fraction(theta) + 1 - t) % model.boundary_length, t)


def equivariance_check(model, denominator=None):
    """theta ~ theta' implies theta + 1 ~ theta' + 1, on an exact grid."""
    if model.boundary_count != 1:
        return {"ok": False, "reason": "boundary is not a single circle", "checked": 0}
    den = denominator or 4 * model.p * model.q
    L = model.boundary_length
    n = int(L * den)
    bad = []
    for k in range(n):
        th = Fraction(k, den)
        if (th * 2).denominator == 1:
            continue            # graph vertices: the involution is not defined there
        lhs = involution(model, th + 1) % L
        rhs = (involution(model, th) + 1) % L
        if lhs != rhs:
            bad.append(str(th))
    return {"ok": not bad, "checked": n, "violations": bad[:10]}


def graph_point(model, theta):
    """Canonical name of the graph point under theta: (edge, distance from its a end)."""
    dart, u = boundary_point(model, theta)
    if u == 0:
        return ("vertex", dart[0])
    if dart[0][0] == "a":
        return ((dart[0], dart[1]), u)
    return ((dart[1], dart[0]), Fraction(1, 2) - u)


def _path_edges(model, theta, length=1):
    """Graph edges swept by the boundary arc [theta, theta + length]."""
    L = model.boundary_length
    out = []
    th = Fraction(theta)
    end = th + length
    while th < end:
        dart, u = boundary_point(model, th % L)
        e = (dart[0], dart[1]) if dart[0][0] == "a" else (dart[1], dart[0])
        step = min(Fraction(1, 2) - u, end - th)
        sign = 1 if dart[0][0] == "a" else -1
        out.append((e, sign, step))
        th += step
    return out


def _cycle_vector(model, chain):
    # chain: {edge: coefficient}; coordinates on the non-tree edges of a fixed
    # spanning tree (all a_1 edges and all b_1 edges)
    tree = {(("a", 1), ("b", j)) for j in range(1, model.q + 1)}
    tree |= {(("a", i), ("b", 1)) for i in range(1, model.p + 1)}
    return {e: c for e, c in chain.items() if e not in tree and c != 0}


def kpq_variation_arc(model, edge, x):
    """Variation image of the arc crossing `edge` once at distance x from its a end."""
    x = Fraction(x)
    if not 0 < x < Fraction(1, 2):
        raise PointAtVertex("x = %s is not interior to the edge (0, 1/2)" % x)
    a, b = edge
    theta_a = Fraction(model.position[(a, b)], 2) + x
    theta_b = Fraction(model.position[(b, a)], 2) + Fraction(1, 2) - x
    end_a = graph_point(model, theta_a + 1)
    end_b = graph_point(model, theta_b + 1)
    closes = end_a == end_b
    chain = {}
    for th, sgn in ((theta_a, 1), (theta_b, -1)):
        for e, s, ln in _path_edges(model, th):
            chain[e] = chain.get(e, 0) + sgn * s * ln
    # the two half-edge pieces at x and at the far point add up to whole edges
    support = {e: c * 2 for e, c in chain.items() if c != 0}
    integral = all(Fraction(c).denominator == 1 for c in support.values())
    verts = set()
    for e in support:
        verts.update(e)
    degree = {}
    for e in support:
        for v in e:
            degree[v] = degree.get(v, 0) + 1
    bd = {}
    for (u, w), c in support.items():
        bd[w] = bd.get(w, 0) + c
        bd[u] = bd.get(u, 0) - c
    cycle = integral and all(c == 0 for c in bd.values())
    simple = cycle and all(abs(c) == 1 for c in support.values()) and \
        all(dg == 2 for dg in degree.values())
    coords = _cycle_vector(model, {e: int(c) for e, c in support.items()}) if integral else {}
    g = 0
    for c in coords.values():
        g = gcd(g, abs(c))
    return {"theta_a": str(theta_a), "theta_b": str(theta_b),
            "end_a": repr(end_a), "end_b": repr(end_b), "closes": closes, "is_cycle": cycle,
            "cycle": sorted([[list(e[0]), list(e[1]), int(c)] for e, c in support.items()]) if integral else None,
            "length": len(support), "simple": simple,
            "nonzero": bool(coords), "primitive": g == 1}
