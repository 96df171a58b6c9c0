"""Combinatorial Milnor-fiber surface built from the divide, with explicit
curve walks.

The surface is a ribbon graph.  Each crossing c contributes two vertex disks
(c, 0) and (c, 1), one per strand through c (strand 0 carries cyclic
positions 0 and 2, strand 1 positions 1 and 3), joined by two tube bands
T1 and T2; the two disks and two tubes form the annulus whose core is the
vanishing cycle of the crossing.  Every internal divide edge becomes a strip
band joining the strand disks at its two ends.  Strand ends that reach the
disk boundary are left open, so they become boundary.

A walk is a cyclic list of band traversals (band, forward?, lane).  Lanes
are offsets in (0, 1) across a band; inside a vertex disk consecutive
traversals are joined by a straight chord, and intersections are counted by
chord interleaving.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .divide_core import natural_key


class GluingMismatch(RuntimeError):
    pass


class OpenRegionWalk(RuntimeError):
    pass


class UnresolvedOverlap(ValueError):
    pass


class NotSimple(ValueError):
    pass


# Slot order around a strand disk, counterclockwise.  "A" is the half-edge at
# cyclic position s, "B" the one at s + 2.  With this order every fixture and
# every random divide we tried has exactly r boundary components.
ROTATION = ("T1", "T2", "A", "B")
# Tube taken when a region walk turns at corner position pos (between cyclic
# positions pos and pos + 1), keyed by (pos, region sign).  Even corners do
# not care about the sign.  Together with the core-circle orientation below
# this reproduces the +1 table V+.V0 = V0.V- = V+.V- = 1.
CORNER_TUBE = {(0, "+"): "T2", (0, "-"): "T2", (2, "+"): "T1", (2, "-"): "T1",
               (1, "+"): "T2", (3, "+"): "T2", (1, "-"): "T1", (3, "-"): "T1"}
# Lanes of the vanishing-cycle walks.  Strips are crossed at STRIP_LANE when
# run forward and 1 - STRIP_LANE backward; tubes at a lane fixed by the corner
# (pos, sign); core circles at ZERO_LANE.  Found by a local search so that
# every pair of vanishing cycles meets geometrically |S_ij| times on the
# fixtures and on dense line arrangements.
STRIP_LANE = Fraction(1, 4)
ZERO_LANE = Fraction(1, 9)
TUBE_LANE = {(0, "+"): Fraction(1, 3), (0, "-"): Fraction(2, 9),
             (1, "+"): Fraction(5, 9), (1, "-"): Fraction(2, 9),
             (2, "+"): Fraction(1, 3), (2, "-"): Fraction(8, 9),
             (3, "+"): Fraction(8, 9), (3, "-"): Fraction(7, 9)}
# lane step used to separate repeated passes of one walk through a band
REPEAT_SHIFT = Fraction(1, 997)


@dataclass
class Band:
    id: tuple
    ends: tuple            # (slot at canonical end, slot at other end)
    kind: str              # 'tube' or 'strip'
    half_twist: bool = False


@dataclass
class CombSurface:
    divide: object
    rotation: dict                      # vertex -> list of slots, ccw
    bands: dict                         # band id -> Band
    slot_band: dict                     # slot -> (band id, end index)
    faces: list = field(default_factory=list)
    plus_parity: dict = field(default_factory=dict)   # crossing -> parity of its + corners

    @property
    def n_vertices(self):
        return len(self.rotation)

    @property
    def n_bands(self):
        return len(self.bands)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_bands

    @property
    def boundary_components(self):
        return len(self.faces)

    @property
    def genus(self):
        g2 = 2 - self.euler_characteristic - self.boundary_components
        return g2 // 2

    def slot_position(self, slot):
        """(vertex, index of the slot in the rotation)."""
        v = slot[0]
        return v, self.rotation[v].index(slot)

    def summary(self):
        return {"vertices": self.n_vertices, "bands": self.n_bands,
                "chi": self.euler_characteristic, "boundary": self.boundary_components,
                "genus": self.genus, "gluings": sum(b.kind == "strip" for b in self.bands.values())}

    def to_dot(self):
        lines = ["graph blocks {"]
        for c in self.divide.crossing_ids():
            lines.append('  "%s" [shape=box];' % c)
        for b in self.bands.values():
            if b.kind == "strip":
                u, w = b.ends[0][0][0], b.ends[1][0][0]
                lines.append('  "%s" -- "%s" [label="%s"];' % (u, w, b.id[1]))
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_surface(d, regions=None, rotation=None):
    """Ribbon-graph surface of a validated divide.

    Signed regions are only needed for walks: they fix the orientation of the
    core circles.
    """
    rotation_order = rotation or ROTATION
    rot = {}
    for c in d.crossing_ids():
        cyc = d.crossings[c]
        for s in (0, 1):
            names = {"T1": ((c, s), ("T1",)), "T2": ((c, s), ("T2",)),
                     "A": ((c, s), ("h", cyc[s])), "B": ((c, s), ("h", cyc[s + 2]))}
            # strand ends reaching the disk boundary carry no band
            rot[(c, s)] = [names[k] for k in rotation_order
                           if k.startswith("T") or d.vertex_of[d.partner[names[k][1][1]]][0] == "c"]
    bands, slot_band = {}, {}
    for c in d.crossing_ids():
        for t in ("T1", "T2"):
            b = Band(("tube", c, t), (((c, 0), (t,)), ((c, 1), (t,))), "tube")
            bands[b.id] = b
    for e in sorted(d.internal_edges(), key=natural_key):
        h1, h2 = d.edges[e]
        _, c1, p1 = d.vertex_of[h1]
        _, c2, p2 = d.vertex_of[h2]
        b = Band(("strip", e), (((c1, p1 % 2), ("h", h1)), ((c2, p2 % 2), ("h", h2))), "strip",
                 half_twist=True)
        bands[b.id] = b
    for b in bands.values():
        for k, slot in enumerate(b.ends):
            if slot[0] not in rot or slot not in rot[slot[0]]:
                raise GluingMismatch("band %s ends at unknown slot %s" % (b.id, slot))
            if slot in slot_band:
                raise GluingMismatch("slot %s is used by two bands" % (slot,))
            slot_band[slot] = (b.id, k)
    surf = CombSurface(d, rot, bands, slot_band)
    if regions is not None:
        for R in regions:
            for c, pos in R.corners:
                if R.sign == "+":
                    surf.plus_parity[c] = pos % 2
    surf.faces = _trace_faces(surf)
    _check_orientation(surf)
    return surf


def _other_end(surf, slot):
    bid, k = surf.slot_band[slot]
    return surf.bands[bid].ends[1 - k]


def _next_ccw(surf, slot):
    rot = surf.rotation[slot[0]]
    return rot[(rot.index(slot) + 1) % len(rot)]


def _face_step(surf, slot):
    # leave along the band at slot; at the far vertex turn to the next slot
    # counterclockwise
    return _next_ccw(surf, _other_end(surf, slot))


def _trace_faces(surf):
    seen = set()
    faces = []
    for v in sorted(surf.rotation, key=lambda x: (natural_key(x[0]), x[1])):
        for slot in surf.rotation[v]:
            if slot in seen:
                continue
            orbit = []
            x = slot
            while x not in seen:
                seen.add(x)
                orbit.append(x)
                x = _face_step(surf, x)
            faces.append(orbit)
    return faces


def _check_orientation(surf):
    # Strips carry the half-twist flag of the block picture.  Two flips (one at
    # each block end) compose to an orientation-preserving band, so every band
    # must be untwisted once the flags are paired up.
    for b in surf.bands.values():
        if b.kind == "strip" and not b.half_twist:
            raise GluingMismatch("strip %s lacks the half-twist that matches block orientations"
                                 % (b.id,))
    if surf.euler_characteristic != surf.divide.r - 2 * surf.divide.d:
        raise GluingMismatch("Euler characteristic %d, expected %d"
                             % (surf.euler_characteristic, surf.divide.r - 2 * surf.divide.d))


# --- walks ---------------------------------------------------------------------

@dataclass
class CurveWalk:
    name: str
    steps: list            # [(band id, forward, lane)], cyclic
    closed: bool = True

    def reversed(self, name=None):
        steps = [(b, not f, lane) for b, f, lane in reversed(self.steps)]
        return CurveWalk(name or self.name + "^-1", steps, self.closed)


def zero_walk(surf, c, lane=ZERO_LANE):
    """Core circle of the tube annulus at crossing c.

    It runs T1 from strand 0 to strand 1 when the + corners at c sit at odd
    positions, and the other way round when they sit at even ones.
    """
    w = CurveWalk("V0[%s]" % c, [(("tube", c, "T1"), True, lane),
                                (("tube", c, "T2"), False, lane)])
    if surf.plus_parity.get(c, 1) == 0:
        w = w.reversed("V0[%s]" % c)
    return w


def _separate_repeats(steps):
    # a walk passing twice through a band on the same lane is nudged toward
    # the middle of the band on the later passes
    seen = {}
    out = []
    for b, f, lane in steps:
        k = seen.get((b, lane), 0)
        seen[(b, lane)] = k + 1
        shift = k * REPEAT_SHIFT
        out.append((b, f, lane + shift if lane < Fraction(1, 2) else lane - shift))
    return out


def region_walk(surf, region, shift=0):
    """Closed walk around a bounded region, following its face orientation and
    switching strands through a tube at each corner.  `shift` moves every
    lane by the same amount."""
    d = surf.divide
    if not region.bounded:
        raise OpenRegionWalk("region %s is unbounded" % region.id)
    steps = []
    for z in region.walk:
        h = z[1]
        h2 = d.partner[h]
        e = d.edge_of[h]
        if d.vertex_of[h][0] != "c" or d.vertex_of[h2][0] != "c":
            raise OpenRegionWalk("region %s runs along a boundary edge %s" % (region.id, e))
        bid = ("strip", e)
        fwd = surf.bands[bid].ends[0][1] == ("h", h)
        steps.append((bid, fwd, (STRIP_LANE if fwd else 1 - STRIP_LANE) + shift))
        _, c, pos = d.vertex_of[h2]
        # from strand pos % 2 to strand (pos + 1) % 2
        key = (pos, region.sign)
        steps.append((("tube", c, CORNER_TUBE[key]), pos % 2 == 0, TUBE_LANE[key] + shift))
    w = CurveWalk("V%s[%s]" % (region.sign, region.id), _separate_repeats(steps))
    _check_closed(surf, w)
    return w


def _step_slots(surf, step):
    """(slot where the traversal starts, slot where it ends)."""
    bid, fwd, _ = step
    a, b = surf.bands[bid].ends
    return (a, b) if fwd else (b, a)


def _check_closed(surf, w):
    for i, st in enumerate(w.steps):
        nxt = w.steps[(i + 1) % len(w.steps)]
        if _step_slots(surf, st)[1][0] != _step_slots(surf, nxt)[0][0]:
            raise OpenRegionWalk("walk %s breaks between steps %d and %d" % (w.name, i, i + 1))


def vanishing_cycle_walks(surf, ag, regions, shifts=None):
    """One closed walk per AGamma vertex, keyed by vertex id."""
    by_id = {R.id: R for R in regions}
    out = {}
    for v in ag.vertices:
        sh = shifts[v["id"]] if shifts else 0
        if v["type"] == "0":
            out[v["id"]] = zero_walk(surf, v["origin"], ZERO_LANE + sh)
        else:
            out[v["id"]] = region_walk(surf, by_id[v["origin"]], sh)
    return out


# --- intersections ---------------------------------------------------------------

def _position(surf, slot, bid, lane):
    """Point on the boundary circle of slot's disk, in units of slots."""
    v, j = surf.slot_position(slot)
    k = surf.slot_band[slot][1]
    return Fraction(j) + (Fraction(lane) if k == 0 else 1 - Fraction(lane))


def chords(surf, w):
    """Chords of walk w: (vertex, start, end) positions, one per visited disk."""
    out = []
    n = len(w.steps)
    for i in range(n):
        st, nx = w.steps[i], w.steps[(i + 1) % n]
        arrive = _step_slots(surf, st)[1]
        leave = _step_slots(surf, nx)[0]
        if arrive[0] != leave[0]:
            raise OpenRegionWalk("walk %s is not closed at step %d" % (w.name, i))
        p1 = _position(surf, arrive, st[0], st[2])
        p2 = _position(surf, leave, nx[0], nx[2])
        out.append((arrive[0], p1, p2))
    return out


def _between(a, b, x, size):
    # x strictly inside the ccw arc from a to b on a circle of circumference size
    return 0 < (x - a) % size < (b - a) % size


def chord_sign(p1, p2, q1, q2, size):
    """+1 / -1 if chord p crosses chord q in a disk (orientation p then q), else 0."""
    if len({p1, p2, q1, q2}) < 4:
        raise UnresolvedOverlap("chords share an endpoint")
    i1 = _between(p1, p2, q1, size)
    i2 = _between(p1, p2, q2, size)
    if i1 == i2:
        return 0
    return 1 if i1 else -1


def _band_lanes(w):
    return {(b, lane) for b, _, lane in w.steps}


def algebraic_intersection(surf, a, b):
    """Signed intersection number a . b of two closed walks."""
    shared = _band_lanes(a) & _band_lanes(b)
    if shared:
        raise UnresolvedOverlap("walks %s and %s share band %s at lane %s"
                                % (a.name, b.name, shared_first(shared)[0], shared_first(shared)[1]))
    ca, cb = chords(surf, a), chords(surf, b)
    total = 0
    for v, p1, p2 in ca:
        size = len(surf.rotation[v])
        for u, q1, q2 in cb:
            if u == v:
                total += chord_sign(p1, p2, q1, q2, size)
    return total


def shared_first(s):
    return sorted(s, key=repr)[0]


def self_crossings(surf, w):
    """Number of transverse self-crossings of a walk (chord pairs in one disk)."""
    cs = chords(surf, w)
    count = 0
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if cs[i][0] == cs[j][0]:
                size = len(surf.rotation[cs[i][0]])
                if chord_sign(cs[i][1], cs[i][2], cs[j][1], cs[j][2], size):
                    count += 1
    return count


def pushed_copy(w, shift=Fraction(1, 1000)):
    """Parallel copy on nearby lanes (same homology class)."""
    return CurveWalk(w.name + "'", [(b, f, lane + shift) for b, f, lane in w.steps], w.closed)


def walk_matrix(surf, walks, order):
    return [[0 if i == j else algebraic_intersection(surf, walks[i], walks[j]) for j in order]
            for i in order]


def class_vector(surf, w, basis_walks, order):
    """Intersection vector of w against the basis walks."""
    return [algebraic_intersection(surf, w, basis_walks[i]) for i in order]


def class_sum(vectors):
    return [sum(col) for col in zip(*vectors)] if vectors else []


# --- boundary-parallel walks -------------------------------------------------------

def boundary_walk(surf, face_index, eps=Fraction(1, 1000)):
    """Closed walk pushed slightly off boundary component face_index."""
    face = surf.faces[face_index]
    steps = []
    for x in face:
        bid, k = surf.slot_band[x]
        # enter the band at the low end of x's interval; untwisted bands send
        # that to the high end at the far disk, next to the boundary arc
        lane = eps if k == 0 else 1 - eps
        steps.append((bid, k == 0, lane))
    return CurveWalk("boundary[%d]" % face_index, _separate_repeats(steps))


# --- cutting -------------------------------------------------------------------

def _find(parent, x):
    parent.setdefault(x, x)
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union(parent, a, b):
    ra, rb = _find(parent, a), _find(parent, b)
    if ra != rb:
        parent[ra] = rb


def check_simple(surf, walks):
    """Raise NotSimple unless the walks are pairwise disjoint simple curves."""
    lanes = set()
    for w in walks:
        for b, _, lane in w.steps:
            if (b, lane) in lanes:
                raise NotSimple("%s reuses band %s at lane %s" % (w.name, b, lane))
            lanes.add((b, lane))
    allc = [(w.name, c) for w in walks for c in chords(surf, w)]
    for i in range(len(allc)):
        for j in range(i + 1, len(allc)):
            (na, (v, p1, p2)), (nb, (u, q1, q2)) = allc[i], allc[j]
            if u == v and chord_sign(p1, p2, q1, q2, len(surf.rotation[v])):
                raise NotSimple("%s and %s cross in disk %s" % (na, nb, v))


def cut_components(surf, walks):
    """Number of connected components after cutting along disjoint simple walks."""
    check_simple(surf, walks)
    by_disk = {}
    for w in walks:
        for v, p1, p2 in chords(surf, w):
            by_disk.setdefault(v, []).append((p1, p2))
    band_lanes = {}
    for w in walks:
        for b, _, lane in w.steps:
            band_lanes.setdefault(b, []).append(Fraction(lane))

    def piece(v, x):
        # which side of each chord the boundary point x lies on
        size = len(surf.rotation[v])
        sig = tuple(_between(p1, p2, x, size) for p1, p2 in by_disk.get(v, []))
        return (v, sig)

    parent = {}
    for v in surf.rotation:
        _find(parent, piece(v, Fraction(1, 3)))
    for bid, band in surf.bands.items():
        cuts = sorted(band_lanes.get(bid, []))
        marks = [Fraction(0)] + cuts + [Fraction(1)]
        for lo, hi in zip(marks, marks[1:]):
            mid = (lo + hi) / 2
            ends = []
            for k, slot in enumerate(band.ends):
                v, j = surf.slot_position(slot)
                x = Fraction(j) + (mid if k == 0 else 1 - mid)
                ends.append(piece(v, x))
            _union(parent, ends[0], ends[1])
    # every disk piece bounded by chords touches the boundary somewhere; make
    # sure pieces with no band contact are still counted
    for v, cl in by_disk.items():
        size = len(surf.rotation[v])
        pts = sorted({p for c in cl for p in c})
        for a, b in zip(pts, pts[1:] + [pts[0] + size]):
            _find(parent, piece(v, ((a + b) / 2) % size))
    return len({_find(parent, x) for x in list(parent)})


def cut_along(surf, c):
    """Cut along a simple closed walk (or a list of disjoint ones)."""
    walks = c if isinstance(c, (list, tuple)) else [c]
    n = cut_components(surf, walks)
    return {"components": n, "separating": n > 1}


# --- oriented smoothing ----------------------------------------------------------

def _xy(pos, size):
    import math
    t = 2 * math.pi * float(pos) / size
    return (math.cos(t), math.sin(t))


def _cross_param(a1, a2, b1, b2):
    # parameters (s, t) where a1 + s(a2-a1) = b1 + t(b2-b1), or None
    dx1, dy1 = a2[0] - a1[0], a2[1] - a1[1]
    dx2, dy2 = b2[0] - b1[0], b2[1] - b1[1]
    den = dx1 * dy2 - dy1 * dx2
    if den == 0:
        return None
    ex, ey = b1[0] - a1[0], b1[1] - a1[1]
    s = (ex * dy2 - ey * dx2) / den
    t = (ex * dy1 - ey * dx1) / den
    return s, t


def _smooth_disk(chs, size):
    """Oriented smoothing of the chords in one disk.

    chs: list of (p1, p2).  Returns (mapping entry index -> exit index, number
    of closed loops that stay inside the disk).
    """
    n = len(chs)
    pts = [(_xy(p1, size), _xy(p2, size)) for p1, p2 in chs]
    hits = [[] for _ in range(n)]       # per chord: (param, other chord, other param)
    for i in range(n):
        for j in range(i + 1, n):
            if not chord_sign(chs[i][0], chs[i][1], chs[j][0], chs[j][1], size):
                continue
            s, t = _cross_param(pts[i][0], pts[i][1], pts[j][0], pts[j][1])
            hits[i].append((s, j, t))
            hits[j].append((t, i, s))
    for h in hits:
        h.sort()
    # a segment is (chord, k): the piece of the chord after its k-th crossing
    used = set()

    def run(i, k):
        # follow the oriented smoothing from segment (i, k) until the boundary
        # or until we come back to the start
        start = (i, k)
        while True:
            used.add((i, k))
            if k == len(hits[i]):
                return ("exit", i)
            s, j, t = hits[i][k]
            # turn onto chord j just after the crossing
            kk = next(m for m, h in enumerate(hits[j]) if h[1] == i and h[0] == t) + 1
            i, k = j, kk
            if (i, k) == start:
                return ("loop", None)

    mapping = {}
    for i in range(n):
        kind, j = run(i, 0)
        mapping[i] = j
    loops = 0
    for i in range(n):
        for k in range(1, len(hits[i]) + 1):
            if (i, k) not in used:
                kind, _ = run(i, k)
                loops += kind == "loop"
    return mapping, loops


def smooth_all_crossings(surf, walks):
    """Oriented smoothing of every crossing among the given walks.

    Band traversals are kept; only the connections inside vertex disks change.
    Returns (list of resulting closed walks, number of trivial disk loops).
    """
    trav = []                       # (walk index, step index)
    for a, w in enumerate(walks):
        for i in range(len(w.steps)):
            trav.append((a, i))
    per_disk = {}
    for a, w in enumerate(walks):
        n = len(w.steps)
        for i, (v, p1, p2) in enumerate(chords(surf, w)):
            # chord i joins the end of step i to the start of step i + 1
            per_disk.setdefault(v, []).append(((p1, p2), (a, i), (a, (i + 1) % n)))
    succ = {}
    loops = 0
    for v, items in per_disk.items():
        size = len(surf.rotation[v])
        mapping, lp = _smooth_disk([x[0] for x in items], size)
        loops += lp
        for i, j in mapping.items():
            succ[items[i][1]] = items[j][2]
    out = []
    seen = set()
    for t in trav:
        if t in seen:
            continue
        cyc = []
        x = t
        while x not in seen:
            seen.add(x)
            cyc.append(x)
            x = succ[x]
        steps = [walks[a].steps[i] for a, i in cyc]
        out.append(CurveWalk("sg%d" % len(out), steps))
    return out, loops


# lane offset for copies that must avoid the basis walks' lanes
CHAIN_SHIFT = Fraction(1, 7919)


def smooth_chain(surf, walks, vertices, order):
    """Smooth the union of the vanishing cycles along a chain of vertices.

    Consecutive vertices meet once, so the result should be one simple closed
    curve carrying the sum of their classes.  Returns a certificate.
    """
    copies = [pushed_copy(walks[v], CHAIN_SHIFT) for v in vertices]
    out, loops = smooth_all_crossings(surf, copies)
    cert = {"vertices": list(vertices), "components": len(out), "disk_loops": loops,
            "separating": None, "class_ok": None, "simple": None}
    if len(out) != 1:
        return cert
    c = out[0]
    cert["simple"] = self_crossings(surf, c) == 0
    cert["separating"] = cut_along(surf, c)["separating"]
    expected = class_sum([class_vector(surf, cp, walks, order) for cp in copies])
    cert["class_ok"] = class_vector(surf, c, walks, order) == expected
    cert["walk"] = c
    return cert
