"""Build divide descriptions from planar drawings.

A drawing is a list of polylines inside the unit disk whose first and last
points lie on the unit circle.  Crossings, rotations and the boundary order
are read off the geometry, which is how the bundled fixtures were produced.
"""

import math


def _seg_intersection(p, q, r, s, eps=1e-12):
    # returns (t, u) with p + t(q-p) = r + u(s-r), or None
    dx1, dy1 = q[0] - p[0], q[1] - p[1]
    dx2, dy2 = s[0] - r[0], s[1] - r[1]
    den = dx1 * dy2 - dy1 * dx2
    if abs(den) < eps:
        return None
    ex, ey = r[0] - p[0], r[1] - p[1]
    t = (ex * dy2 - ey * dx2) / den
    u = (ex * dy1 - ey * dx1) / den
    if 0.0 <= t < 1.0 and 0.0 <= u < 1.0:
        return t, u
    return None


def divide_from_polylines(polylines, with_layout=True):
    """Return a divide dict (crossings, endpoints, edges, branches)."""
    lines = [[(float(x), float(y)) for x, y in pl] for pl in polylines]
    events = [[] for _ in lines]  # per branch: (seg, t, crossing_key)
    points = {}
    key = 0
    segs = []
    for b, pl in enumerate(lines):
        for i in range(len(pl) - 1):
            segs.append((b, i, pl[i], pl[i + 1]))
    for a in range(len(segs)):
        ba, ia, p, q = segs[a]
        for c in range(a + 1, len(segs)):
            bc, ic, r, s = segs[c]
            if ba == bc and abs(ia - ic) <= 1:
                continue
            hit = _seg_intersection(p, q, r, s)
            if hit is None:
                continue
            t, u = hit
            pt = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            points[key] = pt
            events[ba].append((ia, t, key, (q[0] - p[0], q[1] - p[1])))
            events[bc].append((ic, u, key, (s[0] - r[0], s[1] - r[1])))
            key += 1
    for ev in events:
        ev.sort()

    # crossing ids in order of first appearance along the branches
    order = []
    for ev in events:
        for _, _, k, _ in ev:
            if k not in order:
                order.append(k)
    cid = {k: "c%d" % n for n, k in enumerate(order)}

    half = 0
    edges = []
    branches = []
    at_crossing = {k: [] for k in order}  # (angle, half-edge id)
    ends = []  # (angle on circle, endpoint half-edge)

    def new_half():
        nonlocal half
        h = "h%d" % half
        half += 1
        return h

    for b, ev in enumerate(lines):
        pl = lines[b]
        walk = []
        start = new_half()
        ends.append((math.atan2(pl[0][1], pl[0][0]) % (2 * math.pi), start))
        prev = start
        for _, _, k, d in events[b]:
            back, fwd = new_half(), new_half()
            ang = math.atan2(d[1], d[0])
            at_crossing[k].append(((ang + math.pi) % (2 * math.pi), back))
            at_crossing[k].append((ang % (2 * math.pi), fwd))
            eid = "e%d" % len(edges)
            edges.append({"id": eid, "ends": [prev, back]})
            walk.append(eid)
            prev = fwd
        stop = new_half()
        ends.append((math.atan2(pl[-1][1], pl[-1][0]) % (2 * math.pi), stop))
        eid = "e%d" % len(edges)
        edges.append({"id": eid, "ends": [prev, stop]})
        walk.append(eid)
        branches.append(walk)

    crossings = []
    for k in order:
        rot = [h for _, h in sorted(at_crossing[k])]
        crossings.append({"id": cid[k], "cyclic": rot})
    ends.sort()
    endpoints = [{"id": "p%d" % n, "half_edge": h} for n, (_, h) in enumerate(ends)]
    out = {"crossings": crossings, "endpoints": endpoints, "edges": edges,
           "branches": branches}
    if with_layout:
        out["layout"] = {
            "crossings": {cid[k]: [round(points[k][0], 6), round(points[k][1], 6)] for k in order},
            "branches": [[[round(x, 6), round(y, 6)] for x, y in pl] for pl in lines],
        }
    return out


def sample_curve(f, t0, t1, n=200):
    return [f(t0 + (t1 - t0) * i / n) for i in range(n + 1)]


def clip_to_disk(points):
    """Trim a polyline to the part inside the unit disk and put both ends on the circle."""
    inside = [math.hypot(*p) < 1.0 for p in points]
    i = inside.index(True)
    j = len(points) - 1 - inside[::-1].index(True)
    core = list(points[i:j + 1])

    def to_circle(a, b):
        # point on segment a->b with |x| = 1, a outside, b inside
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = (lo + hi) / 2
            x = a[0] + mid * (b[0] - a[0])
            y = a[1] + mid * (b[1] - a[1])
            if math.hypot(x, y) >= 1.0:
                lo = mid
            else:
                hi = mid
        x = a[0] + lo * (b[0] - a[0])
        y = a[1] + lo * (b[1] - a[1])
        r = math.hypot(x, y)
        return (x / r, y / r)

    head = to_circle(points[i - 1], points[i]) if i > 0 else points[0]
    tail = to_circle(points[j + 1], points[j]) if j < len(points) - 1 else points[-1]
    return [head] + core + [tail]
