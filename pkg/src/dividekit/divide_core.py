"""Divides: parsing, regions, signs, the AGamma diagram and depths.

A divide is given as a rotation system.  Crossings list their four
half-edges counterclockwise, endpoints are listed counterclockwise along the
disk boundary, edges pair half-edges and branches are edge walks.
"""

import re
from collections import deque
from dataclasses import dataclass, field


class DivideError(ValueError):
    """Base class for malformed divide input; ``element`` names the culprit."""

    kind = "DivideError"

    def __init__(self, message, element=None):
        super().__init__("%s: %s" % (self.kind, message))
        self.element = element


class NonQuadrivalent(DivideError):
    kind = "NonQuadrivalent"


class BranchNotThroughCrossing(DivideError):
    kind = "BranchNotThroughCrossing"


class Disconnected(DivideError):
    kind = "Disconnected"


class LoopBranch(DivideError):
    kind = "LoopBranch"


class DanglingHalfEdge(DivideError):
    kind = "DanglingHalfEdge"


class BranchCoverage(DivideError):
    kind = "BranchCoverage"


class NotTwoColorable(RuntimeError):
    pass


class PeelingStalled(RuntimeError):
    pass


def natural_key(s):
    """Sort key that orders 'c2' before 'c10'."""
    return [int(t) if t.isdigit() else t for t in re.split(r"(\d+)", str(s))]


@dataclass(frozen=True)
class Divide:
    crossings: dict            # crossing id -> tuple of 4 half-edges (ccw)
    endpoints: tuple           # ((endpoint id, half-edge), ...) ccw on the circle
    edges: dict                # edge id -> (h1, h2)
    branches: tuple            # tuple of edge-id tuples
    layout: dict = field(default=None, compare=False)

    # derived lookups, filled by validate_divide
    vertex_of: dict = field(default=None, compare=False, repr=False)
    partner: dict = field(default=None, compare=False, repr=False)
    edge_of: dict = field(default=None, compare=False, repr=False)
    branch_of_edge: dict = field(default=None, compare=False, repr=False)

    @property
    def d(self):
        return len(self.crossings)

    @property
    def r(self):
        return len(self.branches)

    def crossing_ids(self):
        return sorted(self.crossings, key=natural_key)

    def internal_edges(self):
        return [e for e, (a, b) in self.edges.items()
                if self.vertex_of[a][0] == "c" and self.vertex_of[b][0] == "c"]

    def to_json(self):
        out = {
            "crossings": [{"id": c, "cyclic": list(self.crossings[c])} for c in self.crossing_ids()],
            "endpoints": [{"id": p, "half_edge": h} for p, h in self.endpoints],
            "edges": [{"id": e, "ends": list(self.edges[e])} for e in sorted(self.edges, key=natural_key)],
            "branches": [list(b) for b in self.branches],
        }
        if self.layout:
            out["layout"] = self.layout
        return out


def validate_divide(raw):
    """Check a raw divide dict and return a Divide, or raise a DivideError."""
    try:
        crossings = {}
        for c in raw["crossings"]:
            cyc = tuple(c["cyclic"])
            if len(cyc) != 4:
                raise NonQuadrivalent("crossing %s has %d half-edges" % (c["id"], len(cyc)), c["id"])
            if c["id"] in crossings:
                raise DivideError("duplicate crossing id %s" % c["id"], c["id"])
            crossings[c["id"]] = cyc
        endpoints = tuple((p["id"], p["half_edge"]) for p in raw["endpoints"])
        edges = {}
        for e in raw["edges"]:
            ends = tuple(e["ends"])
            if len(ends) != 2:
                raise DanglingHalfEdge("edge %s does not pair two half-edges" % e["id"], e["id"])
            edges[e["id"]] = ends
        branches = tuple(tuple(b) for b in raw["branches"])
    except (KeyError, TypeError) as exc:
        raise DivideError("malformed divide description (%s)" % exc) from None

    vertex_of = {}
    for c, cyc in crossings.items():
        for i, h in enumerate(cyc):
            if h in vertex_of:
                raise DanglingHalfEdge("half-edge %s appears in two rotations" % h, h)
            vertex_of[h] = ("c", c, i)
    for i, (p, h) in enumerate(endpoints):
        if h in vertex_of:
            raise DanglingHalfEdge("half-edge %s appears in two rotations" % h, h)
        vertex_of[h] = ("p", p, i)

    partner, edge_of = {}, {}
    for e, (a, b) in edges.items():
        for h in (a, b):
            if h not in vertex_of:
                raise DanglingHalfEdge("half-edge %s of edge %s is not at any vertex" % (h, e), h)
            if h in partner:
                raise DanglingHalfEdge("half-edge %s is used by two edges" % h, h)
        if a == b:
            raise DanglingHalfEdge("edge %s pairs %s with itself" % (e, a), e)
        partner[a], partner[b] = b, a
        edge_of[a] = edge_of[b] = e
    for h in vertex_of:
        if h not in partner:
            raise DanglingHalfEdge("half-edge %s belongs to no edge" % h, h)

    # connectivity over crossings and endpoints
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in list(crossings) + [p for p, _ in endpoints]:
        find(v)
    for a, b in edges.values():
        parent[find(vertex_of[a][1])] = find(vertex_of[b][1])
    roots = {find(v) for v in parent}
    if len(roots) > 1:
        first = sorted(parent, key=natural_key)
        lone = [v for v in first if find(v) != find(first[0])]
        raise Disconnected("divide has %d components" % len(roots), lone[0])

    branch_of_edge = {}
    for bi, walk in enumerate(branches):
        if not walk:
            raise LoopBranch("branch %d is empty" % bi, bi)
        for e in walk:
            if e not in edges:
                raise BranchCoverage("branch %d uses unknown edge %s" % (bi, e), e)
            if e in branch_of_edge:
                raise BranchCoverage("edge %s is used twice by the branches" % e, e)
            branch_of_edge[e] = bi
        _check_branch_walk(bi, walk, edges, vertex_of)
    for e in edges:
        if e not in branch_of_edge:
            raise LoopBranch("edge %s lies on no arc branch (closed component?)" % e, e)

    return Divide(crossings, endpoints, edges, branches, raw.get("layout"),
                  vertex_of, partner, edge_of, branch_of_edge)


def _check_branch_walk(bi, walk, edges, vertex_of):
    e0 = walk[0]
    a, b = edges[e0]
    # orient the first edge so it starts at an endpoint
    if vertex_of[a][0] == "p":
        cur_in = b
    elif vertex_of[b][0] == "p":
        cur_in = a
    else:
        raise LoopBranch("branch %d does not start at a boundary endpoint" % bi, bi)
    if len(walk) == 1:
        if vertex_of[cur_in][0] != "p":
            raise LoopBranch("branch %d does not end at a boundary endpoint" % bi, bi)
        return
    for e in walk[1:]:
        kind, c, pos = vertex_of[cur_in]
        if kind != "c":
            raise LoopBranch("branch %d reaches the boundary before its end" % bi, bi)
        x, y = edges[e]
        if vertex_of[x][1] == c and vertex_of[x][0] == "c" and (vertex_of[x][2] - pos) % 4 == 2:
            nxt_out, nxt_in = x, y
        elif vertex_of[y][1] == c and vertex_of[y][0] == "c" and (vertex_of[y][2] - pos) % 4 == 2:
            nxt_out, nxt_in = y, x
        elif c in (vertex_of[x][1], vertex_of[y][1]):
            raise BranchNotThroughCrossing(
                "branch %d turns at crossing %s (edge %s)" % (bi, c, e), c)
        else:
            raise BranchCoverage("branch %d jumps from crossing %s to edge %s" % (bi, c, e), e)
        cur_in = nxt_in
    if vertex_of[cur_in][0] != "p":
        raise LoopBranch("branch %d does not end at a boundary endpoint" % bi, bi)


# --- regions -----------------------------------------------------------------

@dataclass
class Region:
    id: str
    walk: tuple            # darts: ('h', half-edge) or ('b', arc index, '+'/'-')
    bounded: bool
    sign: str = None       # '+' or '-'
    crossings: frozenset = frozenset()
    edges: frozenset = frozenset()
    corners: tuple = ()    # (crossing, i): corner between cyclic[i] and cyclic[i+1]

    @property
    def unbounded(self):
        return not self.bounded


def _darts(d):
    out = []
    for c in d.crossing_ids():
        out.extend(("h", h) for h in d.crossings[c])
    out.extend(("h", h) for _, h in d.endpoints)
    n = len(d.endpoints)
    for i in range(n):
        out.append(("b", i, "+"))
        out.append(("b", i, "-"))
    return out


def _alpha(d, x):
    if x[0] == "h":
        return ("h", d.partner[x[1]])
    return ("b", x[1], "-" if x[2] == "+" else "+")


def _at(d, x):
    """Vertex (kind, id) where dart x starts."""
    if x[0] == "h":
        v = d.vertex_of[x[1]]
        return v[0], v[1]
    n = len(d.endpoints)
    i = x[1] if x[2] == "+" else (x[1] + 1) % n
    return "p", d.endpoints[i][0]


def _sigma(d, x):
    n = len(d.endpoints)
    if x[0] == "h":
        kind, v, pos = d.vertex_of[x[1]]
        if kind == "c":
            return ("h", d.crossings[v][(pos + 1) % 4])
        return ("b", (pos - 1) % n, "-")
    if x[2] == "+":
        i = x[1]
        return ("h", d.endpoints[i][1])
    return ("b", (x[1] + 1) % n, "+")


def trace_regions(d):
    """Faces of the rotation system closed off by the disk boundary."""
    seen = set()
    outer = ("b", 0, "+")
    regions = []
    orbit = []
    while True:
        orbit.append(outer)
        seen.add(outer)
        outer = _sigma(d, _alpha(d, outer))
        if outer in seen:
            break
    for x in _darts(d):
        if x in seen:
            continue
        walk = []
        y = x
        while y not in seen:
            seen.add(y)
            walk.append(y)
            y = _sigma(d, _alpha(d, y))
        bounded = all(z[0] == "h" for z in walk)
        crossings, edges, corners = set(), set(), []
        for z in walk:
            if z[0] == "h":
                edges.add(d.edge_of[z[1]])
                kind, v, _ = d.vertex_of[z[1]]
                if kind == "c":
                    crossings.add(v)
            a = _alpha(d, z)
            if a[0] == "h":
                kind, v, pos = d.vertex_of[a[1]]
                if kind == "c":
                    corners.append((v, pos))
        regions.append(Region("R%d" % len(regions), tuple(walk), bounded,
                              crossings=frozenset(crossings), edges=frozenset(edges),
                              corners=tuple(corners)))
    return regions


def euler_check(d, regions):
    """Faces - edges + vertices of the disk map; equals 1 for a valid divide."""
    n_edges = len(d.edges) + len(d.endpoints)
    n_vertices = d.d + len(d.endpoints)
    return len(regions) - n_edges + n_vertices


def region_adjacency(d, regions):
    """Pairs of regions on the two sides of each divide edge."""
    side = {}
    for R in regions:
        for z in R.walk:
            if z[0] == "h":
                side[z[1]] = R.id
    pairs = []
    for e in sorted(d.edges, key=natural_key):
        a, b = d.edges[e]
        pairs.append((e, side[a], side[b]))
    return pairs


def default_anchor(regions):
    bounded = [R.id for R in regions if R.bounded]
    pool = bounded or [R.id for R in regions]
    return (min(pool, key=natural_key), "+")


def assign_signs(d, regions, anchor=None):
    """Checkerboard colouring; anchor is (region id, '+' or '-')."""
    if anchor is None:
        anchor = default_anchor(regions)
    rid, sign = anchor
    if sign not in "+-" or len(sign) != 1:
        raise ValueError("anchor sign must be '+' or '-'")
    by_id = {R.id: R for R in regions}
    if rid not in by_id:
        raise ValueError("unknown anchor region %s" % rid)
    nbrs = {R.id: [] for R in regions}
    for e, a, b in region_adjacency(d, regions):
        nbrs[a].append((b, e))
        nbrs[b].append((a, e))
    colour = {rid: sign}
    queue = deque([rid])
    flip = {"+": "-", "-": "+"}
    while queue:
        u = queue.popleft()
        for w, e in nbrs[u]:
            want = flip[colour[u]]
            if w not in colour:
                colour[w] = want
                queue.append(w)
            elif colour[w] != want:
                raise NotTwoColorable("regions %s and %s meet along %s with equal signs" % (u, w, e))
    if len(colour) != len(regions):
        raise NotTwoColorable("region adjacency is not connected")
    out = []
    for R in regions:
        out.append(Region(R.id, R.walk, R.bounded, colour[R.id], R.crossings, R.edges, R.corners))
    return out


def milnor_number(d):
    return 2 * d.d - d.r + 1


# --- AGamma diagram ------------------------------------------------------------

TYPE_RANK = {"-": 0, "0": 1, "+": 2}


@dataclass
class AGammaDiagram:
    vertices: list                      # dicts: id, type, origin, depth
    edges: set                          # sorted (a, b) vertex-id pairs
    parallel: list = field(default_factory=list)   # collapsed +/- multi-edges

    def __post_init__(self):
        self._adj = None

    @property
    def mu(self):
        return len(self.vertices)

    @property
    def order(self):
        return [v["id"] for v in self.vertices]

    def types(self):
        return [v["type"] for v in self.vertices]

    def type_of(self, v):
        return self.vertices[v]["type"]

    def depth_of(self, v):
        return self.vertices[v]["depth"]

    def adjacency(self):
        if self._adj is None:
            adj = {v["id"]: set() for v in self.vertices}
            for a, b in self.edges:
                adj[a].add(b)
                adj[b].add(a)
            self._adj = adj
        return self._adj

    def neighbours(self, v):
        return self.adjacency()[v]

    def has_edge(self, a, b):
        return (min(a, b), max(a, b)) in self.edges

    def by_origin(self, origin):
        for v in self.vertices:
            if v["origin"] == origin:
                return v["id"]
        raise KeyError(origin)

    def with_depths(self, depths):
        verts = [dict(v, depth=depths[v["id"]]) for v in self.vertices]
        return AGammaDiagram(verts, set(self.edges), list(self.parallel))

    def to_json(self):
        return {
            "vertices": [dict(v) for v in self.vertices],
            "edges": [list(e) for e in sorted(self.edges)],
            "parallel": [list(p) for p in self.parallel],
        }

    def to_dot(self, name="AGamma"):
        shape = {"-": "box", "0": "circle", "+": "diamond"}
        lines = ["graph %s {" % name]
        for v in self.vertices:
            dep = "" if v["depth"] is None else " d%d" % v["depth"]
            lines.append('  v%d [shape=%s, label="%s %s%s"];' % (
                v["id"], shape[v["type"]], v["type"], v["origin"], dep))
        for a, b in sorted(self.edges):
            lines.append("  v%d -- v%d;" % (a, b))
        lines.append("}")
        return "\n".join(lines) + "\n"


def make_agamma(records, edges):
    """Build a diagram from (type, origin) records and edges given by origin pairs.

    Vertices are ordered -, 0, + with ties broken by origin id; vertex ids are
    positions in that order.
    """
    recs = sorted(records, key=lambda r: (TYPE_RANK[r[0]], natural_key(r[1])))
    verts = []
    index = {}
    for i, (t, origin) in enumerate(recs):
        verts.append({"id": i, "type": t, "origin": origin, "depth": None})
        index[origin] = i
    es = set()
    for a, b in edges:
        ia, ib = index[a], index[b]
        if verts[ia]["type"] == verts[ib]["type"]:
            raise ValueError("edge between two %s vertices" % verts[ia]["type"])
        es.add((min(ia, ib), max(ia, ib)))
    return AGammaDiagram(verts, es)


def build_agamma(d, regions):
    """AGamma diagram of a signed divide (depths unset)."""
    records = [("0", c) for c in d.crossing_ids()]
    bounded = {R.id: R for R in regions if R.bounded}
    for R in bounded.values():
        records.append((R.sign, R.id))
    edge_list = []
    counts = {}
    for e, a, b in region_adjacency(d, regions):
        if a in bounded and b in bounded and a != b:
            key = tuple(sorted((a, b), key=natural_key))
            counts[key] = counts.get(key, 0) + 1
    for key in sorted(counts, key=lambda k: (natural_key(k[0]), natural_key(k[1]))):
        edge_list.append(key)
    for R in bounded.values():
        for c in R.crossings:
            edge_list.append((c, R.id))
    ag = make_agamma(records, edge_list)
    ag.parallel = [[ag.by_origin(a), ag.by_origin(b), n] for (a, b), n in sorted(
        counts.items(), key=lambda kv: (natural_key(kv[0][0]), natural_key(kv[0][1]))) if n > 1]
    return ag


def outer_incidence(d, regions, ag, contact="edge"):
    """Which AGamma vertices touch an unbounded region.

    A crossing touches when it lies on an unbounded face walk.  A region
    touches when it shares a divide edge with an unbounded region
    (contact='edge') or, more loosely, an edge or a crossing (contact='point').
    """
    unb = [R for R in regions if not R.bounded]
    unb_cross = set().union(*[R.crossings for R in unb]) if unb else set()
    unb_edges = set().union(*[R.edges for R in unb]) if unb else set()
    by_id = {R.id: R for R in regions}
    out = {}
    for v in ag.vertices:
        if v["type"] == "0":
            out[v["id"]] = v["origin"] in unb_cross
        else:
            R = by_id[v["origin"]]
            hit = bool(R.edges & unb_edges)
            if contact == "point":
                hit = hit or bool(R.crossings & unb_cross)
            elif contact != "edge":
                raise ValueError("contact must be 'edge' or 'point'")
            out[v["id"]] = hit
    return out


def compute_depths(ag, outer):
    """Peel the diagram: round 0 is the outer set, round k the vertices that
    lost a neighbour in round k-1."""
    depth = {}
    current = sorted(v for v, flag in outer.items() if flag)
    remaining = set(ag.order)
    k = 0
    while remaining:
        if not current:
            raise PeelingStalled("round %d removes nothing; %d vertices remain (%s)"
                                 % (k, len(remaining), sorted(remaining)))
        for v in current:
            depth[v] = k
        remaining.difference_update(current)
        nxt = set()
        for v in current:
            nxt.update(w for w in ag.neighbours(v) if w in remaining)
        current = sorted(nxt)
        k += 1
    return ag.with_depths(depth)


def branch_pair_multiplicities(d):
    """Return (nu, self_crossings): nu[i][j] counts crossings of branches i and j."""
    r = d.r
    nu = [[0] * r for _ in range(r)]
    selfc = [0] * r
    for c, cyc in d.crossings.items():
        b0 = d.branch_of_edge[d.edge_of[cyc[0]]]
        b1 = d.branch_of_edge[d.edge_of[cyc[1]]]
        if b0 == b1:
            selfc[b0] += 1
        else:
            nu[b0][b1] += 1
            nu[b1][b0] += 1
    return nu, selfc


@dataclass
class SignedDivide:
    """Everything derived from a divide and a sign anchor."""
    divide: Divide
    regions: list
    agamma: AGammaDiagram
    anchor: tuple
    outer: dict

    @property
    def mu(self):
        return milnor_number(self.divide)


def analyse(raw_or_divide, anchor=None, contact="edge"):
    d = raw_or_divide if isinstance(raw_or_divide, Divide) else validate_divide(raw_or_divide)
    regions = trace_regions(d)
    if anchor is None:
        anchor = default_anchor(regions)
    regions = assign_signs(d, regions, anchor)
    ag = build_agamma(d, regions)
    outer = outer_incidence(d, regions, ag, contact)
    ag = compute_depths(ag, outer)
    return SignedDivide(d, regions, ag, anchor, outer)
