"""Relevant vertices, basic arcs, good paths and the arcsets built on them,
with the adapted / exceptional / telescoping / linear-order certificates.

Arcs are never embedded here.  An arc (or arcset) is known only through its
pairing vector against the vanishing cycles V_0..V_{mu-1}.
"""

from dataclasses import dataclass, field

from . import homology

EDGE_KINDS = {"K+0": ("+", "0"), "K+-": ("+", "-"), "K0-": ("0", "-")}
REVERSED_KINDS = {"K0+": "K+0", "K-+": "K+-", "K-0": "K0-"}
VERTEX_KINDS = {"K+": "+", "K-": "-", "K0": "0"}

DISJOINTNESS_NOTE = (
    "Arcsets sharing a path prefix reuse the same basic arcs; each shared arc is "
    "replaced by a slightly translated parallel copy, which changes no pairing, "
    "so the members of the collection may be taken pairwise disjoint. Under "
    "disjointness, phi(K_j).K_i = Var(K_j).K_i = -V_j.K_i, so condition (ii) "
    "reduces to K_i.V_j = 0 for i < j.")


class BadAnchor(ValueError):
    pass


class KindMismatch(ValueError):
    pass


class NoEligibleParent(RuntimeError):
    pass


class CaseFallthrough(RuntimeError):
    pass


class TelescopeBroken(RuntimeError):
    pass


def closed_nbhd(ag, v):
    """Vertices adjacent to v, v itself included."""
    return set(ag.neighbours(v)) | {v}


@dataclass
class RelevantSet:
    anchor: object
    rule: str
    members: frozenset


def relevant_vertices(ag, anchor):
    """Relevant set of an AGamma edge (a pair of vertex ids) or a depth-0 +/- vertex."""
    if isinstance(anchor, (tuple, list)):
        a, b = anchor
        if not ag.has_edge(a, b):
            raise BadAnchor("%s-%s is not an edge of the diagram" % (a, b))
        ta, tb = ag.type_of(a), ag.type_of(b)
        types = {ta: a, tb: b}
        if set(types) == {"+", "0"}:
            vp, v0 = types["+"], types["0"]
            mem = {v for v in closed_nbhd(ag, vp) if v not in closed_nbhd(ag, v0)} | {vp}
            rule = "i"
        elif set(types) == {"+", "-"}:
            vp, vm = types["+"], types["-"]
            mem = closed_nbhd(ag, vp) - {vm}
            rule = "ii"
        elif set(types) == {"0", "-"}:
            v0, vm = types["0"], types["-"]
            mem = {v for v in closed_nbhd(ag, v0) if v not in closed_nbhd(ag, vm)} | {v0}
            rule = "iii"
        else:
            raise BadAnchor("edge %s-%s joins vertices of the same type" % (a, b))
        return RelevantSet((min(a, b), max(a, b)), rule, frozenset(mem))
    v = anchor
    if ag.depth_of(v) != 0:
        raise BadAnchor("vertex %s has depth %s, not 0" % (v, ag.depth_of(v)))
    t = ag.type_of(v)
    if t == "+":
        # includes v itself: adjacency is reflexive
        return RelevantSet(v, "iv", frozenset(closed_nbhd(ag, v)))
    if t == "-":
        return RelevantSet(v, "v", frozenset({v}))
    raise BadAnchor("0 vertex %s has no relevant set" % v)


def zero_vertex_support(ag, v):
    """Pairing support of the depth-0 arc at a 0 vertex: itself and its - neighbours."""
    if ag.depth_of(v) != 0 or ag.type_of(v) != "0":
        raise BadAnchor("vertex %s is not a depth-0 0 vertex" % v)
    return frozenset({v} | {w for w in ag.neighbours(v) if ag.type_of(w) == "-"})


@dataclass
class BasicArc:
    kind: str
    anchor: object          # (s, t) for edge kinds, vertex id for vertex kinds
    pairing: list
    support: frozenset = frozenset()

    def to_json(self):
        anc = list(self.anchor) if isinstance(self.anchor, tuple) else self.anchor
        return {"kind": self.kind, "anchor": anc, "pairing": list(self.pairing)}


def edge_kind(ag, s, t):
    """K^{|s|,|t|} for the oriented edge s -> t."""
    return "K%s%s" % (ag.type_of(s), ag.type_of(t))


def basic_arc(ag, anchor, kind):
    n = ag.mu
    vec = [0] * n
    if kind in VERTEX_KINDS:
        if isinstance(anchor, (tuple, list)) or ag.type_of(anchor) != VERTEX_KINDS[kind]:
            raise KindMismatch("%s needs a %s vertex anchor" % (kind, VERTEX_KINDS[kind]))
        if kind == "K0":
            sup = zero_vertex_support(ag, anchor)
        else:
            sup = relevant_vertices(ag, anchor).members
        for v in sup:
            vec[v] = 1
        return BasicArc(kind, anchor, vec, sup)
    if kind in EDGE_KINDS:
        base, sgn = kind, -1
    elif kind in REVERSED_KINDS:
        base, sgn = REVERSED_KINDS[kind], 1
    else:
        raise KindMismatch("unknown kind %s" % kind)
    if not isinstance(anchor, (tuple, list)):
        raise KindMismatch("%s needs an edge anchor" % kind)
    a, b = anchor
    if sorted((ag.type_of(a), ag.type_of(b))) != sorted(EDGE_KINDS[base]):
        raise KindMismatch("%s does not fit an edge of types %s%s"
                           % (kind, ag.type_of(a), ag.type_of(b)))
    if kind != edge_kind(ag, a, b):
        raise KindMismatch("%s does not match the orientation %s -> %s" % (kind, a, b))
    sup = relevant_vertices(ag, (a, b)).members
    for v in sup:
        vec[v] = sgn
    return BasicArc(kind, (a, b), vec, sup)


@dataclass
class GoodPath:
    target: int
    edges: list             # [(s, t), ...] oriented from the depth-0 start

    @property
    def m(self):
        return len(self.edges)

    @property
    def source(self):
        return self.edges[0][0] if self.edges else self.target

    def vertices(self):
        return [self.source] + [t for _, t in self.edges]


def good_paths(ag):
    """One good path per vertex; parents are chosen with the lowest vertex id."""
    paths = {}
    for v in sorted(ag.order, key=lambda x: (ag.depth_of(x), x)):
        k = ag.depth_of(v)
        if k == 0:
            paths[v] = GoodPath(v, [])
            continue
        t = ag.type_of(v)
        want = {"+": {"-"}, "-": {"+"}, "0": {"+", "-"}}[t]
        cands = sorted(w for w in ag.neighbours(v)
                       if ag.depth_of(w) == k - 1 and ag.type_of(w) in want)
        if not cands:
            raise NoEligibleParent("vertex %d (type %s, depth %d) has no %s neighbour of depth %d"
                                   % (v, t, k, "/".join(sorted(want)), k - 1))
        w = cands[0]
        paths[v] = GoodPath(v, paths[w].edges + [(w, v)])
    return paths


# (|s(gamma)|, |s(e_m)| or '*', |t(gamma)|) -> (case number, parity of m)
CASES = [
    (("+", "*", "+"), 1, 0),
    (("+", "+", "0"), 2, 1),
    (("+", "-", "0"), 3, 0),
    (("+", "*", "-"), 4, 1),
    (("-", "*", "+"), 5, 1),
    (("-", "+", "0"), 6, 0),
    (("-", "-", "0"), 7, 1),
    (("-", "*", "-"), 8, 0),
]


def classify_path(ag, path):
    """Case number 1-8 of a nonconstant good path; 0 for a constant one."""
    if path.m == 0:
        return 0
    s = ag.type_of(path.source)
    sm = ag.type_of(path.edges[-1][0])
    t = ag.type_of(path.target)
    for (a, b, c), num, parity in CASES:
        if a == s and c == t and b in ("*", sm) and path.m % 2 == parity:
            return num
    raise CaseFallthrough("path %s (types %s..%s..%s, m=%d) fits none of the eight cases"
                          % (path.edges, s, sm, t, path.m))


@dataclass
class Arcset:
    target: int
    path: GoodPath
    components: list
    groups: list = field(default_factory=list)     # lists of component indices
    case: int = 0
    order: list = field(default_factory=list)      # linear order (component indices)

    def pairing(self):
        n = len(self.components[0].pairing)
        return [sum(c.pairing[i] for c in self.components) for i in range(n)]


def build_arcset(ag, path):
    s = path.source
    if path.m == 0:
        kind = "K" + ag.type_of(s)
        arc = basic_arc(ag, s, kind)
        return Arcset(path.target, path, [arc], [[0]], 0, [0])
    case = classify_path(ag, path)
    comps = []
    if ag.depth_of(s) == 0:
        comps.append(basic_arc(ag, s, "K" + ag.type_of(s)))
    off = len(comps)
    for a, b in path.edges:
        comps.append(basic_arc(ag, (a, b), edge_kind(ag, a, b)))
    edge_idx = list(range(off, off + path.m))     # component index of e_1..e_m
    groups = []
    if ag.type_of(s) == "+":
        first = ([0] if off else []) + [edge_idx[0]]
        groups.append(first)
        rest = edge_idx[1:]
    else:
        if off:
            groups.append([0])
        rest = edge_idx
    for i in range(0, len(rest), 2):
        groups.append(rest[i:i + 2])
    aset = Arcset(path.target, path, comps, groups, case)
    aset.order = linear_order(ag, aset)
    return aset


def build_collection(ag, paths=None):
    paths = paths if paths is not None else good_paths(ag)
    return [build_arcset(ag, paths[v]) for v in ag.order]


# --- pairings and the grouped cancellations ------------------------------------

def _vec(n, entries):
    v = [0] * n
    for k, x in entries.items():
        v[k] += x
    return v


def arcset_pairing(ag, aset):
    """Aggregate pairing vector and a per-group cancellation report."""
    n = ag.mu
    total = aset.pairing()
    report = []
    edges = aset.path.edges
    off = 1 if aset.path.m and ag.depth_of(aset.path.source) == 0 else 0
    for grp in aset.groups:
        vec = [sum(aset.components[c].pairing[i] for c in grp) for i in range(n)]
        kinds = tuple(aset.components[c].kind for c in grp)
        entry = {"components": grp, "kinds": list(kinds), "pairing": vec, "rule": None,
                 "expected": None, "ok": None}
        if kinds == ("K+", "K+-"):
            e1 = edges[grp[1] - off]
            entry["rule"] = "i"
            entry["expected"] = _vec(n, {e1[1]: 1})
        elif kinds == ("K-+", "K+-"):
            e1, e2 = edges[grp[0] - off], edges[grp[1] - off]
            entry["rule"] = "ii"
            entry["expected"] = _vec(n, {e1[0]: -1, e2[1]: 1})
        elif kinds == ("K-+", "K+0"):
            e1, e2 = edges[grp[0] - off], edges[grp[1] - off]
            r1 = relevant_vertices(ag, e1).members
            r2 = relevant_vertices(ag, e2).members
            ent = {v: 1 for v in r1 - r2}
            ent[e1[0]] = ent.get(e1[0], 0) - 1
            entry["rule"] = "iii"
            entry["expected"] = _vec(n, ent)
        if entry["expected"] is not None:
            entry["ok"] = entry["expected"] == vec
        report.append(entry)
    return total, report


def canceled_group(ag, kinds_and_anchors):
    """Pairing of an ad hoc group of basic arcs, e.g. [('K+', v), ('K+-', (v, w))]."""
    arcs = [basic_arc(ag, anc, kind) for kind, anc in kinds_and_anchors]
    return [sum(a.pairing[i] for a in arcs) for i in range(ag.mu)]


# --- certificates ----------------------------------------------------------------

def check_adapted(pairings, S):
    """Conditions (i)-(iii) for pairing vectors pairings[j][i] = K_j . V_i."""
    n = len(S)
    viol = []
    for j in range(n):
        for i in range(n):
            x = pairings[j][i]
            if j > i and x != S[j][i]:
                viol.append({"condition": "i", "j": j, "i": i, "got": x, "want": S[j][i]})
            elif j < i and x != 0:
                viol.append({"condition": "ii", "j": j, "i": i, "got": x, "want": 0})
            elif j == i and x != 1:
                viol.append({"condition": "iii", "j": j, "i": i, "got": x, "want": 1})
    return {"adapted": not viol, "violations": viol}


def kind_variation(ag, arc):
    """Variation image of one basic arc in V coordinates."""
    n = ag.mu
    if arc.kind in VERTEX_KINDS:
        return _vec(n, {arc.anchor: -1})
    a, b = arc.anchor
    base = arc.kind if arc.kind in EDGE_KINDS else REVERSED_KINDS[arc.kind]
    hi_t, lo_t = EDGE_KINDS[base]
    hi = a if ag.type_of(a) == hi_t else b
    lo = b if hi == a else a
    v = _vec(n, {hi: 1, lo: -1})
    return v if arc.kind in EDGE_KINDS else [-x for x in v]


def variation_of_arcset(ag, aset, P=None):
    """Telescoping sum of the component variation images.

    Raises TelescopeBroken unless the sum is -e_target.  With P given, the
    sum is also compared with homology.variation_apply on the aggregate.
    """
    n = ag.mu
    partial = [0] * n
    steps = []
    for c in aset.components:
        v = kind_variation(ag, c)
        partial = [x + y for x, y in zip(partial, v)]
        steps.append({"kind": c.kind, "variation": v, "partial_sum": list(partial)})
    want = _vec(n, {aset.target: -1})
    if partial != want:
        raise TelescopeBroken("arcset of vertex %d telescopes to %s, not -e_%d"
                              % (aset.target, partial, aset.target))
    cert = {"target": aset.target, "steps": steps, "sum": partial}
    if P is not None:
        other = homology.variation_apply(P, aset.pairing())
        cert["variation_apply"] = other
        cert["routes_agree"] = other == partial
    return partial, cert


# Expected monodromy/arc intersection table, keyed by (kind of c_i, kind of
# c_{i+1}, how the two sit on the path).  Every entry is phi(c_i).c_{i+1} = -1.
LINK_TABLE = {
    ("K+-", "K+-", "edge+2"): "e_k -> e_k+2 (+,-) pair",
    ("K-+", "K-+", "edge-2"): "e_k -> e_k-2 (-,+) pair",
    ("K+-", "K+0", "edge+2"): "e_k -> e_k+2 ending at a 0 vertex",
    ("K-0", "K-+", "edge-2"): "e_m (-,0) -> e_m-2",
    ("K-+", "K-", "e1>src"): "head: e_1 into K^-",
    ("K-", "K+-", "src>e2"): "head: K^- into e_2",
    ("K-+", "K+", "e2>src"): "head: e_2 into K^+",
    ("K+", "K+-", "src>e1"): "head: K^+ into e_1",
    # short paths where the last edge already sits next to the source arc
    ("K-0", "K-", "e1>src"): "head: e_1 (-,0) into K^-",
    ("K-", "K+0", "src>e2"): "head: K^- into e_2 (+,0)",
    ("K-0", "K+", "e2>src"): "head: e_2 (-,0) into K^+",
    ("K+", "K+0", "src>e1"): "head: K^+ into e_1 (+,0)",
}


def linear_order(ag, aset):
    """Component indices in the linear order for the arcset's case."""
    if aset.path.m == 0:
        return [0]
    m = aset.path.m
    off = len(aset.components) - m
    idx = {k: off + k - 1 for k in range(1, m + 1)}     # e_k -> component index
    head = [0] if off else []
    evens = [idx[k] for k in range(1, m + 1) if k % 2 == 0]
    odds = [idx[k] for k in range(1, m + 1) if k % 2 == 1]
    if ag.type_of(aset.path.source) == "+":
        return evens[::-1] + head + odds
    return odds[::-1] + head + evens


def _slot(aset, c):
    off = len(aset.components) - aset.path.m
    return "src" if c < off else c - off + 1


def link_pattern(ag, aset):
    """Declared links of the linear order, each looked up in LINK_TABLE."""
    out = []
    order = aset.order
    for a, b in zip(order, order[1:]):
        ka, kb = aset.components[a].kind, aset.components[b].kind
        sa, sb = _slot(aset, a), _slot(aset, b)
        if sa == "src":
            rel = "src>e%d" % sb
        elif sb == "src":
            rel = "e%d>src" % sa
        else:
            rel = "edge%+d" % (sb - sa)
        rule = LINK_TABLE.get((ka, kb, rel))
        out.append({"from": a, "to": b, "kinds": [ka, kb], "relation": rel,
                    "value": -1, "rule": rule})
    return out


def algebraic_links(ag, aset):
    """phi(c_i).c_j = -<pairing(c_j), Var(c_i)> for all ordered component pairs."""
    comps = aset.components
    var = [kind_variation(ag, c) for c in comps]
    n = len(comps)
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                M[i][j] = -sum(p * v for p, v in zip(comps[j].pairing, var[i]))
    return M


def check_linear(ag, aset):
    """Compare the declared chain with the table and with the algebraic links."""
    pattern = link_pattern(ag, aset)
    table_ok = all(p["rule"] is not None for p in pattern)
    M = algebraic_links(ag, aset)
    pos = {c: k for k, c in enumerate(aset.order)}
    bad = []
    n = len(aset.components)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            want = -1 if pos[j] == pos[i] + 1 else 0
            if M[i][j] != want:
                bad.append({"from": i, "to": j, "got": M[i][j], "want": want})
    links = sum(1 for p in pattern if p["value"] == -1)
    return {"chain_links": links, "components": n,
            "chain_ok": links == n - 1 and table_ok,
            "table_ok": table_ok, "algebraic_ok": not bad, "algebraic_mismatches": bad,
            "pattern": pattern}


def check_exceptional(ag, collection, S):
    """Exceptional-collection certificate for the orientation-reversed collection."""
    P = homology.pairing_matrix(S)
    pair = [a.pairing() for a in collection]
    n = len(S)
    viol = []
    for i in range(n):
        for j in range(i + 1, n):
            if pair[i][j] != 0:
                viol.append({"condition": "ii", "i": i, "j": j, "K_i.V_j": pair[i][j]})
    self_pairs = []
    for i in range(n):
        rev = [-x for x in pair[i]]
        var = homology.variation_apply(P, rev)
        val = sum(p * v for p, v in zip(rev, var))
        self_pairs.append(val)
        if val != -1:
            viol.append({"condition": "iii", "i": i, "Kbar.Var(Kbar)": val})
    linear = [check_linear(ag, a) for a in collection]
    lin_ok = all(x["chain_ok"] and x["algebraic_ok"] for x in linear)
    return {"exceptional": not viol and lin_ok, "violations": viol,
            "self_pairings": self_pairs, "linear_ok": lin_ok,
            "disjointness": "assumed", "note": DISJOINTNESS_NOTE}


def certify(ag, S=None):
    """Build every arcset and run the adapted, telescoping, linear and exceptional checks."""
    if S is None:
        S = homology.intersection_matrix(ag)
    P = homology.pairing_matrix(S)
    paths = good_paths(ag)
    coll = build_collection(ag, paths)
    adapted = check_adapted([a.pairing() for a in coll], S)
    tele = []
    tele_ok = True
    for a in coll:
        try:
            _, cert = variation_of_arcset(ag, a, P)
            tele_ok = tele_ok and cert["routes_agree"]
        except TelescopeBroken as exc:
            cert = {"target": a.target, "error": str(exc)}
            tele_ok = False
        tele.append(cert)
    exc = check_exceptional(ag, coll, S)
    return {"collection": coll, "paths": paths, "adapted": adapted,
            "telescoping": {"ok": tele_ok, "certificates": tele},
            "exceptional": exc}


def arcset_json(ag, aset, certificates=None):
    return {
        "target": aset.target,
        "path": [list(e) for e in aset.path.edges],
        "case": aset.case,
        "components": [c.to_json() for c in aset.components],
        "linear_order": list(aset.order),
        "certificates": certificates or {},
    }
