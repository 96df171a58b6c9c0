"""Run reports and figures.

A RunReport is a list of named checks.  It renders to JSON or text, and the
rendering depends only on the inputs, so repeated runs give identical bytes.
Figures are written with the Agg backend.
"""

import hashlib
import json
from dataclasses import dataclass, field


def digest(obj):
    """Short sha256 of the canonical JSON form of obj."""
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return str(x)
    return repr(x)


@dataclass
class Check:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "verdict": "pass" if self.ok else "fail",
                "details": jsonable(self.details)}


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timing: dict = None

    def add(self, name, ok, **details):
        self.checks.append(Check(name, bool(ok), details))
        return ok

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failures(self):
        return [c.name for c in self.checks if not c.ok]

    def to_json(self):
        out = {"command": self.command, "inputs_digest": self.inputs_digest,
               "verdict": "pass" if self.ok else "fail",
               "checks": [c.to_json() for c in self.checks],
               "data": jsonable(self.data)}
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def render(self, fmt="json"):
        if fmt == "json":
            return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"
        lines = ["%s  [%s]" % (self.command, self.inputs_digest)]
        for key in sorted(self.data):
            lines.append("%s: %s" % (key, _short(self.data[key])))
        for c in self.checks:
            lines.append("%-4s %s" % ("ok" if c.ok else "FAIL", c.name))
        lines.append("verdict: %s" % ("pass" if self.ok else "fail"))
        if self.timing is not None:
            lines.append("timing: %s" % json.dumps(self.timing, sort_keys=True))
        return "\n".join(lines) + "\n"


def _short(v):
    s = json.dumps(jsonable(v), sort_keys=True)
    return s if len(s) < 200 else s[:197] + "..."


def matrix_text(M, labels=None):
    if not M:
        return "(empty)\n"
    w = max(len(str(x)) for row in M for x in row)
    out = []
    for i, row in enumerate(M):
        head = "%s " % labels[i] if labels else ""
        out.append(head + " ".join(str(x).rjust(w) for x in row))
    return "\n".join(out) + "\n"


# --- figures ---------------------------------------------------------------------

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


_STYLE = {"-": ("s", "#3b6fb6"), "0": ("o", "#444444"), "+": ("D", "#c0392b")}
_PNG_META = {"Software": None}


def agamma_positions(ag):
    """Vertices in rows by depth (outer row on top), spread by id within a row."""
    rows = {}
    for v in ag.vertices:
        rows.setdefault(v["depth"] if v["depth"] is not None else 0, []).append(v["id"])
    pos = {}
    for dep, ids in rows.items():
        for k, v in enumerate(sorted(ids)):
            pos[v] = (k - (len(ids) - 1) / 2.0, -float(dep))
    return pos


def plot_agamma(ag, path, title=None, layout=None):
    """Draw the diagram.  With a divide layout, vertices sit at their crossing
    or region position; otherwise in depth rows."""
    plt = _pyplot()
    pos = layout or agamma_positions(ag)
    fig, ax = plt.subplots(figsize=(6, 5))
    for a, b in sorted(ag.edges):
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], color="#999999", lw=1, zorder=1)
    for v in ag.vertices:
        m, col = _STYLE[v["type"]]
        x, y = pos[v["id"]]
        ax.scatter([x], [y], marker=m, s=140, color=col, zorder=2)
        ax.annotate("%d" % v["id"], (x, y), textcoords="offset points", xytext=(7, 7), fontsize=8)
    for t, (m, col) in _STYLE.items():
        ax.scatter([], [], marker=m, color=col, label="type %s" % t)
    ax.legend(loc="best", fontsize=8)
    ax.set_title(title or "A-Gamma diagram (mu = %d)" % ag.mu)
    ax.set_aspect("equal", adjustable="datalim")
    ax.axis("off")
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return path


def layout_positions(raw, regions, ag):
    """Crossing coordinates from the layout; regions at the mean of their crossings."""
    lay = (raw or {}).get("layout", {}).get("crossings")
    if not lay:
        return None
    by_id = {R.id: R for R in regions}
    pos = {}
    for v in ag.vertices:
        if v["type"] == "0":
            pos[v["id"]] = tuple(lay[v["origin"]])
        else:
            pts = [lay[c] for c in sorted(by_id[v["origin"]].crossings)]
            pos[v["id"]] = (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))
    return pos


def plot_divide(raw, path, title=None):
    """Branches of a divide with a layout, inside the unit disk."""
    plt = _pyplot()
    lay = raw.get("layout")
    if not lay:
        raise ValueError("divide has no layout to draw")
    fig, ax = plt.subplots(figsize=(5, 5))
    import math
    ts = [2 * math.pi * k / 200 for k in range(201)]
    ax.plot([math.cos(t) for t in ts], [math.sin(t) for t in ts], color="#bbbbbb", lw=1)
    for b in lay["branches"]:
        ax.plot([p[0] for p in b], [p[1] for p in b], lw=1.5)
    for c, (x, y) in sorted(lay["crossings"].items()):
        ax.scatter([x], [y], color="black", s=12, zorder=3)
        ax.annotate(c, (x, y), textcoords="offset points", xytext=(4, 4), fontsize=7)
    ax.set_aspect("equal")
    ax.axis("off")
    ax.set_title(title or raw.get("name", "divide"))
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return path


def plot_kpq(model, path):
    """Left: the two-lines drawing of K_{p,q}.  Right: the boundary circle
    R / pq Z with each edge side as an arc and the gluing chords."""
    import math
    plt = _pyplot()
    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(10, 5))
    p, q = model.p, model.q
    for i in range(1, p + 1):
        for j in range(1, q + 1):
            ax0.plot([i, j], [0, 1], color="#999999", lw=0.8)
    ax0.scatter(range(1, p + 1), [0] * p, color="#3b6fb6", s=60, zorder=2, label="a_i")
    ax0.scatter(range(1, q + 1), [1] * q, color="#c0392b", s=60, zorder=2, label="b_j")
    ax0.legend(fontsize=8)
    ax0.set_title("K_{%d,%d}" % (p, q))
    ax0.axis("off")

    L = float(model.boundary_length)
    ts = [2 * math.pi * k / 400 for k in range(401)]
    ax1.plot([math.cos(t) for t in ts], [math.sin(t) for t in ts], color="#444444", lw=1)
    face = model.faces[0]
    cmap = plt.get_cmap("tab20")
    edges = sorted({tuple(sorted(d)) for d in face})
    colour = {e: cmap(k % 20) for k, e in enumerate(edges)}

    def at(theta):
        a = 2 * math.pi * theta / L
        return math.cos(a), math.sin(a)

    for k, dart in enumerate(face):
        mid = (k + 0.5) / 2
        partner = model.position[(dart[1], dart[0])]
        if partner > k:
            x0, y0 = at(mid)
            x1, y1 = at((partner + 0.5) / 2)
            ax1.plot([x0, x1], [y0, y1], color=colour[tuple(sorted(dart))], lw=1)
        x, y = at(k / 2)
        ax1.plot([0.97 * x, 1.03 * x], [0.97 * y, 1.03 * y], color="black", lw=0.8)
    for n in range(int(L)):
        x, y = at(n)
        ax1.annotate(str(n), (1.1 * x, 1.1 * y), ha="center", va="center", fontsize=7)
    ax1.set_aspect("equal")
    ax1.axis("off")
    ax1.set_title("boundary R/%dZ, genus %d" % (int(L), model.genus))
    fig.savefig(path, dpi=110, metadata=_PNG_META)
    plt.close(fig)
    return path
