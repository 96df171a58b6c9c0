"""The full verification run over one divide."""

from . import arcsets, homology, surface
from . import divide_core as dc
from . import intmat as im
from .report import RunReport, digest


def tamper_matrix(S, i, j, delta=1):
    """Copy of S with entry (i, j) moved by delta and (j, i) by -delta."""
    T = [row[:] for row in S]
    T[i][j] += delta
    T[j][i] -= delta
    return T


def surface_checks(report, sd, S, chains=()):
    d, ag = sd.divide, sd.agamma
    surf = surface.build_surface(d, sd.regions)
    report.add("surface chi = r - 2d", surf.euler_characteristic == d.r - 2 * d.d,
               chi=surf.euler_characteristic, r=d.r, d=d.d)
    report.add("surface boundary count = r", surf.boundary_components == d.r,
               boundary=surf.boundary_components)
    report.add("mu = 2g + r - 1", ag.mu == 2 * surf.genus + d.r - 1, genus=surf.genus)
    walks = surface.vanishing_cycle_walks(surf, ag, sd.regions)
    W = surface.walk_matrix(surf, walks, ag.order)
    diff = [(i, j, W[i][j], S[i][j]) for i in range(ag.mu) for j in range(ag.mu) if W[i][j] != S[i][j]]
    report.add("walk intersection matrix = S", not diff, differences=diff[:10])
    verdicts = {}
    if ag.mu >= 2:
        # with mu = 1 the fiber is an annulus and its core separates it
        for v in ag.order:
            verdicts[v] = not surface.cut_along(surf, walks[v])["separating"]
        report.add("vanishing cycles non-separating", all(verdicts.values()),
                   separating=[v for v, ok in verdicts.items() if not ok])
    bad = []
    for verts in chains:
        if len(verts) < 2 or ag.mu < 2:
            continue
        cert = surface.smooth_chain(surf, walks, verts, ag.order)
        if not (cert["components"] == 1 and cert["separating"] is False and cert["class_ok"]):
            bad.append({k: v for k, v in cert.items() if k != "walk"})
    if chains:
        report.add("chain smoothing gives one non-separating curve", not bad, failures=bad[:5])
    return surf, walks, verdicts


def run_pipeline(raw, anchor=None, contact="edge", tamper=None, command="pipeline"):
    """validate, sign, AGamma, depths, matrices, paths, arcsets, certificates and surface."""
    report = RunReport(command, digest({"divide": raw, "anchor": anchor, "contact": contact,
                                        "tamper": tamper}))
    sd = dc.analyse(raw, anchor=anchor, contact=contact)
    d, ag = sd.divide, sd.agamma
    report.data.update({"anchor": "%s=%s" % sd.anchor, "mu": ag.mu, "d": d.d, "r": d.r,
                        "types": "".join(ag.types())})
    report.add("mu = 2d - r + 1 matches vertex count", dc.milnor_number(d) == ag.mu,
               formula=dc.milnor_number(d), vertices=ag.mu)
    report.add("depths assigned", all(v["depth"] is not None for v in ag.vertices),
               depths=[v["depth"] for v in ag.vertices])

    bundle = homology.build_bundle(ag)
    if tamper is not None:
        bundle.S = tamper_matrix(bundle.S, *tamper)
        report.data["tampered_entry"] = list(tamper)
    for name, ok, det in homology.identity_checks(bundle):
        report.add(name, ok, **det)
    report.data["charpoly_H"] = [str(c) for c in im.charpoly(bundle.H)]
    S = bundle.S

    cert = arcsets.certify(ag, S)
    coll = cert["collection"]
    report.add("good path for every vertex", len(cert["paths"]) == ag.mu, paths=len(cert["paths"]))
    report.add("adapted certificate", cert["adapted"]["adapted"],
               violations=cert["adapted"]["violations"][:10])
    report.add("telescoping Var(K_v) = -V_v", cert["telescoping"]["ok"],
               broken=[c for c in cert["telescoping"]["certificates"]
                       if not c.get("routes_agree")][:5])
    lin = [arcsets.check_linear(ag, a) for a in coll]
    report.add("linear orders", all(x["chain_ok"] and x["table_ok"] and x["algebraic_ok"] for x in lin),
               failures=[a.target for a, x in zip(coll, lin)
                         if not (x["chain_ok"] and x["table_ok"] and x["algebraic_ok"])])
    report.add("exceptional certificate", cert["exceptional"]["exceptional"],
               violations=cert["exceptional"]["violations"][:10])
    report.data["cases"] = {a.target: a.case for a in coll}

    chains = [cert["paths"][a.target].vertices() for a in coll]
    surface_checks(report, sd, S, chains)
    return report
