"""Command-line front end.

Exit codes: 0 all checks pass, 1 bad input, 2 a check failed, 3 internal
inconsistency.
"""

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import arcsets, fixtures, homology, pipeline, report, surface, winding
from . import divide_core as dc

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_INTERNAL = 0, 1, 2, 3

INPUT_ERRORS = (dc.DivideError, fixtures.UnknownFixture, FileNotFoundError, IsADirectoryError,
                json.JSONDecodeError, arcsets.BadAnchor, winding.NotCoprime, winding.PointAtVertex,
                winding.FieldVanishes, winding.AngleStepTooLarge, winding.NotAntiParallel,
                winding.DegenerateChord)


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        sys.exit(EXIT_INPUT)


# --- helpers -------------------------------------------------------------------

def parse_anchor(text):
    if text is None:
        return None
    rid, sep, sign = text.rpartition("=")
    if not sep or sign not in ("+", "-") or not rid:
        raise InputError("anchor must look like REGION=+ or REGION=-")
    return (rid, sign)


def read_divide(args):
    if getattr(args, "fixture", None):
        return fixtures.load(args.fixture)
    if not getattr(args, "input", None):
        raise InputError("give --in FILE or --fixture NAME")
    with open(args.input) as fh:
        return json.load(fh)


def analysed(args):
    raw = read_divide(args)
    try:
        return raw, dc.analyse(raw, anchor=parse_anchor(args.anchor), contact=args.contact)
    except ValueError as exc:
        if isinstance(exc, dc.DivideError):
            raise
        raise InputError(str(exc)) from None


def emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def finish(args, rep, extra_text=""):
    if args.format == "text":
        emit(args, rep.render("text") + extra_text)
    else:
        emit(args, rep.render("json"))
    return EXIT_OK if rep.ok else EXIT_CHECK


def _new_report(args, command, payload):
    return report.RunReport(command, report.digest(payload))


# --- divide commands ---------------------------------------------------------------

def cmd_agamma(args):
    raw, sd = analysed(args)
    ag = sd.agamma
    if args.plot:
        report.plot_agamma(ag, args.plot, layout=report.layout_positions(raw, sd.regions, ag))
    if args.format == "dot":
        emit(args, ag.to_dot())
        return EXIT_OK
    rep = _new_report(args, "agamma", {"divide": raw, "anchor": args.anchor})
    rep.data.update({"anchor": "%s=%s" % sd.anchor, "mu": ag.mu, "agamma": ag.to_json(),
                     "regions": {R.id: {"sign": R.sign, "bounded": R.bounded} for R in sd.regions}})
    rep.add("mu = 2d - r + 1 matches vertex count", dc.milnor_number(sd.divide) == ag.mu,
            formula=dc.milnor_number(sd.divide))
    return finish(args, rep)


def cmd_depth(args):
    raw, sd = analysed(args)
    ag = sd.agamma
    rep = _new_report(args, "depth", {"divide": raw, "anchor": args.anchor, "contact": args.contact})
    rep.data["depths"] = {v["id"]: {"type": v["type"], "origin": v["origin"], "depth": v["depth"]}
                          for v in ag.vertices}
    rep.data["outer"] = sd.outer
    rep.add("every vertex has a depth", all(v["depth"] is not None for v in ag.vertices))
    return finish(args, rep)


def cmd_matrices(args):
    raw, sd = analysed(args)
    bundle = homology.build_bundle(sd.agamma)
    if args.tamper_s:
        bundle.S = pipeline.tamper_matrix(bundle.S, *args.tamper_s)
    rep = _new_report(args, "matrices", {"divide": raw, "anchor": args.anchor, "tamper": args.tamper_s})
    rep.data.update(bundle.to_json())
    for name, ok, det in homology.identity_checks(bundle):
        rep.add(name, ok, **det)
    text = ""
    if args.format == "text":
        for key in ("S", "L", "H", "P"):
            text += "%s =\n%s" % (key, report.matrix_text(getattr(bundle, key)))
    return finish(args, rep, text)


def cmd_paths(args):
    raw, sd = analysed(args)
    ag = sd.agamma
    paths = arcsets.good_paths(ag)
    rep = _new_report(args, "paths", {"divide": raw, "anchor": args.anchor})
    rep.data["paths"] = {v: {"source": p.source, "edges": p.edges, "vertices": p.vertices(),
                             "case": arcsets.classify_path(ag, p)}
                         for v, p in sorted(paths.items())}
    rep.add("good path for every vertex", len(paths) == ag.mu)
    return finish(args, rep)


def cmd_arcsets(args):
    raw, sd = analysed(args)
    ag = sd.agamma
    coll = arcsets.build_collection(ag)
    rep = _new_report(args, "arcsets", {"divide": raw, "anchor": args.anchor})
    out = []
    for a in coll:
        total, groups = arcsets.arcset_pairing(ag, a)
        lin = arcsets.check_linear(ag, a)
        out.append(arcsets.arcset_json(ag, a, {"pairing": total, "groups": groups, "linear": lin}))
    rep.data["arcsets"] = out
    rep.add("group pairings", all(g["ok"] is not False for x in out for g in x["certificates"]["groups"]))
    rep.add("linear orders", all(x["certificates"]["linear"]["chain_ok"] for x in out))
    return finish(args, rep)


def cmd_verify(args):
    raw, sd = analysed(args)
    ag = sd.agamma
    S = homology.intersection_matrix(ag)
    if args.tamper_s:
        S = pipeline.tamper_matrix(S, *args.tamper_s)
    rep = _new_report(args, "verify", {"divide": raw, "anchor": args.anchor, "tamper": args.tamper_s})
    cert = arcsets.certify(ag, S)
    rep.add("adapted certificate", cert["adapted"]["adapted"], violations=cert["adapted"]["violations"][:10])
    rep.add("telescoping Var(K_v) = -V_v", cert["telescoping"]["ok"])
    rep.add("exceptional certificate", cert["exceptional"]["exceptional"],
            violations=cert["exceptional"]["violations"][:10])
    rep.data["pairings"] = [a.pairing() for a in cert["collection"]]
    return finish(args, rep)


def cmd_surface(args):
    raw, sd = analysed(args)
    surf = surface.build_surface(sd.divide, sd.regions)
    if args.format == "dot":
        emit(args, surf.to_dot())
        return EXIT_OK
    rep = _new_report(args, "surface", {"divide": raw, "anchor": args.anchor})
    S = homology.intersection_matrix(sd.agamma)
    _, walks, verdicts = pipeline.surface_checks(rep, sd, S)
    rep.data.update(surf.summary())
    rep.data["walk_matrix"] = surface.walk_matrix(surf, walks, sd.agamma.order)
    rep.data["non_separating"] = verdicts
    text = ""
    if args.format == "text" and args.report:
        text = "intersection matrix =\n" + report.matrix_text(rep.data["walk_matrix"])
    return finish(args, rep, text)


# --- winding, K_pq, coherence --------------------------------------------------------

def cmd_winding(args):
    with open(args.curve) as fh:
        doc = json.load(fh)
    curve = winding.curve_from_json(doc)
    winding.check_closed(curve, tol=args.tol)
    field = winding.parse_field(args.field)
    res = winding.winding_report(curve, field)
    rep = _new_report(args, "winding", {"curve": doc, "field": args.field})
    rep.data.update(res)
    if args.expect == "integer":
        rep.add("within tol of an integer", res["integer_error"] < args.tol, tol=args.tol)
    elif args.expect == "half":
        rep.add("within tol of a half-integer", res["half_integer_error"] < args.tol, tol=args.tol)
    return finish(args, rep)


def _parse_edge(text):
    # a1-b3
    try:
        a, b = text.split("-")
        return (("a", int(a.lstrip("a"))), ("b", int(b.lstrip("b"))))
    except ValueError:
        raise InputError("edge must look like a1-b2") from None


def cmd_kpq(args):
    if args.p < 1 or args.q < 1:
        raise InputError("p and q must be positive")
    try:
        x = Fraction(args.x)
    except ValueError:
        raise InputError("bad point %r, expected a fraction like 1/4" % args.x) from None
    model = winding.build_kpq(args.p, args.q)
    rep = _new_report(args, "kpq", {"p": args.p, "q": args.q, "edge": args.edge, "x": args.x})
    rep.data.update(model.summary())
    rep.add("single boundary circle", model.boundary_count == 1)
    rep.add("boundary length pq", model.boundary_length == args.p * args.q)
    rep.add("genus (p-1)(q-1)/2", 2 * model.genus == (args.p - 1) * (args.q - 1))
    eq = winding.equivariance_check(model)
    rep.add("gluing equivariant under the unit shift", eq["ok"], checked=eq["checked"],
            violations=eq["violations"])
    if args.edge:
        edge = _parse_edge(args.edge)
        if edge not in model.position:
            raise InputError("K_%d,%d has no edge %s" % (args.p, args.q, args.edge))
        var = winding.kpq_variation_arc(model, edge, x)
        rep.data["variation"] = var
        rep.add("variation walk closes", var["closes"] and var["is_cycle"])
        rep.add("variation walk simple", var["simple"])
        rep.add("variation class nonzero and primitive", var["nonzero"] and var["primitive"])
    if args.plot:
        report.plot_kpq(model, args.plot)
    return finish(args, rep)


def cmd_coherence(args):
    rep = _new_report(args, "coherence", {"chi": args.chi, "assign": args.assign,
                                          "fixture": args.fixture})
    if args.fixture:
        if args.fixture != "XCUSP":
            raise InputError("coherence data is only bundled for XCUSP")
        data = fixtures.load("XCUSP")
        b = data["boundaries"]
        for side, g in (("1", data["g1"]), ("2", data["g2"])):
            chi = winding.subsurface_chi(g, b)
            res = winding.coherence_check(chi, data["known_windings"] + ["x"])
            rep.data["phi_Delta" + side] = res["solved"]
        rep.add("phi(Delta_1), phi(Delta_2) match the bundled values",
                [rep.data["phi_Delta1"], rep.data["phi_Delta2"]] == data["windings"])
        kv = homology.seifert_separating_value(data["delta"], [[0, data["nu12"]], [data["nu12"], 0]])
        rep.data["seifert_separating_value"] = kv["value"]
        rep.add("separating value <= -2", kv["bound_holds"], value=kv["value"])
        return finish(args, rep)
    if args.chi is None:
        if args.genus is None or args.boundaries is None:
            raise InputError("give --chi, or --genus and --boundaries")
        args.chi = winding.subsurface_chi(args.genus, args.boundaries)
    if not args.assign:
        raise InputError("give --assign, e.g. 0,0,0,x")
    vals = []
    for tok in args.assign.split(","):
        tok = tok.strip()
        if tok == "x":
            vals.append("x")
        else:
            try:
                vals.append(int(tok))
            except ValueError:
                raise InputError("bad winding value %r" % tok) from None
    try:
        res = winding.coherence_check(args.chi, vals)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    rep.data.update(res)
    rep.add("sum of boundary windings = chi", res["ok"])
    return finish(args, rep)


def cmd_fixtures(args):
    if args.action == "list":
        emit(args, "\n".join(fixtures.NAMES) + "\n")
        return EXIT_OK
    if not args.name:
        raise InputError("emit needs a fixture name")
    emit(args, fixtures.dump_text(args.name))
    return EXIT_OK


def cmd_pipeline(args):
    raw = read_divide(args)
    t0 = time.perf_counter()
    try:
        rep = pipeline.run_pipeline(raw, anchor=parse_anchor(args.anchor), contact=args.contact,
                                    tamper=tuple(args.tamper_s) if args.tamper_s else None)
    except ValueError as exc:
        if isinstance(exc, INPUT_ERRORS):
            raise
        if "anchor" in str(exc):
            raise InputError(str(exc)) from None
        raise
    if args.timing:
        rep.timing = {"seconds": round(time.perf_counter() - t0, 3)}
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        sd = dc.analyse(raw, anchor=parse_anchor(args.anchor), contact=args.contact)
        report.plot_agamma(sd.agamma, os.path.join(args.figures, "agamma.png"),
                           layout=report.layout_positions(raw, sd.regions, sd.agamma))
        if raw.get("layout"):
            report.plot_divide(raw, os.path.join(args.figures, "divide.png"))
    return finish(args, rep)


# --- parser --------------------------------------------------------------------------

def _pair(text):
    try:
        i, j = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected I,J") from None
    return [i, j]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the output here instead of stdout")
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--tol", type=float, default=1e-6, help="winding tolerance")

    div = argparse.ArgumentParser(add_help=False)
    div.add_argument("--in", dest="input", help="divide JSON file")
    div.add_argument("--fixture", help="use a bundled fixture instead of --in")
    div.add_argument("--anchor", help="sign anchor REGION=+ or REGION=-")
    div.add_argument("--contact", choices=("edge", "point"), default="edge",
                     help="how regions touch the outside for depth 0")

    tamper = argparse.ArgumentParser(add_help=False)
    tamper.add_argument("--tamper-s", type=_pair, metavar="I,J",
                        help="fault injection: shift S[I][J] by +1 and S[J][I] by -1")

    p = _Parser(prog="dividekit", description="Divide invariants, arcsets, surface and winding tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("agamma", parents=[common, div], help="regions, signs and the A-Gamma diagram")
    s.add_argument("--plot", help="write a PNG drawing of the diagram")
    s.set_defaults(func=cmd_agamma)
    s = sub.add_parser("depth", parents=[common, div], help="depth of every vertex")
    s.set_defaults(func=cmd_depth)
    s = sub.add_parser("matrices", parents=[common, div, tamper], help="S, L, H, P and their identities")
    s.set_defaults(func=cmd_matrices)
    s = sub.add_parser("paths", parents=[common, div], help="good paths")
    s.set_defaults(func=cmd_paths)
    s = sub.add_parser("arcsets", parents=[common, div], help="vanishing arcsets with linear orders")
    s.set_defaults(func=cmd_arcsets)
    s = sub.add_parser("verify", parents=[common, div, tamper], help="adapted and exceptional certificates")
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("surface", parents=[common, div], help="ribbon-graph surface and walks")
    s.add_argument("--report", action="store_true", help="include the walk intersection matrix")
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("winding", parents=[common], help="winding number of a curve")
    s.add_argument("--curve", required=True)
    s.add_argument("--field", default="constant:1,0")
    s.add_argument("--expect", choices=("integer", "half", "none"), default="none")
    s.set_defaults(func=cmd_winding)
    s = sub.add_parser("kpq", parents=[common], help="K_{p,q} boundary model")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--edge", help="edge for the variation walk, e.g. a1-b2")
    s.add_argument("--x", default="1/4", help="point on the edge, in (0, 1/2)")
    s.add_argument("--report", action="store_true")
    s.add_argument("--plot", help="write a PNG of the graph and its boundary gluing")
    s.set_defaults(func=cmd_kpq)
    s = sub.add_parser("coherence", parents=[common], help="boundary winding bookkeeping")
    s.add_argument("--chi", type=int)
    s.add_argument("--genus", type=int)
    s.add_argument("--boundaries", type=int)
    s.add_argument("--assign", help="comma separated windings, one may be x")
    s.add_argument("--fixture", help="XCUSP: reproduce the bundled example")
    s.set_defaults(func=cmd_coherence)
    s = sub.add_parser("fixtures", parents=[common], help="list or emit bundled fixtures")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_fixtures)
    s = sub.add_parser("pipeline", parents=[common, div, tamper], help="run every check on a divide")
    s.add_argument("--figures", help="directory for divide and diagram PNGs")
    s.add_argument("--timing", action="store_true", help="add wall time (breaks byte-identity)")
    s.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError,) + INPUT_ERRORS as exc:
        msg = str(exc)
        if not isinstance(exc, InputError) and not msg.startswith(type(exc).__name__):
            msg = "%s: %s" % (type(exc).__name__, msg)
        sys.stderr.write("input error: %s\n" % msg)
        return EXIT_INPUT
    except Exception as exc:
        sys.stderr.write("internal inconsistency: %s: %s\n" % (type(exc).__name__, exc))
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
