import math
import random
from fractions import Fraction

import numpy as np
import pytest

from dividekit import winding as wd

from conftest import analytic_cusp

EAST = wd.constant_field(1, 0)


def unwrap_turns(curve, field):
    """Independent route for smooth closed curves: unwrap the tangent angle
    and the field angle separately with numpy and subtract."""
    pts = np.concatenate([s.samples for s in curve.segments])
    tan = np.concatenate([s.tangents for s in curve.segments])
    xi = field(pts)
    a = np.unwrap(np.arctan2(tan[:, 1], tan[:, 0]))
    b = np.unwrap(np.arctan2(xi[:, 1], xi[:, 0]))
    return ((a[-1] - a[0]) - (b[-1] - b[0])) / (2 * math.pi)


def random_var_curve(rng):
    # an arc above the chord and its image below, both tangent to the chord at the ends
    c1, c2, f = rng.uniform(0.1, 0.6), rng.uniform(-0.08, 0.08), rng.uniform(1, 4)
    d1, d2, h = rng.uniform(0.1, 0.6), rng.uniform(-0.08, 0.08), rng.uniform(1, 4)
    start = (rng.uniform(-2, 2), rng.uniform(-2, 2))
    ang = rng.uniform(0, 2 * math.pi)
    ln = rng.uniform(0.5, 2)
    end = (start[0] + ln * math.cos(ang), start[1] + ln * math.sin(ang))
    return wd.var_type_curve(lambda x: c1 + c2 * math.sin(f * x),
                             lambda x: -(d1 + d2 * math.cos(h * x)), start, end, n=200)


class TestFields:
    def test_parse(self):
        assert wd.parse_field("constant:1,0")([[3.0, 4.0]]).tolist() == [[1.0, 0.0]]
        assert wd.parse_field("rotational")([[1.0, 2.0]]).tolist() == [[-2.0, 1.0]]
        # f = x y gives (f_y, -f_x) = (x, -y)
        assert wd.parse_field("hamiltonian:x*y")([[2.0, 3.0]]).tolist() == [[2.0, -3.0]]
        with pytest.raises(ValueError):
            wd.parse_field("gradient:x")

    def test_vanishing_field(self):
        with pytest.raises(wd.FieldVanishes):
            wd.winding_number(wd.circle(), wd.constant_field(0, 0))


class TestWindingNumber:
    def test_circle(self):
        assert abs(wd.winding_number(wd.circle(), EAST) - 1) < 1e-9

    def test_clockwise(self):
        assert abs(wd.winding_number(wd.circle(ccw=False), EAST) + 1) < 1e-9

    def test_square_corners(self):
        rep = wd.winding_report(wd.polygon([(0, 0), (1, 0), (1, 1), (0, 1)]), EAST)
        assert abs(rep["winding"] - 1) < 1e-12
        assert all(abs(a - math.pi / 2) < 1e-12 for a in rep["corner_angles"])
        assert rep["segment_angles"] == [0.0, 0.0, 0.0, 0.0]

    @pytest.mark.parametrize("field,centre,want", [
        ("rotational", (0, 0), 0), ("rotational", (3, 0), 1),
        ("hamiltonian:x**2+y**2", (0, 0), 0), ("hamiltonian:x**2-y**2", (0, 0), 2),
        ("constant:0.3,-2", (1, 1), 1)])
    def test_index_formula(self, field, centre, want):
        # turning number 1 minus the index of the enclosed zeros
        c = wd.circle(0.7, 600, True, centre)
        got = wd.winding_number(c, wd.parse_field(field))
        assert abs(got - want) < 1e-6
        assert abs(got - unwrap_turns(c, wd.parse_field(field))) < 1e-9

    def test_figure_eight(self):
        assert abs(wd.winding_number(wd.figure_eight(), EAST)) < 1e-9

    def test_subdivision_invariance(self):
        c = wd.circle(1.3, 600, True, (0.5, 0.2))
        s = c.segments[0]
        parts = [wd.Segment(s.samples[a:b + 1], s.tangents[a:b + 1])
                 for a, b in ((0, 150), (150, 420), (420, 600))]
        split = wd.PiecewisePlanarCurve(parts, True)
        for f in (EAST, wd.rotational_field()):
            w0, w1 = wd.winding_number(c, f), wd.winding_number(split, f)
            assert abs(w0 - w1) <= 1e-9 * max(1.0, abs(w0))

    def test_refinement_invariance(self):
        f = wd.parse_field("hamiltonian:x**2-y**2")
        ws = [wd.winding_number(wd.circle(0.7, n), f) for n in (200, 400, 1600)]
        assert max(ws) - min(ws) <= 1e-9 * max(1.0, abs(ws[0]))

    def test_reversal_negates(self):
        for c in (wd.polygon([(0, 0), (2, 0), (1, 1)]), wd.circle(), random_var_curve(random.Random(4))):
            f = wd.constant_field(0.2, 1)
            assert wd.winding_number(c.reversed(), f) == pytest.approx(-wd.winding_number(c, f), abs=1e-12)

    def test_coarse_sampling_refused(self):
        with pytest.raises(wd.AngleStepTooLarge):
            wd.winding_number(wd.circle(n=4), EAST)

    def test_good_arc_half_integer(self):
        # upper half circle from (1, 0) to (-1, 0): tangent to xi at the start,
        # against it at the end
        seg = wd.segment_from_function(lambda t: (math.cos(t), math.sin(t)),
                                       lambda t: (-math.sin(t), math.cos(t)), 0.0, math.pi, 400)
        arc = wd.PiecewisePlanarCurve([seg], closed=False)
        rep = wd.winding_report(arc, wd.constant_field(0, 1))
        assert rep["half_integer_error"] < 1e-6 and abs(rep["winding"] - 0.5) < 1e-6

    def test_json_round_trip(self):
        c = wd.polygon([(0, 0), (1, 0), (0, 1)], n=3)
        back = wd.curve_from_json(c.to_json())
        assert wd.winding_number(back, EAST) == pytest.approx(wd.winding_number(c, EAST))
        wd.check_closed(back)

    def test_open_chain_detected(self):
        segs = wd.polygon([(0, 0), (1, 0), (0, 1)]).segments
        broken = wd.PiecewisePlanarCurve([segs[0], segs[2]], True)
        with pytest.raises(ValueError):
            wd.check_closed(broken)


class TestCornerRule:
    def test_positive_basis(self):
        assert wd.corner_sign((1, 0), (-1, 0), (0, 1), (1, 0)) == math.pi

    def test_other_side(self):
        assert wd.corner_sign((1, 0), (-1, 0), (0, -1), (1, 0)) == -math.pi

    def test_not_anti_parallel(self):
        with pytest.raises(wd.NotAntiParallel):
            wd.corner_sign((1, 0), (0, 1), (0, 1), (1, 0))

    def test_degenerate_chord(self):
        with pytest.raises(wd.DegenerateChord):
            wd.corner_sign((1, 0), (-1, 0), (1, 0), (2, 0))

    def test_matches_limit_sign(self):
        rng = random.Random(11)
        for _ in range(300):
            seg_in, seg_out, xi, sign = analytic_cusp(rng)
            got = wd.corner_angle(seg_in, seg_out, wd.constant_field(*xi))
            assert got == sign * math.pi

    def test_refinement_rescues_a_flat_start(self):
        # branches that agree to second order near the corner only separate
        # at cubic order; the sign still comes out of the limit
        u = np.array([1.0, 0.0])
        ss = np.linspace(0, 0.5, 401)
        a = np.stack([-ss, 0.2 * ss ** 3], 1)
        b = np.stack([-ss, -0.4 * ss ** 3], 1)
        ta = np.stack([-np.ones_like(ss), 0.6 * ss ** 2], 1)
        tb = np.stack([-np.ones_like(ss), -1.2 * ss ** 2], 1)
        seg_in = wd.Segment(a[::-1].copy(), -ta[::-1].copy())
        seg_out = wd.Segment(b, tb)
        assert np.allclose(seg_in.tangents[-1], u)
        # chord points along -m = (0, -1); det((0, -1), (1, 0)) = 1
        assert wd.corner_angle(seg_in, seg_out, EAST) == math.pi


class TestVarTypeCurves:
    def test_single_curve_cancels(self):
        rep = wd.winding_report(wd.var_type_curve(lambda x: 0.3, lambda x: -0.2), EAST)
        assert sorted(rep["corner_angles"]) == [-math.pi, math.pi]
        assert abs(rep["winding"]) < 1e-9

    def test_random_curves(self):
        rng = random.Random(2)
        for _ in range(40):
            c = random_var_curve(rng)
            f = wd.constant_field(rng.uniform(-1, 1), rng.uniform(-1, 1))
            res = wd.surgery_winding_sum([c], f)
            assert res["zero"] and abs(res["total"]) < 1e-6

    def test_smoothed_figure_eight(self):
        res = wd.surgery_winding_sum(wd.smooth_figure_eight(), EAST)
        assert [round(x) for x in res["per_curve"]] == [-1, 1]
        assert abs(res["total"] - wd.winding_number(wd.figure_eight(), EAST)) < 1e-6

    def test_empty(self):
        assert wd.surgery_winding_sum([], EAST) == {"per_curve": [], "total": 0.0, "zero": True}


class TestCoherence:
    def test_xcusp_values(self):
        a = wd.coherence_check(wd.subsurface_chi(3, 4), [0, 0, 0, "x"])
        b = wd.coherence_check(wd.subsurface_chi(0, 4), [None, 0, 0, 0])
        assert (a["solved"], b["solved"]) == (-8, -2)

    def test_bounding_pair(self):
        assert wd.coherence_check(wd.subsurface_chi(1, 2), [0, "x"])["solved"] == -2

    def test_verdicts(self):
        assert wd.coherence_check(-2, [-1, -1])["ok"]
        assert not wd.coherence_check(-2, [-1, 0])["ok"]
        with pytest.raises(ValueError):
            wd.coherence_check(-2, ["x", None])


class TestKpq:
    def test_trefoil_model(self):
        m = wd.build_kpq(2, 3)
        assert (m.genus, m.betti, m.boundary_count, m.boundary_length) == (1, 2, 1, 6)

    def test_three_five(self):
        m = wd.build_kpq(3, 5)
        assert (m.genus, m.betti, m.boundary_length) == (4, 8, 15)
        assert sum(len(f) for f in m.faces) == 2 * 15

    def test_not_coprime(self):
        with pytest.raises(wd.NotCoprime):
            wd.build_kpq(2, 4)

    @pytest.mark.parametrize("p,q", [(2, 4), (3, 3), (2, 6), (4, 6)])
    def test_relaxed_boundaries(self, p, q):
        # a grid of lines: the boundary splits into gcd(p, q) circles
        assert wd.build_kpq_relaxed(p, q).boundary_count == math.gcd(p, q)

    @pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (3, 5), (4, 5), (3, 7)])
    def test_formulas(self, p, q):
        m = wd.build_kpq(p, q)
        assert m.boundary_count == 1
        assert m.genus == (p - 1) * (q - 1) // 2 and m.betti == (p - 1) * (q - 1)
        assert m.boundary_length == p * q

    def test_equivariance(self):
        res = wd.equivariance_check(wd.build_kpq(3, 5))
        assert res["ok"] and res["checked"] == 15 * 60

    def test_involution_is_an_involution(self):
        m = wd.build_kpq(2, 5)
        for k in range(1, 40, 2):
            th = Fraction(k, 4)
            assert wd.involution(m, wd.involution(m, th)) % m.boundary_length == th

    def test_relaxed_model_fails_equivariance(self):
        assert not wd.equivariance_check(wd.build_kpq_relaxed(2, 4))["ok"]

    def test_monodromy_shift(self):
        m = wd.build_kpq(2, 3)
        assert wd.kpq_monodromy_shift(m, Fraction(11, 2), 0) == (Fraction(1, 2), 0)
        assert wd.kpq_monodromy_shift(m, 1, 1) == (1, 1)
        with pytest.raises(ValueError):
            wd.kpq_monodromy_shift(m, 0, 2)

    def test_variation_walk(self):
        m = wd.build_kpq(2, 3)
        for i in (1, 2):
            for j in (1, 2, 3):
                res = wd.kpq_variation_arc(m, (("a", i), ("b", j)), Fraction(1, 4))
                assert res["closes"] and res["is_cycle"] and res["simple"]
                assert res["nonzero"] and res["primitive"]

    def test_point_at_vertex(self):
        m = wd.build_kpq(2, 3)
        with pytest.raises(wd.PointAtVertex):
            wd.kpq_variation_arc(m, (("a", 1), ("b", 1)), 0)
        with pytest.raises(wd.PointAtVertex):
            wd.kpq_variation_arc(m, (("a", 1), ("b", 1)), Fraction(1, 2))
