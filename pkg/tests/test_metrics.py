"""Place-by-place projective metrics, basin probes, local dichotomy checks."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmlwb.curves import Curve
from dmlwb.hirzebruch import FnModel, FnPoint, embed_A2, fixed_point_Q
from dmlwb.maps import PolyMap, point
from dmlwb.metrics import (
    DEFAULT_EPS,
    basin_probe,
    local_dml_probe,
    metric_dv,
)
from dmlwb.parsing import parse_poly
from dmlwb.places import Place, ProjPoint

INF = Place.archimedean()

small_fracs = st.fractions(min_value=-4, max_value=4, max_denominator=8)


def tri_model(n=3) -> FnModel:
    f = PolyMap(parse_poly("2*x"), parse_poly("x^3*y + x^5"))
    return FnModel.from_map(f, n)


class TestMetric:
    def test_p1_example(self):
        # d_2([1:1],[1:3]) = |1*3 - 1*1|_2 / (1 * 1) = 1/2
        assert metric_dv([1, 1], [1, 3], Place.finite(2)) == Fraction(1, 2)

    def test_archimedean_is_float(self):
        d = metric_dv([1, 0], [1, 1], INF)
        assert isinstance(d, float) and d == 1.0

    def test_same_class_is_zero(self):
        assert metric_dv([2, 4], [1, 2], Place.finite(5)) == 0
        assert metric_dv(ProjPoint([1, 2, 3]), [2, 4, 6], INF) == 0.0

    def test_bounded_by_one(self):
        assert metric_dv([1, 1000000], [1000000, 1], INF) <= 1.0

    @settings(max_examples=40)
    @given(small_fracs, small_fracs, small_fracs, small_fracs)
    def test_symmetric(self, a, b, c, d):
        if (a, b) == (0, 0) or (c, d) == (0, 0):
            return
        v = Place.finite(3)
        assert metric_dv([a, b], [c, d], v) == metric_dv([c, d], [a, b], v)

    @settings(max_examples=40)
    @given(small_fracs, small_fracs, small_fracs, small_fracs, small_fracs, small_fracs)
    def test_ultrametric_at_finite_places(self, a, b, c, d, e, f):
        pts = [(a, b), (c, d), (e, f)]
        if any(p == (0, 0) for p in pts):
            return
        v = Place.finite(2)
        d01 = metric_dv(pts[0], pts[1], v)
        d12 = metric_dv(pts[1], pts[2], v)
        d02 = metric_dv(pts[0], pts[2], v)
        assert d02 <= max(d01, d12)

    @settings(max_examples=40)
    @given(
        small_fracs.filter(lambda q: q != 0),
        small_fracs,
        small_fracs,
        small_fracs,
        small_fracs,
    )
    def test_scaling_invariance(self, t, a, b, c, d):
        if (a, b) == (0, 0) or (c, d) == (0, 0):
            return
        v = Place.finite(7)
        assert metric_dv([t * a, t * b], [c, d], v) == metric_dv([a, b], [c, d], v)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            metric_dv([1, 2], [1, 2, 3], INF)


class TestBasinProbe:
    def test_convergence_to_Q(self):
        # orbit x_n = 2^n * x0 runs off to base infinity; chart u = 2^-n
        m = tri_model()
        rep = basin_probe(m, point(1, 1), None, INF, 30)
        assert rep.verdict == "converged_at"
        assert rep.converged
        assert rep.at is not None and rep.at <= 30
        last = rep.samples[-1]
        assert last.below_epsilon and last.distance < float(DEFAULT_EPS)

    def test_u_coordinate_is_exactly_2_to_minus_n(self):
        m = tri_model()
        f = m.affine_map()
        p = point(1, 1)
        from dmlwb.hirzebruch import chart_around_Q

        for n in range(1, 8):
            p = f.apply(p)
            u, _ = chart_around_Q(embed_A2(p, 3))
            assert u == Fraction(1, 2**n)

    def test_not_converged_at_finite_place(self):
        # |2^n|_2 shrinks so u = 2^-n grows 2-adically: no convergence
        m = tri_model()
        rep = basin_probe(m, point(1, 1), None, Place.finite(2), 15)
        assert rep.verdict == "not_converged"
        assert not rep.converged

    def test_reached_Q(self):
        m = tri_model()
        rep = basin_probe(m, fixed_point_Q(3), None, INF, 5)
        assert rep.verdict == "reached_Q" and rep.at == 0

    def test_hit_indeterminacy(self):
        m = tri_model()
        P = FnPoint(3, (1, 0, 0, 1))
        rep = basin_probe(m, P, None, INF, 5)
        assert rep.verdict == "hit_indeterminacy"

    def test_planar_probe(self):
        f = PolyMap(parse_poly("1/2*x"), parse_poly("1/2*y"))
        rep = basin_probe(f, point(1, 1), point(0, 0), INF, 40)
        assert rep.verdict == "converged_at"
        assert any("unverified" in s for s in rep.notes)

    def test_planar_requires_fixed_Q(self):
        f = PolyMap(parse_poly("x + 1"), parse_poly("y"))
        with pytest.raises(ValueError):
            basin_probe(f, point(0, 0), point(3, 3), INF, 5)

    def test_json_round_trip_fields(self):
        rep = basin_probe(tri_model(), point(1, 1), None, INF, 10)
        d = rep.to_json_dict()
        assert set(d) == {"verdict", "at", "place", "eps", "samples", "notes"}
        assert d["place"] == "inf"
        assert isinstance(d["samples"], list)


class TestLocalDmlProbe:
    def test_fixed_curve_confirmed(self):
        # contraction to the origin along the invariant diagonal y = x
        f = PolyMap(parse_poly("1/2*x"), parse_poly("1/2*y"))
        rep = local_dml_probe(
            f, Curve.from_string("y - x"), point(1, 1), Q=point(0, 0), N=30
        )
        assert rep.verdict == "curve_fixed_confirmed"
        assert not rep.violation
        assert len(rep.visit_set) >= rep.visit_threshold

    def test_hypotheses_not_met_without_visits(self):
        m = tri_model()
        rep = local_dml_probe(m, Curve.from_string("y - 7"), point(1, 1), N=30)
        assert rep.verdict == "hypotheses_not_met"
        assert not rep.violation

    def test_orbit_hits_Q_planar(self):
        # the constant map lands exactly on Q after one step
        f = PolyMap(parse_poly("0"), parse_poly("0"))
        rep = local_dml_probe(
            f, Curve.from_string("y - x"), point(1, 1), Q=point(0, 0), N=40
        )
        assert rep.verdict == "orbit_hits_Q"
        assert not rep.violation

    def test_report_json(self):
        m = tri_model()
        rep = local_dml_probe(m, Curve.from_string("y"), point(1, 1), N=10)
        d = rep.to_json_dict()
        assert set(d) == {
            "verdict", "violation", "basin", "visit_set", "visit_threshold", "notes",
        }
