"""Degree sequences under iteration, growth labels, stability checks."""

import pytest

from dmlwb.degrees import (
    GROWTH_BOUNDED,
    GROWTH_EXPONENTIAL,
    GROWTH_LINEAR,
    _growth_class,
    degree_sequence,
    dynamical_degree_estimate,
    is_algebraically_stable_P2,
    profile_to_json_dict,
)
from dmlwb.maps import PolyMap
from dmlwb.parsing import parse_poly


def parse_map(f1: str, f2: str) -> PolyMap:
    return PolyMap(parse_poly(f1), parse_poly(f2))


def test_henon_degrees_double():
    f = parse_map("y", "y^2 - x")
    prof = degree_sequence(f, 6)
    assert prof.degrees == (2, 4, 8, 16, 32, 64)
    assert prof.growth_class == GROWTH_EXPONENTIAL
    assert prof.lambda_estimate == 2.0


def test_triangular_degrees_linear():
    f = parse_map("2*x", "x^3*y + x^5")
    prof = degree_sequence(f, 8)
    assert prof.degrees == tuple(3 * n + 2 for n in range(1, 9))
    assert prof.growth_class == GROWTH_LINEAR


def test_affine_map_bounded():
    f = parse_map("x + 1", "2*y")
    prof = degree_sequence(f, 5)
    assert prof.degrees == (1, 1, 1, 1, 1)
    assert prof.growth_class == GROWTH_BOUNDED
    assert prof.lambda_estimate == 1.0


def test_growth_class_on_raw_sequences():
    assert _growth_class([5, 8, 11]) == GROWTH_LINEAR
    assert _growth_class([2, 4, 8, 16]) == GROWTH_EXPONENTIAL
    assert _growth_class([3, 3, 3]) == GROWTH_BOUNDED
    assert _growth_class([1]) == GROWTH_BOUNDED


def test_estimate_reports_last_ratio():
    f = parse_map("y", "y^2 - x")
    est = dynamical_degree_estimate(f, 5)
    assert est.estimate == 2.0
    assert est.last_ratio == 2.0


def test_estimate_rejects_tiny_horizon():
    with pytest.raises(ValueError):
        dynamical_degree_estimate(parse_map("x", "y"), 1)


def test_henon_stable():
    v = is_algebraically_stable_P2(parse_map("y", "y^2 - x"), 8)
    assert v.is_stable
    assert str(v) == "stable_up_to_8"


def test_triangular_drops_at_two():
    # deg f = 5 but deg f^2 = 8 < 25
    v = is_algebraically_stable_P2(parse_map("2*x", "x^3*y + x^5"), 8)
    assert not v.is_stable
    assert v.unstable_at == 2
    assert str(v) == "unstable_at(2)"


def test_profile_json_shape():
    prof = degree_sequence(parse_map("y", "y^2 - x"), 3)
    d = profile_to_json_dict(prof)
    assert d == {
        "degrees": [2, 4, 8],
        "lambda_estimate": 2.0,
        "growth_class": "exponential",
    }


def test_inverse_not_required():
    f = parse_map("2*x", "x*y")
    prof = degree_sequence(f, 4)
    assert prof.degrees == (2, 3, 4, 5)
