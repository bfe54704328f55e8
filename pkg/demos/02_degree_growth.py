"""Degree sequences separate exponential maps from the triangular family.

The Henon map doubles its degree every step.  The triangular map below
composes to degree 3n + 2: linear growth, so its dynamical degree is 1
even though a single application has degree 5.
"""

from dmlwb.degrees import (
    degree_sequence,
    dynamical_degree_estimate,
    is_algebraically_stable_P2,
)
from dmlwb.maps import PolyMap
from dmlwb.parsing import parse_poly

henon = PolyMap(parse_poly("y"), parse_poly("y^2 - x"))
tri = PolyMap(parse_poly("2*x"), parse_poly("x^3*y + x^5"))

for name, f in [("henon", henon), ("triangular", tri)]:
    prof = degree_sequence(f, 8)
    est = dynamical_degree_estimate(f, 8)
    print(name)
    print("  degrees:", prof.degrees)
    print("  growth:", prof.growth_class, " estimate:", est.estimate)
    print("  plane stability:", is_algebraically_stable_P2(f, 8))
