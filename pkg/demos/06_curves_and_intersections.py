"""Curves under birational maps: transforms, closures, multiplicities."""

from dmlwb.curves import (
    Curve,
    fn_closure_data,
    closure_passes_through_Q,
    decreasing_intersection_experiment,
    intersection_multiplicity,
    is_periodic_curve,
    push_forward_curve,
    rational_intersection_points,
)
from dmlwb.hirzebruch import FnModel
from dmlwb.maps import PolyMap, point
from dmlwb.parsing import parse_poly

f = FnModel.from_map(
    PolyMap(parse_poly("2*x"), parse_poly("x^3*y + x^5"))
).affine_map()  # same map, with the verified inverse attached

C = Curve.from_string("y - x^4")
print("push forward of", C, "is", push_forward_curve(C, f))

# closure bookkeeping on F_3: bidegree and fiber degree of the closure
print("closure (chart degree, fiber degree) of y - x^4 on F_3:", fn_closure_data(C, 3))
print("closure passes through Q:", closure_passes_through_Q(C, 3))

# a fiber that the map permutes with period 2
flip = PolyMap(parse_poly("-x"), parse_poly("x^2*y"))
print("period of {x = 1} under (-x, x^2 y):", is_periodic_curve(Curve.from_string("x - 1"), flip, 4))

# local intersection theory, all exact
A = Curve.from_string("y")
B = Curve.from_string("y - x^2")
print("I_0(y, y - x^2) =", intersection_multiplicity(A, B, point(0, 0)))

circle = Curve.from_string("x^2 + y^2 - 1")
line = Curve.from_string("y - x + 1")
pts, irr = rational_intersection_points(circle, line)
print("circle meets line at:", pts, " nonrational points detected:", irr)

# multiplicities along the pushed-forward closure drop strictly toward Q
exp = decreasing_intersection_experiment(FnModel.from_map(f), push_forward_curve(push_forward_curve(C, f), f), 2)
print("multiplicity chain at Q:", exp.sequence, "->", exp.status)
