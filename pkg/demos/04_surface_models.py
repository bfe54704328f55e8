"""Extending a triangular map to a ruled surface where it becomes stable.

On the plane, iterating f = (2x, x^3 y + x^5) drops degree (3n + 2 instead
of 5^n).  Extending f to the ruled surface with twist n = 3 restores
algebraic stability: one indeterminacy point, and the fiber at infinity
contracts onto the fixed point Q = [1, 0, 1, 0].
"""

from dmlwb.hirzebruch import (
    FnModel,
    FnPoint,
    chart_around_Q,
    contracted_image_check,
    embed_A2,
    fixed_point_Q,
    indeterminacy_fn,
    stability_threshold,
)
from dmlwb.maps import PolyMap, point
from dmlwb.parsing import parse_poly

f = PolyMap(parse_poly("2*x"), parse_poly("x^3*y + x^5"))
print("stability threshold:", stability_threshold(parse_poly("x^3"), parse_poly("x^5")))

m = FnModel.from_map(f)
print("model on F_%d:" % m.n,
      f"base (a, b) = ({m.a}, {m.b}), fiber degree d = {m.d},",
      f"Ah = {m.Ah}, Bh = {m.Bh} (in x1, x2)")
print("indeterminacy:", indeterminacy_fn(m).description)
print("fiber at infinity contracts to Q:", contracted_image_check(m))

# affine points embed as [x, 1, y, 1]; the model agrees with f there
p = point(1, 1)
print("embedded:", embed_A2(p, 3))
print("commutes:", m.apply(embed_A2(p, 3)) == embed_A2(f.apply(p), 3))

# equivalence classes normalize to a canonical representative
print("[2, 4, 1, 8] on F_2 normalizes to", FnPoint(2, (2, 4, 1, 8)))

q = fixed_point_Q(3)
print("Q is fixed:", m.apply(q) == q, " chart at Q:", chart_around_Q(q))
