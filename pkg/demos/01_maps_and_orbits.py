"""Plane polynomial maps: construction, composition, verified inverses."""

from dmlwb.maps import PolyMap, RatFunc, RationalMap, compose_map, iterate_map, point
from dmlwb.parsing import parse_poly

henon = PolyMap(
    parse_poly("y"),
    parse_poly("y^2 - x"),
    inverse=RationalMap(RatFunc.parse("(x^2 - y)/(1)"), RatFunc.parse("(x)/(1)")),
)

p = point(1, 2)
print("henon:", henon)
for n in range(5):
    print(f"  f^{n}(1, 2) =", iterate_map(henon, n).apply(p))

# the inverse is checked symbolically at construction time
q = henon.apply(p)
print("inverse round trip:", henon.inverse.apply(q) == p)

tri = PolyMap(parse_poly("2*x"), parse_poly("x^3*y + x^5"))
print("composition degree:", compose_map(tri, tri).algebraic_degree(),
      "vs product of degrees", tri.algebraic_degree() ** 2)
