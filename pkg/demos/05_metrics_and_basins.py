"""Projective chordal metrics at each place, and a certified basin probe.

The orbit of (1, 1) under f = (2x, x^3 y + x^5), read on the ruled surface
F_3, converges to the fixed point Q at the archimedean place.  In the
chart around Q the first coordinate is exactly 2^-n, so the certificate
is an exact rational inequality, not a float estimate.
"""

from fractions import Fraction

from dmlwb.hirzebruch import FnModel, chart_around_Q, embed_A2
from dmlwb.maps import PolyMap, point
from dmlwb.metrics import basin_probe, metric_dv
from dmlwb.parsing import parse_poly
from dmlwb.places import Place

print("d_2([1:1], [1:3]) =", metric_dv([1, 1], [1, 3], Place.finite(2)))
print("d_inf([1:1], [1:3]) =", metric_dv([1, 1], [1, 3], Place.archimedean()))

f = PolyMap(parse_poly("2*x"), parse_poly("x^3*y + x^5"))
m = FnModel.from_map(f, 3)

rep = basin_probe(m, point(1, 1), None, Place.archimedean(), 30,
                  eps=Fraction(1, 2**20))
print("verdict:", rep.verdict, "at iterate", rep.at)
print("last chart distance:", rep.samples[-1].distance)

p = point(1, 1)
for n in range(1, 6):
    p = f.apply(p)
    u, w = chart_around_Q(embed_A2(p, 3))
    print(f"  n = {n}: chart = ({u}, {w})")

# at the 2-adic place the same orbit runs away from Q instead
rep2 = basin_probe(m, point(1, 1), None, Place.finite(2), 30)
print("2-adic verdict:", rep2.verdict)
