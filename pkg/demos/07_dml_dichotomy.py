"""Visit sets, progression structure, and the dichotomy classifier.

For a map f, a curve C, and a starting point p, the set of times n with
f^n(p) on C should be a finite union of arithmetic progressions, and an
infinite visit set should force either a preperiodic point or a periodic
curve.  The classifier searches for both certificates.
"""

from dmlwb.curves import Curve
from dmlwb.dml import ap_decompose, dml_classify, visit_set
from dmlwb.maps import PolyMap, point
from dmlwb.parsing import parse_poly


def show(f, C, p, N):
    rep = dml_classify(f, C, p, N=N, K=12)
    print(f"f = {f}, C = {C}, p = ({p.x}, {p.y}), horizon {N}")
    print("  visits:", rep.visit_set)
    print("  progressions:", rep.ap.progressions, " sporadic:", rep.ap.exceptional)
    print("  preperiodic witness:", rep.preperiodic_witness,
          " curve period:", rep.curve_period_witness)
    print("  verdict:", rep.verdict)


# C has period 2, so visits recur forever with difference 2
show(PolyMap(parse_poly("x + 1"), parse_poly("-y")),
     Curve.from_string("y - 1"), point(0, 1), 10)

# here the point itself is periodic
show(PolyMap(parse_poly("-x"), parse_poly("-y")),
     Curve.from_string("x - 1"), point(1, 1), 9)

# 2^n = 2n holds at n = 1 and n = 2 only: finitely many visits
show(PolyMap(parse_poly("x + 1"), parse_poly("2*y")),
     Curve.from_string("y - 2*x"), point(0, 1), 20)

# progression decomposition is exact and reconstructs its input
S = visit_set(PolyMap(parse_poly("x + 1"), parse_poly("-y")),
              point(0, 1), Curve.from_string("y - 1"), 40)
ap = ap_decompose(set(S), 40)
print("decomposition of", S[:6], "... :", ap.progressions,
      " reconstructs:", ap.members() == set(S))
