"""Projective metrics per place, basin probes, and the local DML probe.

The metric on projective space at a place v is

    d_v([x], [y]) = max_{i,j} |x_i y_j - x_j y_i|_v
                    / (max_i |x_i|_v * max_j |y_j|_v),

independent of representatives.  Near the F_n fixed point [1, 0, 1, 0]
distances are measured in the canonical chart (u, w) = (x2/x1,
x1^n*x4/x3) as max(|u|_v, |w|_v); metrics from different embeddings are
equivalent, so the chart metric is a legitimate stand-in.

Archimedean distances are floats obtained from exact integers (relative
error well below 1e-14); finite-place distances are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import ChartDomainError, IndeterminacyError
from .hirzebruch import FnModel, FnPoint, chart_around_Q, embed_A2, fixed_point_Q
from .maps import Point, PolyMap
from .places import Place, ProjPoint, abs_value, embed_P2
from .poly import as_fraction

DEFAULT_EPS = Fraction(1, 2**20)

CoordsLike = Union[ProjPoint, Sequence]


def _coords(p: CoordsLike) -> list[Fraction]:
    if isinstance(p, ProjPoint):
        return [Fraction(c) for c in p.coords]
    return [as_fraction(c) for c in p]


def metric_dv(p: CoordsLike, q: CoordsLike, v: Place):
    """d_v between two projective points (raw coordinates accepted).

    Returns an exact Fraction at finite places and a float at the
    archimedean place.
    """
    xs, ys = _coords(p), _coords(q)
    if len(xs) != len(ys):
        raise ValueError("points must have the same projective dimension")
    if all(c == 0 for c in xs) or all(c == 0 for c in ys):
        raise ValueError("all-zero coordinates are not a projective point")
    cross = Fraction(0)
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            term = abs_value(xs[i] * ys[j] - xs[j] * ys[i], v)
            if term > cross:
                cross = term
    den = max(abs_value(c, v) for c in xs) * max(abs_value(c, v) for c in ys)
    value = cross / den
    return float(value) if v.is_archimedean else value


def _distance_json(d):
    if d is None:
        return None
    if isinstance(d, Fraction):
        return str(d)
    return d


@dataclass(frozen=True)
class MetricSample:
    n: int
    distance: Optional[Union[Fraction, float]]  # None when outside the chart
    below_epsilon: bool

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "distance": _distance_json(self.distance),
            "below_epsilon": self.below_epsilon,
        }


@dataclass(frozen=True)
class BasinReport:
    verdict: str  # converged_at | not_converged | hit_indeterminacy | reached_Q
    at: Optional[int]
    samples: tuple[MetricSample, ...]
    place: Place
    eps: Fraction
    notes: tuple[str, ...] = ()

    @property
    def converged(self) -> bool:
        return self.verdict in ("converged_at", "reached_Q")

    def __str__(self) -> str:
        tag = self.verdict if self.at is None else f"{self.verdict}({self.at})"
        return f"basin probe at v={self.place}: {tag}"

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "at": self.at,
            "place": str(self.place),
            "eps": str(self.eps),
            "samples": [s.to_json_dict() for s in self.samples],
            "notes": list(self.notes),
        }


_WINDOW = 5  # consecutive strictly decreasing below-eps samples certify convergence


def _certified_at(samples: list[MetricSample]) -> Optional[int]:
    if len(samples) < _WINDOW:
        return None
    tail = samples[-_WINDOW:]
    if any(s.distance is None or not s.below_epsilon for s in tail):
        return None
    for s1, s2 in zip(tail, tail[1:]):
        if not s2.distance < s1.distance:
            return None
    return tail[-1].n


def basin_probe(model, p, Q, v: Place, N: int, eps=DEFAULT_EPS) -> BasinReport:
    """Iterate toward the fixed point Q and measure d_v each step.

    model: FnModel (chart metric near [1,0,1,0]) or PolyMap (affine data
    through the projective-plane embedding).  Q must be fixed; for an
    FnModel, Q defaults to [1, 0, 1, 0] when None.  Convergence is
    certified by 5 consecutive strictly decreasing samples below eps.
    """
    eps = as_fraction(eps) if not isinstance(eps, float) else Fraction(eps)
    notes: list[str] = []
    if isinstance(model, FnModel):
        if Q is None:
            Q = fixed_point_Q(model.n)
        if not isinstance(Q, FnPoint):
            Q = embed_A2(Q if isinstance(Q, Point) else Point(*Q), model.n)
        if model.apply(Q) != Q:
            raise ValueError(f"{Q} is not fixed by the model")
        current = p if isinstance(p, FnPoint) else embed_A2(
            p if isinstance(p, Point) else Point(*p), model.n
        )
        qu, qw = chart_around_Q(Q)

        def step(P):
            return model.apply(P)

        def distance(P):
            try:
                u, w = chart_around_Q(P)
            except ChartDomainError:
                return None
            du = abs_value(u - qu, v)
            dw = abs_value(w - qw, v)
            value = max(du, dw)
            return float(value) if v.is_archimedean else value

    elif isinstance(model, PolyMap):
        if Q is None:
            raise ValueError("planar probes need an explicit fixed point Q")
        if not isinstance(Q, Point):
            Q = Point(*(as_fraction(c) for c in Q))
        if model.apply(Q) != Q:
            raise ValueError(f"{Q} is not fixed by the map")
        current = p if isinstance(p, Point) else Point(*(as_fraction(c) for c in p))
        q_proj = embed_P2(Q)
        notes.append(
            "planar probe: indeterminacy-side hypotheses on Q are unverified"
        )

        def step(P):
            return model.apply(P)

        def distance(P):
            return metric_dv(embed_P2(P), q_proj, v)

    else:
        raise TypeError("basin_probe expects an FnModel or a PolyMap")

    samples: list[MetricSample] = []
    for n in range(N + 1):
        if current == Q:
            return BasinReport(
                verdict="reached_Q",
                at=n,
                samples=tuple(samples),
                place=v,
                eps=eps,
                notes=tuple(notes),
            )
        dist = distance(current)
        if dist is None:
            notes.append(f"step {n}: point outside the chart around Q")
            below = False
        else:
            below = (
                dist < float(eps) if isinstance(dist, float) else dist < eps
            )
        samples.append(MetricSample(n, dist, below))
        at = _certified_at(samples)
        if at is not None:
            return BasinReport(
                verdict="converged_at",
                at=at,
                samples=tuple(samples),
                place=v,
                eps=eps,
                notes=tuple(notes),
            )
        if n < N:
            try:
                current = step(current)
            except IndeterminacyError:
                return BasinReport(
                    verdict="hit_indeterminacy",
                    at=n + 1,
                    samples=tuple(samples),
                    place=v,
                    eps=eps,
                    notes=tuple(notes) + (f"indeterminate image at step {n + 1}",),
                )
    return BasinReport(
        verdict="not_converged",
        at=None,
        samples=tuple(samples),
        place=v,
        eps=eps,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class LocalDmlReport:
    verdict: str  # curve_fixed_confirmed | orbit_hits_Q | hypotheses_not_met | violation
    violation: bool
    basin: BasinReport
    visit_set: tuple[int, ...]
    visit_threshold: int
    notes: tuple[str, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "violation": self.violation,
            "basin": self.basin.to_json_dict(),
            "visit_set": list(self.visit_set),
            "visit_threshold": self.visit_threshold,
            "notes": list(self.notes),
        }


def local_dml_probe(
    model,
    C,
    p,
    Q=None,
    v: Place = Place.archimedean(),
    N: int = 50,
    eps=DEFAULT_EPS,
    visit_threshold: int = 8,
) -> LocalDmlReport:
    """Empirical local dichotomy: attraction to Q plus many visits to C
    force either an orbit landing on Q exactly or a fixed curve.

    Runs basin_probe and the visit-set computation together; when
    convergence is certified and the visit count reaches the threshold,
    checks is_fixed_curve / exact Q-hits and raises the violation flag
    if both fail (no known map does this; the flag marks an anomaly).
    """
    from .curves import is_fixed_curve
    from .dml import visit_set_with_orbit

    notes: list[str] = []
    if isinstance(model, FnModel):
        f = model.affine_map()
    else:
        f = model
    affine_p = p if isinstance(p, Point) else Point(*(as_fraction(c) for c in p))
    basin = basin_probe(model, p, Q, v, N, eps)
    visits, orbit_res = visit_set_with_orbit(f, affine_p, C, N)
    if orbit_res.guard_hit:
        notes.append("orbit guard truncated the visit scan")
    hits_q = basin.verdict == "reached_Q"
    if not isinstance(model, FnModel) and Q is not None:
        q_aff = Q if isinstance(Q, Point) else Point(*(as_fraction(c) for c in Q))
        hits_q = hits_q or any(pt == q_aff for pt in orbit_res.points)
    if basin.converged and len(visits) >= visit_threshold:
        if hits_q:
            verdict, violation = "orbit_hits_Q", False
        elif is_fixed_curve(C, f):
            verdict, violation = "curve_fixed_confirmed", False
        else:
            verdict, violation = "violation", True
            notes.append(
                "convergence and infinite-looking visits without a fixed "
                "curve or an exact Q-hit: contradicts the local dichotomy"
            )
    else:
        verdict, violation = "hypotheses_not_met", False
        if not basin.converged:
            notes.append("no convergence certificate at this horizon")
        if len(visits) < visit_threshold:
            notes.append(
                f"visit set has {len(visits)} entries, below threshold "
                f"{visit_threshold}"
            )
    return LocalDmlReport(
        verdict=verdict,
        violation=violation,
        basin=basin,
        visit_set=tuple(visits),
        visit_threshold=visit_threshold,
        notes=tuple(notes),
    )
