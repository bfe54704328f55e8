"""Orbits, visit sets, arithmetic-progression structure, and the
dichotomy classifier.

The classifier is empirical: at a finite horizon "infinite visits" is
operationally a certified periodic tail (membership a-periodic over a
window of at least 3a).  When such a tail is certified the classifier
hunts for the two admissible explanations, an exactly repeating orbit
or a periodic curve, and only reports VIOLATION when both searches ran
to completion and found nothing.  Guard-truncated data never produces
a VIOLATION verdict; it is reported as undetermined with the guard on
record.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .curves import Curve, is_periodic_curve
from .errors import DegreeCapError
from .maps import Point, PolyMap
from .places import height_affine
from .poly import get_degree_cap, set_degree_cap

DEFAULT_HORIZON = 200
DEFAULT_MAX_PERIOD = 12
DEFAULT_BIT_GUARD = 10**6
# compose-based period searches blow up on quadratic maps; this cap
# bounds the curve-search degree independently of the module-wide cap
DEFAULT_CURVE_SEARCH_CAP = 128


def _bits(q) -> int:
    return max(q.numerator.bit_length(), q.denominator.bit_length())


@dataclass(frozen=True)
class OrbitResult:
    """Exact orbit prefix with optional cycle certificate.

    cycle = (tail, period) means points[tail + k] repeats with the given
    period forever; it is certified by an exact coordinate repetition.
    guard_hit records that the coefficient-size guard stopped iteration
    early, so the prefix is all we know.
    """

    points: tuple[Point, ...]
    cycle: Optional[tuple[int, int]]
    guard_hit: bool
    horizon: int

    def point_at(self, n: int) -> Point:
        """f^n(p) for any n covered by the prefix or the cycle."""
        if n < len(self.points):
            return self.points[n]
        if self.cycle is None:
            raise IndexError(f"orbit only computed up to n = {len(self.points) - 1}")
        tail, period = self.cycle
        return self.points[tail + (n - tail) % period]

    @property
    def last_computed(self) -> int:
        return len(self.points) - 1


def orbit(
    f: PolyMap, p: Point, N: int, bit_guard: int = DEFAULT_BIT_GUARD
) -> OrbitResult:
    """Exact orbit p, f(p), ..., f^N(p) with cycle detection.

    Iteration stops at the first exact repetition (the rest of the
    orbit is determined) or when a coordinate exceeds bit_guard bits.
    """
    if N < 0:
        raise ValueError("orbit length must be nonnegative")
    seen: dict[Point, int] = {p: 0}
    points = [p]
    current = p
    guard_hit = False
    cycle = None
    for k in range(1, N + 1):
        current = f.apply(current)
        if _bits(current.x) > bit_guard or _bits(current.y) > bit_guard:
            guard_hit = True
            break
        hit = seen.get(current)
        if hit is not None:
            cycle = (hit, k - hit)
            break
        seen[current] = k
        points.append(current)
    return OrbitResult(
        points=tuple(points), cycle=cycle, guard_hit=guard_hit, horizon=N
    )


def _visits(res: OrbitResult, C: Curve) -> list[int]:
    """Visit times within [0, horizon], cycle-extended when possible."""
    out = []
    computed = len(res.points)
    member = [C.contains(pt) for pt in res.points]
    for n in range(computed):
        if member[n]:
            out.append(n)
    if res.cycle is not None:
        tail, period = res.cycle
        for n in range(computed, res.horizon + 1):
            if member[tail + (n - tail) % period]:
                out.append(n)
    return out


def visit_set(
    f: PolyMap,
    p: Point,
    C: Curve,
    N: int,
    bit_guard: int = DEFAULT_BIT_GUARD,
) -> list[int]:
    """Sorted n in [0, N] with f^n(p) on C (exact vanishing).

    Cycling orbits are extended symbolically to the full horizon; a
    tripped orbit guard propagates as truncated data, so prefer
    visit_set_with_orbit when the completeness of the scan matters.
    """
    return visit_set_with_orbit(f, p, C, N, bit_guard)[0]


def visit_set_with_orbit(
    f: PolyMap,
    p: Point,
    C: Curve,
    N: int,
    bit_guard: int = DEFAULT_BIT_GUARD,
) -> tuple[list[int], OrbitResult]:
    """visit_set plus the underlying orbit (for guard inspection)."""
    res = orbit(f, p, N, bit_guard)
    return _visits(res, C), res


@dataclass(frozen=True)
class APSet:
    """Finite union of arithmetic progressions plus exceptional points.

    progressions is a tuple of (a, b) pairs meaning {b, b+a, b+2a, ...}
    with a >= 1 and b the least member inside the periodic tail (so
    b < n0 + a for the cut n0); singleton progressions (a = 0) are
    folded into the exceptional set.  Progressions are pairwise
    disjoint and disjoint from the exceptional set over [0, horizon].
    """

    progressions: tuple[tuple[int, int], ...]
    exceptional: tuple[int, ...]
    horizon: int

    def members(self, upto: Optional[int] = None) -> set[int]:
        """The decoded subset of [0, upto] (defaults to the horizon)."""
        bound = self.horizon if upto is None else upto
        out = set(s for s in self.exceptional if s <= bound)
        for a, b in self.progressions:
            out.update(range(b, bound + 1, a))
        return out

    def to_json_dict(self) -> dict:
        return {
            "progressions": [list(pr) for pr in self.progressions],
            "exceptional": list(self.exceptional),
            "horizon": self.horizon,
        }


def ap_decompose(S, N: int) -> APSet:
    """Decompose S as progressions over a certified periodic tail plus
    exceptional points.

    Finds the least difference a in [1, N//4] and then the least cut n0
    such that membership is a-periodic on [n0, N] and the tail window
    has length >= 3a.  One progression is emitted per residue class of
    S in the tail; members before the cut are exceptional.  Without
    such an a the whole set is exceptional.
    """
    S = set(S)
    if any(not isinstance(s, int) or s < 0 or s > N for s in S):
        raise ValueError("S must be a set of integers inside [0, N]")
    member = [False] * (N + 1)
    for s in S:
        member[s] = True
    for a in range(1, N // 4 + 1):
        last_bad = -1
        for n in range(N - a, -1, -1):
            if member[n] != member[n + a]:
                last_bad = n
                break
        n0 = last_bad + 1
        if N - n0 + 1 < 3 * a:
            continue
        progressions = tuple(
            (a, b) for b in range(n0, n0 + a) if b <= N and member[b]
        )
        exceptional = tuple(sorted(s for s in S if s < n0))
        return APSet(progressions=progressions, exceptional=exceptional, horizon=N)
    return APSet(progressions=(), exceptional=tuple(sorted(S)), horizon=N)


VERDICT_FINITE = "finite_visits"
VERDICT_PREPERIODIC = "dichotomy_confirmed_preperiodic"
VERDICT_CURVE_PERIODIC = "dichotomy_confirmed_curve_periodic"
VERDICT_UNDETERMINED = "undetermined"
VERDICT_VIOLATION = "VIOLATION"


@dataclass(frozen=True)
class DmlReport:
    """Classification of one (map, curve, point) instance.

    Invariant: verdict is VIOLATION only when a periodic visit tail is
    certified at the full horizon and both witness searches (exact
    orbit cycle, curve period up to max_period) ran to completion
    without success.
    """

    visit_set: tuple[int, ...]
    ap: APSet
    preperiodic_witness: Optional[tuple[int, int]]
    curve_period_witness: Optional[int]
    height_trace: tuple[int, ...]
    verdict: str
    horizon: int
    max_period: int
    orbit_guard_hit: bool = False
    curve_search_capped: bool = False
    notes: tuple[str, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "visit_set": list(self.visit_set),
            "ap": self.ap.to_json_dict(),
            "preperiodic_witness": (
                list(self.preperiodic_witness)
                if self.preperiodic_witness is not None
                else None
            ),
            "curve_period_witness": self.curve_period_witness,
            "height_trace": list(self.height_trace),
            "verdict": self.verdict,
            "horizon": self.horizon,
            "max_period": self.max_period,
            "guards": {
                "orbit_guard_hit": self.orbit_guard_hit,
                "curve_search_capped": self.curve_search_capped,
            },
            "notes": list(self.notes),
        }


def _curve_period_capped(
    C: Curve, f: PolyMap, K: int, search_cap: int
) -> tuple[Optional[int], bool]:
    """is_periodic_curve under a temporary degree cap; (period, capped)."""
    saved = get_degree_cap()
    set_degree_cap(min(saved, search_cap))
    try:
        return is_periodic_curve(C, f, K), False
    except DegreeCapError:
        return None, True
    finally:
        set_degree_cap(saved)


def dml_classify(
    f: PolyMap,
    C: Curve,
    p: Point,
    N: int = DEFAULT_HORIZON,
    K: int = DEFAULT_MAX_PERIOD,
    bit_guard: int = DEFAULT_BIT_GUARD,
    curve_search_cap: int = DEFAULT_CURVE_SEARCH_CAP,
) -> DmlReport:
    """Classify the visit structure of the orbit of p against C.

    Computes the exact visit set, decomposes it into progressions, and
    when an infinite pattern is certified searches for the two
    admissible explanations.  Guards are recorded in the report, never
    silently dropped.
    """
    res = orbit(f, p, N, bit_guard)
    visits = _visits(res, C)
    notes: list[str] = []
    truncated = res.guard_hit and res.cycle is None
    if truncated:
        # visit data only covers the computed prefix; decompose over it
        ap = ap_decompose(set(visits), res.last_computed)
        notes.append(
            f"orbit guard hit at n = {res.last_computed + 1}; "
            f"visit data truncated, no claim beyond n = {res.last_computed}"
        )
    else:
        ap = ap_decompose(set(visits), N)
    heights = tuple(
        height_affine(res.point_at(n)) for n in visits
    )
    pre_witness = res.cycle
    curve_witness: Optional[int] = None
    curve_capped = False
    certified = bool(ap.progressions) and not truncated
    if certified:
        curve_witness, curve_capped = _curve_period_capped(
            C, f, K, curve_search_cap
        )
        if curve_capped:
            notes.append(
                f"curve period search hit the degree cap before reaching K = {K}"
            )
    if truncated:
        verdict = VERDICT_UNDETERMINED
    elif not certified:
        verdict = VERDICT_FINITE
    elif pre_witness is not None:
        verdict = VERDICT_PREPERIODIC
    elif curve_witness is not None:
        verdict = VERDICT_CURVE_PERIODIC
    elif curve_capped:
        verdict = VERDICT_UNDETERMINED
    else:
        verdict = VERDICT_VIOLATION
        notes.append(
            "certified periodic visit tail with no preperiodic orbit and "
            "no curve period <= K: contradicts the dichotomy"
        )
    return DmlReport(
        visit_set=tuple(visits),
        ap=ap,
        preperiodic_witness=pre_witness,
        curve_period_witness=curve_witness,
        height_trace=heights,
        verdict=verdict,
        horizon=N,
        max_period=K,
        orbit_guard_hit=res.guard_hit,
        curve_search_capped=curve_capped,
        notes=tuple(notes),
    )
