"""Degree sequences, dynamical-degree estimates, and projective stability.

Degree growth under iteration separates the map classes studied here:
stable maps on the projective plane satisfy deg f^n = (deg f)^n exactly,
while triangular maps grow linearly and have dynamical degree 1.  All
growth labels are finite-horizon heuristics and say so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .maps import PolyMap, compose_map

GROWTH_BOUNDED = "bounded"
GROWTH_LINEAR = "linear"
GROWTH_EXPONENTIAL = "exponential"
GROWTH_UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple[int, ...]  # deg f^n for n = 1..N
    lambda_estimate: float
    growth_class: str


class DegreeEstimate(NamedTuple):
    estimate: float
    last_ratio: float


@dataclass(frozen=True)
class StabilityVerdict:
    horizon: int
    unstable_at: Optional[int]

    @property
    def is_stable(self) -> bool:
        return self.unstable_at is None

    def __str__(self) -> str:
        if self.is_stable:
            return f"stable_up_to_{self.horizon}"
        return f"unstable_at({self.unstable_at})"


def algebraic_degree(f: PolyMap) -> int:
    """max(deg f1, deg f2) for a non-constant map."""
    return f.algebraic_degree()


def _raw_degree_sequence(f: PolyMap, N: int) -> list[int]:
    if N < 1:
        raise ValueError("degree horizon must be at least 1")
    # inverses are dropped: composing them is wasted work here
    base = PolyMap(f.f1, f.f2)
    acc = base
    out = [acc.algebraic_degree()]
    for _ in range(N - 1):
        acc = compose_map(base, acc)
        out.append(acc.algebraic_degree())
    return out


def _lambda_estimate(degrees: list[int], deg_f: int) -> float:
    N = len(degrees)
    last = degrees[-1]
    if last == deg_f**N:
        # stability gives exact equality; avoid float roots
        return float(deg_f)
    if last == 1:
        return 1.0
    return math.exp(math.log(last) / N)


def _growth_class(degrees: list[int]) -> str:
    """Finite-horizon growth label over the tail window of the sequence.

    Window is the last max(2, ceil(N/2)) entries.  Checks run in order:
    constant window -> bounded; vanishing second differences (where
    computable) -> linear; ratios non-decreasing with last ratio at
    least 1 + 1/N -> exponential; otherwise undetermined.
    """
    N = len(degrees)
    if N == 1:
        return GROWTH_BOUNDED if degrees[0] == 1 else GROWTH_UNDETERMINED
    w = min(N, max(2, (N + 1) // 2))
    start = N - w
    window = degrees[start:]
    if all(d == window[0] for d in window):
        return GROWTH_BOUNDED
    sec = [
        degrees[k] - 2 * degrees[k - 1] + degrees[k - 2]
        for k in range(max(start, 2), N)
    ]
    if sec and all(s == 0 for s in sec):
        return GROWTH_LINEAR
    ratios = [
        Fraction(degrees[k], degrees[k - 1]) for k in range(max(start, 1), N)
    ]
    if (
        ratios
        and ratios[-1] >= 1 + Fraction(1, N)
        and all(r1 <= r2 for r1, r2 in zip(ratios, ratios[1:]))
    ):
        return GROWTH_EXPONENTIAL
    return GROWTH_UNDETERMINED


def degree_sequence(f: PolyMap, N: int) -> DegreeProfile:
    """deg f^n for n = 1..N with growth label and N-th root estimate."""
    degrees = _raw_degree_sequence(f, N)
    return DegreeProfile(
        degrees=tuple(degrees),
        lambda_estimate=_lambda_estimate(degrees, degrees[0]),
        growth_class=_growth_class(degrees),
    )


def dynamical_degree_estimate(f: PolyMap, N: int) -> DegreeEstimate:
    """(deg f^N)^(1/N) plus the last-ratio diagnostic deg f^N / deg f^(N-1)."""
    if N < 2:
        raise ValueError("estimate horizon must be at least 2")
    degrees = _raw_degree_sequence(f, N)
    return DegreeEstimate(
        estimate=_lambda_estimate(degrees, degrees[0]),
        last_ratio=degrees[-1] / degrees[-2],
    )


def is_algebraically_stable_P2(f: PolyMap, N: int) -> StabilityVerdict:
    """Degree criterion on the projective plane: deg f^n = (deg f)^n.

    Returns the least n <= N where the equality fails, if any.
    """
    if N < 2:
        raise ValueError("stability horizon must be at least 2")
    d = f.algebraic_degree()
    degrees = _raw_degree_sequence(f, N)
    for n, dn in enumerate(degrees, start=1):
        if dn < d**n:
            return StabilityVerdict(horizon=N, unstable_at=n)
    return StabilityVerdict(horizon=N, unstable_at=None)


def profile_to_json_dict(profile: DegreeProfile) -> dict:
    return {
        "degrees": list(profile.degrees),
        "lambda_estimate": profile.lambda_estimate,
        "growth_class": profile.growth_class,
    }
