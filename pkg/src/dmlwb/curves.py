"""Plane curves: fixedness, periodicity, transforms, and intersections.

Curves are reduced: the stored equation is the product of the distinct
irreducible factors (primitive, positive leading coefficient), so curve
equality is plain equation equality.  Irreducible factorization over Q
is delegated to sympy; everything dynamical (transforms, divisibility,
the multiplicity recursion) is computed on our own exact polynomials.

Strict transforms follow the substitute-and-strip recipe: substitute
the supplied rational map, clear denominators minimally, and remove the
irreducible factors of the numerator that divide the cleared
denominator.  Detecting that a map genuinely contracts a curve is a
separate test (the image equation can look like a curve even then), so
callers that need the hypothesis "f does not contract C" check it via
is_contracted_factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import sympy

from .errors import ContractionError, DmlwbError, MissingInverseError
from .hirzebruch import FnModel
from .maps import Point, PolyMap, RationalMap
from .parsing import parse_poly
from .poly import (
    Poly2,
    _exact_div_x,
    _from_x_coeff_list,
    _x_coeff_list,
    divide_by_y,
    divides,
    exact_div,
    normalize_primitive,
    poly_gcd,
    restrict_y0,
    x_order,
    y_coefficients,
)

_SX, _SY = sympy.symbols("x y")


def _to_sympy(p: Poly2):
    rep = {
        (i, j): sympy.Rational(c.numerator, c.denominator) for (i, j), c in p.terms()
    }
    return sympy.Poly.from_dict(rep, _SX, _SY, domain="QQ")


def _from_sympy(sp) -> Poly2:
    terms = {}
    for monom, coeff in sp.terms():
        q = sympy.Rational(coeff)
        terms[(int(monom[0]), int(monom[1]))] = Fraction(int(q.p), int(q.q))
    return Poly2.from_terms(terms)


def factor_poly(p: Poly2) -> list[tuple[Poly2, int]]:
    """Irreducible factorization over Q (constants dropped, factors normalized)."""
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    _, factors = sympy.factor_list(_to_sympy(p))
    out = []
    for fac, mult in factors:
        q = normalize_primitive(_from_sympy(sympy.Poly(fac, _SX, _SY)))
        if not q.is_constant():
            out.append((q, int(mult)))
    out.sort(key=lambda fm: sorted(fm[0].terms()))
    return out


class Curve:
    """Reduced plane curve over Q."""

    __slots__ = ("equation", "factors")

    def __init__(self, equation: Poly2):
        if equation.is_zero or equation.is_constant():
            raise ValueError("a curve equation must be a nonconstant polynomial")
        facs = [f for f, _ in factor_poly(equation)]
        eq = Poly2.one()
        for f in facs:
            eq = eq * f
        object.__setattr__(self, "factors", tuple(facs))
        object.__setattr__(self, "equation", normalize_primitive(eq))

    def __setattr__(self, name, value):
        raise AttributeError("Curve is immutable")

    @classmethod
    def from_string(cls, text: str) -> "Curve":
        return cls(parse_poly(text))

    @property
    def is_irreducible(self) -> bool:
        return len(self.factors) == 1

    def degree(self) -> int:
        return int(self.equation.total_degree())

    def contains(self, p: Point) -> bool:
        return self.equation.evaluate(p.x, p.y) == 0

    def irreducible_components(self) -> list["Curve"]:
        return [Curve(f) for f in self.factors]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Curve):
            return NotImplemented
        return self.equation == other.equation

    def __hash__(self) -> int:
        return hash(self.equation)

    def __str__(self) -> str:
        return str(self.equation)

    def __repr__(self) -> str:
        return f"Curve({self.equation})"


# -- fixedness and periodicity ------------------------------------------------

def is_fixed_curve(C: Curve, f: PolyMap) -> bool:
    """True iff C's equation divides C composed with f.

    For a polynomial morphism of the plane and a reduced equation this
    is exactly f(C) being contained in C (components may permute).
    """
    pulled = C.equation.compose(f.f1, f.f2)
    return divides(C.equation, pulled)


def is_periodic_curve(C: Curve, f: PolyMap, K: int) -> Optional[int]:
    """Least period k <= K with C's equation dividing C after f^k, else None."""
    if K < 1:
        raise ValueError("period bound must be at least 1")
    comp = C.equation
    for k in range(1, K + 1):
        comp = comp.compose(f.f1, f.f2)
        if divides(C.equation, comp):
            return k
    return None


# -- contraction detection -----------------------------------------------------

def _rem_x(a: Poly2, b: Poly2) -> Poly2:
    """Remainder of univariate-in-x division."""
    ca, cb = _x_coeff_list(a), _x_coeff_list(b)
    lead = cb[-1]
    rem = list(ca)
    while len(rem) >= len(cb):
        c = rem[-1] / lead
        for t in range(len(cb)):
            rem[len(rem) - len(cb) + t] -= c * cb[t]
        while rem and not rem[-1]:
            rem.pop()
    return _from_x_coeff_list(rem)


def _prem_tracked(a: Poly2, b: Poly2) -> tuple[Poly2, int]:
    """Pseudo-remainder of a by b in y with the multiplier count.

    Returns (r, s) with r = lc_y(b)^s * a modulo b in (Q[x])[y] and
    deg_y r < deg_y b.
    """
    db = b.deg_y()
    lead_b = y_coefficients(b)[db]
    work = a
    steps = 0
    while not work.is_zero and work.deg_y() >= db:
        dw = work.deg_y()
        lead_w = y_coefficients(work)[dw]
        work = work * lead_b - Poly2({(0, dw - db): 1}) * lead_w * b
        steps += 1
    return work, steps


def _is_constant_mod(P: Poly2, D: Poly2) -> bool:
    """Whether P is congruent to a rational constant modulo irreducible D."""
    dy = D.deg_y()
    if dy == 0:
        coeffs = y_coefficients(P)
        for j, cj in coeffs.items():
            if j == 0:
                continue
            if _exact_div_x(cj, D) is None:
                return False
        c0 = coeffs.get(0)
        if c0 is None:
            return True
        return _rem_x(c0, D).is_constant()
    rem, s = _prem_tracked(P, D)
    if rem.is_zero:
        return True
    if rem.deg_y() > 0:
        return False
    lead = y_coefficients(D)[dy]
    q = exact_div(rem, lead**s)
    return q is not None and q.is_constant()


def is_contracted_factor(D: Poly2, f: PolyMap) -> bool:
    """True iff f maps the irreducible curve D = 0 to a single point.

    Both components of f must reduce to constants modulo D; a single
    irreducible equation is its own normal-form divisor, so the test is
    exact.
    """
    return _is_constant_mod(f.f1, D) and _is_constant_mod(f.f2, D)


def contracts_curve(C: Curve, f: PolyMap) -> bool:
    """True iff every point of some component of C has the same f-image."""
    return any(is_contracted_factor(F, f) for F in C.factors)


# -- strict transforms ---------------------------------------------------------

def strict_transform_inverse(C: Curve, g: RationalMap) -> Curve:
    """Image curve of C under the inverse description g.

    Substitutes g into the equation, clears denominators minimally, and
    strips numerator factors dividing the cleared denominator (the
    exceptional components introduced by clearing).
    """
    from .poly import compose_rational

    num, den = compose_rational(
        C.equation, g.g1.num, g.g1.den, g.g2.num, g.g2.den
    )
    if num.is_zero:
        raise ContractionError("substituted equation vanishes identically")
    kept = []
    for fac, _ in factor_poly(num):
        if den.is_constant() or not divides(fac, den):
            kept.append(fac)
    if not kept:
        raise ContractionError(
            "every factor of the substituted equation is exceptional"
        )
    eq = Poly2.one()
    for fac in kept:
        eq = eq * fac
    return Curve(eq)


def push_forward_curve(C: Curve, f: PolyMap) -> Curve:
    """The image curve f(C), computed through the verified inverse."""
    if f.inverse is None:
        raise MissingInverseError("push-forward needs the inverse of the map")
    return strict_transform_inverse(C, f.inverse)


def pullback_curve(C: Curve, f: PolyMap) -> Curve:
    """The preimage curve f^(-1)(C) minus the f-contracted components."""
    pulled = C.equation.compose(f.f1, f.f2)
    if pulled.is_zero or pulled.is_constant():
        raise ContractionError("preimage equation is constant")
    kept = [fac for fac, _ in factor_poly(pulled) if not is_contracted_factor(fac, f)]
    if not kept:
        raise ContractionError("preimage consists of contracted components only")
    eq = Poly2.one()
    for fac in kept:
        eq = eq * fac
    return Curve(eq)


# -- closures on the ruled surface ---------------------------------------------

def fn_closure_data(C: Curve, n: int) -> tuple[int, int]:
    """Clearing exponents (M, J) for the closure of C in F_n.

    With x = x1/x2 and y = x3/(x2^n * x4), multiplying C by x2^M * x4^J
    where M = max(i + n*j) and J = deg_y clears denominators minimally.
    """
    eq = C.equation
    M = max(i + n * j for (i, j), _ in eq.terms())
    return M, eq.deg_y()


def fn_chart_equation(C: Curve, n: int) -> Poly2:
    """Closure of C in F_n written in the chart at Q = [1, 0, 1, 0].

    Chart coordinates (u, w) = (x2/x1, x1^n * x4/x3) occupy the (x, y)
    slots of the returned polynomial; Q sits at the origin.
    """
    M, J = fn_closure_data(C, n)
    return Poly2.from_terms(
        {(M - i - n * j, J - j): c for (i, j), c in C.equation.terms()}
    )


def closure_passes_through_Q(C: Curve, n: int) -> bool:
    """Whether the F_n closure of C contains the fixed point [1, 0, 1, 0]."""
    return fn_chart_equation(C, n).evaluate(0, 0) == 0


def closure_meets_indeterminacy(C: Curve, n: int) -> bool:
    """Whether the F_n closure of C contains the point [1, 0, 0, 1].

    Evaluating the cleared closure equation at (1, 0, 0, 1) leaves the
    coefficient of the monomial x^M (pure base direction), so membership
    is that coefficient vanishing.
    """
    M, _ = fn_closure_data(C, n)
    return C.equation.coeff(M, 0) == 0


# -- local intersection multiplicities -------------------------------------------

def _fulton_at_origin(F: Poly2, G: Poly2):
    """Fulton's recursion for the multiplicity of (F, G) at the origin.

    Assumes no common component through the origin (screened by the
    caller); returns a nonnegative integer.
    """
    total = 0
    while True:
        if F.evaluate(0, 0) != 0 or G.evaluate(0, 0) != 0:
            return total
        f0 = restrict_y0(F)
        g0 = restrict_y0(G)
        if f0.is_zero and g0.is_zero:
            return math.inf
        if f0.is_zero:
            F = divide_by_y(F)
            total += x_order(g0)
            continue
        if g0.is_zero:
            G = divide_by_y(G)
            total += x_order(f0)
            continue
        r, s = f0.deg_x(), g0.deg_x()
        if r > s:
            F, G = G, F
            f0, g0 = g0, f0
            r, s = s, r
        scale = g0.coeff(s, 0) / f0.coeff(r, 0)
        G = G - F * Poly2.from_terms({(s - r, 0): scale})


def multiplicity_at_origin(F: Poly2, G: Poly2):
    """Local intersection multiplicity of two (possibly reducible) equations."""
    if F.is_zero or G.is_zero:
        raise ValueError("multiplicity needs two nonzero equations")
    g = poly_gcd(F, G)
    if not g.is_constant() and g.evaluate(0, 0) == 0:
        return math.inf
    return _fulton_at_origin(F, G)


def intersection_multiplicity(C: Curve, D: Curve, p: Point):
    """Local multiplicity of C and D at the rational point p.

    0 off the curves, infinity when a shared component passes through p,
    and the usual finite count otherwise (1 exactly for transverse
    smooth branches).
    """
    x = Poly2.variable("x")
    y = Poly2.variable("y")
    F = C.equation.compose(x + p.x, y + p.y)
    G = D.equation.compose(x + p.x, y + p.y)
    return multiplicity_at_origin(F, G)


def _restrict_x(p: Poly2, x0: Fraction) -> Poly2:
    """p(x0, y) with the y powers moved into the x slot (univariate form)."""
    out = {}
    for j, cj in y_coefficients(p).items():
        v = cj.evaluate(x0, 0)
        if v != 0:
            out[(j, 0)] = v
    return Poly2.from_terms(out)


def _rational_roots_x(p: Poly2) -> tuple[list[Fraction], bool]:
    """Rational roots of a univariate-in-x polynomial plus an
    irrational-factor flag."""
    if p.is_zero:
        raise ValueError("the zero polynomial has every root")
    roots: list[Fraction] = []
    has_irrational = False
    for fac, _ in factor_poly(p):
        if fac.deg_x() == 1:
            roots.append(-fac.coeff(0, 0) / fac.coeff(1, 0))
        elif fac.deg_x() >= 2:
            has_irrational = True
    return sorted(set(roots)), has_irrational


def resultant_y(F: Poly2, G: Poly2) -> Poly2:
    """Resultant eliminating y, as a univariate-in-x polynomial."""
    r = sympy.resultant(_to_sympy(F).as_expr(), _to_sympy(G).as_expr(), _SY)
    return _from_sympy(sympy.Poly(r, _SX, _SY))


def rational_intersection_points(C: Curve, D: Curve) -> tuple[list[Point], bool]:
    """All rational intersection points, plus a flag for detected
    non-rational intersections (resultant factors without rational roots).

    Requires coprime curves (no shared component).
    """
    if not poly_gcd(C.equation, D.equation).is_constant():
        raise ValueError("curves share a component; intersection is not finite")
    ce, de = C.equation, D.equation
    flag = False
    xs: list[Fraction] = []
    if ce.deg_y() == 0 and de.deg_y() == 0:
        return [], False
    if ce.deg_y() == 0 or de.deg_y() == 0:
        vertical = ce if ce.deg_y() == 0 else de
        xs, flag = _rational_roots_x(vertical)
    else:
        res = resultant_y(ce, de)
        if res.is_zero:
            raise ValueError("resultant vanished despite coprime inputs")
        if res.is_constant():
            return [], False
        xs, flag = _rational_roots_x(res)
    points: list[Point] = []
    for x0 in xs:
        cy = _restrict_x(ce, x0)
        dy_ = _restrict_x(de, x0)
        if cy.is_zero and dy_.is_zero:
            continue
        if cy.is_zero:
            common = dy_
        elif dy_.is_zero:
            common = cy
        else:
            common = poly_gcd(cy, dy_)
        if common.is_constant():
            continue
        ys, yflag = _rational_roots_x(common)
        flag = flag or yflag
        for y0 in ys:
            points.append(Point(x0, y0))
    points.sort()
    return points, flag


# -- probes around the fixed point at infinity ----------------------------------

@dataclass(frozen=True)
class PeriodicityProbeReport:
    """Outcome of the meets-indeterminacy periodicity probe.

    meets[k] records whether the closure of the k-th push-forward
    contains the indeterminacy point.  When every step meets it, the
    curve is predicted periodic; flag is set when no period <= K was
    found despite that (either K is too small or something is wrong).
    """

    verdict: str
    meets: tuple[bool, ...]
    curves: tuple[str, ...]
    fail_at: Optional[int] = None
    period: Optional[int] = None
    flag: bool = False
    notes: str = ""


def periodicity_probe_thm13(
    model: FnModel, C: Curve, N: int, K: int
) -> PeriodicityProbeReport:
    """Push C forward N times; if every image closure meets the
    indeterminacy point of the stable model, search for a period <= K.

    Contracted curves fall outside the hypotheses and are reported as
    such rather than pushed through.
    """
    if not model.is_stable:
        raise DmlwbError(
            "periodicity probe needs the model at or above the stability threshold"
        )
    if N < 1 or K < 1:
        raise ValueError("N and K must be at least 1")
    f = model.affine_map()
    meets: list[bool] = []
    trail: list[str] = []
    current = C
    for k in range(N + 1):
        trail.append(str(current))
        hit = closure_meets_indeterminacy(current, model.n)
        meets.append(hit)
        if not hit:
            return PeriodicityProbeReport(
                verdict="hypothesis_fails",
                meets=tuple(meets),
                curves=tuple(trail),
                fail_at=k,
                notes=f"push-forward {k} misses the indeterminacy point; no claim",
            )
        if k == N:
            break
        if contracts_curve(current, f):
            return PeriodicityProbeReport(
                verdict="contracted",
                meets=tuple(meets),
                curves=tuple(trail),
                fail_at=k,
                notes=f"the map contracts push-forward {k}; outside the hypotheses",
            )
        current = push_forward_curve(current, f)
    period = is_periodic_curve(C, f, K)
    if period is not None:
        return PeriodicityProbeReport(
            verdict="consistent_periodic",
            meets=tuple(meets),
            curves=tuple(trail),
            period=period,
        )
    return PeriodicityProbeReport(
        verdict="period_not_found",
        meets=tuple(meets),
        curves=tuple(trail),
        flag=True,
        notes=f"all {N + 1} push-forwards meet the indeterminacy point "
        f"but no period <= {K} was found",
    )


@dataclass(frozen=True)
class DecreasingChainReport:
    """Multiplicity chain a_m = I_Q(f^-m C, f^-(m+1) C) in the chart at Q."""

    status: str
    sequence: tuple[int, ...]
    strictly_decreasing: bool
    fail_at: Optional[int] = None
    notes: str = ""


def decreasing_intersection_experiment(
    model: FnModel, C: Curve, M: int
) -> DecreasingChainReport:
    """Compute the chain of local multiplicities at Q between successive
    pullbacks of C.

    Hypotheses: stable model, C passes through Q, C not fixed.  The
    chain is expected to drop by at least 1 each step while the
    pullbacks keep passing through Q.
    """
    if not model.is_stable:
        raise DmlwbError(
            "the chain experiment needs the model at or above the stability threshold"
        )
    if M < 0:
        raise ValueError("M must be nonnegative")
    f = model.affine_map()
    if not closure_passes_through_Q(C, model.n):
        return DecreasingChainReport(
            status="hypothesis_failed",
            sequence=(),
            strictly_decreasing=True,
            fail_at=0,
            notes="the closure of C does not pass through Q",
        )
    if is_fixed_curve(C, f):
        return DecreasingChainReport(
            status="hypothesis_failed",
            sequence=(),
            strictly_decreasing=True,
            fail_at=0,
            notes="C is fixed; the chain hypotheses exclude fixed curves",
        )
    pullbacks = [C]
    status = "completed"
    fail_at = None
    notes = ""
    for k in range(1, M + 2):
        try:
            nxt = pullback_curve(pullbacks[-1], f)
        except ContractionError as exc:
            status, fail_at = "degenerate", k
            notes = f"pullback {k} degenerates: {exc}"
            break
        pullbacks.append(nxt)
        if not closure_passes_through_Q(nxt, model.n):
            # expected terminal behavior: the chain forces the curve off Q
            status, fail_at = "left_Q", k
            notes = f"pullback {k} no longer passes through Q"
            break
    seq = []
    for m in range(len(pullbacks) - 1):
        a = multiplicity_at_origin(
            fn_chart_equation(pullbacks[m], model.n),
            fn_chart_equation(pullbacks[m + 1], model.n),
        )
        if a == math.inf:
            return DecreasingChainReport(
                status="degenerate",
                sequence=tuple(seq),
                strictly_decreasing=all(b <= x - 1 for x, b in zip(seq, seq[1:])),
                fail_at=m,
                notes="successive pullbacks share a component through Q",
            )
        seq.append(a)
    decreasing = all(b <= x - 1 for x, b in zip(seq, seq[1:]))
    return DecreasingChainReport(
        status=status,
        sequence=tuple(seq),
        strictly_decreasing=decreasing,
        fail_at=fail_at,
        notes=notes,
    )


def prop52_flag(model: FnModel, C: Curve, K: int) -> bool:
    """Flag a contradiction: a curve through Q that is periodic with
    period >= 2 under a stable model.

    The supporting result says periodic curves through Q must already
    be fixed, so True here means something is inconsistent.
    """
    if not model.is_stable:
        raise DmlwbError("the flag is only meaningful for a stable model")
    if not closure_passes_through_Q(C, model.n):
        return False
    period = is_periodic_curve(C, model.affine_map(), K)
    return period is not None and period >= 2
