"""Derivative behaviour of F_a at rational points.

The decision procedure works on the exact ternary expansion of x and the
exact parameter a, so every branch is decided without floating point:

* a = 1/3: F_a is the identity.
* triadic x: the one-sided slopes of the approximants settle into one of
  four patterns (cusp, cliff, steep, flat) depending on the range of a.
* a = 1/2 (the Cantor function): a digit 1 puts x inside a removed
  interval; otherwise x has bounded digit runs and F' = +inf.
* otherwise the slopes f_n^+(x) grow or decay geometrically along the
  period, and for a > 1/2 a steep point must additionally pass the two
  tail conditions (one per side), each a polynomial inequality in a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import DomainError, PreconditionError
from .numerics import A_HAT, DEFAULT_TOL, RHO, Bracket, Constant, Polynomial, as_tolerance
from .selfaffine import Param, as_param
from .ternary import EventuallyPeriodicTernary, expand, format_digits

__all__ = [
    "CriticalParameter",
    "DerivClass",
    "Regime",
    "Rule",
    "Side",
    "SideCondition",
    "Tag",
    "Verdict",
    "classification_report",
    "classify",
    "critical_parameter",
    "dinf_membership_regime",
    "endpoint_behavior",
    "side_condition",
]

THIRD = Fraction(1, 3)
HALF = Fraction(1, 2)


class Tag(str, Enum):
    ZERO = "Zero"
    PLUS_INFINITY = "PlusInfinity"
    MINUS_INFINITY = "MinusInfinity"
    CUSP_UP = "CuspUp"
    CUSP_DOWN = "CuspDown"
    CLIFF_LEFT = "CliffLeft"
    CLIFF_RIGHT = "CliffRight"
    FINITE_NONZERO = "FiniteNonzero"
    NOT_DIFFERENTIABLE = "NotDifferentiable"
    UNKNOWN = "Unknown"


class Rule(str, Enum):
    IDENTITY = "identity_map"
    ENDPOINT = "endpoint_slopes"
    TRIADIC_CUSP = "triadic_opposite_infinite_slopes"
    TRIADIC_GAP = "triadic_inside_removed_interval"
    TRIADIC_CLIFF = "triadic_cantor_gap_endpoint"
    TRIADIC_STEEP = "triadic_increasing_steep"
    TRIADIC_FLAT = "triadic_flat"
    CANTOR_GAP = "inside_removed_interval"
    CANTOR_BOUNDED_RUNS = "cantor_point_bounded_runs"
    SLOPES_VANISH = "approximant_slopes_vanish"
    SLOPES_DIVERGE = "approximant_slopes_diverge_increasing"
    SLOPES_BOUNDED = "approximant_slopes_bounded_away_from_zero_and_infinity"
    INFINITELY_MANY_ONES = "infinitely_many_ones"
    TAIL_CONDITIONS_HOLD = "tail_conditions_hold"
    TAIL_CONDITION_FAILS = "tail_condition_fails"
    TAIL_CONDITION_BOUNDARY = "tail_condition_boundary"


_INFINITE = {Tag.PLUS_INFINITY, Tag.MINUS_INFINITY}
_ONE_SIDED = {Tag.CUSP_UP, Tag.CUSP_DOWN, Tag.CLIFF_LEFT, Tag.CLIFF_RIGHT}


@dataclass(frozen=True)
class DerivClass:
    """Outcome of a classification.

    CuspUp: F+ = -F- = +inf. CuspDown: F+ = -F- = -inf.
    CliffRight: F+ = +inf, F- = 0. CliffLeft: F- = +inf, F+ = 0.
    """

    tag: Tag
    rule: Rule
    value: Fraction | None = None

    @property
    def is_infinite(self) -> bool:
        """F'(x) exists and is +inf or -inf."""
        return self.tag in _INFINITE

    @property
    def has_derivative(self) -> bool | None:
        if self.tag is Tag.UNKNOWN:
            return None
        return self.tag in _INFINITE or self.tag in (Tag.ZERO, Tag.FINITE_NONZERO)

    def mirrored(self) -> DerivClass:
        """The class expected at 1 - x (F(1-x) = 1 - F(x) swaps one-sided slopes)."""
        swap = {
            Tag.CUSP_UP: Tag.CUSP_DOWN,
            Tag.CUSP_DOWN: Tag.CUSP_UP,
            Tag.CLIFF_LEFT: Tag.CLIFF_RIGHT,
            Tag.CLIFF_RIGHT: Tag.CLIFF_LEFT,
        }
        return DerivClass(swap.get(self.tag, self.tag), self.rule, self.value)


class Side(str, Enum):
    RIGHT = "Right"
    LEFT = "Left"


class Verdict(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    BOUNDARY = "Boundary"


def _largest_rotation(word: tuple[int, ...]) -> tuple[int, ...]:
    return max(word[i:] + word[:i] for i in range(len(word)))


def _tail_polynomial(period: tuple[int, ...]) -> tuple[str, Polynomial]:
    zeta = _largest_rotation(period)
    eta = tuple(d // 2 for d in zeta)
    m = len(eta)
    if m > 1 and eta[-1] != 0:
        raise AssertionError("largest rotation of a 0/2 period must end in 0")
    terms = {j: eta[j - 1] for j in range(1, m)}
    terms[m] = 1
    return "".join(map(str, eta)), Polynomial.from_terms(terms)


@dataclass(frozen=True)
class SideCondition:
    """The polynomial test for an infinite one-sided derivative at a steep point.

    ``eta`` is the largest cyclic rotation of the 0/2 tail period with 2
    mapped to 1. The one-sided derivative on ``side`` is infinite iff
    ``polynomial(a) < 1``.
    """

    side: Side
    m: int
    eta: str
    polynomial: Polynomial
    value: Fraction
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "side": self.side.value,
            "eta": self.eta,
            "polynomial": self.polynomial.format(),
            "value": str(self.value),
            "verdict": self.verdict.value,
        }


def _point(x) -> EventuallyPeriodicTernary:
    return x if isinstance(x, EventuallyPeriodicTernary) else expand(x)


def side_condition(a, x, side: Side | str = Side.RIGHT) -> SideCondition:
    """Evaluate the tail condition for one side of x at parameter a.

    The left side is the right side of 1 - x. Equality ``P(a) = 1`` counts
    as failing: the tail sum then reaches 1 once per period.
    """
    a = as_param(a).a
    side = Side(side)
    t = _point(x)
    if t.total_ones() == math.inf:
        raise PreconditionError("the tail condition needs finitely many digits 1")
    src = t if side is Side.RIGHT else t.complement()
    eta, poly = _tail_polynomial(src.period)
    value = poly(a)
    verdict = Verdict.HOLDS if value < 1 else Verdict.FAILS
    return SideCondition(side, len(eta), eta, poly, value, verdict)


@dataclass(frozen=True)
class CriticalParameter:
    """Supremum a* of the parameters a > 1/2 at which F_a'(x) is infinite.

    ``degenerate`` marks triadic x, where both one-sided derivatives are
    infinite for every a in (1/2, 1) and no finite a* exists.
    """

    x: EventuallyPeriodicTernary
    bracket: Bracket | None
    binding: str | None
    right: Polynomial
    left: Polynomial
    degenerate: bool = False

    @property
    def a_star(self) -> float | None:
        return None if self.bracket is None else float(self.bracket.mid)

    def to_dict(self) -> dict:
        return {
            "x": format_digits(self.x),
            "degenerate": self.degenerate,
            "a_star": self.a_star,
            "bracket": None if self.bracket is None else self.bracket.to_dict(),
            "binding_side": self.binding,
            "right_polynomial": self.right.format(),
            "left_polynomial": self.left.format(),
        }


def critical_parameter(x, tol=DEFAULT_TOL) -> CriticalParameter:
    """Bracket the smaller of the two tail-polynomial roots.

    Below the returned root both side conditions hold; above it the binding
    side fails. Both polynomials are increasing on (0, 1), so bisection on
    [0, 1] is certified.
    """
    t = _point(x)
    if t.total_ones() == math.inf:
        raise PreconditionError("x has infinitely many digits 1; no tail condition applies")
    _, right = _tail_polynomial(t.period)
    _, left = _tail_polynomial(t.complement().period)
    if t.is_triadic():
        return CriticalParameter(t, None, None, right, left, degenerate=True)
    tol = as_tolerance(tol)
    roots = {
        side: Constant(f"a_star_{side}", poly - 1, Fraction(0), Fraction(1))
        for side, poly in (("Right", right), ("Left", left))
    }
    if right == left:
        return CriticalParameter(t, roots["Right"].bracket(tol), "Both", right, left)
    fine = tol
    while fine > Fraction(1, 10**40):
        br, bl = roots["Right"].bracket(fine), roots["Left"].bracket(fine)
        if br.disjoint(bl):
            if br.hi < bl.lo:
                return CriticalParameter(t, roots["Right"].bracket(tol), "Right", right, left)
            return CriticalParameter(t, roots["Left"].bracket(tol), "Left", right, left)
        fine /= 2**20
    return CriticalParameter(t, roots["Right"].bracket(tol), "Both", right, left)


def _slope_growth(a: Fraction, t: EventuallyPeriodicTernary) -> int:
    """Sign of the per-digit log growth of |f_n^+(x)| along the period.

    Decided exactly: over one period the slope magnitude is multiplied by
    3^m a^(m-i) |1-2a|^i, compared here against 1.
    """
    m = len(t.period)
    i = t.period.count(1)
    g = 3**m * a ** (m - i) * abs(1 - 2 * a) ** i
    return (g > 1) - (g < 1)


def _classify_triadic(a: Fraction, t: EventuallyPeriodicTernary) -> DerivClass:
    if a > HALF:
        tag = Tag.CUSP_UP if t.total_ones() % 2 == 0 else Tag.CUSP_DOWN
        return DerivClass(tag, Rule.TRIADIC_CUSP)
    if a == HALF:
        # x = 0.w d with d its last nonzero digit
        word = t.preperiod
        if 1 in word[:-1]:
            return DerivClass(Tag.ZERO, Rule.TRIADIC_GAP)
        if word[-1] == 1:
            return DerivClass(Tag.CLIFF_LEFT, Rule.TRIADIC_CLIFF)
        return DerivClass(Tag.CLIFF_RIGHT, Rule.TRIADIC_CLIFF)
    if a > THIRD:
        return DerivClass(Tag.PLUS_INFINITY, Rule.TRIADIC_STEEP)
    return DerivClass(Tag.ZERO, Rule.TRIADIC_FLAT)


def classify(a, x) -> DerivClass:
    """Classify F_a'(x) for rational x in (0, 1)."""
    a = as_param(a).a
    t = _point(x)
    if not 0 < t.value < 1:
        raise DomainError("classify needs 0 < x < 1; use endpoint_behavior at 0 and 1")
    if a == THIRD:
        return DerivClass(Tag.FINITE_NONZERO, Rule.IDENTITY, Fraction(1))
    if t.is_triadic():
        return _classify_triadic(a, t)
    if a == HALF:
        if t.in_cantor():
            return DerivClass(Tag.PLUS_INFINITY, Rule.CANTOR_BOUNDED_RUNS)
        return DerivClass(Tag.ZERO, Rule.CANTOR_GAP)
    s = _slope_growth(a, t)
    if s < 0:
        return DerivClass(Tag.ZERO, Rule.SLOPES_VANISH)
    if s == 0:
        return DerivClass(Tag.NOT_DIFFERENTIABLE, Rule.SLOPES_BOUNDED)
    if a < HALF:
        return DerivClass(Tag.PLUS_INFINITY, Rule.SLOPES_DIVERGE)
    n1 = t.total_ones()
    if n1 == math.inf:
        return DerivClass(Tag.NOT_DIFFERENTIABLE, Rule.INFINITELY_MANY_ONES)
    verdicts = [side_condition(a, t, side).verdict for side in Side]
    if Verdict.FAILS in verdicts:
        return DerivClass(Tag.NOT_DIFFERENTIABLE, Rule.TAIL_CONDITION_FAILS)
    if Verdict.BOUNDARY in verdicts:
        return DerivClass(Tag.UNKNOWN, Rule.TAIL_CONDITION_BOUNDARY)
    tag = Tag.PLUS_INFINITY if n1 % 2 == 0 else Tag.MINUS_INFINITY
    return DerivClass(tag, Rule.TAIL_CONDITIONS_HOLD)


@dataclass(frozen=True)
class EndpointBehavior:
    """F_a^+(0) and F_a^-(1); the two always agree."""

    at0: DerivClass
    at1: DerivClass


def endpoint_behavior(a) -> EndpointBehavior:
    a = as_param(a).a
    if a == THIRD:
        c = DerivClass(Tag.FINITE_NONZERO, Rule.IDENTITY, Fraction(1))
    elif a > THIRD:
        c = DerivClass(Tag.PLUS_INFINITY, Rule.ENDPOINT)
    else:
        c = DerivClass(Tag.ZERO, Rule.ENDPOINT)
    return EndpointBehavior(c, c)


class Regime(str, Enum):
    EMPTY = "Empty"
    COUNTABLE_RATIONAL = "CountableRational"
    UNCOUNTABLE_POSITIVE_DIM = "UncountablePositiveDim"
    CRITICAL_UNKNOWN = "CriticalUnknown"


def dinf_membership_regime(a) -> Regime:
    """Size of the infinite-derivative set for 1/2 < a < 1.

    Comparison with rho is exact. The reciprocal Komornik-Loreti constant is
    transcendental, so a rational a never equals it, but parameters within
    ``eps`` of its bracket are reported as critical.
    """
    p = as_param(a)
    a = p.a
    if a <= HALF:
        raise DomainError("the regime classification covers 1/2 < a < 1")
    if RHO.compare(a) >= 0:
        return Regime.EMPTY
    eps = Fraction(repr(p.eps))
    b = A_HAT.bracket(min(eps, DEFAULT_TOL))
    if b.lo - eps <= a <= b.hi + eps:
        return Regime.CRITICAL_UNKNOWN
    return Regime.COUNTABLE_RATIONAL if a > b.hi else Regime.UNCOUNTABLE_POSITIVE_DIM


def classification_report(a, x) -> dict:
    """JSON-ready summary of ``classify`` with its supporting evidence."""
    p = as_param(a)
    t = _point(x)
    out = {"x": format_digits(t), "x_value": str(t.value), "a": str(p.a)}
    if t.value in (0, 1):
        e = endpoint_behavior(p)
        c = e.at0 if t.value == 0 else e.at1
        out.update(tag=c.tag.value, justification=c.rule.value,
                   side_conditions=[], critical_parameter=None)
        return out
    c = classify(p, t)
    out.update(tag=c.tag.value, justification=c.rule.value)
    if c.value is not None:
        out["value"] = str(c.value)
    sides, crit = [], None
    if t.total_ones() != math.inf:
        sides = [side_condition(p, t, s).to_dict() for s in Side]
        crit = critical_parameter(t).to_dict()
    out["side_conditions"] = sides
    out["critical_parameter"] = crit
    if p.a > HALF:
        out["regime"] = dinf_membership_regime(p).value
    return out
