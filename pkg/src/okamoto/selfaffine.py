"""Okamoto's self-affine functions F_a and their piecewise-linear approximants.

``f_n`` is linear on every interval [k/3^n, (k+1)/3^n]; each refinement step
splits a segment into three whose rises are a, 1 - 2a and a times the rise
of the parent. ``F_a = lim f_n`` is evaluated at rationals from the digit
series

    F_a(x) = sum_k  m(xi_1) ... m(xi_{k-1}) q(xi_k),

with m(0) = m(2) = a, m(1) = 1 - 2a and q(0) = 0, q(1) = a, q(2) = 1 - a.
Since the expansion of a rational is eventually periodic the series is
summed in closed form: the periodic tail is a geometric series.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, ResourceError
from .ternary import EventuallyPeriodicTernary, as_rational, expand

__all__ = [
    "DEFAULT_DEPTH_CAP",
    "GraphSample",
    "Param",
    "as_param",
    "evaluate",
    "fn_eval",
    "fn_slope_right",
    "sample_graph",
    "sup_ratio",
]

DEFAULT_DEPTH_CAP = 12


@dataclass(frozen=True)
class Param:
    """The parameter a in (0, 1), held exactly.

    ``eps`` is only consulted when a decision compares ``a`` against a
    threshold that cannot be settled exactly.
    """

    a: Fraction
    eps: float = 1e-12

    def __post_init__(self):
        a = as_rational(self.a)
        if not 0 < a < 1:
            raise DomainError(f"parameter a = {a} must lie in (0, 1)")
        if not self.eps > 0:
            raise DomainError("eps must be positive")
        object.__setattr__(self, "a", a)

    def __str__(self):
        return str(self.a)


def as_param(a) -> Param:
    return a if isinstance(a, Param) else Param(a)


def _as_point(x) -> EventuallyPeriodicTernary:
    if isinstance(x, EventuallyPeriodicTernary):
        return x
    return expand(x)


def _multiplier(a: Fraction, digit: int) -> Fraction:
    return 1 - 2 * a if digit == 1 else a


def _increment(a: Fraction, digit: int) -> Fraction:
    return (Fraction(0), a, 1 - a)[digit]


def sup_ratio(a) -> Fraction:
    """max(a, |1 - 2a|): the uniform contraction of the approximants."""
    a = as_param(a).a
    return max(a, abs(1 - 2 * a))


def fn_eval(a, n: int, x) -> Fraction:
    """Exact value of the n-th approximant f_n at a rational x in [0, 1].

    Uses the self-affinity of the construction directly: on [j/3, (j+1)/3],
    f_n(x) = base_j + scale_j * f_{n-1}(3x - j).
    """
    a = as_param(a).a
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x = {x} lies outside [0, 1]")
    if n < 0:
        raise DomainError("n must be nonnegative")
    offset, scale = Fraction(0), Fraction(1)
    for _ in range(n):
        j = min(int(3 * x), 2)
        offset += scale * _increment(a, j)
        scale *= _multiplier(a, j)
        x = 3 * x - j
    return offset + scale * x


def fn_slope_right(a, n: int, x) -> Fraction:
    """Right-hand slope of f_n at x in [0, 1): 3^n a^(n - i(n)) (1 - 2a)^i(n)."""
    a = as_param(a).a
    t = _as_point(x)
    if t.value >= 1:
        raise DomainError("the right-hand slope needs x < 1")
    i = t.ones_count_prefix(n)
    # Fraction(0) ** 0 == 1, the convention wanted here
    return 3**n * a ** (n - i) * (1 - 2 * a) ** i


def _series(a: Fraction, word) -> tuple[Fraction, Fraction]:
    """Partial sum over ``word`` and the product of its multipliers."""
    total, prod = Fraction(0), Fraction(1)
    for d in word:
        total += prod * _increment(a, d)
        prod *= _multiplier(a, d)
    return total, prod


def evaluate(a, x, *, tol=None) -> Fraction:
    """F_a(x) at a rational point (or a ternary expansion).

    With ``tol=None`` the value is exact. Otherwise the series is truncated
    after n digits, where max(a, |1-2a|)^n <= tol; the remainder is the
    tail product times a value of F_a, so the truncation error is at most tol.
    """
    a = as_param(a).a
    t = _as_point(x)
    if tol is None:
        head, c = _series(a, t.preperiod)
        cycle, m = _series(a, t.period)
        return head + c * cycle / (1 - m)
    tol = Fraction(repr(tol)) if isinstance(tol, float) else Fraction(tol)
    if tol <= 0:
        raise DomainError("tol must be positive")
    r, n, bound = sup_ratio(a), 0, Fraction(1)
    while bound > tol:
        bound *= r
        n += 1
    total, _ = _series(a, t.prefix(n))
    return total


@dataclass(frozen=True)
class GraphSample:
    """All breakpoints (k/3^n, f_n(k/3^n)) of the approximant f_n."""

    depth: int
    points: tuple[tuple[Fraction, Fraction], ...]

    def slopes(self) -> list[Fraction]:
        h = Fraction(1, 3**self.depth)
        return [(y1 - y0) / h for (_, y0), (_, y1) in zip(self.points, self.points[1:])]

    def to_csv(self, exact: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y"])
        for x, y in self.points:
            w.writerow([str(x), str(y)] if exact else [repr(float(x)), repr(float(y))])
        return buf.getvalue()

    def to_json(self, exact: bool = True) -> str:
        enc = str if exact else float
        return json.dumps([[enc(x), enc(y)] for x, y in self.points])


def sample_graph(a, n: int, cap: int = DEFAULT_DEPTH_CAP) -> GraphSample:
    """Breakpoints of f_n, built by n rounds of segment refinement."""
    a = as_param(a).a
    if n < 1:
        raise DomainError("depth must be a positive integer")
    if n > cap:
        raise ResourceError(f"depth {n} exceeds the cap {cap} ({3**n + 1} points)")
    ys = [Fraction(0), Fraction(1)]
    for _ in range(n):
        nxt = []
        for y0, y1 in zip(ys, ys[1:]):
            rise = y1 - y0
            nxt += [y0, y0 + a * rise, y0 + (1 - a) * rise]
        nxt.append(ys[-1])
        ys = nxt
    step = Fraction(1, 3**n)
    return GraphSample(n, tuple((k * step, y) for k, y in enumerate(ys)))
