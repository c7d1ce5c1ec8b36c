"""Ternary expansions of rationals in [0, 1] and their digit statistics.

Every rational has an eventually periodic base-3 expansion, so a point is
stored as a finite preperiod followed by a repeating period. Where a point
has two expansions (the triadic rationals j/3^n), the one ending in all 0s
is kept; the single exception is x = 1, stored as 0.(2).
"""

from __future__ import annotations

import math
import numbers
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, ParseError

__all__ = [
    "EventuallyPeriodicTernary",
    "as_rational",
    "digit_one_frequency",
    "expand",
    "format_digits",
    "in_cantor",
    "normalize_periodic",
    "ones_count_prefix",
    "parse_digits",
    "run_length",
    "total_ones",
]


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    m = len(word)
    for d in range(1, m + 1):
        if m % d == 0 and word[:d] * (m // d) == word:
            return word[:d]
    return word


def normalize_periodic(preperiod, period):
    """Reduce ``preperiod + (period)^inf`` to its shortest representation.

    The period is replaced by its primitive root and trailing preperiod
    symbols are rotated into the period while they match its last symbol.
    An empty period is read as a finite word padded with zeros.
    """
    pre = tuple(preperiod)
    per = tuple(period) or (0,)
    per = _primitive_root(per)
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = (per[-1],) + per[:-1]
    return pre, per


def as_rational(x) -> Fraction:
    """Coerce an exact rational input; floats are refused on purpose."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise DomainError(f"expected an exact rational, got {x!r}")
    if isinstance(x, numbers.Rational):
        return Fraction(x)
    raise DomainError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class EventuallyPeriodicTernary:
    """The expansion ``0.preperiod(period)`` of a rational in [0, 1].

    Instances are always normalized, so two instances compare equal exactly
    when they encode the same number.
    """

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self):
        pre, per = tuple(self.preperiod), tuple(self.period)
        if any(d not in (0, 1, 2) for d in pre + per):
            raise DomainError("ternary digits must be 0, 1 or 2")
        pre, per = normalize_periodic(pre, per)
        if per == (2,):
            # 0.w(2) is the triadic point 0.w' with the last non-2 digit bumped,
            # unless w is all 2s, which is x = 1.
            keep = len(pre)
            while keep and pre[keep - 1] == 2:
                keep -= 1
            if keep == 0:
                pre = ()
            else:
                pre, per = normalize_periodic(pre[: keep - 1] + (pre[keep - 1] + 1,), (0,))
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    # -- digits -----------------------------------------------------------

    def digit(self, n: int) -> int:
        """The n-th digit, counting from 1."""
        if n < 1:
            raise IndexError("digits are indexed from 1")
        k = len(self.preperiod)
        if n <= k:
            return self.preperiod[n - 1]
        return self.period[(n - k - 1) % len(self.period)]

    def digits(self) -> Iterator[int]:
        yield from self.preperiod
        while True:
            yield from self.period

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self.digit(j) for j in range(1, n + 1))

    @property
    def value(self) -> Fraction:
        k, m = len(self.preperiod), len(self.period)
        head = int("".join(map(str, self.preperiod)) or "0", 3)
        cycle = int("".join(map(str, self.period)), 3)
        return (head + Fraction(cycle, 3**m - 1)) / 3**k

    def __str__(self):
        return format_digits(self)

    # -- statistics -------------------------------------------------------

    def ones_count_prefix(self, n: int) -> int:
        """i(n): the number of 1s among the first n digits."""
        if n < 0:
            raise ValueError("n must be nonnegative")
        k, m = len(self.preperiod), len(self.period)
        if n <= k:
            return self.preperiod[:n].count(1)
        full, rest = divmod(n - k, m)
        return self.preperiod.count(1) + full * self.period.count(1) + self.period[:rest].count(1)

    def total_ones(self):
        """N_1(x), or ``math.inf`` when the period contains a 1."""
        if 1 in self.period:
            return math.inf
        return self.preperiod.count(1)

    def run_length(self, n: int, d: int):
        """Length of the run of digit ``d`` starting at digit n + 1.

        ``math.inf`` when every digit from position n + 1 on equals ``d``.
        """
        if n < 0:
            raise ValueError("n must be nonnegative")
        k = len(self.preperiod)
        if self.period == (d,) and all(c == d for c in self.preperiod[n:]):
            return math.inf
        r = 0
        # terminates within one preperiod plus one period, by the check above
        while self.digit(n + r + 1) == d:
            r += 1
        return r

    def digit_one_frequency(self) -> Fraction:
        """Limiting frequency of the digit 1 (limsup and liminf agree)."""
        return Fraction(self.period.count(1), len(self.period))

    def in_cantor(self) -> bool:
        return 1 not in self.preperiod and 1 not in self.period

    def is_triadic(self) -> bool:
        """True for the points j/3^n, including 0 and 1."""
        return self.period == (0,) or (self.preperiod == () and self.period == (2,))

    def complement(self) -> EventuallyPeriodicTernary:
        """Expansion of 1 - x (digits 0 and 2 swapped, then renormalized)."""
        swap = (2, 1, 0)
        return EventuallyPeriodicTernary(
            tuple(swap[d] for d in self.preperiod), tuple(swap[d] for d in self.period)
        )


def expand(x) -> EventuallyPeriodicTernary:
    """Ternary expansion of a rational ``x`` in [0, 1], by long division."""
    x = as_rational(x)
    if not 0 <= x <= 1:
        raise DomainError(f"x = {x} lies outside [0, 1]")
    if x == 1:
        return EventuallyPeriodicTernary((), (2,))
    p, q = x.numerator, x.denominator
    digits: list[int] = []
    seen: dict[int, int] = {}
    r = p
    while r not in seen:
        seen[r] = len(digits)
        d, r = divmod(3 * r, q)
        digits.append(d)
    start = seen[r]
    return EventuallyPeriodicTernary(tuple(digits[:start]), tuple(digits[start:]))


_DIGIT_STRING = re.compile(r"0\.([012]*)(?:\(([012]+)\))?")


def parse_digits(text: str) -> EventuallyPeriodicTernary:
    """Parse ``"0.d1...dk(p1...pm)"``; ``"1"`` denotes the number one.

    An unparenthesized string terminates, i.e. its period is ``0``.
    """
    s = text.strip()
    if s == "1":
        return EventuallyPeriodicTernary((), (2,))
    m = _DIGIT_STRING.fullmatch(s)
    if m is None:
        raise ParseError(f"malformed ternary digit string {text!r}", text, _first_bad(s))
    pre = tuple(int(c) for c in m.group(1))
    per = tuple(int(c) for c in m.group(2)) if m.group(2) else (0,)
    return EventuallyPeriodicTernary(pre, per)


def _first_bad(s: str, alphabet: str = "012") -> int:
    if not s.startswith("0."):
        return 0 if not s.startswith("0") else 1
    i = 2
    while i < len(s) and s[i] in alphabet:
        i += 1
    if i == len(s):
        return i
    if s[i] != "(":
        return i
    j = i + 1
    while j < len(s) and s[j] in alphabet:
        j += 1
    if j == i + 1 or j == len(s) or s[j] != ")":
        return j
    return j + 1


def format_digits(t: EventuallyPeriodicTernary) -> str:
    if t.preperiod == () and t.period == (2,):
        return "1"
    head = "".join(map(str, t.preperiod))
    if t.period == (0,):
        return "0." + (head or "0")
    return "0." + head + "(" + "".join(map(str, t.period)) + ")"


# function forms of the digit statistics


def ones_count_prefix(t: EventuallyPeriodicTernary, n: int) -> int:
    """i(n): number of 1s among the first n digits."""
    return t.ones_count_prefix(n)


def total_ones(t: EventuallyPeriodicTernary):
    """N_1 = sup_n i(n); math.inf when the period contains a 1."""
    return t.total_ones()


def run_length(t: EventuallyPeriodicTernary, n: int, d: int):
    return t.run_length(n, d)


def digit_one_frequency(t: EventuallyPeriodicTernary) -> Fraction:
    return t.digit_one_frequency()


def in_cantor(t: EventuallyPeriodicTernary) -> bool:
    return t.in_cantor()
