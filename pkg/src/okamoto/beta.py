"""Binary beta-expansions for 1 < beta = 1/lam < 2.

The set U_lam of sequences w with Pi_lam(s^k w) < 1 and Pi_lam(s^k w-bar) < 1
for every shift k is decided lexicographically: both shift orbits must stay
strictly below the quasi-greedy expansion d of 1.

``lam`` may be a ``Fraction`` (or ``Param``) or an ``AlgebraicReal`` from
``numerics.number_field``. For algebraic lam such as the multinacci numbers
the remainder orbit of the greedy algorithm can repeat, and d is an exact
eventually periodic word. For a rational non-integer base it never does:
writing lam = p/q in lowest terms, the k-th remainder has denominator
exactly p^k. There d is produced lazily, digit by digit, and comparisons
against it stop at the first differing digit (which exists whenever the
other side is eventually periodic) or at a depth cap.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .errors import DomainError, ParseError, RegimeError, ResourceError
from .numerics import (
    A_HAT,
    DEFAULT_TOL,
    RHO,
    AlgebraicReal,
    Bracket,
    a_hat_n_constant,
    as_tolerance,
    multinacci_constant,
    number_field,
)
from .selfaffine import Param
from .ternary import EventuallyPeriodicTernary, as_rational, normalize_periodic

__all__ = [
    "BinaryEPSeq",
    "Membership",
    "QuasiGreedyExpansion",
    "UniqueVerdict",
    "a_hat_n",
    "countable_regime_tails",
    "greedy_expansion",
    "greedy_expansion_of_one",
    "is_self_admissible",
    "is_unique_expansion",
    "komornik_loreti",
    "lazy_expansion",
    "multinacci",
    "multinacci_real",
    "pi_lambda",
    "quasi_greedy_digits",
    "thue_morse",
]

DEFAULT_COMPARE_DEPTH = 4096
_TAIL_SEARCH_CAP = 14


@dataclass(frozen=True)
class BinaryEPSeq:
    """An eventually periodic 0/1 sequence ``preperiod (period)^inf``.

    An empty period means a finite word padded with zeros.
    """

    preperiod: tuple[int, ...] = ()
    period: tuple[int, ...] = (0,)

    def __post_init__(self):
        pre, per = tuple(self.preperiod), tuple(self.period)
        if any(b not in (0, 1) for b in pre + per):
            raise DomainError("binary digits must be 0 or 1")
        pre, per = normalize_periodic(pre, per)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text: str) -> BinaryEPSeq:
        """Parse ``"w1...wk(p1...pm)"``; a bare word is padded with zeros."""
        s = text.strip()
        m = _BINARY.fullmatch(s)
        if m is None or not (m.group(1) or m.group(2)):
            pos = 0
            while pos < len(s) and s[pos] in "01":
                pos += 1
            raise ParseError(f"malformed binary sequence {text!r}", text, pos)
        return cls(tuple(map(int, m.group(1))), tuple(map(int, m.group(2) or "0")))

    def __str__(self):
        pre = "".join(map(str, self.preperiod))
        if self.period == (0,) and pre:
            return pre
        return pre + "(" + "".join(map(str, self.period)) + ")"

    def digit(self, n: int) -> int:
        """The n-th symbol, counting from 1."""
        if n < 1:
            raise IndexError("symbols are indexed from 1")
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

    def reflect(self) -> BinaryEPSeq:
        return BinaryEPSeq(tuple(1 - b for b in self.preperiod), tuple(1 - b for b in self.period))

    def shift(self, k: int = 1) -> BinaryEPSeq:
        if k < 0:
            raise ValueError("shift must be nonnegative")
        pre, per = self.preperiod, self.period
        if k <= len(pre):
            return BinaryEPSeq(pre[k:], per)
        r = (k - len(pre)) % len(per)
        return BinaryEPSeq((), per[r:] + per[:r])

    def shifts(self) -> list[BinaryEPSeq]:
        """Every distinct element of the shift orbit, s^0 included."""
        return [self.shift(k) for k in range(len(self.preperiod) + len(self.period))]

    def to_ternary(self) -> EventuallyPeriodicTernary:
        """Phi(w) = 2 Pi_{1/3}(w): the Cantor-set point with digits 2w."""
        return EventuallyPeriodicTernary(
            tuple(2 * b for b in self.preperiod), tuple(2 * b for b in self.period)
        )

    def compare(self, other: BinaryEPSeq) -> int:
        """Lexicographic sign of self - other, decided exactly."""
        n = max(len(self.preperiod), len(other.preperiod)) + math.lcm(
            len(self.period), len(other.period)
        )
        a, b = self.prefix(n), other.prefix(n)
        return (a > b) - (a < b)


_BINARY = re.compile(r"([01]*)(?:\(([01]+)\))?")


def _as_lambda(lam):
    if isinstance(lam, AlgebraicReal):
        return lam
    if isinstance(lam, Param):
        return lam.a
    return as_rational(lam)


def _check_base(lam):
    if not (Fraction(1, 2) < lam < 1):
        raise DomainError("lam must lie in (1/2, 1), i.e. 1 < beta < 2")


def pi_lambda(lam, w: BinaryEPSeq):
    """Pi_lam(w) = sum w_n lam^n, summed in closed form over the period."""
    lam = _as_lambda(lam)
    if not 0 < lam < 1:
        raise DomainError("lam must lie in (0, 1)")

    def word_value(word):
        total = 0 * lam
        for j, b in enumerate(word, 1):
            if b:
                total = total + lam**j
        return total

    k, m = len(w.preperiod), len(w.period)
    return word_value(w.preperiod) + lam**k * word_value(w.period) / (1 - lam**m)


# -- quasi-greedy expansion of 1 --------------------------------------------


class _DigitStream:
    """Digits of the quasi-greedy expansion of 1, extended on demand.

    d_n = 1 iff beta * r_{n-1} > 1, with r_0 = 1; the strict inequality is
    what yields the quasi-greedy (infinite) expansion directly.
    """

    def __init__(self, lam):
        self.lam = lam
        self.digits: list[int] = []
        self.period_start: int | None = None
        self._lock = threading.Lock()
        if isinstance(lam, AlgebraicReal):
            self._beta = lam.inverse()
            self._r = AlgebraicReal(lam.field, [1])
            self._seen = {self._r: 0}
        else:
            # lam = p/q; remainder r_n = num / p^n kept as integers
            self._p, self._q = lam.numerator, lam.denominator
            self._num, self._pow = 1, 1

    @property
    def periodic(self) -> bool:
        return self.period_start is not None

    def _step(self):
        if isinstance(self.lam, AlgebraicReal):
            t = self._beta * self._r
            d = 1 if t > 1 else 0
            self._r = t - d
            self.digits.append(d)
            if self._r in self._seen:
                self.period_start = self._seen[self._r]
            else:
                self._seen[self._r] = len(self.digits)
        else:
            self._pow *= self._p
            t = self._q * self._num
            d = 1 if t > self._pow else 0
            self._num = t - d * self._pow
            self.digits.append(d)

    def ensure(self, n: int) -> None:
        if len(self.digits) >= n or self.periodic:
            return
        with self._lock:
            while len(self.digits) < n and not self.periodic:
                self._step()

    def digit(self, n: int) -> int:
        self.ensure(n)
        if n <= len(self.digits):
            return self.digits[n - 1]
        s = self.period_start
        per = len(self.digits) - s
        return self.digits[s + (n - s - 1) % per]

    def prefix(self, n: int) -> tuple[int, ...]:
        self.ensure(n)
        return tuple(self.digit(j) for j in range(1, n + 1))

    def sequence(self) -> BinaryEPSeq | None:
        if not self.periodic:
            return None
        s = self.period_start
        return BinaryEPSeq(tuple(self.digits[:s]), tuple(self.digits[s:]))


_streams: dict = {}
_streams_lock = threading.Lock()


def quasi_greedy_digits(lam) -> _DigitStream:
    """Shared lazily-extended digit stream for the quasi-greedy d(lam)."""
    lam = _as_lambda(lam)
    _check_base(lam)
    key = (id(lam.field), lam.coeffs) if isinstance(lam, AlgebraicReal) else lam
    with _streams_lock:
        stream = _streams.get(key)
        if stream is None:
            stream = _streams[key] = _DigitStream(lam)
    return stream


@dataclass(frozen=True)
class QuasiGreedyExpansion:
    """d = (d_1, d_2, ...), the quasi-greedy expansion of 1 in base 1/lam.

    ``sequence`` is the exact eventually periodic d when a remainder cycle
    was found within ``depth`` digits; otherwise ``exact`` is False and only
    ``prefix`` is known.
    """

    lam: object
    prefix: tuple[int, ...]
    sequence: BinaryEPSeq | None
    depth: int

    @property
    def exact(self) -> bool:
        return self.sequence is not None

    @property
    def beta(self):
        return 1 / self.lam

    @property
    def digits(self) -> BinaryEPSeq:
        if self.sequence is None:
            raise ResourceError(f"no period found within {self.depth} digits")
        return self.sequence

    def to_dict(self) -> dict:
        return {
            "lambda": str(self.lam) if isinstance(self.lam, Fraction) else float(self.lam),
            "beta": float(self.beta),
            "exact": self.exact,
            "depth": self.depth,
            "prefix": "".join(map(str, self.prefix)),
            "digits": None if self.sequence is None else str(self.sequence),
        }


def greedy_expansion_of_one(a, depth: int = 256) -> QuasiGreedyExpansion:
    """The quasi-greedy expansion of 1, cycle-detected in exact arithmetic.

    A terminating greedy expansion d_1...d_{n-1} 1 0^inf comes out in its
    quasi-greedy form (d_1...d_{n-1} 0)^inf.
    """
    if depth < 1:
        raise DomainError("depth must be positive")
    stream = quasi_greedy_digits(a)
    stream.ensure(depth)
    seq = stream.sequence()
    shown = min(depth, len(stream.digits)) if seq is not None else depth
    return QuasiGreedyExpansion(stream.lam, stream.prefix(shown), seq, depth)


def is_self_admissible(expansion: QuasiGreedyExpansion) -> bool | None:
    """Check s^k(d) <= d for every k >= 1.

    Exact when d is eventually periodic; otherwise only the known prefix is
    compared and ``None`` is returned if no violation shows up there.
    """
    if expansion.exact:
        d = expansion.sequence
        span = len(d.preperiod) + len(d.period)
        return all(d.shift(k).compare(d) <= 0 for k in range(1, span + 1))
    p = expansion.prefix
    for k in range(1, len(p)):
        tail = p[k:]
        if tail > p[: len(tail)]:
            return False
    return None


# -- unique expansions ------------------------------------------------------


class Membership(str, Enum):
    IN_U = "InU"
    NOT_IN_U = "NotInU"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class UniqueVerdict:
    status: Membership
    depth: int
    witness: str | None = None

    def to_dict(self) -> dict:
        return {"status": self.status.value, "depth": self.depth, "witness": self.witness}


def _compare_with_stream(w: BinaryEPSeq, d: _DigitStream, cap: int) -> tuple[int | None, int]:
    exact = d.sequence()
    if exact is not None:
        return w.compare(exact), 0
    for n in range(1, cap + 1):
        a, b = w.digit(n), d.digit(n)
        if a != b:
            return (1 if a > b else -1), n
        if d.periodic:
            return w.compare(d.sequence()), n
    return None, cap


def is_unique_expansion(lam, w: BinaryEPSeq, depth: int = DEFAULT_COMPARE_DEPTH) -> UniqueVerdict:
    """Decide w in U_lam: every shift of w and of its reflection is strictly below d."""
    lam = _as_lambda(lam)
    _check_base(lam)
    d = quasi_greedy_digits(lam)
    reached = 0
    undecided = None
    for seq in (w, w.reflect()):
        for s in seq.shifts():
            sign, n = _compare_with_stream(s, d, depth)
            reached = max(reached, n)
            if sign is None:
                undecided = undecided or str(s)
            elif sign >= 0:
                return UniqueVerdict(Membership.NOT_IN_U, reached, str(s))
    if undecided is not None:
        return UniqueVerdict(Membership.UNDETERMINED, reached, undecided)
    return UniqueVerdict(Membership.IN_U, reached)


def greedy_expansion(lam, x, depth: int) -> tuple[int, ...]:
    """First ``depth`` digits of the greedy expansion of x in [0, lam/(1-lam)]."""
    lam = _as_lambda(lam)
    _check_base(lam)
    x = _as_lambda(x) if isinstance(x, AlgebraicReal) else as_rational(x)
    top = lam / (1 - lam)
    if x < 0 or x > top:
        raise DomainError("x must lie in [0, lam/(1-lam)]")
    beta, r, out = 1 / lam, x, []
    for _ in range(depth):
        t = beta * r
        b = 1 if t >= 1 else 0
        r = t - b
        out.append(b)
    return tuple(out)


def lazy_expansion(lam, x, depth: int) -> tuple[int, ...]:
    """Lazy digits of x: the reflection of the greedy digits of lam/(1-lam) - x."""
    lam = _as_lambda(lam)
    return tuple(1 - b for b in greedy_expansion(lam, lam / (1 - lam) - x, depth))


# -- named constants --------------------------------------------------------


def thue_morse(n: int) -> tuple[int, ...]:
    """(t_0, ..., t_{n-1}), t_j the parity of the binary digit sum of j."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    return tuple(j.bit_count() & 1 for j in range(n))


def komornik_loreti(tol=DEFAULT_TOL) -> Bracket:
    """Bracket for a_hat, the root in (0, 1) of sum_{j>=1} t_j a^j = 1."""
    return A_HAT.bracket(as_tolerance(tol))


def a_hat_n(n: int, tol=DEFAULT_TOL) -> Bracket:
    """Bracket for the root of the Thue-Morse polynomial of degree 2^n."""
    return a_hat_n_constant(n).bracket(as_tolerance(tol))


def multinacci(k: int, tol=DEFAULT_TOL):
    """a_k: 1 for k = 1, otherwise a bracket for the root of a + ... + a^k = 1."""
    if k < 1:
        raise DomainError("k must be a positive integer")
    if k == 1:
        return Fraction(1)
    return multinacci_constant(k).bracket(as_tolerance(tol))


def multinacci_real(k: int) -> AlgebraicReal:
    """a_k (k >= 2) as an exact element of Q(a_k)."""
    return number_field(k).generator


def _thue_morse_block(m: int) -> tuple[int, ...]:
    """v_m = t_1 ... t_{2^m}."""
    return tuple(j.bit_count() & 1 for j in range(1, 2**m + 1))


def countable_regime_tails(a) -> list[BinaryEPSeq]:
    """The cycles (v_m v_m-bar)^inf, m < n, for a in [a_hat_{n+1}, a_hat_n).

    Sequences in U_a then end in one of these cycles.
    """
    a = a.a if isinstance(a, Param) else as_rational(a)
    if RHO.compare(a) >= 0 or A_HAT.compare(a) <= 0:
        raise RegimeError("countable_regime_tails needs a_hat < a < rho")
    n = 1
    while a_hat_n_constant(n + 1).compare(a) < 0:
        n += 1
        if n > _TAIL_SEARCH_CAP:
            raise ResourceError(f"a is within a_hat_{n} of the Komornik-Loreti value")
    tails = []
    for m in range(n):
        v = _thue_morse_block(m)
        tails.append(BinaryEPSeq((), v + tuple(1 - b for b in v)))
    return tails
