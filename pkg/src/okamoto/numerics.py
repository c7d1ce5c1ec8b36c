"""Certified root bracketing for monotone polynomials and power series.

All arithmetic is exact (``Fraction``); a sign is only ever reported when it
is certain. The constants used elsewhere in the package (a0, rho, the
reciprocal Komornik-Loreti constant, multinacci numbers) are defined here as
roots of increasing functions, which gives exact comparisons against any
rational parameter for free: ``c.compare(a)`` is the sign of ``f(a)``.
"""

from __future__ import annotations

import functools
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import DomainError, PreconditionError

__all__ = [
    "A0",
    "A_HAT",
    "AlgebraicReal",
    "Bracket",
    "Constant",
    "DEFAULT_TOL",
    "NumberField",
    "Polynomial",
    "PowerSeries",
    "RHO",
    "a_hat_n_constant",
    "as_tolerance",
    "bisect",
    "constants",
    "multinacci_constant",
    "number_field",
]

DEFAULT_TOL = Fraction(1, 10**12)


def as_tolerance(tol) -> Fraction:
    if isinstance(tol, float):
        tol = Fraction(repr(tol))
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    return tol


def _sign(v) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class Bracket:
    """A closed interval [lo, hi] known to contain a sign change of f."""

    lo: Fraction
    hi: Fraction
    f_lo_sign: int = -1
    f_hi_sign: int = 1

    def __post_init__(self):
        if not self.lo < self.hi:
            raise PreconditionError("bracket needs lo < hi")
        if self.f_lo_sign * self.f_hi_sign >= 0:
            raise PreconditionError("bracket endpoints must have opposite signs")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, value) -> bool:
        return self.lo <= value <= self.hi

    def __float__(self):
        return float(self.mid)

    def below(self, value) -> bool:
        """Every point of the bracket is strictly less than ``value``."""
        return self.hi < value

    def above(self, value) -> bool:
        return self.lo > value

    def disjoint(self, other: Bracket) -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def to_dict(self) -> dict:
        return {"lo": float(self.lo), "hi": float(self.hi), "mid": float(self.mid)}


# -- polynomials ------------------------------------------------------------


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod(a, b):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = [Fraction(x) for x in a]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        coef = r[-1] / b[-1]
        q[shift] = coef
        for j, y in enumerate(b):
            r[shift + j] -= coef * y
        r = _trim(r)
    return _trim(q), r


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim(x - y for x, y in zip(a, b))


def _pinvmod(a, f):
    """Inverse of a modulo f by the extended Euclidean algorithm over Q."""
    r0, r1 = _trim(f), _trim(a)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo the defining polynomial")
    return [c / r0[0] for c in s0]


@dataclass(frozen=True)
class Polynomial:
    """A polynomial with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in _trim(self.coeffs)))

    @classmethod
    def from_terms(cls, terms: dict[int, int], constant=0) -> Polynomial:
        deg = max(terms, default=0)
        c = [Fraction(0)] * (deg + 1)
        for k, v in terms.items():
            c[k] += v
        c[0] += constant
        return cls(tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign(self, x) -> int:
        return _sign(self(x))

    def __sub__(self, other):
        return Polynomial(tuple(_psub(self.coeffs, Polynomial._lift(other))))

    def __add__(self, other):
        neg = [-c for c in Polynomial._lift(other)]
        return Polynomial(tuple(_psub(self.coeffs, neg)))

    @staticmethod
    def _lift(other):
        if isinstance(other, Polynomial):
            return other.coeffs
        return (Fraction(other),)

    def format(self, var: str = "a") -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        if not parts:
            return "0"
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for s, body in parts[1:]:
            out += f" {s} {body}"
        return out

    __str__ = format


class PowerSeries:
    """``constant + sum_{j>=1} c_j a^j`` with every c_j in [0, 1].

    Signs at a point 0 < a < 1 are certified with the tail bound
    ``0 <= sum_{j>J} c_j a^j <= a^(J+1) / (1 - a)``; the truncation
    depth doubles until the sign is decided or ``max_terms`` is hit.
    """

    def __init__(self, coefficient: Callable[[int], int], constant=-1, *,
                 start_terms: int = 32, max_terms: int = 1 << 14):
        self.coefficient = coefficient
        self.constant = Fraction(constant)
        self.start_terms = start_terms
        self.max_terms = max_terms

    def partial(self, x, terms: int):
        acc = 0
        for j in range(terms, 0, -1):
            acc = (acc + self.coefficient(j)) * x
        return acc + self.constant

    def sign(self, x) -> int:
        """Certified sign at ``x``; 0 means undecided within ``max_terms``."""
        x = Fraction(x)
        if not 0 < x < 1:
            raise DomainError("power series sign is only certified on (0, 1)")
        J = self.start_terms
        while J <= self.max_terms:
            s = self.partial(x, J)
            if s > 0:
                return 1
            if s + x ** (J + 1) / (1 - x) < 0:
                return -1
            J *= 2
        return 0


def bisect(f, lo, hi=None, tol=DEFAULT_TOL) -> Bracket:
    """Shrink a sign-change bracket of a strictly monotone ``f`` to width <= tol.

    ``f`` is anything with a ``sign(x)`` method returning -1, 0 or 1, where 0
    means "exact zero or undecided"; ``lo`` may be a ``Bracket``.
    """
    if isinstance(lo, Bracket):
        lo, hi = lo.lo, lo.hi
    lo, hi, tol = Fraction(lo), Fraction(hi), as_tolerance(tol)
    s_lo, s_hi = f.sign(lo), f.sign(hi)
    if s_lo * s_hi >= 0:
        raise PreconditionError(f"no certified sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        split = (lo + hi) / 2
        s = f.sign(split)
        k = 3
        # An exact or undecidable zero at the midpoint: split slightly off it.
        while s == 0:
            split = (lo + hi) / 2 + (hi - lo) / 2**k
            s = f.sign(split)
            k += 1
        if s == s_lo:
            lo = split
        else:
            hi = split
    return Bracket(lo, hi, s_lo, s_hi)


# -- named constants --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Constant:
    """The unique root of a strictly increasing ``f`` on ``[lo, hi]``."""

    name: str
    f: object
    lo: Fraction
    hi: Fraction
    symbolic: str | None = None
    _cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def bracket(self, tol=DEFAULT_TOL) -> Bracket:
        tol = as_tolerance(tol)
        with self._lock:
            hit = self._cache.get(tol)
        if hit is None:
            hit = bisect(self.f, self.lo, self.hi, tol)
            with self._lock:
                self._cache[tol] = hit
        return hit

    def compare(self, a) -> int:
        """Sign of ``a - c``; exact for polynomials, 0 if a series cannot decide."""
        a = Fraction(a)
        if a <= self.lo:
            return -1
        if a >= self.hi:
            return 1
        return self.f.sign(a)

    def __float__(self):
        return float(self.bracket().mid)

    def __repr__(self):
        return f"Constant({self.name!r}, ~{float(self):.12f})"


def _thue_morse_bit(j: int) -> int:
    return j.bit_count() & 1


A0 = Constant("a0", Polynomial((-1, 0, -27, 54)), Fraction(1, 2), Fraction(2, 3))
RHO = Constant("rho", Polynomial((-1, 1, 1)), Fraction(1, 2), Fraction(1), "(sqrt(5)-1)/2")
A_HAT = Constant("a_hat", PowerSeries(_thue_morse_bit), Fraction(1, 2), Fraction(5, 8))


@functools.lru_cache(maxsize=None)
def multinacci_constant(k: int) -> Constant:
    """a_k, the root in (1/2, 1) of a + a^2 + ... + a^k = 1, for k >= 2."""
    if k < 2:
        raise DomainError("multinacci constants are bracketed for k >= 2 (a_1 = 1)")
    if k == 2:
        return RHO
    poly = Polynomial.from_terms({j: 1 for j in range(1, k + 1)}, constant=-1)
    return Constant(f"a_{k}", poly, Fraction(1, 2), Fraction(1))


@functools.lru_cache(maxsize=None)
def a_hat_n_constant(n: int) -> Constant:
    """Root in (1/2, 1) of the Thue-Morse polynomial of degree 2^n."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    poly = Polynomial.from_terms({j: _thue_morse_bit(j) for j in range(1, 2**n + 1)}, constant=-1)
    return Constant(f"a_hat_{n}", poly, Fraction(1, 2), Fraction(1))


@functools.lru_cache(maxsize=None)
def _constants(tol: Fraction) -> dict[str, Bracket]:
    table = {"a0": A0.bracket(tol), "rho": RHO.bracket(tol), "a_hat": A_HAT.bracket(tol)}
    for k in range(2, 9):
        table[f"a_{k}"] = multinacci_constant(k).bracket(tol)
    chain = [table[f"a_{k}"] for k in range(8, 2, -1)] + [table["a_hat"], table["rho"]]
    for left, right in zip(chain, chain[1:]):
        if not left.hi < right.lo:
            raise AssertionError(f"constant ordering not certified at tol={tol}")
    if not table["a0"].hi < Fraction(2, 3):
        raise AssertionError("a0 < 2/3 not certified")
    return table


def constants(tol=DEFAULT_TOL) -> dict[str, Bracket]:
    """Brackets for a0, rho, a_hat and a_2..a_8, with their ordering checked."""
    return dict(_constants(as_tolerance(tol)))


# -- exact algebraic reals --------------------------------------------------


class NumberField:
    """Q(theta) for theta the root of an irreducible polynomial ``Constant``.

    Irreducibility is the caller's responsibility; it is what makes the zero
    test (reduced representative is the zero polynomial) exact.
    """

    def __init__(self, root: Constant):
        if not isinstance(root.f, Polynomial):
            raise DomainError("a number field needs a polynomial constant")
        lead = root.f.coeffs[-1]
        self.root = root
        self.modulus = [c / lead for c in root.f.coeffs]
        self.degree = len(self.modulus) - 1
        self.generator = AlgebraicReal(self, [0, 1])

    def reduce(self, coeffs: Sequence) -> tuple[Fraction, ...]:
        _, r = _pdivmod([Fraction(c) for c in coeffs], self.modulus)
        return tuple(r)

    def __repr__(self):
        return f"NumberField({self.root.name})"


def _interval_horner(coeffs, lo, hi):
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(coeffs):
        prods = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(prods) + c, max(prods) + c
    return acc_lo, acc_hi


class AlgebraicReal:
    """An exact element of a ``NumberField`` with certified ordering."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = field.reduce(coeffs)

    def _coerce(self, other):
        if isinstance(other, AlgebraicReal):
            if other.field is not self.field:
                raise TypeError("elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return AlgebraicReal(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicReal(self.field, [-c for c in _psub([-c for c in self.coeffs], other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicReal(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicReal(self.field, _psub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return AlgebraicReal(self.field, _pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if not self.coeffs:
            raise ZeroDivisionError("division by zero in number field")
        return AlgebraicReal(self.field, _pinvmod(self.coeffs, self.field.modulus))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = AlgebraicReal(self.field, [1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def sign(self) -> int:
        if not self.coeffs:
            return 0
        tol = Fraction(1, 2**16)
        while True:
            b = self.field.root.bracket(tol)
            lo, hi = _interval_horner(self.coeffs, b.lo, b.hi)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            tol /= 2**16

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError("unsupported comparison")
        return (self - other).sign()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else Fraction(0))
        return hash((id(self.field), self.coeffs))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        b = self.field.root.bracket(Fraction(1, 2**60))
        lo, hi = _interval_horner(self.coeffs, b.lo, b.hi)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"AlgebraicReal({self.field.root.name}: {Polynomial(self.coeffs).format('t')})"


@functools.lru_cache(maxsize=None)
def number_field(k: int) -> NumberField:
    """Q(a_k) for the multinacci number a_k (k = 2 gives rho); irreducible."""
    return NumberField(multinacci_constant(k))
