"""Hausdorff dimension formulas and entropy bounds.

The closed forms are evaluated in double precision; the thresholds they
switch on (a0, 1/3, 1/2, 2/3) are compared exactly. For 1/2 < a < a_hat
the dimension of the infinite-derivative set is h(U_a)/log 3, which has no
closed form; it is bracketed by the multinacci bounds and estimated by
counting admissible words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .beta import quasi_greedy_digits
from .errors import DomainError, RegimeError, ResourceError
from .numerics import A0, A_HAT, multinacci_constant
from .selfaffine import Param
from .ternary import as_rational

__all__ = [
    "DimEstimate",
    "Family",
    "Method",
    "WordAutomaton",
    "admissible_words",
    "box_dimension_graph",
    "count_admissible_words",
    "d_of_a",
    "dim_D0",
    "dim_Dinf",
    "dim_Dinf_bounds",
    "dim_Dinf_closed",
    "dim_N",
    "dim_frequency_set",
    "entropy_h",
    "multinacci_index",
    "phi",
]

LOG2, LOG3 = math.log(2), math.log(3)
LOG3_2 = LOG2 / LOG3
WORD_CAP = 40
HORIZON = 64

THIRD, HALF, TWO_THIRDS = Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)


def _real(x) -> Fraction | float:
    """Keep exact inputs exact for the threshold tests; floats pass through."""
    if isinstance(x, Param):
        return x.a
    if isinstance(x, float):
        return x
    return as_rational(x)


def phi(a) -> float:
    """log(3a) / (log a - log|2a - 1|), extended continuously to [0, 2/3]."""
    a = _real(a)
    if not 0 <= a <= TWO_THIRDS:
        raise DomainError("phi is defined on [0, 2/3]")
    if a == 0:
        return 1.0
    if a == THIRD:
        return 1 / 3
    if a == HALF:
        return 0.0
    a = float(a)
    return math.log(3 * a) / (math.log(a) - math.log(abs(2 * a - 1)))


def _xlogx(p: float) -> float:
    return 0.0 if p == 0 else p * math.log(p)


def entropy_h(p) -> float:
    """(-p log p - (1-p) log(1-p) + (1-p) log 2) / log 3, with 0 log 0 = 0."""
    p = _real(p)
    if not 0 <= p <= 1:
        raise DomainError("h is defined on [0, 1]")
    if p == THIRD:
        # the maximum: -(1/3)log(1/3) - (2/3)log(2/3) + (2/3)log 2 = log 3
        return 1.0
    p = float(p)
    return (-_xlogx(p) - _xlogx(1 - p) + (1 - p) * LOG2) / LOG3


def d_of_a(a) -> float:
    return entropy_h(phi(a))


class Family(str, Enum):
    R_UPPER = "R^p"
    R_UPPER_CLOSED = "Rbar^p"
    R_LOWER = "R_p"
    R_LOWER_CLOSED = "Rbar_p"
    S_UPPER = "S^p"
    S_UPPER_CLOSED = "Sbar^p"
    S_LOWER = "S_p"
    S_LOWER_CLOSED = "Sbar_p"
    INTERSECTION = "S_p&S^p"


# sets of points whose digit-1 frequency is "small" / "large"
_SMALL = {Family.R_UPPER, Family.R_UPPER_CLOSED, Family.S_LOWER, Family.S_LOWER_CLOSED}
_LARGE = {Family.R_LOWER, Family.R_LOWER_CLOSED, Family.S_UPPER, Family.S_UPPER_CLOSED}


def dim_frequency_set(p, family: Family | str) -> float:
    """Dimension of a set defined by the upper/lower frequency of digit 1.

    R^p: u_1 < p, R_p: l_1 > p, S^p: u_1 > p, S_p: l_1 < p (bars: non-strict);
    INTERSECTION is S_p with S^p, whose dimension is h(p).
    """
    family = Family(family)
    p = _real(p)
    if not 0 <= p <= 1:
        raise DomainError("p must lie in [0, 1]")
    if family is Family.INTERSECTION:
        return entropy_h(p)
    if family in _SMALL:
        return entropy_h(p) if p <= THIRD else 1.0
    return 1.0 if p <= THIRD else entropy_h(p)


def _open_unit(a) -> Fraction:
    a = _real(a)
    if isinstance(a, float):
        a = Fraction(repr(a))
    if not 0 < a < 1:
        raise DomainError("a must lie in (0, 1)")
    return a


def dim_D0(a) -> float:
    """Dimension of the zero-derivative set."""
    a = _open_unit(a)
    if a == THIRD:
        raise DomainError("F_{1/3} is the identity; its derivative is never 0")
    if a >= TWO_THIRDS:
        return 0.0
    if A0.compare(a) <= 0:
        return 1.0
    return d_of_a(a)


def dim_Dinf_closed(a) -> float:
    """Dimension of the infinite-derivative set for 0 < a <= 1/2."""
    a = _open_unit(a)
    if a == THIRD:
        raise DomainError("F_{1/3} is the identity; its derivative is never infinite")
    if a > HALF:
        raise RegimeError("no closed form for a > 1/2; use dim_Dinf_bounds")
    return d_of_a(a)


def dim_N(a) -> float:
    """Dimension of the set with neither a finite nor an infinite derivative."""
    a = _open_unit(a)
    if a == THIRD:
        raise DomainError("F_{1/3} is the identity and differentiable everywhere")
    if a == HALF:
        return LOG3_2**2
    if A0.compare(a) >= 0:
        return 1.0
    return d_of_a(a)


def box_dimension_graph(a) -> float:
    """Box-counting dimension of the graph of F_a."""
    a = _open_unit(a)
    if a <= HALF:
        return 1.0
    return 1 + math.log(4 * float(a) - 1) / LOG3


# -- admissible words -------------------------------------------------------


class WordAutomaton:
    """Finite words all of whose suffixes s satisfy s <= d and s-bar <= d.

    The state after reading a word is (i, j): the length of its longest
    suffix equal to a prefix of d, and the same for the reflected word.
    Because d dominates its own shifts, the next symbol is allowed exactly
    when it does not exceed d_{i+1} (and its reflection d_{j+1}); the new
    state follows the usual failure links of d's prefixes.
    """

    def __init__(self, lam):
        self.stream = quasi_greedy_digits(lam)
        self._fail = [0, 0]
        self._step: dict = {}

    def _d(self, i: int) -> int:
        """d_{i+1}, 0-indexed access."""
        return self.stream.digit(i + 1)

    def _failure(self, i: int) -> int:
        while len(self._fail) <= i:
            k = len(self._fail)  # border of d[:k]
            f = self._fail[k - 1]
            c = self._d(k - 1)
            while f and self._d(f) != c:
                f = self._fail[f]
            self._fail.append(f + 1 if self._d(f) == c and k > 1 else 0)
        return self._fail[i]

    def _advance(self, i: int, b: int) -> int | None:
        di = self._d(i)
        if b > di:
            return None
        if b == di:
            return i + 1
        while i:
            i = self._failure(i)
            if self._d(i) == b:
                return i + 1
        return 0

    def step(self, state: tuple[int, int], b: int) -> tuple[int, int] | None:
        key = (state, b)
        hit = self._step.get(key, False)
        if hit is not False:
            return hit
        i = self._advance(state[0], b)
        j = None if i is None else self._advance(state[1], 1 - b)
        out = None if j is None else (i, j)
        self._step[key] = out
        return out

    def survives(self, state, steps: int, _memo=None) -> bool:
        """Whether some admissible continuation of length ``steps`` exists."""
        memo = {} if _memo is None else _memo
        if (state, steps) in memo:
            return memo[(state, steps)]
        # forward layers of reachable states, then resolve backwards
        layers = [{state}]
        for r in range(steps, 0, -1):
            nxt = set()
            for s in layers[-1]:
                if (s, r) in memo:
                    continue
                for b in (0, 1):
                    t = self.step(s, b)
                    if t is not None:
                        nxt.add(t)
            layers.append(nxt)
        for depth in range(len(layers) - 1, -1, -1):
            r = steps - depth
            for s in layers[depth]:
                if (s, r) in memo:
                    continue
                memo[(s, r)] = r == 0 or any(
                    (t := self.step(s, b)) is not None and memo[(t, r - 1)] for b in (0, 1)
                )
        return memo[(state, steps)]


def _check_lambda(lam):
    if isinstance(lam, Param):
        lam = lam.a
    lam = lam if not isinstance(lam, float) else Fraction(repr(lam))
    if not HALF < lam < 1:
        raise RegimeError("lam must lie in (1/2, 1)")
    return lam


def _check_count_lambda(lam):
    lam = _check_lambda(lam)
    if A_HAT.compare(lam) >= 0:
        raise RegimeError("word counts need 1/2 < lam < a_hat")
    return lam


def _layers(auto: WordAutomaton, n: int, horizon: int):
    memo: dict = {}
    layer = {(0, 0): 1}
    for _ in range(n):
        nxt: dict = {}
        for s, c in layer.items():
            for b in (0, 1):
                t = auto.step(s, b)
                if t is not None:
                    nxt[t] = nxt.get(t, 0) + c
        layer = nxt
    return {s: c for s, c in layer.items() if auto.survives(s, horizon, memo)}


def count_admissible_words(lam, n: int, cap: int = WORD_CAP, horizon: int = HORIZON) -> int:
    """N_n(lam): length-n words that extend to a sequence of the shift.

    A word counts when it admits ``horizon`` further admissible symbols.
    """
    lam = _check_count_lambda(lam)
    if n < 1:
        raise DomainError("n must be a positive integer")
    if n > cap:
        raise ResourceError(f"word length {n} exceeds the cap {cap}")
    return sum(_layers(WordAutomaton(lam), n, horizon).values())


def admissible_words(lam, n: int, cap: int = 20, horizon: int = HORIZON) -> Iterator[tuple[int, ...]]:
    """Enumerate the words counted by ``count_admissible_words``."""
    lam = _check_count_lambda(lam)
    if n > cap:
        raise ResourceError(f"enumerating words of length {n} exceeds the cap {cap}")
    auto, memo = WordAutomaton(lam), {}

    def walk(word, state):
        if len(word) == n:
            if auto.survives(state, horizon, memo):
                yield word
            return
        for b in (0, 1):
            t = auto.step(state, b)
            if t is not None:
                yield from walk(word + (b,), t)

    yield from walk((), (0, 0))


# -- dimension of the infinite-derivative set for a > 1/2 --------------------


class Method(str, Enum):
    CLOSED_FORM = "ClosedForm"
    MULTINACCI_BOUNDS = "MultinacciBounds"
    ENTROPY_COUNT = "EntropyCount"


@dataclass(frozen=True)
class DimEstimate:
    lower: float
    upper: float
    point: float | None
    method: Method
    flagged: bool = False
    depth: int | None = None

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "point": self.point,
            "method": self.method.value,
            "flagged": self.flagged,
            "depth": self.depth,
        }


def multinacci_index(a, k_cap: int = 64) -> int:
    """The k >= 2 with a_{k+1} <= a < a_k, for 1/2 < a < rho."""
    a = _check_lambda(a)
    if multinacci_constant(2).compare(a) >= 0:
        raise RegimeError("a must be below rho")
    k = 2
    while multinacci_constant(k + 1).compare(a) < 0:
        k += 1
        if k > k_cap:
            raise ResourceError("a is too close to 1/2 to locate its multinacci interval")
    return k


def _neg_log3(c) -> float:
    return -math.log(float(c)) / LOG3


def dim_Dinf_bounds(a, depth: int = WORD_CAP, clamp: float = 1e-9) -> DimEstimate:
    """Multinacci bounds plus the entropy estimate log N_n / (n log 3).

    The point estimate is only a proxy (it approaches h from above); the
    bounds are the certified part.
    """
    lam = _check_lambda(a)
    if A_HAT.compare(lam) >= 0:
        raise RegimeError("dim_Dinf_bounds needs 1/2 < a < a_hat")
    k = multinacci_index(lam)
    lower = 0.0 if k == 2 else _neg_log3(multinacci_constant(k - 1).bracket().mid)
    upper = _neg_log3(multinacci_constant(k).bracket().mid)
    if depth <= 0:
        return DimEstimate(lower, upper, None, Method.MULTINACCI_BOUNDS)
    n_words = count_admissible_words(lam, depth)
    point = math.log(n_words) / (depth * LOG3)
    flagged = False
    if point < lower:
        flagged = lower - point >= clamp
        point = point if flagged else lower
    elif point > upper:
        flagged = point - upper >= clamp
        point = point if flagged else upper
    return DimEstimate(lower, upper, point, Method.ENTROPY_COUNT, flagged, depth)


def dim_Dinf(a, depth: int = WORD_CAP) -> DimEstimate:
    """Dimension of the infinite-derivative set over the whole range of a."""
    lam = _open_unit(a)
    if lam <= HALF:
        v = dim_Dinf_closed(lam)
        return DimEstimate(v, v, v, Method.CLOSED_FORM)
    if A_HAT.compare(lam) >= 0:
        # countable or empty (a > a_hat); dimension zero also at a_hat itself
        return DimEstimate(0.0, 0.0, 0.0, Method.CLOSED_FORM)
    return dim_Dinf_bounds(lam, depth)
