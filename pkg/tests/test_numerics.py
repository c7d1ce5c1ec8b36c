import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from okamoto.errors import PreconditionError
from okamoto.numerics import (
    A0,
    A_HAT,
    RHO,
    Bracket,
    Polynomial,
    PowerSeries,
    bisect,
    constants,
    multinacci_constant,
    number_field,
)


def test_bracket_validation():
    with pytest.raises(PreconditionError):
        Bracket(Fraction(1), Fraction(0))
    with pytest.raises(PreconditionError):
        Bracket(Fraction(0), Fraction(1), 1, 1)


@pytest.mark.parametrize(
    "coeffs,lo,hi,target",
    [
        ((-1, 0, -27, 54), Fraction(1, 2), Fraction(2, 3), 0.5592),
        ((-1, 1, 1), Fraction(1, 2), Fraction(1), 0.6180),
        ((-1, 1, 2, -1), Fraction(1, 2), Fraction(1), 0.5550),
    ],
)
def test_bisect_examples(coeffs, lo, hi, target):
    p = Polynomial(coeffs)
    b = bisect(p, lo, hi, Fraction(1, 10**4))
    assert b.width <= Fraction(1, 10**4)
    assert p.sign(b.lo) == b.f_lo_sign and p.sign(b.hi) == b.f_hi_sign
    assert abs(float(b.mid) - target) < 5e-5 + 1e-4


def test_bisect_rejects_same_signs():
    with pytest.raises(PreconditionError):
        bisect(Polynomial((1, 1)), Fraction(0), Fraction(1))


def test_bisect_exact_rational_root():
    # root exactly at the first midpoint is still bracketed, not lost
    b = bisect(Polynomial((-1, 2)), Fraction(0), Fraction(1), Fraction(1, 10**6))
    assert Fraction(1, 2) in b and b.width <= Fraction(1, 10**6)


@given(st.integers(1, 10**6))
def test_brackets_nest(k):
    tol = Fraction(1, k)
    for c in (A0, RHO, A_HAT):
        wide, narrow = c.bracket(tol), c.bracket(tol / 1000)
        assert wide.lo <= narrow.lo and narrow.hi <= wide.hi
        assert c.f.sign(narrow.lo) < 0 < c.f.sign(narrow.hi)


def test_constants_table():
    t = constants()
    assert abs(float(t["a0"].mid) - 0.5592) < 5e-5
    assert abs(float(t["rho"].mid) - (math.sqrt(5) - 1) / 2) < 1e-12
    assert abs(float(t["a_3"].mid) - 0.5437) < 1e-4
    assert set(t) == {"a0", "rho", "a_hat"} | {f"a_{k}" for k in range(2, 9)}
    for k in range(2, 9):
        assert t[f"a_{k}"].width <= Fraction(1, 10**12)


def test_a0_and_a_hat_are_ordered():
    assert A0.bracket(Fraction(1, 10**5)).hi < A_HAT.bracket(Fraction(1, 10**5)).lo


def test_a_hat_against_komornik_loreti_base():
    # the Komornik-Loreti constant q = 1.787231650... is the reciprocal of a_hat
    assert abs(1 / float(A_HAT) - 1.7872316501829) < 1e-12


def test_power_series_sign_certified():
    s = PowerSeries(lambda j: 1)  # sum_{j>=1} a^j - 1 = a/(1-a) - 1
    assert s.sign(Fraction(1, 3)) == -1
    assert s.sign(Fraction(2, 3)) == 1


def test_polynomial_format_and_arithmetic():
    p = Polynomial.from_terms({1: 1, 2: 2, 3: -1}, constant=-1)
    assert p.format() == "-1 + a + 2*a^2 - a^3"
    assert p.degree == 3
    assert (p - p).coeffs == () or all(c == 0 for c in (p - p).coeffs)
    assert p(Fraction(1, 2)) == Fraction(1, 2) + Fraction(1, 2) - Fraction(1, 8) - 1


@given(st.integers(2, 6), st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6),
       st.lists(st.fractions(max_denominator=50), min_size=1, max_size=6))
def test_number_field_arithmetic_matches_floats(k, c1, c2):
    K = number_field(k)
    t = K.generator
    x = sum((c * t**i for i, c in enumerate(c1)), start=0 * t)
    y = sum((c * t**i for i, c in enumerate(c2)), start=0 * t)
    tf = float(t)
    xf = sum(float(c) * tf**i for i, c in enumerate(c1))
    yf = sum(float(c) * tf**i for i, c in enumerate(c2))
    assert math.isclose(float(x * y), xf * yf, rel_tol=1e-9, abs_tol=1e-9)
    if abs(yf) > 1e-6 and y.coeffs:
        assert math.isclose(float(x / y), xf / yf, rel_tol=1e-6, abs_tol=1e-6)
    if abs(xf - yf) > 1e-9:
        assert (x < y) == (xf < yf)


def test_golden_ratio_identities():
    r = number_field(2).generator
    assert r * r + r == 1
    assert 1 / r - 1 == r
    assert float(r) == pytest.approx((math.sqrt(5) - 1) / 2, abs=1e-15)
    a3 = number_field(3).generator
    assert a3 + a3**2 + a3**3 == 1
    assert multinacci_constant(3).compare(Fraction(1, 2)) == -1
