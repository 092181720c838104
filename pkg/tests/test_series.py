from fractions import Fraction
from math import comb, factorial, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mayerdimer.series import (
    SeriesError,
    TruncatedSeries,
    add,
    coefficient,
    compose,
    exp_series,
    log1p,
    mul,
    scale,
    truncate,
)

S = TruncatedSeries


def test_add_examples():
    assert add(S([1, 1], 2), S([1, -1], 2)) == S([2, 0, 0])
    f = S([3, Fraction(1, 2), -4])
    assert add(f, S.zero(2)) == f
    r = add(S([0, 0, 1], 2), S([0, 0, 0, 1], 3))
    assert r == S([0, 0, 1]) and r.order == 2


def test_mul_examples():
    assert mul(S([1, 1], 3), S([1, -1], 3)) == S([1, 0, -1, 0])
    f = S([2, -1, Fraction(5, 3)])
    assert mul(f, S.one(2)) == f


def test_mul_binomial():
    one_plus = S([1, 1], 7)
    prod = mul(one_plus**2, one_plus**5)
    # oracle: direct binomial expansion of (1+z)^7
    assert prod == S([comb(7, k) for k in range(8)])
    assert prod[3] == 35


def test_compose_examples():
    assert compose(S([0, 1, 1]), S([0, 2], 2)) == S([0, 2, 4])
    f = S([1, -2, Fraction(3, 7), 5])
    assert compose(f, S.x(3)) == f
    geometric = S([1, 1, 1, 1])
    assert compose(geometric, S([0, 1, 1], 3)) == S([1, 1, 2, 3])


def test_compose_rejects_constant_term():
    with pytest.raises(SeriesError):
        compose(S([0, 1]), S([1, 1]))


def test_compose_order_is_min():
    assert compose(S([1, 1, 1, 1, 1]), S([0, 1, 0], 2)).order == 2


def test_log1p_examples():
    assert log1p(S.x(3)) == S([0, 1, Fraction(-1, 2), Fraction(1, 3)])
    assert log1p(S.zero(4)) == S.zero(4)


def test_log1p_rejects_constant_term():
    with pytest.raises(SeriesError):
        log1p(S([1, 1]))


def test_log1p_inverts_hand_built_exponential():
    # e^z - 1 = sum_{k>=1} z^k / k!
    expm1 = S([0] + [Fraction(1, factorial(k)) for k in range(1, 5)])
    assert log1p(expm1) == S.x(4)


def test_log1p_matches_mercator_sum():
    f = S([0, 2, -1, Fraction(1, 3), 4, 0])
    mercator = S.zero(5)
    for k in range(1, 6):
        mercator = mercator + (f**k).scale(Fraction((-1) ** (k + 1), k))
    assert log1p(f) == mercator


def test_accessors():
    assert scale(S([1, 1]), Fraction(1, 2)) == S([Fraction(1, 2), Fraction(1, 2)])
    assert coefficient(S([1, 0, -7]), 2) == -7
    assert truncate(S([1, 1, 1]), 1) == S([1, 1])
    with pytest.raises(IndexError):
        coefficient(S([1, 0, -7]), 3)
    with pytest.raises(SeriesError):
        truncate(S([1, 1]), 3)


def test_string_form():
    assert str(S([1, 0, -7])) == "1 - 7*x^2 + O(x^3)"


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def series(draw, order=4, const=True):
    cs = draw(st.lists(fractions, min_size=order + 1, max_size=order + 1))
    if not const:
        cs[0] = Fraction(0)
    return S(cs, order)


@settings(max_examples=60, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a - a == S.zero(a.order)


@settings(max_examples=40, deadline=None)
@given(series(const=False))
def test_log1p_exp_round_trip(f):
    assert log1p(exp_series(f)) == f
    assert exp_series(log1p(f)) == f


@settings(max_examples=40, deadline=None)
@given(series(), series(const=False), series(const=False))
def test_compose_is_associative_with_products(f, g, h):
    # (f o g) * (h o g) == (f * h) o g
    assert compose(f, g) * compose(h, g) == compose(f * h, g)


@settings(max_examples=40, deadline=None)
@given(series(), series())
def test_results_are_reduced(a, b):
    for s in (a + b, a * b, log1p(S([0, *a.coeffs[1:]]))):
        for c in s.coeffs:
            assert c.denominator > 0
            assert gcd(abs(c.numerator), c.denominator) == 1
