from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hecke4.qfield import (
    INF,
    ONE,
    SQRT2,
    ZERO,
    AlgSum,
    DyadicInterval,
    Mobius,
    NoFixedPointError,
    QSqrt2,
    QuadExt,
    certified_equal,
    compare,
    from_json,
    minimal_polynomial,
    quad,
    sign,
    sqrt,
    sqrt_in_qsqrt2,
    to_decimal,
    to_interval,
    to_json,
)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)
qs = st.builds(QSqrt2, rats, rats)
nonzero_qs = qs.filter(lambda v: v != 0)


def test_sqrt2_squares_to_two():
    assert SQRT2 * SQRT2 == 2
    assert QSqrt2(1, 1) * QSqrt2(-1, 1) == 1


@given(qs, qs, qs)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == ZERO


@given(nonzero_qs)
def test_inverse(x):
    assert x * x.inverse() == ONE


@given(qs)
def test_sign_matches_float(x):
    f = float(x.a) + float(x.b) * 2**0.5
    if abs(f) > 1e-9:
        assert sign(x) == (1 if f > 0 else -1)


def test_sign_of_tiny_unit_power():
    # (sqrt2 - 1)^40 is positive but about 1e-15
    v = QSqrt2(-1, 1) ** 40
    assert sign(v) == 1
    assert sign(-v) == -1


def test_sqrt_of_square_stays_in_field():
    assert sqrt(QSqrt2(3, 2)) == QSqrt2(1, 1)  # (1 + sqrt2)^2 = 3 + 2 sqrt2
    assert sqrt_in_qsqrt2(QSqrt2(2)) == SQRT2
    assert sqrt_in_qsqrt2(QSqrt2(3)) is None


def test_quadext_normalizes_radicand():
    v = sqrt(12)
    assert isinstance(v, QuadExt)
    assert v == 2 * sqrt(3)
    assert sqrt(8) == 2 * SQRT2


def test_quadext_arithmetic_and_coercion():
    a = sqrt(6)
    b = SQRT2 * sqrt(3)
    assert a == b
    assert a * a == 6
    r = (1 + sqrt(7)) / (2 - sqrt(7))
    assert r * (2 - sqrt(7)) == 1 + sqrt(7)


def test_incompatible_sum_is_exact():
    s = sqrt(3) + sqrt(5)
    assert isinstance(s, AlgSum)
    assert compare(s, QSqrt2(Fraction(39, 10))) > 0
    assert compare(s, 4) < 0
    assert sign(s - sqrt(3) - sqrt(5)) == 0


def test_compare_with_infinity():
    assert compare(INF, 10**9) == 1
    assert compare(3, INF) == -1
    assert compare(INF, INF) == 0


def test_to_interval_width_and_containment():
    v = sqrt(10)
    iv = to_interval(v, Fraction(1, 10**30))
    assert iv.width() <= Fraction(1, 10**30)
    assert v in iv
    assert iv.lo**2 <= 10 <= iv.hi**2


def test_to_decimal_rounds_correctly():
    assert to_decimal(sqrt(10), 10) == "3.1622776602"
    assert to_decimal(QSqrt2(Fraction(1, 8)), 2) == "0.13"
    assert to_decimal(SQRT2 + 1, 5) == "2.41421"


def test_minimal_polynomial():
    assert minimal_polynomial(sqrt(6)) == [1, 0, -6]
    assert minimal_polynomial(SQRT2 + 1) == [1, -2, -1]
    assert minimal_polynomial(2 * sqrt(17) / 3) == [9, 0, -68]
    # sqrt2 + sqrt7 has degree 4
    assert minimal_polynomial(SQRT2 + sqrt(7)) == [1, 0, -18, 0, 25]


def test_certified_equal():
    assert certified_equal(sqrt(238) / 5, SQRT2 * sqrt(119) / 5)
    assert not certified_equal(sqrt(10), 3 + Fraction(1, 6))


@given(qs, qs, st.integers(2, 30))
def test_json_round_trip(x, y, d):
    v = quad(x, y, d)
    assert from_json(json.loads(json.dumps(to_json(v)))) == v


def test_json_round_trip_special():
    for v in (INF, sqrt(3) + sqrt(5), QSqrt2(0)):
        back = from_json(to_json(v))
        assert back is INF if v is INF else sign(back - v) == 0


def test_mobius_fixed_points():
    n2 = Mobius(1, SQRT2, SQRT2, 1)
    assert n2.attracting_fixed_point() == 1
    assert n2.det() == -1
    n3 = Mobius(1, SQRT2, 0, 1)
    assert n3.attracting_fixed_point() is INF
    assert n3.apply(INF) is INF
    with pytest.raises(NoFixedPointError):
        Mobius(0, -1, 1, 0).attracting_fixed_point()


def test_mobius_inverse_and_composition():
    m = Mobius(1, SQRT2, SQRT2, 3)
    x = QSqrt2(Fraction(2, 7), 1)
    assert m.inverse().apply(m.apply(x)) == x
    n = Mobius(2, 1, 1, 1)
    assert (m @ n).apply(x) == m.apply(n.apply(x))


def test_dyadic_interval_ops():
    a = DyadicInterval(1, 2)
    b = DyadicInterval(-1, 3)
    assert (a + b).lo == 0 and (a + b).hi == 5
    assert (a * b).lo == -2 and (a * b).hi == 6
    with pytest.raises(ZeroDivisionError):
        b.inverse()
    with pytest.raises(ValueError):
        DyadicInterval(2, 1)
