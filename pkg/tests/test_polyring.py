from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubicpd.polyring import (
    EQ,
    GT,
    LT,
    FieldSpec,
    Monomial,
    MonomialOrder,
    ParseError,
    PolyRing,
    RingMismatchError,
    compare,
)

from strategies import exponents, polynomials, ring

R3 = ring(3)
GREVLEX = MonomialOrder.grevlex()
LEX = MonomialOrder.lex()


def test_grevlex_compare():
    assert compare(Monomial((2, 0, 1)), Monomial((1, 2, 0)), GREVLEX) == LT
    m = Monomial((1, 2, 3))
    assert compare(m, m, GREVLEX) == EQ
    assert compare(m, m, LEX) == EQ


def test_lex_ignores_degree():
    assert compare(Monomial((1, 0)), Monomial((0, 5)), LEX) == GT


def test_compare_length_mismatch():
    with pytest.raises(ValueError):
        compare(Monomial((1, 0)), Monomial((1, 0, 0)), GREVLEX)


def test_add():
    R = PolyRing("x y")
    assert R("x+y") + R("x-y") == R("2*x")
    f = R("x^2+3*y")
    assert f + R.zero() == f
    assert R("32000*x") + R("5*x") == R("2*x")


def test_mul():
    R = PolyRing("x y")
    assert R("x+y") * R("x-y") == R("x^2-y^2")
    f = R("x^2+3*y")
    assert f * R.one() == f
    assert R("x") * R("x^2+x*y") == R("x^3+x^2*y")


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        PolyRing("x y")("x") + PolyRing("x z")("x")


def test_leading_term():
    R = PolyRing("x y z")
    c, m = R("x^2-y*z").leading_term()
    assert (c, m.exponents) == (1, (2, 0, 0))
    c, m = R("3*y").leading_term()
    assert (c, m.exponents) == (3, (0, 1, 0))
    L = PolyRing("x y z", order=LEX)
    assert L("z^5+x").leading_term()[1].exponents == (1, 0, 0)
    with pytest.raises(ValueError):
        R.zero().leading_term()


def test_homogeneity_and_degree():
    R = PolyRing("x y a b c")
    assert R("x^2+x*y").is_homogeneous()
    assert not R("x^2+x").is_homogeneous()
    assert R("x^2*a+x*y*b+y^2*c").total_degree() == 3
    assert R.zero().total_degree() < 0


def test_parse_and_format():
    R = PolyRing("x y a b c")
    f = R("x^2*a+x*y*b+y^2*c")
    assert f.terms[0][1].exponents == (2, 0, 1, 0, 0)
    assert R("0").is_zero()
    assert R("y*x").format() == "x*y"
    assert R("(x+y)^2 - 2*x*y").format() == "x^2+y^2"
    assert R("x/2 + x/2") == R("x")


def test_parse_errors_carry_position():
    R = PolyRing("x y")
    with pytest.raises(ParseError) as info:
        R("x + q")
    assert info.value.pos == 4
    with pytest.raises(ParseError):
        R("x +* y")
    with pytest.raises(ParseError):
        R("x/0")


def test_rationals():
    Q = PolyRing("x y", FieldSpec.rationals())
    f = Q("x/3 + y")
    assert f.leading_coefficient() == Fraction(1, 3)
    assert (f * 3).format() == "x+3*y"


def test_field_spec_rejects_composite():
    with pytest.raises(ValueError):
        FieldSpec.prime(32001)


def test_symmetric_display():
    R = PolyRing("x")
    assert R("-x").format() == "-x"
    assert R("32002*x").format() == "-x"


@given(polynomials(R3), polynomials(R3), polynomials(R3))
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f + g == g + f
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f - f).is_zero()
    assert f + (-f) == R3.zero()


@given(polynomials(R3))
def test_format_parse_round_trip(f):
    assert R3.parse(f.format()) == f
    assert R3.parse(f.format()).format() == f.format()


@given(exponents(3), exponents(3), exponents(3), st.sampled_from([GREVLEX, LEX]))
def test_order_is_total_and_multiplicative(a, b, c, order):
    A, B, C = Monomial(a), Monomial(b), Monomial(c)
    ab = compare(A, B, order)
    assert compare(B, A, order) == -ab
    assert (ab == EQ) == (a == b)
    if ab == GT and compare(B, C, order) == GT:
        assert compare(A, C, order) == GT
    if ab == GT:
        assert compare(A * C, B * C, order) == GT


@given(exponents(4), exponents(4))
def test_grevlex_degree_compatible(a, b):
    if sum(a) > sum(b):
        assert compare(Monomial(a), Monomial(b), GREVLEX) == GT


@given(exponents(3), exponents(3))
def test_packed_keys_agree_with_compare(a, b):
    R = R3
    ka, kb = R.encode(a), R.encode(b)
    expected = compare(Monomial(a), Monomial(b), R.order)
    assert ((ka > kb) - (ka < kb)) == expected
    assert R.exps(ka + kb) == tuple(x + y for x, y in zip(a, b))
    assert R.divides_key(ka, kb) == all(x <= y for x, y in zip(a, b))


def test_exponent_overflow_is_detected():
    R = PolyRing("x")
    with pytest.raises(OverflowError):
        R("x^2000") * R("x^2000")
