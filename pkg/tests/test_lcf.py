from decimal import Decimal
from fractions import Fraction as F

import mpmath
mpmath.mp.dps = 70
import pytest
import sympy
from hypothesis import given, settings, strategies as hs

from leibniz import lcf
from leibniz.errors import (
    DivisionByZero, InfinitePart, InsufficientPrecision, ModeMismatch,
    NegativeLeadingCoefficient, NumberSyntaxError, NumericModeRequired,
    TermOverflow, ZeroHasNoLeadingExponent,
)
from leibniz.lcf import (
    INF, Classification, EngineConfig, LCNumber, Ordering, classify, compare,
    epsilon, from_rational, invert, leading_exponent, parse_number,
    power_rational, render, standard_part, truncate,
)

eps = epsilon()
one = from_rational(1)


def N(text):
    return parse_number(text)


# -- construction ---------------------------------------------------------------

def test_from_rational():
    assert from_rational(0).terms == ()
    assert from_rational(0).accuracy == INF
    assert from_rational(F(3, 2)).terms == ((0, F(3, 2)),)
    assert from_rational(-7).terms == ((0, -7),)


def test_epsilon():
    assert eps.terms == ((1, 1),)
    assert eps.accuracy == INF
    assert classify(eps) is Classification.INFINITESIMAL
    assert compare(eps, from_rational(F(1, 10 ** 9))) is Ordering.LESS


def test_constructor_canonicalises():
    x = LCNumber([(2, 1), (0, 3), (2, -1), (1, 0)])
    assert x.terms == ((0, 3),)
    with pytest.raises(AttributeError):
        x.mode = "numeric"


# -- add / multiply ---------------------------------------------------------------

def test_add_examples():
    assert (from_rational(3) + 5 * eps).terms == ((0, 3), (1, 5))
    assert (2 * eps + (-2) * eps).is_zero()
    assert (6 + eps) + (-6) == eps


def test_add_accuracy_is_min():
    a = truncate(N("1 + eps + eps^5"), 3)
    b = N("eps^2")
    assert (a + b).accuracy == 3


def test_multiply_examples():
    assert eps * eps == N("eps^2")
    assert (1 + eps) * (1 - eps) == N("1 - eps^2")
    assert (3 + 5 * eps) * 0 == from_rational(0)


def test_multiply_accuracy_formula():
    a = N("2 + eps + O(eps^4)")       # lam 0, acc 4
    b = N("eps^2 + eps^3 + O(eps^7)")  # lam 2, acc 7
    p = a * b
    assert p.accuracy == min(4 + 2, 7 + 0)
    assert p.agrees(N("2*eps^2 + 3*eps^3 + eps^4"))


def test_mode_mismatch():
    with pytest.raises(ModeMismatch):
        eps + epsilon("numeric")
    with pytest.raises(ModeMismatch):
        lcf.multiply(eps, epsilon("numeric"))


def test_term_overflow():
    cfg = EngineConfig(max_terms=8)
    x = LCNumber({F(k, 7): 1 for k in range(8)}, config=cfg)
    with pytest.raises(TermOverflow):
        x * x


# -- invert -------------------------------------------------------------------------

def test_invert_monomial_is_exact():
    assert invert(eps) == N("eps^-1")
    assert invert(N("4*eps^(1/2)")) == N("1/4*eps^(-1/2)")


def test_invert_geometric_series():
    r = invert(1 + eps)
    # oracle: 1/(1+x) = sum (-x)^k
    assert r.terms == tuple((k, (-1) ** k) for k in range(12))
    assert r.accuracy == 12


def test_invert_accuracy_formula():
    a = N("2*eps^3 + eps^4 + O(eps^9)")
    r = invert(a)
    assert r.accuracy == -3 + min(12, 9 - 3)
    assert (a * r).agrees(one)


def test_invert_zero():
    with pytest.raises(DivisionByZero):
        invert(from_rational(0))
    with pytest.raises(InsufficientPrecision):
        invert(N("O(eps^2)"))


def test_invert_against_sympy_series():
    x = sympy.Symbol("x")
    a = N("3 - eps + 1/2*eps^2")
    ref = sympy.series(1 / (3 - x + x ** 2 / 2), x, 0, 12).removeO()
    got = invert(a)
    for k in range(12):
        assert got.coefficient(k) == F(str(ref.coeff(x, k)))


# -- power_rational ----------------------------------------------------------------

def test_power_examples():
    assert power_rational(N("eps^2"), F(1, 2)) == eps
    assert power_rational(from_rational(4), F(1, 2)) == from_rational(2)
    r = power_rational(1 + eps, F(1, 2))
    assert r.agrees(N("1 + 1/2*eps - 1/8*eps^2"), horizon=3)


def test_power_binomial_against_sympy():
    x = sympy.Symbol("x")
    for p in (F(1, 2), F(-1, 3), F(5, 2)):
        ref = sympy.series((4 + x) ** sympy.Rational(p.numerator, p.denominator),
                           x, 0, 12).removeO()
        a = 4 + eps
        if p.denominator == 3:
            with pytest.raises(NumericModeRequired):
                power_rational(a, p)
            continue
        got = power_rational(a, p)
        for k in range(12):
            assert got.coefficient(k) == F(str(ref.coeff(x, k)))


def test_power_integer_exact():
    assert (1 + eps) ** 3 == N("1 + 3*eps + 3*eps^2 + eps^3")
    assert (2 * eps) ** -2 == N("1/4*eps^-2")
    assert from_rational(0) ** 0 == one


def test_power_errors():
    with pytest.raises(DivisionByZero):
        power_rational(from_rational(0), F(1, 2))
    with pytest.raises(NegativeLeadingCoefficient):
        power_rational(N("-eps^2"), F(1, 2))
    with pytest.raises(NumericModeRequired):
        power_rational(from_rational(2), F(1, 2))
    assert power_rational(from_rational(-8), F(1, 3)) == from_rational(-2)


def test_power_numeric_sqrt2():
    two = from_rational(2, "numeric")
    r = power_rational(two, F(1, 2))
    ref = Decimal(mpmath.nstr(mpmath.sqrt(mpmath.mpf(2)), 60))
    assert abs(standard_part(r) - ref) < Decimal("1e-45")


# -- order -------------------------------------------------------------------------

def test_compare_examples():
    assert compare(eps, from_rational(F(1, 1000))) is Ordering.LESS
    assert compare(invert(eps), from_rational(10 ** 9)) is Ordering.GREATER
    assert compare(3 + eps, from_rational(3)) is Ordering.GREATER
    assert compare(eps, eps) is Ordering.EQUAL


def test_compare_insufficient_precision():
    a = truncate(1 + eps, 1)
    with pytest.raises(InsufficientPrecision):
        compare(a, one)


def test_compare_numeric_tie_raises():
    a = from_rational(1, "numeric")
    with pytest.raises(InsufficientPrecision):
        compare(a, a)


def test_classify_examples():
    assert classify(N("5*eps^3")) is Classification.INFINITESIMAL
    assert classify(N("2 + 7*eps")) is Classification.APPRECIABLE
    assert classify(N("eps^-2 + 1")) is Classification.INFINITE
    assert classify(from_rational(0)) is Classification.ZERO


def test_leading_exponent():
    assert leading_exponent(N("eps^(1/3) + eps")) == F(1, 3)
    with pytest.raises(ZeroHasNoLeadingExponent):
        leading_exponent(from_rational(0))


def test_standard_part_examples():
    assert standard_part(N("3 + 5*eps + eps^2")) == 3
    assert standard_part(eps) == 0
    with pytest.raises(InfinitePart):
        standard_part(N("eps^-1"))
    with pytest.raises(InsufficientPrecision):
        standard_part(N("O(eps^0)"))


def test_truncate_examples():
    assert truncate(N("1 + eps + eps^2"), 2) == N("1 + eps + O(eps^2)")
    assert truncate(from_rational(0), 5).terms == ()
    t = truncate(N("eps^3"), 1)
    assert t.terms == () and t.accuracy == 1


# -- text and JSON -------------------------------------------------------------------

@pytest.mark.parametrize("text", [
    "3 + 5*eps", "eps^-1", "-1/2 + eps^(1/3) - 7*eps^2", "0",
    "1 - eps + O(eps^(5/2))", "O(eps^3)", "-eps^(-3/2) + 2",
])
def test_render_parse_roundtrip(text):
    assert render(parse_number(text)) == text


def test_parse_examples():
    assert N("3 + 5*eps").terms == ((0, 3), (1, 5))
    assert N("eps^-1").terms == ((-1, 1),)
    assert N("1.5*eps").terms == ((1, F(3, 2)),)
    for bad in ("3 +", "eps^", "3 eps", "* 2", "1/0", ""):
        with pytest.raises(NumberSyntaxError):
            N(bad)


def test_numeric_parse_render():
    x = parse_number("0.25 + 1.5E-7*eps", "numeric")
    assert x.terms == ((0, Decimal("0.25")), (1, Decimal("1.5E-7")))
    assert parse_number(render(x), "numeric") == x


def test_json_roundtrip():
    x = N("3 - 1/2*eps^(2/3) + O(eps^4)")
    data = lcf.to_json(x)
    assert data == {"terms": [[0, 1, 3, 1], [2, 3, -1, 2]], "accuracy": [4, 1],
                    "mode": "exact"}
    assert lcf.from_json(data) == x
    y = parse_number("2.5 + eps", "numeric")
    assert lcf.from_json(lcf.to_json(y)) == y


# -- properties --------------------------------------------------------------------

exponents = hs.builds(F, hs.integers(-3, 4), hs.sampled_from([1, 2, 3]))
coeffs = hs.builds(F, hs.integers(-20, 20), hs.integers(1, 9))
numbers = hs.lists(hs.tuples(exponents, coeffs), max_size=4).map(LCNumber)
nonzero = numbers.filter(lambda x: not x.is_zero())
positive = nonzero.map(abs)


@settings(max_examples=300, deadline=None)
@given(numbers, numbers, numbers)
def test_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + (-a)).is_zero()


@settings(max_examples=300, deadline=None)
@given(nonzero)
def test_inverse_within_horizon(a):
    assert (a * invert(a)).agrees(one)


@settings(max_examples=300, deadline=None)
@given(numbers, numbers, numbers, positive)
def test_order_laws(a, b, c, p):
    ab = compare(a, b)
    assert compare(b, a) is Ordering(-ab)
    assert compare(a + c, b + c) is ab
    assert compare(a * p, b * p) is ab


@settings(max_examples=200, deadline=None)
@given(numbers, numbers)
def test_standard_part_morphism(a, b):
    try:
        sa, sb = standard_part(a), standard_part(b)
    except InfinitePart:
        return
    assert standard_part(a + b) == sa + sb
    assert standard_part(a * b) == sa * sb


@settings(max_examples=200, deadline=None)
@given(numbers)
def test_classify_trichotomy(a):
    c = classify(a)
    if a.is_zero():
        assert c is Classification.ZERO
    else:
        lam = leading_exponent(a)
        assert (lam > 0, lam == 0, lam < 0).count(True) == 1
        assert c is {1: Classification.INFINITESIMAL, 0: Classification.APPRECIABLE,
                     -1: Classification.INFINITE}[(lam > 0) - (lam < 0)]


@pytest.mark.parametrize("n", [1, 7, 1000, 10 ** 6])
def test_non_archimedean_witness(n):
    assert compare(n * eps, one) is Ordering.LESS


@settings(max_examples=100, deadline=None)
@given(hs.fractions(min_value=F(1, 10 ** 12), max_value=10 ** 12))
def test_epsilon_below_standard_positive(q):
    assert compare(eps, from_rational(q)) is Ordering.LESS


@settings(max_examples=100, deadline=None)
@given(nonzero, hs.sampled_from([F(1, 2), F(-1), F(3), F(-3, 2)]))
def test_larger_window_is_consistent(a, p):
    a = a * a  # positive leading coefficient keeps fractional powers defined
    small, large = EngineConfig(window=6), EngineConfig(window=14)
    a6 = LCNumber(a.terms, config=small)
    a14 = LCNumber(a.terms, config=large)
    try:
        r6, r14 = a6 ** p, a14 ** p
    except NumericModeRequired:
        return
    assert r6.accuracy <= r14.accuracy
    assert r6.agrees(LCNumber(r14.terms, r14.accuracy, config=small))
