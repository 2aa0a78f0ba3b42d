import math
import random
from decimal import Decimal
from fractions import Fraction as F

import pytest
import sympy

from leibniz import lcf
from leibniz.calculus import (
    DdPair, Jet2, archimedean_check, analytic_curvature_squared, dd_pair, derivative,
    difference_quotient, jet_eval, microaffine_slope, nth_derivative, osculating_circle,
    tangent_line,
)
from leibniz.errors import (
    InfinitePart, NoWitnessFound, NonInvertibleJet, NotInfinitesimal, NumericModeRequired,
    VerticalTangent, WindowTooSmall, ZeroArgument, ZeroCurvature,
)
from leibniz.expr import differentiate_symbolic, evaluate_rational
from leibniz.relations import purge
from leibniz.sampling import function_and_point, random_polynomial

eps = lcf.epsilon()


def test_difference_quotient_examples():
    assert difference_quotient("x^2", 3, eps) == lcf.parse_number("6 + eps")
    assert difference_quotient("5+0*x", F(7, 2), eps).is_zero()
    assert difference_quotient("x", 0, eps) == lcf.from_rational(1)
    with pytest.raises(NotInfinitesimal):
        difference_quotient("x^2", 3, lcf.from_rational(1))
    with pytest.raises(NotInfinitesimal):
        difference_quotient("x^2", 3, lcf.zero())


def test_derivative_examples():
    assert derivative("x^2", 3) == 6
    assert derivative("x^2/(1+x)", 2) == F(8, 9)
    with pytest.raises(InfinitePart):
        derivative("x^(1/3)", 0)
    with pytest.raises(NumericModeRequired):
        derivative("exp(x)", 1)
    d = derivative("exp(x)", 1, mode="numeric")
    assert abs(d - Decimal("2.71828182845904523536028747135266249775724709369995")) < Decimal("1e-40")


def test_nth_derivative_examples():
    assert nth_derivative("x^3", 1, 2) == 6
    assert nth_derivative("x^2/(1+x)", 2, 0) == F(4, 3)
    assert nth_derivative("exp(x)", 0, 5) == 1
    with pytest.raises(WindowTooSmall):
        nth_derivative("x^3", 1, 13)
    with pytest.raises(InfinitePart):
        nth_derivative("x^(3/2)", 0, 2)
    assert nth_derivative("x^(5/2)", 0, 2) == 0


def test_nth_derivative_against_sympy():
    t = sympy.Symbol("t")
    f = "1/(1-x)^2 + x^5"
    expr = 1 / (1 - t) ** 2 + t ** 5
    for n in range(0, 8):
        want = sympy.diff(expr, t, n).subs(t, sympy.Rational(1, 3))
        assert nth_derivative(f, F(1, 3), n) == F(int(want.p), int(want.q))


def test_dd_pair_examples():
    p = dd_pair("x^2", 3, F(1, 2))
    assert p == DdPair(F(1, 2), F(3), F(6))
    assert dd_pair("x", F(-5, 3), F(2, 7)).dy_assignable == F(2, 7)
    assert dd_pair("x^2", 0, 7).dy_assignable == 0
    with pytest.raises(ZeroArgument):
        dd_pair("x^2", 1, 0)


def test_dd_pair_scaling():
    rng = random.Random(3)
    for _ in range(30):
        f, q = function_and_point(rng, 4)
        base = dd_pair(f, q, 1)
        for s in (F(-3), F(1, 5), F(22, 7)):
            p = dd_pair(f, q, s)
            assert p.ratio == base.ratio
            assert p.dy_assignable == base.dy_assignable * s


def test_tangent_examples():
    line = tangent_line("x^2", 1)
    assert (line.a, line.b, line.c) == (2, -1, 1)
    assert line.render() == "y = 2x - 1"
    assert tangent_line("3", 0).render() == "y = 3"
    assert tangent_line("x", 0).render() == "y = x"
    u = tangent_line("x^2", 1, "unit_normal", mode="numeric")
    r5 = math.sqrt(5)
    for got, want in zip((u.a, u.b, u.c), (2 / r5, -1 / r5, 1 / r5)):
        assert abs(float(got) - want) < 1e-12
    with pytest.raises(NumericModeRequired):
        tangent_line("x^2", 1, "unit_normal")


def test_tangent_max_coeff_and_vertical():
    m = tangent_line("x^2", 1, "max_coeff")
    assert (m.a, m.b, m.c) == (1, F(-1, 2), F(1, 2))
    with pytest.raises(VerticalTangent):
        tangent_line("x^(1/3)", 0)
    v = tangent_line("x^(1/3)", 0, "max_coeff")
    assert (v.a, v.b, v.c) == (1, 0, 0)  # the line x = 0


def test_tangent_contact_property():
    rng = random.Random(5)
    for _ in range(40):
        f, q = function_and_point(rng, 4)
        line = tangent_line(f, q)
        assert line.slope == derivative(f, q)
        y0 = evaluate_rational(f, q)
        # g(x) = f(x) - line(x) vanishes to second order at q
        assert line.a * q - line.c == y0
        g = lambda x: evaluate_rational(f, x) - (line.a * x - line.c)  # noqa: E731
        h = F(1, 10 ** 6)
        assert abs((g(q + h) - g(q)) / h) < F(1, 10 ** 3) * (1 + abs(derivative(differentiate_symbolic(f), q)))


def test_osculating_examples():
    circle, k = osculating_circle("x", "x^2", 0)
    assert circle.center == (0, F(1, 2))
    assert circle.radius_squared == F(1, 4)
    assert k == 2
    assert circle.render() == "center (0,1/2), r^2 = 1/4"
    c2, k2 = osculating_circle("cos(x)", "sin(x)", 0, mode="numeric")
    assert abs(c2.center[0]) < Decimal("1e-10") and abs(c2.center[1]) < Decimal("1e-10")
    assert abs(k2 - 1) < Decimal("1e-10")
    with pytest.raises(ZeroCurvature):
        osculating_circle("x", "2*x", F(3, 2))


CURVES = [
    ("x", "x^2"), ("x", "x^3"), ("x^2", "x^3"), ("x", "1/(1+x^2)"), ("x + x^2", "x - x^3"),
    ("2*x", "x^2 - x"), ("x^3 - x", "x^2"), ("1/(1+x)", "x"), ("x", "x^4 + x"),
    ("3*x - 1", "x^2/2"), ("x^2 + 1", "x^3 + x"), ("x", "(x-1)^3 + x^2"),
    ("x/(2+x)", "x^2"), ("x - x^2", "x + x^2"), ("x^3", "x^2 + x"), ("5*x", "x^2*(x-2)"),
    ("x + 1/(3+x)", "x^2"), ("x^2 - 2*x", "x^3/3"), ("x", "1/(2-x)"), ("x^4 + x", "x^2"),
]


def test_osculating_corpus_exact():
    count = 0
    for fx, fy in CURVES:
        for t0 in (F(1, 2), F(1), F(-2, 3)):
            k2 = analytic_curvature_squared(fx, fy, t0)
            if k2 == 0:
                with pytest.raises(ZeroCurvature):
                    osculating_circle(fx, fy, t0)
                continue
            circle, _ = osculating_circle(fx, fy, t0)
            assert 1 / circle.radius_squared == k2, (fx, fy, t0)
            count += 1
    assert count >= 20


def test_osculating_corpus_numeric():
    for fx, fy in CURVES:
        t0 = F(1, 2)
        k2 = analytic_curvature_squared(fx, fy, t0)
        if k2 == 0:
            continue
        _, k = osculating_circle(fx, fy, t0, mode="numeric")
        assert abs(float(k) - math.sqrt(k2)) < 1e-10


def test_archimedean_examples():
    w = archimedean_check("x^2", 3, 6, F(1, 100), 1000)
    # residual is exactly 1/m, so the smallest valid n is 101
    assert w == 101
    assert archimedean_check("x", 0, 1, F(1, 10 ** 9), 50) == 1
    with pytest.raises(NoWitnessFound) as info:
        archimedean_check("x^2", 3, 5, F(1, 100), 1000)
    # residual at m is 1 + 1/m, largest at m = 1
    assert info.value.max_residual == 2
    with pytest.raises(ValueError):
        archimedean_check("x", 0, 1, 0, 10)


def test_archimedean_matches_brute_force():
    f, x0, L, tol, N = "x^3", F(1), F(3), F(1, 20), 400
    # residual (1+h)^3-1)/h - 3 = 3h + h^2
    brute = next(n for n in range(1, N + 1)
                 if all(3 * F(1, m) + F(1, m * m) < tol for m in range(n, N + 1)))
    assert archimedean_check(f, x0, L, tol, N) == brute


def test_jet_examples():
    assert jet_eval("x^2+3*x", 0) == Jet2(0, 3)
    d = Jet2.generator()
    assert d * d == Jet2(0, 0)
    with pytest.raises(NonInvertibleJet):
        d.invert()
    with pytest.raises(NonInvertibleJet):
        jet_eval("1/x", 0)
    assert jet_eval("x^2/(1+x)", 2) == Jet2(F(4, 3), F(8, 9))


def test_microaffine_slope():
    assert microaffine_slope(lambda e: 7 + 4 * e + e * e) == 4
    assert microaffine_slope(lambda e: e ** 3 - 2 * e, 1) == 1
    # uniqueness: any other b leaves a nonzero remainder
    g = Jet2(F(7), F(0)) + Jet2.generator() * 4
    for b in (F(3), F(5), F(4, 3)):
        assert (g - Jet2(F(7), F(0)) - Jet2.generator() * b) != Jet2(0, 0)


def test_jet_agrees_with_lcf_on_polynomials():
    rng = random.Random(41)
    for _ in range(60):
        cs = random_polynomial(rng, 8)
        f = " + ".join(f"({c})*x^{i}" for i, c in enumerate(cs))
        q = F(rng.randint(-9, 9), rng.randint(1, 4))
        assert jet_eval(f, q).slope == derivative(f, q)


def test_jet_numeric_transcendental():
    j = jet_eval("sin(x)*exp(x)", F(1, 2), mode="numeric")
    want = math.exp(0.5) * (math.sin(0.5) + math.cos(0.5))
    assert abs(float(j.slope) - want) < 1e-14


def test_oracle_equivalence_corpus():
    rng = random.Random(2024)
    for _ in range(200):
        f, q = function_and_point(rng, 5)
        assert derivative(f, q) == evaluate_rational(differentiate_symbolic(f), q)


def test_purge_path_equality():
    rng = random.Random(99)
    for _ in range(50):
        f, q = function_and_point(rng, 4)
        dq = difference_quotient(f, q, eps)
        if not dq.terms:
            continue
        p = purge(dq)
        st = lcf.standard_part(dq)
        assert (p.coefficient(0) if lcf.leading_exponent(p) == 0 else 0) == st

