import json
import random
from fractions import Fraction as F

import pytest

from leibniz import expr as E
from leibniz import lcf
from leibniz.errors import (
    DivisionByZero, DomainError, NonRationalValue, NumericModeRequired, ParseError,
)
from leibniz.expr import (
    Add, Call, Div, Mul, Num, Pow, Var, differentiate_symbolic, evaluate,
    evaluate_rational, parse, render,
)
from leibniz.sampling import function_and_point, random_expression

eps = lcf.epsilon()
x = Var()


def test_parse_examples():
    assert parse("x^2/(1+x)") == Div(Pow(x, F(2)), Add(Num(F(1)), x))
    assert parse("2+3*x") == Add(Num(F(2)), Mul(Num(F(3)), x))
    with pytest.raises(ParseError) as info:
        parse("sin(x")
    assert info.value.position == 5
    assert info.value.expected == "')'"


def test_parse_precedence_and_associativity():
    assert parse("x-1-2") == E.Sub(E.Sub(x, Num(F(1))), Num(F(2)))
    assert parse("x/2/3") == Div(Div(x, Num(F(2))), Num(F(3)))
    assert parse("-x^2") == E.Neg(Pow(x, F(2)))
    assert parse("-2*x") == Mul(Num(F(-2)), x)
    assert parse("x^(1/3)") == Pow(x, F(1, 3))
    assert parse("x^-1") == Pow(x, F(-1))
    assert parse("sqrt(x)") == E.Sqrt(x)


@pytest.mark.parametrize("bad,pos", [
    ("", 0), ("x +", 3), ("2 x", 2), ("y", 0), ("x^", 2), ("x^(1/0)", 5),
    ("x^2^3", 3), ("(x", 2), ("x $ 1", 2), ("tan(x)", 0),
])
def test_parse_errors(bad, pos):
    with pytest.raises(ParseError) as info:
        parse(bad)
    assert info.value.position == pos
    assert 0 <= info.value.position <= len(bad) + 1


def test_spans_nest():
    f = parse("x^2/(1+x)")
    assert f.span == (0, 9)
    assert f.left.span == (0, 3)
    assert f.right.span == (4, 9)
    assert f.right.right.span == (7, 8)


def test_roundtrip_corpus():
    rng = random.Random(20240601)
    for _ in range(200):
        f = random_expression(rng, 5)
        assert parse(render(f)) == f, render(f)


def test_json_roundtrip():
    f = parse("x^(1/3) + sin(-2.5*x)/exp(x)")
    data = E.to_json(f)
    json.dumps(data)
    assert data["kind"] == "Add"
    assert E.from_json(data) == f


def test_evaluate_examples():
    assert evaluate("x^2", 3 + eps) == lcf.parse_number("9 + 6*eps + eps^2")
    r = evaluate("exp(x)", eps)
    assert r.agrees(lcf.parse_number("1 + eps + 1/2*eps^2 + 1/6*eps^3"), horizon=4)
    with pytest.raises(DivisionByZero):
        evaluate("1/x", lcf.from_rational(0))


def test_evaluate_transcendental_modes():
    with pytest.raises(NumericModeRequired):
        evaluate("exp(x)", 1 + eps)
    assert evaluate("ln(x)", 1 + eps).coefficient(2) == F(-1, 2)
    with pytest.raises(DomainError):
        evaluate("ln(x)", -1 + eps)
    n = lcf.from_rational(1, "numeric") + lcf.epsilon("numeric")
    e1 = lcf.standard_part(evaluate("exp(x)", n))
    assert abs(float(e1) - 2.718281828459045) < 1e-15


def test_evaluate_rational_examples():
    assert evaluate_rational("x^2/(1+x)", 2) == F(4, 3)
    assert evaluate_rational("x", 0) == 0
    with pytest.raises(DivisionByZero):
        evaluate_rational("1/x", 0)
    with pytest.raises(NonRationalValue):
        evaluate_rational("sqrt(x)", 2)
    assert evaluate_rational("sqrt(x) + cos(x - 1)", 1) == 2
    assert evaluate_rational("x^(3/2)", F(4, 9)) == F(8, 27)


def test_differentiate_examples():
    assert render(differentiate_symbolic(parse("x^2"))) == "2*x^1"
    assert differentiate_symbolic(parse("sin(x)")) == Call("cos", x)
    assert render(differentiate_symbolic(parse("x*exp(x)"))) == "exp(x) + x*exp(x)"


def test_evaluation_homomorphism():
    rng = random.Random(7)
    for _ in range(100):
        f, q = function_and_point(rng, 4)
        assert evaluate(f, lcf.from_rational(q)) == lcf.from_rational(evaluate_rational(f, q))


def test_oracle_consistency_with_difference_quotient():
    rng = random.Random(11)
    for _ in range(50):
        f, q = function_and_point(rng, 4)
        x0 = lcf.from_rational(q)
        quotient = (evaluate(f, x0 + eps) - evaluate(f, x0)) / eps
        assert lcf.standard_part(quotient) == evaluate_rational(differentiate_symbolic(f), q)
