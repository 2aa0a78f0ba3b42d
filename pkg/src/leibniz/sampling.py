"""Seeded random generators for property suites.

All generators take an explicit :class:`random.Random` so runs are
reproducible and no global state is touched.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import expr as E
from .errors import LeibnizError
from .lcf import LCNumber


def small_fraction(rng: random.Random, num: int = 9, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def nonzero_fraction(rng: random.Random, num: int = 9, den: int = 5) -> Fraction:
    while True:
        q = small_fraction(rng, num, den)
        if q:
            return q


def random_lcnumber(rng: random.Random, max_terms: int = 4) -> LCNumber:
    exps = [Fraction(n, d) for n in range(-3, 5) for d in (1, 2, 3)]
    k = rng.randint(0, max_terms)
    return LCNumber([(rng.choice(exps), small_fraction(rng, 20, 9)) for _ in range(k)])


def random_nonzero_lcnumber(rng: random.Random, max_terms: int = 4) -> LCNumber:
    while True:
        x = random_lcnumber(rng, max_terms)
        if not x.is_zero():
            return x


def random_rational_function(rng: random.Random, depth: int = 5) -> E.Node:
    """Random AST over + - * / and small integer powers, at most ``depth`` deep."""
    if depth <= 1 or rng.random() < 0.25:
        if rng.random() < 0.55:
            return E.Var()
        return E.Num(Fraction(rng.randint(-5, 5), rng.choice((1, 1, 2, 4))))
    kind = rng.choice(("add", "sub", "mul", "div", "pow", "neg", "add", "mul"))
    if kind == "neg":
        return E.Neg(random_rational_function(rng, depth - 1))
    if kind == "pow":
        return E.Pow(random_rational_function(rng, depth - 1),
                     Fraction(rng.choice((-2, -1, 2, 3))))
    cls = {"add": E.Add, "sub": E.Sub, "mul": E.Mul, "div": E.Div}[kind]
    return cls(random_rational_function(rng, depth - 1),
               random_rational_function(rng, depth - 1))


def random_expression(rng: random.Random, depth: int = 4) -> E.Node:
    """Random AST using every node kind (for syntax round trips)."""
    if depth <= 1 or rng.random() < 0.2:
        if rng.random() < 0.5:
            return E.Var()
        return E.Num(Fraction(rng.randint(-20, 20), rng.choice((1, 2, 4, 5, 10))))
    kind = rng.choice(("bin", "bin", "bin", "pow", "neg", "sqrt", "call"))
    sub = lambda: random_expression(rng, depth - 1)  # noqa: E731
    if kind == "neg":
        return E.Neg(sub())
    if kind == "pow":
        return E.Pow(sub(), Fraction(rng.randint(-3, 4), rng.choice((1, 1, 2, 3))))
    if kind == "sqrt":
        return E.Sqrt(sub())
    if kind == "call":
        return E.Call(rng.choice(E.FUNCTIONS), sub())
    return rng.choice(E.BINARY)(sub(), sub())


def random_polynomial(rng: random.Random, max_degree: int = 10) -> list[Fraction]:
    deg = rng.randint(0, max_degree)
    return [small_fraction(rng, 12, 6) for _ in range(deg + 1)]


def function_and_point(rng: random.Random, depth: int = 5):
    """A random rational function and a rational point where it and its
    symbolic derivative are defined."""
    while True:
        f = random_rational_function(rng, depth)
        df = E.differentiate_symbolic(f)
        for _ in range(6):
            q = small_fraction(rng, 12, 4)
            try:
                E.evaluate_rational(f, q)
                E.evaluate_rational(df, q)
            except LeibnizError:
                continue
            return f, q
