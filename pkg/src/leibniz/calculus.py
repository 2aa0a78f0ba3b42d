"""Infinitesimal calculus procedures over the number engine.

Derivatives are standard parts of difference quotients taken with the
infinitesimal ``eps``; tangents and osculating circles come from two or
three infinitely close points on a curve.  :class:`Jet2` is the contrasting
nilsquare algebra, in which the generator squares to zero and has no
inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable

from . import _scalar, lcf
from .errors import (
    DomainError, InfinitePart, InsufficientPrecision, LeibnizError, NoWitnessFound,
    NonInvertibleJet, NotInfinitesimal, VerticalTangent, WindowTooSmall, ZeroArgument,
    ZeroCurvature,
)
from .expr import (
    Add, Call, Div, Mul, Neg, Node, Num, Pow, Sqrt, Sub, Var, as_expr, evaluate,
    evaluate_rational,
)
from .lcf import DEFAULT_CONFIG, EXACT, Classification, EngineConfig, LCNumber

SLOPE_INTERCEPT = "slope_intercept"
UNIT_NORMAL = "unit_normal"
MAX_COEFF = "max_coeff"
NORMALIZATIONS = (SLOPE_INTERCEPT, UNIT_NORMAL, MAX_COEFF)


def _fmt(q) -> str:
    return str(q)


@dataclass(frozen=True)
class DdPair:
    dx_assignable: Fraction
    dy_assignable: Fraction
    ratio: Fraction

    def to_json(self) -> dict:
        return {"dx": str(self.dx_assignable), "dy": str(self.dy_assignable),
                "ratio": str(self.ratio)}


@dataclass(frozen=True)
class LineEq:
    """The line a*x + b*y = c."""

    a: object
    b: object
    c: object
    normalization: str

    @property
    def slope(self):
        if self.b == 0:
            raise VerticalTangent("vertical line has no slope")
        return -self.a / self.b

    def render(self) -> str:
        if self.normalization == SLOPE_INTERCEPT:
            m, k = self.a, -self.c
            if m == 0:
                return f"y = {_fmt(k)}"
            lead = "x" if m == 1 else "-x" if m == -1 else f"{_fmt(m)}x"
            if k == 0:
                return f"y = {lead}"
            sign = "-" if k < 0 else "+"
            return f"y = {lead} {sign} {_fmt(abs(k))}"
        return f"{_fmt(self.a)}*x + {_fmt(self.b)}*y = {_fmt(self.c)}"

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c),
                "normalization": self.normalization, "text": self.render()}


@dataclass(frozen=True)
class CircleEq:
    center: tuple
    radius_squared: object

    def render(self) -> str:
        cx, cy = self.center
        return f"center ({_fmt(cx)},{_fmt(cy)}), r^2 = {_fmt(self.radius_squared)}"

    def __str__(self):
        return self.render()

    def to_json(self) -> dict:
        return {"center": [str(self.center[0]), str(self.center[1])],
                "radius_squared": str(self.radius_squared), "text": self.render()}


# -- difference quotients and derivatives ----------------------------------------

def difference_quotient(f, x0, dx: LCNumber) -> LCNumber:
    """(f(x0 + dx) - f(x0)) / dx for an infinitesimal dx."""
    f = as_expr(f)
    if lcf.classify(dx) is not Classification.INFINITESIMAL:
        raise NotInfinitesimal(f"{dx} is not a nonzero infinitesimal")
    a = lcf.from_rational(x0, dx.mode, dx.config)
    return (evaluate(f, a + dx) - evaluate(f, a)) / dx


def derivative(f, x0, mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG):
    """Standard part of the difference quotient with increment eps."""
    q = difference_quotient(f, x0, lcf.epsilon(mode, config))
    return lcf.standard_part(q)


def nth_derivative(f, x0, n: int, mode: str = EXACT,
                   config: EngineConfig = DEFAULT_CONFIG):
    """n! times the coefficient of eps^n in f(x0 + eps)."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    if n > config.window:
        raise WindowTooSmall(f"order {n} exceeds truncation window {config.window}")
    a = lcf.from_rational(x0, mode, config)
    v = evaluate(as_expr(f), a + lcf.epsilon(mode, config))
    for e, _ in v.terms:
        if e >= n:
            break
        if e < 0 or e.denominator != 1:
            raise InfinitePart(f"term eps^{e} makes the order-{n} derivative infinite")
    return v.coefficient(n) * math.factorial(n)


def dd_pair(f, x0, dx_assignable, mode: str = EXACT,
            config: EngineConfig = DEFAULT_CONFIG) -> DdPair:
    """Assignable (d)x and (d)y = L * (d)x, with L the derivative at x0."""
    if dx_assignable == 0:
        raise ZeroArgument("(d)x must be nonzero")
    ratio = derivative(f, x0, mode, config)
    dx = Fraction(dx_assignable) if mode == EXACT else _scalar_in(dx_assignable, config)
    return DdPair(dx, ratio * dx, ratio)


def _scalar_in(q, config):
    with localcontext() as ctx:
        ctx.prec = config.numeric_precision
        return _scalar.to_decimal(q)


# -- tangent line -------------------------------------------------------------------

def _largest(values: list[LCNumber]) -> LCNumber:
    best = None
    for v in values:
        if v.is_zero():
            continue
        if best is None or abs(v) > abs(best):
            best = v
    return best


def tangent_line(f, x0, normalization: str | None = None, mode: str = EXACT,
                 config: EngineConfig = DEFAULT_CONFIG) -> LineEq:
    """Line through (x0, f(x0)) and (x0 + eps, f(x0 + eps)), with standard
    parts taken of its normalized coefficients."""
    if normalization is None:
        normalization = SLOPE_INTERCEPT if mode == EXACT else UNIT_NORMAL
    if normalization not in NORMALIZATIONS:
        raise ValueError(f"unknown normalization {normalization!r}")
    f = as_expr(f)
    e = lcf.epsilon(mode, config)
    xd = lcf.from_rational(x0, mode, config)
    yd = evaluate(f, xd)
    ye = evaluate(f, xd + e)
    a, b = ye - yd, -e
    c = a * xd + b * yd
    if normalization == SLOPE_INTERCEPT:
        k = -b.invert()
    elif normalization == UNIT_NORMAL:
        k = (a * a + b * b).power(Fraction(-1, 2))
    else:
        k = _largest([a, b, c]).invert()
    try:
        coeffs = [lcf.standard_part(v * k) for v in (a, b, c)]
    except InfinitePart:
        raise VerticalTangent(f"tangent at x0={x0} is vertical") from None
    return LineEq(*coeffs, normalization)


# -- osculating circle ----------------------------------------------------------------

def _sqrt_scalar(v, mode, config):
    if mode == EXACT:
        r = _scalar.exact_root(Fraction(v), 2)
        if r is not None:
            return r
    with localcontext() as ctx:
        ctx.prec = config.numeric_precision
        return _scalar.to_decimal(v).sqrt()


def _is_infinite(v: LCNumber) -> bool:
    if v.terms:
        return lcf.leading_exponent(v) < 0
    if v.accuracy <= 0:
        raise InsufficientPrecision(f"magnitude of O(eps^{v.accuracy}) unknown")
    return False


def osculating_circle(fx, fy, t0, mode: str = EXACT,
                      config: EngineConfig = DEFAULT_CONFIG):
    """Circle through alpha(t0 - eps), alpha(t0), alpha(t0 + eps).

    Returns ``(CircleEq, curvature)``; the curvature is exact when the
    squared radius is a rational square and a Decimal otherwise.
    """
    fx, fy = as_expr(fx), as_expr(fy)
    e = lcf.epsilon(mode, config)
    t = lcf.from_rational(t0, mode, config)
    (xm, ym), (x0, y0), (xp, yp) = [
        (evaluate(fx, t + k * e), evaluate(fy, t + k * e)) for k in (-1, 0, 1)]
    # perpendicular bisectors: 2 (P - P0) . C = |P|^2 - |P0|^2
    n0 = x0 * x0 + y0 * y0
    a11, a12, b1 = 2 * (xp - x0), 2 * (yp - y0), xp * xp + yp * yp - n0
    a21, a22, b2 = 2 * (xm - x0), 2 * (ym - y0), xm * xm + ym * ym - n0
    det = a11 * a22 - a12 * a21
    # for a regular curve det = 4 (alpha' x alpha'') eps^3 + higher order
    if det.terms:
        flat = lcf.leading_exponent(det) > 3
    elif det.accuracy > 3:
        flat = True
    else:
        raise InsufficientPrecision("collinearity undecided within the horizon")
    if flat:
        raise ZeroCurvature(f"points near t0={t0} are collinear at dominant order")
    inv = det.invert()
    cx = (b1 * a22 - a12 * b2) * inv
    cy = (a11 * b2 - a21 * b1) * inv
    if _is_infinite(cx) or _is_infinite(cy):
        raise ZeroCurvature(f"center at t0={t0} is infinitely far")
    r2 = lcf.standard_part((cx - x0) ** 2 + (cy - y0) ** 2)
    if r2 == 0:
        raise ZeroCurvature("degenerate circle")
    circle = CircleEq((lcf.standard_part(cx), lcf.standard_part(cy)), r2)
    r = _sqrt_scalar(r2, mode, config)
    if isinstance(r, Decimal):
        with localcontext() as ctx:
            ctx.prec = config.numeric_precision
            return circle, 1 / r
    return circle, 1 / r


def analytic_curvature_squared(fx, fy, t0) -> Fraction:
    """(x'y'' - y'x'')^2 / (x'^2 + y'^2)^3 from symbolic derivatives."""
    from .expr import differentiate_symbolic as D
    fx, fy = as_expr(fx), as_expr(fy)
    x1, y1 = evaluate_rational(D(fx), t0), evaluate_rational(D(fy), t0)
    x2, y2 = evaluate_rational(D(D(fx)), t0), evaluate_rational(D(D(fy)), t0)
    return (x1 * y2 - y1 * x2) ** 2 / (x1 * x1 + y1 * y1) ** 3


# -- Archimedean translation ----------------------------------------------------------

def archimedean_check(f, x0, L, tol, N: int) -> int:
    """Smallest n <= N with |m (f(x0 + 1/m) - f(x0)) - L| < tol for all m in [n, N].

    Uses exact rational arithmetic only, with the increments h = 1/m.
    """
    tol, L, x0 = Fraction(tol), Fraction(L), Fraction(x0)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    f = as_expr(f)
    f0 = evaluate_rational(f, x0)

    def residual(m):
        try:
            return abs((evaluate_rational(f, x0 + Fraction(1, m)) - f0) * m - L)
        except LeibnizError:
            return None

    witness = None
    for m in range(N, 0, -1):
        r = residual(m)
        if r is None or r >= tol:
            break
        witness = m
    if witness is None:
        worst = max((r for r in map(residual, range(1, N + 1)) if r is not None), default=None)
        raise NoWitnessFound(worst, f"max residual {worst} on m in [1, {N}]; tolerance {tol}")
    return witness


# -- nilsquare jets --------------------------------------------------------------------

@dataclass(frozen=True)
class Jet2:
    """value + slope*d with d*d = 0."""

    value: object
    slope: object

    @classmethod
    def generator(cls) -> Jet2:
        return cls(Fraction(0), Fraction(1))

    @staticmethod
    def lift(v) -> Jet2:
        return v if isinstance(v, Jet2) else Jet2(v, v * 0)

    def __add__(self, o):
        o = Jet2.lift(o)
        return Jet2(self.value + o.value, self.slope + o.slope)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.slope)

    def __sub__(self, o):
        return self + (-Jet2.lift(o))

    def __rsub__(self, o):
        return Jet2.lift(o) - self

    def __mul__(self, o):
        o = Jet2.lift(o)
        return Jet2(self.value * o.value, self.value * o.slope + self.slope * o.value)

    __rmul__ = __mul__

    def invert(self) -> Jet2:
        if self.value == 0:
            raise NonInvertibleJet("nilsquare elements have no inverse")
        return Jet2(1 / self.value, -self.slope / (self.value * self.value))

    def __truediv__(self, o):
        return self * Jet2.lift(o).invert()

    def __rtruediv__(self, o):
        return Jet2.lift(o) * self.invert()

    def power(self, p) -> Jet2:
        p = Fraction(p)
        v, s = self.value, self.slope
        if v == 0:
            if p.denominator == 1 and p >= 0:
                if p == 0:
                    return Jet2(v * 0 + 1, s * 0)
                return Jet2(v, s) if p == 1 else Jet2(v, s * 0)
            if p < 0:
                raise NonInvertibleJet("negative power of a nilsquare element")
            raise DomainError(f"power {p} of a nilsquare element is not smooth")
        exact = isinstance(v, Fraction)
        pw = _scalar.rational_power(v, p) if exact else _scalar.decimal_power(v, p)
        pw1 = pw / v
        coef = p if exact else _scalar.to_decimal(p)
        return Jet2(pw, coef * pw1 * s)

    def __pow__(self, p):
        return self.power(p)

    def apply(self, name: str) -> Jet2:
        v, s = self.value, self.slope
        exact = isinstance(v, Fraction)
        value = _scalar.standard_function(name, v, exact)
        if name == "exp":
            return Jet2(value, value * s)
        if name == "ln":
            return Jet2(value, s / v)
        if name == "sin":
            return Jet2(value, _scalar.standard_function("cos", v, exact) * s)
        if name == "cos":
            return Jet2(value, -_scalar.standard_function("sin", v, exact) * s)
        raise DomainError(f"unknown function {name}")

    def to_json(self) -> dict:
        return {"value": str(self.value), "slope": str(self.slope)}

    def __str__(self):
        return f"Jet2({self.value}, {self.slope})"


def _jet_eval(f: Node, x: Jet2) -> Jet2:
    def ev(n: Node) -> Jet2:
        match n:
            case Var():
                return x
            case Num(value=v):
                return Jet2.lift(v if isinstance(x.value, Fraction) else _scalar.to_decimal(v))
            case Neg(arg=a):
                return -ev(a)
            case Add(left=a, right=b):
                return ev(a) + ev(b)
            case Sub(left=a, right=b):
                return ev(a) - ev(b)
            case Mul(left=a, right=b):
                return ev(a) * ev(b)
            case Div(left=a, right=b):
                return ev(a) / ev(b)
            case Pow(base=a, exponent=e):
                return ev(a).power(e)
            case Sqrt(arg=a):
                v = ev(a)
                if v.value < 0:
                    raise DomainError("square root of a negative number")
                return v.power(Fraction(1, 2))
            case Call(func=fn, arg=a):
                return ev(a).apply(fn)
        raise TypeError(f"not an expression node: {n!r}")

    return ev(f)


def jet_eval(f, x0, mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> Jet2:
    """(f(x0), f'(x0)) computed with jet arithmetic alone."""
    f = as_expr(f)
    if mode == EXACT:
        return _jet_eval(f, Jet2(Fraction(x0), Fraction(1)))
    with localcontext() as ctx:
        ctx.prec = config.numeric_precision
        return _jet_eval(f, Jet2(_scalar.to_decimal(x0), Decimal(1)))


def microaffine_slope(g: Callable[[Jet2], object], x0=0):
    """The unique b with g(x0 + d) = g(x0) + b*d for the nilsquare d."""
    x0 = Fraction(x0) if not isinstance(x0, Decimal) else x0
    d = Jet2.generator()
    out = Jet2.lift(g(Jet2(x0, x0 * 0 + 1)))
    b = out.slope
    remainder = out - Jet2(out.value, out.value * 0) - d * b
    if remainder.value != 0 or remainder.slope != 0:
        raise DomainError("g is not affine on the nilsquare neighbourhood")
    return b
