"""Scalar helpers shared by the number engine and the jet algebra.

Scalars are either :class:`fractions.Fraction` (exact mode) or
:class:`decimal.Decimal` (numeric mode).  Decimal helpers assume the caller
has already entered a decimal context with the working precision.
"""

from __future__ import annotations

from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import DomainError, NegativeLeadingCoefficient, NumericModeRequired

def to_decimal(q) -> Decimal:
    if isinstance(q, Decimal):
        return +q
    q = Fraction(q)
    return Decimal(q.numerator) / Decimal(q.denominator)


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a non-negative integer."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def exact_root(q: Fraction, k: int) -> Fraction | None:
    """The k-th root of a non-negative rational, or None when irrational."""
    a, b = q.numerator, q.denominator
    ra, rb = iroot(a, k), iroot(b, k)
    if ra ** k == a and rb ** k == b:
        return Fraction(ra, rb)
    return None


def rational_power(c: Fraction, p: Fraction) -> Fraction:
    """c**p for rational c, p when the result is rational."""
    if p.denominator == 1:
        return c ** p.numerator
    k = p.denominator
    if c < 0:
        if k % 2 == 0:
            raise NegativeLeadingCoefficient(f"even root of negative {c}")
        r = exact_root(-c, k)
        if r is None:
            raise NumericModeRequired(f"({c})^({p}) is irrational")
        r = -r
    else:
        r = exact_root(c, k)
        if r is None:
            raise NumericModeRequired(f"({c})^({p}) is irrational")
    if r == 0 and p < 0:
        raise DomainError("zero to a negative power")
    return r ** p.numerator


def decimal_power(c: Decimal, p: Fraction) -> Decimal:
    if p.denominator == 1:
        return c ** p.numerator
    if c == 0:
        if p < 0:
            raise DomainError("zero to a negative power")
        return Decimal(0)
    if c < 0:
        if p.denominator % 2 == 0:
            raise NegativeLeadingCoefficient(f"even root of negative {c}")
        return -decimal_power(-c, p)
    if p == Fraction(1, 2):
        return c.sqrt()
    with localcontext() as ctx:
        ctx.prec += 10
        r = (c.ln() * to_decimal(p)).exp()
    return +r


def decimal_sin(x: Decimal) -> Decimal:
    with localcontext() as ctx:
        ctx.prec += 5
        i, lasts, s, fact, num, sign = 1, 0, x, 1, x, 1
        while s != lasts:
            lasts = s
            i += 2
            fact *= i * (i - 1)
            num *= x * x
            sign *= -1
            s += num / fact * sign
    return +s


def decimal_cos(x: Decimal) -> Decimal:
    with localcontext() as ctx:
        ctx.prec += 5
        i, lasts, s, fact, num, sign = 0, 0, Decimal(1), 1, Decimal(1), 1
        while s != lasts:
            lasts = s
            i += 2
            fact *= i * (i - 1)
            num *= x * x
            sign *= -1
            s += num / fact * sign
    return +s


def standard_function(name: str, s, exact: bool):
    """Value of exp/ln/sin/cos at a standard scalar.

    In exact mode only the arguments with rational values are accepted.
    """
    if exact:
        s = Fraction(s)
        if name == "ln":
            if s <= 0:
                raise DomainError(f"ln of non-positive {s}")
            if s == 1:
                return Fraction(0)
        elif s == 0:
            return Fraction(1) if name in ("exp", "cos") else Fraction(0)
        raise NumericModeRequired(f"{name}({s}) is irrational")
    if name == "exp":
        return s.exp()
    if name == "ln":
        if s <= 0:
            raise DomainError(f"ln of non-positive {s}")
        return s.ln()
    if name == "sin":
        return decimal_sin(s)
    if name == "cos":
        return decimal_cos(s)
    raise DomainError(f"unknown function {name}")

