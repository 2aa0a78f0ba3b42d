"""The bounded infinite number mu = 1/eps and what can be summed over it.

Sums with mu terms are evaluated through Faulhaber closed forms, so a
Riemann sum over an infinitely fine partition becomes an exact number whose
standard part is the integral.  Families of conics indexed by an infinite
parameter are sent to their limit curve by taking standard parts of
normalized coefficients.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from . import lcf
from .errors import DegenerateFamily, DomainError, InsufficientPrecision
from .expr import as_expr, evaluate
from .lcf import DEFAULT_CONFIG, EXACT, INF, Classification, EngineConfig, LCNumber

MAX_POWER = 30


class BoundedInfinite(LCNumber):
    """A positive infinite LCNumber, for instance mu itself."""

    __slots__ = ()

    def __init__(self, terms=((-1, 1),), accuracy=INF, mode: str = EXACT,
                 config: EngineConfig = DEFAULT_CONFIG):
        super().__init__(terms, accuracy, mode, config)
        if lcf.classify(self) is not Classification.INFINITE or lcf.sign(self) <= 0:
            raise DomainError(f"{lcf.render(self)} is not a positive infinite number")

    @classmethod
    def of(cls, x: LCNumber) -> BoundedInfinite:
        return cls(x.terms, x.accuracy, x.mode, x.config)

    @property
    def value(self) -> LCNumber:
        return lcf._make(self.terms, self.accuracy, self.mode, self.config)


def mu(mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> BoundedInfinite:
    return BoundedInfinite(((-1, 1),), INF, mode, config)


# -- Bernoulli numbers and power sums -------------------------------------------------

_bernoulli: list[Fraction] = []
_bernoulli_lock = threading.Lock()


def _bernoulli_table() -> list[Fraction]:
    if not _bernoulli:
        with _bernoulli_lock:
            if not _bernoulli:
                # Akiyama-Tanigawa: yields B_1 = +1/2
                table, a = [], [Fraction(0)] * (MAX_POWER + 1)
                for m in range(MAX_POWER + 1):
                    a[m] = Fraction(1, m + 1)
                    for j in range(m, 0, -1):
                        a[j - 1] = j * (a[j - 1] - a[j])
                    table.append(a[0])
                _bernoulli.extend(table)
    return _bernoulli


def bernoulli(j: int) -> Fraction:
    if not 0 <= j <= MAX_POWER:
        raise ValueError(f"Bernoulli index {j} outside 0..{MAX_POWER}")
    return _bernoulli_table()[j]


@dataclass(frozen=True)
class ClosedFormSum:
    """sum_{i=1}^{n} i^k as a polynomial in n (coefficients ascending)."""

    k: int
    coefficients: tuple[Fraction, ...]

    def __call__(self, n):
        return sum(c * n ** j for j, c in enumerate(self.coefficients))

    def at_mu(self, mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
        return LCNumber([(-j, c) for j, c in enumerate(self.coefficients)], INF, mode, config)

    def render(self) -> str:
        parts = []
        for j in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[j]
            if c == 0:
                continue
            mono = "" if j == 0 else "n" if j == 1 else f"n^{j}"
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            elif abs(c).numerator == 1:
                body = f"{mono}/{abs(c).denominator}"
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts) or "0"
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __str__(self):
        return self.render()


def sum_powers(k: int) -> ClosedFormSum:
    if not 0 <= k <= MAX_POWER:
        raise ValueError(f"power {k} outside 0..{MAX_POWER}")
    coeffs = [Fraction(0)] * (k + 2)
    for j in range(k + 1):
        coeffs[k + 1 - j] += Fraction(comb(k + 1, j)) * bernoulli(j) / (k + 1)
    return ClosedFormSum(k, tuple(coeffs))


# -- polynomials ------------------------------------------------------------------------

def poly_coefficients(p) -> list[Fraction]:
    """Ascending coefficients of a polynomial given as a list or an expression."""
    if isinstance(p, (list, tuple)):
        return [Fraction(c) for c in p]
    v = evaluate(as_expr(p), mu().value)
    if v.accuracy != INF or any(e > 0 or e.denominator != 1 for e, _ in v.terms):
        raise DomainError(f"{p!r} is not a polynomial")
    deg = -int(v.terms[0][0]) if v.terms else 0
    return [v.coefficient(-j) for j in range(deg + 1)]


def poly_eval(cs: Sequence[Fraction], x):
    out = 0 * x
    for c in reversed(cs):
        out = out * x + c
    return out


def _power_sum_at_mu(j: int, rule: str) -> dict[int, Fraction]:
    """sum of i^j over the right (1..mu) or left (0..mu-1) sample indices,
    as {power of mu: coefficient}."""
    s = {m: c for m, c in enumerate(sum_powers(j).coefficients) if c}
    if rule == "left":
        s[j] = s.get(j, Fraction(0)) - 1
        if j == 0:
            s[0] = s.get(0, Fraction(0)) + 1  # the i = 0 term 0^0
    return s


def riemann_sum_poly(p, a, b, rule: str = "right", mode: str = EXACT,
                     config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    """Sum of p(a + i h) h over a partition of [a, b] into mu pieces, h = (b-a)/mu."""
    if rule not in ("right", "left"):
        raise ValueError(f"unknown rule {rule!r}")
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise DomainError("interval must have a < b")
    cs, w = poly_coefficients(p), b - a
    terms: dict[Fraction, Fraction] = {}
    # p(a + i h) = sum_k c_k sum_j C(k,j) a^(k-j) h^j i^j, with h = w eps
    for k, c in enumerate(cs):
        if c == 0:
            continue
        for j in range(k + 1):
            base = c * comb(k, j) * a ** (k - j) * w ** (j + 1)
            for m, s in _power_sum_at_mu(j, rule).items():
                e = Fraction(j + 1 - m)
                terms[e] = terms.get(e, Fraction(0)) + base * s
    return LCNumber(terms, INF, mode, config)


def integrate_poly(p, a, b):
    return lcf.standard_part(riemann_sum_poly(p, a, b))


def antiderivative_difference(p, a, b) -> Fraction:
    cs = poly_coefficients(p)
    a, b = Fraction(a), Fraction(b)
    return sum(c * (b ** (k + 1) - a ** (k + 1)) / (k + 1) for k, c in enumerate(cs))


def microstraightness_check(fx, fy, t0, mode: str = EXACT,
                            config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    """mu^2 |alpha(t0 + 1/mu) - alpha(t0)|^2; its standard part is the squared speed."""
    fx, fy = as_expr(fx), as_expr(fy)
    t = lcf.from_rational(t0, mode, config)
    h = lcf.epsilon(mode, config)
    dx = evaluate(fx, t + h) - evaluate(fx, t)
    dy = evaluate(fy, t + h) - evaluate(fy, t)
    m = mu(mode, config).value
    return m * m * (dx * dx + dy * dy)


# -- conic families ---------------------------------------------------------------------

NAMES = ("A", "B", "C", "D", "E", "F")
_MONOMIALS = ("x^2", "x*y", "y^2", "x", "y", "")


@dataclass(frozen=True)
class ConicFamily:
    """A(t) x^2 + B(t) xy + C(t) y^2 + D(t) x + E(t) y + F(t) = 0."""

    A: tuple = ()
    B: tuple = ()
    C: tuple = ()
    D: tuple = ()
    E: tuple = ()
    F: tuple = ()

    def __post_init__(self):
        for n in NAMES:
            object.__setattr__(self, n, tuple(Fraction(c) for c in getattr(self, n)))

    @property
    def polynomials(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(getattr(self, n) for n in NAMES)

    def at(self, t):
        return tuple(poly_eval(p, t) if p else 0 * t for p in self.polynomials)

    @classmethod
    def from_json(cls, data: dict) -> ConicFamily:
        unknown = set(data) - set(NAMES)
        if unknown:
            raise ValueError(f"unknown coefficient names {sorted(unknown)}")
        return cls(**{n: tuple(Fraction(str(c)) for c in data.get(n, ())) for n in NAMES})

    def to_json(self) -> dict:
        return {n: [str(c) for c in getattr(self, n)] for n in NAMES}


# the ellipses with foci (0,1), (0,t+1) through the origin
ELLIPSE_FAMILY = ConicFamily(A=(4, 4, 1), C=(4, 4), E=(-8, -12, -4))


def conic_limit(family: ConicFamily, mode: str = EXACT,
                config: EngineConfig = DEFAULT_CONFIG) -> tuple:
    """Standard parts of the coefficients at t = mu, normalized by the
    dominant coefficient (the first one in A..F order on ties)."""
    m = mu(mode, config).value
    values = [poly_eval(p, m) if p else lcf.zero(mode, config) for p in family.polynomials]
    live = [v for v in values if not v.is_zero()]
    if not live:
        raise DegenerateFamily("all six coefficients vanish at t = mu")
    if any(not v.terms for v in live):
        raise InsufficientPrecision("coefficient undecided within the horizon")
    pivot = min(live, key=lcf.leading_exponent)
    inv = pivot.invert()
    return tuple(lcf.standard_part(v * inv) for v in values)


def render_conic(coeffs: Sequence) -> str:
    """Equation text with positive terms on the left and the rest on the right."""
    left, right = [], []
    for c, mono in zip(coeffs, _MONOMIALS):
        if c == 0:
            continue
        side = left if c > 0 else right
        a = abs(c)
        side.append(str(a) if not mono else mono if a == 1 else f"{a}*{mono}")
    return f"{' + '.join(left) or '0'} = {' + '.join(right) or '0'}"
