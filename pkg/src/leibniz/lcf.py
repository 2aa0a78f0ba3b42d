"""Truncated Levi-Civita arithmetic.

An :class:`LCNumber` is a finite sum of terms ``c * eps**q`` with rational
exponents ``q`` and coefficients ``c`` that are either exact rationals or
fixed-precision decimals, together with an *accuracy horizon*: every term
with exponent at or beyond the horizon is unknown.  Exact operations
(sums, products, integer powers) keep an infinite horizon; expansions that
have to be cut off (inverses, fractional powers, transcendental functions)
stop ``window`` orders above the leading exponent of the result.

``eps`` is a positive infinitesimal, so ``eps**q`` with ``q > 0`` is
infinitesimal, ``q < 0`` infinite, and the ordering of two numbers is
decided by the sign of the leading coefficient of their difference.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation, localcontext
from fractions import Fraction
from functools import wraps
from itertools import count

from . import _scalar
from .errors import (
    DivisionByZero,
    DomainError,
    InfinitePart,
    InsufficientPrecision,
    ModeMismatch,
    NegativeLeadingCoefficient,
    NumberSyntaxError,
    NumericModeRequired,
    TermOverflow,
    ZeroHasNoLeadingExponent,
)

INF = math.inf
EXACT = "exact"
NUMERIC = "numeric"
MODES = (EXACT, NUMERIC)


@dataclass(frozen=True)
class EngineConfig:
    window: Fraction = Fraction(12)
    numeric_precision: int = 50
    max_terms: int = 256

    def __post_init__(self):
        object.__setattr__(self, "window", Fraction(self.window))
        if self.window <= 0:
            raise ValueError("truncation window must be positive")
        if self.max_terms < 8:
            raise ValueError("max_terms must be at least 8")
        if self.numeric_precision < 20:
            raise ValueError("numeric precision must be at least 20 digits")

    @property
    def tolerance(self) -> Decimal:
        return Decimal(1).scaleb(-(self.numeric_precision - 10))


DEFAULT_CONFIG = EngineConfig()


class Classification(enum.Enum):
    ZERO = "Zero"
    INFINITESIMAL = "Infinitesimal"
    APPRECIABLE = "Appreciable"
    INFINITE = "Infinite"

    def __str__(self):
        return self.value


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def __str__(self):
        return self.name.capitalize()


def _numeric(method):
    """Run ``method`` inside the decimal context of its first argument."""

    @wraps(method)
    def wrapper(self, *args, **kwargs):
        if self.mode != NUMERIC:
            return method(self, *args, **kwargs)
        with localcontext() as ctx:
            ctx.prec = self.config.numeric_precision
            return method(self, *args, **kwargs)

    return wrapper


class LCNumber:
    """Immutable truncated Levi-Civita number.

    >>> x = parse_number("3 + 5*eps")
    >>> standard_part(x * x)
    Fraction(9, 1)

    Equality with ``==`` is structural (same terms, horizon and mode); use
    :func:`compare` for the order and :meth:`agrees` for equality up to the
    horizons.
    """

    __slots__ = ("terms", "accuracy", "mode", "config")

    def __init__(self, terms=(), accuracy=INF, mode: str = EXACT,
                 config: EngineConfig = DEFAULT_CONFIG):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        if isinstance(terms, dict):
            terms = terms.items()
        acc = accuracy if accuracy == INF else Fraction(accuracy)
        merged: dict[Fraction, object] = {}
        with localcontext() as ctx:
            ctx.prec = config.numeric_precision
            for e, c in terms:
                e = Fraction(e)
                c = _coerce_scalar(c, mode)
                merged[e] = merged[e] + c if e in merged else c
        items = sorted((e, c) for e, c in merged.items() if c != 0 and e < acc)
        _init(self, tuple(items), acc, mode, config)

    def __setattr__(self, name, value):
        raise AttributeError("LCNumber is immutable")

    # -- construction helpers -------------------------------------------------

    def _like(self, terms, accuracy) -> LCNumber:
        return _make(terms, accuracy, self.mode, self.config)

    def _lift(self, other) -> LCNumber:
        if isinstance(other, LCNumber):
            if other.mode != self.mode:
                raise ModeMismatch(f"{self.mode} vs {other.mode}")
            return other
        if isinstance(other, (int, Fraction)) or (
                isinstance(other, Decimal) and self.mode == NUMERIC):
            return from_rational(other, self.mode, self.config)
        if isinstance(other, float) and self.mode == NUMERIC:
            return from_rational(Decimal(other), self.mode, self.config)
        return NotImplemented

    # -- inspection -----------------------------------------------------------

    def is_zero(self) -> bool:
        """True only for the exact zero (no terms, infinite horizon)."""
        return not self.terms and self.accuracy == INF

    @property
    def exact(self) -> bool:
        return self.accuracy == INF

    def coefficient(self, exponent) -> object:
        """Coefficient of ``eps**exponent``; raises if beyond the horizon."""
        exponent = Fraction(exponent)
        if exponent >= self.accuracy:
            raise InsufficientPrecision(
                f"coefficient of eps^{exponent} lies beyond horizon {self.accuracy}")
        for e, c in self.terms:
            if e == exponent:
                return c
        return _zero_scalar(self.mode)

    def agrees(self, other, horizon=None) -> bool:
        """Equal coefficients below the smaller of both horizons (or ``horizon``)."""
        other = self._lift(other)
        cut = min(self.accuracy, other.accuracy)
        if horizon is not None:
            cut = min(cut, Fraction(horizon))
        a = [(e, c) for e, c in self.terms if e < cut]
        b = [(e, c) for e, c in other.terms if e < cut]
        return a == b

    def __eq__(self, other):
        if isinstance(other, LCNumber):
            return (self.mode == other.mode and self.terms == other.terms
                    and self.accuracy == other.accuracy)
        if isinstance(other, (int, Fraction)):
            return self == from_rational(other, self.mode, self.config)
        return NotImplemented

    def __hash__(self):
        return hash((self.terms, self.accuracy, self.mode))

    def __repr__(self):
        return f"LCNumber({render(self)!r})"

    def __str__(self):
        return render(self)

    # -- arithmetic -----------------------------------------------------------

    @_numeric
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        acc = min(self.accuracy, other.accuracy)
        out: dict[Fraction, object] = {}
        scale: dict[Fraction, object] = {}
        for e, c in self.terms + other.terms:
            if e >= acc:
                continue
            if e in out:
                out[e] += c
                scale[e] = max(scale[e], abs(c))
            else:
                out[e] = c
                scale[e] = abs(c)
        return self._like(self._clean(out, scale), acc)

    __radd__ = __add__

    @_numeric
    def __neg__(self):
        return self._like(tuple((e, -c) for e, c in self.terms), self.accuracy)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self._mul(other.invert())

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other._mul(self.invert())

    def __pow__(self, p):
        return self.power(p)

    @_numeric
    def __abs__(self):
        if not self.terms:
            return self
        return -self if self.terms[0][1] < 0 else self

    def __lt__(self, other):
        return compare(self, other) is Ordering.LESS

    def __le__(self, other):
        return compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        return compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        return compare(self, other) is not Ordering.LESS

    def _clean(self, out, scale):
        """Drop cancelled coefficients (relative tolerance in numeric mode)."""
        if self.mode == EXACT:
            return tuple(sorted((e, c) for e, c in out.items() if c != 0))
        tol = self.config.tolerance
        return tuple(sorted((e, c) for e, c in out.items()
                            if c != 0 and abs(c) > tol * scale[e]))

    def _lead_star(self):
        # Leading exponent, or the horizon for a number with no known terms.
        return self.terms[0][0] if self.terms else self.accuracy

    @_numeric
    def _mul(self, other: LCNumber, cut=INF) -> LCNumber:
        acc = min(self.accuracy + other._lead_star(),
                  other.accuracy + self._lead_star(), cut)
        out: dict[Fraction, object] = {}
        scale: dict[Fraction, object] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if e >= acc:
                    break
                c = c1 * c2
                if e in out:
                    out[e] += c
                    scale[e] = max(scale[e], abs(c))
                else:
                    out[e] = c
                    scale[e] = abs(c)
        return self._like(self._clean(out, scale), acc)

    @_numeric
    def _scale(self, c, shift=Fraction(0)) -> LCNumber:
        """Multiply by the scalar ``c`` and by ``eps**shift``."""
        return self._like(tuple((e + shift, k * c) for e, k in self.terms),
                          self.accuracy + shift)

    def _split(self):
        """Write self = c * eps^lam * (1 + u); return (lam, c, u)."""
        if not self.terms:
            if self.accuracy == INF:
                raise DivisionByZero("zero has no leading term")
            raise InsufficientPrecision(
                f"number is O(eps^{self.accuracy}); leading term unknown")
        lam, c = self.terms[0]
        inv = 1 / c
        u = self._like(tuple((e - lam, k * inv) for e, k in self.terms[1:]),
                       self.accuracy - lam)
        return lam, c, u

    @_numeric
    def _series(self, coefficients, horizon) -> LCNumber:
        """Sum a_k * self**k for k >= 0 up to (excluding) ``eps**horizon``.

        ``self`` must be infinitesimal or zero; ``coefficients`` yields the
        rational a_0, a_1, ...
        """
        coefficients = iter(coefficients)
        total = from_rational(next(coefficients), self.mode, self.config)
        power = from_rational(1, self.mode, self.config)
        for a_k in coefficients:
            power = power._mul(self, cut=horizon)
            if not power.terms:
                break
            if a_k:
                total = total + power._scale(_coerce_scalar(a_k, self.mode))
        return self._like(tuple((e, c) for e, c in total.terms if e < horizon),
                          min(total.accuracy, horizon))

    @_numeric
    def invert(self) -> LCNumber:
        lam, c, u = self._split()
        inv = 1 / c
        if not u.terms and u.accuracy == INF:
            return self._like(((-lam, inv),), INF)
        w = min(self.config.window, self.accuracy - lam)
        s = (-u)._series(_alternating_ones(), w)
        return s._scale(inv, -lam)

    @_numeric
    def power(self, p) -> LCNumber:
        p = Fraction(p)
        if p.denominator == 1 and p >= 0:
            return self._int_power(p.numerator)
        if not self.terms and self.accuracy == INF:
            raise DivisionByZero(f"zero to the power {p}")
        if p.denominator == 1:
            return self._int_power(-p.numerator).invert()
        lam, c, u = self._split()
        if c < 0 and (p.denominator % 2 == 0 or p < 0):
            raise NegativeLeadingCoefficient(
                f"leading coefficient {c} is negative for power {p}")
        if self.mode == EXACT:
            root = _scalar.rational_power(c, p)
        else:
            root = _scalar.decimal_power(c, p)
        if not u.terms and u.accuracy == INF:
            return self._like(((p * lam, root),), INF)
        w = min(self.config.window, self.accuracy - lam)
        s = u._series(_binomials(p), w)
        return s._scale(root, p * lam)

    def _int_power(self, n: int) -> LCNumber:
        result = from_rational(1, self.mode, self.config)
        base = self
        while n:
            if n & 1:
                result = result._mul(base)
            n >>= 1
            if n:
                base = base._mul(base)
        return result


def _init(obj, terms, accuracy, mode, config):
    if len(terms) > config.max_terms:
        raise TermOverflow(f"{len(terms)} terms exceed max_terms={config.max_terms}")
    object.__setattr__(obj, "terms", terms)
    object.__setattr__(obj, "accuracy", accuracy)
    object.__setattr__(obj, "mode", mode)
    object.__setattr__(obj, "config", config)


def _make(terms, accuracy, mode, config) -> LCNumber:
    """Trusted constructor: ``terms`` already canonical."""
    obj = object.__new__(LCNumber)
    if accuracy != INF:
        terms = tuple(t for t in terms if t[0] < accuracy)
    _init(obj, terms, accuracy, mode, config)
    return obj


def _zero_scalar(mode):
    return Fraction(0) if mode == EXACT else Decimal(0)


def _coerce_scalar(c, mode):
    if mode == EXACT:
        if isinstance(c, (Decimal, float)):
            raise ModeMismatch("decimal coefficient in exact mode")
        return Fraction(c)
    if isinstance(c, Decimal):
        return +c
    if isinstance(c, float):
        return +Decimal(c)
    return _scalar.to_decimal(c)


def _alternating_ones():
    # geometric series 1/(1+u) = sum (-u)^k; caller passes -u
    while True:
        yield 1


def _binomials(p: Fraction):
    b = Fraction(1)
    for k in count(1):
        yield b
        b = b * (p - k + 1) / k


def _inverse_factorials():
    f = Fraction(1)
    for k in count(0):
        if k:
            f /= k
        yield k, f


def _exp_coefficients():
    for _, f in _inverse_factorials():
        yield f


def _sin_coefficients():
    for k, f in _inverse_factorials():
        yield f * (-1) ** (k // 2) if k % 2 else 0


def _cos_coefficients():
    for k, f in _inverse_factorials():
        yield 0 if k % 2 else f * (-1) ** (k // 2)


def _log1p_coefficients():
    yield 0
    for k in count(1):
        yield Fraction((-1) ** (k + 1), k)


# -- constructors --------------------------------------------------------------

def from_rational(q, mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    """Embed a standard number."""
    if mode == NUMERIC:
        with localcontext() as ctx:
            ctx.prec = config.numeric_precision
            c = _coerce_scalar(q, mode)
    else:
        c = _coerce_scalar(q, mode)
    return _make(((Fraction(0), c),) if c != 0 else (), INF, mode, config)


def epsilon(mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    """The positive infinitesimal generator ``eps``."""
    return _make(((Fraction(1), _coerce_scalar(1, mode)),), INF, mode, config)


def monomial(c, q, mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    return LCNumber({Fraction(q): c}, INF, mode, config)


def zero(mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    return _make((), INF, mode, config)


def as_number(x, mode: str = EXACT, config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    if isinstance(x, LCNumber):
        return x
    if isinstance(x, str):
        return parse_number(x, mode, config)
    return from_rational(x, mode, config)


# -- field operations ------------------------------------------------------------

def add(a: LCNumber, b: LCNumber) -> LCNumber:
    return a + b


def negate(a: LCNumber) -> LCNumber:
    return -a


def multiply(a: LCNumber, b: LCNumber) -> LCNumber:
    if a.mode != b.mode:
        raise ModeMismatch(f"{a.mode} vs {b.mode}")
    return a._mul(b)


def invert(a: LCNumber) -> LCNumber:
    return a.invert()


def power_rational(a: LCNumber, p) -> LCNumber:
    return a.power(p)


def truncate(a: LCNumber, order) -> LCNumber:
    """Drop all terms of exponent >= ``order``."""
    order = Fraction(order)
    return a._like(tuple(t for t in a.terms if t[0] < order), min(a.accuracy, order))


# -- order and magnitude -----------------------------------------------------------

def sign(a: LCNumber) -> int:
    if a.terms:
        return 1 if a.terms[0][1] > 0 else -1
    if a.accuracy == INF:
        if a.mode == NUMERIC:
            raise InsufficientPrecision("numeric value vanishes within tolerance")
        return 0
    raise InsufficientPrecision(f"sign undetermined: number is O(eps^{a.accuracy})")


def compare(a, b) -> Ordering:
    """Order of ``a`` and ``b``; decided by the leading term of ``a - b``.

    In numeric mode a difference that vanishes within tolerance is a tie and
    raises :class:`InsufficientPrecision`.
    """
    if not isinstance(a, LCNumber):
        a = b._lift(a)
    return Ordering(sign(a - b))


def leading_exponent(a: LCNumber) -> Fraction:
    if not a.terms:
        if a.accuracy == INF:
            raise ZeroHasNoLeadingExponent("zero has no leading exponent")
        raise InsufficientPrecision(f"number is O(eps^{a.accuracy})")
    return a.terms[0][0]


def classify(a: LCNumber) -> Classification:
    if not a.terms:
        if a.accuracy == INF:
            return Classification.ZERO
        if a.accuracy <= 0:
            raise InsufficientPrecision(f"number is O(eps^{a.accuracy})")
        # known to be zero or infinitesimal, but not which
        raise InsufficientPrecision(f"cannot tell zero from O(eps^{a.accuracy})")
    lam = a.terms[0][0]
    if lam > 0:
        return Classification.INFINITESIMAL
    if lam == 0:
        return Classification.APPRECIABLE
    return Classification.INFINITE


def standard_part(a: LCNumber):
    """The standard number infinitely close to a finite ``a``."""
    if a.terms and a.terms[0][0] < 0:
        raise InfinitePart(f"{render(a)} is infinite")
    if a.accuracy <= 0:
        raise InsufficientPrecision(f"standard part lies beyond horizon {a.accuracy}")
    if a.terms and a.terms[0][0] == 0:
        return a.terms[0][1]
    return _zero_scalar(a.mode)


st = standard_part


# -- transcendental functions ------------------------------------------------------

def _standard_split(a: LCNumber, name: str):
    """Split ``a`` into its standard part and the infinitesimal remainder."""
    try:
        s = standard_part(a)
    except InfinitePart:
        raise DomainError(f"{name} of an infinite argument") from None
    return s, a - from_rational(s, a.mode, a.config)


def _exact_guard(a: LCNumber, s, name: str, allowed):
    if a.mode == EXACT and s != allowed:
        raise NumericModeRequired(
            f"{name} at standard point {s} needs numeric mode")


def _window_for(u: LCNumber, lead) -> object:
    return min(lead + u.config.window, u.accuracy)


def exp(a: LCNumber) -> LCNumber:
    s, u = _standard_split(a, "exp")
    _exact_guard(a, s, "exp", 0)
    with _ctx(a):
        series = u._series(_exp_coefficients(), _window_for(u, 0))
        if s == 0:
            return series
        return series._scale(_scalar.standard_function("exp", s, False))


def ln(a: LCNumber) -> LCNumber:
    s, u = _standard_split(a, "ln")
    if s <= 0:
        raise DomainError(f"ln of argument with standard part {s}")
    _exact_guard(a, s, "ln", 1)
    with _ctx(a):
        v = u._scale(1 / s)
        lead = v.terms[0][0] if v.terms else 0
        series = v._series(_log1p_coefficients(), _window_for(v, lead))
        if s == 1:
            return series
        return series + from_rational(_scalar.standard_function("ln", s, False),
                                      a.mode, a.config)


def sin(a: LCNumber) -> LCNumber:
    s, u = _standard_split(a, "sin")
    _exact_guard(a, s, "sin", 0)
    with _ctx(a):
        if s == 0:
            lead = u.terms[0][0] if u.terms else 0
            return u._series(_sin_coefficients(), _window_for(u, lead))
        w = _window_for(u, 0)
        su = u._series(_sin_coefficients(), w)
        cu = u._series(_cos_coefficients(), w)
        return (cu._scale(_scalar.decimal_sin(s)) + su._scale(_scalar.decimal_cos(s)))


def cos(a: LCNumber) -> LCNumber:
    s, u = _standard_split(a, "cos")
    _exact_guard(a, s, "cos", 0)
    with _ctx(a):
        w = _window_for(u, 0)
        cu = u._series(_cos_coefficients(), w)
        if s == 0:
            return cu
        su = u._series(_sin_coefficients(), w)
        return (cu._scale(_scalar.decimal_cos(s)) - su._scale(_scalar.decimal_sin(s)))


def sqrt(a: LCNumber) -> LCNumber:
    if not a.terms and a.accuracy == INF:
        return a
    return a.power(Fraction(1, 2))


class _ctx:
    """Decimal context for numeric-mode numbers; no-op in exact mode."""

    def __init__(self, a: LCNumber):
        self.a = a
        self.cm = None

    def __enter__(self):
        if self.a.mode == NUMERIC:
            self.cm = localcontext()
            ctx = self.cm.__enter__()
            ctx.prec = self.a.config.numeric_precision
        return self

    def __exit__(self, *exc):
        if self.cm is not None:
            return self.cm.__exit__(*exc)
        return False


# -- text syntax -------------------------------------------------------------------

def _fmt_exponent(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"


def _fmt_scalar(c) -> str:
    return str(c)


def render(a: LCNumber) -> str:
    """Canonical text, e.g. ``3 + 5*eps - 1/2*eps^2 + O(eps^12)``."""
    parts: list[tuple[bool, str]] = []
    for e, c in a.terms:
        neg = c < 0
        mag = (c.copy_abs() if isinstance(c, Decimal) else abs(c))
        if e == 0:
            body = _fmt_scalar(mag)
        else:
            eps = "eps" if e == 1 else f"eps^{_fmt_exponent(e)}"
            body = eps if mag == 1 else f"{_fmt_scalar(mag)}*{eps}"
        parts.append((neg, body))
    if a.accuracy != INF:
        parts.append((False, f"O(eps^{_fmt_exponent(a.accuracy)})"))
    if not parts:
        return "0"
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


class _NumberParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, expected: str):
        found = self.text[self.pos:self.pos + 8] or "end of input"
        raise NumberSyntaxError(
            f"at position {self.pos}: expected {expected}, found {found!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def eat(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            self.error(repr(s))

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("integer")
        return int(self.text[start:self.pos])

    def scalar(self) -> str:
        """Unsigned rational ``a/b`` or decimal literal, as text."""
        self.skip()
        start = self.pos
        t = self.text
        while self.pos < len(t) and (t[self.pos].isdigit() or t[self.pos] == "."):
            self.pos += 1
        if self.pos < len(t) and t[self.pos] in "eE" and self.pos > start:
            j = self.pos + 1
            if j < len(t) and t[j] in "+-":
                j += 1
            if j < len(t) and t[j].isdigit():
                self.pos = j
                while self.pos < len(t) and t[self.pos].isdigit():
                    self.pos += 1
        lit = t[start:self.pos]
        if not lit or lit == ".":
            self.error("number")
        if "/" not in lit and self.text.startswith("/", self.pos):
            self.pos += 1
            lit += "/" + str(self.integer())
        return lit

    def exponent(self) -> Fraction:
        if self.eat("("):
            neg = self.eat("-")
            num = self.integer()
            den = self.integer() if self.eat("/") else 1
            self.expect(")")
            if den == 0:
                self.error("nonzero denominator")
            return Fraction(-num if neg else num, den)
        neg = self.eat("-")
        n = self.integer()
        return Fraction(-n if neg else n)

    def eps_power(self) -> Fraction:
        if not (self.eat("eps") or self.eat("ε")):
            self.error("'eps'")
        return self.exponent() if self.eat("^") else Fraction(1)

    def term(self):
        """Return (exponent, coefficient text) or ('O', exponent)."""
        if self.peek("O("):
            self.pos += 2
            q = self.eps_power()
            self.expect(")")
            return ("O", q)
        if self.peek("eps") or self.peek("ε"):
            return (self.eps_power(), "1")
        lit = self.scalar()
        if self.eat("*"):
            return (self.eps_power(), lit)
        return (Fraction(0), lit)

    def parse(self):
        terms = []
        acc = INF
        neg = self.eat("-")
        while True:
            kind, val = self.term()
            if kind == "O":
                if neg:
                    self.error("term (O(...) cannot be negated)")
                acc = min(acc, val)
            else:
                terms.append((kind, ("-" if neg else "") + val))
            self.skip()
            if self.pos >= len(self.text):
                break
            if self.eat("+"):
                neg = False
            elif self.eat("-"):
                neg = True
            else:
                self.error("'+' or '-'")
        return terms, acc


def parse_number(text: str, mode: str = EXACT,
                 config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    """Parse the canonical syntax produced by :func:`render`."""
    terms, acc = _NumberParser(text).parse()
    out = []
    with localcontext() as ctx:
        ctx.prec = config.numeric_precision
        for e, lit in terms:
            try:
                if mode == EXACT:
                    c = Fraction(lit)
                elif "/" in lit:
                    c = _scalar.to_decimal(Fraction(lit))
                else:
                    c = Decimal(lit)
            except (ValueError, ZeroDivisionError, InvalidOperation):
                raise NumberSyntaxError(f"bad coefficient {lit!r}") from None
            out.append((e, c))
    result = LCNumber(out, INF, mode, config)
    return truncate(result, acc) if acc != INF else result


# -- JSON --------------------------------------------------------------------------

def to_json(a: LCNumber) -> dict:
    terms = []
    for e, c in a.terms:
        if a.mode == EXACT:
            terms.append([e.numerator, e.denominator, c.numerator, c.denominator])
        else:
            terms.append([e.numerator, e.denominator, str(c)])
    acc = None if a.accuracy == INF else [a.accuracy.numerator, a.accuracy.denominator]
    return {"terms": terms, "accuracy": acc, "mode": a.mode}


def from_json(data: dict, config: EngineConfig = DEFAULT_CONFIG) -> LCNumber:
    mode = data.get("mode", EXACT)
    terms = []
    with localcontext() as ctx:
        ctx.prec = config.numeric_precision
        for row in data["terms"]:
            e = Fraction(row[0], row[1])
            if mode == EXACT:
                c = Fraction(row[2], row[3])
            else:
                c = Decimal(row[2])
            terms.append((e, c))
    acc = data.get("accuracy")
    acc = INF if acc is None else Fraction(acc[0], acc[1])
    return LCNumber(terms, acc, mode, config)
