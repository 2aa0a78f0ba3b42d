"""Comparability of magnitudes and the rules for discarding negligible terms.

Two nonzero magnitudes are *comparable* when some finite multiple of either
exceeds the other, which in the number engine means they share a leading
exponent.  ``inc(a, b)`` says ``|a|`` is incomparably smaller than ``|b|``:
no natural multiple of it reaches ``|b|``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import InsufficientPrecision, ZeroArgument, ZeroReference
from .lcf import INF, LCNumber, Ordering, compare, leading_exponent


@dataclass(frozen=True)
class RelationReport:
    holds: bool
    witness: int | None
    rationale: str

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return asdict(self)


def _require_nonzero(*xs: LCNumber):
    for x in xs:
        if x.is_zero():
            raise ZeroArgument("relation needs nonzero magnitudes")


def _smallest_multiple(a: LCNumber, b: LCNumber) -> int:
    """Smallest natural n with n|a| > |b|, assuming one exists.

    The candidate comes from the leading coefficients; a tie there is
    settled by the lower-order terms.
    """
    (la, ca), (lb, cb) = a.terms[0], b.terms[0]
    if la < lb:
        return 1
    ratio = Fraction(abs(cb)) / Fraction(abs(ca))
    n = max(1, math.ceil(ratio))
    if n * abs(ca) > abs(cb):
        return n
    return n if compare(n * abs(a), abs(b)) is Ordering.GREATER else n + 1


def comparable(a: LCNumber, b: LCNumber) -> RelationReport:
    _require_nonzero(a, b)
    la, lb = leading_exponent(a), leading_exponent(b)
    if la != lb:
        return RelationReport(False, None,
                              f"orders of magnitude differ: eps^{la} vs eps^{lb}")
    n = _smallest_multiple(a, b)
    return RelationReport(True, n, f"same order eps^{la}; {n}*|a| > |b|")


def inc(a: LCNumber, b: LCNumber) -> RelationReport:
    """|a| is incomparably smaller than |b|."""
    _require_nonzero(a, b)
    la, lb = leading_exponent(a), leading_exponent(b)
    if la > lb:
        return RelationReport(True, None,
                              f"eps^{la} is of higher order than eps^{lb}; "
                              "no natural multiple exceeds")
    n = _smallest_multiple(a, b)
    return RelationReport(False, n, f"{n}*|a| > |b|")


def negligible_relative(a: LCNumber, b: LCNumber) -> bool:
    """True when a/b is infinitesimal (or a is zero)."""
    if b.is_zero():
        raise ZeroReference("reference magnitude is zero")
    if a.is_zero():
        return True
    if not a.terms:
        if a.accuracy > leading_exponent(b):
            return True
        raise InsufficientPrecision("negligibility lies beyond the horizon")
    return inc(a, b).holds


def approx_eq(a: LCNumber, b: LCNumber) -> bool:
    """Equality up to a difference incomparably smaller than the dominant side."""
    d = a - b
    if d.is_zero():
        return True
    if a.is_zero() or b.is_zero():
        ref = b if a.is_zero() else a
    else:
        ref = a if leading_exponent(a) <= leading_exponent(b) else b
    if not ref.terms:
        raise InsufficientPrecision("reference magnitude unknown")
    if not d.terms:
        if d.accuracy > leading_exponent(ref):
            return True
        raise InsufficientPrecision("difference lies beyond the horizon")
    return leading_exponent(d) > leading_exponent(ref)


def purge(a: LCNumber) -> LCNumber:
    """Keep only the dominant term."""
    if a.is_zero():
        raise ZeroArgument("cannot purge zero")
    if not a.terms:
        raise InsufficientPrecision(f"dominant term of O(eps^{a.accuracy}) unknown")
    return LCNumber(a.terms[:1], INF, a.mode, a.config)


def purge_to_order(a: LCNumber, k) -> LCNumber:
    """Keep terms of exponent <= k; the result is exact."""
    k = Fraction(k)
    if a.accuracy <= k:
        raise InsufficientPrecision(f"terms up to eps^{k} not all known")
    return LCNumber([t for t in a.terms if t[0] <= k], INF, a.mode, a.config)
