"""The acceptance computations, runnable as ``leibniz selfcheck``.

Each check compares the library against an independent oracle (symbolic
differentiation, brute-force sums, antiderivatives, exhaustive search) and
returns a :class:`CheckResult`; ``quick`` shrinks the random corpora.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import calculus, hyperfinite, lcf, relations, transfer
from .errors import InsufficientPrecision, NoWitnessFound, NonInvertibleJet
from .expr import differentiate_symbolic, evaluate_rational
from .lcf import Classification
from .sampling import (
    function_and_point, random_lcnumber, random_nonzero_lcnumber, random_polynomial,
)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def _n(full: int, quick: bool) -> int:
    return max(10, full // 10) if quick else full


def derivative_oracle(quick=False):
    rng = random.Random(1)
    n = _n(200, quick)
    bad = 0
    for _ in range(n):
        f, q = function_and_point(rng, 5)
        bad += calculus.derivative(f, q) != evaluate_rational(differentiate_symbolic(f), q)
    return bad == 0, f"{n - bad}/{n} exact matches"


def product_rule_purge(quick=False):
    x, y, eps = lcf.from_rational(3), lcf.from_rational(5), lcf.epsilon()
    inc = (x + eps) * (y + 2 * eps) - x * y
    ok = (inc == lcf.parse_number("11*eps + 2*eps^2")
          and relations.purge(inc) == 11 * eps
          and relations.negligible_relative(2 * eps * eps, 11 * eps))
    return ok, f"purge({lcf.render(inc)}) = {lcf.render(relations.purge(inc))}"


def parabola_procedure(quick=False):
    q = calculus.difference_quotient("x^2", 3, lcf.epsilon())
    pair = calculus.dd_pair("x^2", 3, Fraction(1, 2))
    ok = q == lcf.parse_number("6 + eps") and lcf.standard_part(q) == 6 and pair.dy_assignable == 3
    return ok, f"quotient {lcf.render(q)}, (d)y = {pair.dy_assignable}"


def quadrature(quick=False):
    rng = random.Random(4)
    n = _n(100, quick)
    bad = 0
    for _ in range(n):
        cs = random_polynomial(rng, 10)
        a = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        b = a + Fraction(rng.randint(1, 6), rng.randint(1, 3))
        r = hyperfinite.riemann_sum_poly(cs, a, b)
        exact = hyperfinite.antiderivative_difference(cs, a, b)
        rest = r - exact
        bad += not (lcf.standard_part(r) == exact and (
            rest.is_zero() or lcf.classify(rest) is Classification.INFINITESIMAL))
    faulhaber = all(hyperfinite.sum_powers(k)(m) == sum(i ** k for i in range(1, m + 1))
                    for k in range(13) for m in range(1, 51))
    return bad == 0 and faulhaber, f"{n - bad}/{n} integrals exact; Faulhaber k<=12 n<=50 {faulhaber}"


def status_transitus(quick=False):
    limit = hyperfinite.conic_limit(hyperfinite.ELLIPSE_FAMILY)
    vals = hyperfinite.ELLIPSE_FAMILY.at(Fraction(10) ** 6)
    gap = max(abs(float(v / vals[0]) - float(c)) for v, c in zip(vals, limit))
    ok = limit == (1, 0, 0, 0, -4, 0) and gap < 1e-4
    return ok, f"{hyperfinite.render_conic(limit)}; numeric gap at t=1e6 {gap:.2e}"


def tangent_curvature(quick=False):
    line = calculus.tangent_line("x^2", 1)
    circle, _ = calculus.osculating_circle("x", "x^2", 0)
    _, k = calculus.osculating_circle("cos(x)", "sin(x)", 0, mode=lcf.NUMERIC)
    ok = (line.render() == "y = 2x - 1" and circle.center == (0, Fraction(1, 2))
          and circle.radius_squared == Fraction(1, 4) and abs(k - 1) < 1e-10)
    return ok, f"{line}; {circle}; unit circle curvature {float(k):.12f}"


def euclid_inc(quick=False):
    one = lcf.from_rational(1)
    r1 = relations.inc(lcf.epsilon(), one)
    r2 = relations.comparable(lcf.from_rational(2), lcf.from_rational(3))
    rng = random.Random(7)
    n = _n(1000, quick)
    bad = 0
    for _ in range(n):
        a = abs(random_nonzero_lcnumber(rng))
        b = abs(random_nonzero_lcnumber(rng))
        flags = (relations.inc(a, b).holds, relations.inc(b, a).holds,
                 relations.comparable(a, b).holds)
        bad += flags.count(True) != 1
    ok = r1.holds and r1.witness is None and r2.holds and r2.witness == 2 and bad == 0
    return ok, f"trichotomy {n - bad}/{n}"


def field_laws(quick=False):
    rng = random.Random(8)
    n = _n(1000, quick)
    bad = 0
    for _ in range(n):
        a, b, c = (random_lcnumber(rng) for _ in range(3))
        ok = (a + b == b + a and a * b == b * a and (a + b) + c == a + (b + c)
              and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
              and a + 0 == a and a * 1 == a and a - a == 0)
        if not a.is_zero():
            ok = ok and (a * a.invert()).agrees(lcf.from_rational(1))
        try:
            if a < b:
                ok = ok and a + c < b + c and (not c > 0 or a * c < b * c)
        except InsufficientPrecision:
            ok = False
        bad += not ok
    return bad == 0, f"{n - bad}/{n} numbers satisfy field and order laws"


def nilsquare(quick=False):
    d = calculus.Jet2.generator()
    try:
        d.invert()
        raised = False
    except NonInvertibleJet:
        raised = True
    rng = random.Random(9)
    n = _n(100, quick)
    bad = 0
    for _ in range(n):
        cs = random_polynomial(rng, 8)
        f = " + ".join(f"({c})*x^{i}" for i, c in enumerate(cs))
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        bad += calculus.jet_eval(f, q).slope != calculus.derivative(f, q)
    ok = d * d == calculus.Jet2(0, 0) and raised and bad == 0
    return ok, f"d*d = {d * d}; jet slopes {n - bad}/{n}"


def _random_formula(rng, depth, scope, flags):
    if depth == 0 or rng.random() < 0.3:
        def term():
            if scope and rng.random() < 0.6:
                return transfer.Name(rng.choice(scope))
            if rng.random() < 0.5:
                name = rng.choice(("P", "H"))
                flags["bad"] |= name == "H"
                return transfer.Name(name)
            return transfer.Const(Fraction(rng.randint(0, 5)))
        if rng.random() < 0.15:
            flags["st"] = True
            return transfer.St(term())
        return transfer.Compare(rng.choice(transfer.COMPARISONS), term(), term())
    kind = rng.choice(("q", "and", "or", "not"))
    if kind == "q":
        v = f"v{len(scope)}"
        cls = rng.choice((transfer.ForAll, transfer.Exists))
        return cls(v, rng.random() < 0.5, _random_formula(rng, depth - 1, scope + [v], flags))
    if kind == "not":
        return transfer.Not(_random_formula(rng, depth - 1, scope, flags))
    cls = transfer.And if kind == "and" else transfer.Or
    return cls(_random_formula(rng, depth - 1, scope, flags),
               _random_formula(rng, depth - 1, scope, flags))


def transfer_engine(quick=False):
    rng = random.Random(10)
    n = _n(1000, quick)
    misses = 0
    for _ in range(n):
        flags = {"st": False, "bad": False}
        phi = _random_formula(rng, 4, [], flags)
        v = transfer.check_applicability(phi, {"P": True, "H": False})
        misses += v.applicable != (not flags["st"] and not flags["bad"])
    rewritten = transfer.render_formula(
        transfer.apply_transfer("forall^st x. forall^st y. x + y = y + x"))
    cx = transfer.test_instances("forall x. x < 1000", budget=500).counterexample
    ok = misses == 0 and rewritten == "forall x. forall y. x + y = y + x" and cx == {"x": "eps^-1"}
    return ok, f"{misses} misses in {n}; counterexample {cx}"


def archimedean(quick=False):
    w = calculus.archimedean_check("x^2", 3, 6, Fraction(1, 100), 1000)
    try:
        calculus.archimedean_check("x^2", 3, 5, Fraction(1, 100), 1000)
        rejected = False
    except NoWitnessFound:
        rejected = True
    return w <= 101 and rejected, f"witness {w}; L=5 rejected {rejected}"


CHECKS = [
    (1, "derivative oracle equivalence", derivative_oracle),
    (2, "product-rule purge", product_rule_purge),
    (3, "parabola procedure", parabola_procedure),
    (4, "hyperfinite quadrature", quadrature),
    (5, "status transitus", status_transitus),
    (6, "tangent and curvature", tangent_curvature),
    (7, "Euclid V.4 and INC", euclid_inc),
    (8, "ordered-field laws", field_laws),
    (9, "nilsquare contrast", nilsquare),
    (10, "transfer engine", transfer_engine),
    (11, "Archimedean translation", archimedean),
]


def run_all(quick: bool = False) -> list[CheckResult]:
    out = []
    for number, name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(quick)
        except Exception as exc:  # a crash is a failed check, not a crashed run
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(number, name, ok, detail, time.perf_counter() - t0))
    return out
