"""First-order sentences over the ordered-field language, and transfer.

Quantifiers may be relativized to standard elements (``forall^st x.``).
A sentence whose matrix avoids the ``st`` predicate and whose named
parameters are all standard may have those flags dropped; that rewrite is
:func:`apply_transfer`.  :func:`test_instances` is an empirical spot check
of a sentence over a sample pool that mixes infinitesimal, appreciable and
infinite elements of the number engine.  It can find counterexamples but
never proves anything, so a clean run is reported as "consistent with
transfer".

Surface syntax::

    formula := ("forall" | "exists") ["^st"] NAME "." formula
             | disj ["->" formula]
    disj    := conj {"or" conj}
    conj    := unary {"and" unary}
    unary   := "not" unary | "(" formula ")" | "st" "(" term ")"
             | term CMP term | quantified formula
    CMP     := "=" | "!=" | "<" | "<=" | ">" | ">="
    term    := the arithmetic of + - * / ^ over numbers and names

The names ``eps`` and ``mu`` denote the built-in infinitesimal and its
reciprocal; every other free name is a parameter and must be declared.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import lcf
from .errors import (
    DivisionByZero, FormulaSyntaxError, InsufficientPrecision, NotApplicable, UnboundVariable,
)
from .expr import _decimal_text
from .lcf import LCNumber, Ordering

BUILTINS = {"eps": lambda: lcf.epsilon(), "mu": lambda: lcf.epsilon().invert()}
KEYWORDS = {"forall", "exists", "and", "or", "not", "st"}
COMPARISONS = ("=", "!=", "<", "<=", ">", ">=")


# -- terms -------------------------------------------------------------------------

@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Minus:
    arg: object


@dataclass(frozen=True)
class Arith:
    op: str  # one of + - * /
    left: object
    right: object


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int


# -- formulas ----------------------------------------------------------------------

@dataclass(frozen=True)
class Compare:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class St:
    term: object


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class ForAll:
    var: str
    standard_only: bool
    body: object


@dataclass(frozen=True)
class Exists:
    var: str
    standard_only: bool
    body: object


Quantifier = (ForAll, Exists)
Formula = object


# -- verdicts ----------------------------------------------------------------------

@dataclass(frozen=True)
class StPredicateInMatrix:
    term: str

    def __str__(self):
        return f"st({self.term}) occurs in the matrix"


@dataclass(frozen=True)
class NonstandardParameter:
    name: str

    def __str__(self):
        return f"parameter {self.name} is nonstandard"


@dataclass(frozen=True)
class TransferVerdict:
    applicable: bool
    reasons: tuple = ()

    def __bool__(self):
        return self.applicable

    def to_json(self) -> dict:
        return {"applicable": self.applicable,
                "reasons": [{"kind": type(r).__name__, "detail": str(r)} for r in self.reasons]}


# -- parsing -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(->|<=|>=|!=|[=<>+\-*/^().]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(pos, f"unexpected character {text[pos]!r}")
        start = m.start(m.lastindex)
        kind = ("num", "name", "op")[m.lastindex - 1]
        out.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def at(self, value: str) -> bool:
        kind, v, _ = self.tok
        return v == value and kind != "num"

    def expect(self, value: str, what: str | None = None):
        if not self.at(value):
            found = self.tok[1] or "end of input"
            raise FormulaSyntaxError(self.tok[2], f"expected {what or repr(value)}, found {found!r}")
        self.i += 1

    def formula(self):
        kind, v, _ = self.tok
        if kind == "name" and v in ("forall", "exists"):
            return self.quantified()
        left = self.disj()
        if self.at("->"):
            self.i += 1
            return Implies(left, self.formula())
        return left

    def quantified(self):
        q = ForAll if self.tok[1] == "forall" else Exists
        self.i += 1
        standard = False
        if self.at("^"):
            self.i += 1
            self.expect("st", "'st' after '^'")
            standard = True
        kind, v, pos = self.tok
        if kind != "name" or v in KEYWORDS or v in BUILTINS:
            raise FormulaSyntaxError(pos, f"expected a variable name, found {v or 'end of input'!r}")
        self.i += 1
        self.expect(".", "'.' after the quantified variable")
        return q(v, standard, self.formula())

    def disj(self):
        left = self.conj()
        while self.at("or"):
            self.i += 1
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("and"):
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self):
        kind, v, _ = self.tok
        if self.at("not"):
            self.i += 1
            return Not(self.unary())
        if kind == "name" and v in ("forall", "exists"):
            return self.quantified()
        if self.at("st") and self.toks[self.i + 1][1] == "(":
            self.i += 2
            t = self.term()
            self.expect(")")
            return St(t)
        if self.at("("):
            # either a parenthesised formula or a comparison starting with a
            # parenthesised term; try the comparison first
            save = self.i
            try:
                return self.comparison()
            except FormulaSyntaxError:
                self.i = save + 1
            inner = self.formula()
            self.expect(")")
            return inner
        return self.comparison()

    def comparison(self):
        left = self.term()
        kind, v, pos = self.tok
        if kind != "op" or v not in COMPARISONS:
            raise FormulaSyntaxError(pos, f"expected a comparison, found {v or 'end of input'!r}")
        self.i += 1
        return Compare(v, left, self.term())

    def term(self):
        left = self.product()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.tok[1]
            self.i += 1
            left = Arith(op, left, self.product())
        return left

    def product(self):
        left = self.signed()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.tok[1]
            self.i += 1
            left = Arith(op, left, self.signed())
        return left

    def signed(self):
        if self.at("-"):
            self.i += 1
            return Minus(self.signed())
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            self.i += 1
            kind, v, pos = self.tok
            if kind != "num" or "." in v:
                raise FormulaSyntaxError(pos, "expected a natural exponent")
            self.i += 1
            return Power(base, int(v))
        return base

    def atom(self):
        kind, v, pos = self.tok
        if kind == "num":
            self.i += 1
            return Const(Fraction(v))
        if kind == "name" and v not in KEYWORDS:
            self.i += 1
            return Name(v)
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        raise FormulaSyntaxError(pos, f"expected a term, found {v or 'end of input'!r}")


def parse_formula(text: str):
    p = _Parser(text)
    phi = p.formula()
    if p.tok[0] != "end":
        raise FormulaSyntaxError(p.tok[2], f"unexpected {p.tok[1]!r}")
    return phi


# -- rendering -----------------------------------------------------------------------

def render_term(t, prec: int = 0) -> str:
    match t:
        case Name(name=n):
            return n
        case Const(value=v):
            s = str(v) if v.denominator == 1 else _decimal_text(v) or str(v)
            return s if v >= 0 and "/" not in s else f"({s})"
        case Minus(arg=a):
            s, p = "-" + render_term(a, 3), 3
        case Power(base=b, exponent=e):
            s, p = f"{render_term(b, 5)}^{e}", 4
        case Arith(op=op, left=a, right=b):
            p = 1 if op in "+-" else 2
            s = f"{render_term(a, p)} {op} {render_term(b, p + 1)}"
        case _:
            raise TypeError(f"not a term: {t!r}")
    return f"({s})" if p < prec else s


def render_formula(phi, prec: int = 0) -> str:
    match phi:
        case Compare(op=op, left=a, right=b):
            return f"{render_term(a)} {op} {render_term(b)}"
        case St(term=t):
            return f"st({render_term(t)})"
        case Not(arg=a):
            s, p = "not " + render_formula(a, 4), 4
        case And(left=a, right=b):
            s, p = f"{render_formula(a, 3)} and {render_formula(b, 4)}", 3
        case Or(left=a, right=b):
            s, p = f"{render_formula(a, 2)} or {render_formula(b, 3)}", 2
        case Implies(left=a, right=b):
            s, p = f"{render_formula(a, 2)} -> {render_formula(b, 1)}", 1
        case ForAll() | Exists():
            q = "forall" if isinstance(phi, ForAll) else "exists"
            flag = "^st" if phi.standard_only else ""
            s, p = f"{q}{flag} {phi.var}. {render_formula(phi.body, 0)}", 0
        case _:
            raise TypeError(f"not a formula: {phi!r}")
    return f"({s})" if p < prec else s


def as_formula(phi):
    return parse_formula(phi) if isinstance(phi, str) else phi


# -- structure -------------------------------------------------------------------------

def _children(n):
    match n:
        case ForAll(body=b) | Exists(body=b):
            return (b,)
        case Not(arg=a) | Minus(arg=a) | St(term=a):
            return (a,)
        case Power(base=b):
            return (b,)
        case And() | Or() | Implies() | Compare() | Arith():
            return (n.left, n.right)
    return ()


def node_count(n) -> int:
    return 1 + sum(node_count(c) for c in _children(n))


def quantifier_depth(phi) -> int:
    inner = max((quantifier_depth(c) for c in _children(phi)), default=0)
    return inner + (1 if isinstance(phi, Quantifier) else 0)


def free_names(n, bound: frozenset = frozenset()) -> set[str]:
    """Names not bound by an enclosing quantifier (built-ins included)."""
    if isinstance(n, Name):
        return set() if n.name in bound else {n.name}
    if isinstance(n, Quantifier):
        return free_names(n.body, bound | {n.var})
    out: set[str] = set()
    for c in _children(n):
        out |= free_names(c, bound)
    return out


def _st_atoms(n) -> list:
    found = [n] if isinstance(n, St) else []
    for c in _children(n):
        found += _st_atoms(c)
    return found


# -- transfer ---------------------------------------------------------------------------

def check_applicability(phi, params: dict[str, bool] | None = None) -> TransferVerdict:
    """``params`` maps each free parameter name to True when it is standard."""
    phi = as_formula(phi)
    params = params or {}
    reasons: list = [StPredicateInMatrix(render_term(a.term)) for a in _st_atoms(phi)]
    for name in sorted(free_names(phi)):
        if name in BUILTINS:
            reasons.append(NonstandardParameter(name))
        elif name not in params:
            raise UnboundVariable(f"free name {name!r} is neither bound nor a declared parameter")
        elif not params[name]:
            reasons.append(NonstandardParameter(name))
    return TransferVerdict(not reasons, tuple(reasons))


def _clear_flags(phi):
    match phi:
        case ForAll() | Exists():
            return replace(phi, standard_only=False, body=_clear_flags(phi.body))
        case Not(arg=a):
            return Not(_clear_flags(a))
        case And() | Or() | Implies():
            return type(phi)(_clear_flags(phi.left), _clear_flags(phi.right))
    return phi


def apply_transfer(phi, params: dict[str, bool] | None = None):
    """Drop every standardness flag from the quantifiers of an eligible sentence."""
    phi = as_formula(phi)
    verdict = check_applicability(phi, params)
    if not verdict.applicable:
        raise NotApplicable(verdict)
    return _clear_flags(phi)


# -- instance testing ---------------------------------------------------------------------

@dataclass
class InstanceReport:
    formula: str
    instances: int
    counterexample: dict | None = None
    undecided: int = 0
    pool_sizes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    @property
    def summary(self) -> str:
        if self.counterexample is None:
            return (f"no counterexample in budget ({self.instances} instances); "
                    "consistent with transfer")
        shown = ", ".join(f"{k} = {v}" for k, v in self.counterexample.items())
        return f"counterexample: {shown}"

    def to_json(self) -> dict:
        return {"formula": self.formula, "instances": self.instances,
                "undecided": self.undecided, "counterexample": self.counterexample,
                "summary": self.summary}


class _Undecided(Exception):
    pass


def _standard_pool(rng: random.Random, size: int) -> list[LCNumber]:
    base = [Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-2),
            Fraction(3), Fraction(-5, 3), Fraction(1000)]
    out = base[:size]
    while len(out) < size:
        out.append(Fraction(rng.randint(-10 ** 4, 10 ** 4), rng.randint(1, 60)))
    return [lcf.from_rational(q) for q in out]


def _full_pool(rng: random.Random, size: int) -> list[LCNumber]:
    eps = lcf.epsilon()
    m = eps.invert()
    special = [lcf.from_rational(0), lcf.from_rational(1), lcf.from_rational(-1),
               eps, -eps, m, -m, lcf.from_rational(Fraction(1, 2)), eps * eps, m * m,
               1 + eps, 1 - eps]
    out = special[:size]
    kinds = itertools.cycle(("rational", "perturbed", "scaled"))
    while len(out) < size:
        q = Fraction(rng.randint(-200, 200), rng.randint(1, 12))
        c = Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 5))
        kind = next(kinds)
        if kind == "rational":
            out.append(lcf.from_rational(q))
        elif kind == "perturbed":
            out.append(q + c * eps ** rng.randint(1, 3))
        else:
            out.append(c * m ** rng.randint(1, 2) + q)
    return out


def _term_value(t, env: dict):
    match t:
        case Name(name=n):
            if n in env:
                return env[n]
            raise UnboundVariable(f"no value for {n!r}")
        case Const(value=v):
            return lcf.from_rational(v)
        case Minus(arg=a):
            return -_term_value(a, env)
        case Power(base=b, exponent=e):
            return _term_value(b, env) ** e
        case Arith(op=op, left=a, right=b):
            x, y = _term_value(a, env), _term_value(b, env)
            if op == "+":
                return x + y
            if op == "-":
                return x - y
            if op == "*":
                return x * y
            return x / y
    raise TypeError(f"not a term: {t!r}")


_ORDER_TEST = {
    "=": lambda o: o is Ordering.EQUAL, "!=": lambda o: o is not Ordering.EQUAL,
    "<": lambda o: o is Ordering.LESS, "<=": lambda o: o is not Ordering.GREATER,
    ">": lambda o: o is Ordering.GREATER, ">=": lambda o: o is not Ordering.LESS,
}


def _holds(phi, env: dict, pools: dict) -> bool:
    match phi:
        case Compare(op=op, left=a, right=b):
            try:
                return _ORDER_TEST[op](lcf.compare(_term_value(a, env), _term_value(b, env)))
            except (DivisionByZero, InsufficientPrecision) as exc:
                raise _Undecided(str(exc)) from exc
        case St(term=t):
            v = _term_value(t, env)
            return all(e == 0 for e, _ in v.terms) and v.accuracy == lcf.INF
        case Not(arg=a):
            return not _holds(a, env, pools)
        case And(left=a, right=b):
            return _holds(a, env, pools) and _holds(b, env, pools)
        case Or(left=a, right=b):
            return _holds(a, env, pools) or _holds(b, env, pools)
        case Implies(left=a, right=b):
            return not _holds(a, env, pools) or _holds(b, env, pools)
        case ForAll(var=v, standard_only=s, body=body):
            return all(_holds(body, {**env, v: x}, pools) for x in pools[s])
        case Exists(var=v, standard_only=s, body=body):
            return any(_holds(body, {**env, v: x}, pools) for x in pools[s])
    raise TypeError(f"not a formula: {phi!r}")


def test_instances(phi, seed: int = 0, budget: int = 500,
                   values: dict | None = None) -> InstanceReport:
    """Spot-check a sentence over a sample pool.

    The leading universal quantifiers are instantiated exhaustively over a
    pool sized so the total work stays within ``budget``; nested quantifiers
    range over the same pools.  ``values`` supplies parameter values.
    """
    phi = as_formula(phi)
    depth = quantifier_depth(phi)
    if depth > 3:
        raise ValueError("quantifier depth above 3 is not supported")
    env = {k: v() for k, v in BUILTINS.items()}
    for k, v in (values or {}).items():
        env[k] = v if isinstance(v, LCNumber) else lcf.from_rational(v)
    missing = free_names(phi) - set(env)
    if missing:
        raise UnboundVariable(f"no value for {sorted(missing)}")
    size = max(2, int(round(budget ** (1 / max(depth, 1)))))
    while size > 2 and size ** max(depth, 1) > budget:
        size -= 1
    rng = random.Random(seed)
    pools = {True: _standard_pool(rng, size), False: _full_pool(rng, size)}
    prefix, body = [], phi
    while isinstance(body, ForAll):
        prefix.append(body)
        body = body.body
    report = InstanceReport(render_formula(phi), 0,
                            pool_sizes={"standard": size, "full": size})
    for combo in itertools.product(*(pools[q.standard_only] for q in prefix)):
        if report.instances >= budget:
            break
        local = {**env, **{q.var: x for q, x in zip(prefix, combo)}}
        report.instances += 1
        try:
            ok = _holds(body, local, pools)
        except _Undecided:
            report.undecided += 1
            continue
        if not ok:
            report.counterexample = {q.var: lcf.render(x) for q, x in zip(prefix, combo)}
            break
    return report


test_instances.__test__ = False  # not a pytest test when imported into test modules


# -- bundled corpus ------------------------------------------------------------------------

ORDERED_FIELD_AXIOMS: tuple[str, ...] = (
    "forall^st x. forall^st y. x + y = y + x",
    "forall^st x. forall^st y. forall^st z. (x + y) + z = x + (y + z)",
    "forall^st x. x + 0 = x",
    "forall^st x. x + -x = 0",
    "forall^st x. forall^st y. x * y = y * x",
    "forall^st x. forall^st y. forall^st z. (x * y) * z = x * (y * z)",
    "forall^st x. x != 0 -> x * (1 / x) = 1",
    "forall^st x. forall^st y. forall^st z. x * (y + z) = x * y + x * z",
    "forall^st x. forall^st y. forall^st z. x < y -> x + z < y + z",
    "forall^st x. forall^st y. 0 < x and 0 < y -> 0 < x * y",
)


def verdict_report(phi, params: dict[str, bool] | None = None) -> dict:
    """The JSON report {applicable, reasons, rewritten}."""
    phi = as_formula(phi)
    verdict = check_applicability(phi, params)
    out = verdict.to_json()
    out["rewritten"] = render_formula(_clear_flags(phi)) if verdict.applicable else None
    return out
