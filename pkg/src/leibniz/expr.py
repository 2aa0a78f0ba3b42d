"""One-variable expressions: parsing, rendering, evaluation, differentiation.

Grammar (left-associative binary operators; ``^`` binds tighter than unary
minus and takes a rational literal exponent)::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | factor
    factor   := base ('^' exponent)?
    base     := number | 'x' | '(' expr ')' | func '(' expr ')'
    exponent := '-'? number | '(' '-'? number ('/' number)? ')'
    func     := 'exp' | 'ln' | 'sin' | 'cos' | 'sqrt'

A minus sign directly in front of a number literal (and not followed by
``^``) is folded into a negative literal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import _scalar, lcf
from .errors import (
    DivisionByZero, DomainError, NonRationalValue, NumericModeRequired, ParseError,
)
from .lcf import LCNumber

FUNCTIONS = ("exp", "ln", "sin", "cos")


# -- AST ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    span: tuple[int, int] = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Num(Node):
    value: Fraction


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: Fraction


@dataclass(frozen=True)
class Sqrt(Node):
    arg: Node


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node


ExprAST = Node
BINARY = (Add, Sub, Mul, Div)


# -- parsing -----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?|\.\d+)|([A-Za-z_]\w*)|(\S))")


@dataclass
class _Tok:
    kind: str       # 'num', 'name', 'op', 'end'
    text: str
    start: int
    end: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace only
            break
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            toks.append(_Tok("num", num, start, m.end()))
        elif name is not None:
            toks.append(_Tok("name", name, start, m.end()))
        else:
            if op not in "+-*/^()":
                raise ParseError(start, "expression", repr(op))
            toks.append(_Tok("op", op, start, m.end()))
        pos = m.end()
    toks.append(_Tok("end", "", len(text), len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.start, expected, repr(t.text) if t.kind != "end" else "end of input")

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail(repr(text))
        return self.next()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail("operator or end of input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.at("+") or self.at("-"):
            cls = Add if self.next().text == "+" else Sub
            right = self.term()
            node = cls(node, right, span=(node.span[0], right.span[1]))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.at("*") or self.at("/"):
            cls = Mul if self.next().text == "*" else Div
            right = self.unary()
            node = cls(node, right, span=(node.span[0], right.span[1]))
        return node

    def unary(self) -> Node:
        if self.at("-"):
            start = self.next().start
            nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
            if self.tok.kind == "num" and not (nxt and nxt.kind == "op" and nxt.text == "^"):
                t = self.next()
                return Num(-Fraction(t.text), span=(start, t.end))
            arg = self.unary()
            return Neg(arg, span=(start, arg.span[1]))
        return self.factor()

    def factor(self) -> Node:
        base = self.base()
        if self.at("^"):
            self.next()
            p, end = self.exponent()
            return Pow(base, p, span=(base.span[0], end))
        return base

    def number(self) -> tuple[Fraction, int]:
        if self.tok.kind != "num":
            self.fail("number")
        t = self.next()
        return Fraction(t.text), t.end

    def exponent(self) -> tuple[Fraction, int]:
        if self.at("("):
            self.next()
            neg = self.at("-") and self.next()
            p, _ = self.number()
            if self.at("/"):
                self.next()
                q, _ = self.number()
                if q == 0:
                    raise ParseError(self.toks[self.i - 1].start, "nonzero denominator", "0")
                p = p / q
            end = self.expect(")").end
            return (-p if neg else p), end
        neg = self.at("-") and self.next()
        p, end = self.number()
        return (-p if neg else p), end

    def base(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.next()
            return Num(Fraction(t.text), span=(t.start, t.end))
        if t.kind == "name":
            if t.text == "x":
                self.next()
                return Var(span=(t.start, t.end))
            if t.text in FUNCTIONS or t.text == "sqrt":
                self.next()
                self.expect("(")
                arg = self.expr()
                end = self.expect(")").end
                if t.text == "sqrt":
                    return Sqrt(arg, span=(t.start, end))
                return Call(t.text, arg, span=(t.start, end))
            raise ParseError(t.start, "'x', number, function or '('", repr(t.text))
        if self.at("("):
            start = self.next().start
            inner = self.expr()
            end = self.expect(")").end
            return replace(inner, span=(start, end))
        self.fail("'x', number, function or '('")


def parse(text: str) -> Node:
    """Parse an expression in the variable ``x``."""
    return _Parser(text).parse()


def as_expr(f) -> Node:
    return parse(f) if isinstance(f, str) else f


# -- rendering ---------------------------------------------------------------------

def _decimal_text(q: Fraction) -> str | None:
    """Finite decimal expansion of q, if one exists."""
    d, twos, fives = q.denominator, 0, 0
    while d % 2 == 0:
        d, twos = d // 2, twos + 1
    while d % 5 == 0:
        d, fives = d // 5, fives + 1
    if d != 1:
        return None
    k = max(twos, fives)
    digits = str(abs(q.numerator) * 10 ** k // q.denominator).rjust(k + 1, "0")
    text = digits[:-k] + "." + digits[-k:] if k else digits
    return "-" + text if q < 0 else text


def _num_text(q: Fraction) -> tuple[str, int]:
    if q.denominator == 1:
        return str(q.numerator), (3 if q < 0 else 5)
    dec = _decimal_text(q)
    if dec is not None:
        return dec, (3 if q < 0 else 5)
    return f"({q.numerator}/{q.denominator})", 5


def _exp_text(p: Fraction) -> str:
    if p.denominator == 1 and p >= 0:
        return str(p.numerator)
    if p.denominator == 1:
        return f"({p.numerator})"
    return f"({p.numerator}/{p.denominator})"


_OPS = {Add: ("+", 1), Sub: ("-", 1), Mul: ("*", 2), Div: ("/", 2)}


def _render(n: Node) -> tuple[str, int]:
    match n:
        case Var():
            return "x", 5
        case Num(value=v):
            return _num_text(v)
        case Neg(arg=Num(value=v)) if v >= 0:
            return f"-({_num_text(v)[0]})", 3
        case Neg(arg=a):
            t, p = _render(a)
            return "-" + (t if p >= 3 else f"({t})"), 3
        case Pow(base=b, exponent=e):
            t, p = _render(b)
            return (t if p >= 5 else f"({t})") + "^" + _exp_text(e), 4
        case Sqrt(arg=a):
            return f"sqrt({_render(a)[0]})", 5
        case Call(func=fn, arg=a):
            return f"{fn}({_render(a)[0]})", 5
        case _ if type(n) in _OPS:
            sym, prec = _OPS[type(n)]
            lt, lp = _render(n.left)
            rt, rp = _render(n.right)
            lt = lt if lp >= prec else f"({lt})"
            rt = rt if rp > prec else f"({rt})"
            sep = f" {sym} " if prec == 1 else sym
            return lt + sep + rt, prec
    raise TypeError(f"not an expression node: {n!r}")


def render(n: Node) -> str:
    return _render(n)[0]


def to_json(n: Node) -> dict:
    out: dict = {"kind": type(n).__name__, "span": list(n.span)}
    match n:
        case Num(value=v):
            out["value"] = str(v)
        case Neg(arg=a) | Sqrt(arg=a):
            out["arg"] = to_json(a)
        case Call(func=fn, arg=a):
            out["func"] = fn
            out["arg"] = to_json(a)
        case Pow(base=b, exponent=e):
            out["base"] = to_json(b)
            out["exponent"] = str(e)
        case _ if isinstance(n, BINARY):
            out["left"] = to_json(n.left)
            out["right"] = to_json(n.right)
    return out


def from_json(d: dict) -> Node:
    kind = d["kind"]
    span = tuple(d.get("span", (0, 0)))
    if kind == "Var":
        return Var(span=span)
    if kind == "Num":
        return Num(Fraction(d["value"]), span=span)
    if kind in ("Neg", "Sqrt"):
        return globals()[kind](from_json(d["arg"]), span=span)
    if kind == "Call":
        return Call(d["func"], from_json(d["arg"]), span=span)
    if kind == "Pow":
        return Pow(from_json(d["base"]), Fraction(d["exponent"]), span=span)
    cls = {"Add": Add, "Sub": Sub, "Mul": Mul, "Div": Div}[kind]
    return cls(from_json(d["left"]), from_json(d["right"]), span=span)


def node_count(n: Node) -> int:
    match n:
        case Neg(arg=a) | Sqrt(arg=a) | Call(arg=a) | Pow(base=a):
            return 1 + node_count(a)
        case _ if isinstance(n, BINARY):
            return 1 + node_count(n.left) + node_count(n.right)
    return 1


def is_rational_function(n: Node) -> bool:
    """Only + - * / and integer powers."""
    match n:
        case Var() | Num():
            return True
        case Neg(arg=a):
            return is_rational_function(a)
        case Pow(base=a, exponent=e):
            return e.denominator == 1 and is_rational_function(a)
        case _ if isinstance(n, BINARY):
            return is_rational_function(n.left) and is_rational_function(n.right)
    return False


# -- evaluation --------------------------------------------------------------------

_LC_FUNCS = {"exp": lcf.exp, "ln": lcf.ln, "sin": lcf.sin, "cos": lcf.cos}


def evaluate(f, x: LCNumber) -> LCNumber:
    """Evaluate over the number engine, in the mode and config of ``x``."""
    f = as_expr(f)

    def ev(n: Node) -> LCNumber:
        match n:
            case Var():
                return x
            case Num(value=v):
                return lcf.from_rational(v, x.mode, x.config)
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
                base = ev(a)
                if base.is_zero():
                    if e < 0:
                        raise DivisionByZero("zero to a negative power")
                    if e > 0:
                        return base
                return base.power(e)
            case Sqrt(arg=a):
                v = ev(a)
                if v.terms and v.terms[0][1] < 0:
                    raise DomainError("square root of a negative number")
                return lcf.sqrt(v)
            case Call(func=fn, arg=a):
                return _LC_FUNCS[fn](ev(a))
        raise TypeError(f"not an expression node: {n!r}")

    return ev(f)


def evaluate_rational(f, q) -> Fraction:
    """Exact value at a rational point."""
    f = as_expr(f)
    q = Fraction(q)

    def ev(n: Node) -> Fraction:
        match n:
            case Var():
                return q
            case Num(value=v):
                return v
            case Neg(arg=a):
                return -ev(a)
            case Add(left=a, right=b):
                return ev(a) + ev(b)
            case Sub(left=a, right=b):
                return ev(a) - ev(b)
            case Mul(left=a, right=b):
                return ev(a) * ev(b)
            case Div(left=a, right=b):
                den = ev(b)
                if den == 0:
                    raise DivisionByZero("division by zero")
                return ev(a) / den
            case Pow(base=a, exponent=e):
                v = ev(a)
                if v == 0 and e < 0:
                    raise DivisionByZero("zero to a negative power")
                try:
                    return _scalar.rational_power(v, e)
                except NumericModeRequired as exc:
                    raise NonRationalValue(str(exc)) from None
                except ValueError as exc:
                    raise DomainError(str(exc)) from None
            case Sqrt(arg=a):
                v = ev(a)
                if v < 0:
                    raise DomainError("square root of a negative number")
                r = _scalar.exact_root(v, 2)
                if r is None:
                    raise NonRationalValue(f"sqrt({v}) is irrational")
                return r
            case Call(func=fn, arg=a):
                try:
                    return _scalar.standard_function(fn, ev(a), exact=True)
                except NumericModeRequired as exc:
                    raise NonRationalValue(str(exc)) from None
        raise TypeError(f"not an expression node: {n!r}")

    return ev(f)


# -- symbolic differentiation ---------------------------------------------------

ZERO, ONE = Num(Fraction(0)), Num(Fraction(1))


def _num(n: Node):
    return n.value if isinstance(n, Num) else None


def s_add(a: Node, b: Node) -> Node:
    if _num(a) == 0:
        return b
    if _num(b) == 0:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return Add(a, b)


def s_sub(a: Node, b: Node) -> Node:
    if _num(b) == 0:
        return a
    if _num(a) == 0:
        return s_neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return Sub(a, b)


def s_mul(a: Node, b: Node) -> Node:
    if _num(a) == 0 or _num(b) == 0:
        return ZERO
    if _num(a) == 1:
        return b
    if _num(b) == 1:
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return Mul(a, b)


def s_div(a: Node, b: Node) -> Node:
    if _num(b) == 1:
        return a
    if _num(a) == 0 and _num(b) != 0:
        return ZERO
    if isinstance(a, Num) and isinstance(b, Num) and b.value != 0:
        return Num(a.value / b.value)
    return Div(a, b)


def s_neg(a: Node) -> Node:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def s_pow(a: Node, p: Fraction) -> Node:
    if p == 0:
        return ONE
    return Pow(a, p)


def differentiate_symbolic(f) -> Node:
    """d/dx by the textbook rules, with local constant folding only."""
    f = as_expr(f)
    d = differentiate_symbolic
    match f:
        case Var():
            return ONE
        case Num():
            return ZERO
        case Neg(arg=a):
            return s_neg(d(a))
        case Add(left=a, right=b):
            return s_add(d(a), d(b))
        case Sub(left=a, right=b):
            return s_sub(d(a), d(b))
        case Mul(left=a, right=b):
            return s_add(s_mul(d(a), b), s_mul(a, d(b)))
        case Div(left=a, right=b):
            return s_div(s_sub(s_mul(d(a), b), s_mul(a, d(b))), Pow(b, Fraction(2)))
        case Pow(base=a, exponent=p):
            if p == 0:
                return ZERO
            return s_mul(s_mul(Num(p), s_pow(a, p - 1)), d(a))
        case Sqrt(arg=a):
            return s_div(d(a), s_mul(Num(Fraction(2)), Sqrt(a)))
        case Call(func="exp", arg=a):
            return s_mul(Call("exp", a), d(a))
        case Call(func="ln", arg=a):
            return s_div(d(a), a)
        case Call(func="sin", arg=a):
            return s_mul(Call("cos", a), d(a))
        case Call(func="cos", arg=a):
            return s_neg(s_mul(Call("sin", a), d(a)))
    raise TypeError(f"not an expression node: {f!r}")
