"""Command line interface: ``python -m leibniz <command> ...``.

Exit status is 0 on success, 2 on a usage error and 3 when the computation
raises a domain error (the error class name goes to stderr); ``selfcheck``
exits 1 when a check fails.  Global options
come from, in increasing priority: built-in defaults, a ``key=value`` config
file (``--config`` or the ``LEIBNIZ_CONFIG`` environment variable), and the
command line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from typing import Callable

from . import calculus, hyperfinite, lcf, plot, relations, transfer
from .errors import LeibnizError
from .expr import as_expr, evaluate

CONFIG_ENV = "LEIBNIZ_CONFIG"


@dataclass(frozen=True)
class CliConfig:
    mode: str = "exact"
    window: Fraction = Fraction(12)
    precision: int = 50
    output: str = "text"
    plot_format: str = "svg"

    def __post_init__(self):
        if self.mode not in lcf.MODES:
            raise ValueError(f"mode must be one of {lcf.MODES}")
        if self.output not in ("text", "json"):
            raise ValueError("output must be text or json")
        if self.plot_format not in ("svg", "csv"):
            raise ValueError("plot_format must be svg or csv")
        object.__setattr__(self, "window", Fraction(self.window))
        object.__setattr__(self, "precision", int(self.precision))

    @property
    def engine(self) -> lcf.EngineConfig:
        return lcf.EngineConfig(window=self.window, numeric_precision=self.precision)


def load_config(path: str) -> dict:
    """Read ``key = value`` lines; blank lines and ``#`` comments are ignored."""
    known = {f.name for f in fields(CliConfig)}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip().replace("-", "_"), value.strip()
            if not sep or key not in known:
                raise ValueError(f"{path}:{n}: expected one of {sorted(known)} = value")
            out[key] = value
    return out


# -- helpers ----------------------------------------------------------------------

def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


class Ctx:
    def __init__(self, cfg: CliConfig):
        self.cfg = cfg
        self.mode = cfg.mode
        self.engine = cfg.engine

    def number(self, text: str) -> lcf.LCNumber:
        return lcf.parse_number(text, self.mode, self.engine)

    @property
    def kw(self) -> dict:
        return {"mode": self.mode, "config": self.engine}


Result = tuple  # (text, json-able)


# -- commands -----------------------------------------------------------------------

def cmd_eval(a, c: Ctx) -> Result:
    v = evaluate(as_expr(a.expr), c.number(a.at))
    return lcf.render(v), lcf.to_json(v)


def cmd_classify(a, c: Ctx) -> Result:
    k = lcf.classify(c.number(a.number))
    return str(k), {"classification": str(k)}


def cmd_st(a, c: Ctx) -> Result:
    s = lcf.standard_part(c.number(a.number))
    return str(s), {"value": str(s)}


def cmd_relate(a, c: Ctx) -> Result:
    x, y = c.number(a.a), c.number(a.b)
    if a.relation == "approx":
        holds = relations.approx_eq(x, y)
        return str(holds).lower(), {"holds": holds}
    rep = relations.inc(x, y) if a.relation == "inc" else relations.comparable(x, y)
    text = f"{str(rep.holds).lower()}" + (f" (witness {rep.witness})" if rep.witness else "")
    return text, rep.to_json()


def cmd_purge(a, c: Ctx) -> Result:
    x = c.number(a.number)
    v = relations.purge(x) if a.order is None else relations.purge_to_order(x, a.order)
    return lcf.render(v), lcf.to_json(v)


def cmd_deriv(a, c: Ctx) -> Result:
    if a.order is None:
        v = calculus.derivative(a.expr, a.at, **c.kw)
    else:
        v = calculus.nth_derivative(a.expr, a.at, a.order, **c.kw)
    return str(v), {"value": str(v)}


def cmd_quotient(a, c: Ctx) -> Result:
    q = calculus.difference_quotient(a.expr, a.at, c.number(a.dx))
    return lcf.render(q), lcf.to_json(q)


def cmd_ddpair(a, c: Ctx) -> Result:
    p = calculus.dd_pair(a.expr, a.at, a.dx, **c.kw)
    return f"(d)x = {p.dx_assignable}, (d)y = {p.dy_assignable}, L = {p.ratio}", p.to_json()


def cmd_tangent(a, c: Ctx) -> Result:
    line = calculus.tangent_line(a.expr, a.at, a.normalization, **c.kw)
    return line.render(), line.to_json()


def cmd_curvature(a, c: Ctx) -> Result:
    circle, k = calculus.osculating_circle(a.fx, a.fy, a.at, **c.kw)
    data = circle.to_json()
    data["curvature"] = str(k)
    return f"{circle.render()}, curvature {k}", data


def cmd_integrate(a, c: Ctx) -> Result:
    r = hyperfinite.riemann_sum_poly(a.poly, a.lo, a.hi, rule=a.rule)
    v = lcf.standard_part(r)
    text = str(v) if not a.show_sum else f"{v}  (sum = {lcf.render(r)})"
    return text, {"value": str(v), "riemann_sum": lcf.to_json(r)}


def cmd_sum_powers(a, c: Ctx) -> Result:
    s = hyperfinite.sum_powers(a.k)
    return s.render(), {"k": s.k, "coefficients": [str(q) for q in s.coefficients]}


def cmd_mu_demo(a, c: Ctx) -> Result:
    m = hyperfinite.mu(**c.kw).value
    facts = {
        "mu": lcf.render(m),
        "2*mu > mu": str(lcf.compare(2 * m, m)),
        "mu + 1 > mu": str(lcf.compare(m + 1, m)),
        "mu^2 > 2*mu": str(lcf.compare(m * m, 2 * m)),
        "classify(1/mu)": str(lcf.classify(1 / m)),
        "st(1/mu)": str(lcf.standard_part(1 / m)),
        "st(mu * (1/mu))": str(lcf.standard_part(m * (1 / m))),
    }
    return "\n".join(f"{k}: {v}" for k, v in facts.items()), facts


def cmd_microstraight(a, c: Ctx) -> Result:
    v = hyperfinite.microstraightness_check(a.fx, a.fy, a.at, **c.kw)
    s = lcf.standard_part(v)
    return f"{lcf.render(v)}  (st = {s})", {"value": lcf.to_json(v), "st": str(s)}


def cmd_transitus(a, c: Ctx) -> Result:
    if a.family:
        text = a.family
        if os.path.exists(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        fam = hyperfinite.ConicFamily.from_json(json.loads(text))
    else:
        fam = hyperfinite.ELLIPSE_FAMILY
    coeffs = hyperfinite.conic_limit(fam, **c.kw)
    eq = hyperfinite.render_conic(coeffs)
    return eq, {"coefficients": dict(zip(hyperfinite.NAMES, map(str, coeffs))), "equation": eq}


def _params(items: list[str]) -> tuple[dict, dict]:
    marks, values = {}, {}
    for item in items or ():
        name, _, rest = item.partition("=")
        flag, _, value = rest.partition(":")
        if flag not in ("st", "nonst"):
            raise ValueError(f"parameter {item!r}: expected NAME=st or NAME=nonst[:VALUE]")
        marks[name] = flag == "st"
        if value:
            values[name] = value
    return marks, values


def cmd_transfer(a, c: Ctx) -> Result:
    marks, raw = _params(a.param)
    phi = transfer.parse_formula(a.formula)
    rep = transfer.verdict_report(phi, marks)
    lines = [f"applicable: {str(rep['applicable']).lower()}"]
    lines += [f"reason: {r['detail']}" for r in rep["reasons"]]
    if rep["rewritten"]:
        lines.append(f"rewritten: {rep['rewritten']}")
    if a.test:
        values = {k: lcf.parse_number(v) for k, v in raw.items()}
        target = transfer.apply_transfer(phi, marks) if rep["applicable"] else phi
        inst = transfer.test_instances(target, seed=a.seed, budget=a.budget, values=values)
        lines.append(inst.summary)
        rep["instances"] = inst.to_json()
        rep["counterexample"] = inst.counterexample
    return "\n".join(lines), rep


def cmd_jet(a, c: Ctx) -> Result:
    j = calculus.jet_eval(a.expr, a.at, **c.kw)
    return f"Jet2({j.value}, {j.slope})", j.to_json()


def cmd_plot(a, c: Ctx) -> Result:
    fmt = a.format or ("csv" if a.out.endswith(".csv") else c.cfg.plot_format)
    interval = (a.lo, a.hi) if a.lo is not None and a.hi is not None else None
    path = plot.emit_plot(a.kind, a.expr, a.at, a.sides, a.out, fmt, interval)
    return f"wrote {path}", {"path": path, "format": fmt}


def cmd_archimedes(a, c: Ctx) -> Result:
    w = calculus.archimedean_check(a.expr, a.at, a.limit, a.tol, a.n)
    return f"witness {w}", {"witness": w}


def cmd_selfcheck(a, c: Ctx) -> Result:
    from . import checks
    results = checks.run_all(quick=a.quick)
    text = "\n".join(r.line() for r in results)
    code = 0 if all(r.passed for r in results) else 1
    return text, [asdict(r) for r in results], code


# -- parser -------------------------------------------------------------------------

def _globals(p: argparse.ArgumentParser):
    S = argparse.SUPPRESS
    g = p.add_argument_group("global options")
    g.add_argument("--mode", choices=lcf.MODES, default=S, help="coefficient mode")
    g.add_argument("--window", type=_rational, default=S, help="truncation window T")
    g.add_argument("--precision", type=int, default=S, help="decimal digits in numeric mode")
    g.add_argument("--output", choices=("text", "json"), default=S)
    g.add_argument("--config", default=S, help=f"key=value file (default ${CONFIG_ENV})")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _globals(common)
    p = argparse.ArgumentParser(prog="leibniz", parents=[common],
                                description="Infinitesimal calculus over a Levi-Civita field.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, fn: Callable, help_: str):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("eval", cmd_eval, "evaluate an expression at a Levi-Civita number")
    sp.add_argument("expr")
    sp.add_argument("--at", required=True, help='number, e.g. "3 + eps"')
    for name, fn, h in (("classify", cmd_classify, "zero, infinitesimal, appreciable or infinite"),
                        ("st", cmd_st, "standard part of a finite number")):
        add(name, fn, h).add_argument("number")
    sp = add("relate", cmd_relate, "inc, comparable, or approx between two numbers")
    sp.add_argument("relation", choices=("inc", "comparable", "approx"))
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("purge", cmd_purge, "discard negligible terms")
    sp.add_argument("number")
    sp.add_argument("--order", type=_rational, default=None, help="keep exponents <= ORDER")
    sp = add("deriv", cmd_deriv, "derivative as the standard part of a difference quotient")
    sp.add_argument("expr")
    sp.add_argument("--at", type=_rational, required=True)
    sp.add_argument("--order", type=int, default=None)
    sp = add("quotient", cmd_quotient, "the difference quotient itself")
    sp.add_argument("expr")
    sp.add_argument("--at", type=_rational, required=True)
    sp.add_argument("--dx", default="eps")
    sp = add("ddpair", cmd_ddpair, "assignable (d)x and (d)y")
    sp.add_argument("expr")
    sp.add_argument("--at", type=_rational, required=True)
    sp.add_argument("--dx", type=_rational, required=True)
    sp = add("tangent", cmd_tangent, "tangent line through two infinitely close points")
    sp.add_argument("expr")
    sp.add_argument("--at", type=_rational, required=True)
    sp.add_argument("--normalization", choices=calculus.NORMALIZATIONS, default=None)
    sp = add("curvature", cmd_curvature, "osculating circle of a parametric curve")
    sp.add_argument("fx")
    sp.add_argument("fy")
    sp.add_argument("--at", type=_rational, required=True)
    sp = add("integrate", cmd_integrate, "integral of a polynomial via a mu-piece Riemann sum")
    sp.add_argument("poly")
    sp.add_argument("--from", dest="lo", type=_rational, required=True)
    sp.add_argument("--to", dest="hi", type=_rational, required=True)
    sp.add_argument("--rule", choices=("right", "left"), default="right")
    sp.add_argument("--show-sum", action="store_true")
    sp = add("sum-powers", cmd_sum_powers, "closed form of 1^k + ... + n^k")
    sp.add_argument("k", type=int)
    add("mu-demo", cmd_mu_demo, "arithmetic of the bounded infinite mu")
    sp = add("microstraight", cmd_microstraight, "squared side length of the mu-gon, times mu^2")
    sp.add_argument("fx")
    sp.add_argument("fy")
    sp.add_argument("--at", type=_rational, required=True)
    sp = add("transitus", cmd_transitus, "limit conic of a family at t = mu")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--builtin", choices=("ellipse-family",))
    g.add_argument("--family", help="JSON object or path to a JSON file")
    sp = add("transfer", cmd_transfer, "check and apply transfer to a sentence")
    sp.add_argument("formula")
    sp.add_argument("--param", action="append", metavar="NAME=st|nonst[:VALUE]")
    sp.add_argument("--test", action="store_true", help="spot-check over a sample pool")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=500)
    sp = add("jet", cmd_jet, "value and slope by nilsquare jet arithmetic")
    sp.add_argument("expr")
    sp.add_argument("--at", type=_rational, required=True)
    sp = add("plot", cmd_plot, "write a figure as SVG or CSV")
    sp.add_argument("kind", choices=plot.KINDS)
    sp.add_argument("expr")
    sp.add_argument("--at", type=_rational, default=Fraction(0))
    sp.add_argument("--sides", type=int, default=4)
    sp.add_argument("--from", dest="lo", type=_rational, default=None)
    sp.add_argument("--to", dest="hi", type=_rational, default=None)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=("svg", "csv"), default=None)
    sp = add("archimedes", cmd_archimedes, "finite-increment certificate for a derivative")
    sp.add_argument("expr")
    sp.add_argument("--at", type=_rational, required=True)
    sp.add_argument("--limit", type=_rational, required=True)
    sp.add_argument("--tol", type=_rational, required=True)
    sp.add_argument("--n", type=int, default=1000)
    sp = add("selfcheck", cmd_selfcheck, "run the acceptance computations")
    sp.add_argument("--quick", action="store_true")
    return p


def resolve_config(ns: argparse.Namespace, environ=os.environ) -> CliConfig:
    values: dict = {}
    path = getattr(ns, "config", None) or environ.get(CONFIG_ENV)
    if path:
        values.update(load_config(path))
    for key in ("mode", "window", "precision", "output"):
        if hasattr(ns, key):
            values[key] = getattr(ns, key)
    return replace(CliConfig(), **values)


def run(argv: list[str] | None = None, stdout=None, stderr=None, environ=os.environ) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(ns, environ)
    except (OSError, ValueError) as exc:
        print(f"leibniz: error: bad configuration: {exc}", file=stderr)
        return 2
    try:
        text, data, code = (*ns.func(ns, Ctx(cfg)), 0)[:3]
    except LeibnizError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 3
    except ValueError as exc:
        print(f"leibniz {ns.command}: error: {exc}", file=stderr)
        return 2
    if cfg.output == "json":
        print(json.dumps(data, indent=2), file=stdout)
    else:
        print(text, file=stdout)
    return code


def main() -> None:
    sys.exit(run())
