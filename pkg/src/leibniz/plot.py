"""Figure files: a curve against its secant and tangent, or against an
inscribed polygon.  Output is a self-contained 800x600 SVG or a CSV with
columns ``x, f(x), approx(x)``."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from xml.sax.saxutils import escape

from . import lcf
from .calculus import tangent_line
from .errors import DomainError, IoError, LeibnizError, NonRationalValue, NumericModeRequired
from .expr import as_expr, evaluate, evaluate_rational, render

WIDTH, HEIGHT, MARGIN = 800, 600, 50
KINDS = ("secant_vs_tangent", "polygon_approx")


def _value(f, x: Fraction):
    """f(x) as a Fraction when rational, otherwise a float; None off the domain."""
    try:
        return evaluate_rational(f, x)
    except (NonRationalValue, NumericModeRequired):
        pass
    except LeibnizError:
        return None
    try:
        return float(lcf.standard_part(evaluate(f, lcf.from_rational(x, lcf.NUMERIC))))
    except LeibnizError:
        return None


def _grid(a: Fraction, b: Fraction, n: int) -> list[Fraction]:
    return [a + (b - a) * i / n for i in range(n + 1)]


def figure_data(kind: str, f, x0=0, sides: int = 4, interval=None, h=Fraction(1, 2)):
    """Rows (x, f(x), approx(x)) and the labelled overlay for a figure."""
    f = as_expr(f)
    x0 = Fraction(x0)
    if kind == "secant_vs_tangent":
        a, b = (x0 - 1, x0 + 1) if interval is None else map(Fraction, interval)
        line = tangent_line(f, x0)
        y0, y1 = _value(f, x0), _value(f, x0 + h)
        if y0 is None or y1 is None:
            raise DomainError(f"{render(f)} is undefined near {x0}")
        secant = (y1 - y0) / h
        xs = _grid(a, b, 100)
        rows = [(x, _value(f, x), line.a * x - line.c) for x in xs]
        overlays = {
            "tangent": (line.render(), [(x, line.a * x - line.c) for x in (a, b)]),
            "secant": (f"secant h={h}", [(x, y0 + secant * (x - x0)) for x in (a, b)]),
        }
        return rows, overlays
    if kind == "polygon_approx":
        if sides < 2:
            raise DomainError("a polygon needs at least 2 sides")
        a, b = (Fraction(0), Fraction(1)) if interval is None else map(Fraction, interval)
        verts = [(x, _value(f, x)) for x in _grid(a, b, sides)]
        if any(y is None for _, y in verts):
            raise DomainError(f"{render(f)} is undefined at a polygon vertex")
        rows = [(x, y, y) for x, y in verts]
        return rows, {"polygon": (f"{sides} sides", verts)}
    raise DomainError(f"unknown plot kind {kind!r}")


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return str(v) if v.denominator == 1 else repr(float(v))
    return repr(float(v))


def to_csv(rows) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "f(x)", "approx(x)"])
    for x, y, z in rows:
        w.writerow([_fmt(x), _fmt(y), _fmt(z)])
    return out.getvalue()


def to_svg(rows, overlays, title: str) -> str:
    pts = [(float(x), float(y)) for x, y, _ in rows if y is not None]
    for _, seg in overlays.values():
        pts += [(float(x), float(y)) for x, y in seg]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi += 1
    if y_hi == y_lo:
        y_hi, y_lo = y_hi + 1, y_lo - 1

    def sx(x):
        return MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2 * MARGIN)

    def sy(y):
        return HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2 * MARGIN)

    def path(points):
        return " ".join(f"{sx(float(x)):.2f},{sy(float(y)):.2f}" for x, y in points)

    curve = [(x, y) for x, y, _ in rows if y is not None]
    styles = {"tangent": "stroke:#c0392b;stroke-width:2",
              "secant": "stroke:#2980b9;stroke-width:1.5;stroke-dasharray:6 4",
              "polygon": "stroke:#27ae60;stroke-width:2;fill:none"}
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<title>{escape(title)}</title>",
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<polyline points="{path(curve)}" style="stroke:black;stroke-width:1.5;fill:none"/>',
    ]
    label_y = MARGIN - 20
    for name, (label, seg) in overlays.items():
        style = styles[name]
        if len(seg) == 2:
            (x1, y1), (x2, y2) = seg
            parts.append(f'<line class="{name}" x1="{sx(float(x1)):.2f}" y1="{sy(float(y1)):.2f}" '
                         f'x2="{sx(float(x2)):.2f}" y2="{sy(float(y2)):.2f}" style="{style}">'
                         f"<title>{escape(label)}</title></line>")
        else:
            parts.append(f'<polyline class="{name}" points="{path(seg)}" style="{style}">'
                         f"<title>{escape(label)}</title></polyline>")
        parts.append(f'<text x="{MARGIN}" y="{label_y}" font-family="sans-serif" '
                     f'font-size="14">{escape(name)}: {escape(label)}</text>')
        label_y += 16
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_plot(kind: str, f, x0=0, sides: int = 4, path: str = "plot.svg",
              fmt: str | None = None, interval=None) -> str:
    """Write the figure and return the path; the format follows the extension
    unless ``fmt`` is given."""
    fmt = fmt or ("csv" if str(path).endswith(".csv") else "svg")
    if fmt not in ("svg", "csv"):
        raise DomainError(f"unknown plot format {fmt!r}")
    rows, overlays = figure_data(kind, f, x0, sides, interval)
    text = to_csv(rows) if fmt == "csv" else to_svg(rows, overlays, f"{kind}: {render(as_expr(f))}")
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return str(path)
