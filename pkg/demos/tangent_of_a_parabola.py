"""
Tangent of a parabola
=====================

The derivative of ``x^2`` at 3 read off from an infinitesimal increment,
then the same tangent drawn next to a finite secant.
"""

from fractions import Fraction

from leibniz import calculus, lcf
from leibniz.plot import emit_plot

eps = lcf.epsilon()

# The difference quotient is an honest number of the field, not a limit.
q = calculus.difference_quotient("x^2", 3, eps)
print("difference quotient:", lcf.render(q))

# Dropping the infinitesimal remainder is taking the standard part.
print("standard part:", lcf.standard_part(q))

# Finite, assignable stand-ins (d)x and (d)y keep the ratio exactly.
pair = calculus.dd_pair("x^2", 3, Fraction(1, 2))
print("(d)x =", pair.dx_assignable, " (d)y =", pair.dy_assignable, " L =", pair.ratio)

# Two infinitely close points fix a line; its standard shadow is the tangent.
line = calculus.tangent_line("x^2", 1)
print("tangent at 1:", line)

# Three infinitely close points fix a circle.
circle, k = calculus.osculating_circle("x", "x^2", 0)
print("osculating circle at the vertex:", circle, " curvature", k)

# An Archimedean certificate uses finite increments h = 1/m only.
print("finite-increment witness:", calculus.archimedean_check("x^2", 3, 6, Fraction(1, 100), 1000))

path = emit_plot("secant_vs_tangent", "x^2", 1, path="tangent_of_a_parabola.svg")
print("figure written to", path)
