"""
From ellipses to a parabola
===========================

Ellipses through the origin with foci (0,1) and (0,t+1).  At t = mu the
standard part of the normalized equation is a parabola.
"""

from fractions import Fraction

from leibniz import hyperfinite

family = hyperfinite.ELLIPSE_FAMILY
print("family:", family.to_json())

limit = hyperfinite.conic_limit(family)
print("coefficients at t = mu:", tuple(str(c) for c in limit))
print("limit curve:", hyperfinite.render_conic(limit))

# The same thing seen through large standard t.
for t in (10, 1000, 10 ** 6):
    vals = family.at(Fraction(t))
    print(f"t = {t:>7}:", [f"{float(v / vals[0]):+.6f}" for v in vals])
