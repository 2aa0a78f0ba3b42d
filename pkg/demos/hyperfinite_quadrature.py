"""
Quadrature with mu rectangles
=============================

A Riemann sum with mu = 1/eps pieces, evaluated in closed form.  The
standard part is the integral; what is left over is infinitesimal.
"""

from leibniz import hyperfinite, lcf
from leibniz.plot import emit_plot

# Faulhaber closed forms make sums over mu terms computable.
for k in range(4):
    print(f"sum of i^{k}:", hyperfinite.sum_powers(k))

r = hyperfinite.riemann_sum_poly("x^2", 0, 1)
print("right-endpoint sum for x^2 on [0,1]:", lcf.render(r))
print("integral:", lcf.standard_part(r))

left = hyperfinite.riemann_sum_poly("x^2", 0, 1, rule="left")
print("left-endpoint sum:", lcf.render(left), "(same standard part)")

print("6x^5 on [0,2]:", hyperfinite.integrate_poly("6*x^5", 0, 2))

# Each side of the infinilateral polygon has squared length |alpha'|^2/mu^2.
side = hyperfinite.microstraightness_check("x", "x^2", 1)
print("mu^2 |side|^2 at t=1:", lcf.render(side), "-> speed^2", lcf.standard_part(side))

print("figure written to", emit_plot("polygon_approx", "x^2", sides=6,
                                      path="polygon_approx.csv"))
