"""
Orders of magnitude
===================

Classifying numbers, comparing them in the sense of Euclid V.4, and
discarding terms that are negligible next to the dominant one.
"""

from leibniz import lcf, relations

eps = lcf.epsilon()
mu = 1 / eps

for text in ("0", "eps^2", "3 - eps", "eps^-1 + 7"):
    x = lcf.parse_number(text)
    print(f"{text:>12}  is {lcf.classify(x)}")

# Finite multiples of 2 exceed 3, so the two are comparable.
print(relations.comparable(lcf.from_rational(2), lcf.from_rational(3)).rationale)

# No finite multiple of eps exceeds 1.
print(relations.inc(eps, lcf.from_rational(1)).rationale)

# The increment of a product, with x=3, y=5, dx=eps, dy=2*eps.
x, y = lcf.from_rational(3), lcf.from_rational(5)
increment = (x + eps) * (y + 2 * eps) - x * y
print("d(xy) =", lcf.render(increment))
print("after purging:", lcf.render(relations.purge(increment)))
print("2*eps^2 negligible next to 11*eps:",
      relations.negligible_relative(2 * eps * eps, 11 * eps))

# Truncated expansions carry their own horizon.
print("exp(eps) =", lcf.render(lcf.exp(eps)))
print("mu^2 > 2*mu:", mu * mu > 2 * mu)
