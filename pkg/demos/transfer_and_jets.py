"""
Transfer, and a nilsquare contrast
==================================

Sentences with standard parameters move from standard elements to all
elements; nilsquare jets give derivatives without any order structure.
"""

from leibniz import calculus, transfer

phi = "forall^st x. forall^st y. x + y = y + x"
print(transfer.render_formula(transfer.apply_transfer(phi)))

for text in transfer.ORDERED_FIELD_AXIOMS[:3]:
    report = transfer.test_instances(transfer.apply_transfer(text), budget=300)
    print(f"{text}\n    {report.summary}")

print(transfer.check_applicability("forall^st x. x < H", {"H": False}).reasons)

# The pool lists infinite elements early, so a false bound fails at mu.
print(transfer.test_instances("forall x. x < 1000").summary)

d = calculus.Jet2.generator()
print("d*d =", d * d)
try:
    d.invert()
except calculus.NonInvertibleJet as exc:
    print("1/d:", exc)
print("jet of x^2 + 3x at 0:", calculus.jet_eval("x^2+3*x", 0))
print("microaffine slope of 7 + 4d + d^2:", calculus.microaffine_slope(lambda e: 7 + 4 * e + e * e))
