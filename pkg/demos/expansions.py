# Diamond and Hurwitz expansions side by side.
# Run: python3 demos/expansions.py
import math
from fractions import Fraction

import numpy as np

from cfdyn import DIAMOND, HURWITZ, RationalComplex, convergents, expand, format_complex
from cfdyn.cf import convergence_report, cross_determinants

z = complex(math.sqrt(2), math.sqrt(3))

# first ten digits from each choice function
for c in (DIAMOND, HURWITZ):
    e = expand(z, c, 10)
    print(f"{c.name:8}", " ".join(format_complex(a) for a in e.digits))

# every remainder after the first lies outside the unit disk
e = expand(z, DIAMOND, 40)
print("smallest |z_n|, n >= 1:", min(abs(complex(w)) for w in e.remainders[1:]))

# convergents close in quickly
rep = convergence_report(z, DIAMOND, 40)
for n in (0, 4, 8, 12, 16, 20):
    print(f"n={n:2}  |p/q - z| = {rep.errors[n]:.3e}   |q| = {rep.q_norms[n]:.3e}")

# the cross determinant is the same unit at every index
pairs = convergents(e.digits[:8])
print("p_n q_{n-1} - p_{n-1} q_n:", {format_complex(d) for d in cross_determinants(e.digits[:8])})
print("p_7 / q_7 =", format_complex(pairs[7].value()))

# a rational input terminates, with exact arithmetic all the way
r = RationalComplex(Fraction(355, 113), Fraction(-7, 9))
e = expand(r, DIAMOND, 100)
print(format_complex(r), "->", [format_complex(a) for a in e.digits], "terminated:", e.terminated)

# digit sizes over many random points
rng = np.random.default_rng(0)
sizes = []
for w in rng.uniform(-5, 5, 200) + 1j * rng.uniform(-5, 5, 200):
    sizes += [abs(complex(a)) for a in expand(complex(w), DIAMOND, 20).digits[1:]]
print("median |a_n|:", np.median(sizes), " max:", max(sizes))
