# Orbits of the natural extension: entering V, then staying in Psi.
# Run: python3 demos/natural_extension.py [out.svg]
import math
import sys

import numpy as np

from cfdyn import D, F_diamond, orbit_until_V, psi, trap_experiment
from cfdyn.natext import V_contains
from cfdyn.render import render_figure

z, w = 10 + 10j, complex(math.sqrt(2), math.sqrt(3))
r = orbit_until_V(z, w)
print("enters V after", r.N, "steps at", r.state)

# follow it for a while after entry
P = psi().psi
zz, ww = r.state
inside = 0
for _ in range(300):
    zz, ww = F_diamond(zz, ww)
    inside += P.contains(zz, ww, 1e-9)
print("steps in Psi after entry:", inside, "/ 300")

# how the closure under F grew, step by step
b = psi()
print("pieces produced per iteration:", b.added, " stable from", b.stabilized_at)

# a batch of random starting pairs
rep = trap_experiment(pairs=300, seed=2)
print(f"entered V: {rep.entered}/300, latest entry step {rep.max_entry}, stayed in Psi: {rep.stayed}/300")

# entry times, as a small histogram
rng = np.random.default_rng(2)
times = []
for _ in range(300):
    a, b_ = rng.uniform(-5, 5, 2), rng.uniform(-5, 5, 2)
    zz, ww = complex(*a), complex(*b_)
    if abs(zz - ww) > 0.1:
        times.append(orbit_until_V(zz, ww).N)
print("entry-time histogram:", np.bincount(times).tolist())

print("(0, 1.5) in D:", D.contains(0, 1.5, 1e-9), "  in V:", V_contains(0, 1.5))

out = sys.argv[1] if len(sys.argv) > 1 else "psi.svg"
with open(out, "w") as fh:
    fh.write(render_figure("psi"))
print("wrote", out)
