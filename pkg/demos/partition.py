# The five cells W1..W5 and their images under the diamond map.
# Run: python3 demos/partition.py [out.svg]
import sys

import numpy as np

from cfdyn import DIH4, W, classify_cell, f_diamond, region_equal, EqualityOptions
from cfdyn.diamond import partition_row_regions
from cfdyn.render import render_figure

# classify a handful of points
for w in (0.3 + 0.1j, 0.9 + 0.05j, -0.2 + 0.7j, 0.45 + 0.45j, 2 - 0.3j):
    print(f"{w!s:>14}  cell {classify_cell(w)}   f = {f_diamond(w):.4f}")

# how often each cell shows up in the unit diamond
rng = np.random.default_rng(1)
pts = rng.uniform(-1, 1, 20000) + 1j * rng.uniform(-1, 1, 20000)
pts = pts[np.abs(pts.real) + np.abs(pts.imag) <= 1]
counts = {}
for w in pts[:4000]:
    if w != 0:
        k = classify_cell(complex(w)).k
        counts[k] = counts.get(k, 0) + 1
print("cell counts:", dict(sorted(counts.items())))

# each image row is a finite union of cells, checked region against region
opts = EqualityOptions(grid=200, random=2000)
for k in range(1, 6):
    lhs, rhs = partition_row_regions(k)
    print(f"f(W{k})", region_equal(lhs, rhs, opts).status)

print(len(DIH4), "symmetries x", len(W), "cells")

out = sys.argv[1] if len(sys.argv) > 1 else "partition.svg"
with open(out, "w") as fh:
    fh.write(render_figure("partition"))
print("wrote", out)
