"""Equality and containment tests between regions.

Comparison is a semi-decision: a ``Differ`` verdict always carries an exact
rational witness in the symmetric difference, while ``Equal`` means that no
disagreement was found at any of the test points. Points lying exactly on a
boundary circline of either region are skipped, which is what makes the
test insensitive to boundary overlaps.

Test points come from four deterministic sources:

* a ``grid x grid`` lattice of cell midpoints over a bounding box,
* seeded random dyadic points in the same box,
* points just off each boundary circline (both sides),
* one point in every two-dimensional face of the arrangement of all the
  boundary circlines. The arrangement is swept with vertical strips whose
  ends are the critical abscissae (pairwise intersections and vertical
  tangents); inside a strip the curves do not cross, so one abscissa per
  strip and one ordinate between consecutive curves reach every face,
  bounded or not.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .arith import RationalComplex
from .regions import Circline, ExactPoints, Region

__all__ = ["EqualityOptions", "Verdict", "region_equal", "region_contains",
           "arrangement_points", "ARRANGEMENT_ONLY"]

_DPS = 60


@dataclass(frozen=True)
class EqualityOptions:
    box: tuple = (-4, 4, -4, 4)
    grid: int = 600
    random: int = 10_000
    seed: int = 0
    boundary_points: int = 64
    boundary_offset: float = 1e-6
    arrangement: bool = True


ARRANGEMENT_ONLY = EqualityOptions(grid=0, random=0, boundary_points=0, arrangement=True)


@dataclass
class Verdict:
    status: str                      # Equal | Contained | Differ | Inconclusive
    witness: RationalComplex | None = None
    witness_in: str | None = None    # "first" or "second": which region holds the witness
    stage: str | None = None
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status in ("Equal", "Contained")

    def to_json(self) -> dict:
        d = {"status": self.status, "counts": dict(self.counts)}
        if self.witness is not None:
            d["witness"] = str(self.witness)
            d["witness_in"] = self.witness_in
            d["stage"] = self.stage
        return d


# ---------------------------------------------------------------------------
# point sources


def grid_points(box: Sequence, n: int) -> ExactPoints:
    """Midpoints of an n x n subdivision of ``box``, as exact rationals."""
    x0, x1, y0, y1 = (Fraction(v) for v in box)
    den_x = 2 * n * (x1 - x0).denominator * x0.denominator
    den_y = 2 * n * (y1 - y0).denominator * y0.denominator
    D = den_x * den_y // np.gcd(den_x, den_y)
    i = np.arange(n, dtype=np.int64)
    xs = np.array([int((x0 + (x1 - x0) * Fraction(2 * k + 1, 2 * n)) * D) for k in i], dtype=np.int64)
    ys = np.array([int((y0 + (y1 - y0) * Fraction(2 * k + 1, 2 * n)) * D) for k in i], dtype=np.int64)
    P, Q = np.meshgrid(xs, ys, indexing="xy")
    return ExactPoints.grid(P, Q, D)


def random_points(box: Sequence, n: int, seed: int, bits: int = 24) -> ExactPoints:
    rng = np.random.default_rng(seed)
    D = 2 ** bits
    x0, x1, y0, y1 = (float(v) for v in box)
    P = rng.integers(int(np.ceil(x0 * D)), int(np.floor(x1 * D)) + 1, size=n, dtype=np.int64)
    Q = rng.integers(int(np.ceil(y0 * D)), int(np.floor(y1 * D)) + 1, size=n, dtype=np.int64)
    return ExactPoints.grid(P, Q, D)


def boundary_offset_points(curves: Sequence[Circline], box: Sequence, k: int,
                           delta: float, bits: int = 32) -> ExactPoints:
    """Points at distance ``delta`` on both sides of each curve, inside ``box``."""
    x0, x1, y0, y1 = (float(v) for v in box)
    zs = []
    for c in curves:
        if c.A != 0:
            r2 = float(c.radius_squared())
            if r2 <= 0:
                continue
            ctr = complex(c.center())
            r = np.sqrt(r2)
            theta = (np.arange(k) + 0.5) * (2 * np.pi / k)
            u = np.exp(1j * theta)
            base = ctr + r * u
            normal = u
        else:
            nrm = complex(c.Bre, c.Bim)
            nrm /= abs(nrm)
            foot = -c.C / (2 * complex(c.Bre, c.Bim).conjugate())  # point with Re(conj(B) z) = -C/2
            span = 2 * max(abs(x0), abs(x1), abs(y0), abs(y1)) + abs(foot)
            t = np.linspace(-span, span, k)
            base = foot + 1j * nrm * t
            normal = np.full(k, nrm)
        for s in (-1, 1):
            zs.append(base + s * delta * normal)
    if not zs:
        return ExactPoints.grid(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), 1)
    z = np.concatenate(zs)
    z = z[(z.real >= x0) & (z.real <= x1) & (z.imag >= y0) & (z.imag <= y1)]
    D = 2 ** bits
    P = np.round(z.real * D).astype(np.int64)
    Q = np.round(z.imag * D).astype(np.int64)
    return ExactPoints.grid(P, Q, D)


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _dyadic_between(lo, hi) -> Fraction:
    """A short dyadic rational strictly inside (lo, hi)."""
    mid = (lo + hi) / 2
    width = hi - lo
    k = max(0, int(mpmath.ceil(-mpmath.log(width / 8, 2))))
    n = int(mpmath.nint(mid * 2 ** k))
    return Fraction(n, 2 ** k)


def _line_circle_xs(a, b, c, cx, cy, r2):
    n2 = a * a + b * b
    nn = mpmath.sqrt(n2)
    dist = (a * cx + b * cy + c) / nn
    gap = r2 - dist * dist
    tiny = mpmath.mpf(10) ** (-_DPS + 10)
    if gap < -tiny:
        return []
    fx = cx - dist * a / nn
    if gap <= tiny:
        return [fx]
    h = mpmath.sqrt(gap)
    return [fx - h * b / nn, fx + h * b / nn]


def _critical_xs(curves: Sequence[Circline]) -> list:
    xs = []
    data = []
    for c in curves:
        A, Bre, Bim, C = (mpmath.mpf(v) for v in (c.A, c.Bre, c.Bim, c.C))
        if c.A != 0:
            r2 = c.radius_squared()
            if r2 <= 0:
                continue
            cx, cy = -Bre / A, -Bim / A
            r = mpmath.sqrt(_mpf(r2))
            xs += [cx - r, cx + r]
            data.append(("circle", A, Bre, Bim, C, cx, cy, _mpf(r2)))
        else:
            if c.Bim == 0:
                xs.append(-C / (2 * Bre))
            data.append(("line", A, Bre, Bim, C))
    for i in range(len(data)):
        for j in range(i + 1, len(data)):
            p, q = data[i], data[j]
            if p[0] == "line" and q[0] == "line":
                a1, b1, c1 = 2 * p[2], 2 * p[3], p[4]
                a2, b2, c2 = 2 * q[2], 2 * q[3], q[4]
                det = a1 * b2 - a2 * b1
                if det != 0:
                    xs.append((b1 * c2 - b2 * c1) / det)
                continue
            if p[0] == "line":
                p, q = q, p
            _, A1, Br1, Bi1, C1, cx, cy, r2 = p
            if q[0] == "line":
                a, b, c = 2 * q[2], 2 * q[3], q[4]
            else:
                A2, Br2, Bi2, C2 = q[1:5]
                a, b, c = 2 * (Br1 * A2 - Br2 * A1), 2 * (Bi1 * A2 - Bi2 * A1), C1 * A2 - C2 * A1
                if a == 0 and b == 0:
                    continue
            xs += _line_circle_xs(a, b, c, cx, cy, r2)
    return xs


def _dedupe_sorted(vals: list) -> list:
    vals = sorted(vals)
    out = []
    tol = mpmath.mpf(10) ** (-_DPS + 15)
    for v in vals:
        if not out or v - out[-1] > tol * max(1, abs(v)):
            out.append(v)
    return out


def _samples_between(vals: list) -> list[Fraction]:
    if not vals:
        return [Fraction(0)]
    out = [Fraction(int(mpmath.floor(vals[0])) - 1)]
    for lo, hi in zip(vals, vals[1:]):
        out.append(_dyadic_between(lo, hi))
    out.append(Fraction(int(mpmath.ceil(vals[-1])) + 1))
    return out


def _roots_at(curves: Sequence[Circline], x0: Fraction) -> list:
    ys = []
    for c in curves:
        if c.A == 0:
            if c.Bim != 0:
                ys.append(_mpf(-(2 * c.Bre * x0 + c.C) / (2 * c.Bim)))
            continue
        disc = c.Bim ** 2 - c.A * (c.A * x0 * x0 + 2 * c.Bre * x0 + c.C)
        if disc < 0:
            continue
        s = mpmath.sqrt(_mpf(Fraction(disc)))
        ys += [(-c.Bim - s) / c.A, (-c.Bim + s) / c.A]
    return ys


def arrangement_points(curves: Sequence[Circline]) -> ExactPoints:
    """One exact rational point in every 2D face of the arrangement of ``curves``."""
    curves = sorted(set(curves))
    pts = []
    with mpmath.workdps(_DPS):
        xs = _samples_between(_dedupe_sorted(_critical_xs(curves)))
        for x0 in xs:
            for y0 in _samples_between(_dedupe_sorted(_roots_at(curves, x0))):
                pts.append(RationalComplex(x0, y0))
    return ExactPoints.from_rationals(pts)


# ---------------------------------------------------------------------------
# comparisons


def _run(r1: Region, r2: Region, opts: EqualityOptions, subset: bool) -> Verdict:
    curves = sorted(set(r1.circlines()) | set(r2.circlines()))
    stages = []
    if opts.grid:
        stages.append(("grid", lambda: grid_points(opts.box, opts.grid)))
    if opts.random:
        stages.append(("random", lambda: random_points(opts.box, opts.random, opts.seed)))
    if opts.boundary_points:
        stages.append(("boundary", lambda: boundary_offset_points(
            curves, opts.box, opts.boundary_points, opts.boundary_offset)))
    if opts.arrangement:
        stages.append(("arrangement", lambda: arrangement_points(curves)))
    counts = {}
    usable_total = 0
    for name, make in stages:
        pts = make()
        table = {c: pts.signs(c) for c in curves}
        off = np.ones(len(pts), dtype=bool)
        for c in curves:
            off &= table[c] != 0
        m1 = r1.contains_exact(pts, table)
        m2 = r2.contains_exact(pts, table)
        bad = (m1 & ~m2) if subset else (m1 != m2)
        bad &= off
        usable = int(off.sum())
        usable_total += usable
        counts[name] = {"points": len(pts), "usable": usable}
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            return Verdict("Differ", witness=pts.point(i), witness_in="first" if m1[i] else "second",
                           stage=name, counts=counts)
    if usable_total == 0:
        return Verdict("Inconclusive", counts=counts)
    if opts.grid and counts["grid"]["usable"] * 2 < counts["grid"]["points"]:
        return Verdict("Inconclusive", counts=counts)
    return Verdict("Contained" if subset else "Equal", counts=counts)


def region_equal(r1: Region, r2: Region, opts: EqualityOptions = EqualityOptions()) -> Verdict:
    """Equal, Differ (with an exact witness) or Inconclusive."""
    return _run(r1, r2, opts, subset=False)


def region_contains(inner: Region, outer: Region,
                    opts: EqualityOptions = EqualityOptions()) -> Verdict:
    """Contained, Differ (witness in ``inner`` but not ``outer``) or Inconclusive."""
    return _run(inner, outer, opts, subset=True)
