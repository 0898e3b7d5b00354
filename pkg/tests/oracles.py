"""Independent reference computations used by the tests.

Each oracle takes a different route from the library code it checks:
brute-force enumeration, high-precision angles, or direct linear algebra.
"""
from fractions import Fraction
from itertools import product

import mpmath

from cfdyn.arith import GaussianInt, RationalComplex


def nearest_lattice(z) -> GaussianInt:
    """Nearest Gaussian integer by enumeration; ties go to the smaller coordinates."""
    x, y = complex(z).real, complex(z).imag
    cands = [GaussianInt(a, b) for a, b in product(range(int(x) - 2, int(x) + 3), range(int(y) - 2, int(y) + 3))]
    return min(cands, key=lambda g: (round(abs(complex(z) - complex(g)), 12), g.re, g.im))


def diamond_translates(z: RationalComplex) -> list[GaussianInt]:
    """All Gaussian integers g with |Re(z-g)| + |Im(z-g)| <= 1."""
    x0, y0 = int(z.re), int(z.im)
    out = []
    for a, b in product(range(x0 - 2, x0 + 3), range(y0 - 2, y0 + 3)):
        if abs(z.re - a) + abs(z.im - b) <= 1:
            out.append(GaussianInt(a, b))
    return out


def sector_by_angle(z) -> str:
    """Translation branch decided from a 50-digit argument."""
    with mpmath.workdps(50):
        x, y = (mpmath.mpf(Fraction(v).numerator) / Fraction(v).denominator for v in (z.re, z.im))
        t = mpmath.atan2(y, x) / mpmath.pi  # in (-1, 1]
        if mpmath.mpf(-1) / 4 <= t < mpmath.mpf(1) / 4:
            return "E"
        if mpmath.mpf(1) / 4 <= t < mpmath.mpf(3) / 4:
            return "N"
        if mpmath.mpf(-3) / 4 <= t < mpmath.mpf(-1) / 4:
            return "S"
        return "W"


def circline_through(p1, p2, p3):
    """(A, B, C) with A|z|^2 + 2Re(conj(B) z) + C = 0 through three rational points."""
    rows = []
    for p in (p1, p2, p3):
        rows.append([p.re * p.re + p.im * p.im, 2 * p.re, 2 * p.im, Fraction(1)])
    # null vector of the 3x4 system by cofactors
    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    cof = []
    for j in range(4):
        minor = [[r[k] for k in range(4) if k != j] for r in rows]
        cof.append((-1) ** j * det3(minor))
    A, bre, bim, C = cof
    return A, RationalComplex(bre, bim), C


def point_on(A, B: RationalComplex, C, p0: RationalComplex, t: Fraction) -> RationalComplex:
    """Second intersection of the circline with the line through p0 in direction 1 + t i."""
    d = RationalComplex(Fraction(1), t)
    dd = d.re * d.re + d.im * d.im
    lin = 2 * A * (p0.re * d.re + p0.im * d.im) + 2 * (B.re * d.re + B.im * d.im)
    if A == 0:
        return None
    s = -lin / (A * dd)
    return RationalComplex(p0.re + s * d.re, p0.im + s * d.im)


def evaluate(A, B, C, z: RationalComplex):
    return A * (z.re * z.re + z.im * z.im) + 2 * (B.re * z.re + B.im * z.im) + C
