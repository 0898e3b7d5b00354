from fractions import Fraction

import numpy as np
import pytest

from cfdyn.arith import RationalComplex
from cfdyn.compare import (ARRANGEMENT_ONLY, EqualityOptions, arrangement_points, region_contains,
                           region_equal)
from cfdyn.diamond import W
from cfdyn.natext import Z, hatZ_compute
from cfdyn.regions import EMPTY, Region, disk, disk_exterior, halfplane, re_le

H = Fraction(1, 2)
FAST = EqualityOptions(grid=120, random=1000)


def _witness_ok(r1, r2, v):
    a, b = r1.contains(v.witness, eps=0), r2.contains(v.witness, eps=0)
    assert a != b
    assert (v.witness_in == "first") == a


def test_self_equal():
    assert region_equal(W[3], W[3], FAST).status == "Equal"


def test_z1_from_pieces():
    assert region_equal(hatZ_compute(1), Z[1], FAST).status == "Equal"


def test_differ_has_exact_witness():
    v = region_equal(W[4], W[5], FAST)
    assert v.status == "Differ"
    _witness_ok(W[4], W[5], v)
    assert W[5].contains(RationalComplex(Fraction(1, 4), Fraction(1, 8)), eps=0)
    assert not W[4].contains(RationalComplex(Fraction(1, 4), Fraction(1, 8)), eps=0)


def test_sliver_caught_by_arrangement():
    # a strip of width 1e-7 is invisible to the grid but is a face of the arrangement
    a = Region.of(re_le(0))
    b = Region.of(re_le(Fraction(1, 10 ** 7)))
    only_grid = EqualityOptions(grid=200, random=0, boundary_points=0, arrangement=False)
    assert region_equal(a, b, only_grid).status == "Equal"
    v = region_equal(a, b, EqualityOptions(grid=200, random=0, boundary_points=0))
    assert v.status == "Differ" and v.stage == "arrangement"
    _witness_ok(a, b, v)


def test_tangent_circles():
    # two internally tangent disks differ on a crescent
    a = Region.of(disk(RationalComplex(0, 0), 1))
    b = Region.of(disk(RationalComplex(Fraction(1, 1000), 0), Fraction(999, 1000) ** 2))
    v = region_equal(a, b, ARRANGEMENT_ONLY)
    assert v.status == "Differ"
    _witness_ok(a, b, v)


def test_boundary_insensitive():
    # closed half-plane vs the complement of the opposite closed half-plane
    a = Region.of(re_le(H))
    b = Region.of(halfplane(-1, 0, H).complement())
    assert region_equal(a, b, FAST).status == "Equal"


def test_containment():
    small, big = Region.of(disk(0, 1)), Region.of(disk(0, 4))
    assert region_contains(small, big, FAST).status == "Contained"
    v = region_contains(big, small, FAST)
    assert v.status == "Differ" and big.contains(v.witness, eps=0) and not small.contains(v.witness, eps=0)
    assert region_contains(EMPTY, small, FAST).ok


def test_inconclusive_when_nothing_usable():
    # no grid, no arrangement: there are no test points at all
    opts = EqualityOptions(grid=0, random=0, boundary_points=0, arrangement=False)
    assert region_equal(W[1], W[1], opts).status == "Inconclusive"


def test_arrangement_hits_every_face():
    # lines x = k and y = k for k = -1, 0, 1 cut the plane into 16 faces
    curves = [re_le(k).boundary for k in (-1, 0, 1)] + [halfplane(0, 1, -k).boundary for k in (-1, 0, 1)]
    pts = arrangement_points(curves).to_complex()
    cells = {(int(np.searchsorted([-1, 0, 1], p.real)), int(np.searchsorted([-1, 0, 1], p.imag))) for p in pts}
    assert len(cells) == 16
    # three concentric-ish circles and a line
    curves = [disk(0, 1).boundary, disk(RationalComplex(1, 0), 1).boundary,
              disk_exterior(RationalComplex(0, 1), 1).boundary, re_le(H).boundary]
    pts = arrangement_points(curves)
    sig = {tuple(int(pts.signs(c)[i]) for c in curves) for i in range(len(pts))}
    assert all(0 not in s for s in sig)
    assert len(sig) >= 9
