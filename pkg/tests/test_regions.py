from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cfdyn.arith import DIH4, ETA, S, T, T_INV, U, U_INV, RationalComplex, moebius_apply, moebius_compose
from cfdyn.diamond import PHI, W
from cfdyn.errors import EmptyRegionInBox, PoleError
from cfdyn.natext import Z
from cfdyn.regions import (EMPTY, Circline, ExactPoints, HalfSpace, Region, disk, disk_exterior,
                           halfplane, re_ge, re_le, region_sample)

from oracles import circline_through, evaluate, point_on

H = Fraction(1, 2)
fractions = st.fractions(min_value=-6, max_value=6, max_denominator=40)
rationals = st.builds(RationalComplex, fractions, fractions)


def R(x, y=0):
    return RationalComplex(Fraction(x), Fraction(y))


def test_membership_examples():
    assert re_le(H).contains(0)
    assert disk(R(H, -H), H).contains(0.3 + 0.1j)
    assert not disk_exterior(R(H, H), H).contains(0.9 + 0.5j)


def test_circline_images():
    unit = disk(0).boundary
    assert unit.moebius_image(S)[0] == unit
    edge = halfplane(1, 1, -1).boundary            # x + y = 1
    img, _ = edge.moebius_image(S)
    assert img.center() == R(-H, H) and img.radius_squared() == H
    img, _ = disk(R(-1)).boundary.moebius_image(S)  # |z + 1| = 1
    assert img == re_le(H).boundary


def test_region_images():
    assert Region.of(re_le(-H)).transform(T).cells == Region.of(re_le(H)).cells
    inner = Region.of(disk(R(-1)))
    img = inner.transform(S)
    assert img.contains(R(2)) and not img.contains(R(0, 3)) and img.contains(R(H, 5))
    outside = Region.of(disk_exterior(0)).transform(S)
    assert outside.contains(R(-H)) and not outside.contains(R(-2))


def test_normal_form_is_syntactic():
    c1, s1 = Circline.from_form(2, R(-2, 4), 6)
    c2, s2 = Circline.from_form(-Fraction(1, 3), R(Fraction(1, 3), -Fraction(2, 3)), -1)
    assert c1 == c2 and s1 == 1 and s2 == -1
    assert HalfSpace.from_form(2, R(-2, 4), 6, -1) == HalfSpace.from_form(-1, R(1, -2), -3, 1)


_WORDS = [T, U, S, T_INV, U_INV]
_WORDS = _WORDS + [moebius_compose(a, b) for a in _WORDS for b in _WORDS]
_WORDS = _WORDS + [moebius_compose(a, moebius_compose(b, c)) for a in (S, T) for b in (U, S) for c in (S, T_INV)]


@given(rationals, rationals, rationals, st.lists(fractions, min_size=5, max_size=5),
       st.sampled_from(_WORDS))
def test_pushforward_exact(p1, p2, p3, slopes, m):
    A, B, C = circline_through(p1, p2, p3)
    assume(any(v != 0 for v in (A, B.re, B.im)))
    c, _ = Circline.from_form(A, B, C)
    img, _ = c.moebius_image(m)
    pts = [p1, p2, p3] + [q for q in (point_on(A, B, C, p1, t) for t in slopes) if q is not None]
    for z in pts:
        assert evaluate(A, B, C, z) == 0
        try:
            w = moebius_apply(m, z)
        except PoleError:
            continue
        assert img.value(w) == 0


@given(rationals, st.sampled_from(DIH4))
def test_dihedral_image_membership(z, g):
    for k in range(1, 6):
        moved = W[k].transform(g)
        assert moved.contains(g(z), eps=0) == W[k].contains(z, eps=0)


@given(rationals, st.sampled_from([S, T, U_INV, moebius_compose(S, T)]))
def test_moebius_image_membership(z, m):
    try:
        w = moebius_apply(m, z)
    except PoleError:
        return
    for k in range(1, 6):
        assert Z[k].transform(m).contains(w, eps=0) == Z[k].contains(z, eps=0)


@given(st.lists(rationals, min_size=1, max_size=30))
def test_exact_batch_matches_scalar(zs):
    pts = ExactPoints.from_rationals(zs)
    for r in (PHI, W[3], Z[4], Z[2] | W[5], Z[1] & Z[2]):
        assert list(r.contains_exact(pts)) == [r.contains(z, eps=0) for z in zs]


def test_float_classification_against_exact():
    rng = np.random.default_rng(3)
    z = rng.uniform(-3, 3, 4000) + 1j * rng.uniform(-3, 3, 4000)
    exact = ExactPoints.from_floats(z)
    for r in (PHI, W[2], Z[3], Z[5]):
        tri = r.classify_float(z, 1e-9)
        ex = r.contains_exact(exact)
        assert np.all(ex[tri == 1]) and not np.any(ex[tri == -1])


def test_algebra():
    r = W[3]
    assert (r | EMPTY).cells == r.cells
    pts = ExactPoints.from_rationals([R(Fraction(a, 7), Fraction(b, 7)) for a, b in product(range(-14, 15), repeat=2)])
    assert np.array_equal((r & r).contains_exact(pts), r.contains_exact(pts))
    u = Z[1] | Z[2]
    assert np.array_equal(u.contains_exact(pts), Z[1].contains_exact(pts) | Z[2].contains_exact(pts))
    i = Z[1] & Z[2]
    assert np.array_equal(i.contains_exact(pts), Z[1].contains_exact(pts) & Z[2].contains_exact(pts))


def test_json_roundtrip():
    for r in (PHI, W[4], Z[5]):
        assert Region.from_json(r.to_json()).cells == r.cells


def test_sampling():
    z = region_sample(PHI, (-1, 1, -1, 1), 1, seed=1)
    assert abs(z[0].real) + abs(z[0].imag) < 1
    pts = region_sample(W[1], (-4, 4, -4, 4), 100, seed=7)
    assert len(pts) == 100
    assert np.all(pts.imag <= pts.real - 1) and np.all(pts.imag >= 0)
    with pytest.raises(EmptyRegionInBox):
        region_sample(EMPTY, (-1, 1, -1, 1), 1, seed=0)
    a = region_sample(Z[3], (-4, 4, -4, 4), 50, seed=2)
    assert np.array_equal(a, region_sample(Z[3], (-4, 4, -4, 4), 50, seed=2))
