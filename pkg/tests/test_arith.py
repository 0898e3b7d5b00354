from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfdyn.arith import (DIH4, ETA, ID, IOTA, RHO, S, T, T_INV, U, GaussianInt, RationalComplex,
                         dih_apply, fold_to_wedge, format_complex, moebius_apply, moebius_compose,
                         parse_complex, sector)
from cfdyn.errors import OriginError, ParseError, PoleError

from oracles import sector_by_angle

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=50)
rationals = st.builds(RationalComplex, fractions, fractions)
gaussians = st.builds(GaussianInt, st.integers(-30, 30), st.integers(-30, 30))


def R(x, y=0):
    return RationalComplex(Fraction(x), Fraction(y))


def test_moebius_examples():
    z = R(2, 3)
    assert moebius_apply(S, moebius_apply(S, z)) == z
    assert moebius_apply(T_INV, 3 + 0.5j) == 2 + 0.5j
    assert moebius_apply(S, R(Fraction(3, 10), Fraction(1, 10))) == R(-3, 1)
    assert moebius_compose(S, S).same_map(moebius_compose(T, T_INV))
    TT = moebius_compose(T, T)
    assert (TT.a, TT.b, TT.c, TT.d) == (GaussianInt(1), GaussianInt(2), GaussianInt(0), GaussianInt(1))
    assert moebius_apply(moebius_compose(T, U), R(0)) == R(1, 1)


def test_pole():
    with pytest.raises(PoleError):
        moebius_apply(S, R(0))


def test_dihedral_examples():
    assert dih_apply(RHO, R(1)) == R(0, 1)
    assert dih_apply(ETA, 2 + 0.5j) == -2 + 0.5j
    assert dih_apply(DIH4[3], R(1, 2)) == R(2, -1)


def test_fold_examples():
    assert fold_to_wedge(1 + 0.2j) == (ID, 1 + 0.2j)
    assert fold_to_wedge(-2 + 0.5j) == (ETA, 2 + 0.5j)
    g, rep = fold_to_wedge(0.2 + 1j)
    assert g == RHO and abs(rep - (1 + 0.2j)) < 1e-15
    with pytest.raises(OriginError):
        fold_to_wedge(R(0))


def test_group_table():
    # closure, identity and inverses of the order-8 group
    for g in DIH4:
        assert g * g.inverse() == ID
        for h in DIH4:
            assert g * h in DIH4
    assert len({g.name for g in DIH4}) == 8
    assert IOTA * IOTA * IOTA * IOTA == ID


@given(rationals, st.sampled_from(DIH4), st.sampled_from(DIH4))
def test_dihedral_composition(z, g, h):
    assert dih_apply(g * h, z) == dih_apply(g, dih_apply(h, z))


@given(rationals.filter(lambda z: z != R(0)))
def test_fold_lands_in_wedge(z):
    g, rep = fold_to_wedge(z)
    assert dih_apply(g, rep) == z
    assert rep.im >= 0 and rep.im <= rep.re


@given(rationals.filter(lambda z: z != R(0)))
def test_sector_matches_angle_oracle(z):
    assert sector(z) == sector_by_angle(z)


def test_sector_boundaries():
    # each diagonal ray belongs to the sector counter-clockwise from it
    assert sector(R(1, 1)) == "N"
    assert sector(R(-1, 1)) == "W"
    assert sector(R(-1, -1)) == "S"
    assert sector(R(1, -1)) == "E"
    assert sector(R(-1)) == "W"


@given(gaussians, gaussians)
def test_gaussian_ring(a, b):
    assert (a * b).norm() == a.norm() * b.norm()
    assert a + b - b == a
    assert complex(a * b) == complex(a) * complex(b)


@given(rationals, rationals.filter(lambda z: z != R(0)))
def test_rational_field(a, b):
    assert (a / b) * b == a
    assert (a * b).norm() == a.norm() * b.norm()


@given(rationals)
def test_format_parse_roundtrip(z):
    assert parse_complex(format_complex(z)) == z


@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_format_parse_roundtrip_float(z):
    assert parse_complex(format_complex(z)) == z


@pytest.mark.parametrize("text,value", [
    ("5", R(5)), ("-i", R(0, -1)), ("1/2+3/4i", R(Fraction(1, 2), Fraction(3, 4))),
    ("2-i", R(2, -1)), ("-1.5", -1.5 + 0j), ("1.4142135+1.7320508i", 1.4142135 + 1.7320508j),
])
def test_parse(text, value):
    v = parse_complex(text)
    assert v == value and type(v) is type(value)


@pytest.mark.parametrize("text,token", [("1+2x", "+2x"), ("abc", "abc"), ("1/0", "1/0")])
def test_parse_errors_name_token(text, token):
    with pytest.raises(ParseError) as e:
        parse_complex(text)
    assert e.value.token == token
