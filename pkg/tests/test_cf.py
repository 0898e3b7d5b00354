import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from cfdyn.arith import GaussianInt, RationalComplex
from cfdyn.cf import (DIAMOND, HURWITZ, ChoiceFunction, check_identity_residual, choice_diamond,
                      choice_from_region, choice_hurwitz, convergence_report, convergents,
                      cross_determinants, evaluate_cf, expand, expansion_to_json, f_empty,
                      f_empty_steps, in_phi_diamond)
from cfdyn.diamond import PHI
from cfdyn.errors import CFDivisionByZero, OriginError
from cfdyn.suites import random_digit_sequences

from oracles import diamond_translates, nearest_lattice

G = GaussianInt
fractions = st.fractions(min_value=-12, max_value=12, max_denominator=60)
rationals = st.builds(RationalComplex, fractions, fractions)
floats = st.floats(-12, 12, allow_nan=False)
complexes = st.builds(complex, floats, floats)


def R(x, y=0):
    return RationalComplex(Fraction(x), Fraction(y))


def test_hurwitz_examples():
    assert choice_hurwitz(0) == G(0)
    assert choice_hurwitz(0.6 + 0.7j) == G(1, 1)
    assert choice_hurwitz(R(H := Fraction(1, 2), H)) == G(0)


def test_f_empty_examples():
    assert f_empty(2.3 + 0.1j) == pytest.approx(1.3 + 0.1j)
    assert f_empty(1 + 1.5j) == 1 + 0.5j
    assert f_empty(R(-3)) == R(-2)
    with pytest.raises(OriginError):
        f_empty(0j)


def test_diamond_examples():
    assert choice_diamond(0.3 - 0.2j) == G(0)
    assert choice_diamond(2.3 + 0.1j) == G(2)
    assert choice_diamond(1 + 1.5j) == G(1, 1)
    assert choice_diamond(R(0)) == G(0)
    assert in_phi_diamond(0) and in_phi_diamond(0.6 + 0.2j) and not in_phi_diamond(0.8 + 0.3j)


@given(complexes)
def test_hurwitz_matches_enumeration(z):
    assert choice_hurwitz(z) == nearest_lattice(z)


@given(rationals)
def test_diamond_choice_lands_in_diamond(z):
    a = choice_diamond(z)
    allowed = diamond_translates(z)
    assert a in allowed
    if len(allowed) == 1:
        assert a == allowed[0]
    assert f_empty_steps(z) <= math.ceil(abs(z.re)) + math.ceil(abs(z.im))


@given(st.builds(RationalComplex, st.fractions(-4, 4, max_denominator=30), st.fractions(-4, 4, max_denominator=30)))
def test_diamond_fast_path_matches_region_descent(z):
    assert choice_diamond(z) == choice_from_region(z, PHI)


@given(st.floats(0, 2 * math.pi))
def test_unit_circle_gap(t):
    assume(abs((t + math.pi / 4) % (math.pi / 2) - math.pi / 4) > 1e-9)
    z = complex(math.cos(t), math.sin(t))
    assert abs(z - complex(choice_diamond(z))) < 1


def test_custom_choice():
    c = ChoiceFunction.custom(PHI)
    assert c(2.3 + 0.1j) == G(2)
    assert ChoiceFunction.by_name("hurwitz") == HURWITZ


def test_expand_examples():
    e = expand(R(5), DIAMOND, 10)
    assert e.digits == [G(5)] and e.terminated
    e = expand(R(0), DIAMOND, 3)
    assert e.digits == [G(0)] and e.terminated
    e = expand(R(2, 1), DIAMOND, 10)
    assert e.terminated and evaluate_cf(e.digits) == R(2, 1)
    z = complex(math.sqrt(2), math.sqrt(3))
    e = expand(z, DIAMOND, 40)
    assert len(e.digits) == 40 and not e.terminated
    assert e.min_tail_modulus() >= 1


@given(rationals, st.sampled_from([DIAMOND, HURWITZ]))
def test_rationals_terminate_and_reconstruct(z, c):
    e = expand(z, c, 200)
    assert e.terminated
    assert evaluate_cf(e.digits) == z


@given(complexes)
def test_float_remainders_leave_disk(z):
    e = expand(z, DIAMOND, 25)
    assert all(abs(complex(w)) >= 1 - 1e-9 for w in e.remainders[1:])


@given(complexes, st.integers(0, 12))
def test_tail_reconstruction(z, n):
    e = expand(z, DIAMOND, 30)
    assume(len(e.remainders) > n + 1)
    back = evaluate_cf([complex(a) for a in e.digits[: n + 1]], tail=complex(e.remainders[n + 1]))
    assert abs(back - z) < 1e-6 * max(1, abs(z))


def test_convergent_examples():
    p = convergents([G(2, 1)])
    assert (p[0].p, p[0].q) == (G(2, 1), G(1))
    p = convergents([G(2, 1), G(-1, 2)])
    assert (p[1].p, p[1].q) == (G(-5, 3), G(-1, 2))
    assert set(cross_determinants([G(2, 1), G(-1, 2)])) == {G(-1)}
    assert evaluate_cf([G(3)]) == R(3)
    assert evaluate_cf([G(2, 1), G(2)]) == R(Fraction(3, 2), 1)


def test_evaluate_division_by_zero():
    with pytest.raises(CFDivisionByZero) as e:
        evaluate_cf([G(1), G(0)])
    assert e.value.depth == 1


def test_convergents_match_direct_evaluation():
    for seq in random_digit_sequences(30, 12, seed=5):
        for pr in convergents(seq):
            assert pr.value() == evaluate_cf(seq[: pr.index + 1])


def test_determinant_is_minus_one():
    for seq in random_digit_sequences(50, 30, seed=9):
        assert set(cross_determinants(seq)) == {G(-1)}


def test_identity_residual():
    z = complex(math.pi / 3, math.e / 4)
    e = expand(z, DIAMOND, 20)
    assert check_identity_residual(z, e, 0) < 1e-12
    assert check_identity_residual(z, e, 10) < 1e-9
    assert check_identity_residual(z, e, 10, exact_remainders_=False) < 1e-9


@given(complexes, st.integers(0, 15))
def test_identity_residual_property(z, n):
    e = expand(z, DIAMOND, 17)
    assume(n < len(e.digits))
    assert check_identity_residual(z, e, n) < 1e-9


def test_convergence():
    z = complex(math.sqrt(2), math.sqrt(3))
    rep = convergence_report(z, DIAMOND, 60)
    assert rep.q_nonzero
    n = rep.first_index()
    assert n is not None and n <= 60
    assert rep.errors[n] < 1e-8


def test_json_shape():
    d = expansion_to_json(expand(R(Fraction(7, 3), Fraction(-2, 5)), DIAMOND, 20))
    assert set(d) == {"input", "algorithm", "digits", "remainders", "terminated", "convergents", "residuals"}
    assert d["terminated"] and max(d["residuals"]) == 0


near_diagonal = st.builds(
    lambda x, s, off: RationalComplex(x, s * x + off),
    st.fractions(-80, 80, max_denominator=16), st.sampled_from([1, -1]),
    st.sampled_from([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 3), Fraction(1, 10 ** 9)]))


@given(st.one_of(near_diagonal, rationals))
def test_walk_matches_single_steps(z):
    from cfdyn.cf import _budget, _descend, diamond_descent
    assert diamond_descent(z) == _descend(z, in_phi_diamond, _budget(z))
    zf = complex(z)
    assert diamond_descent(zf) == _descend(zf, in_phi_diamond, _budget(zf))


@pytest.mark.parametrize("z", [1e-10 + 1e-11j, 1e-12 + 1e-12j, 3e-9 + 0j, 5e-324 + 0j])
def test_tiny_inputs_expand_quickly(z):
    # the first remainder is huge; the walk must not take it one step at a time
    e = expand(z, DIAMOND, 25)
    assert len(e.digits) >= 1
    assert all(math.isfinite(abs(complex(w))) for w in e.remainders)
