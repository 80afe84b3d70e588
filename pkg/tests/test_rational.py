from fractions import Fraction

import pytest
from hypothesis import given

import oracles
from compomat.errors import Singular
from compomat.rational import (
    IDENTITY,
    RationalMatrix3,
    classify_matrix,
    format_rational,
    mat_compose,
    mat_inverse,
    parse_rational,
    signed_permutation_matrices,
)
from strategies import invertible, matrices, rationals

CYCLE = RationalMatrix3([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
SIGNED_CYCLE = RationalMatrix3([[0, 0, -1], [1, 0, 0], [0, -1, 0]])


def as_oracle(m):
    return oracles.mat(m.rows())


@pytest.mark.parametrize("text,value", [("3", 3), ("-3/6", Fraction(-1, 2)), (" 4 / 8 ", Fraction(1, 2)), ("+7/1", 7)])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["1/0", "", "1.5", "a/b", "1//2"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_rational_drops_unit_denominator():
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-2, 4)) == "-1/2"


def test_identity_left_unit():
    m = RationalMatrix3([[1, 2, 3], [0, 1, 4], [5, 6, 0]])
    assert mat_compose(IDENTITY, m) == m


def test_cycle_cubes_to_identity():
    assert CYCLE @ CYCLE @ CYCLE == IDENTITY


def test_stretch_inverse_pair():
    assert RationalMatrix3.diag("1/2", 1, 1) @ RationalMatrix3.diag(2, 1, 1) == IDENTITY


def test_inverse_examples():
    assert mat_inverse(IDENTITY) == IDENTITY
    assert mat_inverse(CYCLE) == CYCLE.transpose() == CYCLE @ CYCLE
    assert mat_inverse(RationalMatrix3.diag(2, 1, 1)) == RationalMatrix3.diag("1/2", 1, 1)


def test_singular_inverse_raises():
    with pytest.raises(Singular):
        RationalMatrix3([[1, 2, 3], [2, 4, 6], [0, 0, 1]]).inverse()


def test_classify_cycle_and_signed_cycle():
    for m in (CYCLE, SIGNED_CYCLE):
        info = classify_matrix(m)
        assert info.orthogonal and info.invertible
        assert info.determinant == 1 and info.finite_order == 3


def test_classify_stretch():
    info = classify_matrix(RationalMatrix3.diag(2, 1, 1))
    assert info.invertible and not info.orthogonal and info.finite_order is None


def test_signed_permutations_count_and_determinants():
    mats = signed_permutation_matrices()
    assert len(mats) == len(set(mats)) == 48
    assert sorted(m.det() for m in mats) == [-1] * 24 + [1] * 24


def test_entries_in_lowest_terms():
    m = RationalMatrix3([["2/4", "-6/3", 0], [0, "9/12", 1], [1, 0, "4/2"]])
    assert m.to_strings() == [["1/2", "-2", "0"], ["0", "3/4", "1"], ["1", "0", "2"]]


def test_float_view():
    assert RationalMatrix3.diag("1/3", 1, 1).allclose(RationalMatrix3.diag("1/3", 1, 1))


@given(matrices, matrices)
def test_product_matches_oracle(a, b):
    assert as_oracle(a @ b) == oracles.mul(as_oracle(a), as_oracle(b))


@given(matrices)
def test_determinant_matches_oracle(a):
    assert a.det() == oracles.det(as_oracle(a))


@given(invertible)
def test_inverse_matches_gauss_jordan(a):
    assert as_oracle(a.inverse()) == oracles.inv(as_oracle(a))
    assert a @ a.inverse() == IDENTITY == a.inverse() @ a


@given(matrices, matrices, matrices)
def test_product_associative(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@given(matrices)
def test_renormalization_idempotent(a):
    assert RationalMatrix3(a.to_strings()) == a
    assert RationalMatrix3(a.rows()).to_strings() == a.to_strings()


@given(invertible)
def test_orthogonal_closed_under_inverse(a):
    info = classify_matrix(a)
    if info.orthogonal:
        assert classify_matrix(a.inverse()).orthogonal
        assert abs(info.determinant) == 1


@given(rationals)
def test_rational_roundtrip(q):
    assert parse_rational(format_rational(q)) == q
