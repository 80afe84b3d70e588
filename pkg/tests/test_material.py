from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from compomat.errors import EmptySampleSet, ModeMismatch, NotClosed, NotTransitive, ObjectMismatch, Singular
from compomat.fixtures import CYCLE3, SIGNED_CYCLE3, pair_groupoid
from compomat.groupoid import Arrow, FiniteGroupoid, check_axioms
from compomat.material import (
    Composite,
    build_material_groupoid,
    change_reference,
    composite_groupoid,
    default_sample_set,
    is_material_isomorphism,
    make_response,
)
from compomat.rational import IDENTITY, RationalMatrix3, signed_permutation_matrices
from strategies import invertible, signed_perms

BODY = ("X", "Y")


def all_candidates(n):
    return [Arrow(x, y, m) for x in range(n) for y in range(n) for m in signed_permutation_matrices()]


def test_sample_set_contents():
    s = default_sample_set()
    assert len(s) == 54 and len(set(s)) == 54
    assert RationalMatrix3.diag(Fraction(1, 2), 1, 1) in s


def test_det_accepts_exactly_the_rotations():
    W = make_response("det", BODY)
    for x in range(2):
        for y in range(2):
            ok = [m for m in signed_permutation_matrices() if is_material_isomorphism(W, Arrow(x, y, m))]
            assert len(ok) == 24 and all(m.det() == 1 for m in ok)


def test_stretch_is_not_an_isomorphism_of_det():
    W = make_response("det", BODY)
    assert not is_material_isomorphism(W, Arrow(0, 0, RationalMatrix3.diag(2, 1, 1)))


def test_tolerance_admits_near_misses():
    W = make_response("det", ("X",), samples=[IDENTITY])
    P = Arrow(0, 0, RationalMatrix3.diag(Fraction(11, 10), 1, 1))
    assert not is_material_isomorphism(W, P)
    assert is_material_isomorphism(W, P, "1/10")
    assert not is_material_isomorphism(W, P, "1/11")


def test_errors():
    W = make_response("det", BODY, samples=[])
    with pytest.raises(EmptySampleSet):
        is_material_isomorphism(W, Arrow(0, 1, IDENTITY))
    W = make_response("det", BODY)
    with pytest.raises(Singular):
        is_material_isomorphism(W, Arrow(0, 1, RationalMatrix3.diag(0, 1, 1)))
    with pytest.raises(Singular):
        change_reference(W, RationalMatrix3.diag(1, 0, 1))
    with pytest.raises(ValueError):
        make_response("nonsense", BODY)


def test_change_reference_scales_det():
    W = make_response("det", BODY)
    half = change_reference(W, RationalMatrix3.diag(Fraction(1, 2), 1, 1))
    for F in default_sample_set():
        assert half.value(0, F)[0] == W.value(0, F)[0] / 2


@given(invertible, invertible)
def test_change_reference_round_trip(C, F):
    W = make_response("trace_CtC", BODY)
    back = change_reference(change_reference(W, C), C.inverse())
    assert back.value(1, F) == W.value(1, F)
    assert len(back.params["reference_changes"]) == 2


@given(signed_perms)
def test_isomorphisms_conjugate_under_reference_change(P):
    # W(X, F.P) = W(Y, F) for all F implies the same for W(., .C) and C.P.C^-1
    W = make_response("orbit_sorted", BODY, {"group": [CYCLE3]})
    C = RationalMatrix3([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    Wc = change_reference(W, C)
    for x, y in [(0, 0), (0, 1)]:
        a = is_material_isomorphism(W, Arrow(x, y, P))
        b = is_material_isomorphism(Wc, Arrow(x, y, C @ P @ C.inverse()))
        assert a == (P in {CYCLE3.power(k) for k in range(3)})
        if a:
            assert b


def test_orbit_sorted_extraction_reproduces_crystalline(cry):
    for gen, G in ((CYCLE3, cry.horizontal), (SIGNED_CYCLE3, cry.vertical)):
        W = make_response("orbit_sorted", cry.body, {"group": [gen]})
        M = build_material_groupoid(W, all_candidates(3))
        assert M.groupoid.arrow_set == G.arrow_set
        assert M.provenance == "extracted:orbit_sorted"


def test_frames_twist_extraction():
    K = RationalMatrix3([[0, 1, 0], [1, 0, 0], [0, 0, -1]])
    W = make_response("orbit_sorted", BODY, {"group": [CYCLE3], "frames": {"Y": K}})
    M = build_material_groupoid(W, all_candidates(2))
    assert {a.payload for a in M.groupoid.hom(0, 1)} == {K @ CYCLE3.power(k) for k in range(3)}


def test_pointwise_table():
    W = make_response(
        "pointwise_table",
        ("X",),
        {"values": {"X": [[IDENTITY, ["1", "2"]], [CYCLE3, ["1", "2"]]]}},
        samples=[IDENTITY],
    )
    assert W.dim == 2 and W.value(0, CYCLE3) == (1, 2)
    assert is_material_isomorphism(W, Arrow(0, 0, CYCLE3))


def test_loose_tolerance_breaks_closure():
    W = make_response("det", ("X",))
    cands = [Arrow(0, 0, RationalMatrix3.diag(2, 1, 1)), Arrow(0, 0, RationalMatrix3.diag(4, 1, 1))]
    with pytest.raises(NotClosed) as info:
        build_material_groupoid(W, cands, tol=2)
    assert info.value.witness


def test_extracted_det_groupoid_is_a_groupoid():
    W = make_response("det", ("X", "Y", "Z", "T"))
    M = build_material_groupoid(W, all_candidates(4))
    assert len(M.groupoid) == 16 * 24 and check_axioms(M.groupoid).passed


def test_composite_rejections(cry):
    other = FiniteGroupoid(["P", "Q", "R"], [Arrow(x, y, IDENTITY) for x in range(3) for y in range(3)])
    with pytest.raises(ObjectMismatch):
        Composite(cry.horizontal, other)
    with pytest.raises(ModeMismatch):
        Composite(pair_groupoid(3), cry.horizontal)
    loops = FiniteGroupoid(cry.body, [Arrow(x, x, IDENTITY) for x in range(3)])
    with pytest.raises(NotTransitive):
        Composite(loops, cry.vertical)
    assert Composite(loops, cry.vertical, require_transitive=False).horizontal is loops


def test_composite_groupoid(cry):
    cg = composite_groupoid(cry)
    assert len(cg.groupoid) == 9
