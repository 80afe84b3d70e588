import pytest
from hypothesis import given
from hypothesis import strategies as st

from compomat.errors import InvalidParams, NotAGroup, ResolutionError
from compomat.fixtures import (
    CYCLE3,
    SIGNED_CYCLE3,
    CrystallineParams,
    TriclinicParams,
    check_commuting_condition,
    crystalline_composite,
    cyclic_group_table,
    default_triclinic_params,
    group_as_groupoid,
    matrix_group,
    pair_groupoid,
    point_names,
    random_composite,
    resolve_fixture,
    symmetric_group_table,
    transport_groupoid,
)
from compomat.groupoid import check_axioms, is_transitive
from compomat.rational import IDENTITY, RationalMatrix3, classify_matrix
from strategies import pool_names, signed_perms


def test_point_names():
    assert point_names(3) == ("X", "Y", "Z")
    assert point_names(6)[5] == "X5"


def test_pair_groupoid_sizes():
    assert len(pair_groupoid(1)) == 1
    G = pair_groupoid(3)
    assert len(G) == 9 and is_transitive(G) and check_axioms(G).passed
    with pytest.raises(InvalidParams):
        pair_groupoid(0)


def test_groups_as_groupoids():
    C3 = group_as_groupoid(*cyclic_group_table(3))
    assert len(C3) == 3 and check_axioms(C3).passed
    assert len(group_as_groupoid(["e"], [["e"]])) == 1
    S3 = group_as_groupoid(*symmetric_group_table())
    assert len(S3) == 6 and check_axioms(S3).passed


@pytest.mark.parametrize(
    "elements,table",
    [
        ([], []),
        (["e", "e"], [["e", "e"], ["e", "e"]]),
        (["e", "a"], [["e", "a"]]),
        (["e", "a"], [["e", "a"], ["a", "q"]]),
        (["a", "b"], [["a", "a"], ["b", "b"]]),
        (["e", "a"], [["e", "a"], ["a", "a"]]),
        (["e", "a", "b"], [["e", "a", "b"], ["a", "b", "a"], ["b", "e", "b"]]),
    ],
)
def test_not_a_group(elements, table):
    with pytest.raises(NotAGroup):
        group_as_groupoid(elements, table)


def test_crystalline_fixture(cry):
    for G in (cry.horizontal, cry.vertical):
        assert check_axioms(G).passed and is_transitive(G)
        assert all(len(G.hom(x, y)) == 3 for x in range(3) for y in range(3))
    assert {a.payload for a in cry.vertical.isotropy(1)} == {IDENTITY, SIGNED_CYCLE3, SIGNED_CYCLE3.inverse()}


@pytest.mark.parametrize(
    "params",
    [
        CrystallineParams(symmetry2=CYCLE3),
        CrystallineParams(symmetry2=CYCLE3.inverse()),
        CrystallineParams(symmetry1=RationalMatrix3.diag(-1, -1, 1)),
        CrystallineParams(symmetry1=RationalMatrix3([[0, 0, 2], [1, 0, 0], [0, 1, 0]])),
        CrystallineParams(n_points=1),
        CrystallineParams(transports={(0, 0): SIGNED_CYCLE3}),
        CrystallineParams(transports={(0, 1): CYCLE3}),
    ],
)
def test_crystalline_rejections(params):
    with pytest.raises(InvalidParams):
        crystalline_composite(params)


def test_crystalline_with_compatible_transports():
    # transports by powers of the first symmetry satisfy the cocycle rule
    # but do not normalize the second material's symmetries
    t = {(x, y): CYCLE3.power((y - x) % 3) for x in range(3) for y in range(3)}
    with pytest.raises(InvalidParams, match="normalize"):
        crystalline_composite(CrystallineParams(transports=t))
    minus = RationalMatrix3.diag(-1, -1, -1)
    t = {(x, y): minus.power((y - x) % 2) for x in range(2) for y in range(2)}
    c = crystalline_composite(CrystallineParams(n_points=2, transports=t))
    assert check_axioms(c.horizontal).passed


def test_commuting_condition_degenerate_cases():
    same = TriclinicParams((IDENTITY, CYCLE3, SIGNED_CYCLE3), (IDENTITY, CYCLE3, SIGNED_CYCLE3))
    assert check_commuting_condition(same) == (True, None)
    ok, triple = check_commuting_condition(default_triclinic_params())
    assert not ok and triple[0] == triple[1] and triple == (0, 0, 1)
    assert check_commuting_condition(default_triclinic_params(), distinct_only=True) == (True, None)


def test_commuting_condition_on_two_points_is_vacuous_for_distinct_triples():
    p = TriclinicParams((IDENTITY, IDENTITY), (IDENTITY, SIGNED_CYCLE3))
    assert check_commuting_condition(p, distinct_only=True) == (True, None)
    assert not check_commuting_condition(p)[0]


def test_triclinic_composite_hom_sets_are_singletons(tri):
    for G in (tri.horizontal, tri.vertical):
        assert all(len(G.hom(x, y)) == 1 for x in range(3) for y in range(3))
    with pytest.raises(InvalidParams):
        from compomat.fixtures import triclinic_composite

        triclinic_composite(TriclinicParams((IDENTITY,), (IDENTITY, IDENTITY)))


@given(signed_perms, signed_perms, signed_perms)
def test_identical_implants_always_commute(a, b, d):
    p = TriclinicParams((a, b, d), (a, b, d))
    assert check_commuting_condition(p)[0]


@given(pool_names)
def test_pool_groups_are_finite_orthogonal_groups(name):
    G = matrix_group(name)
    assert IDENTITY in G
    assert all(classify_matrix(m).orthogonal for m in G)
    assert all(a @ b in G for a in G for b in G)


@given(st.integers(0, 10**6))
def test_random_composites_are_deterministic(seed):
    a, b = random_composite(seed), random_composite(seed)
    assert a.horizontal.arrows == b.horizontal.arrows and a.vertical.arrows == b.vertical.arrows
    assert len(a.horizontal) <= 400 and len(a.body) <= 8


def test_random_composite_limits():
    with pytest.raises(InvalidParams):
        random_composite(1, n_points=0)
    with pytest.raises(InvalidParams):
        random_composite(1, n_points=8, max_arrows=10)


def test_transport_groupoid_with_trivial_group_is_a_pair_groupoid():
    G = transport_groupoid(("X", "Y", "Z"), [], [IDENTITY, CYCLE3, SIGNED_CYCLE3])
    assert len(G) == 9 and check_axioms(G).passed


def test_resolve_fixture():
    assert resolve_fixture("pair:4").body == ("X", "Y", "Z", "T")
    assert resolve_fixture("crystalline:default").name == "crystalline"
    assert resolve_fixture("triclinic:search").name == "triclinic"
    assert resolve_fixture("random:7").name == "random:7"
    for bad in ("pair:x", "crystalline:other", "nothing:1"):
        with pytest.raises(ResolutionError):
            resolve_fixture(bad)
