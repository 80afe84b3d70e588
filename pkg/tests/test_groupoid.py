import pytest
from hypothesis import given
from hypothesis import strategies as st

from compomat.errors import (
    ClosureExceedsCap,
    ModeMismatch,
    NotComposable,
    NotInGroupoid,
    ObjectMismatch,
    UnknownObject,
)
from compomat.fixtures import CYCLE3, pair_groupoid, random_action_groupoid, random_composite
from compomat.groupoid import (
    Arrow,
    FiniteGroupoid,
    Label,
    Mode,
    OrbitKind,
    check_axioms,
    compose,
    generate_closure,
    hom_set,
    identity,
    intersect,
    inverse,
    is_subgroupoid,
    is_transitive,
    isotropy_is_group,
    orbit_partition,
)
from compomat.rational import IDENTITY, RationalMatrix3
from strategies import signed_perms


def lab(G, x, y):
    (a,) = G.hom(x, y)
    return a


def test_pair_composition():
    G = pair_groupoid(3, names=["1", "2", "3"])
    assert compose(G, lab(G, 1, 2), lab(G, 0, 1)) == lab(G, 0, 2)


def test_identity_is_right_unit(pair3):
    G = pair3.horizontal
    for g in G:
        assert compose(G, g, identity(G, g.src)) == g


def test_crystalline_composition(cry):
    G = cry.horizontal
    a_xy, a_zx = Arrow(0, 1, CYCLE3), Arrow(2, 0, CYCLE3)
    assert compose(G, a_xy, a_zx) == Arrow(2, 1, CYCLE3 @ CYCLE3)


def test_compose_errors(cry):
    G = cry.horizontal
    with pytest.raises(NotComposable):
        compose(G, Arrow(0, 1, IDENTITY), Arrow(0, 2, IDENTITY))
    with pytest.raises(NotInGroupoid):
        compose(G, Arrow(0, 0, RationalMatrix3.diag(2, 1, 1)), Arrow(0, 0, IDENTITY))


def test_inverse_of_pair_arrow():
    G = pair_groupoid(2)
    assert inverse(G, lab(G, 0, 1)) == lab(G, 1, 0)


def test_hom_set_by_name(cry):
    assert len(hom_set(cry.horizontal, "X", "Y")) == 3
    with pytest.raises(UnknownObject):
        hom_set(cry.horizontal, "Q", "X")


def test_arrows_are_totally_ordered(cry):
    arrows = list(cry.vertical.arrows)
    assert arrows == sorted(arrows)
    assert all(a.key < b.key for a, b in zip(arrows, arrows[1:]))


def test_unknown_object_rejected():
    with pytest.raises(UnknownObject):
        FiniteGroupoid(["X"], [Arrow(0, 1, IDENTITY)])


def test_mode_mismatch_rejected():
    with pytest.raises(ModeMismatch):
        FiniteGroupoid(["X"], [Arrow(0, 0, Label("e"))], Mode.MATRIX)


def test_pair_and_crystalline_axioms(pair3, cry, tri):
    for c in (pair3, cry, tri):
        for G in (c.horizontal, c.vertical):
            assert check_axioms(G).passed


def test_isotropy_groups(cry):
    for x in range(3):
        assert isotropy_is_group(cry.horizontal, x)
        assert len(cry.horizontal.isotropy(x)) == 3


def test_orbit_kinds(pair3, tri):
    assert orbit_partition(pair3.horizontal).kind is OrbitKind.TRANSITIVE
    inter = intersect(tri.horizontal, tri.vertical)
    part = orbit_partition(inter)
    assert part.kind is OrbitKind.TOTALLY_INTRANSITIVE
    assert part.classes == ((0,), (1,), (2,))


def test_intermediate_orbits():
    G = FiniteGroupoid(
        ["a", "b", "c"],
        [Arrow(x, y, IDENTITY) for x, y in [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)]],
    )
    part = orbit_partition(G)
    assert part.kind is OrbitKind.INTERMEDIATE and part.classes == ((0, 1), (2,))


def test_intersection_errors(cry):
    other = FiniteGroupoid(["P", "Q", "R"], [Arrow(x, x, IDENTITY) for x in range(3)])
    with pytest.raises(ObjectMismatch):
        intersect(cry.horizontal, other)
    with pytest.raises(ModeMismatch):
        intersect(pair_groupoid(3), cry.horizontal)


def test_intersection_of_crystalline_is_transport_groupoid(cry):
    inter = intersect(cry.horizontal, cry.vertical)
    assert {a.payload for a in inter} == {IDENTITY}
    assert len(inter) == 9 and is_transitive(inter)


def test_closure_cap():
    with pytest.raises(ClosureExceedsCap):
        generate_closure(["X"], [Arrow(0, 0, RationalMatrix3.diag(2, 1, 1))], cap=100)


def test_closure_of_cycle_and_transport():
    G = generate_closure(["X", "Y"], [Arrow(0, 0, CYCLE3), Arrow(0, 1, IDENTITY)])
    assert len(G) == 12 and check_axioms(G).passed


def test_closure_respects_env_cap(monkeypatch):
    monkeypatch.setenv("COMPOMAT_CAP", "5")
    with pytest.raises(ClosureExceedsCap):
        generate_closure(["X", "Y"], [Arrow(0, 0, CYCLE3), Arrow(0, 1, IDENTITY)])


def test_subgroupoid(cry):
    inter = intersect(cry.horizontal, cry.vertical)
    assert is_subgroupoid(inter, cry.horizontal)
    assert not is_subgroupoid(cry.vertical, cry.horizontal)


# mutations



def test_deleted_inverse_is_class_4():
    G = pair_groupoid(3)
    a = lab(G, 0, 1)
    H = G.with_arrows([x for x in G.arrows if x != G.inv(a)])
    assert "4" in check_axioms(H).classes()


def test_corrupted_cell_with_wrong_endpoints_is_class_1():
    G = pair_groupoid(3)
    t = G.table.copy()
    g, h = lab(G, 1, 2), lab(G, 0, 1)
    t.compose[(g, h)] = lab(G, 1, 1)
    H = FiniteGroupoid(G.objects, G.arrows, Mode.TABLE, t)
    assert "1" in check_axioms(H).classes()


def test_non_associative_cell_is_class_2():
    from compomat.fixtures import cyclic_group_table, group_as_groupoid

    G = group_as_groupoid(*cyclic_group_table(4))
    t = G.table.copy()
    r = {a.payload.symbol: a for a in G.arrows}
    t.compose[(r["r1"], r["r1"])] = r["r3"]
    H = FiniteGroupoid(G.objects, G.arrows, Mode.TABLE, t)
    rep = check_axioms(H)
    assert "2" in rep.classes() and not rep.passed


def test_missing_identity_is_class_3():
    G = FiniteGroupoid(["X"], [Arrow(0, 0, CYCLE3), Arrow(0, 0, CYCLE3.inverse())])
    assert "3" in check_axioms(G).classes()


# properties


@given(st.integers(0, 5000))
def test_random_composites_satisfy_axioms(seed):
    c = random_composite(seed, max_arrows=150)
    assert check_axioms(c.horizontal).passed and check_axioms(c.vertical).passed
    assert is_transitive(c.horizontal) and is_transitive(c.vertical)


@given(st.integers(0, 5000))
def test_random_action_groupoids_satisfy_axioms(seed):
    assert check_axioms(random_action_groupoid(seed)).passed


@given(st.integers(0, 5000), st.data())
def test_deletion_detected_exactly_when_closure_breaks(seed, data):
    G = random_action_groupoid(seed)
    removable = [a for a in G.arrows if a != G.unit(a.src)]
    if not removable:
        return
    victim = data.draw(st.sampled_from(removable))
    rest = set(G.arrows) - {victim}
    closed = all(G.inv(a) in rest for a in rest) and all(
        G.product(g, h) in rest for g in rest for h in rest if g.src == h.dst
    )
    H = G.with_arrows(sorted(rest))
    assert check_axioms(H).passed == closed


@given(signed_perms, signed_perms)
def test_closure_of_two_signed_perms_is_a_groupoid(a, b):
    G = generate_closure(["X", "Y"], [Arrow(0, 0, a), Arrow(0, 1, b)])
    assert check_axioms(G).passed and is_transitive(G)
    assert len(G.isotropy(0)) == len(G.isotropy(1))
