"""Named example composites and a seeded random generator."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import InvalidParams, NotAGroup, ResolutionError
from .groupoid import (
    Arrow,
    FiniteGroupoid,
    Label,
    Mode,
    TabularStructure,
    check_axioms,
    generate_closure,
)
from .material import Composite
from .rational import IDENTITY, RationalMatrix3, classify_matrix, signed_permutation_matrices

__all__ = [
    "CYCLE3",
    "SIGNED_CYCLE3",
    "point_names",
    "pair_groupoid",
    "pair_composite",
    "group_as_groupoid",
    "cyclic_group_table",
    "symmetric_group_table",
    "transport_groupoid",
    "CrystallineParams",
    "crystalline_composite",
    "TriclinicParams",
    "triclinic_composite",
    "default_triclinic_params",
    "check_commuting_condition",
    "GROUP_POOL",
    "matrix_group",
    "random_composite",
    "random_action_groupoid",
    "resolve_fixture",
    "FIXTURE_KINDS",
]

CYCLE3 = RationalMatrix3([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
SIGNED_CYCLE3 = RationalMatrix3([[0, 0, -1], [1, 0, 0], [0, -1, 0]])


def point_names(n: int) -> tuple[str, ...]:
    if n <= 4:
        return ("X", "Y", "Z", "T")[:n]
    return tuple(f"X{i}" for i in range(n))


# pair groupoids and groups


def pair_groupoid(n: int, names: Sequence[str] | None = None) -> FiniteGroupoid:
    """One arrow per ordered pair, tabular."""
    if n < 1:
        raise InvalidParams("pair groupoid needs at least one point")
    names = tuple(names) if names else point_names(n)
    arrow = {(x, y): Arrow(x, y, Label(f"({names[x]},{names[y]})")) for x in range(n) for y in range(n)}
    table = TabularStructure()
    for (x, y), a in arrow.items():
        table.inverse[a] = arrow[(y, x)]
        for z in range(n):
            table.compose[(arrow[(y, z)], a)] = arrow[(x, z)]
    for x in range(n):
        table.identity[x] = arrow[(x, x)]
    return FiniteGroupoid(names, arrow.values(), Mode.TABLE, table, name=f"pair:{n}")


def pair_composite(n: int) -> Composite:
    G = pair_groupoid(n)
    return Composite(G, G, name=f"pair:{n}")


def cyclic_group_table(n: int) -> tuple[list[str], list[list[str]]]:
    els = [f"r{k}" for k in range(n)]
    return els, [[els[(i + j) % n] for j in range(n)] for i in range(n)]


def symmetric_group_table() -> tuple[list[str], list[list[str]]]:
    """S3 acting on (0,1,2); product p·q applies q first."""
    from itertools import permutations

    perms = sorted(permutations(range(3)))
    els = ["".join(map(str, p)) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    table = [[els[index[tuple(p[q[k]] for k in range(3))]] for q in perms] for p in perms]
    return els, table


def group_as_groupoid(elements: Sequence[str], table: Sequence[Sequence[str]], obj: str = "*") -> FiniteGroupoid:
    """Single-object groupoid from a Cayley table (``table[i][j] = e_i·e_j``)."""
    els = list(elements)
    n = len(els)
    if n == 0 or len(set(els)) != n:
        raise NotAGroup("elements must be a non-empty list of distinct names")
    if len(table) != n or any(len(row) != n for row in table):
        raise NotAGroup("Cayley table must be square and match the element list")
    pos = {e: i for i, e in enumerate(els)}
    try:
        m = [[pos[v] for v in row] for row in table]
    except KeyError as exc:
        raise NotAGroup(f"table entry {exc.args[0]!r} is not an element") from None
    units = [e for e in range(n) if all(m[e][x] == x and m[x][e] == x for x in range(n))]
    if not units:
        raise NotAGroup("no identity element")
    e = units[0]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if m[m[a][b]][c] != m[a][m[b][c]]:
                    raise NotAGroup(f"not associative at ({els[a]}, {els[b]}, {els[c]})")
    inv = {}
    for a in range(n):
        cands = [b for b in range(n) if m[a][b] == e and m[b][a] == e]
        if not cands:
            raise NotAGroup(f"{els[a]} has no inverse")
        inv[a] = cands[0]
    arrow = [Arrow(0, 0, Label(s)) for s in els]
    ts = TabularStructure()
    ts.identity[0] = arrow[e]
    for a in range(n):
        ts.inverse[arrow[a]] = arrow[inv[a]]
        for b in range(n):
            ts.compose[(arrow[a], arrow[b])] = arrow[m[a][b]]
    return FiniteGroupoid((obj,), arrow, Mode.TABLE, ts, name="group")


# matrix groupoids built from a group and per-point frames


def transport_groupoid(
    names: Sequence[str],
    group: Sequence[RationalMatrix3],
    frames: Sequence[RationalMatrix3] | None = None,
    name: str = "",
) -> FiniteGroupoid:
    """``hom(X, Y) = T(Y)·G·T(X)⁻¹``. With the trivial group this is a
    matrix realization of the pair groupoid."""
    n = len(names)
    frames = list(frames) if frames is not None else [IDENTITY] * n
    group = list(group) or [IDENTITY]
    arrows = []
    for x in range(n):
        tx = frames[x].inverse()
        for y in range(n):
            for g in group:
                arrows.append(Arrow(x, y, frames[y] @ g @ tx))
    return FiniteGroupoid(names, arrows, Mode.MATRIX, name=name)


# crystalline solids


@dataclass(frozen=True)
class CrystallineParams:
    """Two materials with three symmetries per point (``{I, s, s⁻¹}`` for
    ``s`` = ``symmetry1`` resp. ``symmetry2``) sharing the transports
    ``transports[(X, Y)]``."""

    n_points: int = 3
    symmetry1: RationalMatrix3 = CYCLE3
    symmetry2: RationalMatrix3 = SIGNED_CYCLE3
    transports: Mapping[tuple[int, int], RationalMatrix3] | None = None
    names: tuple[str, ...] | None = None


def _three_symmetries(m: RationalMatrix3, label: str) -> None:
    info = classify_matrix(m)
    if not info.orthogonal:
        raise InvalidParams(f"{label} must be orthogonal")
    if info.finite_order != 3:
        raise InvalidParams(f"{label} must have order exactly 3 (three symmetries per point), got {info.finite_order}")


def crystalline_composite(p: CrystallineParams = CrystallineParams()) -> Composite:
    n = p.n_points
    if n < 2:
        raise InvalidParams("crystalline fixture needs at least two points")
    _three_symmetries(p.symmetry1, "symmetry1")
    _three_symmetries(p.symmetry2, "symmetry2")
    if p.symmetry2 in (p.symmetry1, p.symmetry1.inverse()):
        raise InvalidParams("symmetry2 must differ from symmetry1 and its inverse")
    names = p.names or point_names(n)
    t = {(x, y): IDENTITY for x in range(n) for y in range(n)}
    if p.transports:
        t.update({k: (v if isinstance(v, RationalMatrix3) else RationalMatrix3(v)) for k, v in p.transports.items()})
    for x in range(n):
        if t[(x, x)] != IDENTITY:
            raise InvalidParams(f"transport at ({x},{x}) must be the identity")
        for y in range(n):
            if not classify_matrix(t[(x, y)]).invertible:
                raise InvalidParams(f"transport ({x},{y}) is singular")
            for z in range(n):
                if t[(x, z)] != t[(y, z)] @ t[(x, y)]:
                    raise InvalidParams(f"transports violate the cocycle rule at ({x},{y},{z})")
    groupoids = []
    for label, s in (("omega1", p.symmetry1), ("omega2", p.symmetry2)):
        sym = (IDENTITY, s, s.inverse())
        for (x, y), tr in t.items():
            conj = {tr.inverse() @ k @ tr for k in sym}
            if conj != set(sym):
                raise InvalidParams(f"transport ({x},{y}) does not normalize the symmetries of {label}")
        arrows = [Arrow(x, y, tr @ k) for (x, y), tr in t.items() for k in sym]
        G = FiniteGroupoid(names, arrows, Mode.MATRIX, name=label)
        if not check_axioms(G).passed:
            raise InvalidParams(f"{label} is not closed")
        groupoids.append(G)
    return Composite(groupoids[0], groupoids[1], name="crystalline")


# triclinic crystals


@dataclass(frozen=True)
class TriclinicParams:
    """Two implants: one invertible matrix per point each."""

    implant1: tuple[RationalMatrix3, ...]
    implant2: tuple[RationalMatrix3, ...]
    names: tuple[str, ...] | None = None

    @property
    def n_points(self) -> int:
        return len(self.implant1)


def default_triclinic_params() -> TriclinicParams:
    """Three points, identity implant against powers of the 3-cycle."""
    return TriclinicParams((IDENTITY,) * 3, (IDENTITY, CYCLE3, CYCLE3 @ CYCLE3))


def _implant_groupoid(names, P, name) -> FiniteGroupoid:
    n = len(P)
    return FiniteGroupoid(names, [Arrow(x, y, P[y].inverse() @ P[x]) for x in range(n) for y in range(n)], name=name)


def triclinic_composite(p: TriclinicParams) -> Composite:
    if len(p.implant1) != len(p.implant2) or not p.implant1:
        raise InvalidParams("implants must cover the same non-empty body")
    for P in (*p.implant1, *p.implant2):
        if P.det() == 0:
            raise InvalidParams("implants must be invertible")
    names = p.names or point_names(p.n_points)
    return Composite(
        _implant_groupoid(names, p.implant1, "omega1"),
        _implant_groupoid(names, p.implant2, "omega2"),
        name="triclinic",
    )


def check_commuting_condition(p: TriclinicParams, distinct_only: bool = False) -> tuple[bool, tuple[int, int, int] | None]:
    """``b(Y,Z)·a(X,Y) = a(Y,Z)·b(X,Y)`` with ``a``, ``b`` the arrows
    induced by the first and second implant, over all
    triples, first failing triple returned."""
    first, second = p.implant1, p.implant2
    n = len(first)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if distinct_only and len({x, y, z}) < 3:
                    continue
                lhs = second[z].inverse() @ second[y] @ first[y].inverse() @ first[x]
                rhs = first[z].inverse() @ first[y] @ second[y].inverse() @ second[x]
                if lhs != rhs:
                    return False, (x, y, z)
    return True, None


# random composites


def _m(rows) -> RationalMatrix3:
    return RationalMatrix3(rows)


_ROT_Z2 = RationalMatrix3.diag(-1, -1, 1)
_ROT_X2 = RationalMatrix3.diag(1, -1, -1)
_ROT_Z4 = _m([[0, -1, 0], [1, 0, 0], [0, 0, 1]])
_SWAP_XY = _m([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
_MINUS_I = RationalMatrix3.diag(-1, -1, -1)

GROUP_POOL: dict[str, tuple[RationalMatrix3, ...]] = {
    "trivial": (),
    "C2_rot": (_ROT_Z2,),
    "C2_mirror": (RationalMatrix3.diag(-1, 1, 1),),
    "Ci": (_MINUS_I,),
    "C3": (CYCLE3,),
    "C3_signed": (SIGNED_CYCLE3,),
    "C4": (_ROT_Z4,),
    "D2": (_ROT_Z2, _ROT_X2),
    "C2h": (_ROT_Z2, _MINUS_I),
    "S3": (CYCLE3, _SWAP_XY),
    "D4": (_ROT_Z4, _ROT_X2),
    "A4": (CYCLE3, _ROT_Z2),
}


@lru_cache(maxsize=None)
def matrix_group(name: str) -> tuple[RationalMatrix3, ...]:
    gens = GROUP_POOL[name]
    G = generate_closure(["*"], [Arrow(0, 0, g) for g in gens], cap=48)
    return tuple(a.payload for a in G.arrows)


def random_composite(
    seed: int,
    n_points: int | None = None,
    group_pool: Sequence[str] | None = None,
    max_arrows: int = 400,
) -> Composite:
    """Two transitive matrix groupoids ``T_i(Y)·G_i·T_i(X)⁻¹``.

    The seed picks the groups from the pool, and whether the second
    material reuses the first one's group and/or transports, so that
    uniform, directional and non-uniform composites all occur.
    """
    rng = random.Random(seed)
    pool = sorted(group_pool) if group_pool else sorted(GROUP_POOL)
    n = n_points if n_points is not None else rng.randint(1, 8)
    if n < 1:
        raise InvalidParams("need at least one point")
    fits = [g for g in pool if n * n * len(matrix_group(g)) <= max_arrows]
    if not fits:
        raise InvalidParams(f"no group in the pool fits {max_arrows} arrows on {n} points")
    perms = signed_permutation_matrices()
    names = point_names(n)
    group_name = rng.choice(fits)
    mode = rng.choice(["same", "sub", "any", "any"])
    group1 = matrix_group(group_name)
    if mode == "same":
        group2 = group1
    elif mode == "sub":
        subs = [g for g in fits if set(matrix_group(g)) <= set(group1)]
        group2 = matrix_group(rng.choice(subs))
        if rng.random() < 0.5:
            group1, group2 = group2, group1
    else:
        group2 = matrix_group(rng.choice(fits))
    frames1 = [IDENTITY] + [rng.choice(perms) for _ in range(n - 1)]
    share = rng.choice(["shared", "shared", "twisted", "independent"])
    if share == "shared":
        frames2 = list(frames1)
    elif share == "twisted":
        # differ from frames1 by elements of group1 on the right: hom-sets still overlap
        frames2 = [f @ rng.choice(group1) for f in frames1]
        frames2[0] = IDENTITY
    else:
        frames2 = [IDENTITY] + [rng.choice(perms) for _ in range(n - 1)]
    return Composite(
        transport_groupoid(names, group1, frames1, name="omega1"),
        transport_groupoid(names, group2, frames2, name="omega2"),
        name=f"random:{seed}",
    )


def random_action_groupoid(seed: int, max_points: int = 5) -> FiniteGroupoid:
    """Tabular action groupoid of a small group acting on a finite set
    (``(g, x): x → g·x``); exercises the table code path."""
    from itertools import permutations

    rng = random.Random(seed)
    k = rng.randint(1, max_points)
    perms = list(permutations(range(k)))
    gens = rng.sample(perms, min(len(perms), rng.randint(0, 2)))
    ident = tuple(range(k))
    group = {ident}
    frontier = [ident]
    while frontier:
        p = frontier.pop()
        for q in gens:
            r = tuple(q[p[i]] for i in range(k))
            if r not in group:
                group.add(r)
                frontier.append(r)
    group_l = sorted(group)
    names = tuple(f"s{i}" for i in range(k))
    gname = {p: "".join(map(str, p)) for p in group_l}
    arrow = {(p, x): Arrow(x, p[x], Label(f"{gname[p]}@{x}")) for p in group_l for x in range(k)}
    ts = TabularStructure()
    for x in range(k):
        ts.identity[x] = arrow[(ident, x)]
    for p in group_l:
        pinv = tuple(sorted(range(k), key=lambda i: p[i]))
        for x in range(k):
            ts.inverse[arrow[(p, x)]] = arrow[(pinv, p[x])]
            for q in group_l:
                ts.compose[(arrow[(q, p[x])], arrow[(p, x)])] = arrow[(tuple(q[p[i]] for i in range(k)), x)]
    return FiniteGroupoid(names, arrow.values(), Mode.TABLE, ts, name=f"action:{seed}")


# named fixtures

FIXTURE_KINDS = ("pair", "crystalline", "triclinic", "random")


def resolve_fixture(name: str) -> Composite:
    """``pair:n``, ``crystalline:default``, ``triclinic:search`` (or
    ``triclinic:default``), ``random:seed``."""
    kind, _, arg = name.partition(":")
    try:
        if kind == "pair":
            return pair_composite(int(arg or 3))
        if kind == "crystalline" and arg in ("", "default"):
            return crystalline_composite()
        if kind == "triclinic" and arg in ("", "search", "default"):
            return triclinic_composite(default_triclinic_params())
        if kind == "random":
            return random_composite(int(arg or 0))
    except ValueError:
        raise ResolutionError(f"bad fixture argument in {name!r}") from None
    raise ResolutionError(f"unknown fixture {name!r}; expected one of pair:n, crystalline:default, triclinic:search, random:seed")
