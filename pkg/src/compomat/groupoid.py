"""Finite groupoids: arrows, structure maps, axiom checking, orbits, closure.

Composition follows the convention ``g·h = "h first, then g"``, so
``src(g·h) = src(h)`` and ``dst(g·h) = dst(g)``.

Two realizations share one class:

* ``Mode.MATRIX`` -- arrows carry exact 3x3 matrices, composition is the
  matrix product, identities are ``I`` and inverses are matrix inverses.
  Any two matrix groupoids over the same body live in one ambient groupoid.
* ``Mode.TABLE`` -- arrows carry labels and a :class:`TabularStructure`
  supplies composition, identities and inverses. Subgroupoids share the
  parent's table, which plays the role of the ambient groupoid.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from . import config
from .errors import (
    ClosureExceedsCap,
    ModeMismatch,
    NotComposable,
    NotInGroupoid,
    ObjectMismatch,
    UnknownObject,
)
from .rational import IDENTITY, RationalMatrix3

__all__ = [
    "Label",
    "Arrow",
    "Mode",
    "TabularStructure",
    "FiniteGroupoid",
    "Violation",
    "AxiomReport",
    "OrbitKind",
    "OrbitPartition",
    "compose",
    "inverse",
    "identity",
    "check_axioms",
    "hom_set",
    "isotropy_is_group",
    "orbit_partition",
    "intersect",
    "generate_closure",
    "is_subgroupoid",
]


@dataclass(frozen=True, slots=True)
class Label:
    symbol: str

    @property
    def sort_key(self) -> str:
        return self.symbol

    def __str__(self) -> str:
        return self.symbol


Payload = Union[Label, RationalMatrix3]


@dataclass(frozen=True, slots=True)
class Arrow:
    src: int
    dst: int
    payload: Payload

    @property
    def key(self) -> tuple:
        kind = 0 if isinstance(self.payload, Label) else 1
        return (self.src, self.dst, kind, self.payload.sort_key)

    def __lt__(self, other: "Arrow") -> bool:
        return self.key < other.key

    @property
    def is_loop(self) -> bool:
        return self.src == self.dst

    def __str__(self) -> str:
        return f"{self.src}->{self.dst}:{self.payload}"


class Mode(str, enum.Enum):
    TABLE = "table"
    MATRIX = "matrix"


@dataclass(eq=False)
class TabularStructure:
    """Explicit structure maps over a label alphabet.

    ``compose[(g, h)]`` is ``g·h``. The table may cover more arrows than a
    particular groupoid that references it.
    """

    compose: dict[tuple[Arrow, Arrow], Arrow] = field(default_factory=dict)
    inverse: dict[Arrow, Arrow] = field(default_factory=dict)
    identity: dict[int, Arrow] = field(default_factory=dict)

    def copy(self) -> "TabularStructure":
        return TabularStructure(dict(self.compose), dict(self.inverse), dict(self.identity))


class FiniteGroupoid:
    """Immutable finite groupoid over ``objects`` (names, ids are positions)."""

    def __init__(
        self,
        objects: Sequence[str],
        arrows: Iterable[Arrow],
        mode: Mode = Mode.MATRIX,
        table: TabularStructure | None = None,
        name: str = "",
    ):
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("object names must be unique")
        self.mode = Mode(mode)
        if self.mode is Mode.TABLE and table is None:
            raise ValueError("a tabular groupoid needs a TabularStructure")
        self.table = table if self.mode is Mode.TABLE else None
        self.name = name
        n = len(self.objects)
        uniq = set(arrows)
        for a in uniq:
            if not (0 <= a.src < n and 0 <= a.dst < n):
                raise UnknownObject(f"arrow {a} references an object outside 0..{n - 1}")
            if self.mode is Mode.MATRIX:
                if not isinstance(a.payload, RationalMatrix3):
                    raise ModeMismatch(f"matrix groupoid got label arrow {a}")
                if a.payload.det() == 0:
                    raise ValueError(f"arrow {a} has a singular payload")
            elif not isinstance(a.payload, Label):
                raise ModeMismatch(f"tabular groupoid got matrix arrow {a}")
        self.arrows: tuple[Arrow, ...] = tuple(sorted(uniq, key=Arrow.key.fget))
        self.arrow_set = frozenset(self.arrows)
        hom: dict[tuple[int, int], list[Arrow]] = defaultdict(list)
        out: dict[int, list[Arrow]] = defaultdict(list)
        into: dict[int, list[Arrow]] = defaultdict(list)
        for a in self.arrows:
            hom[(a.src, a.dst)].append(a)
            out[a.src].append(a)
            into[a.dst].append(a)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._out = {k: tuple(v) for k, v in out.items()}
        self._into = {k: tuple(v) for k, v in into.items()}

    # lookups

    def __len__(self) -> int:
        return len(self.arrows)

    def __iter__(self):
        return iter(self.arrows)

    def __contains__(self, g: object) -> bool:
        return g in self.arrow_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.mode == other.mode
            and self.arrow_set == other.arrow_set
        )

    def __hash__(self) -> int:
        return hash((self.objects, self.mode, self.arrow_set))

    def __repr__(self) -> str:
        return (
            f"FiniteGroupoid({self.name or 'unnamed'}, mode={self.mode.value}, "
            f"objects={len(self.objects)}, arrows={len(self.arrows)})"
        )

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def object_id(self, obj: int | str) -> int:
        if isinstance(obj, str):
            try:
                return self.objects.index(obj)
            except ValueError:
                raise UnknownObject(f"unknown object {obj!r}") from None
        if not 0 <= obj < len(self.objects):
            raise UnknownObject(f"unknown object id {obj}")
        return obj

    def hom(self, x: int, y: int) -> tuple[Arrow, ...]:
        return self._hom.get((x, y), ())

    def alpha_fibre(self, x: int) -> tuple[Arrow, ...]:
        """Arrows with source ``x``."""
        return self._out.get(x, ())

    def beta_fibre(self, x: int) -> tuple[Arrow, ...]:
        """Arrows with target ``x``."""
        return self._into.get(x, ())

    def isotropy(self, x: int) -> tuple[Arrow, ...]:
        return self.hom(x, x)

    # ambient structure maps (no membership checks)

    def unit(self, x: int) -> Arrow:
        if self.mode is Mode.MATRIX:
            return Arrow(x, x, IDENTITY)
        try:
            return self.table.identity[x]
        except KeyError:
            raise UnknownObject(f"no identity for object {x}") from None

    def product(self, g: Arrow, h: Arrow) -> Arrow:
        """Ambient ``g·h``."""
        if g.src != h.dst:
            raise NotComposable(f"source of {g} differs from target of {h}")
        if self.mode is Mode.MATRIX:
            return Arrow(h.src, g.dst, g.payload @ h.payload)
        try:
            return self.table.compose[(g, h)]
        except KeyError:
            raise NotComposable(f"no table entry for {g}·{h}") from None

    def inv(self, g: Arrow) -> Arrow:
        if self.mode is Mode.MATRIX:
            return Arrow(g.dst, g.src, g.payload.inverse())
        try:
            return self.table.inverse[g]
        except KeyError:
            raise NotInGroupoid(f"no inverse recorded for {g}") from None

    def same_ambient(self, other: "FiniteGroupoid") -> bool:
        if self.mode != other.mode:
            return False
        if self.mode is Mode.MATRIX:
            return True
        return self.table is other.table

    def with_arrows(self, arrows: Iterable[Arrow], name: str = "") -> "FiniteGroupoid":
        return FiniteGroupoid(self.objects, arrows, self.mode, self.table, name=name)


def _check_member(G: FiniteGroupoid, *arrows: Arrow) -> None:
    for a in arrows:
        if a not in G:
            raise NotInGroupoid(f"{a} is not an arrow of {G!r}")


def compose(G: FiniteGroupoid, g: Arrow, h: Arrow) -> Arrow:
    """``g·h`` inside ``G``: apply ``h`` then ``g``."""
    _check_member(G, g, h)
    return G.product(g, h)


def inverse(G: FiniteGroupoid, g: Arrow) -> Arrow:
    _check_member(G, g)
    return G.inv(g)


def identity(G: FiniteGroupoid, x: int | str) -> Arrow:
    return G.unit(G.object_id(x))


def hom_set(G: FiniteGroupoid, x: int | str, y: int | str) -> tuple[Arrow, ...]:
    return G.hom(G.object_id(x), G.object_id(y))


# axioms

AXIOM_IDS = ("closure", "1", "2", "3", "4")


@dataclass(frozen=True)
class Violation:
    axiom: str
    arrows: tuple[Arrow | None, ...]
    explanation: str


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    violations: tuple[Violation, ...]

    def classes(self) -> set[str]:
        return {v.axiom for v in self.violations}


def _declared_identity(G: FiniteGroupoid, x: int) -> Arrow | None:
    if G.mode is Mode.MATRIX:
        return Arrow(x, x, IDENTITY)
    return G.table.identity.get(x)


def _declared_inverse(G: FiniteGroupoid, g: Arrow) -> Arrow | None:
    if G.mode is Mode.MATRIX:
        return Arrow(g.dst, g.src, g.payload.inverse())
    return G.table.inverse.get(g)


def _raw_product(G: FiniteGroupoid, g: Arrow, h: Arrow) -> Arrow | None:
    if G.mode is Mode.MATRIX:
        return Arrow(h.src, g.dst, g.payload @ h.payload)
    return G.table.compose.get((g, h))


def check_axioms(G: FiniteGroupoid) -> AxiomReport:
    """Exhaustively verify closure and the four groupoid axioms.

    Violation classes: ``closure`` (a product or inverse leaves the arrow
    set or is undefined), ``1`` (source/target law of products), ``2``
    (associativity over all composable triples), ``3`` (identities and unit
    laws), ``4`` (inverses and inverse laws).
    """
    out: list[Violation] = []
    arrows = G.arrows
    m = len(arrows)
    n = G.n_objects
    idx = {a: i for i, a in enumerate(arrows)}
    src = np.array([a.src for a in arrows], dtype=np.int64)
    dst = np.array([a.dst for a in arrows], dtype=np.int64)

    ident = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        e = _declared_identity(G, x)
        if e is None or e not in idx:
            out.append(Violation("3", (e,), f"identity at object {x} is missing"))
        elif e.src != x or e.dst != x:
            out.append(Violation("3", (e,), f"identity at object {x} is not a loop at {x}"))
        else:
            ident[x] = idx[e]

    # arrows into each object, and each arrow's position in that list
    into: list[list[int]] = [[] for _ in range(n)]
    pos = np.zeros(m, dtype=np.int64)
    for i, a in enumerate(arrows):
        pos[i] = len(into[a.dst])
        into[a.dst].append(i)
    width = max((len(v) for v in into), default=0)
    # comp[i, pos[j]] = index of arrows[i]·arrows[j]; -1 undefined/outside
    comp = np.full((m, max(width, 1)), -1, dtype=np.int64)
    for i, g in enumerate(arrows):
        for j in into[g.src]:
            h = arrows[j]
            r = _raw_product(G, g, h)
            if r is None:
                out.append(Violation("closure", (g, h), "product is undefined"))
                continue
            k = idx.get(r)
            if k is None:
                out.append(Violation("closure", (g, h, r), "product lies outside the arrow set"))
                continue
            if r.src != h.src or r.dst != g.dst:
                out.append(Violation("1", (g, h, r), "product has the wrong source or target"))
            comp[i, pos[j]] = k

    # associativity over Γ(3), grouped by the middle object
    pair_h: list[np.ndarray] = []
    pair_k: list[np.ndarray] = []
    for y in range(n):
        hs, ks = [], []
        for j in into[y]:
            for k in into[arrows[j].src]:
                hs.append(j)
                ks.append(k)
        pair_h.append(np.array(hs, dtype=np.int64))
        pair_k.append(np.array(ks, dtype=np.int64))
    for i, g in enumerate(arrows):
        H, K = pair_h[g.src], pair_k[g.src]
        if H.size == 0:
            continue
        gh = comp[i, pos[H]]
        hk = comp[H, pos[K]]
        ok = (gh >= 0) & (hk >= 0)
        # products with the wrong endpoints are already reported as class 1
        ok &= src[np.where(gh >= 0, gh, 0)] == src[H]
        ok &= dst[np.where(hk >= 0, hk, 0)] == g.src
        if not ok.any():
            continue
        gh, hk, Hs, Ks = gh[ok], hk[ok], H[ok], K[ok]
        left = comp[gh, pos[Ks]]
        right = comp[i, pos[hk]]
        bad = np.nonzero(left != right)[0]
        for b in bad:
            out.append(
                Violation(
                    "2",
                    (g, arrows[Hs[b]], arrows[Ks[b]]),
                    "(g·h)·k differs from g·(h·k)",
                )
            )

    for i, g in enumerate(arrows):
        es, et = ident[g.src], ident[g.dst]
        if es >= 0 and comp[i, pos[es]] != i:
            out.append(Violation("3", (g, arrows[es]), "g·ε(src g) differs from g"))
        if et >= 0 and comp[et, pos[i]] != i:
            out.append(Violation("3", (arrows[et], g), "ε(dst g)·g differs from g"))
        ginv = _declared_inverse(G, g)
        if ginv is None or ginv not in idx:
            out.append(Violation("4", (g, ginv), "inverse is missing"))
            continue
        j = idx[ginv]
        if ginv.src != g.dst or ginv.dst != g.src:
            out.append(Violation("4", (g, ginv), "inverse has the wrong endpoints"))
            continue
        if es >= 0 and comp[j, pos[i]] != es:
            out.append(Violation("4", (ginv, g), "inverse·arrow is not the identity at its source"))
        if et >= 0 and comp[i, pos[j]] != et:
            out.append(Violation("4", (g, ginv), "arrow·inverse is not the identity at its target"))

    return AxiomReport(not out, tuple(out))


def isotropy_is_group(G: FiniteGroupoid, x: int | str) -> bool:
    """Check the group axioms for the loops at ``x`` directly."""
    x = G.object_id(x)
    loops = G.isotropy(x)
    members = set(loops)
    try:
        e = G.unit(x)
    except UnknownObject:
        return False
    if e not in members:
        return False
    for a in loops:
        if G.product(a, e) != a or G.product(e, a) != a:
            return False
        ai = G.inv(a)
        if ai not in members or G.product(ai, a) != e:
            return False
        for b in loops:
            ab = G.product(a, b)
            if ab not in members:
                return False
            for c in loops:
                if G.product(ab, c) != G.product(a, G.product(b, c)):
                    return False
    return True


# orbits


class OrbitKind(str, enum.Enum):
    TRANSITIVE = "transitive"
    TOTALLY_INTRANSITIVE = "totally_intransitive"
    INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class OrbitPartition:
    classes: tuple[tuple[int, ...], ...]
    kind: OrbitKind


def orbit_partition(G: FiniteGroupoid) -> OrbitPartition:
    parent = list(range(G.n_objects))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in G.arrows:
        ra, rb = find(a.src), find(a.dst)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = defaultdict(list)
    for x in range(G.n_objects):
        groups[find(x)].append(x)
    classes = tuple(sorted(tuple(v) for v in groups.values()))
    if len(classes) <= 1:
        kind = OrbitKind.TRANSITIVE
    elif all(len(c) == 1 for c in classes):
        kind = OrbitKind.TOTALLY_INTRANSITIVE
    else:
        kind = OrbitKind.INTERMEDIATE
    return OrbitPartition(classes, kind)


def is_transitive(G: FiniteGroupoid) -> bool:
    return orbit_partition(G).kind is OrbitKind.TRANSITIVE


# constructions


def intersect(first: FiniteGroupoid, second: FiniteGroupoid) -> FiniteGroupoid:
    if first.objects != second.objects:
        raise ObjectMismatch("groupoids are defined over different object sets")
    if not first.same_ambient(second):
        raise ModeMismatch("groupoids do not share an ambient groupoid")
    return first.with_arrows(first.arrow_set & second.arrow_set, name=f"{first.name}∩{second.name}")


def generate_closure(
    body: Sequence[str],
    seeds: Iterable[Arrow],
    cap: int | None = None,
    name: str = "",
) -> FiniteGroupoid:
    """Smallest matrix groupoid over ``body`` containing ``seeds``.

    Raises ClosureExceedsCap once more than ``cap`` arrows are produced.
    """
    cap = config.closure_cap(cap)
    n = len(body)
    arrows: set[Arrow] = set()
    out: dict[int, list[Arrow]] = defaultdict(list)
    into: dict[int, list[Arrow]] = defaultdict(list)
    frontier: list[Arrow] = []

    def add(a: Arrow) -> None:
        if a in arrows:
            return
        arrows.add(a)
        if len(arrows) > cap:
            raise ClosureExceedsCap(cap)
        out[a.src].append(a)
        into[a.dst].append(a)
        frontier.append(a)

    for x in range(n):
        add(Arrow(x, x, IDENTITY))
    for s in sorted(set(seeds), key=Arrow.key.fget):
        if not isinstance(s.payload, RationalMatrix3):
            raise ModeMismatch("closure generation needs matrix arrows")
        if not (0 <= s.src < n and 0 <= s.dst < n):
            raise UnknownObject(f"seed {s} references an unknown object")
        add(s)
    while frontier:
        g = frontier.pop()
        add(Arrow(g.dst, g.src, g.payload.inverse()))
        for h in list(into[g.src]):
            add(Arrow(h.src, g.dst, g.payload @ h.payload))
        for k in list(out[g.dst]):
            add(Arrow(g.src, k.dst, k.payload @ g.payload))
    return FiniteGroupoid(body, arrows, Mode.MATRIX, name=name)


def is_subgroupoid(H: FiniteGroupoid, G: FiniteGroupoid) -> bool:
    if not set(H.objects) <= set(G.objects):
        return False
    if H.mode != G.mode:
        return False
    remap = {i: G.objects.index(name) for i, name in enumerate(H.objects)}
    for a in H.arrows:
        if Arrow(remap[a.src], remap[a.dst], a.payload) not in G:
            return False
    return check_axioms(H).passed
