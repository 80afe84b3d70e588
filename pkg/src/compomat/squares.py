"""Squares of the coarse double groupoid of a composite.

Side naming (fixed for the whole package)::

        D <------ top ------ C
        ^                    ^
      left                 right
        |                    |
        B <---- bottom ----- A

Horizontal sides (bottom, top) come from the horizontal groupoid, vertical
sides (right, left) from the vertical one. A square commutes when
``left·bottom = top·right``.

Products:

* ``vertical_product(c, G, G2)`` places ``G2`` to the right of ``G`` and
  needs ``G.right == G2.left``; horizontal sides compose.
* ``horizontal_product(c, G, G2)`` stacks ``G`` on top of ``G2`` and needs
  ``G.bottom == G2.top``; vertical sides compose.

``unit_square(c, "V", a)`` is the unit for the vertical product and
``unit_square(c, "H", a)`` the unit for the horizontal one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

from . import config
from .errors import (
    CornerMismatch,
    NotComposableBlock,
    NotComposableHorizontally,
    NotComposableVertically,
    SizeCap,
    WrongGroupoid,
)
from .groupoid import Arrow, FiniteGroupoid, Label, Mode, TabularStructure
from .material import Composite

__all__ = [
    "Square",
    "PartialSquare",
    "SquareSet",
    "Core",
    "make_square",
    "is_commutative",
    "equivalent_conditions",
    "vertical_product",
    "horizontal_product",
    "unit_square",
    "invert_square",
    "interchange_check",
    "enumerate_squares",
    "iter_squares",
    "core_groupoid",
]

Direction = Literal["H", "V"]


@dataclass(frozen=True, slots=True)
class Square:
    bottom: Arrow
    top: Arrow
    right: Arrow
    left: Arrow

    @property
    def corners(self) -> tuple[int, int, int, int]:
        """(A, B, C, D) as in the module diagram."""
        return (self.bottom.src, self.bottom.dst, self.right.dst, self.top.dst)

    @property
    def key(self) -> tuple:
        return (self.bottom.key, self.top.key, self.right.key, self.left.key)

    def __lt__(self, other: "Square") -> bool:
        return self.key < other.key


@dataclass(frozen=True)
class PartialSquare:
    bottom: Arrow | None = None
    top: Arrow | None = None
    right: Arrow | None = None
    left: Arrow | None = None

    def present(self) -> dict[str, Arrow]:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def corner_conditions(bottom: Arrow, top: Arrow, right: Arrow, left: Arrow) -> list[str]:
    """Names of the failing quadruple conditions (empty when consistent)."""
    bad = []
    if bottom.src != right.src:
        bad.append("src(bottom) = src(right)")
    if top.src != right.dst:
        bad.append("src(top) = dst(right)")
    if bottom.dst != left.src:
        bad.append("dst(bottom) = src(left)")
    if top.dst != left.dst:
        bad.append("dst(top) = dst(left)")
    return bad


def make_square(c: Composite, bottom: Arrow, top: Arrow, right: Arrow, left: Arrow) -> Square:
    for side, arrow, G in (
        ("bottom", bottom, c.horizontal),
        ("top", top, c.horizontal),
        ("right", right, c.vertical),
        ("left", left, c.vertical),
    ):
        if arrow not in G:
            raise WrongGroupoid(f"{side} side {arrow} is not in {'the horizontal groupoid' if G is c.horizontal else 'the vertical groupoid'}")
    bad = corner_conditions(bottom, top, right, left)
    if bad:
        raise CornerMismatch("corner conditions violated: " + "; ".join(bad))
    return Square(bottom, top, right, left)


def is_commutative(c: Composite, sq: Square) -> bool:
    return c.product(sq.left, sq.bottom) == c.product(sq.top, sq.right)


def equivalent_conditions(c: Composite, sq: Square) -> tuple[bool, bool, bool, bool]:
    """The four rearrangements of the commutativity identity, evaluated
    independently in the ambient groupoid."""
    p, inv = c.product, c.inv
    bottom, top, right, left = sq.bottom, sq.top, sq.right, sq.left
    i = p(left, bottom) == p(top, right)
    ii = p(bottom, inv(right)) == p(inv(left), top)
    iii = p(inv(top), left) == p(right, inv(bottom))
    iv = p(inv(right), inv(top)) == p(inv(bottom), inv(left))
    return (i, ii, iii, iv)


def vertical_product(c: Composite, sq: Square, sq2: Square) -> Square:
    """``sq ⊥ sq2``: ``sq2`` sits to the right of ``sq``."""
    if sq.right != sq2.left:
        raise NotComposableVertically(f"shared side mismatch: {sq.right} vs {sq2.left}")
    return Square(
        c.product(sq.bottom, sq2.bottom),
        c.product(sq.top, sq2.top),
        sq2.right,
        sq.left,
    )


def horizontal_product(c: Composite, sq: Square, sq2: Square) -> Square:
    """``sq ⊞ sq2``: ``sq`` sits on top of ``sq2``."""
    if sq.bottom != sq2.top:
        raise NotComposableHorizontally(f"shared side mismatch: {sq.bottom} vs {sq2.top}")
    return Square(
        sq2.bottom,
        sq.top,
        c.product(sq.right, sq2.right),
        c.product(sq.left, sq2.left),
    )


def unit_square(c: Composite, direction: Direction, arrow: Arrow) -> Square:
    if direction == "H":
        if arrow not in c.horizontal:
            raise WrongGroupoid(f"{arrow} is not in the horizontal groupoid")
        return Square(arrow, arrow, c.unit(arrow.src), c.unit(arrow.dst))
    if direction == "V":
        if arrow not in c.vertical:
            raise WrongGroupoid(f"{arrow} is not in the vertical groupoid")
        return Square(c.unit(arrow.src), c.unit(arrow.dst), arrow, arrow)
    raise ValueError(f"direction must be 'H' or 'V', got {direction!r}")


def invert_square(c: Composite, sq: Square, direction: Direction) -> Square:
    """``H``: swap horizontal sides, invert vertical ones (inverse for ⊞).
    ``V``: swap vertical sides, invert horizontal ones (inverse for ⊥)."""
    if direction == "H":
        return Square(sq.top, sq.bottom, c.inv(sq.right), c.inv(sq.left))
    if direction == "V":
        return Square(c.inv(sq.bottom), c.inv(sq.top), sq.left, sq.right)
    raise ValueError(f"direction must be 'H' or 'V', got {direction!r}")


def interchange_check(c: Composite, Gq: Square, Hq: Square, Aq: Square, Bq: Square) -> bool:
    """Interchange law for the 2x2 block ``[[Gq, Hq], [Aq, Bq]]`` (top row
    first, ``Hq`` to the right of ``Gq``)."""
    if not (Gq.right == Hq.left and Aq.right == Bq.left and Gq.bottom == Aq.top and Hq.bottom == Bq.top):
        raise NotComposableBlock("inner edges of the 2x2 block do not match")
    lhs = horizontal_product(c, vertical_product(c, Gq, Hq), vertical_product(c, Aq, Bq))
    rhs = vertical_product(c, horizontal_product(c, Gq, Aq), horizontal_product(c, Hq, Bq))
    return lhs == rhs


def iter_squares(c: Composite, commutative_only: bool = False) -> Iterator[Square]:
    """All consistent squares, in canonical (bottom, top, right, left) order."""
    H, V = c.horizontal, c.vertical
    for bottom in H.arrows:
        for top in H.arrows:
            rights = V.hom(bottom.src, top.src)
            if not rights:
                continue
            lefts = V.hom(bottom.dst, top.dst)
            for right in rights:
                if commutative_only:
                    target = c.product(top, right)
                for left in lefts:
                    if commutative_only and c.product(left, bottom) != target:
                        continue
                    yield Square(bottom, top, right, left)


@dataclass(frozen=True)
class SquareSet:
    composite: Composite
    squares: tuple[Square, ...]
    commutative_only: bool

    def __len__(self) -> int:
        return len(self.squares)

    def __iter__(self):
        return iter(self.squares)


def enumerate_squares(c: Composite, commutative_only: bool = False, cap: int | None = None) -> SquareSet:
    cap = config.square_cap(cap)
    out = []
    for sq in iter_squares(c, commutative_only):
        out.append(sq)
        if len(out) > cap:
            raise SizeCap(f"more than {cap} squares")
    return SquareSet(c, tuple(out), commutative_only)


@dataclass(frozen=True)
class Core:
    groupoid: FiniteGroupoid
    squares: dict[Arrow, Square]


def _pair_label(top: Arrow, left: Arrow) -> Label:
    return Label(f"{top.payload}|{left.payload}")


def core_groupoid(c: Composite, commutative_only: bool = True) -> Core:
    """Squares with identity bottom and right side, as a tabular groupoid.

    Composition uses the mixed-product formula
    ``K1·K2 = (K1 ⊥ unit_H(top K2)) ⊞ K2``.
    """
    H, V = c.horizontal, c.vertical
    squares: dict[Arrow, Square] = {}
    for x in range(len(c.body)):
        ex = c.unit(x)
        for y in range(len(c.body)):
            for top in H.hom(x, y):
                for left in V.hom(x, y):
                    sq = Square(ex, top, ex, left)
                    if commutative_only and not is_commutative(c, sq):
                        continue
                    squares[Arrow(x, y, _pair_label(top, left))] = sq
    by_square = {sq: a for a, sq in squares.items()}
    table = TabularStructure()
    for a, sq in squares.items():
        if sq.top == c.unit(a.src) and sq.left == c.unit(a.src) and a.src == a.dst:
            table.identity[a.src] = a
        ey = c.unit(a.dst)
        inv_sq = Square(ey, c.inv(sq.top), ey, c.inv(sq.left))
        if inv_sq in by_square:
            table.inverse[a] = by_square[inv_sq]
    for k1, s1 in squares.items():
        for k2, s2 in squares.items():
            if k1.src != k2.dst:
                continue
            mixed = horizontal_product(c, vertical_product(c, s1, unit_square(c, "H", s2.top)), s2)
            if mixed in by_square:
                table.compose[(k1, k2)] = by_square[mixed]
    G = FiniteGroupoid(c.body, squares, Mode.TABLE, table, name="core")
    return Core(G, squares)
