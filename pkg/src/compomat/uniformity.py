"""Uniformity and transitivity classifiers for composites.

Every classifier is a brute-force search over its quantifier domain. The
closed forms that relate the classifiers to each other are evaluated by
separate code and compared in :func:`classify_composite`, so a disagreement
between a definition and its characterization shows up as ``agree=False``
instead of being hidden by a shared shortcut.

Witnesses and counterexamples are the first hit in canonical order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Literal

from .errors import InvalidPartial
from .groupoid import Arrow, FiniteGroupoid, orbit_partition, intersect
from .material import Composite
from .rational import RationalMatrix3
from .squares import PartialSquare, Square, corner_conditions, is_commutative

__all__ = [
    "Flag",
    "CrossCheck",
    "UniformityReport",
    "complete_square",
    "is_uniform",
    "is_directionally_transitive",
    "directional_formula_check",
    "is_weak_directionally_transitive",
    "is_strongly_uniform",
    "is_weakly_uniform",
    "filling_uniformity_check",
    "isotropy_conjugation_check",
    "symmetry_conjugation_check",
    "isotropy_inclusions",
    "conjugacy_conditions",
    "classify_composite",
    "REPORT_METADATA",
]

Direction = Literal["H", "V"]

REPORT_METADATA = {
    "weak_uniformity_variant": "corners",
    "weak_uniformity_note": "a square realizes (A,B,C,D) when src(bottom)=A, dst(bottom)=B, dst(right)=C, dst(top)=D",
    "strong_uniformity_form": "top side ends at the base point",
    "witness_order": "first in canonical order",
}


@dataclass(frozen=True)
class Flag:
    status: bool
    witness: dict[str, Any] | None = None
    counterexample: dict[str, Any] | None = None

    def __bool__(self) -> bool:
        return self.status


def _true(**w) -> Flag:
    return Flag(True, witness=w or None)


def _false(**w) -> Flag:
    return Flag(False, counterexample=w)


# completion


def complete_square(c: Composite, p: PartialSquare) -> list[Square]:
    """All commutative squares of ``c`` extending ``p``, canonically ordered."""
    H, V = c.horizontal, c.vertical
    given = p.present()
    if not given:
        raise InvalidPartial("a partial square needs at least one side")
    for side, arrow in given.items():
        G = H if side in ("bottom", "top") else V
        if arrow not in G:
            raise InvalidPartial(f"{side} side {arrow} is not in the {'horizontal' if G is H else 'vertical'} groupoid")
    probe = {k: given.get(k) for k in ("bottom", "top", "right", "left")}
    checks = [
        ("bottom", "right", lambda b, r: b.src == r.src),
        ("top", "right", lambda t, r: t.src == r.dst),
        ("bottom", "left", lambda b, l: b.dst == l.src),
        ("top", "left", lambda t, l: t.dst == l.dst),
    ]
    for a, b, ok in checks:
        if probe[a] is not None and probe[b] is not None and not ok(probe[a], probe[b]):
            raise InvalidPartial(f"present sides {a} and {b} do not share a corner")

    out = []
    for bottom in [p.bottom] if p.bottom else H.arrows:
        for right in [p.right] if p.right else V.alpha_fibre(bottom.src):
            if right.src != bottom.src:
                continue
            for left in [p.left] if p.left else V.alpha_fibre(bottom.dst):
                if left.src != bottom.dst:
                    continue
                for top in [p.top] if p.top else H.hom(right.dst, left.dst):
                    if corner_conditions(bottom, top, right, left):
                        continue
                    sq = Square(bottom, top, right, left)
                    if is_commutative(c, sq):
                        out.append(sq)
    out.sort()
    return out


# uniformity of the composite


def is_uniform(c: Composite) -> Flag:
    """Transitivity of the intersection; witness maps each point to an
    arrow from point 0."""
    G = intersect(c.horizontal, c.vertical)
    part = orbit_partition(G)
    if len(part.classes) <= 1:
        witness = {}
        for y in range(len(c.body)):
            hom = G.hom(0, y)
            witness[c.body[y]] = hom[0]
        return _true(**witness)
    other = part.classes[1][0]
    return _false(source=0, target=other)


def isotropy_inclusions(c: Composite) -> dict[str, dict[str, bool]]:
    out = {}
    for x, name in enumerate(c.body):
        s1 = set(c.horizontal.isotropy(x))
        s2 = set(c.vertical.isotropy(x))
        out[name] = {"vertical_in_horizontal": s2 <= s1, "horizontal_in_vertical": s1 <= s2}
    return out


# directional transitivity


def _roles(c: Composite, direction: Direction):
    """(completed groupoid, given groupoid, names) for a direction.

    ``H`` completes the top side from (right, bottom, left); ``V`` is the
    transposed problem, completing the left side from (bottom, right, top).
    """
    if direction == "H":
        return c.horizontal, c.vertical, ("right", "bottom", "left", "top")
    if direction == "V":
        return c.vertical, c.horizontal, ("bottom", "right", "top", "left")
    raise ValueError(f"direction must be 'H' or 'V', got {direction!r}")


def is_directionally_transitive(c: Composite, direction: Direction) -> Flag:
    """Every three-sided configuration with the missing side in the
    direction's groupoid completes to a commutative square.

    Brute force: for each triple, the missing side is searched among all
    arrows of the right hom-set and the square is tested for commutativity.
    """
    M, K, (n_first, n_mid, n_last, n_missing) = _roles(c, direction)
    prod = c.product
    checked = 0
    # completions[(k1, D)] = {m·k1 : m ∈ M(dst k1, D)}
    completions: dict[tuple[Arrow, int], set[Arrow]] = {}
    for mid in M.arrows:
        for last in K.alpha_fibre(mid.dst):
            path = prod(last, mid)
            for first in K.alpha_fibre(mid.src):
                key = (first, last.dst)
                reach = completions.get(key)
                if reach is None:
                    reach = {prod(m, first) for m in M.hom(first.dst, last.dst)}
                    completions[key] = reach
                checked += 1
                if path not in reach:
                    return _false(**{n_first: first, n_mid: mid, n_last: last})
    return _true(triples=checked)


def directional_formula_check(c: Composite, direction: Direction) -> Flag:
    """Closed form: ``last·mid·first⁻¹`` lies in the completed groupoid for
    every admissible triple."""
    M, K, (n_first, n_mid, n_last, _) = _roles(c, direction)
    for first in K.arrows:
        fi = c.inv(first)
        for mid in M.alpha_fibre(first.src):
            mf = c.product(mid, fi)
            for last in K.alpha_fibre(mid.dst):
                if c.product(last, mf) not in M:
                    return _false(**{n_first: first, n_mid: mid, n_last: last})
    return _true()


def is_weak_directionally_transitive(c: Composite, direction: Direction) -> Flag:
    """Every pair of sides from the other groupoid (placed on the two
    opposite sides) extends to a commutative square."""
    M, K, (n_first, _, n_last, _) = _roles(c, direction)
    prod = c.product
    reach_cache: dict[tuple[Arrow, int], set[Arrow]] = {}
    for first in K.arrows:
        for last in K.arrows:
            key = (first, last.dst)
            reach = reach_cache.get(key)
            if reach is None:
                reach = {prod(m, first) for m in M.hom(first.dst, last.dst)}
                reach_cache[key] = reach
            if not any(prod(last, mid) in reach for mid in M.hom(first.src, last.src)):
                return _false(**{n_first: first, n_last: last})
    return _true()


def is_strongly_uniform(c: Composite) -> Flag:
    """For each point X, each horizontal loop at X and each vertical arrow
    leaving X, some horizontal arrow ending at X and vertical loop at X
    close a commutative square."""
    H, V, prod = c.horizontal, c.vertical, c.product
    for x in range(len(c.body)):
        loops2 = V.isotropy(x)
        for bottom in H.isotropy(x):
            paths = {prod(left, bottom) for left in loops2}
            for right in V.alpha_fibre(x):
                if not any(prod(top, right) in paths for top in H.hom(right.dst, x)):
                    return _false(point=x, bottom=bottom, right=right)
    return _true()


def _paths(first: FiniteGroupoid, second: FiniteGroupoid, c: Composite, a: int, b: int, d: int) -> set[Arrow]:
    return {c.product(s, f) for f in first.hom(a, b) for s in second.hom(b, d)}


def is_weakly_uniform(c: Composite, variant: str = "corners") -> Flag:
    """Corner realization: every (A, B, C, D) (``corners``) or every
    (A, B, B, D) (``midpoint``) is the corner tuple of a commutative square.

    A square with corners (A, B, C, D) exists iff some path A→B→D (horizontal then
    vertical) equals some path A→C→D (vertical then horizontal).
    """
    variant = variant.lower()
    if variant not in ("corners", "midpoint"):
        raise ValueError(f"variant must be 'corners' or 'midpoint', got {variant!r}")
    H, V = c.horizontal, c.vertical
    n = len(c.body)
    via_h: dict[tuple[int, int, int], set[Arrow]] = {}
    via_v: dict[tuple[int, int, int], set[Arrow]] = {}
    for a in range(n):
        for b in range(n):
            for cc in range(n) if variant == "corners" else (b,):
                for d in range(n):
                    p = via_h.get((a, b, d))
                    if p is None:
                        p = via_h[(a, b, d)] = _paths(H, V, c, a, b, d)
                    q = via_v.get((a, cc, d))
                    if q is None:
                        q = via_v[(a, cc, d)] = _paths(V, H, c, a, cc, d)
                    if p.isdisjoint(q):
                        return _false(corners=(a, b, cc, d))
    return _true()


def filling_uniformity_check(c: Composite) -> Flag:
    """For all X, Y: a commutative square with identity bottom and right
    at X and left side ending at Y."""
    H, V = c.horizontal, c.vertical
    for x in range(len(c.body)):
        e = c.unit(x)
        for y in range(len(c.body)):
            if not any(
                is_commutative(c, Square(e, top, e, left)) for top in H.hom(x, y) for left in V.hom(x, y)
            ):
                return _false(source=x, target=y)
    return _true()


def isotropy_conjugation_check(c: Composite, direction: Direction) -> Flag:
    """Set equality ``k2·M(X,Y)·k1 = M(X',Y')`` for every pair ``k1: X'→X``,
    ``k2: Y→Y'`` from the other groupoid (``M`` is the horizontal groupoid for ``H``)."""
    M, K, _ = _roles(c, direction)
    prod = c.product
    n = len(c.body)
    for k1 in K.arrows:
        x_, x = k1.src, k1.dst
        for y in range(n):
            middle = M.hom(x, y)
            right = [prod(m, k1) for m in middle]
            for k2 in K.alpha_fibre(y):
                lhs = {prod(k2, r) for r in right}
                if lhs != set(M.hom(x_, k2.dst)):
                    return _false(inner=k1, outer=k2)
    return _true()


def symmetry_conjugation_check(c: Composite, direction: Direction) -> Flag:
    """``k·M(X,X)·k⁻¹ = M(X',X')`` for every ``k: X→X'`` of the other groupoid."""
    M, K, _ = _roles(c, direction)
    for k in K.arrows:
        ki = c.inv(k)
        lhs = {c.product(k, c.product(m, ki)) for m in M.isotropy(k.src)}
        if lhs != set(M.isotropy(k.dst)):
            return _false(conjugator=k)
    return _true()


# conjugacy conditions for a pair of point symmetries


def conjugacy_conditions(loop1: RationalMatrix3, loop2: RationalMatrix3) -> dict[str, bool]:
    """The six candidate identities deciding whether the three-sided
    configuration (horizontal loop ``loop1``, vertical loop ``loop2``)
    completes when the isotropy groups are ``{I, s, s⁻¹}`` for ``s`` =
    ``loop1`` resp. ``loop2``.

    Keys ``i``..``vi`` compare ``loop2·loop1⁻¹`` with the six products
    ``v·u`` (``u`` a horizontal, ``v`` a vertical symmetry) other than
    the trivial ones; ``ii``, ``iii``, ``v``, ``vi`` are also returned in
    their reduced conjugation forms under ``*_reduced`` and must agree.
    """
    a, b = loop1, loop2
    ai, bi = a.inverse(), b.inverse()
    target = b @ ai
    direct = {
        "i": bi == target,
        "ii": a @ bi == target,
        "iii": ai @ bi == target,
        "iv": b == target,
        "v": a @ b == target,
        "vi": ai @ b == target,
    }
    reduced = {
        "ii_reduced": a @ bi @ a == b,
        "iii_reduced": ai @ bi @ a == b,
        "v_reduced": a @ b @ a == b,
        "vi_reduced": ai @ b @ a == b,
    }
    return {**direct, **reduced}


# report


@dataclass(frozen=True)
class CrossCheck:
    id: str
    lhs: bool
    rhs: bool
    relation: str  # "iff" or "implies"
    agree: bool


@dataclass(frozen=True)
class UniformityReport:
    name: str
    n_points: int
    sizes: dict[str, int]
    uniform: Flag
    horizontally_transitive: Flag
    vertically_transitive: Flag
    weak_horizontally_transitive: Flag
    weak_vertically_transitive: Flag
    strongly_uniform: Flag
    weakly_uniform_corners: Flag
    weakly_uniform_midpoint: Flag
    filling_condition: Flag
    isotropy_inclusions: dict[str, dict[str, bool]]
    proposition_crosschecks: tuple[CrossCheck, ...]
    metadata: dict[str, str] = field(default_factory=lambda: dict(REPORT_METADATA))

    FLAG_FIELDS = (
        "uniform",
        "horizontally_transitive",
        "vertically_transitive",
        "weak_horizontally_transitive",
        "weak_vertically_transitive",
        "strongly_uniform",
        "weakly_uniform_corners",
        "weakly_uniform_midpoint",
        "filling_condition",
    )

    @property
    def all_agree(self) -> bool:
        return all(x.agree for x in self.proposition_crosschecks)


def _check(id_: str, lhs: bool, rhs: bool, relation: str) -> CrossCheck:
    agree = (lhs == rhs) if relation == "iff" else (not lhs or rhs)
    return CrossCheck(id_, bool(lhs), bool(rhs), relation, agree)


def classify_composite(c: Composite, threads: int = 1) -> UniformityReport:
    tasks: dict[str, Callable[[], Any]] = {
        "uniform": lambda: is_uniform(c),
        "horizontal": lambda: is_directionally_transitive(c, "H"),
        "vertical": lambda: is_directionally_transitive(c, "V"),
        "horizontal_formula": lambda: directional_formula_check(c, "H"),
        "vertical_formula": lambda: directional_formula_check(c, "V"),
        "weak_horizontal": lambda: is_weak_directionally_transitive(c, "H"),
        "weak_vertical": lambda: is_weak_directionally_transitive(c, "V"),
        "strong": lambda: is_strongly_uniform(c),
        "corners": lambda: is_weakly_uniform(c, "corners"),
        "midpoint": lambda: is_weakly_uniform(c, "midpoint"),
        "filling": lambda: filling_uniformity_check(c),
        "conj_h": lambda: isotropy_conjugation_check(c, "H"),
        "conj_v": lambda: isotropy_conjugation_check(c, "V"),
        "sym_h": lambda: symmetry_conjugation_check(c, "H"),
        "sym_v": lambda: symmetry_conjugation_check(c, "V"),
        "inclusions": lambda: isotropy_inclusions(c),
    }
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {k: pool.submit(fn) for k, fn in tasks.items()}
            r = {k: f.result() for k, f in futures.items()}
    else:
        r = {k: fn() for k, fn in tasks.items()}

    H, V = c.horizontal, c.vertical
    inc = r["inclusions"]
    iso_2_in_1 = all(v["vertical_in_horizontal"] for v in inc.values())
    iso_1_in_2 = all(v["horizontal_in_vertical"] for v in inc.values())
    sub_2_in_1 = V.arrow_set <= H.arrow_set
    sub_1_in_2 = H.arrow_set <= V.arrow_set
    u = r["uniform"].status
    h, v = r["horizontal"].status, r["vertical"].status
    checks = (
        _check("horizontal_iff_uniform_with_vertical_symmetries_inside", h, u and iso_2_in_1, "iff"),
        _check("vertical_iff_uniform_with_horizontal_symmetries_inside", v, u and iso_1_in_2, "iff"),
        _check("both_directions_iff_uniform_and_equal", h and v, u and H.arrow_set == V.arrow_set, "iff"),
        _check("weak_horizontal_iff_horizontal", r["weak_horizontal"].status, h, "iff"),
        _check("weak_vertical_iff_vertical", r["weak_vertical"].status, v, "iff"),
        _check("weak_horizontal_iff_vertical_subset", r["weak_horizontal"].status, sub_2_in_1, "iff"),
        _check("weak_vertical_iff_horizontal_subset", r["weak_vertical"].status, sub_1_in_2, "iff"),
        _check("horizontal_iff_formula", h, r["horizontal_formula"].status, "iff"),
        _check("vertical_iff_formula", v, r["vertical_formula"].status, "iff"),
        _check("horizontal_iff_hom_conjugation", h, r["conj_h"].status, "iff"),
        _check("vertical_iff_hom_conjugation", v, r["conj_v"].status, "iff"),
        _check("horizontal_implies_symmetry_conjugation", h, r["sym_h"].status, "implies"),
        _check("vertical_implies_symmetry_conjugation", v, r["sym_v"].status, "implies"),
        _check("filling_iff_uniform", r["filling"].status, u, "iff"),
        _check("strong_implies_uniform", r["strong"].status, u, "implies"),
        _check("uniform_implies_weak_corners", u, r["corners"].status, "implies"),
    )
    return UniformityReport(
        name=c.name,
        n_points=len(c.body),
        sizes={"omega1": len(H), "omega2": len(V), "intersection": len(H.arrow_set & V.arrow_set)},
        uniform=r["uniform"],
        horizontally_transitive=r["horizontal"],
        vertically_transitive=r["vertical"],
        weak_horizontally_transitive=r["weak_horizontal"],
        weak_vertically_transitive=r["weak_vertical"],
        strongly_uniform=r["strong"],
        weakly_uniform_corners=r["corners"],
        weakly_uniform_midpoint=r["midpoint"],
        filling_condition=r["filling"],
        isotropy_inclusions=inc,
        proposition_crosschecks=checks,
    )
