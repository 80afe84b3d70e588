"""Mechanical responses on a finite body, material isomorphisms, material
groupoids and binary composites."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    EmptySampleSet,
    ModeMismatch,
    NotClosed,
    NotTransitive,
    ObjectMismatch,
    ResponseUndefined,
    Singular,
)
from .groupoid import (
    Arrow,
    FiniteGroupoid,
    Mode,
    intersect,
    is_transitive,
)
from .rational import IDENTITY, RationalMatrix3, parse_rational, signed_permutation_matrices

__all__ = [
    "MechanicalResponse",
    "MaterialGroupoid",
    "Composite",
    "CompositeGroupoid",
    "RESPONSE_KINDS",
    "register_response",
    "make_response",
    "default_sample_set",
    "is_material_isomorphism",
    "change_reference",
    "build_material_groupoid",
    "composite_groupoid",
]

Value = tuple[Fraction, ...]


def default_sample_set() -> tuple[RationalMatrix3, ...]:
    """All 48 signed permutations plus the three axis stretches by 2 and their
    inverses. Spans orientation, determinant and anisotropy behaviour."""
    stretches = []
    for axis in range(3):
        d = [1, 1, 1]
        d[axis] = 2
        s = RationalMatrix3.diag(*d)
        stretches += [s, s.inverse()]
    return tuple(signed_permutation_matrices()) + tuple(sorted(stretches))


@dataclass(frozen=True, eq=False)
class MechanicalResponse:
    """``value(X, F)`` with ``X`` an object id and ``F`` an invertible matrix.

    ``kind``/``params`` record how the response was built so that documents
    can be re-serialized; responses produced by :func:`change_reference`
    keep the base kind and accumulate the reference change in ``params``.
    """

    body: tuple[str, ...]
    fn: Callable[[int, RationalMatrix3], Value]
    dim: int
    samples: tuple[RationalMatrix3, ...] = field(default_factory=default_sample_set)
    kind: str = "custom"
    params: Mapping = field(default_factory=dict)
    name: str = ""

    def value(self, x: int, F: RationalMatrix3) -> Value:
        v = tuple(self.fn(x, F))
        if len(v) != self.dim:
            raise ResponseUndefined(f"response {self.name!r} returned {len(v)} values, expected {self.dim}")
        return v


# response registry: kind -> factory(body, params) -> (fn, dim)

RESPONSE_KINDS: dict[str, Callable[[Sequence[str], Mapping], tuple[Callable, int]]] = {}


def register_response(kind: str):
    def deco(factory):
        RESPONSE_KINDS[kind] = factory
        return factory

    return deco


def _frames(body: Sequence[str], params: Mapping) -> list[RationalMatrix3]:
    """Optional per-point reference frames: value(X, F) = base(F·K(X))."""
    raw = params.get("frames") or {}
    out = []
    for name in body:
        m = raw.get(name)
        out.append(m if isinstance(m, RationalMatrix3) else RationalMatrix3(m) if m is not None else IDENTITY)
    return out


def _scales(body: Sequence[str], params: Mapping) -> list[Fraction]:
    raw = params.get("scale") or {}
    return [parse_rational(raw.get(name, "1")) for name in body]


@register_response("det")
def _det_response(body, params):
    frames, scales = _frames(body, params), _scales(body, params)

    def fn(x, F):
        return (scales[x] * (F @ frames[x]).det(),)

    return fn, 1


@register_response("trace_CtC")
def _trace_ctc_response(body, params):
    frames, scales = _frames(body, params), _scales(body, params)

    def fn(x, F):
        G = F @ frames[x]
        C = G.transpose() @ G
        return (scales[x] * (C.entry(0, 0) + C.entry(1, 1) + C.entry(2, 2)),)

    return fn, 1


@register_response("pointwise_table")
def _table_response(body, params):
    """Explicit values: params["values"][X] is a list of [matrix, vector]."""
    table: dict[tuple[int, RationalMatrix3], Value] = {}
    dim = None
    for x, name in enumerate(body):
        for F, vec in params.get("values", {}).get(name, []):
            F = F if isinstance(F, RationalMatrix3) else RationalMatrix3(F)
            vec = tuple(parse_rational(v) for v in vec)
            dim = len(vec) if dim is None else dim
            table[(x, F)] = vec

    def fn(x, F):
        try:
            return table[(x, F)]
        except KeyError:
            raise ResponseUndefined(f"no tabulated value at ({body[x]}, {F})") from None

    return fn, dim or 1


@register_response("orbit_sorted")
def _orbit_sorted_response(body, params):
    """Sorted values of a weighted entry sum over the orbit ``F·G``.

    Invariant under right multiplication by elements of the finite matrix
    group ``G`` generated by ``params["group"]``.
    """
    from .groupoid import generate_closure

    gens = [m if isinstance(m, RationalMatrix3) else RationalMatrix3(m) for m in params.get("group", [])]
    closure = generate_closure(["*"], [Arrow(0, 0, g) for g in gens])
    group = [a.payload for a in closure.hom(0, 0)]
    w = params.get("weight") or [[1, 2, 3], [5, 7, 11], [13, 17, 19]]
    weight = w if isinstance(w, RationalMatrix3) else RationalMatrix3(w)
    frames = _frames(body, params)

    def fn(x, F):
        vals = []
        for g in group:
            G = F @ frames[x] @ g
            vals.append(sum((G.entry(i, j) * weight.entry(i, j) for i in range(3) for j in range(3)), Fraction(0)))
        return tuple(sorted(vals))

    return fn, len(group)


def make_response(
    kind: str,
    body: Sequence[str],
    params: Mapping | None = None,
    samples: Iterable[RationalMatrix3] | None = None,
    name: str = "",
) -> MechanicalResponse:
    try:
        factory = RESPONSE_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown response kind {kind!r}; known: {sorted(RESPONSE_KINDS)}") from None
    params = dict(params or {})
    fn, dim = factory(tuple(body), params)
    smp = tuple(samples) if samples is not None else default_sample_set()
    return MechanicalResponse(tuple(body), fn, dim, smp, kind, params, name)


def _distance(u: Value, v: Value) -> Fraction:
    return max((abs(a - b) for a, b in zip(u, v)), default=Fraction(0))


def is_material_isomorphism(W: MechanicalResponse, P: Arrow, tol: Fraction | str | int = 0) -> bool:
    """Falsifier for ``W(X, F·P) = W(Y, F)`` over ``W.samples``.

    ``True`` certifies the identity only on the sample set.
    """
    if not W.samples:
        raise EmptySampleSet("mechanical response has no sample matrices")
    tol = parse_rational(tol)
    if P.payload.det() == 0:
        raise Singular(f"arrow {P} is not invertible")
    for F in W.samples:
        if _distance(W.value(P.src, F @ P.payload), W.value(P.dst, F)) > tol:
            return False
    return True


def change_reference(W: MechanicalResponse, C01: RationalMatrix3) -> MechanicalResponse:
    """``W1(X, F) = W(X, F·C01)``."""
    if C01.det() == 0:
        raise Singular("reference change must be invertible")
    base = W.fn

    def fn(x, F):
        return base(x, F @ C01)

    params = dict(W.params)
    params["reference_changes"] = tuple(params.get("reference_changes", ())) + (C01,)
    return MechanicalResponse(W.body, fn, W.dim, W.samples, W.kind, params, W.name)


@dataclass(frozen=True)
class MaterialGroupoid:
    groupoid: FiniteGroupoid
    provenance: str = "declared"

    @property
    def objects(self) -> tuple[str, ...]:
        return self.groupoid.objects


def build_material_groupoid(
    W: MechanicalResponse,
    candidates: Iterable[Arrow],
    tol: Fraction | str | int = 0,
    name: str = "",
) -> MaterialGroupoid:
    """Accept candidates passing the isomorphism test, add identities, and
    verify closure. Raises NotClosed with a witness if the accepted set is
    not a groupoid (the candidate pool is too small, or ``tol`` too loose)."""
    accepted = {Arrow(x, x, IDENTITY) for x in range(len(W.body))}
    for P in sorted(set(candidates), key=Arrow.key.fget):
        if is_material_isomorphism(W, P, tol):
            accepted.add(P)
    G = FiniteGroupoid(W.body, accepted, Mode.MATRIX, name=name or W.name)
    for g in G.arrows:
        gi = G.inv(g)
        if gi not in G:
            raise NotClosed(f"inverse of accepted arrow {g} was not accepted", witness=(g,))
        for h in G.beta_fibre(g.src):
            gh = G.product(g, h)
            if gh not in G:
                raise NotClosed(f"accepted arrows {g} and {h} compose outside the accepted set", witness=(g, h))
    return MaterialGroupoid(G, provenance=f"extracted:{W.name or W.kind}")


class Composite:
    """Two material groupoids over one body.

    Both groupoids must share an ambient groupoid (both matrix-realized, or
    both referencing the same table). With ``require_transitive`` the
    standing hypothesis that each constituent is uniform is enforced.
    """

    def __init__(
        self,
        omega1: MaterialGroupoid | FiniteGroupoid,
        omega2: MaterialGroupoid | FiniteGroupoid,
        require_transitive: bool = True,
        name: str = "",
    ):
        if isinstance(omega1, FiniteGroupoid):
            omega1 = MaterialGroupoid(omega1)
        if isinstance(omega2, FiniteGroupoid):
            omega2 = MaterialGroupoid(omega2)
        first, second = omega1.groupoid, omega2.groupoid
        if first.objects != second.objects:
            raise ObjectMismatch("the two material groupoids live over different bodies")
        if not first.same_ambient(second):
            raise ModeMismatch("the two material groupoids do not share an ambient groupoid")
        if require_transitive:
            for label, g in (("omega1", first), ("omega2", second)):
                if not is_transitive(g):
                    raise NotTransitive(f"{label} is not transitive (constituent not uniform)")
        self.omega1 = omega1
        self.omega2 = omega2
        self.require_transitive = require_transitive
        self.name = name

    @property
    def body(self) -> tuple[str, ...]:
        return self.omega1.groupoid.objects

    @property
    def horizontal(self) -> FiniteGroupoid:
        return self.omega1.groupoid

    @property
    def vertical(self) -> FiniteGroupoid:
        return self.omega2.groupoid

    # ambient structure maps shared by both constituents
    def product(self, g: Arrow, h: Arrow) -> Arrow:
        return self.omega1.groupoid.product(g, h)

    def inv(self, g: Arrow) -> Arrow:
        return self.omega1.groupoid.inv(g)

    def unit(self, x: int) -> Arrow:
        return self.omega1.groupoid.unit(x)

    def __repr__(self) -> str:
        return f"Composite({self.name or 'unnamed'}, horizontal={len(self.horizontal)}, vertical={len(self.vertical)})"


@dataclass(frozen=True)
class CompositeGroupoid:
    groupoid: FiniteGroupoid
    uniform: bool


def composite_groupoid(c: Composite) -> CompositeGroupoid:
    G = intersect(c.horizontal, c.vertical)
    return CompositeGroupoid(G, is_transitive(G))
