"""Exact 3x3 rational matrices used as 1-jet payloads.

Matrices are stored with a common denominator (``den``) and nine integer
numerators, always reduced so that ``gcd(den, *nums) == 1`` and ``den > 0``.
Instances are interned: equal matrices are the same object, which keeps
hashing and equality cheap inside groupoid set operations.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import Singular

__all__ = [
    "RationalMatrix3",
    "MatrixClass",
    "mat_compose",
    "mat_inverse",
    "classify_matrix",
    "parse_rational",
    "format_rational",
    "signed_permutation_matrices",
    "IDENTITY",
    "FLOAT_TOL",
]

FLOAT_TOL = 1e-9
DEFAULT_ORDER_BOUND = 48

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction.

    Raises ValueError on malformed input or a zero denominator.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rational literal must be a string, got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational literal {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class RationalMatrix3:
    """Immutable, interned 3x3 matrix over the rationals."""

    __slots__ = ("den", "nums", "_hash", "_key", "__weakref__")

    _interned: dict[tuple[int, tuple[int, ...]], "RationalMatrix3"] = {}

    den: int
    nums: tuple[int, ...]

    def __new__(cls, rows: Iterable[Iterable[Fraction | int | str]]):
        entries = [parse_rational(x) for row in rows for x in row]
        if len(entries) != 9:
            raise ValueError("a RationalMatrix3 needs exactly 9 entries")
        den = math.lcm(*(e.denominator for e in entries))
        nums = tuple(e.numerator * (den // e.denominator) for e in entries)
        return cls._from_parts(den, nums)

    @classmethod
    def _from_parts(cls, den: int, nums: tuple[int, ...]) -> "RationalMatrix3":
        if den < 0:
            den, nums = -den, tuple(-n for n in nums)
        g = math.gcd(den, *nums)
        if g > 1:
            den //= g
            nums = tuple(n // g for n in nums)
        key = (den, nums)
        hit = cls._interned.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.den = den
        self.nums = nums
        self._hash = hash(key)
        self._key = None
        cls._interned[key] = self
        return self

    @classmethod
    def identity(cls) -> "RationalMatrix3":
        return cls._from_parts(1, (1, 0, 0, 0, 1, 0, 0, 0, 1))

    @classmethod
    def diag(cls, a, b, c) -> "RationalMatrix3":
        return cls([[a, 0, 0], [0, b, 0], [0, 0, c]])

    # value semantics

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, RationalMatrix3):
            return NotImplemented
        return self.den == other.den and self.nums == other.nums

    def __reduce__(self):
        return (RationalMatrix3, (self.rows(),))

    @property
    def sort_key(self) -> tuple[Fraction, ...]:
        """Lexicographic key on the exact row-major entries."""
        if self._key is None:
            self._key = tuple(Fraction(n, self.den) for n in self.nums)
        return self._key

    def __lt__(self, other: "RationalMatrix3") -> bool:
        return self.sort_key < other.sort_key

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(self.nums[3 * i + j], self.den)

    def rows(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(3)] for i in range(3)]

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.rows()]

    def __repr__(self) -> str:
        return f"RationalMatrix3({self.to_strings()})"

    def __str__(self) -> str:
        return "[" + ",".join("[" + ",".join(r) + "]" for r in self.to_strings()) + "]"

    # arithmetic

    def __matmul__(self, other: "RationalMatrix3") -> "RationalMatrix3":
        return _matmul(self, other)

    def det(self) -> Fraction:
        a, b, c, d, e, f, g, h, i = self.nums
        num = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        return Fraction(num, self.den**3)

    def transpose(self) -> "RationalMatrix3":
        n = self.nums
        return RationalMatrix3._from_parts(
            self.den, (n[0], n[3], n[6], n[1], n[4], n[7], n[2], n[5], n[8])
        )

    def inverse(self) -> "RationalMatrix3":
        return _inverse(self)

    def power(self, k: int) -> "RationalMatrix3":
        if k < 0:
            return self.inverse().power(-k)
        out = RationalMatrix3.identity()
        for _ in range(k):
            out = out @ self
        return out

    @property
    def is_identity(self) -> bool:
        return self is IDENTITY

    # float view, only for numeric response evaluation

    def to_float(self) -> np.ndarray:
        return np.array(self.nums, dtype=float).reshape(3, 3) / self.den

    def allclose(self, other: "RationalMatrix3", tol: float = FLOAT_TOL) -> bool:
        return bool(np.max(np.abs(self.to_float() - other.to_float())) <= tol)


IDENTITY = RationalMatrix3.identity()


@lru_cache(maxsize=1 << 18)
def _matmul(a: RationalMatrix3, b: RationalMatrix3) -> RationalMatrix3:
    x, y = a.nums, b.nums
    nums = tuple(
        x[3 * i] * y[j] + x[3 * i + 1] * y[3 + j] + x[3 * i + 2] * y[6 + j]
        for i in range(3)
        for j in range(3)
    )
    return RationalMatrix3._from_parts(a.den * b.den, nums)


@lru_cache(maxsize=1 << 16)
def _inverse(m: RationalMatrix3) -> RationalMatrix3:
    a, b, c, d, e, f, g, h, i = m.nums
    det_num = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det_num == 0:
        raise Singular(f"matrix {m} is singular")
    # adjugate (transposed cofactors); inverse = den * adj / det_num
    adj = (
        e * i - f * h, c * h - b * i, b * f - c * e,
        f * g - d * i, a * i - c * g, c * d - a * f,
        d * h - e * g, b * g - a * h, a * e - b * d,
    )
    return RationalMatrix3._from_parts(det_num, tuple(m.den * x for x in adj))


def mat_compose(a: RationalMatrix3, b: RationalMatrix3) -> RationalMatrix3:
    """Exact product ``a @ b`` (apply ``b`` first)."""
    return a @ b


def mat_inverse(m: RationalMatrix3) -> RationalMatrix3:
    """Exact inverse via the adjugate; raises Singular when det is 0."""
    return m.inverse()


@dataclass(frozen=True)
class MatrixClass:
    invertible: bool
    orthogonal: bool
    determinant: Fraction
    finite_order: int | None


def classify_matrix(m: RationalMatrix3, order_bound: int = DEFAULT_ORDER_BOUND) -> MatrixClass:
    det = m.det()
    orthogonal = (m.transpose() @ m) is IDENTITY
    order = None
    if det != 0:
        p = m
        for k in range(1, order_bound + 1):
            if p is IDENTITY:
                order = k
                break
            p = p @ m
    return MatrixClass(det != 0, orthogonal, det, order)


@lru_cache(maxsize=None)
def signed_permutation_matrices() -> tuple[RationalMatrix3, ...]:
    """All 48 signed permutation matrices, canonically sorted."""
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            rows = [[0] * 3 for _ in range(3)]
            for i, j in enumerate(perm):
                rows[i][j] = signs[i]
            out.append(RationalMatrix3(rows))
    return tuple(sorted(out))


def as_matrix(obj: RationalMatrix3 | Sequence[Sequence]) -> RationalMatrix3:
    if isinstance(obj, RationalMatrix3):
        return obj
    return RationalMatrix3(obj)
