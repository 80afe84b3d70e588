"""Finite groupoid toolkit for material composites: exact 3x3 rational
jets, material groupoids, commutative-square double groupoids and
uniformity classifiers."""

from .errors import CompomatError, InputError
from .groupoid import Arrow, FiniteGroupoid, Label, Mode, check_axioms
from .material import Composite
from .rational import RationalMatrix3

__version__ = "0.1.0"

__all__ = [
    "Arrow",
    "CompomatError",
    "Composite",
    "FiniteGroupoid",
    "InputError",
    "Label",
    "Mode",
    "RationalMatrix3",
    "check_axioms",
]
