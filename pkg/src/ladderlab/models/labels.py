"""
Lattice labels for hierarchy states.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

Rational = Union[int, float, str, Fraction]


def as_fraction(value: Rational) -> Fraction:
    """
    Convert a number or a string such as ``"1/2"`` to an exact fraction.

    Floats are rounded to the nearest fraction with a small denominator so
    that ``0.5`` becomes ``1/2`` rather than its binary expansion.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value).limit_denominator(1 << 20)
    return Fraction(value)


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    """
    Rational (n, ell) pair labelling a point of the factorization lattice.

    Attributes:
        n: Energy label
        ell: Hierarchy (angular momentum or intensity) label
    """
    n: Fraction
    ell: Fraction

    def __post_init__(self):
        object.__setattr__(self, "n", as_fraction(self.n))
        object.__setattr__(self, "ell", as_fraction(self.ell))

    def shifted(self, dn: Rational, dl: Rational) -> "QuantumNumbers":
        """Return the label moved by (dn, dl)."""
        return QuantumNumbers(self.n + as_fraction(dn), self.ell + as_fraction(dl))

    @property
    def is_integral(self) -> bool:
        """Whether both labels are integers."""
        return self.n.denominator == 1 and self.ell.denominator == 1

    def as_tuple(self) -> Tuple[Fraction, Fraction]:
        return self.n, self.ell

    def to_dict(self) -> dict:
        return {"n": format_rational(self.n), "l": format_rational(self.ell)}

    def __str__(self) -> str:
        return f"({format_rational(self.n)},{format_rational(self.ell)})"


def format_rational(value: Fraction) -> str:
    """Render a fraction as ``3`` or ``1/2``."""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
