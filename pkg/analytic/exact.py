"""
Exact rational scalars for closed-form results.

Python integers never overflow, so the default ``arbitrary`` mode keeps
every value exact. The ``checked128`` mode raises as soon as a numerator
or denominator leaves the signed 128-bit range.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from config.settings import get_settings
from core.exceptions import ArithmeticOverflowError

Rational = Union[int, Fraction]

INT128_MAX = 2**127 - 1


def as_fraction(value: Union[int, float, Fraction, str]) -> Fraction:
    """
    Convert to Fraction; floats go through their shortest decimal
    representation, so 0.1 becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def check_range(value: Rational, mode: Optional[str] = None) -> Rational:
    """Raise in checked mode when ``value`` does not fit 128-bit integers."""
    mode = mode or get_settings().ARITHMETIC_MODE
    if mode == "checked128":
        frac = Fraction(value)
        if abs(frac.numerator) > INT128_MAX or frac.denominator > INT128_MAX:
            raise ArithmeticOverflowError(
                "Rational exceeds the 128-bit range",
                details={"bits": max(abs(frac.numerator).bit_length(), frac.denominator.bit_length())},
            )
    return value


@dataclass(frozen=True)
class ExactScalar:
    """A rational value with its float approximation."""

    value: Fraction

    @classmethod
    def of(cls, value: Rational, mode: Optional[str] = None) -> "ExactScalar":
        return cls(Fraction(check_range(value, mode)))

    @property
    def float(self) -> float:
        return float(self.value)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def to_dict(self) -> Dict[str, Any]:
        return {"exact": f"{self.value.numerator}/{self.value.denominator}", "float": self.float}

    def __str__(self) -> str:
        return str(self.value)
