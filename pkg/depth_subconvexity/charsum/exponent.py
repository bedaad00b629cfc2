"""Balance two saving exponents linear in (r, l) and read off the resulting subconvex exponent."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..errors import NoCrossing

Number = Union[int, Fraction, str]


@dataclass(frozen=True)
class LinearForm:
    """a r + b l with rational a, b."""

    r_coeff: Fraction
    ell_coeff: Fraction

    @classmethod
    def of(cls, r_coeff: Number, ell_coeff: Number) -> "LinearForm":
        return cls(Fraction(r_coeff), Fraction(ell_coeff))

    @classmethod
    def parse(cls, text: str) -> "LinearForm":
        """'3/4,3/4' -> 3/4 r + 3/4 l."""
        try:
            a, b = (Fraction(part.strip()) for part in text.split(","))
        except ValueError as exc:
            raise ValueError(f"expected 'a,b' rational coefficients, got {text!r}") from exc
        return cls(a, b)

    def at(self, ratio: Fraction) -> Fraction:
        """Exponent per unit r when l = ratio r."""
        return self.r_coeff + self.ell_coeff * ratio

    def __str__(self) -> str:
        return f"{self.r_coeff} r + {self.ell_coeff} l"


@dataclass(frozen=True)
class ExponentSolution:
    ratio: Fraction
    sum_exponent: Fraction
    convexity: Fraction = Fraction(3, 2)

    @property
    def saving(self) -> Fraction:
        return self.convexity - self.sum_exponent

    @property
    def l_function_exponent(self) -> Fraction:
        """Exponent of p^r in the bound for the central value."""
        return self.convexity - self.saving

    def level(self, r: int) -> int:
        """The integer congruence level [ratio r]."""
        return int(self.ratio * r)

    def to_dict(self) -> dict[str, str]:
        return {
            "ratio": str(self.ratio),
            "sum_exponent": str(self.sum_exponent),
            "saving": str(self.saving),
            "l_function_exponent": str(self.l_function_exponent),
        }


def exponent_optimizer(first: LinearForm, second: LinearForm) -> ExponentSolution:
    """Solve first(r, l) = second(r, l) for l / r in exact arithmetic.

    The forms must move in opposite directions in l, otherwise balancing them cannot
    improve on either endpoint.
    """
    if first.ell_coeff == second.ell_coeff:
        raise NoCrossing(f"{first} and {second} have the same l-slope")
    if first.ell_coeff * second.ell_coeff > 0:
        raise NoCrossing(f"{first} and {second} both move the same way in l")
    ratio = (second.r_coeff - first.r_coeff) / (first.ell_coeff - second.ell_coeff)
    return ExponentSolution(ratio=ratio, sum_exponent=first.at(ratio))
