"""Exact rationals: parsing and canonical rendering"""
import re
from fractions import Fraction
from typing import Union

# Fraction already keeps gcd(|num|, den) = 1, den >= 1 and zero as 0/1.
Rat = Fraction

RatLike = Union[Fraction, int, str]

_RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class RationalParseError(ValueError):
    """Input is not an exact rational literal"""
    pass


def parse_rat(value: RatLike) -> Fraction:
    """Parse an integer or "p/q" literal. Floats and decimals are refused."""
    if isinstance(value, bool):
        raise RationalParseError(f"Not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise RationalParseError(f"Expected exact string, got {type(value).__name__}")

    match = _RATIONAL_PATTERN.match(value)
    if not match:
        raise RationalParseError(f"Not an exact rational literal: {value!r}")
    numerator, denominator = match.group(1), match.group(2)
    if denominator is not None and int(denominator) == 0:
        raise RationalParseError(f"Zero denominator in {value!r}")
    return Fraction(int(numerator), int(denominator or 1))


def rat_to_str(value: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
