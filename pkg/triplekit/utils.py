"""Scalar helpers shared by triplekit modules."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import InvalidScalar

ScalarLike = Union[Fraction, int, str]


def parse_scalar(value: ScalarLike) -> Fraction:
    """Return ``value`` as a reduced :class:`~fractions.Fraction`.

    Parameters
    ----------
    value: Fraction, int or str
        A rational number. Strings use the ``"p/q"`` or ``"p"`` form; floats
        are refused so that no rounding can sneak in.

    Returns
    -------
    Fraction
        The canonical rational.
    """

    if isinstance(value, bool) or isinstance(value, float):
        raise InvalidScalar(f"refusing inexact scalar {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    text = str(value).strip()
    if not text:
        raise InvalidScalar("empty scalar")
    try:
        result = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidScalar(f"not a rational scalar: {value!r}") from exc
    if "." in text or "e" in text.lower():
        raise InvalidScalar(f"use p/q form, not decimals: {value!r}")
    return result


def format_scalar(value: ScalarLike) -> str:
    """Return the canonical ``"p/q"`` text of ``value`` (``"p"`` when integral)."""

    q = parse_scalar(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
