"""Exact multilinear contraction on numpy arrays of rationals.

Operands are cleared to a common denominator and contracted as integers.
int64 is used when a magnitude bound proves the result cannot overflow,
Python integers (object dtype) otherwise, so every path is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

# Largest magnitude an int64 result may reach; leaves room for summing
# many such terms without overflow.
INT64_SAFE_BOUND = 2**52
ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def zeros(shape: Sequence[int]) -> np.ndarray:
    arr = np.empty(tuple(shape), dtype=object)
    arr.fill(ZERO)
    return arr


def as_fraction_array(data, shape: Optional[Sequence[int]] = None) -> np.ndarray:
    """Return ``data`` as an object array of :class:`Fraction`."""

    src = np.asarray(data, dtype=object)
    if shape is not None:
        src = src.reshape(tuple(shape))
    out = np.empty(src.shape, dtype=object)
    flat = out.reshape(-1)
    for idx, value in enumerate(src.reshape(-1).tolist()):
        if isinstance(value, Fraction):
            flat[idx] = value
        elif isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            flat[idx] = Fraction(int(value))
        else:
            # late import keeps utils free of numpy
            from .utils import parse_scalar

            flat[idx] = parse_scalar(value)
    return out


def frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


# ---------------------------------------------------------------------------
# Integer representation
# ---------------------------------------------------------------------------

def integerize(arr: np.ndarray) -> Tuple[np.ndarray, int]:
    """Return ``(ints, den)`` with ``arr == ints / den`` elementwise."""

    values = np.asarray(arr, dtype=object).reshape(-1).tolist()
    den = math.lcm(1, *(Fraction(v).denominator for v in values)) if values else 1
    ints = [Fraction(v).numerator * (den // Fraction(v).denominator) for v in values]
    out = np.empty(len(ints), dtype=object)
    out[:] = ints
    return _narrow(out.reshape(np.shape(arr))), den


def fractions_of(ints: np.ndarray, den: int) -> np.ndarray:
    values = np.asarray(ints).reshape(-1).tolist()
    out = np.empty(len(values), dtype=object)
    out[:] = [Fraction(int(v), den) for v in values]
    return out.reshape(np.shape(ints))


def max_abs(ints: np.ndarray) -> int:
    if ints.size == 0:
        return 0
    if ints.dtype == object:
        return max(abs(int(v)) for v in ints.reshape(-1).tolist())
    return int(np.max(np.abs(ints)))


def _narrow(ints: np.ndarray) -> np.ndarray:
    """Use int64 storage when every entry is comfortably inside its range."""

    if ints.dtype != object:
        return ints
    if max_abs(ints) < INT64_SAFE_BOUND:
        return ints.astype(np.int64)
    return ints


def _widen(ints: np.ndarray) -> np.ndarray:
    if ints.dtype == object:
        return ints
    return ints.astype(object)


def _label_sizes(spec: str, operands: Sequence[np.ndarray]) -> Tuple[dict, str]:
    inputs, output = spec.replace(" ", "").split("->")
    sizes: dict = {}
    for labels, op in zip(inputs.split(","), operands):
        if len(labels) != op.ndim:
            raise ValueError(f"einsum spec {labels!r} does not match shape {op.shape}")
        for label, size in zip(labels, op.shape):
            if sizes.setdefault(label, size) != size:
                raise ValueError(f"inconsistent size for index {label!r} in {spec!r}")
    return sizes, output


def rescale(ints: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return ints
    if max_abs(ints) * factor < INT64_SAFE_BOUND and ints.dtype != object:
        return ints * factor
    return _narrow(_widen(ints) * factor)


def common_integers(*arrays: np.ndarray) -> Tuple[List[np.ndarray], int]:
    """Integer forms of several rational arrays over one shared denominator."""

    parts = [integerize(a) for a in arrays]
    den = math.lcm(1, *(d for _, d in parts))
    return [rescale(i, den // d) for i, d in parts], den


def int_einsum(spec: str, *operands: np.ndarray) -> np.ndarray:
    """Integer einsum that never overflows."""

    sizes, output = _label_sizes(spec, operands)
    summed = set(sizes) - set(output)
    bound = 1
    for label in summed:
        bound *= sizes[label]
    for op in operands:
        bound *= max_abs(op)
    if bound < INT64_SAFE_BOUND:
        ops = [op.astype(np.int64) for op in operands]
        return np.einsum(spec, *ops)
    return np.einsum(spec, *[_widen(op) for op in operands])


def int_sum(terms: Iterable[Tuple[int, np.ndarray]]) -> np.ndarray:
    """Return ``sum(sign * term)`` over ``(sign, term)`` pairs, exactly."""

    terms = list(terms)
    if not terms:
        raise ValueError("nothing to sum")
    total_bound = sum(max_abs(t) for _, t in terms)
    if total_bound < INT64_SAFE_BOUND * 8 and all(t.dtype != object for _, t in terms):
        acc = np.zeros(terms[0][1].shape, dtype=np.int64)
        for sign, term in terms:
            acc = acc + sign * term
        return acc
    acc = np.zeros(terms[0][1].shape, dtype=object)
    acc.fill(0)
    for sign, term in terms:
        acc = acc + sign * _widen(term)
    return _narrow(acc)


# ---------------------------------------------------------------------------
# Rational contraction
# ---------------------------------------------------------------------------

def exact_einsum(spec: str, *arrays: np.ndarray) -> np.ndarray:
    """``numpy.einsum`` over rational arrays with an exact result."""

    ints = []
    den = 1
    for arr in arrays:
        i, d = integerize(arr)
        ints.append(i)
        den *= d
    return fractions_of(int_einsum(spec, *ints), den)


def first_nonzero(arr: np.ndarray) -> Optional[Tuple[int, ...]]:
    """Lexicographically smallest index holding a nonzero entry."""

    mask = np.asarray(np.asarray(arr) != 0, dtype=bool)
    hits = np.argwhere(mask)
    if hits.size == 0:
        return None
    return tuple(int(i) for i in hits[0])


def is_zero(arr: np.ndarray) -> bool:
    return first_nonzero(arr) is None


def arrays_equal(a: np.ndarray, b: np.ndarray) -> bool:
    if np.shape(a) != np.shape(b):
        return False
    return is_zero(np.asarray(a, dtype=object) - np.asarray(b, dtype=object))
