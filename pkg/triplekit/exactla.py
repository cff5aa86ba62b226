"""Exact linear algebra over the rationals.

Matrices hold :class:`fractions.Fraction` entries. Row reduction is done by
sympy's fraction-free elimination over ``QQ`` and the results are brought back
to ``Fraction`` so the rest of the package never sees sympy types.

Kernel and image bases are returned in reduced-echelon canonical form: every
``Subspace`` records ``leads``, positions at which its basis is the identity,
which makes coordinates a lookup and keeps golden output stable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .errors import AmbientMismatch, DimensionMismatch, NotContained
from .utils import ScalarLike, parse_scalar

logger = logging.getLogger(__name__)

Scalar = Fraction
Vector = Tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix, row-major."""

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"ragged row of length {len(r)}, expected {cols}")
        return cls(len(rows), cols, tuple(parse_scalar(x) for r in rows for x in r))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Matrix":
        arr = np.asarray(arr, dtype=object)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {arr.shape}")
        return cls(arr.shape[0], arr.shape[1], tuple(Fraction(x) for x in arr.reshape(-1).tolist()))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[ScalarLike]], rows: int) -> "Matrix":
        if not columns:
            return zeros(rows, 0)
        return transpose(cls.from_rows(columns, rows))

    def to_array(self) -> np.ndarray:
        out = np.empty(self.rows * self.cols, dtype=object)
        out[:] = list(self.entries)
        return out.reshape(self.rows, self.cols)

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def apply(self, v: Sequence[ScalarLike]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.cols} columns")
        v = [parse_scalar(x) for x in v]
        return tuple(
            sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows)
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def is_zero(self) -> bool:
        return not any(self.entries)


@dataclass(frozen=True)
class Subspace:
    """Span of ``basis`` inside QQ^ambient_dim.

    ``basis[i][leads[j]] == (i == j)`` for all i, j.
    """

    ambient_dim: int
    basis: Tuple[Vector, ...]
    leads: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[ScalarLike]) -> Vector:
        """Coordinates of ``v`` in this basis; NotContained when ``v`` is outside."""

        v = tuple(parse_scalar(x) for x in v)
        if len(v) != self.ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        coords = tuple(v[l] for l in self.leads)
        rebuilt = [Fraction(0)] * self.ambient_dim
        for c, b in zip(coords, self.basis):
            if c:
                for k, x in enumerate(b):
                    if x:
                        rebuilt[k] += c * x
        if tuple(rebuilt) != v:
            raise NotContained("vector is not in the span")
        return coords

    def contains(self, v: Sequence[ScalarLike]) -> bool:
        try:
            self.coordinates(v)
        except NotContained:
            return False
        return True


# ---------------------------------------------------------------------------
# Constructors and plumbing
# ---------------------------------------------------------------------------

def zeros(rows: int, cols: int) -> Matrix:
    return Matrix(rows, cols, (Fraction(0),) * (rows * cols))


def identity(n: int) -> Matrix:
    return Matrix(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))


def transpose(m: Matrix) -> Matrix:
    return Matrix(m.cols, m.rows, tuple(m.entries[i * m.cols + j] for j in range(m.cols) for i in range(m.rows)))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    out = []
    for i in range(a.rows):
        row = a.row(i)
        for j in range(b.cols):
            out.append(sum((row[k] * b.entries[k * b.cols + j] for k in range(a.cols) if row[k]), Fraction(0)))
    return Matrix(a.rows, b.cols, tuple(out))


def _to_domain(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    data = [[QQ(int(x.numerator), int(x.denominator)) for x in r] for r in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def _from_domain(elem) -> Fraction:
    return Fraction(int(elem.numerator), int(elem.denominator))


def _prune_rows(m: Matrix) -> List[Vector]:
    """Nonzero rows with duplicates removed; the row space is unchanged."""

    seen = set()
    kept = []
    for i in range(m.rows):
        r = m.row(i)
        if any(r) and r not in seen:
            seen.add(r)
            kept.append(r)
    return kept


def rref(m: Matrix) -> Tuple[List[Vector], Tuple[int, ...]]:
    """Nonzero rows of the reduced row echelon form and the pivot columns."""

    rows = _prune_rows(m)
    if not rows or m.cols == 0:
        return [], ()
    reduced, pivots = _to_domain(rows, m.cols).rref(method="FF")
    dense = reduced.to_list()
    out = [tuple(_from_domain(x) for x in dense[i]) for i in range(len(pivots))]
    logger.debug("rref of %dx%d (%d distinct rows): rank %d", m.rows, m.cols, len(rows), len(pivots))
    return out, tuple(int(p) for p in pivots)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Subspace:
    reduced, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return Subspace(m.cols, tuple(basis), tuple(free))


def image_basis(m: Matrix) -> Subspace:
    reduced, pivots = rref(transpose(m))
    return Subspace(m.rows, tuple(reduced), pivots)


def span(vectors: Iterable[Sequence[ScalarLike]], ambient_dim: int) -> Subspace:
    vectors = [tuple(parse_scalar(x) for x in v) for v in vectors]
    for v in vectors:
        if len(v) != ambient_dim:
            raise AmbientMismatch(f"vector of length {len(v)} in ambient {ambient_dim}")
    if not vectors:
        return Subspace(ambient_dim, (), ())
    reduced, pivots = rref(Matrix.from_rows(vectors, ambient_dim))
    return Subspace(ambient_dim, tuple(reduced), pivots)


def is_subspace(b: Subspace, z: Subspace) -> bool:
    if b.ambient_dim != z.ambient_dim:
        raise AmbientMismatch(f"ambient {b.ambient_dim} vs {z.ambient_dim}")
    return all(z.contains(v) for v in b.basis)


def quotient_dim(z: Subspace, b: Subspace) -> int:
    if z.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"ambient {z.ambient_dim} vs {b.ambient_dim}")
    for v in b.basis:
        if not z.contains(v):
            raise NotContained("coboundary vector outside the cocycle space")
    return z.dim - b.dim


def solve(m: Matrix, rhs: Sequence[ScalarLike]) -> Optional[Vector]:
    """Some ``x`` with ``m @ x == rhs``, or None when the system is inconsistent."""

    rhs = [parse_scalar(x) for x in rhs]
    if len(rhs) != m.rows:
        raise DimensionMismatch(f"rhs of length {len(rhs)} for {m.rows} rows")
    augmented = Matrix(
        m.rows,
        m.cols + 1,
        tuple(x for i in range(m.rows) for x in m.row(i) + (rhs[i],)),
    )
    reduced, pivots = rref(augmented)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(reduced, pivots):
        x[p] = row[m.cols]
    return tuple(x)


def inverse(m: Matrix) -> Optional[Matrix]:
    """Inverse of a square matrix, or None when it is singular."""

    if m.rows != m.cols:
        raise DimensionMismatch(f"{m.rows}x{m.cols} is not square")
    n = m.rows
    if n == 0:
        return m
    augmented = Matrix.from_rows([list(m.row(i)) + list(identity(n).row(i)) for i in range(n)], 2 * n)
    reduced, pivots = rref(augmented)
    if pivots[:n] != tuple(range(n)) or len(pivots) < n:
        return None
    return Matrix.from_rows([r[n:] for r in reduced[:n]], n)
