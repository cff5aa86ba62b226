"""Lie triple systems and Lie algebras as structure-constant tensors.

``c[i, j, k, l]`` is the coefficient of ``e_l`` in ``[e_i, e_j, e_k]`` and
``b[i, j, k]`` the coefficient of ``e_k`` in ``[e_i, e_j]``. Both tensors are
stored in full; antisymmetry in the first two slots is enforced when a
structure is built.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatch, NotALieAlgebra, NotAnLts
from .exactla import Matrix, Vector
from .reports import Report, check_residual
from .tensors import arrays_equal, as_fraction_array, exact_einsum, first_nonzero, frozen, zeros
from .utils import ScalarLike, parse_scalar

logger = logging.getLogger(__name__)

TripleKey = Tuple[int, int, int]


def basis_vector(n: int, i: int) -> Vector:
    if not 0 <= i < n:
        raise DimensionMismatch(f"basis index {i} out of range for dimension {n}")
    return tuple(Fraction(int(k == i)) for k in range(n))


def _vector(v: Sequence[ScalarLike], n: int, what: str = "vector") -> np.ndarray:
    if len(v) != n:
        raise DimensionMismatch(f"{what} of length {len(v)}, expected {n}")
    return as_fraction_array(list(v))


def _complete(
    shape: Tuple[int, ...], entries: Iterable[Tuple[Tuple[int, ...], Mapping[int, ScalarLike]]], error
) -> np.ndarray:
    """Fill a tensor from listed entries, adding the slot-swapped negatives."""

    dim = shape[0]
    out = zeros(shape)
    assigned: Dict[Tuple[int, ...], bool] = {}
    for args, value in entries:
        args = tuple(int(a) for a in args)
        for a in args:
            if not 0 <= a < dim:
                raise DimensionMismatch(f"index {a} out of range in {args}")
        vec = [Fraction(0)] * shape[-1]
        for l, coeff in value.items():
            l = int(l)
            if not 0 <= l < shape[-1]:
                raise DimensionMismatch(f"value index {l} out of range in {args}")
            vec[l] = parse_scalar(coeff)
        swapped = (args[1], args[0]) + args[2:]
        for key, sign in ((args, 1), (swapped, -1)):
            target = [sign * x for x in vec]
            if key in assigned and list(out[key]) != target:
                raise error(f"conflicting values for {key}")
            out[key] = np.array(target, dtype=object)
            assigned[key] = True
    return out


# ---------------------------------------------------------------------------
# Lie triple systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LtsStructure:
    dim: int
    c: np.ndarray

    def __post_init__(self) -> None:
        c = as_fraction_array(self.c)
        n = self.dim
        if c.shape != (n, n, n, n):
            raise DimensionMismatch(f"structure constants of shape {c.shape} for dimension {n}")
        hit = first_nonzero(c + c.transpose(1, 0, 2, 3))
        if hit is not None:
            raise NotAnLts(f"bracket is not antisymmetric in its first two slots at {hit[:3]}")
        object.__setattr__(self, "c", frozen(c))

    @classmethod
    def from_table(cls, dim: int, entries: Iterable[Tuple[TripleKey, Mapping[int, ScalarLike]]]) -> "LtsStructure":
        return cls(dim, _complete((dim,) * 4, entries, NotAnLts))

    @classmethod
    def zero(cls, dim: int) -> "LtsStructure":
        return cls(dim, zeros((dim,) * 4))

    def table(self) -> List[Tuple[TripleKey, Dict[int, Fraction]]]:
        """Nonzero brackets with ``i < j``, the form used in documents."""

        rows = []
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    value = {l: self.c[i, j, k, l] for l in range(n) if self.c[i, j, k, l]}
                    if value:
                        rows.append(((i, j, k), value))
        return rows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LtsStructure):
            return NotImplemented
        return self.dim == other.dim and arrays_equal(self.c, other.c)

    __hash__ = None  # type: ignore[assignment]


def bracket(a: LtsStructure, x: Sequence[ScalarLike], y: Sequence[ScalarLike], z: Sequence[ScalarLike]) -> Vector:
    n = a.dim
    out = exact_einsum("i,j,k,ijkl->l", _vector(x, n), _vector(y, n), _vector(z, n), a.c)
    return tuple(out.tolist())


def check_lts_axioms(a: LtsStructure) -> Report:
    c = a.c
    n = a.dim
    swapped = c.transpose(1, 0, 2, 3)
    antisym = check_residual("slot_antisymmetry", c, -swapped, 3, ("x", "y", "z"))

    cyclic_sum = c + exact_einsum("jkil->ijkl", c) + exact_einsum("kijl->ijkl", c)
    cyclic = check_residual("cyclic", cyclic_sum, zeros(c.shape), 3, ("x", "y", "z"))

    # [x,y,[z,t,e]] = [[x,y,z],t,e] + [z,[x,y,t],e] + [z,t,[x,y,e]]
    lhs = exact_einsum("ztel,xylm->xyztem", c, c)
    rhs = (
        exact_einsum("xyzl,ltem->xyztem", c, c)
        + exact_einsum("xytl,zlem->xyztem", c, c)
        + exact_einsum("xyel,ztlm->xyztem", c, c)
    )
    derivation = check_residual("derivation", lhs, rhs, 5, ("x", "y", "z", "t", "e"))
    return Report("lts_axioms", (antisym, cyclic, derivation), {"dim": n})


@dataclass(frozen=True)
class AlgebraMorphism:
    source: LtsStructure
    target: LtsStructure
    matrix: Matrix


def check_lts_morphism(m: AlgebraMorphism) -> Report:
    f = m.matrix
    if (f.rows, f.cols) != (m.target.dim, m.source.dim):
        raise DimensionMismatch(
            f"morphism matrix is {f.rows}x{f.cols}, expected {m.target.dim}x{m.source.dim}"
        )
    arr = f.to_array()
    lhs = exact_einsum("ijkl,ml->ijkm", m.source.c, arr)
    rhs = exact_einsum("ai,bj,ck,abcm->ijkm", arr, arr, arr, m.target.c)
    return Report("lts_morphism", (check_residual("preserves_bracket", lhs, rhs, 3, ("x", "y", "z")),))


def check_derivation(a: LtsStructure, m: np.ndarray) -> Report:
    """Check that the ``n x n`` matrix ``m`` is a derivation of the bracket."""

    c = a.c
    m = as_fraction_array(m)
    lhs = exact_einsum("ijkl,ml->ijkm", c, m)
    rhs = (
        exact_einsum("ai,ajkm->ijkm", m, c)
        + exact_einsum("aj,iakm->ijkm", m, c)
        + exact_einsum("ak,ijam->ijkm", m, c)
    )
    return Report("derivation", (check_residual("leibniz", lhs, rhs, 3, ("x", "y", "z")),))


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieStructure:
    dim: int
    b: np.ndarray

    def __post_init__(self) -> None:
        b = as_fraction_array(self.b)
        n = self.dim
        if b.shape != (n, n, n):
            raise DimensionMismatch(f"structure constants of shape {b.shape} for dimension {n}")
        hit = first_nonzero(b + b.transpose(1, 0, 2))
        if hit is not None:
            raise NotALieAlgebra(f"bracket is not antisymmetric at {hit[:2]}")
        object.__setattr__(self, "b", frozen(b))

    @classmethod
    def from_table(cls, dim: int, entries: Iterable[Tuple[Tuple[int, int], Mapping[int, ScalarLike]]]) -> "LieStructure":
        return cls(dim, _complete((dim,) * 3, entries, NotALieAlgebra))

    @classmethod
    def zero(cls, dim: int) -> "LieStructure":
        return cls(dim, zeros((dim,) * 3))

    def table(self) -> List[Tuple[Tuple[int, int], Dict[int, Fraction]]]:
        rows = []
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                value = {k: self.b[i, j, k] for k in range(n) if self.b[i, j, k]}
                if value:
                    rows.append(((i, j), value))
        return rows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieStructure):
            return NotImplemented
        return self.dim == other.dim and arrays_equal(self.b, other.b)

    __hash__ = None  # type: ignore[assignment]


def lie_bracket(g: LieStructure, x: Sequence[ScalarLike], y: Sequence[ScalarLike]) -> Vector:
    n = g.dim
    return tuple(exact_einsum("i,j,ijk->k", _vector(x, n), _vector(y, n), g.b).tolist())


def check_lie_axioms(g: LieStructure) -> Report:
    b = g.b
    antisym = check_residual("antisymmetry", b, -b.transpose(1, 0, 2), 2, ("x", "y"))
    # [[x,y],z] + [[y,z],x] + [[z,x],y]
    jacobi = (
        exact_einsum("xyl,lzm->xyzm", b, b)
        + exact_einsum("yzl,lxm->xyzm", b, b)
        + exact_einsum("zxl,lym->xyzm", b, b)
    )
    return Report(
        "lie_axioms",
        (antisym, check_residual("jacobi", jacobi, zeros(jacobi.shape), 3, ("x", "y", "z"))),
        {"dim": g.dim},
    )


def lie_to_lts(g: LieStructure) -> LtsStructure:
    """The triple system ``[x, y, z] = [[x, y], z]`` of a Lie algebra."""

    report = check_lie_axioms(g)
    if not report.passed:
        raise NotALieAlgebra(f"Jacobi identity fails: {report.first_failure().to_dict()}")
    return LtsStructure(g.dim, exact_einsum("ijm,mkl->ijkl", g.b, g.b))


# ---------------------------------------------------------------------------
# Bivectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Bivector:
    """``sum_{i<j} coeffs[i, j] e_i ^ e_j``; ``e_i ^ e_j`` acts as the pair (e_i, e_j)."""

    dim: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        k = as_fraction_array(self.coeffs)
        if k.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"bivector coefficients of shape {k.shape} for dimension {self.dim}")
        if first_nonzero(k + k.T) is not None:
            raise DimensionMismatch("bivector coefficients must be antisymmetric")
        object.__setattr__(self, "coeffs", frozen(k))

    @classmethod
    def zero(cls, dim: int) -> "Bivector":
        return cls(dim, zeros((dim, dim)))

    @classmethod
    def from_pairs(cls, dim: int, pairs: Mapping[Tuple[int, int], ScalarLike]) -> "Bivector":
        k = zeros((dim, dim))
        for (i, j), value in pairs.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatch(f"pair {(i, j)} out of range for dimension {dim}")
            q = parse_scalar(value)
            if i == j:
                if q:
                    raise DimensionMismatch(f"e_{i}^e_{i} vanishes; got coefficient {q}")
                continue
            k[i, j] += q
            k[j, i] -= q
        return cls(dim, k)

    @classmethod
    def from_vector(cls, dim: int, vector: Sequence[ScalarLike]) -> "Bivector":
        pairs = pair_basis(dim)
        if len(vector) != len(pairs):
            raise DimensionMismatch(f"{len(vector)} coordinates for {len(pairs)} wedge pairs")
        return cls.from_pairs(dim, dict(zip(pairs, vector)))

    @classmethod
    def basis(cls, dim: int) -> List["Bivector"]:
        return [cls.from_pairs(dim, {p: 1}) for p in pair_basis(dim)]

    def to_vector(self) -> Vector:
        return tuple(self.coeffs[i, j] for i, j in pair_basis(self.dim))

    def upper(self) -> np.ndarray:
        return np.triu(self.coeffs, 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bivector):
            return NotImplemented
        return self.dim == other.dim and arrays_equal(self.coeffs, other.coeffs)

    __hash__ = None  # type: ignore[assignment]


def pair_basis(dim: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(dim) for j in range(i + 1, dim)]


def bivector_operator(a: LtsStructure, x: Bivector) -> np.ndarray:
    """Matrix of ``z -> [X, z]`` (column ``z`` is the image of ``e_z``)."""

    if x.dim != a.dim:
        raise DimensionMismatch(f"bivector on dimension {x.dim}, algebra has {a.dim}")
    return exact_einsum("ij,ijzl->lz", x.upper(), a.c)


def adjoint_action(a: LtsStructure, x: Bivector, z: Sequence[ScalarLike]) -> Vector:
    op = bivector_operator(a, x)
    return tuple(exact_einsum("lz,z->l", op, _vector(z, a.dim)).tolist())
