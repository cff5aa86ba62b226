"""Representations of Lie triple systems and semidirect products.

``theta[i, j, a, b]`` is the ``(a, b)`` entry of the matrix ``θ(e_i, e_j)``
acting on the module. ``D(x, y) = θ(y, x) - θ(x, y)`` is always derived.
In the semidirect product the algebra coordinates come first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidRepresentation, NotAnLts
from .exactla import Matrix
from .lts_core import LtsStructure, _vector, check_lts_axioms
from .reports import Report, check_residual
from .tensors import arrays_equal, as_fraction_array, exact_einsum, frozen, zeros
from .utils import ScalarLike


@dataclass(frozen=True, eq=False)
class LtsRepresentation:
    algebra: LtsStructure
    module_dim: int
    theta: np.ndarray

    def __post_init__(self) -> None:
        n, m = self.algebra.dim, self.module_dim
        theta = as_fraction_array(self.theta)
        if theta.shape != (n, n, m, m):
            raise DimensionMismatch(f"theta of shape {theta.shape}, expected {(n, n, m, m)}")
        object.__setattr__(self, "theta", frozen(theta))

    @property
    def d(self) -> np.ndarray:
        return d_tensor(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LtsRepresentation):
            return NotImplemented
        return (
            self.module_dim == other.module_dim
            and self.algebra == other.algebra
            and arrays_equal(self.theta, other.theta)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class LtsRepPair:
    algebra: LtsStructure
    rep: LtsRepresentation

    def __post_init__(self) -> None:
        if self.rep.algebra is not self.algebra and self.rep.algebra != self.algebra:
            raise InvalidRepresentation("representation belongs to a different algebra")

    @classmethod
    def of(cls, rep: LtsRepresentation) -> "LtsRepPair":
        return cls(rep.algebra, rep)

    @property
    def source_dim(self) -> int:
        return self.algebra.dim

    @property
    def module_dim(self) -> int:
        return self.rep.module_dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LtsRepPair):
            return NotImplemented
        return self.rep == other.rep

    __hash__ = None  # type: ignore[assignment]


def d_tensor(r: LtsRepresentation) -> np.ndarray:
    theta = r.theta
    return theta.transpose(1, 0, 2, 3) - theta


def theta_of(r: LtsRepresentation, x: Sequence[ScalarLike], y: Sequence[ScalarLike]) -> Matrix:
    n = r.algebra.dim
    return Matrix.from_array(exact_einsum("i,j,ijab->ab", _vector(x, n), _vector(y, n), r.theta))


def derived_D(r: LtsRepresentation, x: Sequence[ScalarLike], y: Sequence[ScalarLike]) -> Matrix:
    n = r.algebra.dim
    return Matrix.from_array(exact_einsum("i,j,ijab->ab", _vector(x, n), _vector(y, n), d_tensor(r)))


def zero_rep(a: LtsStructure, module_dim: int) -> LtsRepresentation:
    return LtsRepresentation(a, module_dim, zeros((a.dim, a.dim, module_dim, module_dim)))


def adjoint_rep(a: LtsStructure) -> LtsRepresentation:
    """``θ(x, y) z = [z, x, y]``."""

    report = check_lts_axioms(a)
    if not report.passed:
        raise NotAnLts(f"not a Lie triple system: {report.first_failure().to_dict()}")
    return LtsRepresentation(a, a.dim, exact_einsum("bija->ijab", a.c))


def check_rep_axioms(r: LtsRepresentation) -> Report:
    theta = r.theta
    d = d_tensor(r)
    c = r.algebra.c
    # θ(z,t)θ(x,y) - θ(y,t)θ(x,z) - θ(x,[y,z,t]) + D(y,z)θ(x,t) = 0
    first = (
        exact_einsum("ztac,xycb->xyztab", theta, theta)
        - exact_einsum("ytac,xzcb->xyztab", theta, theta)
        - exact_einsum("yztl,xlab->xyztab", c, theta)
        + exact_einsum("yzac,xtcb->xyztab", d, theta)
    )
    # θ(z,t)D(x,y) - D(x,y)θ(z,t) + θ([x,y,z],t) + θ(z,[x,y,t]) = 0
    second = (
        exact_einsum("ztac,xycb->xyztab", theta, d)
        - exact_einsum("xyac,ztcb->xyztab", d, theta)
        + exact_einsum("xyzl,ltab->xyztab", c, theta)
        + exact_einsum("xytl,zlab->xyztab", c, theta)
    )
    labels = ("x", "y", "z", "t")
    zero = zeros(first.shape)
    return Report(
        "rep_axioms",
        (
            check_residual("theta_composition", first, zero, 4, labels),
            check_residual("theta_derivation", second, zero, 4, labels),
        ),
        {"dim": r.algebra.dim, "module_dim": r.module_dim},
    )


def semidirect_tensor(p: LtsRepPair) -> np.ndarray:
    """``[x+u, y+v, z+w] = [x,y,z] + θ(y,z)u - θ(x,z)v + D(x,y)w`` on L (+) V."""

    n, m = p.source_dim, p.module_dim
    theta = p.rep.theta
    total = n + m
    out = zeros((total,) * 4)
    out[:n, :n, :n, :n] = p.algebra.c
    out[n:, :n, :n, n:] = exact_einsum("jkba->ajkb", theta)
    out[:n, n:, :n, n:] = -exact_einsum("ikba->iakb", theta)
    out[:n, :n, n:, n:] = exact_einsum("ijba->ijab", d_tensor(p.rep))
    return out


def semidirect_product(p: LtsRepPair, validate: bool = True) -> LtsStructure:
    if validate:
        report = check_rep_axioms(p.rep)
        if not report.passed:
            raise InvalidRepresentation(f"representation axioms fail: {report.first_failure().to_dict()}")
    return LtsStructure(p.source_dim + p.module_dim, semidirect_tensor(p))
