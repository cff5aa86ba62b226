"""From Lie algebras to Lie triple systems.

A representation ``ρ`` of a Lie algebra gives the triple-system
representation ``θ_ρ(x, y) = ρ(y)ρ(x)`` of ``[x, y, z] = [[x, y], z]``.
Chevalley-Eilenberg cocycles and O-operators carry over along this
construction; every transfer here returns its verdict next to the
transferred object.

``rho[i, a, b]`` is the ``(a, b)`` entry of ``ρ(e_i)``. Chevalley-Eilenberg
cochains are fully antisymmetric value tensors; their coordinates are the
values at strictly increasing index tuples.
"""

from __future__ import annotations

import functools
import itertools
import logging
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import (
    Cochain,
    CoboundaryMatrix,
    CohomologyReport,
    apply_yamaguti,
    check_cocycle,
    check_o_cocycle,
    cohomology_from_matrices,
    induced_bracket,
    induced_pair,
)
from .errors import (
    DimensionMismatch,
    InvalidRepresentation,
    NotACocycle,
    NotALieAlgebra,
    NotALieOOperator,
    NotAnOOperator,
    NotContained,
)
from .exactla import Matrix, matmul
from .exactla import zeros as zero_matrix
from .lts_core import LieStructure, check_lie_axioms, lie_to_lts
from .operators import OOperator, check_o_operator
from .reports import Check, Report, as_check, check_flag, check_residual
from .reps import LtsRepPair, LtsRepresentation, check_rep_axioms, semidirect_tensor
from .tensors import (
    arrays_equal,
    as_fraction_array,
    common_integers,
    exact_einsum,
    first_nonzero,
    fractions_of,
    frozen,
    int_einsum,
    int_sum,
    integerize,
    zeros,
)

logger = logging.getLogger(__name__)

CE_CONVENTION = "complex starts at C^0; B^0 = 0"

_ARGS = string.ascii_lowercase[:20]


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieRepresentation:
    algebra: LieStructure
    module_dim: int
    rho: np.ndarray

    def __post_init__(self) -> None:
        n, m = self.algebra.dim, self.module_dim
        rho = as_fraction_array(self.rho)
        if rho.shape != (n, m, m):
            raise DimensionMismatch(f"rho of shape {rho.shape}, expected {(n, m, m)}")
        object.__setattr__(self, "rho", frozen(rho))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieRepresentation):
            return NotImplemented
        return (
            self.module_dim == other.module_dim
            and self.algebra == other.algebra
            and arrays_equal(self.rho, other.rho)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class LieRepPair:
    algebra: LieStructure
    rep: LieRepresentation

    def __post_init__(self) -> None:
        if self.rep.algebra is not self.algebra and self.rep.algebra != self.algebra:
            raise InvalidRepresentation("representation belongs to a different Lie algebra")

    @classmethod
    def of(cls, rep: LieRepresentation) -> "LieRepPair":
        return cls(rep.algebra, rep)

    @property
    def source_dim(self) -> int:
        return self.algebra.dim

    @property
    def module_dim(self) -> int:
        return self.rep.module_dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieRepPair):
            return NotImplemented
        return self.rep == other.rep

    __hash__ = None  # type: ignore[assignment]


@functools.lru_cache(maxsize=None)
def _signed_permutations(p: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    out = []
    for perm in itertools.permutations(range(p)):
        inversions = sum(1 for i in range(p) for j in range(i + 1, p) if perm[i] > perm[j])
        out.append((perm, -1 if inversions % 2 else 1))
    return tuple(out)


@dataclass(frozen=True)
class LieCochainSpace:
    degree: int
    source_dim: int
    target_dim: int

    def __post_init__(self) -> None:
        if self.degree < 0:
            raise DimensionMismatch(f"negative degree {self.degree}")

    @property
    def raw_shape(self) -> Tuple[int, ...]:
        return (self.source_dim,) * self.degree + (self.target_dim,)

    @property
    def combos(self) -> List[Tuple[int, ...]]:
        return list(itertools.combinations(range(self.source_dim), self.degree))

    @property
    def dim(self) -> int:
        return len(self.combos) * self.target_dim

    def basis_ints(self, start: int, stop: int) -> Tuple[np.ndarray, int]:
        combos = self.combos
        raw = np.zeros((stop - start,) + self.raw_shape, dtype=np.int64)
        for row, ident in enumerate(range(start, stop)):
            k, a = divmod(ident, self.target_dim)
            for perm, sign in _signed_permutations(self.degree):
                raw[(row,) + tuple(combos[k][i] for i in perm) + (a,)] = sign
        return raw, 1

    def iter_basis(self, chunk: int = 64) -> Iterator[Tuple[np.ndarray, int]]:
        for start in range(0, self.dim, chunk):
            yield self.basis_ints(start, min(start + chunk, self.dim))

    def violation(self, raw: np.ndarray) -> Optional[Tuple[int, ...]]:
        for k in range(self.degree - 1):
            hit = first_nonzero(raw + np.swapaxes(raw, 1 + k, 2 + k))
            if hit is not None:
                return hit
        return None

    def coordinate_ints(self, raw: np.ndarray) -> np.ndarray:
        count = raw.shape[0]
        if self.degree == 0:
            return raw.reshape(count, -1)
        combos = self.combos
        if not combos:
            return np.zeros((count, 0), dtype=np.int64)
        index = tuple(np.array(col) for col in zip(*combos))
        return raw[(slice(None),) + index].reshape(count, -1)

    def cochain(self, coords: Sequence) -> "LieCochain":
        coords = as_fraction_array(list(coords))
        if coords.shape != (self.dim,):
            raise DimensionMismatch(f"{coords.shape[0]} coordinates for a space of dimension {self.dim}")
        values = zeros(self.raw_shape)
        for j in np.flatnonzero(coords != 0):
            ints, den = self.basis_ints(int(j), int(j) + 1)
            values = values + coords[j] * fractions_of(ints[0], den)
        return LieCochain(self.degree, self.source_dim, self.target_dim, values)

    def basis(self) -> List["LieCochain"]:
        out = []
        for ints, den in self.iter_basis():
            for one in ints:
                out.append(LieCochain(self.degree, self.source_dim, self.target_dim, fractions_of(one, den)))
        return out


@dataclass(frozen=True, eq=False)
class LieCochain:
    degree: int
    source_dim: int
    target_dim: int
    values: np.ndarray

    def __post_init__(self) -> None:
        values = as_fraction_array(self.values)
        space = self.space
        if values.shape != space.raw_shape:
            raise DimensionMismatch(f"cochain values of shape {values.shape}, expected {space.raw_shape}")
        ints, _ = integerize(values)
        hit = space.violation(ints[np.newaxis])
        if hit is not None:
            raise NotContained(f"cochain is not alternating at {hit[1:]}")
        object.__setattr__(self, "values", frozen(values))

    @property
    def space(self) -> LieCochainSpace:
        return LieCochainSpace(self.degree, self.source_dim, self.target_dim)

    @classmethod
    def zero(cls, degree: int, source_dim: int, target_dim: int) -> "LieCochain":
        return cls(degree, source_dim, target_dim, zeros((source_dim,) * degree + (target_dim,)))

    def coordinates(self) -> Tuple[Fraction, ...]:
        ints, den = integerize(self.values)
        return tuple(fractions_of(self.space.coordinate_ints(ints[np.newaxis]), den).reshape(-1).tolist())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieCochain):
            return NotImplemented
        return self.degree == other.degree and arrays_equal(self.values, other.values)

    __hash__ = None  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------

def adjoint_lie_rep(g: LieStructure) -> LieRepresentation:
    """``ρ(x)z = [x, z]``."""

    return LieRepresentation(g, g.dim, exact_einsum("xba->xab", g.b))


def check_lie_rep(r: LieRepresentation) -> Report:
    rho = r.rho
    lhs = exact_einsum("xyk,kab->xyab", r.algebra.b, rho)
    rhs = exact_einsum("xac,ycb->xyab", rho, rho) - exact_einsum("yac,xcb->xyab", rho, rho)
    return Report(
        "lie_rep",
        (check_residual("bracket_to_commutator", lhs, rhs, 2, ("x", "y")),),
        {"dim": r.algebra.dim, "module_dim": r.module_dim},
    )


def _require_lie_rep(p: LieRepPair) -> None:
    jacobi = check_lie_axioms(p.algebra)
    if not jacobi.passed:
        raise NotALieAlgebra(f"not a Lie algebra: {jacobi.first_failure().to_dict()}")
    report = check_lie_rep(p.rep)
    if not report.passed:
        raise InvalidRepresentation(f"not a representation: {report.first_failure().to_dict()}")


def lie_semidirect(p: LieRepPair) -> LieStructure:
    """``[x+u, y+v] = [x, y] + ρ(x)v - ρ(y)u`` on L (+) V."""

    n, m = p.source_dim, p.module_dim
    out = zeros((n + m,) * 3)
    out[:n, :n, :n] = p.algebra.b
    out[:n, n:, n:] = exact_einsum("xav->xva", p.rep.rho)
    out[n:, :n, n:] = -exact_einsum("yau->uya", p.rep.rho)
    return LieStructure(n + m, out)


# ---------------------------------------------------------------------------
# Chevalley-Eilenberg cohomology
# ---------------------------------------------------------------------------

def _ce_ints(b: np.ndarray, rho: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``∂f(x_1..x_{p+1})`` on a batch ``f[B, x_1..x_p, value]`` of raw integer cochains."""

    p = f.ndim - 2
    x = _ARGS[: p + 1]
    out = "Z" + x + "Y"
    terms = []
    for i in range(p + 1):
        rest = x[:i] + x[i + 1:]
        terms.append(((-1) ** i, int_einsum(f"Z{rest}R,{x[i]}YR->{out}", f, rho)))
        for j in range(i + 1, p + 1):
            rest2 = "".join(ch for k, ch in enumerate(x) if k not in (i, j))
            terms.append(((-1) ** (i + j), int_einsum(f"{x[i]}{x[j]}Q,ZQ{rest2}Y->{out}", b, f)))
    return int_sum(terms)


def _ce_matrix(b: np.ndarray, rho: np.ndarray, degree: int) -> CoboundaryMatrix:
    n, m = rho.shape[0], rho.shape[1]
    domain = LieCochainSpace(degree, n, m)
    codomain = LieCochainSpace(degree + 1, n, m)
    if domain.dim == 0 or codomain.dim == 0:
        return CoboundaryMatrix(degree, degree + 1, zero_matrix(codomain.dim, domain.dim), domain, codomain)
    (b_ints, rho_ints), den = common_integers(b, rho)
    blocks = []
    for raw, _ in domain.iter_basis():
        image = _ce_ints(b_ints, rho_ints, raw)
        hit = codomain.violation(image)
        if hit is not None:
            raise NotContained(f"∂^{degree} image is not alternating at {hit}")
        blocks.append(codomain.coordinate_ints(image))
    columns = fractions_of(np.concatenate(blocks, axis=0), den)
    return CoboundaryMatrix(degree, degree + 1, Matrix.from_array(columns.T), domain, codomain)


def ce_coboundary(p: LieRepPair, degree: int, validate: bool = True) -> CoboundaryMatrix:
    if validate:
        _require_lie_rep(p)
    return _ce_matrix(p.algebra.b, p.rep.rho, degree)


def apply_ce(p: LieRepPair, f: LieCochain) -> LieCochain:
    (b_ints, rho_ints), den = common_integers(p.algebra.b, p.rep.rho)
    f_ints, f_den = integerize(f.values)
    image = _ce_ints(b_ints, rho_ints, f_ints[np.newaxis])
    return LieCochain(f.degree + 1, f.source_dim, f.target_dim, fractions_of(image[0], den * f_den))


def check_ce_square_zero(p: LieRepPair, degree: int) -> Report:
    _require_lie_rep(p)
    first = ce_coboundary(p, degree, validate=False).matrix
    second = ce_coboundary(p, degree + 1, validate=False).matrix
    hit = first_nonzero(matmul(second, first).to_array())
    return Report("ce_square_zero", (check_flag("square_zero", hit is None, hit or ()),), {"degree": degree})


def ce_cohomology(p: LieRepPair, degree: int) -> CohomologyReport:
    _require_lie_rep(p)
    outgoing = ce_coboundary(p, degree, validate=False).matrix
    incoming = ce_coboundary(p, degree - 1, validate=False).matrix if degree >= 1 else None
    return cohomology_from_matrices(outgoing, incoming, degree, "chevalley-eilenberg", CE_CONVENTION)


# ---------------------------------------------------------------------------
# O-operators on Lie algebras
# ---------------------------------------------------------------------------

def _lie_product(p: LieRepPair, T: np.ndarray) -> np.ndarray:
    """``[u, v]_T = ρ(Tu)v - ρ(Tv)u`` indexed ``[u, v, a]``."""

    rho = p.rep.rho
    return exact_einsum("iu,iav->uva", T, rho) - exact_einsum("iv,iau->uva", T, rho)


def check_lie_o_operator(p: LieRepPair, T: Matrix) -> Report:
    """``[Tu, Tv] = T(ρ(Tu)v - ρ(Tv)u)``."""

    n, m = p.source_dim, p.module_dim
    if (T.rows, T.cols) != (n, m):
        raise DimensionMismatch(f"operator is {T.rows}x{T.cols}, expected {n}x{m}")
    t = T.to_array()
    lhs = exact_einsum("iu,jv,ijl->uvl", t, t, p.algebra.b)
    rhs = exact_einsum("la,uva->uvl", t, _lie_product(p, t))
    return Report("lie_o_operator", (check_residual("o_identity", lhs, rhs, 2, ("u", "v")),))


@dataclass(frozen=True)
class LieInducedStructures:
    """``(V, [-,-]_T)`` and its representation ``ρ_T(u)x = [Tu, x] + Tρ(x)u`` on L."""

    bracket: LieStructure
    rep: LieRepresentation

    @property
    def pair(self) -> LieRepPair:
        return LieRepPair(self.bracket, self.rep)

    def coboundary(self, degree: int) -> CoboundaryMatrix:
        return ce_coboundary(self.pair, degree, validate=False)


def lie_induced_structures(p: LieRepPair, T: Matrix) -> LieInducedStructures:
    report = check_lie_o_operator(p, T)
    if not report.passed:
        raise NotAnOOperator(f"not an O-operator: {report.first_failure().to_dict()}")
    t = T.to_array()
    bracket = LieStructure(p.module_dim, _lie_product(p, t))
    rho_t = exact_einsum("iu,ixl->ulx", t, p.algebra.b) + exact_einsum("la,xau->ulx", t, p.rep.rho)
    return LieInducedStructures(bracket, LieRepresentation(bracket, p.source_dim, rho_t))


def check_lie_induced_structures(p: LieRepPair, T: Matrix) -> Report:
    induced = lie_induced_structures(p, T)
    jacobi = check_lie_axioms(induced.bracket)
    rep = check_lie_rep(induced.rep)
    checks = [as_check("jacobi", jacobi), as_check("rep", rep)]
    if jacobi.passed and rep.passed:
        for degree in (0, 1):
            square = check_ce_square_zero(induced.pair, degree)
            checks.append(Check(f"square_zero_{degree}", square.passed))
    return Report("lie_induced_structures", tuple(checks))


def lie_o_operator_cohomology(p: LieRepPair, T: Matrix, degree: int) -> CohomologyReport:
    induced = lie_induced_structures(p, T)
    report = ce_cohomology(induced.pair, degree)
    return CohomologyReport(
        report.degree,
        report.dim_cocycles,
        report.dim_coboundaries,
        report.dim_H,
        report.cochain_dim,
        "lie-o-operator",
        report.convention,
    )


# ---------------------------------------------------------------------------
# Transfer to Lie triple systems
# ---------------------------------------------------------------------------

def theta_from_rho(rho: np.ndarray) -> np.ndarray:
    """``θ_ρ(x, y) = ρ(y)ρ(x)``."""

    return exact_einsum("jac,icb->ijab", rho, rho)


def lts_rep_from_lie(p: LieRepPair) -> LtsRepPair:
    _require_lie_rep(p)
    algebra = lie_to_lts(p.algebra)
    rep = LtsRepresentation(algebra, p.module_dim, theta_from_rho(p.rep.rho))
    report = check_rep_axioms(rep)
    if not report.passed:
        raise InvalidRepresentation(f"transferred representation fails: {report.first_failure().to_dict()}")
    return LtsRepPair(algebra, rep)


def check_semidirect_compatibility(p: LieRepPair) -> Report:
    """The triple semidirect product is the triple system of the Lie semidirect product."""

    pair = lts_rep_from_lie(p)
    direct = semidirect_tensor(pair)
    via_lie = lie_to_lts(lie_semidirect(p)).c
    return Report("semidirect_compatibility", (check_residual("brackets_agree", direct, via_lie, 3, ("x", "y", "z")),))


def yamaguti_from_ce(f: LieCochain) -> Cochain:
    if f.degree != 1:
        raise DimensionMismatch(f"only degree-1 cochains carry over unchanged, got degree {f.degree}")
    return Cochain(1, f.source_dim, f.target_dim, f.values)


def ce_from_yamaguti(f: Cochain) -> LieCochain:
    if f.degree != 1:
        raise DimensionMismatch(f"only degree-1 cochains carry over unchanged, got degree {f.degree}")
    return LieCochain(1, f.source_dim, f.target_dim, f.values)


@dataclass(frozen=True)
class Transfer:
    """A transferred object with the report verifying it."""

    value: object
    report: Report

    @property
    def passed(self) -> bool:
        return self.report.passed


def _require_ce_cocycle(p: LieRepPair, f: LieCochain) -> None:
    image = apply_ce(p, f).values
    hit = first_nonzero(image)
    if hit is not None:
        raise NotACocycle(f"∂ of the degree-{f.degree} cochain is nonzero at {hit}")


def transfer_1cocycle(p: LieRepPair, f: LieCochain) -> Transfer:
    _require_lie_rep(p)
    _require_ce_cocycle(p, f)
    cochain = yamaguti_from_ce(f)
    return Transfer(cochain, check_cocycle(lts_rep_from_lie(p), cochain))


def omega_from_2cochain(p: LieRepPair, phi: LieCochain) -> Cochain:
    """``ω(x, y, z) = φ([x, y], z) - ρ(z)φ(x, y)``."""

    if phi.degree != 2:
        raise DimensionMismatch(f"expected a 2-cochain, got degree {phi.degree}")
    values = exact_einsum("xyq,qza->xyza", p.algebra.b, phi.values) - exact_einsum(
        "zab,xyb->xyza", p.rep.rho, phi.values
    )
    return Cochain(3, phi.source_dim, phi.target_dim, values)


def transfer_2cocycle(p: LieRepPair, phi: LieCochain) -> Transfer:
    _require_lie_rep(p)
    _require_ce_cocycle(p, phi)
    omega = omega_from_2cochain(p, phi)
    return Transfer(omega, check_cocycle(lts_rep_from_lie(p), omega))


def check_associated_coboundary(p: LieRepPair, alpha: LieCochain) -> Report:
    """``δ¹(α)(x, y, z) = ∂α([x, y], z) - ρ(z)∂α(x, y)``."""

    pair = lts_rep_from_lie(p)
    lhs = apply_yamaguti(pair, yamaguti_from_ce(alpha)).values
    rhs = omega_from_2cochain(p, apply_ce(p, alpha)).values
    return Report("associated_coboundary", (check_residual("delta_matches_omega", lhs, rhs, 3, ("x", "y", "z")),))


def transfer_o_operator(p: LieRepPair, T: Matrix) -> Transfer:
    lie_report = check_lie_o_operator(p, T)
    if not lie_report.passed:
        raise NotALieOOperator(f"not an O-operator on the Lie pair: {lie_report.first_failure().to_dict()}")
    pair = lts_rep_from_lie(p)
    t = OOperator(pair, T)
    o_report = check_o_operator(t)
    checks = [as_check("o_identity", o_report)]
    if o_report.passed:
        direct = induced_bracket(t).c
        via_lie = lie_to_lts(lie_induced_structures(p, T).bracket).c
        checks.append(check_residual("two_routes_agree", direct, via_lie, 3, ("u", "v", "w")))
    return Transfer(t, Report("transfer_o_operator", tuple(checks)))


def transfer_T_cocycles(p: LieRepPair, T: Matrix, f: LieCochain) -> Transfer:
    """Carry a 1- or 2-cocycle of the Lie O-operator ``T`` to the triple-system side."""

    transferred = transfer_o_operator(p, T)
    if not transferred.passed:
        raise NotAnOOperator(f"transferred operator fails: {transferred.report.first_failure().to_dict()}")
    t = transferred.value
    induced = lie_induced_structures(p, T)
    _require_ce_cocycle(induced.pair, f)
    details = {
        "induced_reps_agree": arrays_equal(
            induced_pair(t).rep.theta, theta_from_rho(induced.rep.rho)
        ),
    }
    if f.degree == 1:
        cochain = yamaguti_from_ce(f)
        report = check_o_cocycle(t, cochain)
    elif f.degree == 2:
        cochain = omega_from_2cochain(induced.pair, f)
        report = check_cocycle(induced_pair(t), cochain)
    else:
        raise DimensionMismatch(f"only degrees 1 and 2 transfer, got {f.degree}")
    return Transfer(cochain, Report(report.title, report.checks, {**report.details, **details}))
