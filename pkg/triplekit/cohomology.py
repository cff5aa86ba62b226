"""Yamaguti cochain complexes and the cohomology of O-operators.

A ``(2n+1)``-cochain ``f`` is stored as its value tensor of shape
``source^(2n+1) x target``. From degree 3 on it must vanish when slots
``2n-1`` and ``2n`` (1-based) coincide and its cyclic sum over the last three
slots must vanish. Coordinates of a cochain are its values at the free
positions of the constraint kernel on the last three slots, ordered
``(prefix, free position, target)`` lexicographically.

Coboundaries are evaluated on whole batches of basis cochains at once, in
integers, with :mod:`triplekit.tensors`. Large compositions (the square-zero
property) are checked by applying ``δ`` twice to the raw tensors instead of
multiplying assembled matrices.
"""

from __future__ import annotations

import functools
import logging
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    CoboundaryError,
    DimensionMismatch,
    EvenDegree,
    InvalidRepresentation,
    NotAMorphism,
    NotContained,
    PsiNotInvertible,
)
from .exactla import (
    Matrix,
    Subspace,
    image_basis,
    inverse,
    kernel_basis,
    matmul,
    quotient_dim,
)
from .exactla import zeros as zero_matrix
from .lts_core import (
    AlgebraMorphism,
    Bivector,
    LtsStructure,
    bivector_operator,
    check_lts_axioms,
    check_lts_morphism,
    pair_basis,
)
from .operators import (
    NijenhuisCandidate,
    OOperator,
    OOperatorMorphism,
    bar_lift,
    check_o_morphism,
    induced_product_tensor,
    mixed_product_tensor,
    nijenhuis_deformed_bracket,
    require_o_operator,
)
from .reports import Check, Report, as_check, check_flag, check_residual
from .reps import LtsRepPair, LtsRepresentation, check_rep_axioms, d_tensor, semidirect_product
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

# basis cochains pushed through δ per batch
CHUNK = 64

YAMAGUTI_CONVENTION = "complex starts at C^1; B^1 = 0"
O_OPERATOR_CONVENTION = "C^0 = L^L with d_T = ∂_T; B^1 = im ∂_T"

_ARGS = string.ascii_lowercase[:20]


# ---------------------------------------------------------------------------
# Cochain spaces
# ---------------------------------------------------------------------------

def _require_odd(degree: int) -> None:
    if degree < 1 or degree % 2 == 0:
        raise EvenDegree(f"odd degrees only, got {degree}")


@functools.lru_cache(maxsize=None)
def _tail_space(source_dim: int) -> Subspace:
    """Allowed value patterns on the last three slots, inside QQ^(s^3)."""

    s = source_dim
    flat = lambda x, y, z: (x * s + y) * s + z  # noqa: E731
    rows = []
    for x, y, z in np.ndindex(s, s, s):
        if x <= y:
            row = [0] * s**3
            row[flat(x, y, z)] += 1
            row[flat(y, x, z)] += 1
            rows.append(row)
        row = [0] * s**3
        row[flat(x, y, z)] += 1
        row[flat(y, z, x)] += 1
        row[flat(z, x, y)] += 1
        rows.append(row)
    if not rows:
        return Subspace(0, (), ())
    space = kernel_basis(Matrix.from_rows(rows, s**3))
    logger.debug("tail space for source dimension %d has dimension %d", s, space.dim)
    return space


@functools.lru_cache(maxsize=None)
def _tail_ints(source_dim: int) -> Tuple[np.ndarray, int]:
    tail = _tail_space(source_dim)
    arr = np.empty((tail.dim, tail.ambient_dim), dtype=object)
    for i, vec in enumerate(tail.basis):
        arr[i, :] = list(vec)
    return integerize(arr)


@dataclass(frozen=True)
class CochainSpace:
    degree: int
    source_dim: int
    target_dim: int

    def __post_init__(self) -> None:
        _require_odd(self.degree)

    @property
    def raw_shape(self) -> Tuple[int, ...]:
        return (self.source_dim,) * self.degree + (self.target_dim,)

    @property
    def tail(self) -> Optional[Subspace]:
        if self.degree == 1:
            return None
        return _tail_space(self.source_dim)

    @property
    def prefix_count(self) -> int:
        return self.source_dim ** (self.degree - 3) if self.degree >= 3 else 1

    @property
    def dim(self) -> int:
        if self.degree == 1:
            return self.source_dim * self.target_dim
        return self.prefix_count * self.tail.dim * self.target_dim

    def basis_ints(self, start: int, stop: int) -> Tuple[np.ndarray, int]:
        """Raw tensors of basis cochains ``start..stop-1`` as ``(ints, den)``."""

        count = stop - start
        ids = np.arange(start, stop)
        if self.degree == 1:
            raw = np.zeros((count, self.source_dim * self.target_dim), dtype=np.int64)
            raw[np.arange(count), ids] = 1
            return raw.reshape((count,) + self.raw_shape), 1
        w_ints, w_den = _tail_ints(self.source_dim)
        s3 = self.source_dim**3
        prefix, w, a = np.unravel_index(ids, (self.prefix_count, self.tail.dim, self.target_dim))
        raw = np.zeros((count, self.prefix_count, s3, self.target_dim), dtype=w_ints.dtype)
        raw[np.arange(count), prefix, :, a] = w_ints[w]
        return raw.reshape((count,) + self.raw_shape), w_den

    def iter_basis(self, chunk: int = CHUNK) -> Iterator[Tuple[np.ndarray, int]]:
        for start in range(0, self.dim, chunk):
            yield self.basis_ints(start, min(start + chunk, self.dim))

    def violation(self, raw: np.ndarray) -> Optional[Tuple[int, ...]]:
        """First index breaking a constraint in a batch of raw tensors, if any."""

        if self.degree == 1:
            return None
        k = raw.ndim
        head = list(range(k - 4))
        swapped = np.transpose(raw, head + [k - 3, k - 4, k - 2, k - 1])
        hit = first_nonzero(raw + swapped)
        if hit is not None:
            return hit
        once = np.transpose(raw, head + [k - 2, k - 4, k - 3, k - 1])
        twice = np.transpose(raw, head + [k - 3, k - 2, k - 4, k - 1])
        return first_nonzero(raw + once + twice)

    def coordinate_ints(self, raw: np.ndarray) -> np.ndarray:
        count = raw.shape[0]
        if self.degree == 1:
            return raw.reshape(count, -1)
        shaped = raw.reshape(count, self.prefix_count, self.source_dim**3, self.target_dim)
        return shaped[:, :, list(self.tail.leads), :].reshape(count, -1)

    def coordinates(self, f: "Cochain") -> Tuple[Fraction, ...]:
        if (f.degree, f.source_dim, f.target_dim) != (self.degree, self.source_dim, self.target_dim):
            raise DimensionMismatch(
                f"cochain of degree {f.degree} on {f.source_dim}->{f.target_dim} "
                f"for space of degree {self.degree} on {self.source_dim}->{self.target_dim}"
            )
        ints, den = integerize(f.values)
        return tuple(fractions_of(self.coordinate_ints(ints[np.newaxis]), den).reshape(-1).tolist())

    def cochain(self, coords: Sequence) -> "Cochain":
        coords = as_fraction_array(list(coords))
        if coords.shape != (self.dim,):
            raise DimensionMismatch(f"{coords.shape[0]} coordinates for a space of dimension {self.dim}")
        values = zeros(self.raw_shape)
        for j in np.flatnonzero(coords != 0):
            ints, den = self.basis_ints(int(j), int(j) + 1)
            values = values + coords[j] * fractions_of(ints[0], den)
        return Cochain(self.degree, self.source_dim, self.target_dim, values)

    def basis(self) -> List["Cochain"]:
        out = []
        for ints, den in self.iter_basis():
            for one in ints:
                out.append(Cochain(self.degree, self.source_dim, self.target_dim, fractions_of(one, den)))
        return out


def cochain_space(pair_dims: Tuple[int, int], degree: int) -> CochainSpace:
    source_dim, target_dim = pair_dims
    return CochainSpace(degree, source_dim, target_dim)


@dataclass(frozen=True, eq=False)
class Cochain:
    degree: int
    source_dim: int
    target_dim: int
    values: np.ndarray

    def __post_init__(self) -> None:
        _require_odd(self.degree)
        values = as_fraction_array(self.values)
        space = self.space
        if values.shape != space.raw_shape:
            raise DimensionMismatch(f"cochain values of shape {values.shape}, expected {space.raw_shape}")
        ints, _ = integerize(values)
        hit = space.violation(ints[np.newaxis])
        if hit is not None:
            raise NotContained(f"cochain values violate the slot constraints at {hit[1:]}")
        object.__setattr__(self, "values", frozen(values))

    @property
    def space(self) -> CochainSpace:
        return CochainSpace(self.degree, self.source_dim, self.target_dim)

    @classmethod
    def zero(cls, degree: int, source_dim: int, target_dim: int) -> "Cochain":
        return cls(degree, source_dim, target_dim, zeros((source_dim,) * degree + (target_dim,)))

    @classmethod
    def from_operator(cls, m: Matrix) -> "Cochain":
        """Degree-1 cochain ``v -> M v`` of an ``n x m`` matrix ``M``."""

        return cls(1, m.cols, m.rows, m.to_array().T)

    def to_operator(self) -> Matrix:
        if self.degree != 1:
            raise EvenDegree(f"only degree-1 cochains are linear maps, got degree {self.degree}")
        return Matrix.from_array(self.values.T)

    def coordinates(self) -> Tuple[Fraction, ...]:
        return self.space.coordinates(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.degree == other.degree and arrays_equal(self.values, other.values)

    __hash__ = None  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# The Yamaguti coboundary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoboundaryMatrix:
    degree_from: int
    degree_to: int
    matrix: Matrix
    domain: Optional[CochainSpace] = None
    codomain: Optional[CochainSpace] = None


def _structure_ints(c: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    (c_ints, theta_ints), den = common_integers(c, theta)
    d_ints = theta_ints.transpose(1, 0, 2, 3) - theta_ints
    return c_ints, theta_ints, d_ints, den


def _yamaguti_ints(c: np.ndarray, theta: np.ndarray, d: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``δ`` on a batch ``f[B, x_0..x_{p-1}, value]`` of raw integer cochains."""

    p = f.ndim - 2
    n = (p + 1) // 2
    x = _ARGS[: p + 2]
    out = "Z" + x + "Y"
    terms = [
        (1, int_einsum(f"Z{x[:p]}R,{x[p]}{x[p + 1]}YR->{out}", f, theta)),
        (-1, int_einsum(f"Z{x[:p - 1]}{x[p]}R,{x[p - 1]}{x[p + 1]}YR->{out}", f, theta)),
    ]
    for k in range(1, n + 1):
        i0, i1 = 2 * k - 2, 2 * k - 1
        rest = x[:i0] + x[i1 + 1:]
        terms.append(((-1) ** (n + k), int_einsum(f"Z{rest}R,{x[i0]}{x[i1]}YR->{out}", f, d)))
        for j0 in range(2 * k, p + 2):
            inner = rest.replace(x[j0], "Q")
            terms.append(
                ((-1) ** (n + k + 1), int_einsum(f"{x[i0]}{x[i1]}{x[j0]}Q,Z{inner}Y->{out}", c, f))
            )
    return int_sum(terms)


def _coboundary(c: np.ndarray, theta: np.ndarray, degree: int) -> CoboundaryMatrix:
    _require_odd(degree)
    s, t = c.shape[0], theta.shape[2]
    domain = CochainSpace(degree, s, t)
    codomain = CochainSpace(degree + 2, s, t)
    if domain.dim == 0 or codomain.dim == 0:
        return CoboundaryMatrix(degree, degree + 2, zero_matrix(codomain.dim, domain.dim), domain, codomain)
    c_ints, theta_ints, d_ints, den = _structure_ints(c, theta)
    blocks = []
    basis_den = 1
    for raw, basis_den in domain.iter_basis():
        image = _yamaguti_ints(c_ints, theta_ints, d_ints, raw)
        hit = codomain.violation(image)
        if hit is not None:
            raise CoboundaryError(f"δ^{degree} leaves the cochain space at {hit}")
        blocks.append(codomain.coordinate_ints(image))
    columns = fractions_of(np.concatenate(blocks, axis=0), den * basis_den)
    matrix = Matrix.from_array(columns.T)
    logger.debug("δ^%d assembled: %dx%d", degree, matrix.rows, matrix.cols)
    return CoboundaryMatrix(degree, degree + 2, matrix, domain, codomain)


def _require_rep(pair: LtsRepPair) -> None:
    report = check_rep_axioms(pair.rep)
    if not report.passed:
        raise InvalidRepresentation(f"representation axioms fail: {report.first_failure().to_dict()}")


def yamaguti_coboundary(pair: LtsRepPair, degree: int, validate: bool = True) -> CoboundaryMatrix:
    """Matrix of ``δ^degree : C^degree(L, V) -> C^(degree+2)(L, V)``."""

    _require_odd(degree)
    if validate:
        _require_rep(pair)
    return _coboundary(pair.algebra.c, pair.rep.theta, degree)


def apply_yamaguti(pair: LtsRepPair, f: Cochain) -> Cochain:
    if (f.source_dim, f.target_dim) != (pair.source_dim, pair.module_dim):
        raise DimensionMismatch(
            f"cochain on {f.source_dim}->{f.target_dim}, pair is {pair.source_dim}->{pair.module_dim}"
        )
    c_ints, theta_ints, d_ints, den = _structure_ints(pair.algebra.c, pair.rep.theta)
    f_ints, f_den = integerize(f.values)
    image = _yamaguti_ints(c_ints, theta_ints, d_ints, f_ints[np.newaxis])
    space = CochainSpace(f.degree + 2, f.source_dim, f.target_dim)
    hit = space.violation(image)
    if hit is not None:
        raise CoboundaryError(f"δ^{f.degree} leaves the cochain space at {hit[1:]}")
    return Cochain(space.degree, f.source_dim, f.target_dim, fractions_of(image[0], den * f_den))


def check_square_zero(pair: LtsRepPair, degree: int, method: str = "raw") -> Report:
    """``δ^(degree+2) ∘ δ^degree = 0``.

    ``method="raw"`` applies δ twice to every basis cochain; ``"matrix"``
    multiplies the two assembled matrices.
    """

    _require_odd(degree)
    _require_rep(pair)
    details = {"degree": degree, "method": method}
    if method == "matrix":
        first = yamaguti_coboundary(pair, degree, validate=False).matrix
        second = yamaguti_coboundary(pair, degree + 2, validate=False).matrix
        product = matmul(second, first)
        hit = first_nonzero(product.to_array())
        return Report("square_zero", (check_flag("square_zero", hit is None, hit or ()),), details)
    if method != "raw":
        raise ValueError(f"unknown method {method!r}")

    c_ints, theta_ints, d_ints, _ = _structure_ints(pair.algebra.c, pair.rep.theta)
    middle = CochainSpace(degree + 2, pair.source_dim, pair.module_dim)
    domain = CochainSpace(degree, pair.source_dim, pair.module_dim)
    offset = 0
    for raw, _ in domain.iter_basis():
        once = _yamaguti_ints(c_ints, theta_ints, d_ints, raw)
        hit = middle.violation(once)
        if hit is not None:
            return Report(
                "square_zero",
                (check_flag("lands_in_cochains", False, (offset + hit[0],)),),
                details,
            )
        twice = _yamaguti_ints(c_ints, theta_ints, d_ints, once)
        hit = first_nonzero(twice)
        if hit is not None:
            return Report(
                "square_zero",
                (Check("lands_in_cochains", True), check_flag("square_zero", False, (offset + hit[0],))),
                details,
            )
        offset += raw.shape[0]
    return Report("square_zero", (Check("lands_in_cochains", True), Check("square_zero", True)), details)


# ---------------------------------------------------------------------------
# Cohomology groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    dim_cocycles: int
    dim_coboundaries: int
    dim_H: int
    cochain_dim: int
    flavor: str = "yamaguti"
    convention: str = YAMAGUTI_CONVENTION

    @property
    def consistent(self) -> bool:
        return (
            self.dim_H == self.dim_cocycles - self.dim_coboundaries
            and self.dim_H >= 0
            and self.dim_cocycles <= self.cochain_dim
        )

    def to_dict(self) -> Dict[str, object]:
        return {
            "degree": self.degree,
            "dim_Z": self.dim_cocycles,
            "dim_B": self.dim_coboundaries,
            "dim_H": self.dim_H,
            "cochain_dim": self.cochain_dim,
            "flavor": self.flavor,
            "convention": self.convention,
        }

    def summary(self) -> str:
        return (
            f"H^{self.degree} ({self.flavor}): dim Z = {self.dim_cocycles}, "
            f"dim B = {self.dim_coboundaries}, dim H = {self.dim_H}"
        )


def cocycle_space(m: Matrix) -> Subspace:
    """Kernel of ``m``; tall matrices go through the Gram matrix ``mᵀm``."""

    if m.rows <= m.cols or m.cols == 0:
        return kernel_basis(m)
    ints, _ = integerize(m.to_array())
    gram = int_einsum("ri,rj->ij", ints, ints)
    return kernel_basis(Matrix.from_array(fractions_of(gram, 1)))


def cohomology_from_matrices(
    outgoing: Matrix, incoming: Optional[Matrix], degree: int, flavor: str, convention: str
) -> CohomologyReport:
    z = cocycle_space(outgoing)
    if incoming is None:
        b = Subspace(outgoing.cols, (), ())
    else:
        b = image_basis(incoming)
    dim_h = quotient_dim(z, b)
    logger.debug("%s H^%d: Z %d, B %d", flavor, degree, z.dim, b.dim)
    return CohomologyReport(degree, z.dim, b.dim, dim_h, outgoing.cols, flavor, convention)


def yamaguti_cohomology(pair: LtsRepPair, degree: int) -> CohomologyReport:
    _require_odd(degree)
    _require_rep(pair)
    outgoing = yamaguti_coboundary(pair, degree, validate=False).matrix
    incoming = yamaguti_coboundary(pair, degree - 2, validate=False).matrix if degree >= 3 else None
    return cohomology_from_matrices(outgoing, incoming, degree, "yamaguti", YAMAGUTI_CONVENTION)


# ---------------------------------------------------------------------------
# Cocycle checks
# ---------------------------------------------------------------------------

def _cocycle_condition(pair: LtsRepPair, f: Cochain) -> Tuple[np.ndarray, np.ndarray, Tuple[str, ...]]:
    c = pair.algebra.c
    theta = pair.rep.theta
    d = d_tensor(pair.rep)
    v = f.values
    if f.degree == 1:
        # D(x1,x2)f(x3) - θ(x1,x3)f(x2) + θ(x2,x3)f(x1) = f([x1,x2,x3])
        lhs = (
            exact_einsum("xyab,zb->xyza", d, v)
            - exact_einsum("xzab,yb->xyza", theta, v)
            + exact_einsum("yzab,xb->xyza", theta, v)
        )
        rhs = exact_einsum("xyzq,qa->xyza", c, v)
        return lhs, rhs, ("x1", "x2", "x3")
    lhs = exact_einsum("cdeQ,abQY->abcdeY", c, v) + exact_einsum("abYR,cdeR->abcdeY", d, v)
    rhs = (
        exact_einsum("abcQ,QdeY->abcdeY", c, v)
        + exact_einsum("abdQ,cQeY->abcdeY", c, v)
        + exact_einsum("abeQ,cdQY->abcdeY", c, v)
        + exact_einsum("deYR,abcR->abcdeY", theta, v)
        - exact_einsum("ceYR,abdR->abcdeY", theta, v)
        + exact_einsum("cdYR,abeR->abcdeY", d, v)
    )
    return lhs, rhs, ("x1", "x2", "y1", "y2", "y3")


def check_cocycle(pair: LtsRepPair, f: Cochain) -> Report:
    """Cocycle verdict for ``f``; degrees 1 and 3 are also checked directly."""

    image = apply_yamaguti(pair, f)
    hit = first_nonzero(image.values)
    membership = check_flag("kernel_membership", hit is None, hit[: f.degree + 2] if hit else ())
    if f.degree > 3:
        return Report("cocycle", (membership,), {"degree": f.degree})
    lhs, rhs, labels = _cocycle_condition(pair, f)
    direct = check_residual("cocycle_condition", lhs, rhs, len(labels), labels)
    agree = Check("routes_agree", direct.passed == membership.passed)
    return Report("cocycle", (direct, membership, agree), {"degree": f.degree})


# ---------------------------------------------------------------------------
# Structures induced by an O-operator
# ---------------------------------------------------------------------------

def induced_bracket(t: OOperator) -> LtsStructure:
    """``[u,v,w]_T = D(Tu,Tv)w + θ(Tv,Tw)u - θ(Tu,Tw)v`` on V."""

    require_o_operator(t)
    return LtsStructure(t.pair.module_dim, induced_product_tensor(t.pair, t.t))


def induced_theta_tensor(t: OOperator) -> np.ndarray:
    """``θ_T(u,v)x = [x,Tu,Tv] + T(θ(x,Tv)u - D(x,Tu)v)`` indexed ``[u, v, l, x]``."""

    T = t.t
    c = t.pair.algebra.c
    theta = t.pair.rep.theta
    d = d_tensor(t.pair.rep)
    return (
        exact_einsum("xijl,iu,jv->uvlx", c, T, T)
        + exact_einsum("la,xjau,jv->uvlx", T, theta, T)
        - exact_einsum("la,xiav,iu->uvlx", T, d, T)
    )


def induced_rep(t: OOperator) -> LtsRepresentation:
    return LtsRepresentation(induced_bracket(t), t.pair.source_dim, induced_theta_tensor(t))


def induced_pair(t: OOperator) -> LtsRepPair:
    return LtsRepPair.of(induced_rep(t))


def induced_pair_via_nijenhuis(t: OOperator) -> LtsRepPair:
    """The induced pair read off the bracket deformed by the lift of ``T``."""

    require_o_operator(t)
    n, m = t.pair.source_dim, t.pair.module_dim
    total = semidirect_product(t.pair)
    deformed = nijenhuis_deformed_bracket(NijenhuisCandidate(total, bar_lift(t))).c
    bracket = LtsStructure(m, deformed[n:, n:, n:, n:])
    theta = deformed[:n, n:, n:, :n].transpose(1, 2, 3, 0)
    return LtsRepPair.of(LtsRepresentation(bracket, n, theta))


def _d_cross_formula(t: OOperator) -> np.ndarray:
    """``D_T(u,v)z = [Tu,Tv,z] - T(-θ(Tu,z)v + θ(Tv,z)u)`` indexed ``[u, v, l, z]``."""

    T = t.t
    theta = t.pair.rep.theta
    return (
        exact_einsum("iu,jv,ijzl->uvlz", T, T, t.pair.algebra.c)
        + exact_einsum("la,iu,izav->uvlz", T, T, theta)
        - exact_einsum("la,jv,jzau->uvlz", T, T, theta)
    )


def check_induced_structures(t: OOperator) -> Report:
    """Axioms of the induced pair, the two routes to it and ``T`` as a morphism."""

    pair = induced_pair(t)
    other = induced_pair_via_nijenhuis(t)
    lts = check_lts_axioms(pair.algebra)
    rep = check_rep_axioms(pair.rep)
    morphism = check_lts_morphism(AlgebraMorphism(pair.algebra, t.pair.algebra, t.matrix)).checks[0]
    labels = ("u", "v", "w")
    checks = (
        as_check("induced_lts_axioms", lts),
        as_check("induced_rep_axioms", rep),
        Check("t_morphism", morphism.passed, morphism.witness),
        check_residual("d_formula", d_tensor(pair.rep), _d_cross_formula(t), 2, ("u", "v")),
        check_residual("bracket_routes_agree", pair.algebra.c, other.algebra.c, 3, labels),
        check_residual("theta_routes_agree", pair.rep.theta, other.rep.theta, 2, ("u", "v")),
    )
    return Report("induced_structures", checks, {"dim": pair.source_dim, "module_dim": pair.module_dim})


# ---------------------------------------------------------------------------
# O-operator cohomology
# ---------------------------------------------------------------------------

def _bivector_d(t: OOperator, x: Bivector) -> np.ndarray:
    return exact_einsum("ij,ijab->ab", x.upper(), d_tensor(t.pair.rep))


def partial_T(t: OOperator, x: Bivector) -> Cochain:
    """``∂_T(X)v = T D(X)v - [X, Tv]``."""

    if x.dim != t.pair.source_dim:
        raise DimensionMismatch(f"bivector on dimension {x.dim}, algebra has {t.pair.source_dim}")
    T = t.t
    value = exact_einsum("la,ab->lb", T, _bivector_d(t, x)) - exact_einsum(
        "lz,zb->lb", bivector_operator(t.pair.algebra, x), T
    )
    return Cochain.from_operator(Matrix.from_array(value))


def partial_T_matrix(t: OOperator) -> Matrix:
    """Columns are the coordinates of ``∂_T`` on the wedge basis ``e_i ^ e_j``, ``i < j``."""

    n, m = t.pair.source_dim, t.pair.module_dim
    columns = [partial_T(t, x).coordinates() for x in Bivector.basis(n)]
    return Matrix.from_columns(columns, n * m)


def linearized_o_identity(t: OOperator, f: Matrix) -> np.ndarray:
    """Derivative of the O-operator identity at ``T`` along ``f``, indexed ``[u, v, w, l]``.

    For an O-operator this is ``δ¹_T`` of the cochain ``f``.
    """

    T = t.t
    F = f.to_array()
    c = t.pair.algebra.c
    brackets = (
        exact_einsum("iu,jv,kw,ijkl->uvwl", F, T, T, c)
        + exact_einsum("iu,jv,kw,ijkl->uvwl", T, F, T, c)
        + exact_einsum("iu,jv,kw,ijkl->uvwl", T, T, F, c)
    )
    mixed = mixed_product_tensor(t.pair, F, T) + mixed_product_tensor(t.pair, T, F)
    return (
        brackets
        - exact_einsum("la,uvwa->uvwl", F, induced_product_tensor(t.pair, T))
        - exact_einsum("la,uvwa->uvwl", T, mixed)
    )


def o_operator_coboundary(t: OOperator, degree: int, route: str = "induced") -> CoboundaryMatrix:
    """``d_T`` out of ``degree``; degree 0 is ``∂_T`` on bivectors."""

    require_o_operator(t)
    if degree == 0:
        codomain = CochainSpace(1, t.pair.module_dim, t.pair.source_dim)
        return CoboundaryMatrix(0, 1, partial_T_matrix(t), None, codomain)
    if route == "induced":
        pair = induced_pair(t)
    elif route == "nijenhuis":
        pair = induced_pair_via_nijenhuis(t)
    else:
        raise ValueError(f"unknown route {route!r}")
    return yamaguti_coboundary(pair, degree, validate=False)


def check_coboundary_routes(t: OOperator, degree: int = 1) -> Report:
    """``δ_T`` from the induced pair, from the Nijenhuis lift and, in degree 1, from the linearized identity."""

    first = o_operator_coboundary(t, degree, "induced").matrix
    second = o_operator_coboundary(t, degree, "nijenhuis").matrix
    checks = [check_flag("nijenhuis_route_agrees", first == second)]
    if degree == 1:
        pair = induced_pair(t)
        for k, f in enumerate(CochainSpace(1, t.pair.module_dim, t.pair.source_dim).basis()):
            generic = apply_yamaguti(pair, f).values
            direct = linearized_o_identity(t, f.to_operator())
            if not arrays_equal(generic, direct):
                checks.append(check_flag("linearized_route_agrees", False, (k,)))
                break
        else:
            checks.append(Check("linearized_route_agrees", True))
    return Report("coboundary_routes", tuple(checks), {"degree": degree})


def check_o_cocycle(t: OOperator, f: Cochain) -> Report:
    """Degree-1 cocycle of ``T``: the linearized identity against ``δ¹_T`` membership."""

    if f.degree != 1:
        return check_cocycle(induced_pair(t), f)
    require_o_operator(t)
    residual = linearized_o_identity(t, f.to_operator())
    direct = check_residual("linearized_identity", residual, zeros(residual.shape), 3, ("u", "v", "w"))
    image = apply_yamaguti(induced_pair(t), f).values
    hit = first_nonzero(image)
    membership = check_flag("kernel_membership", hit is None, hit[:3] if hit else ())
    agree = Check("routes_agree", direct.passed == membership.passed)
    return Report("o_cocycle", (direct, membership, agree), {"degree": 1})


def o_operator_cohomology(t: OOperator, degree: int) -> CohomologyReport:
    _require_odd(degree)
    outgoing = o_operator_coboundary(t, degree).matrix
    incoming = o_operator_coboundary(t, degree - 2 if degree >= 3 else 0).matrix
    return cohomology_from_matrices(outgoing, incoming, degree, "o-operator", O_OPERATOR_CONVENTION)


# ---------------------------------------------------------------------------
# Functoriality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CochainMap:
    degree: int
    matrix: Matrix
    report: Report


def _psi_inverse(m: OOperatorMorphism) -> Matrix:
    if m.psi.rows != m.psi.cols:
        raise PsiNotInvertible(f"psi is {m.psi.rows}x{m.psi.cols}")
    inv = inverse(m.psi)
    if inv is None:
        raise PsiNotInvertible("psi is singular")
    return inv


def _gamma_matrix(m: OOperatorMorphism, degree: int, psi_inv: Matrix) -> Matrix:
    """``γf(u_1..u_p) = φ f(ψ⁻¹u_1, .., ψ⁻¹u_p)``; in degree 0 ``γ(X) = φ(X)``."""

    n, k = m.source.pair.source_dim, m.source.pair.module_dim
    n2, k2 = m.target.pair.source_dim, m.target.pair.module_dim
    phi = m.phi.to_array()
    if degree == 0:
        columns = [
            Bivector(n2, exact_einsum("ai,ij,bj->ab", phi, x.coeffs, phi)).to_vector()
            for x in Bivector.basis(n)
        ]
        return Matrix.from_columns(columns, len(pair_basis(n2)))

    domain = CochainSpace(degree, k, n)
    codomain = CochainSpace(degree, k2, n2)
    if domain.dim == 0 or codomain.dim == 0:
        return zero_matrix(codomain.dim, domain.dim)
    (phi_ints, inv_ints), den = common_integers(phi, psi_inv.to_array())
    args = _ARGS[:degree]
    blocks = []
    basis_den = 1
    for raw, basis_den in domain.iter_basis():
        out = int_einsum(f"Z{args}R,YR->Z{args}Y", raw, phi_ints)
        for slot in range(degree):
            moved = args[:slot] + "Q" + args[slot + 1:]
            out = int_einsum(f"Z{args}Y,{args[slot]}Q->Z{moved}Y", out, inv_ints)
        blocks.append(codomain.coordinate_ints(out))
    columns = fractions_of(np.concatenate(blocks, axis=0), den ** (degree + 1) * basis_den)
    return Matrix.from_array(columns.T)


def gamma_cochain_map(m: OOperatorMorphism, degree: int) -> CochainMap:
    """Matrix of ``γ`` in ``degree`` with the cochain-map squares verified exactly."""

    morphism = check_o_morphism(m)
    if not morphism.passed:
        raise NotAMorphism(f"not a morphism of O-operators: {morphism.first_failure().to_dict()}")
    psi_inv = _psi_inverse(m)
    if degree != 0:
        _require_odd(degree)
    gamma = _gamma_matrix(m, degree, psi_inv)
    checks = []
    # d_T' γ = γ d_T out of this degree and, from degree 1, into it
    steps = [degree] if degree == 0 else [degree - 2 if degree > 1 else 0, degree]
    for low in steps:
        high = 1 if low == 0 else low + 2
        left = matmul(o_operator_coboundary(m.target, low).matrix, _gamma_matrix(m, low, psi_inv))
        right = matmul(_gamma_matrix(m, high, psi_inv), o_operator_coboundary(m.source, low).matrix)
        hit = first_nonzero(left.to_array() - right.to_array())
        checks.append(check_flag(f"commutes_{low}_{high}", hit is None, hit or ()))
    return CochainMap(degree, gamma, Report("gamma_cochain_map", tuple(checks), {"degree": degree}))


def gamma_on_h1(m: OOperatorMorphism) -> Report:
    """``γ`` carries 1-cocycles to 1-cocycles and 1-coboundaries to 1-coboundaries."""

    gamma = gamma_cochain_map(m, 1).matrix
    z_src = cocycle_space(o_operator_coboundary(m.source, 1).matrix)
    b_src = image_basis(o_operator_coboundary(m.source, 0).matrix)
    z_dst = cocycle_space(o_operator_coboundary(m.target, 1).matrix)
    b_dst = image_basis(o_operator_coboundary(m.target, 0).matrix)

    def _maps_into(name: str, src: Subspace, dst: Subspace) -> Check:
        for k, v in enumerate(src.basis):
            if not dst.contains(gamma.apply(v)):
                return check_flag(name, False, (k,))
        return Check(name, True)

    return Report(
        "gamma_on_h1",
        (_maps_into("cocycles_to_cocycles", z_src, z_dst), _maps_into("coboundaries_to_coboundaries", b_src, b_dst)),
        {"source_dim_H": z_src.dim - b_src.dim, "target_dim_H": z_dst.dim - b_dst.dim},
    )
