"""Formal deformations of O-operators.

A series ``T_t = T + t T_1 + ... + t^N T_N`` is an O-operator up to order
``N`` when the coefficient of every ``t^s`` in the O-operator identity
vanishes for ``s <= N``. Equivalences are pairs ``(φ_t, ψ_t)`` generated by a
bivector ``X``: ``φ_t = Id + t[X, -] + ...`` on the algebra and
``ψ_t = Id + t D(X) + ...`` on the module.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .cohomology import (
    Cochain,
    CochainSpace,
    apply_yamaguti,
    cocycle_space,
    induced_pair,
    linearized_o_identity,
    o_operator_coboundary,
    partial_T,
)
from .errors import BaseMismatch, DimensionMismatch, NotInvertibleSeries
from .exactla import Matrix, image_basis, inverse, solve, span
from .lts_core import Bivector, bivector_operator, check_derivation, pair_basis
from .operators import OOperator, check_o_operator, mixed_product_tensor, require_o_operator
from .reports import Check, Report, as_check, check_flag, check_residual
from .reps import d_tensor
from .tensors import exact_einsum, first_nonzero, identity, is_zero, zeros

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 3

TRIPLE = ("u", "v", "w")


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DeformationSeries:
    """``T_t = sum_i T_i t^i`` truncated after ``coefficients[-1]``."""

    base: OOperator
    coefficients: Tuple[Matrix, ...] = ()

    def __post_init__(self) -> None:
        shape = (self.base.matrix.rows, self.base.matrix.cols)
        coefficients = tuple(self.coefficients)
        for i, c in enumerate(coefficients, start=1):
            if (c.rows, c.cols) != shape:
                raise DimensionMismatch(f"T_{i} is {c.rows}x{c.cols}, base is {shape[0]}x{shape[1]}")
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def coefficient(self, i: int) -> np.ndarray:
        if i == 0:
            return self.base.t
        if i <= self.order:
            return self.coefficients[i - 1].to_array()
        return zeros((self.base.matrix.rows, self.base.matrix.cols))


@dataclass(frozen=True)
class EquivalencePair:
    x: Bivector
    higher_phi: Tuple[Matrix, ...] = ()
    higher_psi: Tuple[Matrix, ...] = ()

    def phi_series(self, t: OOperator) -> List[np.ndarray]:
        n = t.pair.source_dim
        _check_square(self.higher_phi, n, "phi")
        return [identity(n), bivector_operator(t.pair.algebra, self.x)] + [m.to_array() for m in self.higher_phi]

    def psi_series(self, t: OOperator) -> List[np.ndarray]:
        m = t.pair.module_dim
        _check_square(self.higher_psi, m, "psi")
        d_x = exact_einsum("ij,ijab->ab", self.x.upper(), d_tensor(t.pair.rep))
        return [identity(m), d_x] + [p.to_array() for p in self.higher_psi]


def _check_square(ms: Sequence[Matrix], n: int, name: str) -> None:
    for i, m in enumerate(ms, start=2):
        if (m.rows, m.cols) != (n, n):
            raise DimensionMismatch(f"{name}_{i} is {m.rows}x{m.cols}, expected {n}x{n}")


@dataclass(frozen=True)
class NijenhuisElementReport:
    x: Bivector
    condition1: Tuple[Check, ...]
    condition2: Tuple[Check, ...]
    condition3: Tuple[Check, ...]
    details: Dict[str, object] = field(default_factory=dict)

    @property
    def cond1_pass(self) -> bool:
        return all(c.passed for c in self.condition1)

    @property
    def cond2_pass(self) -> bool:
        return all(c.passed for c in self.condition2)

    @property
    def cond3_pass(self) -> bool:
        return all(c.passed for c in self.condition3)

    @property
    def passed(self) -> bool:
        return self.cond1_pass and self.cond2_pass and self.cond3_pass

    def to_report(self) -> Report:
        return Report(
            "nijenhuis_element",
            self.condition1 + self.condition2 + self.condition3,
            {"bivector": [str(v) for v in self.x.to_vector()], **self.details},
        )


# ---------------------------------------------------------------------------
# Order-by-order residuals
# ---------------------------------------------------------------------------

def _triples(s: int):
    for i in range(s + 1):
        for j in range(s + 1 - i):
            yield i, j, s - i - j


def order_residual(d: DeformationSeries, s: int) -> np.ndarray:
    """Coefficient of ``t^s`` in ``[T_t u, T_t v, T_t w] - T_t(D(T_t u, T_t v)w + ...)``."""

    pair = d.base.pair
    c = pair.algebra.c
    coeff = [d.coefficient(i) for i in range(s + 1)]
    nonzero = [not is_zero(x) for x in coeff]
    products: Dict[Tuple[int, int], np.ndarray] = {}
    n, m = d.base.matrix.rows, d.base.matrix.cols
    out = zeros((m, m, m, n))
    for i, j, k in _triples(s):
        if nonzero[i] and nonzero[j] and nonzero[k]:
            out = out + exact_einsum("iu,jv,kw,ijkl->uvwl", coeff[i], coeff[j], coeff[k], c)
            key = (j, k)
            if key not in products:
                products[key] = mixed_product_tensor(pair, coeff[j], coeff[k])
            out = out - exact_einsum("la,uvwa->uvwl", coeff[i], products[key])
    return out


def _with_coefficient(d: DeformationSeries, s: int, value: Optional[Matrix]) -> DeformationSeries:
    n, m = d.base.matrix.rows, d.base.matrix.cols
    coeffs = list(d.coefficients) + [Matrix.from_array(zeros((n, m)))] * max(0, s - d.order)
    if value is None:
        value = Matrix.from_array(zeros((n, m)))
    coeffs[s - 1] = value
    return DeformationSeries(d.base, tuple(coeffs))


def obstruction(d: DeformationSeries, s: int) -> np.ndarray:
    """Order-``s`` residual with ``T_s`` set to zero.

    The full residual at order ``s`` is ``δ¹_T(T_s)`` plus this defect.
    """

    if s > d.order + 1:
        raise DimensionMismatch(f"order {s} beyond the next unknown coefficient {d.order + 1}")
    if s == 0:
        return order_residual(d, 0)
    return order_residual(_with_coefficient(d, s, None), s)


def check_formal(d: DeformationSeries, order: Optional[int] = None) -> Report:
    order = d.order if order is None else order
    checks = []
    first_failure = None
    for s in range(order + 1):
        residual = order_residual(d, s)
        check = check_residual(f"order_{s}", residual, zeros(residual.shape), 3, TRIPLE)
        checks.append(check)
        if not check.passed and first_failure is None:
            first_failure = s
    logger.debug("formal check through order %d: first failure %s", order, first_failure)
    return Report("formal_deformation", tuple(checks), {"order": order, "first_failing_order": first_failure})


def _linearized_matrix(t: OOperator) -> Tuple[Matrix, CochainSpace]:
    """``δ¹_T`` as a matrix into the raw ``[u, v, w, l]`` value space."""

    space = CochainSpace(1, t.pair.module_dim, t.pair.source_dim)
    columns = [
        tuple(linearized_o_identity(t, f.to_operator()).reshape(-1).tolist()) for f in space.basis()
    ]
    m, n = t.pair.module_dim, t.pair.source_dim
    return Matrix.from_columns(columns, m**3 * n), space


def solve_next_coefficient(d: DeformationSeries, s: Optional[int] = None) -> Optional[Matrix]:
    """Some ``T_s`` cancelling the order-``s`` obstruction, or None when it is unsolvable."""

    s = d.order + 1 if s is None else s
    if s < 1:
        raise DimensionMismatch("the base coefficient is not an unknown")
    defect = obstruction(d, s)
    lin, space = _linearized_matrix(d.base)
    x = solve(lin, [-v for v in defect.reshape(-1).tolist()])
    if x is None:
        logger.info("order %d obstruction is not a coboundary", s)
        return None
    return space.cochain(x).to_operator()


def extend_series(d: DeformationSeries, next_coefficient: Matrix) -> DeformationSeries:
    return DeformationSeries(d.base, d.coefficients + (next_coefficient,))


def check_infinitesimal(t: OOperator, t1: Matrix) -> Report:
    """``T + t T_1`` is an O-operator for all ``t`` exactly when orders 1 to 3 vanish."""

    d = DeformationSeries(t, (t1,))
    checks = []
    for s in (1, 2, 3):
        residual = order_residual(d, s)
        checks.append(check_residual(f"order{s}", residual, zeros(residual.shape), 3, TRIPLE))
    details: Dict[str, object] = {}
    if check_o_operator(t).passed:
        image = apply_yamaguti(induced_pair(t), Cochain.from_operator(t1)).values
        closed = first_nonzero(image) is None
        checks.append(Check("order1_matches_cocycle", closed == checks[0].passed))
        details["cocycle"] = closed
    return Report("infinitesimal_deformation", tuple(checks), details)


# ---------------------------------------------------------------------------
# Equivalences and Nijenhuis elements
# ---------------------------------------------------------------------------

def _phi_conditions(t: OOperator, a: np.ndarray) -> Tuple[Check, Check]:
    c = t.pair.algebra.c
    labels = ("x", "y", "z")
    quadratic = (
        exact_einsum("ix,jy,ijzl->xyzl", a, a, c)
        + exact_einsum("ix,kz,iykl->xyzl", a, a, c)
        + exact_einsum("jy,kz,xjkl->xyzl", a, a, c)
    )
    cubic = exact_einsum("ix,jy,kz,ijkl->xyzl", a, a, a, c)
    zero = zeros(cubic.shape)
    return (
        check_residual("phi_quadratic", quadratic, zero, 3, labels),
        check_residual("phi_cubic", cubic, zero, 3, labels),
    )


def _theta_conditions(t: OOperator, a: np.ndarray, d_x: np.ndarray) -> Tuple[Check, Check]:
    theta = t.pair.rep.theta
    both = exact_einsum("ix,jy,ijab->xyab", a, a, theta)
    quadratic = (
        both
        + exact_einsum("ix,iyac,cb->xyab", a, theta, d_x)
        + exact_einsum("jy,xjac,cb->xyab", a, theta, d_x)
    )
    cubic = exact_einsum("xyac,cb->xyab", both, d_x)
    zero = zeros(cubic.shape)
    return (
        check_residual("theta_quadratic", quadratic, zero, 2, ("x", "y")),
        check_residual("theta_cubic", cubic, zero, 2, ("x", "y")),
    )


def _bivector_parts(t: OOperator, x: Bivector) -> Tuple[np.ndarray, np.ndarray]:
    a = bivector_operator(t.pair.algebra, x)
    d_x = exact_einsum("ij,ijab->ab", x.upper(), d_tensor(t.pair.rep))
    return a, d_x


def check_nijenhuis_element(t: OOperator, x: Bivector) -> NijenhuisElementReport:
    if x.dim != t.pair.source_dim:
        raise DimensionMismatch(f"bivector on dimension {x.dim}, algebra has {t.pair.source_dim}")
    a, d_x = _bivector_parts(t, x)
    T = t.t
    # [X, T D(X)u - [X, Tu]] = 0
    inner = exact_einsum("la,ab->lb", T, d_x) - exact_einsum("li,ib->lb", a, T)
    third = exact_einsum("kl,lb->bk", a, inner)
    cond3 = check_residual("cond3", third, zeros(third.shape), 1, ("u",))
    return NijenhuisElementReport(x, _phi_conditions(t, a), _theta_conditions(t, a, d_x), (cond3,))


def check_equivalence(t: OOperator, d1: DeformationSeries, d2: DeformationSeries, x: Bivector) -> Report:
    """``(Id + t[X,-], Id + tD(X))`` is a morphism from ``T + tT_1`` to ``T + tT'_1``."""

    for d in (d1, d2):
        if d.base.pair != t.pair or d.base.matrix != t.matrix:
            raise BaseMismatch("deformation does not start at the given operator")
    if d1.order > 1 or d2.order > 1:
        raise DimensionMismatch("equivalence is checked for order-1 deformations")
    a, d_x = _bivector_parts(t, x)
    T = t.t
    t1, t1p = d1.coefficient(1), d2.coefficient(1)

    derivation = check_derivation(t.pair.algebra, a)
    theta = t.pair.rep.theta
    # D(X)θ(x,y) = θ(Ax,y) + θ(x,Ay) + θ(x,y)D(X)
    theta_linear = check_residual(
        "theta_linear",
        exact_einsum("ac,xycb->xyab", d_x, theta),
        exact_einsum("ix,iyab->xyab", a, theta)
        + exact_einsum("jy,xjab->xyab", a, theta)
        + exact_einsum("xyac,cb->xyab", theta, d_x),
        2,
        ("x", "y"),
    )
    # T_1 + AT = T D(X) + T'_1 and A T_1 = T'_1 D(X)
    op_linear = check_residual(
        "operator_linear",
        (t1 + exact_einsum("li,iu->lu", a, T)).T,
        (exact_einsum("la,au->lu", T, d_x) + t1p).T,
        1,
        ("u",),
    )
    op_quadratic = check_residual(
        "operator_quadratic",
        exact_einsum("li,iu->ul", a, t1),
        exact_einsum("la,au->ul", t1p, d_x),
        1,
        ("u",),
    )
    checks = (
        as_check("phi_derivation", derivation),
        *_phi_conditions(t, a),
        theta_linear,
        *_theta_conditions(t, a, d_x),
        op_linear,
        op_quadratic,
    )
    report = Report("equivalence", checks)
    if report.passed:
        diff = partial_T(t, x).to_operator().to_array()
        agrees = is_zero((t1 - t1p) - diff)
        return Report("equivalence", checks + (check_flag("difference_is_partial", agrees),))
    return report


# ---------------------------------------------------------------------------
# Rigidity
# ---------------------------------------------------------------------------

def _lattice(rank: int, degree: int):
    """Exponent vectors of total ``degree``; a degree-``degree`` form vanishing on them vanishes."""

    for combo in itertools.combinations_with_replacement(range(rank), degree):
        point = [0] * rank
        for i in combo:
            point[i] += 1
        yield tuple(point)


def _span_is_nijenhuis(t: OOperator, basis: Sequence[Tuple]) -> Optional[Tuple[int, ...]]:
    """A lattice point of the span that fails, or None when the whole span is Nijenhuis."""

    n = t.pair.source_dim
    # every condition is a homogeneous form of degree 2 or 3 in X
    for degree in (2, 3):
        for point in _lattice(len(basis), degree):
            vec = [sum(p * b[k] for p, b in zip(point, basis)) for k in range(len(basis[0]))]
            if not check_nijenhuis_element(t, Bivector.from_vector(n, vec)).passed:
                return point
    return None


def rigidity_certificate(t: OOperator, candidates: Sequence[Bivector]) -> Report:
    """One-sided rigidity certificate.

    Passes when the Nijenhuis members among ``candidates`` span a space of
    Nijenhuis elements whose image under ``d_T`` is all of ``Z^1_T``. A
    failure never means that ``T`` is not rigid.
    """

    require_o_operator(t)
    members = []
    for x in candidates:
        if check_nijenhuis_element(t, x).passed:
            members.append(x)
        else:
            logger.warning("candidate %s is not a Nijenhuis element", [str(v) for v in x.to_vector()])
    n = t.pair.source_dim
    z = cocycle_space(o_operator_coboundary(t, 1).matrix)
    member_span = span([x.to_vector() for x in members], len(pair_basis(n)))
    witness = _span_is_nijenhuis(t, member_span.basis) if member_span.dim else None
    images = span([partial_T(t, Bivector.from_vector(n, v)).coordinates() for v in member_span.basis], z.ambient_dim)
    exhausted = images.dim == z.dim
    checks = (
        check_flag("members_span_nijenhuis", witness is None, witness or ()),
        check_flag("exhausts_cocycles", exhausted),
    )
    return Report(
        "rigidity_certificate",
        checks,
        {
            "one_sided": True,
            "candidates": len(candidates),
            "members": len(members),
            "dim_Z1": z.dim,
            "dim_image": images.dim,
            "codimension": z.dim - images.dim,
            "certified": witness is None and exhausted,
        },
    )


# ---------------------------------------------------------------------------
# Trivial deformations
# ---------------------------------------------------------------------------

def _series_product(a: Sequence[np.ndarray], b: Sequence[np.ndarray], order: int) -> List[np.ndarray]:
    out = []
    for s in range(order + 1):
        acc = None
        for i in range(s + 1):
            if i < len(a) and s - i < len(b):
                term = exact_einsum("ij,jk->ik", a[i], b[s - i])
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else zeros((a[0].shape[0], b[0].shape[1])))
    return out


def series_inverse(coeffs: Sequence[np.ndarray], order: int) -> List[np.ndarray]:
    """Inverse of ``sum_i coeffs[i] t^i`` through ``t^order``."""

    c0 = inverse(Matrix.from_array(coeffs[0]))
    if c0 is None:
        raise NotInvertibleSeries("constant term is singular")
    c0 = c0.to_array()
    out = [c0]
    for k in range(1, order + 1):
        acc = zeros(c0.shape)
        for j in range(1, k + 1):
            if j < len(coeffs):
                acc = acc + exact_einsum("ij,jk->ik", coeffs[j], out[k - j])
        out.append(-exact_einsum("ij,jk->ik", c0, acc))
    return out


def check_trivial_deformation(t: OOperator, d: DeformationSeries, e: EquivalencePair) -> Report:
    """``φ_t ∘ T_t ∘ ψ_t⁻¹`` equals ``T`` through the order of ``d``."""

    order = max(d.order, 1)
    psi_inv = series_inverse(e.psi_series(t), order)
    series = [d.coefficient(i) for i in range(order + 1)]
    conjugated = _series_product(_series_product(e.phi_series(t), series, order), psi_inv, order)
    checks = []
    for s in range(order + 1):
        expected = t.t if s == 0 else zeros(t.t.shape)
        checks.append(check_residual(f"order_{s}", conjugated[s].T, expected.T, 1, ("u",)))
    t1 = Cochain.from_operator(Matrix.from_array(d.coefficient(1)))
    b1 = image_basis(o_operator_coboundary(t, 0).matrix)
    checks.append(check_flag("order1_in_image_of_partial", b1.contains(t1.coordinates())))
    return Report("trivial_deformation", tuple(checks), {"order": order})
