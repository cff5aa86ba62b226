"""Rota-Baxter operators, O-operators, Nijenhuis operators and pre-Lie triple systems.

An O-operator ``T: V -> L`` is stored as an ``n x m`` matrix whose column
``u`` is ``T(f_u)``. All checkers return a :class:`~triplekit.reports.Report`
so that valid and invalid candidates can be compared verdict by verdict.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict

import numpy as np

from .errors import DimensionMismatch, InvalidRepresentation, NotAnOOperator, NotAPreLts, NotNijenhuis
from .exactla import Matrix, span
from .lts_core import AlgebraMorphism, LtsStructure, check_lts_morphism
from .reports import Check, Report, Witness, check_residual
from .reps import LtsRepPair, check_rep_axioms, d_tensor, semidirect_tensor
from .tensors import arrays_equal, as_fraction_array, exact_einsum, frozen, identity, zeros
from .utils import format_scalar

logger = logging.getLogger(__name__)

TRIPLE = ("u", "v", "w")


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OOperator:
    pair: LtsRepPair
    matrix: Matrix

    def __post_init__(self) -> None:
        n, m = self.pair.source_dim, self.pair.module_dim
        if (self.matrix.rows, self.matrix.cols) != (n, m):
            raise DimensionMismatch(
                f"operator is {self.matrix.rows}x{self.matrix.cols}, expected {n}x{m}"
            )

    @property
    def t(self) -> np.ndarray:
        return self.matrix.to_array()


@dataclass(frozen=True)
class NijenhuisCandidate:
    algebra: LtsStructure
    matrix: Matrix

    def __post_init__(self) -> None:
        n = self.algebra.dim
        if (self.matrix.rows, self.matrix.cols) != (n, n):
            raise DimensionMismatch(f"operator is {self.matrix.rows}x{self.matrix.cols}, expected {n}x{n}")


@dataclass(frozen=True, eq=False)
class PreLts:
    dim: int
    mu: np.ndarray

    def __post_init__(self) -> None:
        mu = as_fraction_array(self.mu)
        if mu.shape != (self.dim,) * 4:
            raise DimensionMismatch(f"product tensor of shape {mu.shape} for dimension {self.dim}")
        object.__setattr__(self, "mu", frozen(mu))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PreLts):
            return NotImplemented
        return self.dim == other.dim and arrays_equal(self.mu, other.mu)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class OOperatorMorphism:
    source: OOperator
    target: OOperator
    phi: Matrix
    psi: Matrix

    def __post_init__(self) -> None:
        n, m = self.source.pair.source_dim, self.source.pair.module_dim
        n2, m2 = self.target.pair.source_dim, self.target.pair.module_dim
        if (self.phi.rows, self.phi.cols) != (n2, n):
            raise DimensionMismatch(f"phi is {self.phi.rows}x{self.phi.cols}, expected {n2}x{n}")
        if (self.psi.rows, self.psi.cols) != (m2, m):
            raise DimensionMismatch(f"psi is {self.psi.rows}x{self.psi.cols}, expected {m2}x{m}")


# ---------------------------------------------------------------------------
# Rota-Baxter and O-operators
# ---------------------------------------------------------------------------

def check_rota_baxter(a: LtsStructure, r: Matrix) -> Report:
    """``[Rx,Ry,Rz] = R([Rx,Ry,z] + [Rx,y,Rz] + [x,Ry,Rz])``."""

    if (r.rows, r.cols) != (a.dim, a.dim):
        raise DimensionMismatch(f"operator is {r.rows}x{r.cols}, expected {a.dim}x{a.dim}")
    R = r.to_array()
    c = a.c
    lhs = exact_einsum("ix,jy,kz,ijkl->xyzl", R, R, R, c)
    inner = (
        exact_einsum("ix,jy,ijzl->xyzl", R, R, c)
        + exact_einsum("ix,kz,iykl->xyzl", R, R, c)
        + exact_einsum("jy,kz,xjkl->xyzl", R, R, c)
    )
    rhs = exact_einsum("ml,xyzl->xyzm", R, inner)
    return Report("rota_baxter", (check_residual("rota_baxter_identity", lhs, rhs, 3, ("x", "y", "z")),))


def mixed_product_tensor(pair: LtsRepPair, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``D(Xu,Yv)w + θ(Xv,Yw)u - θ(Xu,Yw)v`` indexed ``[u, v, w, a]``."""

    theta = pair.rep.theta
    return (
        exact_einsum("iu,jv,ijaw->uvwa", X, Y, d_tensor(pair.rep))
        + exact_einsum("jv,kw,jkau->uvwa", X, Y, theta)
        - exact_einsum("iu,kw,ikav->uvwa", X, Y, theta)
    )


def induced_product_tensor(pair: LtsRepPair, T: np.ndarray) -> np.ndarray:
    """``D(Tu,Tv)w + θ(Tv,Tw)u - θ(Tu,Tw)v`` as a tensor indexed ``[u, v, w, a]``."""

    return mixed_product_tensor(pair, T, T)


def o_identity_sides(t: OOperator):
    T = t.t
    lhs = exact_einsum("iu,jv,kw,ijkl->uvwl", T, T, T, t.pair.algebra.c)
    rhs = exact_einsum("la,uvwa->uvwl", T, induced_product_tensor(t.pair, T))
    return lhs, rhs


def _require_rep(pair: LtsRepPair) -> None:
    report = check_rep_axioms(pair.rep)
    if not report.passed:
        raise InvalidRepresentation(f"representation axioms fail: {report.first_failure().to_dict()}")


def check_o_operator(t: OOperator) -> Report:
    _require_rep(t.pair)
    lhs, rhs = o_identity_sides(t)
    return Report("o_operator", (check_residual("o_identity", lhs, rhs, 3, TRIPLE),))


def require_o_operator(t: OOperator) -> None:
    report = check_o_operator(t)
    if not report.passed:
        raise NotAnOOperator(f"not an O-operator: {report.first_failure().to_dict()}")


def check_graph_subalgebra(t: OOperator) -> Report:
    """Closure of ``{(Tu, u)}`` under the semidirect bracket."""

    _require_rep(t.pair)
    n, m = t.pair.source_dim, t.pair.module_dim
    gens = np.concatenate([t.t, identity(m)], axis=0)
    graph = span([tuple(gens[:, u]) for u in range(m)], n + m)
    brackets = exact_einsum("iu,jv,kw,ijkl->uvwl", gens, gens, gens, semidirect_tensor(t.pair))
    for key in np.ndindex(m, m, m):
        vec = tuple(brackets[key])
        if not graph.contains(vec):
            v_part = np.asarray(vec[n:], dtype=object)
            closest = tuple(exact_einsum("la,a->l", t.t, v_part).tolist()) + vec[n:]
            witness = Witness(
                tuple(int(k) for k in key),
                tuple(format_scalar(x) for x in vec),
                tuple(format_scalar(x) for x in closest),
                TRIPLE,
            )
            return Report("graph_subalgebra", (Check("graph_closed", False, witness),))
    return Report("graph_subalgebra", (Check("graph_closed", True),), {"graph_dim": graph.dim})


def hat_lift(t: OOperator) -> Matrix:
    """``T^(x, u) = (T u, 0)`` on L (+) V, i.e. the block matrix [[0, T], [0, 0]]."""

    n, m = t.pair.source_dim, t.pair.module_dim
    out = zeros((n + m, n + m))
    out[:n, n:] = t.t
    return Matrix.from_array(out)


def bar_lift(t: OOperator) -> Matrix:
    """Nijenhuis lift of ``T``; the same block matrix as :func:`hat_lift`."""

    return hat_lift(t)


# ---------------------------------------------------------------------------
# Nijenhuis operators
# ---------------------------------------------------------------------------

def _nijenhuis_parts(a: LtsStructure, N: np.ndarray) -> Dict[str, np.ndarray]:
    c = a.c
    once = (
        exact_einsum("ix,iyzl->xyzl", N, c)
        + exact_einsum("jy,xjzl->xyzl", N, c)
        + exact_einsum("kz,xykl->xyzl", N, c)
    )
    twice = (
        exact_einsum("ix,jy,ijzl->xyzl", N, N, c)
        + exact_einsum("jy,kz,xjkl->xyzl", N, N, c)
        + exact_einsum("ix,kz,iykl->xyzl", N, N, c)
    )
    thrice = exact_einsum("ix,jy,kz,ijkl->xyzl", N, N, N, c)
    applied = exact_einsum("ml,xyzl->xyzm", N, c)
    deformed = twice - exact_einsum("ml,xyzl->xyzm", N, once - applied)
    return {"deformed": deformed, "thrice": thrice}


def check_nijenhuis_operator(nc: NijenhuisCandidate) -> Report:
    N = nc.matrix.to_array()
    parts = _nijenhuis_parts(nc.algebra, N)
    rhs = exact_einsum("ml,xyzl->xyzm", N, parts["deformed"])
    return Report(
        "nijenhuis_operator",
        (check_residual("nijenhuis_identity", parts["thrice"], rhs, 3, ("x", "y", "z")),),
    )


def nijenhuis_deformed_bracket(nc: NijenhuisCandidate) -> LtsStructure:
    report = check_nijenhuis_operator(nc)
    if not report.passed:
        raise NotNijenhuis(f"not a Nijenhuis operator: {report.first_failure().to_dict()}")
    deformed = _nijenhuis_parts(nc.algebra, nc.matrix.to_array())["deformed"]
    return LtsStructure(nc.algebra.dim, deformed)


def nijenhuis_morphism(nc: NijenhuisCandidate) -> AlgebraMorphism:
    """``N`` as a morphism from the deformed bracket back to the original one."""

    return AlgebraMorphism(nijenhuis_deformed_bracket(nc), nc.algebra, nc.matrix)


def check_four_way(t: OOperator) -> Dict[str, bool]:
    """Verdicts of the four equivalent characterizations of an O-operator."""

    from .reps import semidirect_product

    total = semidirect_product(t.pair)
    return {
        "o_identity": check_o_operator(t).passed,
        "graph_subalgebra": check_graph_subalgebra(t).passed,
        "hat_rota_baxter": check_rota_baxter(total, hat_lift(t)).passed,
        "bar_nijenhuis": check_nijenhuis_operator(NijenhuisCandidate(total, bar_lift(t))).passed,
    }


# ---------------------------------------------------------------------------
# Pre-Lie triple systems
# ---------------------------------------------------------------------------

def star_tensor(mu: np.ndarray) -> np.ndarray:
    """``{x,y,z}* = {z,y,x} - {z,x,y}``."""

    return exact_einsum("cbal->abcl", mu) - exact_einsum("cabl->abcl", mu)


def commutator_tensor(mu: np.ndarray) -> np.ndarray:
    """``[x,y,z]_C = {x,y,z}* + {x,y,z} - {y,x,z}``."""

    return star_tensor(mu) + mu - exact_einsum("yxzl->xyzl", mu)


def check_prelts_axioms(p: PreLts) -> Report:
    mu = p.mu
    star = star_tensor(mu)
    comm = commutator_tensor(mu)
    # index letters: p=x1, q=x2, r=x3, s=x4, t=x5
    lhs1 = exact_einsum("qrsl,tplm->pqrstm", comm, mu)
    rhs1 = (
        exact_einsum("tpql,lrsm->pqrstm", mu, mu)
        - exact_einsum("tprl,lqsm->pqrstm", mu, mu)
        + exact_einsum("tpsl,qrlm->pqrstm", mu, star)
    )
    lhs2 = exact_einsum("trsl,pqlm->pqrstm", mu, star)
    rhs2 = (
        exact_einsum("pqtl,lrsm->pqrstm", star, mu)
        + exact_einsum("pqrl,tlsm->pqrstm", comm, mu)
        + exact_einsum("pqsl,trlm->pqrstm", comm, mu)
    )
    labels = ("x1", "x2", "x3", "x4", "x5")
    return Report(
        "prelts_axioms",
        (
            check_residual("left_commutator", lhs1, rhs1, 5, labels),
            check_residual("star_derivation", lhs2, rhs2, 5, labels),
        ),
        {"dim": p.dim},
    )


def induced_prelts(t: OOperator) -> PreLts:
    """``{u, v, w} = θ(Tv, Tw) u``."""

    require_o_operator(t)
    return PreLts(t.pair.module_dim, induced_prelts_tensor(t))


def induced_prelts_tensor(t: OOperator) -> np.ndarray:
    T = t.t
    return exact_einsum("jv,kw,jkau->uvwa", T, T, t.pair.rep.theta)


def prelts_commutator(p: PreLts) -> LtsStructure:
    report = check_prelts_axioms(p)
    if not report.passed:
        raise NotAPreLts(f"not a pre-Lie triple system: {report.first_failure().to_dict()}")
    return LtsStructure(p.dim, commutator_tensor(p.mu))


# ---------------------------------------------------------------------------
# Morphisms of O-operators
# ---------------------------------------------------------------------------

def _direct_sum_tensor(c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
    d1, d2 = c1.shape[0], c2.shape[0]
    out = zeros((d1 + d2,) * 4)
    out[:d1, :d1, :d1, :d1] = c1
    out[d1:, d1:, d1:, d1:] = c2
    return out


def check_graph_morphism(m: OOperatorMorphism) -> Check:
    """Closure of ``{((x,u), (φx, ψu))}`` in the product of the two semidirect products."""

    src, dst = m.source.pair, m.target.pair
    n, k = src.source_dim, src.module_dim
    total = _direct_sum_tensor(semidirect_tensor(src), semidirect_tensor(dst))
    size = n + k + dst.source_dim + dst.module_dim
    gens = zeros((size, n + k))
    gens[: n + k, :] = identity(n + k)
    gens[n + k: n + k + dst.source_dim, :n] = m.phi.to_array()
    gens[n + k + dst.source_dim:, n:] = m.psi.to_array()
    graph = span([tuple(gens[:, g]) for g in range(n + k)], size)
    brackets = exact_einsum("ia,jb,kc,ijkl->abcl", gens, gens, gens, total)
    for key in np.ndindex(n + k, n + k, n + k):
        vec = tuple(brackets[key])
        if not graph.contains(vec):
            return Check(
                "graph_closed",
                False,
                Witness(tuple(int(x) for x in key), tuple(format_scalar(x) for x in vec), (), ("g1", "g2", "g3")),
            )
    return Check("graph_closed", True)


def check_o_morphism(m: OOperatorMorphism) -> Report:
    phi = m.phi.to_array()
    psi = m.psi.to_array()
    T = m.source.t
    T2 = m.target.t
    theta = m.source.pair.rep.theta
    theta2 = m.target.pair.rep.theta

    phi_check = check_lts_morphism(AlgebraMorphism(m.source.pair.algebra, m.target.pair.algebra, m.phi)).checks[0]
    phi_check = Check("phi_lts_morphism", phi_check.passed, phi_check.witness)
    # φ∘T = T'∘ψ, compared column by column
    intertwine = check_residual(
        "intertwines_operators",
        exact_einsum("li,iu->ul", phi, T),
        exact_einsum("la,au->ul", T2, psi),
        1,
        ("u",),
    )
    # ψθ(x,y) = θ'(φx,φy)ψ
    compat = check_residual(
        "theta_compatible",
        exact_einsum("ac,xycb->xyab", psi, theta),
        exact_einsum("ix,jy,ijac,cb->xyab", phi, phi, theta2, psi),
        2,
        ("x", "y"),
    )
    graph = check_graph_morphism(m)
    # the graph encodes the morphism property of φ and the θ compatibility
    agreement = Check("graph_agrees", graph.passed == (phi_check.passed and compat.passed))

    prelts = check_residual(
        "preserves_induced_prelts",
        exact_einsum("ba,uvwa->uvwb", psi, induced_prelts_tensor(m.source)),
        exact_einsum("au,bv,cw,abcd->uvwd", psi, psi, psi, induced_prelts_tensor(m.target)),
        3,
        TRIPLE,
    )
    return Report("o_morphism", (phi_check, intertwine, compat, graph, agreement, prelts))
