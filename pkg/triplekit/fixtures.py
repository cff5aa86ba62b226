"""Built-in example structures and the fixture registry.

Names such as ``lts/dim2`` or ``lie/sl2/standard`` resolve to documents
without any file on disk. If ``TRIPLEKIT_FIXTURES`` names a directory, every
``*.json`` below it joins the registry under its relative path without the
suffix (``mine/alg.json`` -> ``mine/alg``). Built-in names win on collision.

Every ``lts/dim...`` name also resolves as ``paper/dim...``; the aliases are
not listed by ``FixtureRegistry.names``.
"""

from __future__ import annotations

import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .documents import LieOOperator, read_document, to_document, validate
from .errors import DocumentError
from .exactla import Matrix
from .lie_bridge import LieRepPair, LieRepresentation, adjoint_lie_rep
from .lts_core import LieStructure, LtsStructure
from .operators import OOperator, OOperatorMorphism
from .reps import LtsRepPair, adjoint_rep
from .tensors import zeros
from .utils import ScalarLike

logger = logging.getLogger(__name__)

FIXTURES_ENV = "TRIPLEKIT_FIXTURES"


# ---------------------------------------------------------------------------
# Lie triple systems from the literature
# ---------------------------------------------------------------------------

def lts_dim2() -> LtsStructure:
    """``[e1, e2, e2] = e1``."""

    return LtsStructure.from_table(2, [((0, 1, 1), {0: 1})])


def lts_dim4() -> LtsStructure:
    """``[e1, e2, e1] = e4``."""

    return LtsStructure.from_table(4, [((0, 1, 0), {3: 1})])


def lts_dim2_operator(a: ScalarLike, b: ScalarLike) -> Matrix:
    """Rota-Baxter operator ``[[0, a], [0, b]]`` on :func:`lts_dim2`."""

    return Matrix.from_rows([[0, a], [0, b]])


def lts_dim4_operator(
    a: ScalarLike,
    b: ScalarLike,
    c: ScalarLike,
    d: ScalarLike,
    e: ScalarLike,
    f: ScalarLike,
    g: ScalarLike,
    h: ScalarLike,
    k: ScalarLike,
) -> Matrix:
    """Nine-parameter Rota-Baxter operator on :func:`lts_dim4`."""

    return Matrix.from_rows(
        [
            [0, a, 0, 0],
            [0, 0, 0, 0],
            [b, c, d, e],
            [f, g, h, k],
        ]
    )


def adjoint_pair(a: LtsStructure) -> LtsRepPair:
    return LtsRepPair.of(adjoint_rep(a))


# ---------------------------------------------------------------------------
# Lie algebras with a non-adjoint representation
# ---------------------------------------------------------------------------

def _unit(m: int, a: int, b: int) -> np.ndarray:
    out = zeros((m, m))
    out[a, b] = Fraction(1)
    return out


def _rep(g: LieStructure, mats: Sequence[np.ndarray]) -> LieRepPair:
    m = mats[0].shape[0]
    rho = zeros((g.dim, m, m))
    for i, mat in enumerate(mats):
        rho[i] = mat
    return LieRepPair.of(LieRepresentation(g, m, rho))


def lie_abelian() -> LieStructure:
    return LieStructure.zero(2)


def lie_heisenberg() -> LieStructure:
    """``[x, y] = z``."""

    return LieStructure.from_table(3, [((0, 1), {2: 1})])


def lie_sl2() -> LieStructure:
    """Basis ``h, e, f`` with ``[h, e] = 2e``, ``[h, f] = -2f``, ``[e, f] = h``."""

    return LieStructure.from_table(3, [((0, 1), {1: 2}), ((0, 2), {2: -2}), ((1, 2), {0: 1})])


def lie_solvable3() -> LieStructure:
    """``[x, y] = y``, ``[x, z] = z``."""

    return LieStructure.from_table(3, [((0, 1), {1: 1}), ((0, 2), {2: 1})])


def abelian_standard() -> LieRepPair:
    ident = _unit(2, 0, 0) + _unit(2, 1, 1)
    return _rep(lie_abelian(), [_unit(2, 0, 1), ident])


def heisenberg_standard() -> LieRepPair:
    return _rep(lie_heisenberg(), [_unit(3, 0, 1), _unit(3, 1, 2), _unit(3, 0, 2)])


def sl2_standard() -> LieRepPair:
    return _rep(lie_sl2(), [_unit(2, 0, 0) - _unit(2, 1, 1), _unit(2, 0, 1), _unit(2, 1, 0)])


def solvable3_standard() -> LieRepPair:
    return _rep(lie_solvable3(), [_unit(2, 0, 0), _unit(2, 0, 1), zeros((2, 2))])


def abelian_o_operator() -> LieOOperator:
    """``T(f2) = x`` on the standard representation."""

    return LieOOperator(abelian_standard(), Matrix.from_rows([[0, 1], [0, 0]]))


def heisenberg_o_operator() -> LieOOperator:
    """``T(f3) = x + z`` on the standard representation."""

    return LieOOperator(heisenberg_standard(), Matrix.from_rows([[0, 0, 1], [0, 0, 0], [0, 0, 1]]))


def lts_dim2_morphism() -> OOperatorMorphism:
    """``phi = psi = diag(2, 1)`` from ``[[0, 1], [0, 2]]`` to ``[[0, 2], [0, 2]]``."""

    pair = adjoint_pair(lts_dim2())
    scale = Matrix.from_rows([[2, 0], [0, 1]])
    return OOperatorMorphism(
        OOperator(pair, lts_dim2_operator(1, 2)),
        OOperator(pair, lts_dim2_operator(2, 2)),
        scale,
        scale,
    )


_LTS: Dict[str, Callable[[], LtsStructure]] = {
    "lts/dim2": lts_dim2,
    "lts/dim4": lts_dim4,
}

_LIE: Dict[str, Callable[[], LieStructure]] = {
    "lie/abelian": lie_abelian,
    "lie/heisenberg": lie_heisenberg,
    "lie/sl2": lie_sl2,
    "lie/solvable3": lie_solvable3,
}

_STANDARD: Dict[str, Callable[[], LieRepPair]] = {
    "lie/abelian": abelian_standard,
    "lie/heisenberg": heisenberg_standard,
    "lie/sl2": sl2_standard,
    "lie/solvable3": solvable3_standard,
}


def _builtin_factories() -> Dict[str, Callable[[], object]]:
    out: Dict[str, Callable[[], object]] = {}
    for name, make in _LTS.items():
        out[name] = make
        out[f"{name}/adjoint"] = lambda make=make: adjoint_pair(make())
    for name, make in _LIE.items():
        out[name] = make
        out[f"{name}/adjoint"] = lambda make=make: LieRepPair.of(adjoint_lie_rep(make()))
        out[f"{name}/standard"] = _STANDARD[name]
    out["lts/dim2/rb"] = lambda: OOperator(adjoint_pair(lts_dim2()), lts_dim2_operator(1, 2))
    out["lts/dim4/rb"] = lambda: OOperator(adjoint_pair(lts_dim4()), lts_dim4_operator(*([1] * 9)))
    out["lts/dim2/rb-morphism"] = lts_dim2_morphism
    out["lie/abelian/o-operator"] = abelian_o_operator
    out["lie/heisenberg/o-operator"] = heisenberg_o_operator
    return out


BUILTIN = _builtin_factories()

# names used in the published examples; resolved but not listed
ALIASES: Dict[str, str] = {"paper" + n[len("lts"):]: n for n in BUILTIN if n.startswith("lts/dim")}


def is_builtin(name: str) -> bool:
    return name in BUILTIN or name in ALIASES


def builtin(name: str) -> object:
    try:
        return BUILTIN[ALIASES.get(name, name)]()
    except KeyError:
        raise DocumentError(f"unknown fixture {name!r}") from None


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def load_directory(root: Path) -> Dict[str, dict]:
    """Read every ``*.json`` below ``root``; unreadable files are skipped."""

    found: Dict[str, dict] = {}
    root = Path(root)
    if not root.is_dir():
        logger.warning("Fixture directory %s does not exist", root)
        return found
    for path in sorted(root.rglob("*.json")):
        name = path.relative_to(root).with_suffix("").as_posix()
        try:
            doc = read_document(path)
            validate(doc, str(path))
        except DocumentError as exc:
            logger.warning("Skipping fixture %s: %s", path, exc)
            continue
        if is_builtin(name):
            logger.warning("Fixture %s shadows a built-in name; keeping the built-in", name)
            continue
        found[name] = doc
    logger.info("Loaded %d fixtures from %s", len(found), root)
    return found


class FixtureRegistry:
    def __init__(self, extra: Optional[Dict[str, dict]] = None) -> None:
        self.extra = dict(extra or {})

    @classmethod
    def from_environment(cls) -> "FixtureRegistry":
        directory = os.environ.get(FIXTURES_ENV)
        if not directory:
            return cls()
        return cls(load_directory(Path(directory)))

    def names(self) -> List[str]:
        return sorted(set(BUILTIN) | set(self.extra))

    def document(self, name: str) -> dict:
        if is_builtin(name):
            return to_document(builtin(name))
        if name in self.extra:
            return self.extra[name]
        raise DocumentError(f"unknown fixture {name!r}")
