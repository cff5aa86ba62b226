#!/usr/bin/env python3
"""Command-line front end for triplekit.

Every command takes a TARGET: a JSON document path or a fixture name such
as ``lts/dim2/rb``. Reports go to stdout as JSON (or text with
``--output text``) and optionally to ``--out``.

Usage:
    triplekit verify --kind KIND TARGET
    triplekit cohomology --flavor FLAVOR --degree N TARGET
    triplekit deform {check,equivalence,nijenhuis,rigidity,trivial} TARGET [--order N] [--candidates basis]
    triplekit bridge {from-lie,transfer-cocycle} TARGET [--operator REF] [--out FILE]
    triplekit report [--fixtures NAME ...] [--out FILE]
    python -m triplekit.cli ...

Exit status is 0 when every check passes, 1 when the mathematics says no
and 2 for unusable input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence

from . import sweep_log
from .cohomology import CohomologyReport, o_operator_cohomology, yamaguti_cohomology
from .deformations import (
    DEFAULT_ORDER,
    DeformationSeries,
    EquivalencePair,
    check_equivalence,
    check_formal,
    check_nijenhuis_element,
    check_trivial_deformation,
    rigidity_certificate,
)
from .documents import (
    DeformationDocument,
    LieCochainDocument,
    LieOOperator,
    Workspace,
    build,
    dumps_canonical,
    to_document,
)
from .errors import VERDICT_ERRORS, DocumentError, TriplekitError
from .fixtures import FixtureRegistry
from .lie_bridge import (
    LieRepPair,
    adjoint_lie_rep,
    ce_cohomology,
    check_lie_o_operator,
    check_lie_rep,
    lie_o_operator_cohomology,
    lts_rep_from_lie,
    transfer_1cocycle,
    transfer_2cocycle,
    transfer_o_operator,
    transfer_T_cocycles,
)
from .lts_core import Bivector, LieStructure, LtsStructure, check_lie_axioms, check_lts_axioms
from .operators import (
    NijenhuisCandidate,
    OOperator,
    OOperatorMorphism,
    PreLts,
    check_four_way,
    check_nijenhuis_operator,
    check_o_morphism,
    check_o_operator,
    check_prelts_axioms,
    check_rota_baxter,
)
from .reports import Report, merge
from .reps import LtsRepPair, adjoint_rep, check_rep_axioms

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT = "json"
DEFAULT_MAX_DEGREE = 5

VERIFY_KINDS = ("lts", "lie", "rep", "rb", "o-op", "nijenhuis", "prelts", "morphism")
FLAVORS = ("yamaguti", "o-operator", "chevalley-eilenberg", "lie-o-operator")


# ---------------------------------------------------------------------------
# Coercions
# ---------------------------------------------------------------------------

def _expect(obj: Any, *types: type) -> Any:
    if not isinstance(obj, types):
        names = " or ".join(t.__name__ for t in types)
        raise DocumentError(f"expected {names}, got {type(obj).__name__}")
    return obj


def _as_lts(obj: Any) -> LtsStructure:
    if isinstance(obj, LtsRepPair):
        return obj.algebra
    if isinstance(obj, OOperator):
        return obj.pair.algebra
    if isinstance(obj, NijenhuisCandidate):
        return obj.algebra
    return _expect(obj, LtsStructure)


def _as_lie(obj: Any) -> LieStructure:
    if isinstance(obj, LieRepPair):
        return obj.algebra
    if isinstance(obj, LieOOperator):
        return obj.pair.algebra
    return _expect(obj, LieStructure)


def _as_lts_pair(obj: Any) -> LtsRepPair:
    if isinstance(obj, LtsStructure):
        return LtsRepPair.of(adjoint_rep(obj))
    if isinstance(obj, OOperator):
        return obj.pair
    return _expect(obj, LtsRepPair)


def _as_lie_pair(obj: Any) -> LieRepPair:
    if isinstance(obj, LieStructure):
        return LieRepPair.of(adjoint_lie_rep(obj))
    if isinstance(obj, LieOOperator):
        return obj.pair
    return _expect(obj, LieRepPair)


def _as_deformation(obj: Any) -> DeformationDocument:
    if isinstance(obj, OOperator):
        return DeformationDocument(DeformationSeries(obj))
    return _expect(obj, DeformationDocument)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _verify_rb(obj: Any) -> Report:
    t = _expect(obj, OOperator)
    if t.pair.rep != adjoint_rep(t.pair.algebra):
        raise DocumentError("Rota-Baxter check needs an operator on the adjoint representation")
    return check_rota_baxter(t.pair.algebra, t.matrix)


def _verify_o_op(obj: Any) -> Report:
    if isinstance(obj, LieOOperator):
        return check_lie_o_operator(obj.pair, obj.matrix)
    t = _expect(obj, OOperator)
    report = check_o_operator(t)
    return Report(report.title, report.checks, {**report.details, "four_way": check_four_way(t)})


def _verify_rep(obj: Any) -> Report:
    if isinstance(obj, (LieRepPair, LieStructure)):
        return check_lie_rep(_as_lie_pair(obj).rep)
    return check_rep_axioms(_as_lts_pair(obj).rep)


_VERIFIERS: Dict[str, Callable[[Any], Report]] = {
    "lts": lambda obj: check_lts_axioms(_as_lts(obj)),
    "lie": lambda obj: check_lie_axioms(_as_lie(obj)),
    "rep": _verify_rep,
    "rb": _verify_rb,
    "o-op": _verify_o_op,
    "nijenhuis": lambda obj: check_nijenhuis_operator(_expect(obj, NijenhuisCandidate)),
    "prelts": lambda obj: check_prelts_axioms(_expect(obj, PreLts)),
    "morphism": lambda obj: check_o_morphism(_expect(obj, OOperatorMorphism)),
}


def cmd_verify(obj: Any, kind: str) -> Report:
    return _VERIFIERS[kind](obj)


def cmd_cohomology(obj: Any, flavor: str, degree: int) -> CohomologyReport:
    if degree > DEFAULT_MAX_DEGREE:
        raise DocumentError(f"degrees above {DEFAULT_MAX_DEGREE} are not supported, got {degree}")
    if flavor == "yamaguti":
        return yamaguti_cohomology(_as_lts_pair(obj), degree)
    if flavor == "o-operator":
        return o_operator_cohomology(_expect(obj, OOperator), degree)
    if flavor == "chevalley-eilenberg":
        return ce_cohomology(_as_lie_pair(obj), degree)
    op = _expect(obj, LieOOperator)
    return lie_o_operator_cohomology(op.pair, op.matrix, degree)


def cmd_deform(obj: Any, action: str, order: Optional[int] = None, candidates: Optional[str] = None) -> Report:
    doc = _as_deformation(obj)
    series = doc.series
    t = series.base
    n = t.pair.source_dim
    x = doc.bivector if doc.bivector is not None else Bivector.zero(n)
    if action == "check":
        return check_formal(series, DEFAULT_ORDER if order is None else order)
    if action == "nijenhuis":
        return check_nijenhuis_element(t, x).to_report()
    if action == "equivalence":
        if doc.other is None or doc.bivector is None:
            raise DocumentError("equivalence needs 'other' coefficients and a 'bivector'")
        return check_equivalence(t, series, doc.other, x)
    if action == "rigidity":
        pool = Bivector.basis(n) if candidates == "basis" else list(doc.candidates)
        return rigidity_certificate(t, pool)
    equivalence = doc.equivalence or EquivalencePair(x)
    return check_trivial_deformation(t, series, equivalence)


def cmd_bridge(obj: Any, action: str, operator: Any = None):
    """Return ``(document or None, report)``."""

    if action == "from-lie":
        if isinstance(obj, LieOOperator):
            transferred = transfer_o_operator(obj.pair, obj.matrix)
            return to_document(transferred.value), transferred.report
        pair = lts_rep_from_lie(_as_lie_pair(obj))
        return to_document(pair), check_rep_axioms(pair.rep)
    cochain = _expect(obj, LieCochainDocument)
    f = cochain.cochain
    if operator is not None:
        op = _expect(operator, LieOOperator)
        transferred = transfer_T_cocycles(op.pair, op.matrix, f)
    elif f.degree == 1:
        transferred = transfer_1cocycle(cochain.pair, f)
    elif f.degree == 2:
        transferred = transfer_2cocycle(cochain.pair, f)
    else:
        raise DocumentError(f"only degree 1 and 2 cochains transfer, got degree {f.degree}")
    values = transferred.value.values
    details = {"degree": transferred.value.degree, "shape": list(values.shape)}
    return None, merge("transfer_cocycle", [transferred.report], details)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _add_common(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--output", choices=("json", "text"), default=DEFAULT_OUTPUT, help="Report format")
    ap.add_argument("--out", help="Also write the report (or emitted document) to this file")
    ap.add_argument("--log-level", default="WARNING", help="Logging level")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="triplekit", description="Exact checks and cohomology for Lie triple systems")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="Run an axiom checker")
    p.add_argument("target")
    p.add_argument("--kind", choices=VERIFY_KINDS, required=True)
    _add_common(p)

    p = sub.add_parser("cohomology", help="Compute cocycle, coboundary and cohomology dimensions")
    p.add_argument("target")
    p.add_argument("--flavor", choices=FLAVORS, default="yamaguti")
    p.add_argument("--degree", type=int, default=1)
    _add_common(p)

    p = sub.add_parser("deform", help="Deformation checks for an O-operator")
    p.add_argument("action", choices=("check", "equivalence", "nijenhuis", "rigidity", "trivial"))
    p.add_argument("target")
    p.add_argument("--order", type=int, help=f"Truncation order (default {DEFAULT_ORDER})")
    p.add_argument("--candidates", choices=("basis", "document"), default="document")
    _add_common(p)

    p = sub.add_parser("bridge", help="Carry Lie-side structures to triple systems")
    p.add_argument("action", choices=("from-lie", "transfer-cocycle"))
    p.add_argument("target")
    p.add_argument("--operator", help="Lie O-operator whose cohomology the cochain belongs to")
    _add_common(p)

    p = sub.add_parser("report", help="Write the fixture sweep workbook")
    sweep_log.add_arguments(p)
    p.add_argument("--log-level", default="WARNING", help="Logging level")
    return ap


def _emit(payload: Dict[str, Any], text: str, args: argparse.Namespace) -> None:
    rendered = dumps_canonical(payload) if args.output == "json" else text + "\n"
    sys.stdout.write(rendered)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
        logger.info("Wrote report to %s", args.out)


def _run(args: argparse.Namespace) -> int:
    if args.command == "report":
        df = sweep_log.run_sweep(args.fixtures, Path(args.out))
        print(f"Wrote {len(df)} rows to {args.out}")
        return 0

    workspace = Workspace(FixtureRegistry.from_environment().document)
    obj = build(workspace.load(args.target))

    if args.command == "cohomology":
        result = cmd_cohomology(obj, args.flavor, args.degree)
        _emit(result.to_dict(), result.summary(), args)
        return 0

    if args.command == "bridge":
        operator = build(workspace.load(args.operator)) if args.operator else None
        document, report = cmd_bridge(obj, args.action, operator)
        if document is not None:
            if args.out:
                Path(args.out).write_text(dumps_canonical(document), encoding="utf-8")
                logger.info("Wrote %s document to %s", document["kind"], args.out)
                args.out = None
            payload = {"document": document, "report": report.to_dict()}
        else:
            payload = report.to_dict()
        _emit(payload, report.summary(), args)
        return 0 if report.passed else 1

    if args.command == "verify":
        report = cmd_verify(obj, args.kind)
    else:
        report = cmd_deform(obj, args.action, args.order, args.candidates)
    _emit(report.to_dict(), report.summary(), args)
    return 0 if report.passed else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except VERDICT_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except (TriplekitError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
