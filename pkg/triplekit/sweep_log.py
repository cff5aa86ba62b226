#!/usr/bin/env python3
"""Tabulate axiom verdicts and cohomology dimensions over fixtures.

One row per fixture: its kind, dimensions, the verdict of the matching
axiom checker and the cohomology dimensions that make sense for it
(Yamaguti for triple systems and pairs, O-operator cohomology for
O-operators, Chevalley-Eilenberg on the Lie side). The table is written to
an Excel workbook.

Usage:
    triplekit-sweep [--fixtures NAME ...] [--out FILE]
    python -m triplekit.sweep_log [--fixtures NAME ...] [--out FILE]

Without ``--fixtures`` every built-in fixture is swept, plus those found
under ``TRIPLEKIT_FIXTURES``.
"""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import pandas as pd
from openpyxl.styles import Font

from .cohomology import o_operator_cohomology, yamaguti_cohomology
from .documents import LieOOperator, Workspace, build
from .errors import TriplekitError
from .fixtures import FixtureRegistry
from .lie_bridge import (
    LieRepPair,
    adjoint_lie_rep,
    ce_cohomology,
    check_lie_o_operator,
    check_lie_rep,
    lie_o_operator_cohomology,
)
from .lts_core import LieStructure, LtsStructure, check_lie_axioms, check_lts_axioms
from .operators import OOperator, OOperatorMorphism, check_o_morphism, check_o_operator
from .reps import LtsRepPair, adjoint_rep, check_rep_axioms

logger = logging.getLogger(__name__)

DEFAULT_SWEEP_NAME = "triplekit_sweep.xlsx"
SHEET_NAME = "Sweep"

COLUMNS = [
    "fixture",
    "kind",
    "dim",
    "module_dim",
    "axioms",
    "H1",
    "H3",
    "CE_H1",
    "CE_H2",
    "error",
]

# dim_H columns filled per object type
_ODD = (1, 3)
_CE = (1, 2)


def _verdict(passed: bool) -> str:
    return "pass" if passed else "FAIL"


def _lts_pair_row(pair: LtsRepPair, row: Dict[str, Any]) -> None:
    report = check_rep_axioms(pair.rep)
    row["axioms"] = _verdict(report.passed)
    if report.passed:
        for degree in _ODD:
            row[f"H{degree}"] = yamaguti_cohomology(pair, degree).dim_H


def _lie_pair_row(pair: LieRepPair, row: Dict[str, Any]) -> None:
    report = check_lie_rep(pair.rep)
    row["axioms"] = _verdict(report.passed)
    if report.passed:
        for degree in _CE:
            row[f"CE_H{degree}"] = ce_cohomology(pair, degree).dim_H


def sweep_row(name: str, obj: Any) -> Dict[str, Any]:
    row: Dict[str, Any] = {"fixture": name, "kind": type(obj).__name__}
    if isinstance(obj, LtsStructure):
        row.update(dim=obj.dim, module_dim=obj.dim)
        report = check_lts_axioms(obj)
        if report.passed:
            _lts_pair_row(LtsRepPair.of(adjoint_rep(obj)), row)
        row["axioms"] = _verdict(report.passed)
    elif isinstance(obj, LtsRepPair):
        row.update(dim=obj.source_dim, module_dim=obj.module_dim)
        _lts_pair_row(obj, row)
    elif isinstance(obj, OOperator):
        row.update(dim=obj.pair.source_dim, module_dim=obj.pair.module_dim)
        report = check_o_operator(obj)
        row["axioms"] = _verdict(report.passed)
        if report.passed:
            for degree in _ODD:
                row[f"H{degree}"] = o_operator_cohomology(obj, degree).dim_H
    elif isinstance(obj, OOperatorMorphism):
        row.update(dim=obj.source.pair.source_dim, module_dim=obj.source.pair.module_dim)
        row["axioms"] = _verdict(check_o_morphism(obj).passed)
    elif isinstance(obj, LieStructure):
        row.update(dim=obj.dim, module_dim=obj.dim)
        report = check_lie_axioms(obj)
        if report.passed:
            _lie_pair_row(LieRepPair.of(adjoint_lie_rep(obj)), row)
        row["axioms"] = _verdict(report.passed)
    elif isinstance(obj, LieRepPair):
        row.update(dim=obj.source_dim, module_dim=obj.module_dim)
        _lie_pair_row(obj, row)
    elif isinstance(obj, LieOOperator):
        row.update(dim=obj.pair.source_dim, module_dim=obj.pair.module_dim)
        report = check_lie_o_operator(obj.pair, obj.matrix)
        row["axioms"] = _verdict(report.passed)
        if report.passed:
            for degree in _CE:
                row[f"CE_H{degree}"] = lie_o_operator_cohomology(obj.pair, obj.matrix, degree).dim_H
    else:
        row["error"] = f"nothing to sweep for {type(obj).__name__}"
    return row


def collect_sweep(names: Iterable[str], registry: Optional[FixtureRegistry] = None) -> List[Dict[str, Any]]:
    registry = registry or FixtureRegistry.from_environment()
    workspace = Workspace(registry.document)
    rows = []
    for name in names:
        try:
            row = sweep_row(name, build(workspace.load(name)))
        except TriplekitError as exc:
            logger.warning("Fixture %s failed: %s", name, exc)
            row = {"fixture": name, "error": str(exc)}
        logger.debug("swept %s: %s", name, row)
        rows.append(row)
    return rows


def build_dataframe(rows: Sequence[Dict[str, Any]]) -> pd.DataFrame:
    df = pd.DataFrame(list(rows))
    for col in COLUMNS:
        if col not in df.columns:
            df[col] = None
    return df[COLUMNS]


# -------------------------------------------------------------
# Excel logging
# -------------------------------------------------------------
def write_excel(df: pd.DataFrame, logfile: Path) -> None:
    logfile = Path(logfile)
    logfile.parent.mkdir(parents=True, exist_ok=True)
    with pd.ExcelWriter(logfile, engine="openpyxl") as writer:
        df.to_excel(writer, sheet_name=SHEET_NAME, index=False)
        ws = writer.sheets[SHEET_NAME]
        for cell in ws[1]:
            cell.font = Font(bold=True)
        for column in ws.columns:
            width = max(len(str(c.value)) if c.value is not None else 0 for c in column)
            ws.column_dimensions[column[0].column_letter].width = width + 2
    logger.info("Wrote %d rows to %s", len(df), logfile)


def run_sweep(names: Optional[Sequence[str]] = None, logfile: Path = Path(DEFAULT_SWEEP_NAME)) -> pd.DataFrame:
    registry = FixtureRegistry.from_environment()
    df = build_dataframe(collect_sweep(names or registry.names(), registry))
    write_excel(df, logfile)
    return df


def add_arguments(ap: argparse.ArgumentParser) -> None:
    ap.add_argument("--fixtures", nargs="+", metavar="NAME", help="Fixture names to sweep (default: all)")
    ap.add_argument("--out", default=DEFAULT_SWEEP_NAME, help="Workbook to write")


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(description="Tabulate fixture verdicts and cohomology dimensions")
    add_arguments(ap)
    ap.add_argument("--log-level", default="WARNING", help="Logging level")
    args = ap.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    try:
        df = run_sweep(args.fixtures, Path(args.out))
    except (OSError, TriplekitError) as e:
        print(f"Error: {e}")
        return 2
    print(f"Wrote {len(df)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
