"""Structured pass/fail reports returned by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .tensors import first_nonzero
from .utils import format_scalar


@dataclass(frozen=True)
class Witness:
    """Smallest failing basis tuple with both side values."""

    indices: Tuple[int, ...]
    lhs: Tuple[str, ...]
    rhs: Tuple[str, ...]
    labels: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "indices": list(self.indices),
            "lhs": list(self.lhs),
            "rhs": list(self.rhs),
        }
        if self.labels:
            out["labels"] = list(self.labels)
        return out


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: Optional[Witness] = None

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"name": self.name, "passed": self.passed}
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


@dataclass(frozen=True)
class Report:
    title: str
    checks: Tuple[Check, ...]
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed_checks(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def first_failure(self) -> Optional[Check]:
        failed = self.failed_checks()
        return failed[0] if failed else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "details": self.details,
        }

    def summary(self) -> str:
        """One line per check, used by the text output mode."""

        lines = [f"{self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            line = f"  {c.name}: {'pass' if c.passed else 'FAIL'}"
            if c.witness is not None:
                line += f" at {c.witness.indices} lhs={list(c.witness.lhs)} rhs={list(c.witness.rhs)}"
            lines.append(line)
        for key, value in self.details.items():
            lines.append(f"  {key} = {value}")
        return "\n".join(lines)


def merge(title: str, reports: Iterable[Report], details: Optional[Dict[str, Any]] = None) -> Report:
    checks: List[Check] = []
    for rep in reports:
        checks.extend(Check(f"{rep.title}.{c.name}", c.passed, c.witness) for c in rep.checks)
    return Report(title, tuple(checks), dict(details or {}))


def _vector_text(values: np.ndarray) -> Tuple[str, ...]:
    return tuple(format_scalar(v) for v in np.asarray(values).reshape(-1).tolist())


def check_residual(
    name: str,
    lhs: np.ndarray,
    rhs: np.ndarray,
    tuple_rank: int,
    labels: Sequence[str] = (),
) -> Check:
    """Compare two tensors whose leading ``tuple_rank`` axes index basis tuples.

    The trailing axes hold the value (a vector or a matrix). On failure the
    witness is the lexicographically smallest basis tuple where they differ.
    """

    lhs = np.asarray(lhs, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    if lhs.shape != rhs.shape:
        raise ValueError(f"{name}: shape {lhs.shape} vs {rhs.shape}")
    hit = first_nonzero(lhs - rhs)
    if hit is None:
        return Check(name, True)
    key = hit[:tuple_rank]
    return Check(
        name,
        False,
        Witness(key, _vector_text(lhs[key]), _vector_text(rhs[key]), tuple(labels)),
    )


def check_flag(name: str, passed: bool, indices: Tuple[int, ...] = ()) -> Check:
    if passed:
        return Check(name, True)
    return Check(name, False, Witness(indices, (), ()))


def as_check(name: str, report: Report) -> Check:
    """Collapse a report into one check carrying its first witness."""

    failure = report.first_failure()
    return Check(name, failure is None, failure.witness if failure else None)
