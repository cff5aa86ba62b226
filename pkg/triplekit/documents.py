"""JSON documents for algebras, representations, operators and cochains.

Every document is an object with a ``kind``. Indices are 0-based and every
scalar is a ``"p/q"`` string (or an integer). Fields that point at another
structure (``algebra``, ``pair``, ``operator``, ...) hold either an inline
document, a fixture name such as ``lts/dim2``, or a path ending in
``.json`` relative to the referring file. :class:`Workspace` resolves all of
them before anything is built.

Emitted documents are canonical: sorted keys, two-space indent, reduced
fractions.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import jsonschema
import numpy as np

from .deformations import DeformationSeries, EquivalencePair
from .errors import DocumentError
from .exactla import Matrix
from .lie_bridge import LieCochain, LieRepPair, LieRepresentation
from .lts_core import Bivector, LieStructure, LtsStructure, pair_basis
from .operators import NijenhuisCandidate, OOperator, OOperatorMorphism, PreLts
from .reps import LtsRepPair, LtsRepresentation, adjoint_rep
from .tensors import as_fraction_array, zeros
from .utils import format_scalar, parse_scalar

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Schemas
# ---------------------------------------------------------------------------

_SCALAR = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
    ]
}
_INDEX = {"type": "integer", "minimum": 0}
_VALUE_MAP = {
    "type": "object",
    "description": "Sparse vector: output index -> scalar",
    "patternProperties": {r"^\d+$": _SCALAR},
    "additionalProperties": False,
}
_MATRIX = {
    "type": "object",
    "properties": {
        "rows": _INDEX,
        "cols": _INDEX,
        "entries": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
    },
    "required": ["rows", "cols", "entries"],
}
_SQUARE_LIST = {"type": "array", "items": {"type": "array", "items": _SCALAR}}
_REF = {
    "description": "Inline document, fixture name or relative .json path",
    "oneOf": [{"type": "string", "minLength": 1}, {"type": "object", "required": ["kind"]}],
}
_BIVECTOR = {
    "type": "object",
    "properties": {
        "dim": _INDEX,
        "coefficients": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "pair": {"type": "array", "items": _INDEX, "minItems": 2, "maxItems": 2},
                    "value": _SCALAR,
                },
                "required": ["pair", "value"],
            },
        },
    },
    "required": ["dim"],
}


def _table_schema(arity: int) -> Dict[str, Any]:
    return {
        "type": "array",
        "items": {
            "type": "object",
            "properties": {
                "args": {"type": "array", "items": _INDEX, "minItems": arity, "maxItems": arity},
                "value": _VALUE_MAP,
            },
            "required": ["args", "value"],
            "additionalProperties": False,
        },
    }


def _schema(kind: str, properties: Dict[str, Any], required: Sequence[str]) -> Dict[str, Any]:
    return {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "title": kind,
        "type": "object",
        "properties": {"kind": {"const": kind}, "name": {"type": "string"}, **properties},
        "required": ["kind", *required],
    }


SCHEMAS: Dict[str, Dict[str, Any]] = {
    "lts": _schema("lts", {"dim": _INDEX, "brackets": _table_schema(3)}, ["dim"]),
    "lie": _schema("lie", {"dim": _INDEX, "brackets": _table_schema(2)}, ["dim"]),
    "prelts": _schema("prelts", {"dim": _INDEX, "products": _table_schema(3)}, ["dim"]),
    "lts-rep": _schema(
        "lts-rep",
        {
            "algebra": _REF,
            "module_dim": _INDEX,
            "theta": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "pair": {"type": "array", "items": _INDEX, "minItems": 2, "maxItems": 2},
                        "matrix": _SQUARE_LIST,
                    },
                    "required": ["pair", "matrix"],
                },
            },
        },
        ["algebra", "module_dim"],
    ),
    "lie-rep": _schema(
        "lie-rep",
        {
            "algebra": _REF,
            "module_dim": _INDEX,
            "rho": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {"index": _INDEX, "matrix": _SQUARE_LIST},
                    "required": ["index", "matrix"],
                },
            },
        },
        ["algebra", "module_dim"],
    ),
    "o-operator": _schema("o-operator", {"pair": _REF, "operator": _MATRIX}, ["pair", "operator"]),
    "rota-baxter": _schema("rota-baxter", {"algebra": _REF, "operator": _MATRIX}, ["algebra", "operator"]),
    "nijenhuis": _schema("nijenhuis", {"algebra": _REF, "operator": _MATRIX}, ["algebra", "operator"]),
    "o-morphism": _schema(
        "o-morphism",
        {"source": _REF, "target": _REF, "phi": _MATRIX, "psi": _MATRIX},
        ["source", "target", "phi", "psi"],
    ),
    "deformation": _schema(
        "deformation",
        {
            "operator": _REF,
            "coefficients": {"type": "array", "items": _MATRIX},
            "other": {"type": "array", "items": _MATRIX},
            "bivector": _BIVECTOR,
            "higher_phi": {"type": "array", "items": _MATRIX},
            "higher_psi": {"type": "array", "items": _MATRIX},
            "candidates": {"type": "array", "items": _BIVECTOR},
        },
        ["operator"],
    ),
    "lie-o-operator": _schema("lie-o-operator", {"pair": _REF, "operator": _MATRIX}, ["pair", "operator"]),
    "lie-cochain": _schema(
        "lie-cochain",
        {"pair": _REF, "degree": _INDEX, "values": {}},
        ["pair", "degree", "values"],
    ),
}

# field -> kinds it may resolve to
REF_FIELDS: Dict[str, Dict[str, Tuple[str, ...]]] = {
    "lts-rep": {"algebra": ("lts",)},
    "lie-rep": {"algebra": ("lie",)},
    "o-operator": {"pair": ("lts-rep",)},
    "rota-baxter": {"algebra": ("lts",)},
    "nijenhuis": {"algebra": ("lts",)},
    "o-morphism": {"source": ("o-operator", "rota-baxter"), "target": ("o-operator", "rota-baxter")},
    "deformation": {"operator": ("o-operator", "rota-baxter")},
    "lie-o-operator": {"pair": ("lie-rep",)},
    "lie-cochain": {"pair": ("lie-rep",)},
}

KINDS = tuple(SCHEMAS)


def validate(doc: Any, location: str = "$") -> str:
    """Check ``doc`` against the schema of its kind and return the kind."""

    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object", location)
    kind = doc.get("kind")
    if kind not in SCHEMAS:
        raise DocumentError(f"unknown document kind {kind!r}; expected one of {', '.join(KINDS)}", location)
    validator = jsonschema.Draft7Validator(SCHEMAS[kind])
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        path = "/".join(str(p) for p in error.absolute_path)
        raise DocumentError(error.message, f"{location}/{path}" if path else location)
    return kind


# ---------------------------------------------------------------------------
# Canonical text
# ---------------------------------------------------------------------------

def dumps_canonical(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"{source}: line {exc.lineno} column {exc.colno}") from exc


def read_document(path: Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return loads(text, str(path))


# ---------------------------------------------------------------------------
# Resolution
# ---------------------------------------------------------------------------

class Workspace:
    """Loads documents and resolves every cross-reference before building.

    ``lookup`` maps a fixture name to its (unresolved) document; the CLI
    passes :meth:`triplekit.fixtures.FixtureRegistry.document`.
    """

    def __init__(self, lookup: Optional[Callable[[str], dict]] = None) -> None:
        self._lookup = lookup
        self.documents: Dict[str, dict] = {}

    def load(self, target: str) -> dict:
        path = Path(target)
        if path.suffix == ".json" or path.is_file():
            doc = read_document(path)
            resolved = self.resolve(doc, path.parent, str(path))
        else:
            resolved = self.resolve(self._named(target, Path.cwd()), Path.cwd(), target, (target,))
        self.documents[target] = resolved
        logger.info("Loaded %s document %s", resolved["kind"], target)
        return resolved

    def resolve(
        self,
        doc: Any,
        base_dir: Optional[Path] = None,
        location: str = "$",
        seen: Tuple[str, ...] = (),
    ) -> dict:
        base_dir = base_dir or Path.cwd()
        kind = validate(doc, location)
        out = dict(doc)
        for name, kinds in REF_FIELDS.get(kind, {}).items():
            if name not in doc:
                continue
            ref = doc[name]
            sub_seen = seen
            sub_dir = base_dir
            if isinstance(ref, str):
                if ref in seen:
                    raise DocumentError(f"reference cycle through {ref!r}", f"{location}/{name}")
                sub_seen = seen + (ref,)
                if ref.endswith(".json"):
                    sub_dir = (base_dir / ref).parent
                ref = self._named(ref, base_dir)
            resolved = self.resolve(ref, sub_dir, f"{location}/{name}", sub_seen)
            if resolved["kind"] not in kinds:
                raise DocumentError(
                    f"expected a {' or '.join(kinds)} document, got {resolved['kind']!r}",
                    f"{location}/{name}",
                )
            out[name] = resolved
        return out

    def _named(self, ref: str, base_dir: Path) -> dict:
        if ref.endswith(".json"):
            return read_document(base_dir / ref)
        if self._lookup is None:
            raise DocumentError(f"unknown fixture {ref!r}")
        return self._lookup(ref)


# ---------------------------------------------------------------------------
# Building objects
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieOOperator:
    pair: LieRepPair
    matrix: Matrix


@dataclass(frozen=True)
class LieCochainDocument:
    pair: LieRepPair
    cochain: LieCochain


@dataclass(frozen=True)
class DeformationDocument:
    series: DeformationSeries
    other: Optional[DeformationSeries] = None
    bivector: Optional[Bivector] = None
    equivalence: Optional[EquivalencePair] = None
    candidates: Tuple[Bivector, ...] = field(default_factory=tuple)


def _matrix(doc: Mapping[str, Any]) -> Matrix:
    return Matrix.from_rows(doc["entries"], doc["cols"]) if doc["entries"] else Matrix(doc["rows"], doc["cols"], ())


def _sized_matrix(doc: Mapping[str, Any], location: str) -> Matrix:
    m = _matrix(doc)
    if m.rows != doc["rows"]:
        raise DocumentError(f"{m.rows} rows listed, header says {doc['rows']}", location)
    return m


def _table(entries: Sequence[Mapping[str, Any]]) -> List[Tuple[Tuple[int, ...], Dict[int, Fraction]]]:
    return [
        (tuple(e["args"]), {int(k): parse_scalar(v) for k, v in e["value"].items()})
        for e in entries
    ]


def _check_index(value: int, bound: int, location: str) -> int:
    if value >= bound:
        raise DocumentError(f"index {value} out of range for dimension {bound}", location)
    return value


def _square(rows: Sequence[Sequence[Any]], m: int, location: str) -> np.ndarray:
    if len(rows) != m or any(len(r) != m for r in rows):
        raise DocumentError(f"expected a {m}x{m} matrix", location)
    return Matrix.from_rows(rows, m).to_array() if m else zeros((0, 0))


def _bivector(doc: Mapping[str, Any]) -> Bivector:
    pairs: Dict[Tuple[int, int], Fraction] = {}
    for e in doc.get("coefficients", []):
        i, j = e["pair"]
        pairs[(i, j)] = pairs.get((i, j), Fraction(0)) + parse_scalar(e["value"])
    return Bivector.from_pairs(doc["dim"], pairs)


def _nested(values: Any, shape: Tuple[int, ...], location: str) -> np.ndarray:
    try:
        arr = as_fraction_array(values)
    except (ValueError, TypeError) as exc:
        raise DocumentError(f"values must be a nested list of scalars: {exc}", location) from exc
    if arr.shape != shape:
        raise DocumentError(f"values of shape {list(arr.shape)}, expected {list(shape)}", location)
    return arr


def _lts(doc) -> LtsStructure:
    return LtsStructure.from_table(doc["dim"], _table(doc.get("brackets", [])))


def _lie(doc) -> LieStructure:
    return LieStructure.from_table(doc["dim"], _table(doc.get("brackets", [])))


def _lts_pair(doc) -> LtsRepPair:
    a = _lts(doc["algebra"])
    m = doc["module_dim"]
    theta = zeros((a.dim, a.dim, m, m))
    for k, e in enumerate(doc.get("theta", [])):
        i, j = (_check_index(x, a.dim, f"$/theta/{k}/pair") for x in e["pair"])
        theta[i, j] = _square(e["matrix"], m, f"$/theta/{k}")
    return LtsRepPair.of(LtsRepresentation(a, m, theta))


def _lie_pair(doc) -> LieRepPair:
    g = _lie(doc["algebra"])
    m = doc["module_dim"]
    rho = zeros((g.dim, m, m))
    for k, e in enumerate(doc.get("rho", [])):
        rho[_check_index(e["index"], g.dim, f"$/rho/{k}/index")] = _square(e["matrix"], m, f"$/rho/{k}")
    return LieRepPair.of(LieRepresentation(g, m, rho))


def _o_operator(doc) -> OOperator:
    if doc["kind"] == "rota-baxter":
        a = _lts(doc["algebra"])
        return OOperator(LtsRepPair.of(adjoint_rep(a)), _sized_matrix(doc["operator"], "$/operator"))
    return OOperator(_lts_pair(doc["pair"]), _sized_matrix(doc["operator"], "$/operator"))


def _prelts(doc) -> PreLts:
    n = doc["dim"]
    mu = zeros((n,) * 4)
    for k, (args, value) in enumerate(_table(doc.get("products", []))):
        for x in args + tuple(value):
            _check_index(x, n, f"$/products/{k}")
        for l, q in value.items():
            mu[args + (l,)] = q
    return PreLts(n, mu)


def _deformation(doc) -> DeformationDocument:
    base = _o_operator(doc["operator"])
    series = DeformationSeries(base, tuple(_matrix(m) for m in doc.get("coefficients", [])))
    other = None
    if "other" in doc:
        other = DeformationSeries(base, tuple(_matrix(m) for m in doc["other"]))
    x = _bivector(doc["bivector"]) if "bivector" in doc else None
    equivalence = None
    if x is not None:
        equivalence = EquivalencePair(
            x,
            tuple(_matrix(m) for m in doc.get("higher_phi", [])),
            tuple(_matrix(m) for m in doc.get("higher_psi", [])),
        )
    candidates = tuple(_bivector(c) for c in doc.get("candidates", []))
    return DeformationDocument(series, other, x, equivalence, candidates)


def _lie_cochain(doc) -> LieCochainDocument:
    p = _lie_pair(doc["pair"])
    degree = doc["degree"]
    shape = (p.source_dim,) * degree + (p.module_dim,)
    values = _nested(doc["values"], shape, "$/values")
    return LieCochainDocument(p, LieCochain(degree, p.source_dim, p.module_dim, values))


_BUILDERS: Dict[str, Callable[[dict], Any]] = {
    "lts": _lts,
    "lie": _lie,
    "prelts": _prelts,
    "lts-rep": _lts_pair,
    "lie-rep": _lie_pair,
    "o-operator": _o_operator,
    "rota-baxter": _o_operator,
    "nijenhuis": lambda d: NijenhuisCandidate(_lts(d["algebra"]), _sized_matrix(d["operator"], "$/operator")),
    "o-morphism": lambda d: OOperatorMorphism(
        _o_operator(d["source"]),
        _o_operator(d["target"]),
        _sized_matrix(d["phi"], "$/phi"),
        _sized_matrix(d["psi"], "$/psi"),
    ),
    "deformation": _deformation,
    "lie-o-operator": lambda d: LieOOperator(_lie_pair(d["pair"]), _sized_matrix(d["operator"], "$/operator")),
    "lie-cochain": _lie_cochain,
}


def build(doc: Mapping[str, Any]) -> Any:
    """Turn a resolved document into package objects.

    ``rota-baxter`` documents become O-operators on the adjoint pair.
    """

    kind = doc["kind"]
    for name in REF_FIELDS.get(kind, {}):
        if isinstance(doc.get(name), str):
            raise DocumentError(f"unresolved reference {doc[name]!r}", f"$/{name}")
    return _BUILDERS[kind](doc)


# ---------------------------------------------------------------------------
# Emitting documents
# ---------------------------------------------------------------------------

def _value_map(vec: Sequence[Fraction]) -> Dict[str, str]:
    return {str(l): format_scalar(q) for l, q in enumerate(vec) if q}


def _rows(arr: np.ndarray) -> List[List[str]]:
    return [[format_scalar(q) for q in row] for row in np.asarray(arr).tolist()]


def matrix_document(m: Matrix) -> Dict[str, Any]:
    return {"rows": m.rows, "cols": m.cols, "entries": [[format_scalar(q) for q in r] for r in m.to_rows()]}


def bivector_document(x: Bivector) -> Dict[str, Any]:
    return {
        "dim": x.dim,
        "coefficients": [
            {"pair": [i, j], "value": format_scalar(x.coeffs[i, j])}
            for i, j in pair_basis(x.dim)
            if x.coeffs[i, j]
        ],
    }


def _lts_document(a: LtsStructure) -> Dict[str, Any]:
    return {
        "kind": "lts",
        "dim": a.dim,
        "brackets": [
            {"args": list(args), "value": {str(l): format_scalar(q) for l, q in value.items()}}
            for args, value in a.table()
        ],
    }


def _lie_document(g: LieStructure) -> Dict[str, Any]:
    return {
        "kind": "lie",
        "dim": g.dim,
        "brackets": [
            {"args": list(args), "value": {str(l): format_scalar(q) for l, q in value.items()}}
            for args, value in g.table()
        ],
    }


def _lts_pair_document(p: LtsRepPair) -> Dict[str, Any]:
    n = p.source_dim
    theta = p.rep.theta
    return {
        "kind": "lts-rep",
        "algebra": _lts_document(p.algebra),
        "module_dim": p.module_dim,
        "theta": [
            {"pair": [i, j], "matrix": _rows(theta[i, j])}
            for i in range(n)
            for j in range(n)
            if any(theta[i, j].reshape(-1).tolist())
        ],
    }


def _lie_pair_document(p: LieRepPair) -> Dict[str, Any]:
    rho = p.rep.rho
    return {
        "kind": "lie-rep",
        "algebra": _lie_document(p.algebra),
        "module_dim": p.module_dim,
        "rho": [
            {"index": i, "matrix": _rows(rho[i])}
            for i in range(p.source_dim)
            if any(rho[i].reshape(-1).tolist())
        ],
    }


def _o_operator_document(t: OOperator) -> Dict[str, Any]:
    return {"kind": "o-operator", "pair": _lts_pair_document(t.pair), "operator": matrix_document(t.matrix)}


def _prelts_document(p: PreLts) -> Dict[str, Any]:
    n = p.dim
    products = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                value = _value_map(p.mu[i, j, k].tolist())
                if value:
                    products.append({"args": [i, j, k], "value": value})
    return {"kind": "prelts", "dim": n, "products": products}


def _deformation_document(d: DeformationDocument) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "kind": "deformation",
        "operator": _o_operator_document(d.series.base),
        "coefficients": [matrix_document(m) for m in d.series.coefficients],
    }
    if d.other is not None:
        out["other"] = [matrix_document(m) for m in d.other.coefficients]
    if d.bivector is not None:
        out["bivector"] = bivector_document(d.bivector)
    if d.equivalence is not None:
        if d.equivalence.higher_phi:
            out["higher_phi"] = [matrix_document(m) for m in d.equivalence.higher_phi]
        if d.equivalence.higher_psi:
            out["higher_psi"] = [matrix_document(m) for m in d.equivalence.higher_psi]
    if d.candidates:
        out["candidates"] = [bivector_document(x) for x in d.candidates]
    return out


def to_document(obj: Any) -> Dict[str, Any]:
    """Inline document for a package object; inverse of :func:`build`."""

    if isinstance(obj, LtsStructure):
        return _lts_document(obj)
    if isinstance(obj, LieStructure):
        return _lie_document(obj)
    if isinstance(obj, LtsRepPair):
        return _lts_pair_document(obj)
    if isinstance(obj, LieRepPair):
        return _lie_pair_document(obj)
    if isinstance(obj, OOperator):
        return _o_operator_document(obj)
    if isinstance(obj, NijenhuisCandidate):
        return {"kind": "nijenhuis", "algebra": _lts_document(obj.algebra), "operator": matrix_document(obj.matrix)}
    if isinstance(obj, PreLts):
        return _prelts_document(obj)
    if isinstance(obj, OOperatorMorphism):
        return {
            "kind": "o-morphism",
            "source": _o_operator_document(obj.source),
            "target": _o_operator_document(obj.target),
            "phi": matrix_document(obj.phi),
            "psi": matrix_document(obj.psi),
        }
    if isinstance(obj, LieOOperator):
        return {"kind": "lie-o-operator", "pair": _lie_pair_document(obj.pair), "operator": matrix_document(obj.matrix)}
    if isinstance(obj, LieCochainDocument):
        return {
            "kind": "lie-cochain",
            "pair": _lie_pair_document(obj.pair),
            "degree": obj.cochain.degree,
            "values": _nested_text(obj.cochain.values),
        }
    if isinstance(obj, DeformationDocument):
        return _deformation_document(obj)
    raise TypeError(f"no document form for {type(obj).__name__}")


def _nested_text(values: np.ndarray) -> Any:
    if values.ndim == 0:
        return format_scalar(values.item())
    return [_nested_text(v) for v in values]
