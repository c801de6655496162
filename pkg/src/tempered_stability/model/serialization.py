"""
JSON configuration documents for delay systems.

Parsing never stops at the first problem: every malformed or invalid field
is collected into a list of ``FieldDiagnostic`` entries and raised at once.
Floats are written with Python's shortest round-tripping repr, so
``parse_system(serialize_system(doc))`` reproduces every real bit for bit.
"""

import json
import logging
import math
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from ..exceptions import (
    DomainError,
    FieldDiagnostic,
    ModelError,
    ParseError,
    ValidationError,
)
from ..operators.tempered import TemperedOrder
from ..special_functions import MatrixNxN
from .history import HistoryFunction
from .nonlinearity import Nonlinearity
from .system import PrintedConstants, StabilityQuery, SystemDocument, SystemSpec

logger = logging.getLogger(__name__)

EXAMPLES = ("example1", "example2")

_TOP_LEVEL = {
    "name",
    "alpha",
    "rho",
    "relaxed_order",
    "tau",
    "horizon",
    "A",
    "B",
    "nonlinearity",
    "history",
    "query",
    "printed",
}


class _Reader:
    """Collects diagnostics while pulling typed values out of a JSON tree."""

    def __init__(self) -> None:
        self.problems: List[FieldDiagnostic] = []
        self.invalid: List[FieldDiagnostic] = []

    def fail(self, path: str, message: str) -> None:
        self.problems.append(FieldDiagnostic(path, message))

    def section(self, doc: Dict[str, Any], key: str, path: str) -> Optional[Dict[str, Any]]:
        if key not in doc:
            self.fail(path, "missing")
            return None
        value = doc[key]
        if not isinstance(value, dict):
            self.fail(path, "must be an object")
            return None
        return value

    def real(
        self, doc: Dict[str, Any], key: str, path: str, default: Optional[float] = None
    ) -> Optional[float]:
        if key not in doc:
            if default is None:
                self.fail(path, "missing")
            return default
        value = doc[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, f"must be a number, got {type(value).__name__}")
            return None
        value = float(value)
        if not math.isfinite(value):
            self.fail(path, "must be finite")
            return None
        return value

    def text(self, doc: Dict[str, Any], key: str, path: str, default: str) -> str:
        value = doc.get(key, default)
        if not isinstance(value, str):
            self.fail(path, "must be a string")
            return default
        return value

    def vector(self, doc: Dict[str, Any], key: str, path: str) -> Optional[List[float]]:
        if key not in doc:
            self.fail(path, "missing")
            return None
        value = doc[key]
        if not isinstance(value, list) or not value:
            self.fail(path, "must be a non-empty array of numbers")
            return None
        out = []
        for i, item in enumerate(value):
            number = self.real({"v": item}, "v", f"{path}[{i}]")
            if number is None:
                return None
            out.append(number)
        return out

    def matrix(self, doc: Dict[str, Any], key: str) -> Optional[MatrixNxN]:
        if key not in doc:
            self.fail(key, "missing")
            return None
        rows = doc[key]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            self.fail(key, "must be an array of arrays")
            return None
        parsed = []
        for i in range(len(rows)):
            row = self.vector({"r": rows[i]}, "r", f"{key}[{i}]")
            if row is None:
                return None
            parsed.append(row)
        return self.build(key, lambda: MatrixNxN(tuple(tuple(r) for r in parsed)))

    def build(self, path: str, factory: Callable[[], Any]) -> Any:
        """Run a constructor, turning invariant breaches into diagnostics."""
        try:
            return factory()
        except ModelError as e:
            self.invalid.extend(e.diagnostics or [FieldDiagnostic(path, str(e))])
        except (DomainError, ValueError) as e:
            self.invalid.append(FieldDiagnostic(path, str(e)))
        return None


def _parse_nonlinearity(reader: _Reader, doc: Dict[str, Any]) -> Optional[Nonlinearity]:
    section = reader.section(doc, "nonlinearity", "nonlinearity")
    if section is None:
        return None
    kind = reader.text(section, "kind", "nonlinearity.kind", "none")
    values = {
        name: reader.real(section, name, f"nonlinearity.{name}", default=0.0)
        for name in ("c_state", "c_delayed", "lf")
    }
    shape_state = reader.text(section, "shape_state", "nonlinearity.shape_state", "identity")
    shape_delayed = reader.text(
        section, "shape_delayed", "nonlinearity.shape_delayed", "identity"
    )
    if any(v is None for v in values.values()):
        return None
    return reader.build(
        "nonlinearity",
        lambda: Nonlinearity(
            kind=kind,
            c_state=values["c_state"],
            c_delayed=values["c_delayed"],
            shape_state=shape_state,
            shape_delayed=shape_delayed,
            declared_lf=values["lf"],
        ),
    )


def _parse_history(reader: _Reader, doc: Dict[str, Any]) -> Optional[HistoryFunction]:
    section = reader.section(doc, "history", "history")
    if section is None:
        return None
    kind = reader.text(section, "kind", "history.kind", "")

    if kind == "constant_vector":
        value = reader.vector(section, "value", "history.value")
        return None if value is None else reader.build(
            "history", lambda: HistoryFunction.constant(value)
        )
    if kind == "coswave_plus_constant":
        parts = [
            reader.vector(section, name, f"history.{name}")
            for name in ("amplitude", "frequency", "offset")
        ]
        if any(p is None for p in parts):
            return None
        return reader.build("history", lambda: HistoryFunction.coswave(*parts))
    if kind == "sampled":
        times = reader.vector(section, "times", "history.times")
        rows = section.get("values")
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            reader.fail("history.values", "must be an array of arrays")
            return None
        table = [reader.vector({"r": r}, "r", f"history.values[{i}]") for i, r in enumerate(rows)]
        if times is None or any(r is None for r in table):
            return None
        return reader.build(
            "history",
            lambda: HistoryFunction(
                "sampled",
                times=tuple(times),
                values=tuple(tuple(r) for r in table),
            ),
        )

    reader.fail("history.kind", f"unknown kind {kind!r}")
    return None


def _parse_printed(reader: _Reader, doc: Dict[str, Any]) -> Optional[PrintedConstants]:
    if "printed" not in doc:
        return None
    section = reader.section(doc, "printed", "printed")
    if section is None:
        return None
    known = set(PrintedConstants.__dataclass_fields__)
    for key in section:
        if key not in known:
            reader.fail(f"printed.{key}", "unknown printed constant")
    values = {}
    for key in known & set(section):
        value = reader.real(section, key, f"printed.{key}")
        if value is not None:
            values[key] = value
    return reader.build("printed", lambda: PrintedConstants(**values))


def parse_system(document: str) -> SystemDocument:
    """Parse and validate one JSON configuration document.

    Args:
        document: JSON text

    Returns:
        SystemDocument with the validated spec, query and optional printed
        constants

    Raises:
        ParseError: Malformed JSON, wrong types or missing keys
        ValidationError: A model invariant does not hold (e.g. xi > epsilon)

    Example:
        >>> doc = parse_system(load_example_text("example2"))
        >>> doc.query.threshold
        10.0
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError(
            "invalid JSON", [FieldDiagnostic(f"line {e.lineno}", e.msg)]
        ) from e
    if not isinstance(raw, dict):
        raise ParseError("invalid document", [FieldDiagnostic("<root>", "must be an object")])

    reader = _Reader()
    for key in raw:
        if key not in _TOP_LEVEL:
            reader.fail(key, "unknown key")

    alpha = reader.real(raw, "alpha", "alpha")
    rho = reader.real(raw, "rho", "rho")
    tau = reader.real(raw, "tau", "tau")
    horizon = reader.real(raw, "horizon", "horizon")
    relaxed = raw.get("relaxed_order", False)
    if not isinstance(relaxed, bool):
        reader.fail("relaxed_order", "must be true or false")
        relaxed = False
    A = reader.matrix(raw, "A")
    B = reader.matrix(raw, "B")
    nonlinearity = _parse_nonlinearity(reader, raw)
    history = _parse_history(reader, raw)
    query_section = reader.section(raw, "query", "query")
    xi = epsilon = None
    if query_section is not None:
        xi = reader.real(query_section, "xi", "query.xi")
        epsilon = reader.real(query_section, "epsilon", "query.epsilon")
    printed = _parse_printed(reader, raw)
    name = raw.get("name")
    if name is not None and not isinstance(name, str):
        reader.fail("name", "must be a string")

    if reader.problems:
        raise ParseError("invalid document", reader.problems)

    order = reader.build(
        "alpha",
        lambda: TemperedOrder.relaxed(alpha, rho) if relaxed else TemperedOrder(alpha, rho),
    )
    query = reader.build("query", lambda: StabilityQuery(xi, epsilon, horizon))
    spec = None
    if None not in (order, A, B, nonlinearity, history):
        spec = reader.build(
            "system",
            lambda: SystemSpec(order, tau, horizon, A, B, nonlinearity, history),
        )
    if reader.invalid:
        raise ValidationError("invalid system", reader.invalid)

    logger.debug(f"Parsed system {name or '<unnamed>'} of dimension {spec.dimension}")
    return SystemDocument(spec=spec, query=query, printed=printed, name=name)


def _history_to_dict(history: HistoryFunction) -> Dict[str, Any]:
    if history.kind == "constant_vector":
        return {"kind": history.kind, "value": list(history.value)}
    if history.kind == "coswave_plus_constant":
        return {
            "kind": history.kind,
            "amplitude": list(history.amplitude),
            "frequency": list(history.frequency),
            "offset": list(history.offset),
        }
    return {
        "kind": history.kind,
        "times": list(history.times),
        "values": [list(row) for row in history.values],
    }


def system_to_dict(doc: SystemDocument) -> Dict[str, Any]:
    """Plain-data form of a document, in the key order of the schema."""
    spec, query = doc.spec, doc.query
    f = spec.nonlinearity
    out: Dict[str, Any] = {}
    if doc.name is not None:
        out["name"] = doc.name
    out.update(
        {
            "alpha": spec.order.alpha,
            "rho": spec.order.rho,
        }
    )
    if spec.order.relaxed_checks:
        out["relaxed_order"] = True
    out.update(
        {
            "tau": spec.tau,
            "horizon": spec.horizon,
            "A": spec.A.to_rows(),
            "B": spec.B.to_rows(),
            "nonlinearity": {
                "kind": f.kind,
                "c_state": f.c_state,
                "c_delayed": f.c_delayed,
                "shape_state": f.shape_state,
                "shape_delayed": f.shape_delayed,
                "lf": f.declared_lf,
            },
            "history": _history_to_dict(spec.history),
            "query": {"xi": query.xi, "epsilon": query.epsilon},
        }
    )
    if doc.printed is not None:
        out["printed"] = doc.printed.to_dict()
    return out


def serialize_system(doc: SystemDocument) -> str:
    """JSON text for ``doc``; reals keep all 17 significant digits."""
    return json.dumps(system_to_dict(doc), indent=2) + "\n"


def load_system(path: Union[str, Path]) -> SystemDocument:
    """Read and parse a configuration file.

    Raises:
        ParseError: If the file cannot be read or parsed
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(
            f"cannot read {path}", [FieldDiagnostic("<file>", str(e))]
        ) from e
    return parse_system(text)


def load_example_text(name: str) -> str:
    """Raw JSON of a bundled example (``example1`` or ``example2``)."""
    if name not in EXAMPLES:
        raise ValueError(f"unknown example {name!r}; choose from {EXAMPLES}")
    return (resources.files(__package__) / "examples" / f"{name}.json").read_text(
        encoding="utf-8"
    )


def load_example(name: str) -> SystemDocument:
    """Parsed bundled example."""
    return parse_system(load_example_text(name))
