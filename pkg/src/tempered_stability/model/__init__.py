"""
System model: nonlinearity registry, history functions, system and query
types, and JSON configuration documents.
"""

from .history import HISTORY_KINDS, HistoryFunction, history_sup_norm
from .nonlinearity import KINDS, SHAPES, LipschitzReport, Nonlinearity, validate_lipschitz
from .serialization import (
    EXAMPLES,
    load_example,
    load_example_text,
    load_system,
    parse_system,
    serialize_system,
    system_to_dict,
)
from .system import PrintedConstants, StabilityQuery, SystemDocument, SystemSpec

__all__ = [
    "HISTORY_KINDS",
    "HistoryFunction",
    "history_sup_norm",
    "KINDS",
    "SHAPES",
    "LipschitzReport",
    "Nonlinearity",
    "validate_lipschitz",
    "EXAMPLES",
    "load_example",
    "load_example_text",
    "load_system",
    "parse_system",
    "serialize_system",
    "system_to_dict",
    "PrintedConstants",
    "StabilityQuery",
    "SystemDocument",
    "SystemSpec",
]
