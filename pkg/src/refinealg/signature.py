"""Signatures: the datatypes, operation symbols and filter symbols a project declares.

A signature file is UTF-8 JSON of the shape

    {"datatypes": ["S", "M"],
     "operations": [{"name": "concat", "dom": ["S", "S"], "cod": ["S"]}],
     "filters": [{"name": "short", "dom": ["S"]}]}

Key names are exact and unknown keys are rejected at any level.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import SignatureError, UnknownSymbolError

IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class OpDecl:
    name: str
    dom: tuple[str, ...]
    cod: tuple[str, ...]


@dataclass(frozen=True)
class FilterDecl:
    name: str
    dom: tuple[str, ...]


@dataclass(frozen=True)
class Signature:
    """Immutable bundle of declarations; safe to share between threads."""

    datatypes: frozenset[str]
    operations: Mapping[str, OpDecl] = field(default_factory=dict)
    filters: Mapping[str, FilterDecl] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "operations", MappingProxyType(dict(self.operations)))
        object.__setattr__(self, "filters", MappingProxyType(dict(self.filters)))

    def operation(self, name: str) -> OpDecl:
        try:
            return self.operations[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown operation {name!r}") from None

    def filter(self, name: str) -> FilterDecl:
        try:
            return self.filters[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown filter {name!r}") from None

    def check_datatype(self, name: str) -> str:
        if name not in self.datatypes:
            raise UnknownSymbolError(f"unknown datatype {name!r}")
        return name


def _check_identifier(name: object, what: str) -> str:
    if not isinstance(name, str) or not IDENTIFIER_RE.match(name):
        raise SignatureError(f"invalid {what} identifier {name!r}")
    return name


def _check_keys(obj: dict, allowed: tuple[str, ...], context: str) -> None:
    unknown = set(obj) - set(allowed)
    if unknown:
        raise SignatureError(f"unknown key {sorted(unknown)[0]!r} in {context}")
    missing = set(allowed) - set(obj)
    if missing:
        raise SignatureError(f"missing key {sorted(missing)[0]!r} in {context}")


def _check_type_list(items: object, declared: set[str], context: str) -> tuple[str, ...]:
    if not isinstance(items, list):
        raise SignatureError(f"{context} must be a list of datatype names")
    out = []
    for t in items:
        _check_identifier(t, "datatype")
        if t not in declared:
            raise SignatureError(f"undeclared datatype {t!r} in {context}")
        out.append(t)
    return tuple(out)


def parse_signature(text: str) -> Signature:
    """Parse and fully validate a signature file."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SignatureError(f"syntax error: {exc.msg}", exc.lineno, exc.colno) from None
    return signature_from_obj(raw)


def signature_from_obj(raw: object) -> Signature:
    """Validate an already-decoded signature document."""
    if not isinstance(raw, dict):
        raise SignatureError("signature file must be a JSON object")
    _check_keys(raw, ("datatypes", "operations", "filters"), "signature")

    if not isinstance(raw["datatypes"], list):
        raise SignatureError("'datatypes' must be a list")
    datatypes: set[str] = set()
    for name in raw["datatypes"]:
        _check_identifier(name, "datatype")
        if name in datatypes:
            raise SignatureError(f"duplicate datatype {name!r}")
        datatypes.add(name)

    operations: dict[str, OpDecl] = {}
    filters: dict[str, FilterDecl] = {}
    if not isinstance(raw["operations"], list):
        raise SignatureError("'operations' must be a list")
    for entry in raw["operations"]:
        if not isinstance(entry, dict):
            raise SignatureError("operation entries must be objects")
        _check_keys(entry, ("name", "dom", "cod"), "operation")
        name = _check_identifier(entry["name"], "operation")
        if name in operations:
            raise SignatureError(f"duplicate operation {name!r}")
        dom = _check_type_list(entry["dom"], datatypes, f"operation {name!r} dom")
        cod = _check_type_list(entry["cod"], datatypes, f"operation {name!r} cod")
        if not cod:
            raise SignatureError(f"operation {name!r} must have at least one output column")
        operations[name] = OpDecl(name, dom, cod)

    if not isinstance(raw["filters"], list):
        raise SignatureError("'filters' must be a list")
    for entry in raw["filters"]:
        if not isinstance(entry, dict):
            raise SignatureError("filter entries must be objects")
        _check_keys(entry, ("name", "dom"), "filter")
        name = _check_identifier(entry["name"], "filter")
        # Operations and filters share one namespace so arity lookups stay unambiguous.
        if name in filters or name in operations:
            raise SignatureError(f"duplicate filter {name!r}")
        dom = _check_type_list(entry["dom"], datatypes, f"filter {name!r} dom")
        if not dom:
            raise SignatureError(f"filter {name!r} must read at least one column")
        filters[name] = FilterDecl(name, dom)

    return Signature(frozenset(datatypes), operations, filters)


def serialize_signature(sig: Signature) -> str:
    """Canonical text form; parse_signature(serialize_signature(s)) == s."""
    doc = {
        "datatypes": sorted(sig.datatypes),
        "operations": [
            {"name": o.name, "dom": list(o.dom), "cod": list(o.cod)}
            for o in sorted(sig.operations.values(), key=lambda o: o.name)
        ],
        "filters": [
            {"name": f.name, "dom": list(f.dom)}
            for f in sorted(sig.filters.values(), key=lambda f: f.name)
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def arity_of(sig: Signature, name: str):
    """Domain/codomain of an operation, or (domain, two output sheets) of a filter."""
    if name in sig.operations:
        decl = sig.operations[name]
        return decl.dom, decl.cod
    if name in sig.filters:
        decl = sig.filters[name]
        return decl.dom, (decl.dom, decl.dom)
    raise UnknownSymbolError(f"unknown operation or filter {name!r}")
