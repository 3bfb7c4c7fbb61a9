"""Valuations: concrete interpretations of datatypes, operations and filters.

A valuation file is UTF-8 JSON:

    {"types":   {"S": {"kind": "string"}, "M": {"kind": "money"},
                 "C": {"kind": "enum", "values": ["a", "b"]}},
     "ops":     {"concat": {"kind": "builtin", "fn": "concat", "args": {"sep": " "}},
                 "code":   {"kind": "table", "rows": [["a", "b"], ["b", "a"]]}},
     "filters": {"big": {"kind": "builtin", "fn": "ge", "args": {"value": 2000}},
                 "odd": {"kind": "set", "accepted": [["a"]]}}}

Domain kinds: "string", "int", "money" (integer cents rendered with a euro
suffix, e.g. 2500 <-> "25€"), "enum" (a finite list of string values).
Builtin operations: concat, uppercase, constant, add, sub, mul. Builtin
filters: lt, le, gt, ge, eq, ne, regex; "set" filters list accepted tuples.
Lookup-table operations require all input domains to be enums and must cover
the full input product.
"""

from __future__ import annotations

import itertools
import json
import random
import re
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .errors import ValuationError
from .signature import Signature

_MONEY_RE = re.compile(r"^(\d+)(?:\.(\d{2}))?€$")


@dataclass(frozen=True)
class DomainSpec:
    kind: str
    values: tuple[str, ...] = ()

    def contains(self, v: Any) -> bool:
        if self.kind == "string":
            return isinstance(v, str)
        if self.kind in ("int", "money"):
            return isinstance(v, int) and not isinstance(v, bool)
        return v in self.values

    def parse_cell(self, text: str) -> Any:
        if self.kind == "string":
            return text
        if self.kind == "int":
            try:
                return int(text)
            except ValueError:
                raise ValuationError(f"{text!r} is not an integer") from None
        if self.kind == "money":
            m = _MONEY_RE.match(text)
            if not m:
                raise ValuationError(f"{text!r} is not a monetary amount like 25€ or 12.50€")
            euros, cents = m.groups()
            return int(euros) * 100 + (int(cents) if cents else 0)
        if text not in self.values:
            raise ValuationError(f"{text!r} is not one of {list(self.values)}")
        return text

    def render_cell(self, v: Any) -> str:
        if self.kind == "money":
            if v % 100 == 0:
                return f"{v // 100}€"
            return f"{v // 100}.{v % 100:02d}€"
        return str(v)

    def finite_values(self) -> tuple[str, ...]:
        if self.kind != "enum":
            raise ValuationError(f"domain of kind {self.kind!r} is not finite")
        return self.values


@dataclass(frozen=True)
class Valuation:
    types: Mapping[str, DomainSpec]
    ops: Mapping[str, Callable[[tuple], tuple]] = field(default_factory=dict)
    filters: Mapping[str, Callable[[tuple], bool]] = field(default_factory=dict)

    def domain(self, datatype: str) -> DomainSpec:
        try:
            return self.types[datatype]
        except KeyError:
            raise ValuationError(f"no domain for datatype {datatype!r}") from None

    def op(self, name: str) -> Callable[[tuple], tuple]:
        try:
            return self.ops[name]
        except KeyError:
            raise ValuationError(f"no interpretation for operation {name!r}") from None

    def filter_pred(self, name: str) -> Callable[[tuple], bool]:
        try:
            return self.filters[name]
        except KeyError:
            raise ValuationError(f"no interpretation for filter {name!r}") from None


def _builtin_op(fn: str, args: dict, decl, domains: list[DomainSpec], cods: list[DomainSpec]) -> Callable:
    if fn != "constant" and len(cods) != 1:
        raise ValuationError(f"builtin {fn} for {decl.name!r} writes exactly one column")
    if fn == "concat":
        sep = args.get("sep", "")
        if any(d.kind != "string" for d in domains):
            raise ValuationError(f"builtin concat for {decl.name!r} needs string inputs")
        return lambda xs: (sep.join(xs),)
    if fn == "uppercase":
        if len(decl.dom) != 1 or domains[0].kind != "string":
            raise ValuationError(f"builtin uppercase for {decl.name!r} needs one string input")
        return lambda xs: (xs[0].upper(),)
    if fn == "constant":
        if "value" not in args:
            raise ValuationError(f"builtin constant for {decl.name!r} needs a value")
        value = args["value"]
        values = value if isinstance(value, list) else [value]
        if len(values) != len(cods):
            raise ValuationError(f"constant for {decl.name!r} must supply {len(cods)} values")
        for v, spec in zip(values, cods):
            if not spec.contains(v):
                raise ValuationError(f"constant {v!r} outside the codomain of {decl.name!r}")
        out = tuple(values)
        return lambda xs: out
    if fn in ("add", "sub", "mul"):
        if len(decl.dom) != 2:
            raise ValuationError(f"builtin {fn} for {decl.name!r} needs two inputs")
        op = {"add": lambda a, b: a + b, "sub": lambda a, b: a - b, "mul": lambda a, b: a * b}[fn]
        return lambda xs: (op(xs[0], xs[1]),)
    raise ValuationError(f"unknown builtin operation function {fn!r}")


def _table_op(rows: list, decl, dom_specs, cod_specs) -> Callable:
    n, p = len(decl.dom), len(decl.cod)
    mapping: dict[tuple, tuple] = {}
    for row in rows:
        if not isinstance(row, list) or len(row) != n + p:
            raise ValuationError(f"table row for {decl.name!r} must have {n + p} entries")
        key, out = tuple(row[:n]), tuple(row[n:])
        if key in mapping:
            raise ValuationError(f"duplicate table row for {decl.name!r}: {list(key)}")
        for v, spec in zip(key, dom_specs):
            if not spec.contains(v):
                raise ValuationError(f"table input {v!r} outside domain for {decl.name!r}")
        for v, spec in zip(out, cod_specs):
            if not spec.contains(v):
                raise ValuationError(f"table output {v!r} outside domain for {decl.name!r}")
        mapping[key] = out
    full = set(itertools.product(*(spec.finite_values() for spec in dom_specs)))
    missing = full - set(mapping)
    if missing:
        raise ValuationError(f"table for {decl.name!r} misses input {list(sorted(missing)[0])}")
    return lambda xs: mapping[tuple(xs)]


_CMP = {
    "lt": lambda a, b: a < b,
    "le": lambda a, b: a <= b,
    "gt": lambda a, b: a > b,
    "ge": lambda a, b: a >= b,
    "eq": lambda a, b: a == b,
    "ne": lambda a, b: a != b,
}


def _builtin_filter(fn: str, args: dict, decl) -> Callable:
    column = args.get("column", 0)
    if not 0 <= column < len(decl.dom):
        raise ValuationError(f"filter {decl.name!r} has no column {column}")
    if fn in _CMP:
        if "value" not in args:
            raise ValuationError(f"builtin {fn} for filter {decl.name!r} needs a value")
        value = args["value"]
        cmp = _CMP[fn]
        return lambda xs: cmp(xs[column], value)
    if fn == "regex":
        if "pattern" not in args:
            raise ValuationError(f"builtin regex for filter {decl.name!r} needs a pattern")
        pattern = re.compile(args["pattern"])
        return lambda xs: bool(pattern.search(str(xs[column])))
    raise ValuationError(f"unknown builtin filter function {fn!r}")


def _set_filter(accepted: list, decl, dom_specs) -> Callable:
    acc: set[tuple] = set()
    for row in accepted:
        if not isinstance(row, list) or len(row) != len(decl.dom):
            raise ValuationError(
                f"accepted tuple for filter {decl.name!r} must have {len(decl.dom)} entries"
            )
        for v, spec in zip(row, dom_specs):
            if not spec.contains(v):
                raise ValuationError(f"accepted value {v!r} outside domain for {decl.name!r}")
        acc.add(tuple(row))
    return lambda xs: tuple(xs) in acc


def parse_valuation(text: str, sig: Signature) -> Valuation:
    """Parse a valuation file and check it covers the whole signature."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValuationError(
            f"valuation syntax error: {exc.msg} (line {exc.lineno}, column {exc.colno})"
        ) from None
    return valuation_from_obj(raw, sig)


def valuation_from_obj(raw: object, sig: Signature) -> Valuation:
    """Validate an already-decoded valuation document against a signature."""
    if not isinstance(raw, dict) or set(raw) != {"types", "ops", "filters"}:
        raise ValuationError("valuation keys must be exactly types, ops, filters")
    for key in ("types", "ops", "filters"):
        if not isinstance(raw[key], dict):
            raise ValuationError(f"valuation {key!r} must be an object")

    types: dict[str, DomainSpec] = {}
    for name in sorted(sig.datatypes):
        spec = raw["types"].get(name)
        if not isinstance(spec, dict):
            raise ValuationError(f"no domain given for datatype {name!r}")
        kind = spec.get("kind")
        if kind in ("string", "int", "money"):
            types[name] = DomainSpec(kind)
        elif kind == "enum":
            values = spec.get("values")
            if not isinstance(values, list) or not values or not all(
                isinstance(v, str) for v in values
            ):
                raise ValuationError(f"enum domain for {name!r} needs string values")
            types[name] = DomainSpec("enum", tuple(values))
        else:
            raise ValuationError(f"unknown domain kind {kind!r} for datatype {name!r}")

    ops: dict[str, Callable] = {}
    for name, decl in sig.operations.items():
        spec = raw["ops"].get(name)
        if not isinstance(spec, dict):
            raise ValuationError(f"no interpretation for operation {name!r}")
        dom_specs = [types[t] for t in decl.dom]
        cod_specs = [types[t] for t in decl.cod]
        if spec.get("kind") == "builtin":
            ops[name] = _builtin_op(
                spec.get("fn"), spec.get("args", {}), decl, dom_specs, cod_specs
            )
        elif spec.get("kind") == "table":
            ops[name] = _table_op(spec.get("rows", []), decl, dom_specs, cod_specs)
        else:
            raise ValuationError(f"operation {name!r} must be builtin or table")

    filters: dict[str, Callable] = {}
    for name, decl in sig.filters.items():
        spec = raw["filters"].get(name)
        if not isinstance(spec, dict):
            raise ValuationError(f"no interpretation for filter {name!r}")
        dom_specs = [types[t] for t in decl.dom]
        if spec.get("kind") == "builtin":
            filters[name] = _builtin_filter(spec.get("fn"), spec.get("args", {}), decl)
        elif spec.get("kind") == "set":
            filters[name] = _set_filter(spec.get("accepted", []), decl, dom_specs)
        else:
            raise ValuationError(f"filter {name!r} must be builtin or set")

    return Valuation(types, ops, filters)


def random_valuation(sig: Signature, rng: random.Random, max_domain: int = 3) -> Valuation:
    """Sample a finite valuation: small enum domains, total lookup tables,
    random accepted subsets. Used to probe semantic equality."""
    types = {
        t: DomainSpec("enum", tuple(f"{t}{i}" for i in range(rng.randint(1, max_domain))))
        for t in sorted(sig.datatypes)
    }

    ops: dict[str, Callable] = {}
    for name, decl in sig.operations.items():
        inputs = itertools.product(*(types[t].values for t in decl.dom))
        mapping = {
            key: tuple(rng.choice(types[t].values) for t in decl.cod) for key in inputs
        }
        ops[name] = lambda xs, mapping=mapping: mapping[tuple(xs)]

    filters: dict[str, Callable] = {}
    for name, decl in sig.filters.items():
        universe = list(itertools.product(*(types[t].values for t in decl.dom)))
        accepted = {key for key in universe if rng.random() < 0.5}
        filters[name] = lambda xs, accepted=accepted: tuple(xs) in accepted

    return Valuation(types, ops, filters)


def random_rows(
    schema: tuple[str, ...], val: Valuation, rng: random.Random, count: int
) -> tuple[tuple, ...]:
    return tuple(
        tuple(rng.choice(val.domain(t).finite_values()) for t in schema) for _ in range(count)
    )
