"""JSON wire format for workflow files.

Row-wise workflow:

    {"dom": ["S", "S"], "cod": ["S"],
     "slices": [{"offset": 0, "gen": {"kind": "op", "name": "concat"}}]}

Generator objects: {"kind": "op", "name"}, {"kind": "copy", "type"},
{"kind": "discard", "type"}, {"kind": "swap", "type", "type2"}.

Faceted workflow: dom/cod are lists of sheets (lists of types) and slices
carry a sheet index: {"sheet": 0, "gen": {...}} with generator kinds
{"kind": "lift", "morphism": <row-wise workflow>},
{"kind": "filter", "name", "rest": [types]}, {"kind": "union", "type": [types]},
{"kind": "empty", "type": [types]},
{"kind": "sheet_swap", "type": [types], "type2": [types]}.
"""

from __future__ import annotations

import json
from typing import Any

from .ediagram import CopyGen, DiscardGen, EMorphism, ESlice, OpGen, SwapGen
from .errors import WireFormatError
from .fdiagram import (
    EmptyGen,
    FilterGen,
    FMorphism,
    FSlice,
    LiftGen,
    SheetSwapGen,
    UnionGen,
)


def canonical_json(doc: Any) -> str:
    """The byte-stable rendering used for normalized output files."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def encode_e_morphism(m: EMorphism) -> dict:
    slices = []
    for s in m.slices:
        g = s.gen
        if isinstance(g, OpGen):
            gen = {"kind": "op", "name": g.name}
        elif isinstance(g, CopyGen):
            gen = {"kind": "copy", "type": g.type}
        elif isinstance(g, DiscardGen):
            gen = {"kind": "discard", "type": g.type}
        else:
            gen = {"kind": "swap", "type": g.type_a, "type2": g.type_b}
        slices.append({"offset": s.offset, "gen": gen})
    return {"dom": list(m.dom), "cod": list(m.cod), "slices": slices}


def encode_f_morphism(m: FMorphism) -> dict:
    slices = []
    for s in m.slices:
        g = s.gen
        if isinstance(g, LiftGen):
            gen = {"kind": "lift", "morphism": encode_e_morphism(g.morphism)}
        elif isinstance(g, FilterGen):
            gen = {"kind": "filter", "name": g.name, "rest": list(g.rest)}
        elif isinstance(g, UnionGen):
            gen = {"kind": "union", "type": list(g.sheet)}
        elif isinstance(g, EmptyGen):
            gen = {"kind": "empty", "type": list(g.sheet)}
        else:
            gen = {"kind": "sheet_swap", "type": list(g.sheet_a), "type2": list(g.sheet_b)}
        slices.append({"sheet": s.sheet, "gen": gen})
    return {
        "dom": [list(sheet) for sheet in m.dom],
        "cod": [list(sheet) for sheet in m.cod],
        "slices": slices,
    }


def _require(cond: bool, message: str):
    if not cond:
        raise WireFormatError(message)


def _type_list(value, context: str) -> tuple[str, ...]:
    _require(isinstance(value, list) and all(isinstance(t, str) for t in value),
             f"{context} must be a list of type names")
    return tuple(value)


def _gen_keys(gen: dict, allowed: set[str]):
    _require(set(gen) == allowed, f"generator keys must be exactly {sorted(allowed)}")


def decode_e_morphism(doc: Any) -> EMorphism:
    _require(isinstance(doc, dict), "workflow must be a JSON object")
    _require(set(doc) == {"dom", "cod", "slices"}, "workflow keys must be dom, cod, slices")
    dom = _type_list(doc["dom"], "dom")
    cod = _type_list(doc["cod"], "cod")
    _require(isinstance(doc["slices"], list), "slices must be a list")
    slices = []
    for i, entry in enumerate(doc["slices"]):
        _require(isinstance(entry, dict) and set(entry) == {"offset", "gen"},
                 f"slice {i} must have keys offset, gen")
        _require(isinstance(entry["offset"], int) and entry["offset"] >= 0,
                 f"slice {i} offset must be a non-negative integer")
        gen = entry["gen"]
        _require(isinstance(gen, dict) and isinstance(gen.get("kind"), str),
                 f"slice {i} generator must carry a kind")
        kind = gen["kind"]
        if kind == "op":
            _gen_keys(gen, {"kind", "name"})
            decoded = OpGen(gen["name"])
        elif kind == "copy":
            _gen_keys(gen, {"kind", "type"})
            decoded = CopyGen(gen["type"])
        elif kind == "discard":
            _gen_keys(gen, {"kind", "type"})
            decoded = DiscardGen(gen["type"])
        elif kind == "swap":
            _gen_keys(gen, {"kind", "type", "type2"})
            decoded = SwapGen(gen["type"], gen["type2"])
        else:
            raise WireFormatError(f"slice {i}: unknown generator kind {kind!r}")
        slices.append(ESlice(entry["offset"], decoded))
    return EMorphism(dom, cod, tuple(slices))


def _sheet_list(value, context: str) -> tuple[tuple[str, ...], ...]:
    _require(isinstance(value, list), f"{context} must be a list of sheets")
    return tuple(_type_list(sheet, f"{context} sheet") for sheet in value)


def decode_f_morphism(doc: Any) -> FMorphism:
    _require(isinstance(doc, dict), "workflow must be a JSON object")
    _require(set(doc) == {"dom", "cod", "slices"}, "workflow keys must be dom, cod, slices")
    dom = _sheet_list(doc["dom"], "dom")
    cod = _sheet_list(doc["cod"], "cod")
    _require(isinstance(doc["slices"], list), "slices must be a list")
    slices = []
    for i, entry in enumerate(doc["slices"]):
        _require(isinstance(entry, dict) and set(entry) == {"sheet", "gen"},
                 f"slice {i} must have keys sheet, gen")
        _require(isinstance(entry["sheet"], int) and entry["sheet"] >= 0,
                 f"slice {i} sheet must be a non-negative integer")
        gen = entry["gen"]
        _require(isinstance(gen, dict) and isinstance(gen.get("kind"), str),
                 f"slice {i} generator must carry a kind")
        kind = gen["kind"]
        if kind == "lift":
            _gen_keys(gen, {"kind", "morphism"})
            decoded = LiftGen(decode_e_morphism(gen["morphism"]))
        elif kind == "filter":
            _gen_keys(gen, {"kind", "name", "rest"})
            decoded = FilterGen(gen["name"], _type_list(gen["rest"], "filter rest"))
        elif kind == "union":
            _gen_keys(gen, {"kind", "type"})
            decoded = UnionGen(_type_list(gen["type"], "union type"))
        elif kind == "empty":
            _gen_keys(gen, {"kind", "type"})
            decoded = EmptyGen(_type_list(gen["type"], "empty type"))
        elif kind == "sheet_swap":
            _gen_keys(gen, {"kind", "type", "type2"})
            decoded = SheetSwapGen(
                _type_list(gen["type"], "sheet_swap type"),
                _type_list(gen["type2"], "sheet_swap type2"),
            )
        else:
            raise WireFormatError(f"slice {i}: unknown generator kind {kind!r}")
        slices.append(FSlice(entry["sheet"], decoded))
    return FMorphism(dom, cod, tuple(slices))


def workflow_kind(doc: Any) -> str:
    """'e' for a row-wise workflow file, 'f' for a faceted one."""
    _require(isinstance(doc, dict) and "dom" in doc, "workflow must be an object with a dom")
    entries = list(doc["dom"]) + list(doc.get("cod", []))
    _require(isinstance(doc["dom"], list), "dom must be a list")
    if any(isinstance(x, list) for x in entries):
        _require(all(isinstance(x, list) for x in entries), "mixed dom/cod entry kinds")
        return "f"
    if any(isinstance(x, str) for x in entries):
        return "e"
    # no boundary columns at all: let the slice shape decide, defaulting to row-wise
    slices = doc.get("slices") or []
    if slices and isinstance(slices[0], dict) and "sheet" in slices[0]:
        return "f"
    return "e"


def parse_workflow_text(text: str) -> tuple[str, Any]:
    """Parse a workflow file; returns ('e', EMorphism) or ('f', FMorphism)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WireFormatError(
            f"workflow syntax error: {exc.msg} (line {exc.lineno}, column {exc.colno})"
        ) from None
    kind = workflow_kind(doc)
    if kind == "e":
        return "e", decode_e_morphism(doc)
    return "f", decode_f_morphism(doc)
