"""Faceted workflow diagrams: sheets of tables, filters, unions and empties.

An object is a list of sheets, each sheet a row-wise schema. Generators act at
a sheet offset: a lifted row-wise morphism transforms one sheet, a filter
routes one sheet to two (reading its leading columns), a union merges two
equal-schema sheets, an empty introduces a fresh sheet, and a sheet swap
exchanges neighbours. The zero-column sheet is distinct from the empty sheet
list: the former is a table with no columns, the latter no table at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .ediagram import EMorphism, e_typecheck
from .errors import DiagramError
from .signature import Signature

ESchema = tuple[str, ...]
FSchema = tuple[ESchema, ...]


@dataclass(frozen=True)
class LiftGen:
    morphism: EMorphism


@dataclass(frozen=True)
class FilterGen:
    name: str
    rest: ESchema


@dataclass(frozen=True)
class UnionGen:
    sheet: ESchema


@dataclass(frozen=True)
class EmptyGen:
    sheet: ESchema


@dataclass(frozen=True)
class SheetSwapGen:
    sheet_a: ESchema
    sheet_b: ESchema


FGenerator = Union[LiftGen, FilterGen, UnionGen, EmptyGen, SheetSwapGen]


@dataclass(frozen=True)
class FSlice:
    sheet: int
    gen: FGenerator


@dataclass(frozen=True)
class FMorphism:
    dom: FSchema
    cod: FSchema
    slices: tuple[FSlice, ...]


def f_identity(schema: Sequence[Sequence[str]]) -> FMorphism:
    schema = tuple(tuple(s) for s in schema)
    return FMorphism(schema, schema, ())


def lift(m: EMorphism) -> FMorphism:
    """Embed a row-wise morphism as a one-sheet workflow."""
    return FMorphism((m.dom,), (m.cod,), (FSlice(0, LiftGen(m)),))


def fgen_io(sig: Signature, gen: FGenerator) -> tuple[FSchema, FSchema]:
    """Input and output sheet lists of a single generator."""
    if isinstance(gen, LiftGen):
        e_typecheck(sig, gen.morphism)
        return (gen.morphism.dom,), (gen.morphism.cod,)
    if isinstance(gen, FilterGen):
        decl = sig.filter(gen.name)
        sheet = decl.dom + tuple(gen.rest)
        return (sheet,), (sheet, sheet)
    if isinstance(gen, UnionGen):
        s = tuple(gen.sheet)
        return (s, s), (s,)
    if isinstance(gen, EmptyGen):
        return (), (tuple(gen.sheet),)
    if isinstance(gen, SheetSwapGen):
        a, b = tuple(gen.sheet_a), tuple(gen.sheet_b)
        return (a, b), (b, a)
    raise DiagramError(f"unknown generator {gen!r}")


def f_typecheck(sig: Signature, m: FMorphism) -> None:
    for sheet in m.dom + m.cod:
        for t in sheet:
            sig.check_datatype(t)
    sheets = list(m.dom)
    for idx, sl in enumerate(m.slices):
        ins, outs = fgen_io(sig, sl.gen)
        s = sl.sheet
        if s < 0 or s + len(ins) > len(sheets) or (not ins and s > len(sheets)):
            raise DiagramError(
                f"slice {idx}: generator needs {len(ins)} sheets at offset {s}, "
                f"only {len(sheets)} available"
            )
        got = tuple(sheets[s : s + len(ins)])
        if got != ins:
            raise DiagramError(f"slice {idx}: expected sheets {ins}, got {got}")
        sheets[s : s + len(ins)] = list(outs)
    if tuple(sheets) != m.cod:
        raise DiagramError(
            f"workflow produces sheets {tuple(sheets)} but declares {m.cod}"
        )


def sheet_states(sig: Signature, m: FMorphism) -> list[FSchema]:
    """Sheet list before each slice and after the last; used by P and export."""
    sheets = list(m.dom)
    states = [tuple(sheets)]
    for sl in m.slices:
        ins, outs = fgen_io(sig, sl.gen)
        sheets[sl.sheet : sl.sheet + len(ins)] = list(outs)
        states.append(tuple(sheets))
    return states


def f_compose(f: FMorphism, g: FMorphism) -> FMorphism:
    if f.cod != g.dom:
        raise DiagramError(f"cannot compose: {f.cod} then {g.dom}")
    return FMorphism(f.dom, g.cod, f.slices + g.slices)


def f_tensor(f: FMorphism, g: FMorphism) -> FMorphism:
    shift = len(f.cod)
    shifted = tuple(FSlice(s.sheet + shift, s.gen) for s in g.slices)
    return FMorphism(f.dom + g.dom, f.cod + g.cod, f.slices + shifted)
