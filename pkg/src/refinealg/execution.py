"""Executing workflows on concrete tables, and two independent equality probes.

`run_workflow` interprets a workflow row by row under a valuation: lifted
morphisms map each row, filters route rows to the accept/reject sheet by
their leading columns, unions concatenate (accept side first), empties
introduce zero-row tables. Rows never interact, so lifted slices may be
mapped in parallel.

`symbolic_oracle_equal` replays both workflows on a single symbolic row whose
cells carry a term and a context of true filter atoms, for every context over
the atoms the workflows can reach. It never builds a truth-table grid, which
keeps it independent of the grid-based decision procedure it cross-checks.
`random_valuation_check` samples finite valuations and inputs; a mismatch is
a counterexample to equality, absence of one proves nothing.
"""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .ediagram import CopyGen, DiscardGen, EMorphism, SwapGen
from .errors import DiagramError, EnumerationCapError, ExecutionError
from .fdiagram import (
    EmptyGen,
    FilterGen,
    FMorphism,
    LiftGen,
    SheetSwapGen,
    UnionGen,
    f_typecheck,
)
from .signature import Signature
from .tableio import Table
from .terms import AFF, App, Var
from .valuation import Valuation, random_rows, random_valuation

DEFAULT_CONTEXT_ATOM_CAP = 16


def _context_atom_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    return int(os.environ.get("REFINEALG_AFF_CAP", DEFAULT_CONTEXT_ATOM_CAP))


def run_e_row(sig: Signature, val: Valuation, m: EMorphism, row: Sequence) -> tuple:
    """Evaluate one row through a row-wise morphism."""
    if len(row) != len(m.dom):
        raise ExecutionError(f"row has {len(row)} cells, workflow expects {len(m.dom)}")
    wires = list(row)
    for sl in m.slices:
        off, gen = sl.offset, sl.gen
        if isinstance(gen, CopyGen):
            wires.insert(off, wires[off])
        elif isinstance(gen, DiscardGen):
            del wires[off]
        elif isinstance(gen, SwapGen):
            wires[off], wires[off + 1] = wires[off + 1], wires[off]
        else:
            decl = sig.operation(gen.name)
            args = tuple(wires[off : off + len(decl.dom)])
            outs = tuple(val.op(gen.name)(args))
            if len(outs) != len(decl.cod):
                raise ExecutionError(
                    f"operation {gen.name!r} returned {len(outs)} values, "
                    f"declared {len(decl.cod)}"
                )
            for v, t in zip(outs, decl.cod):
                if not val.domain(t).contains(v):
                    raise ExecutionError(f"operation {gen.name!r} produced {v!r} outside {t}")
            wires[off : off + len(decl.dom)] = list(outs)
    return tuple(wires)


def _map_rows(fn, rows, threads: int):
    if threads > 1 and len(rows) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, rows))
    return [fn(r) for r in rows]


def run_workflow(
    sig: Signature,
    val: Valuation,
    m: FMorphism,
    inputs: Sequence[Table],
    threads: int = 1,
) -> list[Table]:
    """Execute a workflow on one table per input sheet."""
    f_typecheck(sig, m)
    if len(inputs) != len(m.dom):
        raise ExecutionError(f"expected {len(m.dom)} input tables, got {len(inputs)}")
    for table, schema in zip(inputs, m.dom):
        if table.schema != schema:
            raise ExecutionError(f"input table schema {table.schema} does not match {schema}")
    sheets = [list(t.rows) for t in inputs]
    schemas = [t.schema for t in inputs]
    for sl in m.slices:
        s, gen = sl.sheet, sl.gen
        if isinstance(gen, LiftGen):
            e = gen.morphism
            sheets[s] = _map_rows(lambda r: run_e_row(sig, val, e, r), sheets[s], threads)
            schemas[s] = e.cod
        elif isinstance(gen, FilterGen):
            arity = len(sig.filter(gen.name).dom)
            pred = val.filter_pred(gen.name)
            accept, reject = [], []
            for row in sheets[s]:
                (accept if pred(tuple(row[:arity])) else reject).append(row)
            sheets[s : s + 1] = [accept, reject]
            schemas[s : s + 1] = [schemas[s], schemas[s]]
        elif isinstance(gen, UnionGen):
            sheets[s : s + 2] = [sheets[s] + sheets[s + 1]]
            schemas[s : s + 2] = [schemas[s]]
        elif isinstance(gen, EmptyGen):
            sheets.insert(s, [])
            schemas.insert(s, tuple(gen.sheet))
        elif isinstance(gen, SheetSwapGen):
            sheets[s], sheets[s + 1] = sheets[s + 1], sheets[s]
            schemas[s], schemas[s + 1] = schemas[s + 1], schemas[s]
    return [Table(schema, tuple(rows)) for schema, rows in zip(schemas, sheets)]


class _Bottom:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "BOTTOM"


BOTTOM = _Bottom()


class _UnknownAtom(Exception):
    def __init__(self, aff: AFF):
        super().__init__(aff)
        self.aff = aff


def _sym_e_row(m: EMorphism, sig: Signature, row: list, ambient: frozenset) -> list:
    """One symbolic row through a row-wise morphism.

    `ambient` is the row's filter context; an operation with no inputs has no
    cell to inherit it from. Mixed contexts or a bottom argument poison all
    outputs of the operation.
    """
    wires = list(row)
    for sl in m.slices:
        off, gen = sl.offset, sl.gen
        if isinstance(gen, CopyGen):
            wires.insert(off, wires[off])
        elif isinstance(gen, DiscardGen):
            del wires[off]
        elif isinstance(gen, SwapGen):
            wires[off], wires[off + 1] = wires[off + 1], wires[off]
        else:
            decl = sig.operation(gen.name)
            args = wires[off : off + len(decl.dom)]
            contexts = {c for c, _ in (a for a in args if a is not BOTTOM)}
            if any(a is BOTTOM for a in args) or len(contexts) > 1:
                outs = [BOTTOM] * len(decl.cod)
            else:
                ctx = contexts.pop() if contexts else ambient
                arg_terms = tuple(t for _, t in args)
                outs = [
                    (ctx, App(gen.name, arg_terms, k + 1)) for k in range(len(decl.cod))
                ]
            wires[off : off + len(decl.dom)] = outs
    return wires


def _oracle_run(sig: Signature, m: FMorphism, truth: dict[AFF, bool]):
    """Interpret a workflow on one symbolic row under a fixed filter context."""
    context = frozenset(aff for aff, v in truth.items() if v)
    row = [(context, Var(i + 1)) for i in range(len(m.dom[0]))]
    sheets: list[list[list]] = [[row]]
    for sl in m.slices:
        s, gen = sl.sheet, sl.gen
        if isinstance(gen, LiftGen):
            sheets[s] = [_sym_e_row(gen.morphism, sig, r, context) for r in sheets[s]]
        elif isinstance(gen, FilterGen):
            arity = len(sig.filter(gen.name).dom)
            accept, reject = [], []
            for r in sheets[s]:
                read = r[:arity]
                contexts = {c for c, _ in (a for a in read if a is not BOTTOM)}
                if any(a is BOTTOM for a in read) or len(contexts) != 1:
                    accept.append([BOTTOM] * len(r))
                    continue
                aff = AFF(gen.name, tuple(t for _, t in read))
                if aff not in truth:
                    raise _UnknownAtom(aff)
                (accept if truth[aff] else reject).append(r)
            sheets[s : s + 1] = [accept, reject]
        elif isinstance(gen, UnionGen):
            sheets[s : s + 2] = [sheets[s] + sheets[s + 1]]
        elif isinstance(gen, EmptyGen):
            sheets.insert(s, [])
        elif isinstance(gen, SheetSwapGen):
            sheets[s], sheets[s + 1] = sheets[s + 1], sheets[s]
    return tuple(tuple(tuple(r) for r in rows) for rows in sheets)


def symbolic_oracle_equal(
    sig: Signature, m1: FMorphism, m2: FMorphism, cap: int | None = None
) -> bool:
    """Decide equality by direct symbolic interpretation over every context.

    The atom set starts empty and grows whenever a run consults an unseen
    filter atom; each growth restarts the enumeration, so the final verdict
    covers every context over every atom either workflow can reach.
    """
    cap = _context_atom_cap(cap)
    for m in (m1, m2):
        f_typecheck(sig, m)
        if len(m.dom) != 1 or len(m.cod) != 1:
            raise DiagramError("the symbolic oracle handles one-sheet boundaries only")
    if m1.dom != m2.dom or m1.cod != m2.cod:
        raise DiagramError("equality requires identical sheet boundaries")

    atoms: list[AFF] = []
    while True:
        discovered = None
        equal = True
        for bits in itertools.product((False, True), repeat=len(atoms)):
            truth = dict(zip(atoms, bits))
            try:
                if _oracle_run(sig, m1, truth) != _oracle_run(sig, m2, truth):
                    equal = False
            except _UnknownAtom as exc:
                discovered = exc.aff
                break
        if discovered is None:
            return equal
        atoms.append(discovered)
        if len(atoms) > cap:
            raise EnumerationCapError(
                f"more than {cap} filter atoms reachable; "
                "raise REFINEALG_AFF_CAP to enumerate further"
            )


@dataclass(frozen=True)
class Counterexample:
    valuation: Valuation
    inputs: tuple[Table, ...]
    sheet: int


def random_valuation_check(
    sig: Signature,
    m1: FMorphism,
    m2: FMorphism,
    trials: int = 50,
    seed: int = 0,
    rows: int = 20,
) -> Counterexample | None:
    """Probe equality on random finite valuations; None means no difference found."""
    if m1.dom != m2.dom or m1.cod != m2.cod:
        raise DiagramError("equality requires identical sheet boundaries")
    rng = random.Random(seed)
    for _ in range(trials):
        val = random_valuation(sig, rng)
        inputs = tuple(
            Table(schema, random_rows(schema, val, rng, rows)) for schema in m1.dom
        )
        out1 = run_workflow(sig, val, m1, list(inputs))
        out2 = run_workflow(sig, val, m2, list(inputs))
        for k, (t1, t2) in enumerate(zip(out1, out2)):
            if Counter(t1.rows) != Counter(t2.rows):
                return Counterexample(val, inputs, k)
    return None
