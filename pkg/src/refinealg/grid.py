"""Truth-table grids: the case-analysis semantics of faceted workflows.

A workflow from n input sheets to m output sheets maps to an n-by-m grid of
truth tables; entry (i, j) describes the rows of input sheet i that end on
output sheet j. Each grid row is a partition: its conditions are pairwise
disjoint and jointly exhaustive, so every row of data lands on exactly one
output sheet. Workflow equivalence is decided by comparing grids entrywise,
up to term equivalence plus coverage of the same filter outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ediagram import e_to_terms
from .errors import DiagramError, FormulaError
from .fdiagram import (
    EmptyGen,
    FilterGen,
    FMorphism,
    LiftGen,
    SheetSwapGen,
    UnionGen,
    f_typecheck,
    fgen_io,
    sheet_states,
)
from .signature import Signature
from .terms import AFF, TOP, Var, cff
from .truthtable import (
    DEFAULT_ATOM_CAP,
    TruthTable,
    empty_table,
    identity_table,
    partition_check,
    region_equiv,
    table,
    tt_compose,
    tt_equiv,
    tt_union,
)


@dataclass(frozen=True)
class TTGrid:
    dom_widths: tuple[int, ...]
    cod_widths: tuple[int, ...]
    tables: tuple[tuple[TruthTable, ...], ...]

    def __post_init__(self):
        if self.dom_widths and not self.cod_widths:
            raise FormulaError("a grid with inputs must have at least one output")
        if len(self.tables) != len(self.dom_widths):
            raise FormulaError("grid row count does not match input widths")
        for i, row in enumerate(self.tables):
            if len(row) != len(self.cod_widths):
                raise FormulaError("grid column count does not match output widths")
            for j, t in enumerate(row):
                if (t.n_vars, t.n_outs) != (self.dom_widths[i], self.cod_widths[j]):
                    raise FormulaError(
                        f"grid entry ({i},{j}) has shape {t.n_vars}->{t.n_outs}, "
                        f"expected {self.dom_widths[i]}->{self.cod_widths[j]}"
                    )
            if not partition_check(row):
                raise FormulaError(f"grid row {i} is not a partition")


def grid_identity(widths: tuple[int, ...]) -> TTGrid:
    n = len(widths)
    rows = tuple(
        tuple(
            identity_table(widths[i]) if i == j else empty_table(widths[i], widths[j])
            for j in range(n)
        )
        for i in range(n)
    )
    return TTGrid(widths, widths, rows)


def grid_compose(a: TTGrid, b: TTGrid) -> TTGrid:
    if a.cod_widths != b.dom_widths:
        raise FormulaError("grid composition boundary mismatch")
    rows = []
    for i in range(len(a.dom_widths)):
        row = []
        for k in range(len(b.cod_widths)):
            acc = empty_table(a.dom_widths[i], b.cod_widths[k])
            for j in range(len(a.cod_widths)):
                acc = tt_union(acc, tt_compose(a.tables[i][j], b.tables[j][k]))
            row.append(acc)
        rows.append(tuple(row))
    return TTGrid(a.dom_widths, b.cod_widths, tuple(rows))


def grid_tensor(a: TTGrid, b: TTGrid) -> TTGrid:
    dom = a.dom_widths + b.dom_widths
    cod = a.cod_widths + b.cod_widths
    na, ma = len(a.dom_widths), len(a.cod_widths)
    rows = []
    for i in range(len(dom)):
        row = []
        for j in range(len(cod)):
            if i < na and j < ma:
                row.append(a.tables[i][j])
            elif i >= na and j >= ma:
                row.append(b.tables[i - na][j - ma])
            else:
                row.append(empty_table(dom[i], cod[j]))
        rows.append(tuple(row))
    return TTGrid(dom, cod, tuple(rows))


def _generator_grid(sig: Signature, gen) -> TTGrid:
    if isinstance(gen, LiftGen):
        m = gen.morphism
        t = table(len(m.dom), len(m.cod), (TOP, e_to_terms(sig, m)))
        return TTGrid((len(m.dom),), (len(m.cod),), ((t,),))
    if isinstance(gen, FilterGen):
        decl = sig.filter(gen.name)
        a = len(decl.dom)
        n = a + len(gen.rest)
        ident = tuple(Var(i + 1) for i in range(n))
        aff = AFF(gen.name, tuple(Var(i + 1) for i in range(a)))
        yes = table(n, n, (cff((aff, True)), ident))
        no = table(n, n, (cff((aff, False)), ident))
        return TTGrid((n,), (n, n), ((yes, no),))
    if isinstance(gen, UnionGen):
        w = len(gen.sheet)
        return TTGrid((w, w), (w,), ((identity_table(w),), (identity_table(w),)))
    if isinstance(gen, EmptyGen):
        return TTGrid((), (len(gen.sheet),), ())
    if isinstance(gen, SheetSwapGen):
        wa, wb = len(gen.sheet_a), len(gen.sheet_b)
        return TTGrid(
            (wa, wb),
            (wb, wa),
            (
                (empty_table(wa, wb), identity_table(wa)),
                (identity_table(wb), empty_table(wb, wa)),
            ),
        )
    raise DiagramError(f"unknown generator {gen!r}")


def functor_P(sig: Signature, m: FMorphism) -> TTGrid:
    """Fold the generator images along the slice sequence."""
    f_typecheck(sig, m)
    states = sheet_states(sig, m)
    acc = grid_identity(tuple(len(s) for s in m.dom))
    for sl, before in zip(m.slices, states):
        ins, _ = fgen_io(sig, sl.gen)
        left = tuple(len(s) for s in before[: sl.sheet])
        right = tuple(len(s) for s in before[sl.sheet + len(ins) :])
        g = grid_tensor(
            grid_tensor(grid_identity(left), _generator_grid(sig, sl.gen)),
            grid_identity(right),
        )
        acc = grid_compose(acc, g)
    return acc


def grid_equiv(a: TTGrid, b: TTGrid, cap: int = DEFAULT_ATOM_CAP) -> bool:
    """Entrywise term equivalence plus equal coverage of filter outcomes."""
    if (a.dom_widths, a.cod_widths) != (b.dom_widths, b.cod_widths):
        return False
    for row_a, row_b in zip(a.tables, b.tables):
        for ta, tb in zip(row_a, row_b):
            if not tt_equiv(ta, tb) or not region_equiv(ta, tb, cap):
                return False
    return True


@dataclass(frozen=True)
class EqualVerdict:
    """Outcome of the workflow equivalence decision.

    The verdict is definitive for one-sheet boundaries; for several input or
    output sheets completeness is only conjectured, so the verdict carries a
    `conjectural` flag instead of being refused.
    """

    equal: bool
    conjectural: bool


def f_equal(sig: Signature, m1: FMorphism, m2: FMorphism) -> EqualVerdict:
    if m1.dom != m2.dom or m1.cod != m2.cod:
        raise DiagramError("equality requires identical sheet boundaries")
    equal = grid_equiv(functor_P(sig, m1), functor_P(sig, m2))
    conjectural = len(m1.dom) != 1 or len(m1.cod) != 1
    return EqualVerdict(equal, conjectural)
