"""Truth tables: finite case analyses mapping filter outcomes to output terms.

A truth table with n variables and p outputs is a finite set of cases, each a
conjunctive filter formula paired with a p-tuple of terms over x1..xn, with all
case conditions pairwise disjoint. Tables compose by substituting the upstream
output terms into the downstream conditions and values; unsatisfiable combined
conditions are dropped. Tables are compared up to the equivalence that checks
all jointly satisfiable case pairs produce identical value tuples.

Tautology-style checks enumerate boolean assignments over the atoms that occur
in the input, treating distinct atoms as independent; the atom count is capped
(default 20) to bound the 2^k enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EnumerationCapError, FormulaError
from .terms import (
    AFF,
    CFF,
    TOP,
    Term,
    Var,
    cff_disjoint,
    cff_satisfied,
    cff_sort_key,
    cff_substitute,
    cff_to_str,
    cff_try_conjoin,
    collect_affs,
    max_var,
    substitute,
    term_to_str,
)

DEFAULT_ATOM_CAP = 20


@dataclass(frozen=True)
class TruthTableCase:
    cond: CFF
    values: tuple[Term, ...]


@dataclass(frozen=True)
class TruthTable:
    n_vars: int
    n_outs: int
    cases: tuple[TruthTableCase, ...]

    def __post_init__(self):
        for case in self.cases:
            if len(case.values) != self.n_outs:
                raise FormulaError(
                    f"case has {len(case.values)} values, table declares {self.n_outs}"
                )
            for t in case.values:
                if max_var(t) > self.n_vars:
                    raise FormulaError(f"term {term_to_str(t)} exceeds {self.n_vars} variables")
            for aff, _ in case.cond.clauses:
                for t in aff.args:
                    if max_var(t) > self.n_vars:
                        raise FormulaError(
                            f"condition term {term_to_str(t)} exceeds {self.n_vars} variables"
                        )
        conds = [case.cond for case in self.cases]
        for i in range(len(conds)):
            for j in range(i + 1, len(conds)):
                if not cff_disjoint(conds[i], conds[j]):
                    raise FormulaError(
                        f"case conditions overlap: {cff_to_str(conds[i])} "
                        f"and {cff_to_str(conds[j])}"
                    )

    def affs(self) -> list[AFF]:
        return collect_affs(case.cond for case in self.cases)


def table(n_vars: int, n_outs: int, *cases: tuple[CFF, Sequence[Term]]) -> TruthTable:
    return TruthTable(
        n_vars, n_outs, tuple(TruthTableCase(c, tuple(v)) for c, v in cases)
    )


def identity_table(n: int) -> TruthTable:
    return table(n, n, (TOP, tuple(Var(i + 1) for i in range(n))))


def empty_table(n_vars: int, n_outs: int) -> TruthTable:
    return TruthTable(n_vars, n_outs, ())


def tt_compose(t: TruthTable, u: TruthTable) -> TruthTable:
    """Sequential composition; u's conditions are substituted before conjoining."""
    if t.n_outs != u.n_vars:
        raise FormulaError(f"cannot compose {t.n_outs}-output table with {u.n_vars}-variable table")
    cases = []
    for ci in t.cases:
        for cj in u.cases:
            cond_sub = cff_substitute(cj.cond, ci.values)
            if cond_sub is None:
                continue
            cond = cff_try_conjoin(ci.cond, cond_sub)
            if cond is None:
                continue
            cases.append(TruthTableCase(cond, tuple(substitute(v, ci.values) for v in cj.values)))
    return TruthTable(t.n_vars, u.n_outs, tuple(cases))


def tt_union(t: TruthTable, u: TruthTable) -> TruthTable:
    """Case-set union; defined only when every pair of conditions is disjoint."""
    if (t.n_vars, t.n_outs) != (u.n_vars, u.n_outs):
        raise FormulaError("union requires equal variable and output counts")
    for ci in t.cases:
        for cj in u.cases:
            if not cff_disjoint(ci.cond, cj.cond):
                raise FormulaError(
                    f"union of non-disjoint tables: {cff_to_str(ci.cond)} "
                    f"overlaps {cff_to_str(cj.cond)}"
                )
    return TruthTable(t.n_vars, t.n_outs, t.cases + u.cases)


def tt_product(t: TruthTable, u: TruthTable) -> TruthTable:
    """Pairwise conjunction of compatible cases with concatenated value tuples."""
    if t.n_vars != u.n_vars:
        raise FormulaError("product requires equal variable counts")
    cases = []
    for ci in t.cases:
        for cj in u.cases:
            cond = cff_try_conjoin(ci.cond, cj.cond)
            if cond is not None:
                cases.append(TruthTableCase(cond, ci.values + cj.values))
    return TruthTable(t.n_vars, t.n_outs + u.n_outs, tuple(cases))


def tt_project(t: TruthTable, k: int) -> TruthTable:
    if not 1 <= k <= t.n_outs:
        raise FormulaError(f"projection {k} out of range for {t.n_outs} outputs")
    return TruthTable(
        t.n_vars, 1, tuple(TruthTableCase(c.cond, (c.values[k - 1],)) for c in t.cases)
    )


def tt_equiv(t: TruthTable, u: TruthTable) -> bool:
    """True when every case of t (x) u carries a duplicated value tuple."""
    if (t.n_vars, t.n_outs) != (u.n_vars, u.n_outs):
        raise FormulaError("equivalence requires equal variable and output counts")
    p = t.n_outs
    prod = tt_product(t, u)
    return all(case.values[:p] == case.values[p:] for case in prod.cases)


def _assignments(atoms: Sequence[AFF], cap: int):
    if len(atoms) > cap:
        raise EnumerationCapError(
            f"{len(atoms)} atomic filter formulae exceed the enumeration cap {cap}"
        )
    for bits in itertools.product((False, True), repeat=len(atoms)):
        yield dict(zip(atoms, bits))


def partition_check(tables: Iterable[TruthTable], cap: int = DEFAULT_ATOM_CAP) -> bool:
    """Conditions pairwise disjoint across all tables and jointly exhaustive."""
    tables = list(tables)
    if not tables:
        return False
    n = tables[0].n_vars
    if any(t.n_vars != n for t in tables):
        raise FormulaError("partition requires a common variable count")
    conds = [case.cond for t in tables for case in t.cases]
    for i in range(len(conds)):
        for j in range(i + 1, len(conds)):
            if not cff_disjoint(conds[i], conds[j]):
                return False
    atoms = collect_affs(conds)
    return all(
        any(cff_satisfied(c, assignment) for c in conds)
        for assignment in _assignments(atoms, cap)
    )


def region_equiv(t: TruthTable, u: TruthTable, cap: int = DEFAULT_ATOM_CAP) -> bool:
    """True when the two tables cover exactly the same filter outcomes.

    Equivalence via tt_equiv alone is vacuous when no case pair is jointly
    satisfiable, so deciders pair it with this coverage comparison.
    """
    conds_t = [case.cond for case in t.cases]
    conds_u = [case.cond for case in u.cases]
    atoms = collect_affs(conds_t + conds_u)
    return all(
        any(cff_satisfied(c, a) for c in conds_t) == any(cff_satisfied(c, a) for c in conds_u)
        for a in _assignments(atoms, cap)
    )


def canonicalize_tt(t: TruthTable) -> TruthTable:
    """Deterministic case order: by condition (global atom order), then values."""
    key = lambda case: (cff_sort_key(case.cond), tuple(term_to_str(v) for v in case.values))
    return TruthTable(t.n_vars, t.n_outs, tuple(sorted(t.cases, key=key)))


def tt_to_str(t: TruthTable) -> str:
    lines = []
    for case in canonicalize_tt(t).cases:
        values = ",".join(term_to_str(v) for v in case.values)
        lines.append(f"{cff_to_str(case.cond)} -> ({values})")
    return "\n".join(lines)
