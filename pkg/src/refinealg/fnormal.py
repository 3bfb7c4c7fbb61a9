"""Decomposition and normal forms for one-sheet-in, one-sheet-out workflows.

Every such workflow factors as: one wide row-wise morphism computing every
column any branch will need, then a tree of filters, then per-branch column
discards, then the unions merging all branches back into the output sheet.
`f_decompose` extracts that factorization by a single symbolic pass that
pushes operations up, unions down and sheet bookkeeping out of the way all at
once. `f_sort_filters` canonicalizes it: filters are ordered by the global
atom order, branches whose two sides agree are merged, columns no branch
reads disappear into the wide morphism, and unions are left-associated over
the resulting branch order. Two workflows with the same case-analysis
semantics therefore normalize to byte-identical diagrams.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .ediagram import (
    EMorphism,
    e_to_terms,
    keep_columns_morphism,
    permutation_morphism,
    synthesize_from_terms,
)
from .errors import DiagramError, EnumerationCapError, InternalInconsistencyError
from .fdiagram import (
    EmptyGen,
    ESchema,
    FilterGen,
    FMorphism,
    FSlice,
    LiftGen,
    SheetSwapGen,
    UnionGen,
    f_typecheck,
)
from .signature import Signature
from .terms import AFF, Term, Var, aff_sort_key, substitute, term_type
from .truthtable import DEFAULT_ATOM_CAP

Cond = tuple[tuple[AFF, bool], ...]
Branch = tuple[Cond, tuple[Term, ...]]


@dataclass(frozen=True)
class _Leaf:
    values: tuple[Term, ...]


@dataclass(frozen=True)
class _Node:
    aff: AFF
    on_true: "_Tree"
    on_false: "_Tree"


_Tree = Union[_Leaf, _Node]


@dataclass(frozen=True)
class LeafSheet:
    """One output branch: the wide columns it keeps, a consecutive ascending block."""

    keep: tuple[int, ...]


@dataclass(frozen=True)
class FilterNode:
    """One filter application, tagged with the atom it decides."""

    aff: AFF
    columns: tuple[int, ...]
    on_true: "DecisionTree"
    on_false: "DecisionTree"


DecisionTree = Union[LeafSheet, FilterNode]


@dataclass(frozen=True)
class FilterApp:
    """Entry of the filter layer: sheet index at application time plus its atom."""

    sheet: int
    name: str
    columns: tuple[int, ...]
    aff: AFF


@dataclass(frozen=True)
class FNormalForm:
    dom: ESchema
    cod: ESchema
    wide: EMorphism
    tree: DecisionTree


def branch_semantics(sig: Signature, m: FMorphism) -> list[Branch]:
    """Symbolic evaluation of a one-input-sheet workflow into its branches.

    Each branch pairs the signed atoms accumulated along its route (in
    application order) with the terms its columns carry. Routes whose
    conditions contradict themselves are unreachable and dropped.
    """
    if len(m.dom) != 1:
        raise DiagramError("branch semantics needs exactly one input sheet")
    f_typecheck(sig, m)
    start: Branch = ((), tuple(Var(i + 1) for i in range(len(m.dom[0]))))
    sheets: list[list[Branch]] = [[start]]
    for sl in m.slices:
        s, gen = sl.sheet, sl.gen
        if isinstance(gen, LiftGen):
            outs = e_to_terms(sig, gen.morphism)
            sheets[s] = [
                (cond, tuple(substitute(t, cols) for t in outs)) for cond, cols in sheets[s]
            ]
        elif isinstance(gen, FilterGen):
            arity = len(sig.filter(gen.name).dom)
            true_side: list[Branch] = []
            false_side: list[Branch] = []
            for cond, cols in sheets[s]:
                aff = AFF(gen.name, cols[:arity])
                for polarity, side in ((True, true_side), (False, false_side)):
                    if (aff, not polarity) in cond:
                        continue
                    if (aff, polarity) in cond:
                        side.append((cond, cols))
                    else:
                        side.append((cond + ((aff, polarity),), cols))
            sheets[s : s + 1] = [true_side, false_side]
        elif isinstance(gen, UnionGen):
            sheets[s : s + 2] = [sheets[s] + sheets[s + 1]]
        elif isinstance(gen, EmptyGen):
            sheets.insert(s, [])
        elif isinstance(gen, SheetSwapGen):
            sheets[s], sheets[s + 1] = sheets[s + 1], sheets[s]
        else:
            raise DiagramError(f"unknown generator {gen!r}")
    if len(sheets) != 1:
        raise DiagramError("branch semantics needs exactly one output sheet")
    return sheets[0]


def _split_tree(branches: Sequence[tuple[Cond, tuple[Term, ...]]]) -> _Tree:
    """Rebuild the filter tree of a diagram from its branches, in diagram order."""
    if not branches:
        raise InternalInconsistencyError("branch conditions do not cover all rows")
    if len(branches) == 1 and not branches[0][0]:
        return _Leaf(branches[0][1])
    aff = next((rem[0][0] for rem, _ in branches if rem), None)
    if aff is None:
        raise InternalInconsistencyError("branch conditions are not pairwise disjoint")
    sides: dict[bool, list] = {True: [], False: []}
    for rem, vals in branches:
        signs = {pol for a, pol in rem if a == aff}
        if not signs:
            sides[True].append((rem, vals))
            sides[False].append((rem, vals))
        else:
            pol = signs.pop()
            consumed = tuple(entry for entry in rem if entry != (aff, pol))
            sides[pol].append((consumed, vals))
    return _Node(aff, _split_tree(sides[True]), _split_tree(sides[False]))


def _canonical_tree(branches: Sequence[tuple[dict, tuple[Term, ...]]], cap: int) -> _Tree:
    """Reduced ordered decision tree of the branch function: atoms ascend along
    every path and a test whose two sides agree is elided."""
    atoms = sorted({a for cond, _ in branches for a in cond}, key=aff_sort_key)
    if len(atoms) > cap:
        raise EnumerationCapError(
            f"{len(atoms)} atomic filter formulae exceed the enumeration cap {cap}"
        )

    def value_at(assign: dict) -> tuple[Term, ...]:
        hits = [
            vals
            for cond, vals in branches
            if all(assign[a] is pol for a, pol in cond.items())
        ]
        if len(hits) != 1:
            raise InternalInconsistencyError("branch conditions do not form a partition")
        return hits[0]

    def build(i: int, assign: dict) -> _Tree:
        if i == len(atoms):
            return _Leaf(value_at(assign))
        assign[atoms[i]] = True
        on_true = build(i + 1, assign)
        assign[atoms[i]] = False
        on_false = build(i + 1, assign)
        del assign[atoms[i]]
        if on_true == on_false:
            return on_true
        return _Node(atoms[i], on_true, on_false)

    return build(0, {})


def _tree_affs(tree: _Tree) -> list[AFF]:
    seen: list[AFF] = []

    def walk(t: _Tree):
        if isinstance(t, _Node):
            if t.aff not in seen:
                seen.append(t.aff)
            walk(t.on_true)
            walk(t.on_false)

    walk(tree)
    return seen


def _assemble(
    sig: Signature,
    dom: ESchema,
    cod: ESchema,
    tree: _Tree,
    aff_order: Sequence[AFF],
) -> FNormalForm:
    """Lay out the wide schema (one column block per atom, then one per branch)
    and rebuild the tree against those positions."""
    wide_terms: list[Term] = []
    aff_cols: dict[AFF, tuple[int, ...]] = {}
    for aff in aff_order:
        start = len(wide_terms)
        wide_terms.extend(aff.args)
        aff_cols[aff] = tuple(range(start, start + len(aff.args)))

    def place(t: _Tree) -> DecisionTree:
        if isinstance(t, _Leaf):
            if len(t.values) != len(cod):
                raise InternalInconsistencyError("branch width differs from the output sheet")
            for term, want in zip(t.values, cod):
                if term_type(term, sig, dom) != want:
                    raise InternalInconsistencyError("branch column type mismatch")
            start = len(wide_terms)
            wide_terms.extend(t.values)
            return LeafSheet(tuple(range(start, start + len(t.values))))
        return FilterNode(t.aff, aff_cols[t.aff], place(t.on_true), place(t.on_false))

    placed = place(tree)
    wide = synthesize_from_terms(sig, dom, wide_terms)
    return FNormalForm(dom, cod, wide, placed)


def f_decompose(sig: Signature, m: FMorphism) -> FNormalForm:
    """Factor a one-sheet workflow into wide morphism, filters, discards, unions."""
    if len(m.dom) != 1 or len(m.cod) != 1:
        raise DiagramError("decomposition requires one input sheet and one output sheet")
    branches = branch_semantics(sig, m)
    tree = _split_tree(branches)
    return _assemble(sig, m.dom[0], m.cod[0], tree, _tree_affs(tree))


def readout(sig: Signature, nf: FNormalForm) -> list[Branch]:
    """Branches encoded by a normal form: path conditions and kept column terms."""
    wide_terms = e_to_terms(sig, nf.wide)
    out: list[Branch] = []

    def walk(t: DecisionTree, path: Cond):
        if isinstance(t, LeafSheet):
            out.append((path, tuple(wide_terms[i] for i in t.keep)))
        else:
            walk(t.on_true, path + ((t.aff, True),))
            walk(t.on_false, path + ((t.aff, False),))

    walk(nf.tree, ())
    return out


def f_sort_filters(
    sig: Signature, nf: FNormalForm, cap: int = DEFAULT_ATOM_CAP
) -> FNormalForm:
    """Canonical form of a decomposition; depends only on its branch semantics."""
    branches = [(dict(cond), vals) for cond, vals in readout(sig, nf)]
    tree = _canonical_tree(branches, cap)
    aff_order = sorted(_tree_affs(tree), key=aff_sort_key)
    return _assemble(sig, nf.dom, nf.cod, tree, aff_order)


def recompose(sig: Signature, nf: FNormalForm) -> FMorphism:
    """Rebuild a workflow from a normal form.

    Filters must read their columns first, so each application is conjugated
    by a lifted permutation bringing its block to the front and back; the
    data on every sheet is untouched by that bookkeeping.
    """
    wide_schema = nf.wide.cod
    slices: list[FSlice] = [FSlice(0, LiftGen(nf.wide))]

    def emit(tree: DecisionTree, sheet: int) -> int:
        if isinstance(tree, LeafSheet):
            if tree.keep != tuple(range(len(wide_schema))):
                slices.append(
                    FSlice(sheet, LiftGen(keep_columns_morphism(wide_schema, tree.keep)))
                )
            return 1
        cols = tree.columns
        order = list(cols) + [i for i in range(len(wide_schema)) if i not in set(cols)]
        identity_order = order == list(range(len(wide_schema)))
        permuted = tuple(wide_schema[i] for i in order)
        if not identity_order:
            slices.append(FSlice(sheet, LiftGen(permutation_morphism(wide_schema, order))))
        slices.append(FSlice(sheet, FilterGen(tree.aff.name, permuted[len(cols) :])))
        if not identity_order:
            inverse = [0] * len(order)
            for k, src in enumerate(order):
                inverse[src] = k
            undo = permutation_morphism(permuted, inverse)
            slices.append(FSlice(sheet, LiftGen(undo)))
            slices.append(FSlice(sheet + 1, LiftGen(undo)))
        n_true = emit(tree.on_true, sheet)
        n_false = emit(tree.on_false, sheet + n_true)
        return n_true + n_false

    leaves = emit(nf.tree, 0)
    for _ in range(leaves - 1):
        slices.append(FSlice(0, UnionGen(nf.cod)))
    return FMorphism((nf.dom,), (nf.cod,), tuple(slices))


def f_normalize(sig: Signature, m: FMorphism, cap: int = DEFAULT_ATOM_CAP) -> FMorphism:
    """Canonical representative of a workflow's equivalence class."""
    return recompose(sig, f_sort_filters(sig, f_decompose(sig, m), cap))


def filter_layer(nf: FNormalForm) -> tuple[FilterApp, ...]:
    """The filter applications in emission order with application-time sheet indices."""
    apps: list[FilterApp] = []

    def walk(tree: DecisionTree, sheet: int) -> int:
        if isinstance(tree, LeafSheet):
            return 1
        apps.append(FilterApp(sheet, tree.aff.name, tree.columns, tree.aff))
        n_true = walk(tree.on_true, sheet)
        return n_true + walk(tree.on_false, sheet + n_true)

    walk(nf.tree, 0)
    return tuple(apps)


def discard_layer(nf: FNormalForm) -> tuple[tuple[int, ...], ...]:
    """Per output branch, the wide columns it discards."""
    width = len(nf.wide.cod)
    out: list[tuple[int, ...]] = []

    def walk(tree: DecisionTree):
        if isinstance(tree, LeafSheet):
            out.append(tuple(i for i in range(width) if i not in set(tree.keep)))
        else:
            walk(tree.on_true)
            walk(tree.on_false)

    walk(nf.tree)
    return tuple(out)


def union_count(nf: FNormalForm) -> int:
    return len(discard_layer(nf)) - 1


def validate_normal_form(sig: Signature, nf: FNormalForm) -> None:
    """Check layer purity: wide is a plain row-wise morphism from the input
    sheet, every tree node is a declared filter reading columns of its own
    types, every leaf only keeps columns typed like the output sheet."""
    if nf.wide.dom != nf.dom:
        raise DiagramError("wide morphism does not start at the input sheet")
    wide_terms = e_to_terms(sig, nf.wide)
    schema = nf.wide.cod

    def walk(tree: DecisionTree):
        if isinstance(tree, LeafSheet):
            if list(tree.keep) != sorted(set(tree.keep)):
                raise DiagramError("leaf keep set is not strictly ascending")
            kept = tuple(schema[i] for i in tree.keep)
            if kept != nf.cod:
                raise DiagramError(f"leaf keeps columns typed {kept}, output sheet is {nf.cod}")
            return
        decl = sig.filter(tree.aff.name)
        if tuple(schema[i] for i in tree.columns) != decl.dom:
            raise DiagramError(f"filter {tree.aff.name} applied to wrongly typed columns")
        if tuple(wide_terms[i] for i in tree.columns) != tree.aff.args:
            raise DiagramError("filter atom does not match the wires it reads")
        walk(tree.on_true)
        walk(tree.on_false)

    walk(nf.tree)
