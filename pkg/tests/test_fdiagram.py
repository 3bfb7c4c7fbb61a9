import random

import pytest

from refinealg import (
    AFF,
    App,
    DiagramError,
    EMorphism,
    ESlice,
    TOP,
    Var,
    cff,
    f_compose,
    f_equal,
    f_identity,
    f_tensor,
    f_typecheck,
    functor_P,
    grid_equiv,
    identity_table,
    lift,
    partition_check,
    table,
    tt_equiv,
)
from refinealg.axioms import axiom_signature, facet_axioms
from refinealg.ediagram import OpGen, e_compose, e_identity
from refinealg.fdiagram import (
    EmptyGen,
    FilterGen,
    FMorphism,
    FSlice,
    LiftGen,
    SheetSwapGen,
    UnionGen,
)
from refinealg.grid import grid_compose, grid_identity

from gen import rand_f_morphism, rand_signature

SIG = axiom_signature()
TU = ("T", "U")


def test_typecheck_lift():
    f_typecheck(SIG, lift(e_identity(TU)))


def test_typecheck_filter_needs_leading_columns():
    bad = FMorphism(
        (("U", "T"),), (("U", "T"), ("U", "T")), (FSlice(0, FilterGen("f", ("T",))),)
    )
    with pytest.raises(DiagramError):
        f_typecheck(SIG, bad)


def test_typecheck_merge_after_filter_boundary():
    lhs, _ = facet_axioms()["merge_after_filter"]
    f_typecheck(SIG, lhs)
    assert lhs.dom == lhs.cod == (TU,)


def test_compose_units():
    m = facet_axioms()["merge_after_filter"][0]
    assert f_compose(m, f_identity(m.cod)) == FMorphism(m.dom, m.cod, m.slices)
    assert f_compose(f_identity(m.dom), m) == FMorphism(m.dom, m.cod, m.slices)


def test_lift_is_functorial():
    step = EMorphism(("T",), ("T",), (ESlice(0, OpGen("step")),))
    two_lifts = f_compose(lift(step), lift(step))
    one_lift = lift(e_compose(step, step))
    verdict = f_equal(SIG, two_lifts, one_lift)
    assert verdict.equal and not verdict.conjectural


def test_empty_then_lift_equals_empty_of_cod():
    step = EMorphism(("T",), ("T",), (ESlice(0, OpGen("step")),))
    lhs = FMorphism((), (("T",),), (FSlice(0, EmptyGen(("T",))), FSlice(0, LiftGen(step))))
    rhs = FMorphism((), (("T",),), (FSlice(0, EmptyGen(("T",))),))
    verdict = f_equal(SIG, lhs, rhs)
    assert verdict.equal
    g = functor_P(SIG, lhs)
    assert g.dom_widths == () and g.cod_widths == (1,)


def test_tensor_shifts_sheets():
    m = facet_axioms()["merge_after_filter"][0]
    t = f_tensor(f_identity((("T",),)), m)
    f_typecheck(SIG, t)
    assert t.dom == (("T",), TU)


def test_functor_p_on_lifted_operation():
    pair = EMorphism(("T", "T"), ("T",), (ESlice(0, OpGen("pair")),))
    g = functor_P(SIG, lift(pair))
    expected = table(2, 1, (TOP, (App("pair", (Var(1), Var(2)), 1),)))
    assert g.tables[0][0] == expected


def test_functor_p_on_filter():
    m = FMorphism((TU,), (TU, TU), (FSlice(0, FilterGen("f", ("U",))),))
    g = functor_P(SIG, m)
    aff = AFF("f", (Var(1),))
    assert g.tables[0][0] == table(2, 2, (cff((aff, True)), (Var(1), Var(2))))
    assert g.tables[0][1] == table(2, 2, (cff((aff, False)), (Var(1), Var(2))))


def test_functor_p_merge_after_filter_is_identity():
    lhs, _ = facet_axioms()["merge_after_filter"]
    g = functor_P(SIG, lhs)
    entry = g.tables[0][0]
    assert len(entry.cases) == 2
    assert tt_equiv(entry, identity_table(2))


def test_functor_p_rows_are_partitions():
    rng = random.Random(21)
    for _ in range(30):
        sig = rand_signature(rng)
        m = rand_f_morphism(rng, sig)
        g = functor_P(sig, m)
        for row in g.tables:
            assert partition_check(row)


def test_functor_p_is_functorial():
    rng = random.Random(22)
    for _ in range(25):
        sig = rand_signature(rng)
        m1 = rand_f_morphism(rng, sig)
        m2 = rand_f_morphism(rng, sig, dom=m1.cod[0])
        whole = functor_P(sig, f_compose(m1, m2))
        parts = grid_compose(functor_P(sig, m1), functor_P(sig, m2))
        assert grid_equiv(whole, parts)
    sig = rand_signature(random.Random(5))
    dom = (sorted(sig.datatypes)[0],)
    ident = functor_P(sig, f_identity((dom,)))
    assert ident.tables[0][0] == identity_table(1)
    assert grid_equiv(ident, grid_identity((1,)))


def test_f_equal_axioms():
    for name, pair in facet_axioms().items():
        verdict = f_equal(SIG, pair[0], pair[1])
        assert verdict.equal, name


def test_f_equal_reflexive():
    m = facet_axioms()["copy_filter_commute"][0]
    assert f_equal(SIG, m, m).equal


def test_f_equal_distinguishes_filters():
    step = EMorphism(TU, TU, (ESlice(0, OpGen("step")),))

    def one_sided(filter_name):
        return FMorphism(
            (TU,),
            (TU,),
            (
                FSlice(0, FilterGen(filter_name, ("U",))),
                FSlice(0, LiftGen(step)),
                FSlice(0, UnionGen(TU)),
            ),
        )

    verdict = f_equal(SIG, one_sided("f"), one_sided("g"))
    assert not verdict.equal and not verdict.conjectural


def test_f_equal_swapped_routing_not_equal():
    split = FMorphism((("T",),), (("T",), ("T",)), (FSlice(0, FilterGen("f", ())),))
    swapped = FMorphism(
        (("T",),),
        (("T",), ("T",)),
        (
            FSlice(0, FilterGen("f", ())),
            FSlice(0, SheetSwapGen(("T",), ("T",))),
        ),
    )
    verdict = f_equal(SIG, split, swapped)
    assert not verdict.equal and verdict.conjectural


def test_f_equal_requires_matching_boundaries():
    with pytest.raises(DiagramError):
        f_equal(SIG, lift(e_identity(("T",))), lift(e_identity(TU)))
