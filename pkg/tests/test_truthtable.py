import itertools
import random

import pytest
from hypothesis import given, strategies as st

from refinealg import (
    AFF,
    App,
    FormulaError,
    TOP,
    Var,
    canonicalize_tt,
    cff,
    identity_table,
    partition_check,
    table,
    tt_compose,
    tt_equiv,
    tt_product,
    tt_project,
    tt_to_str,
    tt_union,
)
from refinealg.terms import cff_satisfied
from refinealg.truthtable import empty_table

from gen import rand_truth_table

F = AFF("f", (Var(1),))
G = AFF("g", (Var(1),))
H = AFF("h", (Var(2),))
X1, X2, X3 = Var(1), Var(2), Var(3)


def test_compose_without_filters_is_substitution():
    t = table(2, 1, (TOP, (App("alpha", (X1, X2), 1),)))
    u = table(1, 1, (TOP, (App("beta", (X1,), 1),)))
    out = tt_compose(t, u)
    assert out.cases[0].values == (App("beta", (App("alpha", (X1, X2), 1),), 1),)


def test_identity_is_neutral_for_compose():
    u = table(2, 2, (cff((F, True)), (X1, X2)), (cff((F, False)), (X2, X1)))
    assert tt_compose(identity_table(2), u) == u
    assert tt_compose(u, identity_table(2)) == u


def test_compose_two_splits_covers_four_contexts():
    t = table(1, 1, (cff((F, True)), (X1,)), (cff((F, False)), (X1,)))
    u = table(1, 1, (cff((G, True)), (X1,)), (cff((G, False)), (X1,)))
    out = tt_compose(t, u)
    # reference check: the four sign combinations each satisfied exactly once
    assert len(out.cases) == 4
    for bits in itertools.product((False, True), repeat=2):
        assign = {F: bits[0], G: bits[1]}
        hits = [c for c in out.cases if cff_satisfied(c.cond, assign)]
        assert len(hits) == 1 and hits[0].values == (X1,)


def test_union_with_empty_table():
    t = table(1, 1, (cff((F, True)), (X1,)))
    assert tt_union(t, empty_table(1, 1)) == t


def test_union_of_complementary_cases():
    t = table(1, 1, (cff((F, True)), (X1,)))
    u = table(1, 1, (cff((F, False)), (X1,)))
    assert len(tt_union(t, u).cases) == 2


def test_union_rejects_overlap():
    t = table(1, 1, (TOP, (X1,)))
    u = table(1, 1, (cff((F, True)), (X1,)))
    with pytest.raises(FormulaError):
        tt_union(t, u)


def test_product_of_identities():
    out = tt_product(identity_table(2), identity_table(2))
    assert out.n_outs == 4
    assert out.cases[0].values == (X1, X2, X1, X2)


def test_product_with_constant_side():
    t = table(1, 1, (cff((F, True)), (X1,)), (cff((F, False)), (App("a", (X1,), 1),)))
    u = table(1, 1, (TOP, (X1,)))
    out = tt_product(t, u)
    assert {(c.cond, c.values) for c in out.cases} == {
        (cff((F, True)), (X1, X1)),
        (cff((F, False)), (App("a", (X1,), 1), X1)),
    }


def test_product_drops_contradictory_pairs():
    t = table(1, 1, (cff((F, True)), (X1,)), (cff((F, False)), (X1,)))
    u = table(1, 1, (cff((G, True)), (X1,)), (cff((G, False)), (X1,)))
    out = tt_product(t, u)
    assert len(out.cases) == 4
    for bits in itertools.product((False, True), repeat=2):
        assign = {F: bits[0], G: bits[1]}
        assert sum(cff_satisfied(c.cond, assign) for c in out.cases) == 1


def test_project_identity_picks_variable():
    out = tt_project(identity_table(3), 2)
    assert out.cases[0].values == (X2,)


def test_project_out_of_range():
    with pytest.raises(FormulaError):
        tt_project(identity_table(2), 3)


def test_projections_reassemble_to_table():
    t = table(2, 2, (cff((F, True)), (X1, X2)), (cff((F, False)), (X2, X2)))
    rebuilt = tt_product(tt_project(t, 1), tt_project(t, 2))
    assert tt_equiv(rebuilt, t)


def test_equiv_split_against_top():
    t = table(2, 2, (cff((F, True)), (X1, X2)), (cff((F, False)), (X1, X2)))
    u = table(2, 2, (TOP, (X1, X2)))
    prod = tt_product(t, u)
    assert len(prod.cases) == 2
    assert tt_equiv(t, u)


def test_equiv_reflexive():
    t = table(1, 1, (cff((F, True)), (X1,)), (cff((F, False)), (App("a", (X1,), 1),)))
    assert tt_equiv(t, t)


def test_equiv_distinguishes_variables():
    assert not tt_equiv(table(2, 1, (TOP, (X1,))), table(2, 1, (TOP, (X2,))))


def test_partition_check_top():
    assert partition_check([table(1, 1, (TOP, (X1,)))])


def test_partition_check_complementary():
    assert partition_check(
        [table(1, 1, (cff((F, True)), (X1,))), table(1, 1, (cff((F, False)), (X1,)))]
    )


def test_partition_check_uncovered_side():
    assert not partition_check([table(1, 1, (cff((F, True)), (X1,)))])


def test_canonicalize_idempotent_and_order_insensitive():
    a = table(3, 2,
              (cff((F, True), (G, True)), (X3, App("alpha", (X1, X1), 1))),
              (cff((F, True), (G, False)), (X2, App("alpha", (X1, X1), 1))),
              (cff((F, False)), (App("beta", (X2, X3), 2), X1)))
    shuffled = table(3, 2, *[(c.cond, c.values) for c in reversed(a.cases)])
    assert canonicalize_tt(a) == canonicalize_tt(shuffled)
    assert canonicalize_tt(canonicalize_tt(a)) == canonicalize_tt(a)


def test_case_list_rendering():
    a = table(3, 2,
              (cff((F, True), (G, True)), (X3, App("alpha", (X1, X1), 1))),
              (cff((F, True), (G, False)), (X2, App("alpha", (X1, X1), 1))),
              (cff((F, False)), (App("beta", (X2, X3), 2), X1)))
    assert tt_to_str(a).splitlines() == [
        "!f(x1) -> (beta(x2,x3)[2],x1)",
        "f(x1) & !g(x1) -> (x2,alpha(x1,x1)[1])",
        "f(x1) & g(x1) -> (x3,alpha(x1,x1)[1])",
    ]


# property tests over random decision-tree tables


def _tables(n_vars=2, n_outs=2, partial=False):
    return st.integers(0, 10_000).map(
        lambda seed: rand_truth_table(
            random.Random(seed), n_vars, n_outs, [F, G, H], partial=partial
        )
    )


@given(_tables(2, 2), _tables(2, 2))
def test_equiv_symmetric(a, b):
    assert tt_equiv(a, b) == tt_equiv(b, a)


@given(_tables(2, 2), _tables(2, 2), _tables(2, 2))
def test_equiv_transitive_on_partitions(a, b, c):
    if tt_equiv(a, b) and tt_equiv(b, c):
        assert tt_equiv(a, c)


@given(_tables(2, 2), _tables(2, 2))
def test_compose_associativity_up_to_equiv(a, b):
    mid = rand_truth_table(random.Random(99), 2, 2, [F, G])
    lhs = tt_compose(tt_compose(a, mid), b)
    rhs = tt_compose(a, tt_compose(mid, b))
    assert tt_equiv(lhs, rhs)


@given(_tables(2, 2))
def test_identity_units(a):
    assert tt_equiv(tt_compose(identity_table(2), a), a)
    assert tt_equiv(tt_compose(a, identity_table(2)), a)


@given(_tables(2, 1))
def test_product_with_identity_preserves_partition(a):
    prod = tt_product(a, identity_table(2))
    assert partition_check([a]) == partition_check([prod])


@given(_tables(2, 2), _tables(2, 2))
def test_operations_respect_equivalence(a, b):
    """Equivalent tables stay equivalent under composition and product."""
    split = table(2, 2, (cff((F, True)), (X1, X2)), (cff((F, False)), (X1, X2)))
    if tt_equiv(a, b):
        u = rand_truth_table(random.Random(5), 2, 2, [G, H])
        assert tt_equiv(tt_compose(a, u), tt_compose(b, u))
        assert tt_equiv(tt_compose(split, a), tt_compose(split, b))
        assert tt_equiv(tt_product(a, u), tt_product(b, u))
