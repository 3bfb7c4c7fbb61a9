import random
from collections import Counter

import pytest

from refinealg import (
    CsvError,
    EMorphism,
    ESlice,
    Table,
    dumps_csv,
    f_compose,
    lift,
    loads_csv,
    parse_signature,
    parse_valuation,
    random_valuation,
    random_valuation_check,
    run_e_row,
    run_workflow,
    symbolic_oracle_equal,
)
from refinealg.axioms import axiom_pairs_for_acceptance, axiom_signature, facet_axioms
from refinealg.ediagram import CopyGen, OpGen, SwapGen
from refinealg.errors import EnumerationCapError, ValuationError
from refinealg.fdiagram import FilterGen, FMorphism, FSlice, LiftGen, UnionGen
from refinealg.valuation import DomainSpec, Valuation, random_rows

from gen import rand_f_morphism, rand_signature

DEMO_SIG = parse_signature(
    '{"datatypes":["S","M"],'
    '"operations":[{"name":"concat","dom":["S","S"],"cod":["S"]},'
    '{"name":"upper","dom":["S"],"cod":["S"]}],'
    '"filters":[{"name":"min_donation","dom":["M"]}]}'
)
DEMO_VAL = parse_valuation(
    '{"types":{"S":{"kind":"string"},"M":{"kind":"money"}},'
    '"ops":{"concat":{"kind":"builtin","fn":"concat","args":{"sep":" "}},'
    '"upper":{"kind":"builtin","fn":"uppercase"}},'
    '"filters":{"min_donation":{"kind":"builtin","fn":"ge","args":{"value":2000}}}}',
    DEMO_SIG,
)

DONORS = Table(
    ("S", "S", "M"),
    (
        ("Green", "Amanda", 2500),
        ("Dawson", "Rupert", 1200),
        ("de Boer", "John", 4000),
        ("Tusk", "Maria", 300),
    ),
)


def full_name_workflow() -> EMorphism:
    return EMorphism(
        ("S", "S", "M"),
        ("S", "S", "S", "M"),
        (
            ESlice(0, CopyGen("S")),
            ESlice(2, CopyGen("S")),
            ESlice(1, SwapGen("S", "S")),
            ESlice(2, SwapGen("S", "S")),
            ESlice(2, OpGen("concat")),
            ESlice(0, OpGen("upper")),
        ),
    )


def test_run_full_name_workflow():
    out = run_workflow(DEMO_SIG, DEMO_VAL, lift(full_name_workflow()), [DONORS])
    assert len(out) == 1
    assert out[0].rows[0] == ("GREEN", "Amanda", "Amanda Green", 2500)
    assert out[0].rows[2] == ("DE BOER", "John", "John de Boer", 4000)


def test_run_identity_returns_input():
    ident = lift(EMorphism(("S", "S", "M"), ("S", "S", "M"), ()))
    out = run_workflow(DEMO_SIG, DEMO_VAL, ident, [DONORS])
    assert out[0] == DONORS


def test_filter_with_empty_subset_rejects_everything():
    sig = parse_signature(
        '{"datatypes":["S"],"operations":[],"filters":[{"name":"never","dom":["S"]}]}'
    )
    val = Valuation(
        {"S": DomainSpec("string")}, {}, {"never": lambda xs: False}
    )
    m = FMorphism((("S",),), (("S",), ("S",)), (FSlice(0, FilterGen("never", ())),))
    rows = Table(("S",), (("a",), ("b",)))
    out = run_workflow(sig, val, m, [rows])
    assert out[0].rows == () and out[1].rows == rows.rows


def test_run_e_row_concat_wiring():
    row = ("Green", "Amanda", 2500)
    out = run_e_row(DEMO_SIG, DEMO_VAL, full_name_workflow(), row)
    assert out == ("GREEN", "Amanda", "Amanda Green", 2500)


def test_run_e_row_uppercase():
    upper_only = EMorphism(("S",), ("S",), (ESlice(0, OpGen("upper")),))
    assert run_e_row(DEMO_SIG, DEMO_VAL, upper_only, ("de Boer",)) == ("DE BOER",)


def test_threshold_filter_splits_rows():
    m = FMorphism(
        (("M",),), (("M",), ("M",)), (FSlice(0, FilterGen("min_donation", ())),)
    )
    table = Table(("M",), ((2500,), (1200,), (4000,), (300,)))
    accepted, rejected = run_workflow(DEMO_SIG, DEMO_VAL, m, [table])
    assert accepted.rows == ((2500,), (4000,))
    assert rejected.rows == ((1200,), (300,))
    assert Counter(accepted.rows + rejected.rows) == Counter(table.rows)


def test_run_is_permutation_equivariant():
    rng = random.Random(3)
    sig = rand_signature(rng)
    m = rand_f_morphism(rng, sig)
    val = random_valuation(sig, rng)
    rows = random_rows(m.dom[0], val, rng, 12)
    shuffled = list(rows)
    rng.shuffle(shuffled)
    out1 = run_workflow(sig, val, m, [Table(m.dom[0], rows)])
    out2 = run_workflow(sig, val, m, [Table(m.dom[0], tuple(shuffled))])
    for a, b in zip(out1, out2):
        assert Counter(a.rows) == Counter(b.rows)


def test_run_respects_composition():
    rng = random.Random(5)
    for _ in range(10):
        sig = rand_signature(rng)
        m1 = rand_f_morphism(rng, sig)
        m2 = rand_f_morphism(rng, sig, dom=m1.cod[0])
        val = random_valuation(sig, rng)
        table = Table(m1.dom[0], random_rows(m1.dom[0], val, rng, 8))
        whole = run_workflow(sig, val, f_compose(m1, m2), [table])
        staged = run_workflow(sig, val, m2, run_workflow(sig, val, m1, [table]))
        assert whole == staged


def test_parallel_rows_match_serial():
    out1 = run_workflow(DEMO_SIG, DEMO_VAL, lift(full_name_workflow()), [DONORS], threads=1)
    out4 = run_workflow(DEMO_SIG, DEMO_VAL, lift(full_name_workflow()), [DONORS], threads=4)
    assert out1 == out4


def test_loads_csv_donor_table():
    text = (
        "S,S,M\nGreen,Amanda,25€\nDawson,Rupert,12€\nde Boer,John,40€\nTusk,Maria,3€\n"
    )
    table = loads_csv(text, ("S", "S", "M"), DEMO_VAL.types)
    assert table == DONORS


def test_loads_csv_header_only():
    assert loads_csv("S,M\n", ("S", "M"), DEMO_VAL.types).rows == ()


def test_loads_csv_ragged_row():
    with pytest.raises(CsvError, match="row 1"):
        loads_csv("S,M\nonly-one\n", ("S", "M"), DEMO_VAL.types)


def test_loads_csv_bad_money_cell():
    with pytest.raises(CsvError, match="row 1, column 2"):
        loads_csv("S,M\na,nonsense\n", ("S", "M"), DEMO_VAL.types)


def test_csv_round_trip():
    text = dumps_csv(DONORS, DEMO_VAL.types)
    assert loads_csv(text, DONORS.schema, DEMO_VAL.types) == DONORS
    assert dumps_csv(loads_csv(text, DONORS.schema, DEMO_VAL.types), DEMO_VAL.types) == text


def test_money_rendering_with_cents():
    spec = DomainSpec("money")
    assert spec.render_cell(1250) == "12.50€"
    assert spec.parse_cell("12.50€") == 1250
    assert spec.render_cell(2500) == "25€"


def test_oracle_merge_after_filter():
    sig = axiom_signature()
    lhs, rhs = facet_axioms()["merge_after_filter"]
    assert symbolic_oracle_equal(sig, lhs, rhs)


def test_oracle_reflexive():
    rng = random.Random(7)
    sig = rand_signature(rng)
    m = rand_f_morphism(rng, sig)
    assert symbolic_oracle_equal(sig, m, m)


def test_oracle_rejects_one_sided_rewrite():
    sig = axiom_signature()
    step = EMorphism(("T",), ("T",), (ESlice(0, OpGen("step")),))
    one_sided = FMorphism(
        (("T",),),
        (("T",),),
        (
            FSlice(0, FilterGen("f", ())),
            FSlice(0, LiftGen(step)),
            FSlice(0, UnionGen(("T",))),
        ),
    )
    ident = FMorphism((("T",),), (("T",),), ())
    assert not symbolic_oracle_equal(sig, one_sided, ident)


def test_oracle_cap_raises():
    sig = axiom_signature()
    m = FMorphism(
        (("T",),),
        (("T",),),
        (
            FSlice(0, FilterGen("f", ())),
            FSlice(0, FilterGen("g", ())),
            FSlice(0, UnionGen(("T",))),
            FSlice(0, UnionGen(("T",))),
        ),
    )
    with pytest.raises(EnumerationCapError):
        symbolic_oracle_equal(sig, m, m, cap=1)


def test_symbolic_cells_collapse_on_context_mismatch():
    # strict propagation: mixed contexts or a bottom argument poison the outputs
    from refinealg.execution import BOTTOM, _sym_e_row
    from refinealg import AFF, Var

    sig = axiom_signature()
    pair = EMorphism(("T", "T"), ("T",), (ESlice(0, OpGen("pair")),))
    ctx_a = frozenset()
    ctx_b = frozenset({AFF("f", (Var(1),))})
    mixed = _sym_e_row(pair, sig, [(ctx_a, Var(1)), (ctx_b, Var(2))], ctx_a)
    assert mixed == [BOTTOM]
    poisoned = _sym_e_row(pair, sig, [BOTTOM, (ctx_a, Var(2))], ctx_a)
    assert poisoned == [BOTTOM]


def test_oracle_cap_env_override(monkeypatch):
    sig = axiom_signature()
    m = FMorphism(
        (("T",),),
        (("T",),),
        (
            FSlice(0, FilterGen("f", ())),
            FSlice(0, FilterGen("g", ())),
            FSlice(0, UnionGen(("T",))),
            FSlice(0, UnionGen(("T",))),
        ),
    )
    monkeypatch.setenv("REFINEALG_AFF_CAP", "1")
    with pytest.raises(EnumerationCapError):
        symbolic_oracle_equal(sig, m, m)
    monkeypatch.setenv("REFINEALG_AFF_CAP", "8")
    assert symbolic_oracle_equal(sig, m, m)


def test_random_valuation_check_consistent_on_axioms():
    sig = axiom_signature()
    for name, lhs, rhs in axiom_pairs_for_acceptance():
        assert random_valuation_check(sig, lhs, rhs, trials=20, seed=11) is None, name


def test_random_valuation_check_finds_filter_difference():
    sig = axiom_signature()
    step = EMorphism(("T",), ("T",), (ESlice(0, OpGen("step")),))

    def one_sided(name):
        return FMorphism(
            (("T",),),
            (("T",),),
            (
                FSlice(0, FilterGen(name, ())),
                FSlice(0, LiftGen(step)),
                FSlice(0, UnionGen(("T",))),
            ),
        )

    counterexample = random_valuation_check(sig, one_sided("f"), one_sided("g"), trials=100, seed=3)
    assert counterexample is not None


def test_random_valuation_check_reflexive():
    sig = axiom_signature()
    m = facet_axioms()["filters_commute"][0]
    assert random_valuation_check(sig, m, m, trials=5, seed=1) is None


def test_valuation_requires_total_coverage():
    with pytest.raises(ValuationError, match="upper"):
        parse_valuation(
            '{"types":{"S":{"kind":"string"},"M":{"kind":"money"}},'
            '"ops":{"concat":{"kind":"builtin","fn":"concat"}},"filters":{}}',
            DEMO_SIG,
        )


def test_lookup_table_must_be_total():
    sig = parse_signature(
        '{"datatypes":["C"],"operations":[{"name":"swapv","dom":["C"],"cod":["C"]}],"filters":[]}'
    )
    with pytest.raises(ValuationError, match="misses input"):
        parse_valuation(
            '{"types":{"C":{"kind":"enum","values":["a","b"]}},'
            '"ops":{"swapv":{"kind":"table","rows":[["a","b"]]}},"filters":{}}',
            sig,
        )


def test_oracle_matches_decider_on_random_pairs():
    from refinealg import f_equal

    rng = random.Random(17)
    agreements = 0
    for _ in range(40):
        sig = rand_signature(rng)
        m1 = rand_f_morphism(rng, sig)
        m2 = rand_f_morphism(rng, sig, dom=m1.dom[0])
        if m1.cod != m2.cod:
            continue
        assert f_equal(sig, m1, m2).equal == symbolic_oracle_equal(sig, m1, m2)
        agreements += 1
    assert agreements > 5
