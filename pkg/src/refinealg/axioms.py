"""Concrete instances of the structural axioms, used by tests and demos.

The row-wise axioms equate diagrams that copy, discard and rearrange data;
the faceted axioms equate diagrams that route rows through filters. Each
builder returns the two (or three) sides as ready-made workflows over the
signature produced by `axiom_signature`.
"""

from __future__ import annotations

from .ediagram import CopyGen, DiscardGen, EMorphism, ESlice, OpGen, SwapGen
from .fdiagram import (
    FilterGen,
    FMorphism,
    FSlice,
    LiftGen,
    SheetSwapGen,
    UnionGen,
    lift,
)
from .signature import parse_signature

AXIOM_SIGNATURE_TEXT = """{
  "datatypes": ["T", "U"],
  "operations": [
    {"name": "step", "dom": ["T"], "cod": ["T"]},
    {"name": "shift", "dom": ["U"], "cod": ["U"]},
    {"name": "pair", "dom": ["T", "T"], "cod": ["T"]},
    {"name": "split", "dom": ["T"], "cod": ["T", "T"]}
  ],
  "filters": [
    {"name": "f", "dom": ["T"]},
    {"name": "g", "dom": ["T"]}
  ]
}"""


def axiom_signature():
    return parse_signature(AXIOM_SIGNATURE_TEXT)


def _e(dom, cod, *slices) -> EMorphism:
    return EMorphism(tuple(dom), tuple(cod), tuple(ESlice(o, g) for o, g in slices))


def cartesian_axioms(t: str = "T") -> dict[str, tuple[EMorphism, EMorphism]]:
    """The six row-wise axioms instantiated at type `t` (ops fixed on T)."""
    return {
        "copy_unital": (
            _e([t], [t], (0, CopyGen(t)), (0, DiscardGen(t))),
            _e([t], [t]),
        ),
        "copy_associative": (
            _e([t], [t] * 3, (0, CopyGen(t)), (0, CopyGen(t))),
            _e([t], [t] * 3, (0, CopyGen(t)), (1, CopyGen(t))),
        ),
        "op_without_outputs_discards": (
            _e(["T", "T"], [], (0, OpGen("pair")), (0, DiscardGen("T"))),
            _e(["T", "T"], [], (0, DiscardGen("T")), (0, DiscardGen("T"))),
        ),
        "copy_symmetric": (
            _e([t], [t, t], (0, CopyGen(t)), (0, SwapGen(t, t))),
            _e([t], [t, t], (0, CopyGen(t))),
        ),
        "copy_op_outputs": (
            _e(["T"], ["T", "T"], (0, OpGen("step")), (0, CopyGen("T"))),
            _e(["T"], ["T", "T"], (0, CopyGen("T")), (0, OpGen("step")), (1, OpGen("step"))),
        ),
        "discard_op_outputs": (
            _e(
                ["T"],
                [],
                (0, OpGen("split")),
                (1, DiscardGen("T")),
                (0, DiscardGen("T")),
            ),
            _e(["T"], [], (0, DiscardGen("T"))),
        ),
    }


def _f(dom, cod, *slices) -> FMorphism:
    return FMorphism(
        tuple(tuple(s) for s in dom),
        tuple(tuple(s) for s in cod),
        tuple(FSlice(s, g) for s, g in slices),
    )


def facet_axioms() -> dict[str, tuple[FMorphism, ...]]:
    """The five faceted axioms; 'filters_preserve_data' has two readings."""
    tu = ("T", "U")
    t2 = ("T", "T")
    relabel = _e(tu, tu, (1, OpGen("shift")))
    copy_t = _e(("T",), t2, (0, CopyGen("T")))
    drop_u = _e(tu, ("T",), (1, DiscardGen("U")))
    copy_first = _e(tu, ("T",) + tu, (0, CopyGen("T")))
    drop_first = _e(("T",) + tu, tu, (0, DiscardGen("T")))
    return {
        # Routing rows through a filter and merging them back changes nothing.
        "merge_after_filter": (
            _f([tu], [tu], (0, FilterGen("f", ("U",))), (0, UnionGen(tu))),
            _f([tu], [tu]),
        ),
        # Two filters on the same column commute, up to reordering the sheets.
        "filters_commute": (
            _f(
                [("T",)],
                [("T",)] * 4,
                (0, FilterGen("f", ())),
                (0, FilterGen("g", ())),
                (2, FilterGen("g", ())),
            ),
            _f(
                [("T",)],
                [("T",)] * 4,
                (0, FilterGen("g", ())),
                (0, FilterGen("f", ())),
                (2, FilterGen("f", ())),
                (1, SheetSwapGen(("T",), ("T",))),
            ),
        ),
        # A filter and an operation on disjoint columns commute.
        "filter_op_commute": (
            _f([tu], [tu, tu], (0, LiftGen(relabel)), (0, FilterGen("f", ("U",)))),
            _f(
                [tu],
                [tu, tu],
                (0, FilterGen("f", ("U",))),
                (0, LiftGen(relabel)),
                (1, LiftGen(relabel)),
            ),
        ),
        # Copying a column then filtering equals filtering then copying on both sheets.
        "copy_filter_commute": (
            _f([("T",)], [t2, t2], (0, LiftGen(copy_t)), (0, FilterGen("f", ("T",)))),
            _f(
                [("T",)],
                [t2, t2],
                (0, FilterGen("f", ())),
                (0, LiftGen(copy_t)),
                (1, LiftGen(copy_t)),
            ),
        ),
        # Filters only route rows: dropping a column a filter does not read
        # commutes with it, and filtering on a copy then dropping the copy is
        # the same as filtering directly.
        "filters_preserve_data": (
            _f(
                [tu],
                [("T",), ("T",)],
                (0, FilterGen("f", ("U",))),
                (0, LiftGen(drop_u)),
                (1, LiftGen(drop_u)),
            ),
            _f([tu], [("T",), ("T",)], (0, LiftGen(drop_u)), (0, FilterGen("f", ()))),
        ),
        "filters_preserve_data_via_copy": (
            _f(
                [tu],
                [tu, tu],
                (0, LiftGen(copy_first)),
                (0, FilterGen("f", tu)),
                (0, LiftGen(drop_first)),
                (1, LiftGen(drop_first)),
            ),
            _f([tu], [tu, tu], (0, FilterGen("f", ("U",)))),
        ),
    }


def axiom_pairs_for_acceptance():
    """Eleven named pairs: six row-wise (lifted) plus five faceted axioms."""
    pairs = []
    for name, (lhs, rhs) in cartesian_axioms().items():
        pairs.append((name, lift(lhs), lift(rhs)))
    facet = facet_axioms()
    order = [
        "merge_after_filter",
        "filters_commute",
        "filter_op_commute",
        "copy_filter_commute",
        "filters_preserve_data",
    ]
    for name in order:
        lhs, rhs = facet[name]
        pairs.append((name, lhs, rhs))
    return pairs
