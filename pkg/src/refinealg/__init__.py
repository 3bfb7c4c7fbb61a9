"""refinealg: a workflow algebra for row-wise ETL pipelines with facet filters.

Workflows are diagrams built from copy/discard/swap/operation slices on table
columns, lifted to sheets where filters route rows, unions merge tables and
empties introduce them. Equality of one-sheet workflows is decidable; this
package decides it, computes canonical normal forms, executes workflows on
CSV tables under a valuation, and exposes everything over a small HTTP API
with a command line client.
"""

from .errors import (
    CsvError,
    DiagramError,
    EnumerationCapError,
    ExecutionError,
    FormulaError,
    InternalInconsistencyError,
    RefineAlgError,
    SignatureError,
    TermError,
    UnknownSymbolError,
    ValuationError,
    WireFormatError,
)
from .signature import (
    FilterDecl,
    OpDecl,
    Signature,
    arity_of,
    parse_signature,
    serialize_signature,
    signature_from_obj,
)
from .terms import (
    AFF,
    CFF,
    TOP,
    App,
    Term,
    Var,
    aff_sort_key,
    aff_to_str,
    cff,
    cff_conjoin,
    cff_disjoint,
    cff_to_str,
    substitute,
    term_to_str,
)
from .truthtable import (
    TruthTable,
    TruthTableCase,
    canonicalize_tt,
    identity_table,
    partition_check,
    region_equiv,
    table,
    tt_compose,
    tt_equiv,
    tt_product,
    tt_project,
    tt_to_str,
    tt_union,
)
from .ediagram import (
    CopyGen,
    DiscardGen,
    EMorphism,
    ESlice,
    OpGen,
    SwapGen,
    e_compose,
    e_equal,
    e_identity,
    e_normalize,
    e_tensor,
    e_to_terms,
    e_typecheck,
    layer_profile,
    synthesize_from_terms,
)
from .fdiagram import (
    EmptyGen,
    FilterGen,
    FMorphism,
    FSlice,
    LiftGen,
    SheetSwapGen,
    UnionGen,
    f_compose,
    f_identity,
    f_tensor,
    f_typecheck,
    lift,
)
from .grid import EqualVerdict, TTGrid, f_equal, functor_P, grid_equiv
from .fnormal import (
    FNormalForm,
    f_decompose,
    f_normalize,
    f_sort_filters,
    recompose,
    validate_normal_form,
)
from .valuation import DomainSpec, Valuation, parse_valuation, random_valuation
from .tableio import Table, dumps_csv, load_csv, loads_csv, write_csv
from .execution import (
    Counterexample,
    random_valuation_check,
    run_e_row,
    run_workflow,
    symbolic_oracle_equal,
)
from .export import DiagramExport, export_diagram

__version__ = "0.1.0"
