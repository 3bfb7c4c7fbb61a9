"""The service: equivalence checking, normalization, execution and export.

Run it with `uvicorn refinealg.service.app:app`; the bundled CLI talks to the
same app in-process by default. Domain errors surface as 422 responses; a
disagreement between the decision procedure and the oracle is a 500.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..ediagram import e_normalize, layer_profile
from ..errors import ExecutionError, InternalInconsistencyError, RefineAlgError
from ..execution import run_workflow, symbolic_oracle_equal
from ..fdiagram import FMorphism, lift
from ..fnormal import (
    discard_layer,
    f_decompose,
    f_sort_filters,
    filter_layer,
    recompose,
    union_count,
)
from ..grid import TTGrid, functor_P, f_equal
from ..export import export_diagram
from ..signature import signature_from_obj
from ..tableio import dumps_csv, loads_csv
from ..terms import aff_to_str
from ..valuation import valuation_from_obj
from ..wireformat import (
    decode_e_morphism,
    decode_f_morphism,
    encode_e_morphism,
    encode_f_morphism,
    workflow_kind,
)
from .models import (
    CheckRequest,
    CheckResponse,
    ExportRequest,
    ExportResponse,
    NormalizeRequest,
    NormalizeResponse,
    NormalizeSummary,
    RunRequest,
    RunResponse,
    TableText,
)
from ..truthtable import tt_to_str

app = FastAPI(title="refinealg", version="0.1.0")


@app.exception_handler(RefineAlgError)
def _domain_error(request: Request, exc: RefineAlgError):
    status = 500 if isinstance(exc, InternalInconsistencyError) else 422
    return JSONResponse(
        status_code=status, content={"error": str(exc), "kind": type(exc).__name__}
    )


def _load_workflow(doc: dict) -> tuple[str, FMorphism]:
    """Decode a workflow document; row-wise files become one-sheet workflows."""
    kind = workflow_kind(doc)
    if kind == "e":
        return "e", lift(decode_e_morphism(doc))
    return "f", decode_f_morphism(doc)


def _grid_text(grid: TTGrid) -> list[TableText]:
    return [
        TableText(row=i + 1, col=j + 1, cases=tt_to_str(t).splitlines())
        for i, row in enumerate(grid.tables)
        for j, t in enumerate(row)
    ]


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/check", response_model=CheckResponse)
def check(req: CheckRequest) -> CheckResponse:
    sig = signature_from_obj(req.signature)
    _, left = _load_workflow(req.left)
    _, right = _load_workflow(req.right)
    verdict = f_equal(sig, left, right)
    oracle_agrees = None
    if req.oracle and len(left.dom) == 1 and len(left.cod) == 1:
        oracle_verdict = symbolic_oracle_equal(sig, left, right)
        oracle_agrees = oracle_verdict == verdict.equal
        if not oracle_agrees:
            raise InternalInconsistencyError(
                "decision procedure and symbolic oracle disagree; "
                f"decider={verdict.equal}, oracle={oracle_verdict}"
            )
    exit_code = 3 if verdict.conjectural else (0 if verdict.equal else 1)
    return CheckResponse(
        verdict="equal" if verdict.equal else "not-equal",
        conjectural=verdict.conjectural,
        exit_code=exit_code,
        left_tables=_grid_text(functor_P(sig, left)),
        right_tables=_grid_text(functor_P(sig, right)),
        oracle_agrees=oracle_agrees,
    )


@app.post("/normalize", response_model=NormalizeResponse)
def normalize(req: NormalizeRequest) -> NormalizeResponse:
    sig = signature_from_obj(req.signature)
    kind = workflow_kind(req.workflow)
    if kind == "e":
        m = decode_e_morphism(req.workflow)
        normal = e_normalize(sig, m)
        profile = layer_profile(normal)
        summary = NormalizeSummary(
            kind="e",
            copies_and_discards=profile.copy_discard[1] - profile.copy_discard[0],
            swaps=profile.swaps[1] - profile.swaps[0],
            operations=profile.ops[1] - profile.ops[0],
        ) if profile else NormalizeSummary(kind="e")
        return NormalizeResponse(normalized=encode_e_morphism(normal), summary=summary)
    m = decode_f_morphism(req.workflow)
    nf = f_sort_filters(sig, f_decompose(sig, m))
    normal = recompose(sig, nf)
    summary = NormalizeSummary(
        kind="f",
        wide_slices=len(nf.wide.slices),
        filters=[aff_to_str(appn.aff) for appn in filter_layer(nf)],
        discards=sum(len(dropped) for dropped in discard_layer(nf)),
        unions=union_count(nf),
    )
    return NormalizeResponse(normalized=encode_f_morphism(normal), summary=summary)


@app.post("/run", response_model=RunResponse)
def run(req: RunRequest) -> RunResponse:
    sig = signature_from_obj(req.signature)
    val = valuation_from_obj(req.valuation, sig)
    _, m = _load_workflow(req.workflow)
    if len(req.inputs) != len(m.dom):
        raise ExecutionError(f"workflow has {len(m.dom)} input sheets, got {len(req.inputs)}")
    tables = [loads_csv(text, schema, val.types) for text, schema in zip(req.inputs, m.dom)]
    outputs = run_workflow(sig, val, m, tables, threads=max(1, req.threads))
    return RunResponse(sheets=[dumps_csv(t, val.types) for t in outputs])


@app.post("/export", response_model=ExportResponse)
def export(req: ExportRequest) -> ExportResponse:
    sig = signature_from_obj(req.signature)
    _, m = _load_workflow(req.workflow)
    result = export_diagram(sig, m, req.format)
    return ExportResponse(format=result.format, content=result.content)
