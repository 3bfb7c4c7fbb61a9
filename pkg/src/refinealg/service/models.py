"""Request and response schemas of the service API."""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class TableText(BaseModel):
    """One truth-table grid entry rendered as canonical case lines."""

    row: int
    col: int
    cases: list[str]


class CheckRequest(BaseModel):
    signature: dict[str, Any]
    left: dict[str, Any]
    right: dict[str, Any]
    oracle: bool = False


class CheckResponse(BaseModel):
    verdict: Literal["equal", "not-equal"]
    conjectural: bool
    exit_code: int
    left_tables: list[TableText]
    right_tables: list[TableText]
    oracle_agrees: Optional[bool] = None


class NormalizeRequest(BaseModel):
    signature: dict[str, Any]
    workflow: dict[str, Any]


class NormalizeSummary(BaseModel):
    kind: Literal["e", "f"]
    copies_and_discards: Optional[int] = None
    swaps: Optional[int] = None
    operations: Optional[int] = None
    wide_slices: Optional[int] = None
    filters: Optional[list[str]] = None
    discards: Optional[int] = None
    unions: Optional[int] = None


class NormalizeResponse(BaseModel):
    normalized: dict[str, Any]
    summary: NormalizeSummary


class RunRequest(BaseModel):
    signature: dict[str, Any]
    valuation: dict[str, Any]
    workflow: dict[str, Any]
    inputs: list[str] = Field(description="one CSV document per input sheet")
    threads: int = 1


class RunResponse(BaseModel):
    sheets: list[str] = Field(description="one CSV document per output sheet")


class ExportRequest(BaseModel):
    signature: dict[str, Any]
    workflow: dict[str, Any]
    format: Literal["dot", "layered-svg", "text"] = "text"


class ExportResponse(BaseModel):
    format: str
    content: str
