"""Request and response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field

Mode = Literal["float", "rational"]
CatalogName = Literal["identities", "transforms", "qintegrals", "bibasic", "orthopoly", "all"]


class EvalRequest(BaseModel):
    expr: str
    mode: Mode = "float"


class EvalResponse(BaseModel):
    expr: str
    mode: Mode
    value: Any
    text: str


class RunConfigModel(BaseModel):
    """Mirrors harness.RunConfig; unset fields take the harness defaults."""

    seed: int = 42
    samples: int = Field(10, ge=1)
    tol: float | None = Field(None, gt=0)
    mode: Mode = "float"
    identities: list[str] = Field(default_factory=list)
    catalog: CatalogName = "identities"
    workers: int = Field(1, ge=1)


class VerifyRequest(BaseModel):
    """Verify one entry, either at given parameters or at seeded samples."""

    id: str
    catalog: CatalogName | None = None
    params: dict[str, Any] | None = None
    seed: int = 42
    samples: int = Field(10, ge=1)
    tol: float | None = Field(None, gt=0)
    mode: Mode = "float"


class ErrorBody(BaseModel):
    error: str
    message: str
    offset: int | None = None
    line: int | None = None
    column: int | None = None
    expected: list[str] | None = None
