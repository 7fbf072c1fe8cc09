"""Pydantic request/response schemas of the HTTP service."""

import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator


def json_safe(x):
    """JSON-safe scalar: non-finite floats become their string names."""
    if isinstance(x, float) and not math.isfinite(x):
        if math.isnan(x):
            return "nan"
        return "inf" if x > 0 else "-inf"
    return x


def parse_tprime(value):
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity"):
            return math.inf
        try:
            return float(text)
        except ValueError:
            raise ValueError(f"tprime must be a number or 'inf', got {value!r}")
    return float(value)


class ClassifyRequest(BaseModel):
    eta0p: float
    eta1p: float
    nbar: float = Field(default=0.0, ge=0.0)
    tprime: Union[float, str] = "inf"
    tol: float = Field(default=1e-9, gt=0.0)

    @field_validator("tprime")
    @classmethod
    def _tprime(cls, v):
        return parse_tprime(v)


class ClassifyResponse(BaseModel):
    eta0p: float
    eta1p: float
    nbar: float
    tprime: Union[float, str]
    zeta0: float
    zeta1: float
    nprime: float
    entries: dict[str, Union[float, str]]
    ppt: list[bool]
    min_eigs: Optional[list[float]] = None
    state_class: str
    marginal: bool
    method: str
    report: str


class EvolveRequest(BaseModel):
    eta0p: float
    eta1p: float
    nbar: float = Field(default=0.0, ge=0.0)
    tmax: float = Field(gt=0.0)
    steps: int = Field(default=201, ge=2)
    tol: float = Field(default=1e-9, gt=0.0)
    jobs: int = Field(default=1, ge=1)


class GridAxis(BaseModel):
    name: Literal["eta0p", "eta1p", "nbar", "tprime"]
    start: float
    stop: float
    count: int = Field(ge=2)


class BoundaryRequest(BaseModel):
    axes: list[GridAxis] = Field(min_length=1, max_length=2)
    fixed: dict[str, float] = Field(default_factory=dict)
    which: Literal["fullsep", "bisep", "both"] = "both"
    check: bool = False
    jobs: int = Field(default=1, ge=1)


class FigureRequest(BaseModel):
    n: Literal[1, 2, 3]
    jobs: int = Field(default=1, ge=1)


class CsvResponse(BaseModel):
    columns: list[str]
    rows: int
    csv: str
    meta: dict[str, float] = Field(default_factory=dict)


class VerifyRequest(BaseModel):
    level: Literal["quick", "full"] = "quick"


class SuiteModel(BaseModel):
    name: str
    passed: bool
    max_dev: float
    threshold: float
    checks: int
    detail: str = ""


class VerifyResponse(BaseModel):
    level: str
    passed: bool
    suites: list[SuiteModel]
    report: str
