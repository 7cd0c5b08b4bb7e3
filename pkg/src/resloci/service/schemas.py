"""Pydantic request and response models for the HTTP service."""

from __future__ import annotations

from typing import Any, List, Optional, Union

from pydantic import BaseModel, Field

Coordinate = Union[str, int, float, List[float]]


class PairModel(BaseModel):
    """Pair JSON schema: K rows in lex wedge coordinates; the complement is
    always derived server-side, never read."""

    n: int = Field(ge=4)
    field: str = "rational"
    K: List[List[Coordinate]]


class RandomPairModel(BaseModel):
    n: int = Field(ge=4)
    dim_k: int = Field(ge=0)
    seed: int = 0


class ConfigModel(BaseModel):
    path_tol: Optional[float] = None
    final_tol: Optional[float] = None
    dedup_tol: Optional[float] = None
    rank_tol: Optional[float] = None
    residual_tol: Optional[float] = None
    max_steps: Optional[int] = None
    seed: Optional[int] = None


class SolveRequest(BaseModel):
    pair: Optional[PairModel] = None
    random: Optional[RandomPairModel] = None
    config: Optional[ConfigModel] = None


class MembershipRequest(BaseModel):
    pair: PairModel
    point: List[Coordinate]
    config: Optional[ConfigModel] = None


class DualityRequest(BaseModel):
    n: int
    dim_k: int
    trials: int = 10
    degenerate: bool = False
    config: Optional[ConfigModel] = None


class P1Request(BaseModel):
    a: int = Field(ge=1)
    b: int = Field(ge=1)
    trials: int = 100
    seed: int = 0


class RaagRequest(BaseModel):
    n: int = Field(ge=4)
    samples: int = 1000
    seed: int = 0


class ReportResponse(BaseModel):
    """Envelope common to every operation: metadata plus the report payload."""

    tool: str
    version: str
    command: str
    seed: Optional[int] = None
    tolerances: dict
    wall_time_s: float
    exit_code: int
    report: Any


class HealthResponse(BaseModel):
    status: str
    version: str
