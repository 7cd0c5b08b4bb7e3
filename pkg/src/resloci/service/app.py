"""FastAPI service wrapping the solver, membership, duality and split-bundle
operations.  Responses carry the same envelope as the CLI plus the exit code
the equivalent CLI invocation would return."""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, HTTPException

from .. import __version__, api
from ..reports import to_jsonable
from ..sections import SectionConfig
from ..wedge import PairVK
from .schemas import (
    ConfigModel,
    DualityRequest,
    HealthResponse,
    MembershipRequest,
    P1Request,
    PairModel,
    RaagRequest,
    ReportResponse,
    SolveRequest,
)

app = FastAPI(
    title="resloci",
    version=__version__,
    description="Resonance loci of pairs (V, K) via Grassmannian linear sections",
)


def _config_from(model: ConfigModel | None) -> SectionConfig:
    cfg = SectionConfig()
    if model is None:
        return cfg
    for name in ("path_tol", "final_tol", "dedup_tol", "rank_tol",
                 "residual_tol", "max_steps", "seed"):
        value = getattr(model, name)
        if value is not None:
            setattr(cfg, name, value)
    return cfg


def _pair_from(model: PairModel) -> PairVK:
    try:
        return PairVK.from_json_dict(model.model_dump())
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def _respond(payload: dict, code: int) -> ReportResponse:
    return ReportResponse(exit_code=code, **to_jsonable(payload))


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/solve", response_model=ReportResponse)
def solve(req: SolveRequest) -> ReportResponse:
    cfg = _config_from(req.config)
    if req.pair is not None:
        pair = _pair_from(req.pair)
    elif req.random is not None:
        if cfg.seed is None:
            cfg.seed = req.random.seed
        pair = api.random_pair_for_solve(req.random.n, req.random.dim_k, req.random.seed)
    else:
        raise HTTPException(status_code=422, detail="provide pair or random")
    try:
        payload, code = api.run_solve(pair, cfg)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return _respond(payload, code)


@app.post("/membership", response_model=ReportResponse)
def membership(req: MembershipRequest) -> ReportResponse:
    cfg = _config_from(req.config)
    pair = _pair_from(req.pair)
    try:
        if pair.mode == "rational":
            point = [Fraction(str(c)) for c in req.point]
        else:
            point = [complex(c[0], c[1]) if isinstance(c, list) else complex(c)
                     for c in req.point]
        if len(point) != pair.n or all(c == 0 for c in point):
            raise ValueError("point must be nonzero of length n")
        payload, code = api.run_membership(pair, point, cfg)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return _respond(payload, code)


@app.post("/duality", response_model=ReportResponse)
def duality(req: DualityRequest) -> ReportResponse:
    cfg = _config_from(req.config)
    try:
        payload, code = api.run_duality(req.n, req.dim_k, req.trials, req.degenerate, cfg)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return _respond(payload, code)


@app.post("/p1/strata", response_model=ReportResponse)
def p1_strata(req: P1Request) -> ReportResponse:
    try:
        payload, code = api.run_p1_strata(req.a, req.b, req.trials, req.seed,
                                          SectionConfig(seed=req.seed))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return _respond(payload, code)


@app.post("/p1/crosscheck", response_model=ReportResponse)
def p1_crosscheck(req: P1Request) -> ReportResponse:
    try:
        payload, code = api.run_p1_crosscheck(req.a, req.b, req.trials, req.seed,
                                              SectionConfig(seed=req.seed))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return _respond(payload, code)


@app.post("/p1/dims", response_model=ReportResponse)
def p1_dims(req: P1Request) -> ReportResponse:
    try:
        payload, code = api.run_p1_dims(req.a, req.b, min(req.trials, 10), req.seed,
                                        SectionConfig(seed=req.seed))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return _respond(payload, code)


@app.post("/raag", response_model=ReportResponse)
def raag(req: RaagRequest) -> ReportResponse:
    try:
        payload, code = api.run_raag(req.n, req.samples, req.seed,
                                     SectionConfig(seed=req.seed))
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return _respond(payload, code)
