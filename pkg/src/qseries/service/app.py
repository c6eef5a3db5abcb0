"""FastAPI application wrapping the evaluator, the harness and the catalogs.

Status codes: 400 for malformed input (parse errors, bad configs, invalid
request bodies), 404 for unknown identities or catalogs, 422 for
mathematical errors raised while evaluating.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from .. import __version__
from ..errors import ConfigError, ParseError, QSeriesError, UnknownIdentity
from ..evaluator import evaluate_expr
from ..harness import (
    CATALOGS,
    RunConfig,
    catalog_listing,
    decode_params,
    find_catalog,
    report_csv,
    run_verification,
    verify_one,
)
from ..reports import encode_scalar
from .schemas import ErrorBody, EvalRequest, EvalResponse, RunConfigModel, VerifyRequest


def _error(status: int, err: Exception, **extra) -> JSONResponse:
    body = ErrorBody(error=type(err).__name__, message=str(err), **extra)
    return JSONResponse(status_code=status, content=body.model_dump(exclude_none=True))


def _value_text(value) -> str:
    if isinstance(value, complex):
        return repr(value.real) if value.imag == 0 else repr(value)
    return str(value)


def create_app() -> FastAPI:
    app = FastAPI(title="qseries", version=__version__)

    @app.exception_handler(ParseError)
    async def _parse_error(request: Request, err: ParseError):
        return _error(400, err, offset=err.offset, line=err.line, column=err.column,
                      expected=list(err.expected))

    @app.exception_handler(ConfigError)
    async def _config_error(request: Request, err: ConfigError):
        return _error(400, err)

    @app.exception_handler(RequestValidationError)
    async def _invalid_body(request: Request, err: RequestValidationError):
        parts = ["{}: {}".format(".".join(str(x) for x in e["loc"][1:]), e["msg"]) for e in err.errors()]
        return _error(400, ConfigError("; ".join(parts)))

    @app.exception_handler(UnknownIdentity)
    async def _unknown(request: Request, err: UnknownIdentity):
        return _error(404, err)

    @app.exception_handler(QSeriesError)
    async def _math_error(request: Request, err: QSeriesError):
        return _error(422, err, offset=getattr(err, "offset", None))

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/eval", response_model=EvalResponse)
    def eval_expr(req: EvalRequest) -> EvalResponse:
        value = evaluate_expr(req.expr, req.mode)
        return EvalResponse(expr=req.expr, mode=req.mode, value=encode_scalar(value),
                            text=_value_text(value))

    @app.post("/verify")
    def verify(req: VerifyRequest) -> dict:
        cat = find_catalog(req.id, req.catalog)
        if req.params is not None:
            return verify_one(cat, req.id, decode_params(req.params, req.mode), req.tol)
        cfg = RunConfig(seed=req.seed, samples=req.samples, tol=req.tol, mode=req.mode,
                        identities=[req.id], catalog=cat.name)
        return run_verification(cfg)

    @app.post("/verify-all")
    def verify_all(cfg: RunConfigModel) -> dict:
        return run_verification(RunConfig(**cfg.model_dump()))

    @app.post("/report")
    def report(cfg: RunConfigModel, format: str = "json"):
        if format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        result = run_verification(RunConfig(**cfg.model_dump()))
        if format == "csv":
            return PlainTextResponse(report_csv(result), media_type="text/csv")
        return result

    @app.get("/catalog")
    def catalogs() -> dict:
        return {"catalogs": list(CATALOGS)}

    @app.get("/catalog/{name}")
    def catalog(name: str) -> dict:
        if name not in CATALOGS:
            raise UnknownIdentity(f"unknown catalog {name!r}; choose from {', '.join(CATALOGS)}")
        return {"catalog": name, "entries": catalog_listing(name)}

    return app


app = create_app()
