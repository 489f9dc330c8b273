"""Read-only HTTP/JSON service over a shared immutable dataset snapshot.

Endpoints mirror the engine outputs one-to-one and are stateless: what-if
state lives in the client, which passes factor overrides per request.
Malformed bodies return 400 with field diagnostics; infeasible scenarios
return 422.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from . import payloads
from .dataset import Dataset, load_dataset
from .errors import DatasetError, InfeasibleScheduleError, InvalidInputError
from .sensitivity import perturb_dataset, run_sensitivity, tornado_table
from .system import breakeven_year, project, system_tco


class SystemTcoRequest(BaseModel):
    variant: str
    year: int | None = None
    advancement: str = "moderate"
    fleet_size: int | None = Field(default=None, ge=1, le=3000)
    overrides: dict[str, float] = Field(default_factory=dict)


class ProjectRequest(BaseModel):
    variants: list[str] | None = None
    years: list[int] | None = None
    overrides: dict[str, float] = Field(default_factory=dict)


class SensitivityRequest(BaseModel):
    variant: str
    year: int | None = None
    delta: float = 0.10
    factors: list[str] | None = None


class BreakevenRequest(BaseModel):
    variant: str
    baseline: str | None = None
    start_year: int = 2023
    end_year: int = 2040
    with_infrastructure: bool = True
    fleet_size: int | None = Field(default=None, ge=1, le=3000)
    overrides: dict[str, float] = Field(default_factory=dict)


def _json(payload: dict) -> Response:
    return Response(content=payloads.encode(payload), media_type="application/json")


def _apply_overrides(dataset: Dataset, overrides: dict[str, float]) -> Dataset:
    for factor, delta in sorted(overrides.items()):
        dataset = perturb_dataset(dataset, factor, delta)
    return dataset


def create_app(dataset: Dataset | None = None) -> FastAPI:
    ds = dataset or load_dataset()
    app = FastAPI(title="fleettco", docs_url=None, redoc_url=None)
    # Read-only service, no credentials: safe to let the browser UI call it
    # from a static-file origin.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"], allow_headers=["*"]
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        problems = [
            {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return _json_error(400, "malformed request body", problems)

    @app.exception_handler(InvalidInputError)
    async def invalid_input(request: Request, exc: InvalidInputError):
        return _json_error(400, str(exc))

    @app.exception_handler(DatasetError)
    async def dataset_error(request: Request, exc: DatasetError):
        return _json_error(400, str(exc))

    @app.exception_handler(InfeasibleScheduleError)
    async def infeasible(request: Request, exc: InfeasibleScheduleError):
        return _json_error(422, str(exc))

    def _json_error(status: int, message: str, problems: list | None = None) -> Response:
        body = {"error": message}
        if problems:
            body["problems"] = problems
        return Response(
            content=payloads.encode(body), media_type="application/json", status_code=status
        )

    @app.get("/api/variants")
    def variants() -> Response:
        return _json(payloads.variants_payload(ds))

    @app.post("/api/system-tco")
    def system_tco_endpoint(req: SystemTcoRequest) -> Response:
        working = _apply_overrides(ds, req.overrides)
        result = system_tco(
            working, req.variant, req.year, advancement=req.advancement, fleet_size=req.fleet_size
        )
        return _json(payloads.system_tco_payload(working, result))

    @app.post("/api/project")
    def project_endpoint(req: ProjectRequest) -> Response:
        working = _apply_overrides(ds, req.overrides)
        rows = project(working, req.variants, req.years)
        return _json(payloads.project_payload(working, rows))

    @app.post("/api/sensitivity")
    def sensitivity_endpoint(req: SensitivityRequest) -> Response:
        results = tornado_table(
            run_sensitivity(ds, req.variant, req.year, req.factors, req.delta)
        )
        return _json(payloads.sensitivity_payload(ds, results))

    @app.post("/api/breakeven")
    def breakeven_endpoint(req: BreakevenRequest) -> Response:
        working = _apply_overrides(ds, req.overrides)
        base_variant = req.baseline or working.raw["system"]["baseline_variant"]
        years = list(range(req.start_year, req.end_year + 1))
        if not years:
            raise InvalidInputError("start_year must not exceed end_year")
        alt, base = {}, {}
        for y in years:
            ra = system_tco(working, req.variant, y, fleet_size=req.fleet_size)
            rb = system_tco(working, base_variant, y, fleet_size=req.fleet_size)
            alt[y] = ra.levelized_with_infra if req.with_infrastructure else ra.levelized_no_infra
            base[y] = rb.levelized_with_infra if req.with_infrastructure else rb.levelized_no_infra
        parity = breakeven_year(alt, base, years)
        return _json(
            payloads.breakeven_payload(
                working, req.variant, base_variant, years, alt, base, parity, req.with_infrastructure
            )
        )

    return app
