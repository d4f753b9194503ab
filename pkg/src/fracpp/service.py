"""HTTP service exposing the solver modes.

One POST endpoint per mode, each taking a full ``RunConfig`` body and
returning the mode's result model.  Requests that fail validation come
back as 422 (pydantic) or 400 (semantic config errors); abnormal compute
outcomes (guard aborts, solver failures) are reported in-band through the
``status`` field so clients can distinguish them from transport problems.

Run it with ``frac-pp serve`` or ``uvicorn fracpp.service:app``.
"""
from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

from fastapi import FastAPI, HTTPException

from .config import ConfigError, RunConfig
from .runner import run_converge, run_simulate, run_stability, run_weights_dump
from .schemas import (
    ConvergeResult,
    HealthResult,
    SimulateResult,
    StabilityResult,
    WeightsResult,
)

try:
    _VERSION = version("fracpp")
except PackageNotFoundError:  # running from a source tree
    _VERSION = "0.0.0+src"

app = FastAPI(
    title="frac-pp solver service",
    description=(
        "Semi-implicit finite-difference solver for a coupled space-time "
        "fractional predator-prey reaction-diffusion system"
    ),
    version=_VERSION,
)


def _expect_mode(config: RunConfig, mode: str) -> None:
    if config.mode != mode:
        raise HTTPException(
            status_code=400, detail=f"endpoint requires mode={mode!r}, got {config.mode!r}"
        )


@app.get("/health", response_model=HealthResult)
def health() -> HealthResult:
    return HealthResult(status="ok", version=_VERSION)


@app.post("/simulate", response_model=SimulateResult)
def simulate(config: RunConfig) -> SimulateResult:
    _expect_mode(config, "simulate")
    try:
        return run_simulate(config)
    except ConfigError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/converge/time", response_model=ConvergeResult)
def converge_time(config: RunConfig) -> ConvergeResult:
    _expect_mode(config, "converge-time")
    return run_converge(config)


@app.post("/converge/space", response_model=ConvergeResult)
def converge_space(config: RunConfig) -> ConvergeResult:
    _expect_mode(config, "converge-space")
    return run_converge(config)


@app.post("/stability", response_model=StabilityResult)
def stability(config: RunConfig) -> StabilityResult:
    _expect_mode(config, "stability")
    try:
        return run_stability(config)
    except ConfigError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.post("/weights-dump", response_model=WeightsResult)
def weights_dump(config: RunConfig) -> WeightsResult:
    _expect_mode(config, "weights-dump")
    return run_weights_dump(config)
