"""Response models for the HTTP service.

Every compute endpoint returns a ``status`` of ``ok``, ``guard_abort`` or
``solver_failure``; transport/validation problems stay in HTTP status
codes.  The CLI maps these onto its exit codes.
"""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel

RunStatus = Literal["ok", "guard_abort", "solver_failure"]


class StepSummary(BaseModel):
    k: int
    min_n: float
    max_n: float
    min_p: float
    max_p: float
    guard_flag: bool = False
    guard_violation: Optional[str] = None


class Snapshot(BaseModel):
    """Full-grid values of both species at one retained time level."""

    k: int
    t: float
    n: list[float]
    p: list[float]


class SimulateResult(BaseModel):
    status: RunStatus = "ok"
    message: Optional[str] = None
    mu: float = 0.0
    mu_threshold_n: float = 0.0
    mu_threshold_p: float = 0.0
    x: list[float] = []
    snapshots: list[Snapshot] = []
    summary: list[StepSummary] = []
    abort_report: Optional[StepSummary] = None
    matrix_n: Optional[list[list[float]]] = None
    matrix_p: Optional[list[list[float]]] = None


class ConvergeResult(BaseModel):
    status: RunStatus = "ok"
    message: Optional[str] = None
    axis: Literal["time", "space"] = "space"
    fixed_step: float = 0.0
    levels: list[float] = []
    e_n: list[float] = []
    e_p: list[float] = []
    orders_n: list[float] = []
    orders_p: list[float] = []
    monotone: bool = True


class StabilityRow(BaseModel):
    tau: float
    epsilon: float
    max_divergence: float
    initial_size: float
    ratio: float


class StabilityResult(BaseModel):
    status: RunStatus = "ok"
    message: Optional[str] = None
    rows: list[StabilityRow] = []


class WeightsResult(BaseModel):
    status: RunStatus = "ok"
    message: Optional[str] = None
    family: str = "centered"
    order: float = 0.0
    values: list[float] = []


class HealthResult(BaseModel):
    status: str = "ok"
    version: str = "unknown"
