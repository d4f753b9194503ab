"""Run configuration: a flat, JSON-serializable record shared by the CLI,
the config file on disk, and the HTTP service request bodies.

Keys mirror the model/grid field names one-to-one so every file key can be
overridden by a same-named command-line flag (the flag wins).  Defaults
reproduce the benchmark scenario: sigma = 1, rho_q = 1.1, gamma = 0.05,
kappa = 1, delta = 0.5, d1 = 0.005, d2 = 0.2 on the unit interval up to
t_final = 1 with h = tau = 0.01.
"""
from __future__ import annotations

import json
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .model import BoundsConfig, ModelParams
from .operators import GridSpec

Mode = Literal["simulate", "converge-time", "converge-space", "stability", "weights-dump"]
Scheme = Literal["centered", "wsgd"]
GuardSetting = Literal["off", "monitor", "strict"]
WeightsFamily = Literal["caputo", "centered", "wsgd"]

#: CLI token selecting the built-in benchmark initial profile
BENCHMARK_IC = "paper-ic"

#: time steps substituted for the finest tabulated runs at desk scale;
#: the exact tabulated step count is restored by ``paper_exact``
DESK_SCALE_STEPS = 2000
PAPER_EXACT_STEPS = 10000


def benchmark_initial_data(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Built-in initial profiles: small cosine perturbations of a coexistence state."""
    n0 = 0.113585 + 0.0214 * np.cos(np.pi * x)
    p0 = 0.471397 + 0.0066 * np.cos(np.pi * x)
    return n0, p0


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


class RunConfig(BaseModel):
    """One solver invocation, any mode; flat keys, all overridable."""

    model_config = ConfigDict(extra="forbid")

    mode: Mode = "simulate"
    scheme: Scheme = "centered"

    # model constants
    alpha: float = 0.5
    beta: float = 1.5
    d1: float = 0.005
    d2: float = 0.2
    rho_q: float = 1.1
    sigma: float = 1.0
    gamma: float = 0.05
    kappa: float = 1.0
    delta: float = 0.5

    # grid; None means "mode default", materialized by the validator
    left: float = 0.0
    right: float = 1.0
    m_intervals: Optional[int] = None
    n_steps: Optional[int] = None
    t_final: float = 1.0

    # guards
    guards: GuardSetting = "monitor"
    p_upper: Optional[float] = None

    # outputs
    out_dir: str = "out"
    snapshot_stride: int = Field(default=1, ge=1)
    dump_matrix: bool = False

    # refinement / stability sweeps
    levels: Optional[list[float]] = None
    epsilons: list[float] = Field(default_factory=lambda: [1e-3, 1e-6])
    paper_exact: bool = False
    workers: Optional[int] = None

    # initial data: the benchmark token, or "custom" with explicit node values
    ic: str = BENCHMARK_IC
    ic_n: Optional[list[float]] = None
    ic_p: Optional[list[float]] = None

    # weights-dump selection
    family: WeightsFamily = "centered"
    count: int = Field(default=64, ge=1)

    @model_validator(mode="after")
    def _materialize_defaults(self) -> "RunConfig":
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha = {self.alpha} outside the admissible range (0, 1]")
        if not 1.0 < self.beta <= 2.0:
            raise ValueError(f"beta = {self.beta} outside the admissible range (1, 2]")
        if self.m_intervals is None:
            self.m_intervals = 200 if self.mode == "converge-time" else 100
        if self.n_steps is None:
            if self.mode == "converge-space":
                self.n_steps = PAPER_EXACT_STEPS if self.paper_exact else DESK_SCALE_STEPS
            else:
                self.n_steps = 100
        if self.levels is None:
            if self.mode == "converge-time":
                self.levels = [0.1, 0.05, 0.025, 0.0125]
            elif self.mode == "converge-space":
                self.levels = (
                    [0.1, 0.05, 0.025, 0.0125] if self.paper_exact else [0.1, 0.05, 0.025]
                )
            elif self.mode == "stability":
                self.levels = [0.02, 0.01, 0.005]
            else:
                self.levels = []
        if self.ic != BENCHMARK_IC and self.ic != "custom":
            raise ValueError(
                f"ic must be {BENCHMARK_IC!r} or 'custom' (with ic_n/ic_p node values); "
                "the CLI resolves a CSV path into custom values"
            )
        if self.ic == "custom" and (self.ic_n is None or self.ic_p is None):
            raise ValueError("custom initial data requires ic_n and ic_p")
        return self

    # -- conversion helpers -------------------------------------------------

    def model_params(self) -> ModelParams:
        return ModelParams(
            alpha=self.alpha,
            beta=self.beta,
            d1=self.d1,
            d2=self.d2,
            rho_q=self.rho_q,
            sigma=self.sigma,
            gamma=self.gamma,
            kappa=self.kappa,
            delta=self.delta,
        )

    def grid(self) -> GridSpec:
        return GridSpec(
            left=self.left,
            right=self.right,
            m_intervals=self.m_intervals,
            n_steps=self.n_steps,
            t_final=self.t_final,
        )

    def bounds(self) -> BoundsConfig:
        return BoundsConfig.for_params(self.model_params(), p_upper=self.p_upper)

    def initial_fields(self, x_interior: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        if self.ic == BENCHMARK_IC:
            return benchmark_initial_data(x_interior)
        n0 = np.asarray(self.ic_n, dtype=float)
        p0 = np.asarray(self.ic_p, dtype=float)
        want = len(x_interior)
        if len(n0) == want + 2:  # full-grid values supplied; drop the boundary pair
            n0, p0 = n0[1:-1], p0[1:-1]
        if len(n0) != want or len(p0) != want:
            raise ConfigError(
                f"initial data must supply {want} interior (or {want + 2} full-grid) "
                f"node values, got {len(n0)}/{len(p0)}"
            )
        return n0, p0


def parse_config(path: Optional[str] = None, overrides: Optional[dict] = None) -> RunConfig:
    """Build a validated RunConfig from an optional JSON file plus overrides.

    The file holds a flat JSON object with RunConfig keys; ``overrides``
    (typically parsed command-line flags) win over file values.
    """
    data: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object of flat keys")
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**data)
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc


def serialize_config(config: RunConfig) -> str:
    """Inverse of ``parse_config``: parse(serialize(c)) == c."""
    return config.model_dump_json(indent=2)
