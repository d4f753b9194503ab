"""Model constants, the two nonlinear reaction terms, and the bound/guard
arithmetic behind the positivity monitors.

Both reaction terms accept scalars or numpy arrays.  The ratio N/(P+N) is
given the value 0 at the origin (N = P = 0): the origin only arises from
user-supplied data, and this convention keeps (0, 0) a fixed point instead
of raising.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ModelParams:
    """Physical constants of the coupled prey/predator system.

    ``gamma`` and ``delta`` are the minimal and limiting mortality of the
    predator; the natural ordering 0 < gamma <= delta is enforced.
    """

    alpha: float = 0.5
    beta: float = 1.5
    d1: float = 0.005
    d2: float = 0.2
    rho_q: float = 1.1
    sigma: float = 1.0
    gamma: float = 0.05
    kappa: float = 1.0
    delta: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"time order alpha={self.alpha} outside the admissible range (0, 1]")
        if not 1.0 < self.beta <= 2.0:
            raise ValueError(f"space order beta={self.beta} outside the admissible range (1, 2]")
        if self.d1 <= 0.0 or self.d2 <= 0.0:
            raise ValueError("diffusion constants d1, d2 must be positive")
        if not 0.0 < self.gamma <= self.delta:
            raise ValueError("mortalities must satisfy 0 < gamma <= delta")
        if self.rho_q <= 0.0 or self.sigma <= 0.0 or self.kappa <= 0.0:
            raise ValueError("rho_q, sigma and kappa must be positive")


@dataclass(frozen=True)
class BoundsConfig:
    """Invariant box for the discrete solution: (0, n_upper] x (0, p_upper]."""

    n_upper: float = 1.0
    p_upper: float = 21.0
    positivity_floor: float = 0.0

    @staticmethod
    def for_params(params: ModelParams, p_upper: float | None = None) -> "BoundsConfig":
        """Default predator cap 1/gamma + 1, the smallest simple cap
        above the admissibility threshold 1/gamma."""
        cap = 1.0 / params.gamma + 1.0 if p_upper is None else p_upper
        if cap <= 1.0 / params.gamma:
            raise ValueError(f"predator cap must exceed 1/gamma = {1.0 / params.gamma}")
        return BoundsConfig(n_upper=1.0, p_upper=cap, positivity_floor=0.0)


def _safe_ratio(num, den) -> np.ndarray:
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.zeros(np.broadcast(num, den).shape)
    np.divide(num, den, out=out, where=den > 0.0)
    return out


def reaction_f1(n, p, params: ModelParams):
    """Prey reaction N (1 - N - rho P / (P + N)); 0 at the origin."""
    n = np.asarray(n, dtype=float)
    p = np.asarray(p, dtype=float)
    out = n * (1.0 - n - params.rho_q * _safe_ratio(p, p + n))
    return out if out.ndim else float(out)


def reaction_f2(n, p, params: ModelParams):
    """Predator reaction sigma P (-(gamma + kappa delta P)/(1 + kappa P) + N/(P + N))."""
    n = np.asarray(n, dtype=float)
    p = np.asarray(p, dtype=float)
    mortality = (params.gamma + params.kappa * params.delta * p) / (1.0 + params.kappa * p)
    out = params.sigma * p * (-mortality + _safe_ratio(n, p + n))
    return out if out.ndim else float(out)


def mu_guard_thresholds(params: ModelParams, b1: float) -> tuple[float, float]:
    """Largest step factor mu keeping each species inside its bounds.

    ``b1`` is the second memory weight of the time discretization
    (b1 = 2^(1-alpha) - 1); the caps are min(1, (1-b1)/rho) for the prey
    and min(1, (1-b1)/(sigma delta)) for the predator.
    """
    if not 0.0 <= b1 < 1.0:
        raise ValueError("b1 must lie in [0, 1)")
    mu_max_n = min(1.0, (1.0 - b1) / params.rho_q)
    mu_max_p = min(1.0, (1.0 - b1) / (params.sigma * params.delta))
    return mu_max_n, mu_max_p
