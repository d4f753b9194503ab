"""Coefficient tables for the time-memory and space-stencil discretizations.

Three families are provided:

* ``caputo_coeffs`` -- the L1 memory weights ``b[n] = (n+1)^(1-a) - n^(1-a)``
  used by the time-fractional stepper,
* ``centered_weights`` -- the symmetric fractional centered-difference
  weights ``g[j]`` for the space operator of order ``beta``,
* ``wsgd_weights`` -- the weighted-shifted Grunwald weights ``theta[j]``,
  a second symmetric second-order family for the same operator.

Tables are immutable and cached per (order, size); they are safe to share
across concurrent solver runs.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import cos, gamma, pi

import numpy as np


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CaputoCoeffs:
    """L1 memory weights for a time order ``alpha`` in (0, 1]."""

    alpha: float
    values: np.ndarray  # b[0..count-1], b[0] = 1, strictly decreasing

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class CenteredWeights:
    """Fractional centered-difference weights for a space order in (1, 2].

    Symmetry ``g[-j] = g[j]`` is implicit; only ``j >= 0`` is stored.
    """

    beta: float
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class WsgdWeights:
    """Symmetrized WSGD weights for a space order in (1, 2]; ``theta[-j] = theta[j]``."""

    beta: float
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"time order alpha={alpha} outside the admissible range (0, 1]")


def _check_beta(beta: float) -> None:
    if not 1.0 < beta <= 2.0:
        raise ValueError(f"space order beta={beta} outside the admissible range (1, 2]")


def _check_count(count: int) -> None:
    if count < 1:
        raise ValueError("count must be a positive integer")


@lru_cache(maxsize=None)
def caputo_coeffs(alpha: float, count: int) -> CaputoCoeffs:
    """Memory weights b[n] = (n+1)^(1-alpha) - n^(1-alpha), n = 0..count-1.

    At alpha = 1 the limit table [1, 0, 0, ...] is returned, so the stepper
    degenerates to a one-level (classical) time discretization.
    """
    _check_alpha(alpha)
    _check_count(count)
    if alpha == 1.0:
        b = np.zeros(count)
        b[0] = 1.0
    else:
        n = np.arange(count, dtype=float)
        b = (n + 1.0) ** (1.0 - alpha) - n ** (1.0 - alpha)
    return CaputoCoeffs(alpha=alpha, values=_frozen(b))


@lru_cache(maxsize=None)
def centered_weights(beta: float, count: int) -> CenteredWeights:
    """Centered-difference weights g[0..count-1] for space order ``beta``.

    g[0] comes from the closed form Gamma(beta+1)/Gamma(beta/2+1)^2; the
    remaining entries follow the stable two-term recurrence
    ``g[j+1] = (1 - (beta+1)/(beta/2+j+1)) g[j]``, which avoids Gamma
    evaluations at non-positive arguments.
    """
    _check_beta(beta)
    _check_count(count)
    g = np.empty(count)
    g[0] = gamma(beta + 1.0) / gamma(beta / 2.0 + 1.0) ** 2
    if count > 1:
        # sequential products keep the recurrence identity exact in floats
        factors = 1.0 - (beta + 1.0) / (beta / 2.0 + np.arange(count - 1, dtype=float) + 1.0)
        acc = g[0]
        for j in range(count - 1):
            acc = factors[j] * acc
            g[j + 1] = acc
        g[1:] += 0.0  # normalize -0.0 after the beta = 2 zero factor
    return CenteredWeights(beta=beta, values=_frozen(g))


@lru_cache(maxsize=None)
def wsgd_weights(beta: float, count: int) -> WsgdWeights:
    """Symmetrized WSGD weights theta[0..count-1] for space order ``beta``.

    theta[0], theta[1] and theta[2] are evaluated from pole-free closed
    forms; entries from j = 2 on follow the rational recurrence.  At
    beta = 2 the classical stencil [2, -1, 0, ...] is returned directly
    (the recurrence denominator vanishes there).
    """
    _check_beta(beta)
    _check_count(count)
    th = np.zeros(count)
    if beta == 2.0:
        th[0] = 2.0
        if count > 1:
            th[1] = -1.0
        return WsgdWeights(beta=beta, values=_frozen(th))
    c = 2.0 * cos(beta * pi / 2.0)  # negative on (1, 2)
    th[0] = (2.0 - beta - beta * beta) / c
    if count > 1:
        th[1] = beta * (beta + 2.0) * (beta - 1.0) / (4.0 * c)
    if count > 2:
        th[2] = beta * (beta - 1.0) * (2.0 - beta) * (3.0 + beta) / (12.0 * c)
    if count > 3:
        j = np.arange(2, count - 1, dtype=float)
        num = (j - beta) * (beta + beta * beta - 2.0 * (2.0 + j))
        den = (2.0 + j) * (beta + beta * beta - 2.0 * (1.0 + j))
        ratios = num / den
        acc = th[2]
        for i in range(count - 3):
            acc = ratios[i] * acc
            th[i + 3] = acc
    return WsgdWeights(beta=beta, values=_frozen(th))
