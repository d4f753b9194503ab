"""Manufactured-solution harness: exact solution, matching source terms,
error norms, and refinement studies for the convergence orders.

The built-in exact solution is ``(t+1)^2 x^2 (1-x)^2`` for both species on
the unit interval; its spatial derivative vanishes at both ends, so it is
compatible with the zero-flux boundary treatment.  The source terms are
closed forms (memory part, space-derivative part, negated reaction part);
their correctness is established by an operator-composition oracle in the
test suite rather than trusted from transcription.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import cos, gamma as gamma_fn, pi
from typing import Optional

import numpy as np

from .model import ModelParams, reaction_f1, reaction_f2
from .operators import GridSpec
from .stepper import FieldPair, run


def exact_solution(x, t):
    """(t+1)^2 x^2 (1-x)^2, same profile for both species."""
    x = np.asarray(x, dtype=float)
    out = (t + 1.0) ** 2 * x * x * (1.0 - x) ** 2
    return out if out.ndim else float(out)


def forcing(x, t: float, params: ModelParams):
    """Source pair (f, g) making the exact solution solve the system.

    f = memory_part - d1 * space_part - prey_reaction(exact, exact) and
    likewise for g with d2 and the predator reaction.  Because the two
    species share the exact solution, the interaction ratio reduces to
    1/2.  Evaluate at interior points only: the x^(2-beta) and
    (1-x)^(2-beta) factors are finite there and no endpoint limits are
    needed.
    """
    a, b = params.alpha, params.beta
    x = np.asarray(x, dtype=float)
    u = exact_solution(x, t)
    memory_part = (
        2.0
        * (1.0 - x) ** 2
        * x
        * x
        * (t ** (1.0 - a) / gamma_fn(2.0 - a) + t ** (2.0 - a) / gamma_fn(3.0 - a))
    )
    # space-fractional derivative of the exact profile: one polynomial
    # bracket per transform direction, sec(pi b/2) on the whole block
    bracket_left = 12.0 * (1.0 - x) ** 2 + (6.0 * x - 7.0) * b + b * b
    bracket_right = 12.0 * x * x - (6.0 * x + 1.0) * b + b * b
    sec = 1.0 / cos(b * pi / 2.0)
    space_part = (
        -((t + 1.0) ** 2)
        * sec
        / gamma_fn(5.0 - b)
        * (x ** (2.0 - b) * bracket_left + (1.0 - x) ** (2.0 - b) * bracket_right)
    )
    f_src = memory_part - params.d1 * space_part - u * (1.0 - u - params.rho_q / 2.0)
    g_src = memory_part - params.d2 * space_part - params.sigma * u * (
        -(params.gamma + params.kappa * params.delta * u) / (1.0 + params.kappa * u) + 0.5
    )
    return f_src, g_src


def linf_error(numeric: FieldPair, grid: GridSpec, t: float) -> tuple[float, float]:
    """Max interior-node deviation from the exact solution at time t."""
    x = grid.interior_nodes
    ref = exact_solution(x, t)
    e_n = float(np.max(np.abs(numeric.n_field - ref)))
    e_p = float(np.max(np.abs(numeric.p_field - ref)))
    return e_n, e_p


@dataclass
class ConvergenceReport:
    """Errors and empirical orders over a refinement sequence.

    ``orders_*[i] = log2(e[i] / e[i+1])`` for consecutive levels; a
    non-monotone error sequence is flagged, not treated as a failure.
    """

    axis: str  # "time" | "space"
    levels: list[float]  # the refined stepsize per level
    fixed_step: float  # the stepsize held fixed on the other axis
    e_n: list[float] = field(default_factory=list)
    e_p: list[float] = field(default_factory=list)
    orders_n: list[float] = field(default_factory=list)
    orders_p: list[float] = field(default_factory=list)
    monotone: bool = True

    def finalize(self) -> "ConvergenceReport":
        self.orders_n = [
            float(np.log2(self.e_n[i] / self.e_n[i + 1])) for i in range(len(self.e_n) - 1)
        ]
        self.orders_p = [
            float(np.log2(self.e_p[i] / self.e_p[i + 1])) for i in range(len(self.e_p) - 1)
        ]
        self.monotone = all(a >= b for a, b in zip(self.e_n, self.e_n[1:])) and all(
            a >= b for a, b in zip(self.e_p, self.e_p[1:])
        )
        return self


def mms_run(
    grid: GridSpec, params: ModelParams, scheme: str
) -> tuple[float, float]:
    """One nonhomogeneous run from the exact initial data; final-time errors."""
    x = grid.interior_nodes
    u0 = exact_solution(x, 0.0)
    initial = FieldPair(u0.copy(), u0.copy(), 0)
    history, _ = run(
        initial,
        grid,
        params,
        scheme,
        guard_mode="off",
        source_fn=lambda xi, t: forcing(xi, t, params),
    )
    return linf_error(history.level(history.top), grid, grid.t_final)


def _study_level(args: tuple) -> tuple[float, float]:
    # module-level so converge workers can pickle it
    m, n_steps, t_final, scheme, params = args
    grid = GridSpec(0.0, 1.0, m_intervals=m, n_steps=n_steps, t_final=t_final)
    return mms_run(grid, params, scheme)


def convergence_study(
    axis: str,
    levels: list[float],
    fixed: float,
    scheme: str,
    params: ModelParams,
    t_final: float = 1.0,
    workers: Optional[int] = None,
) -> ConvergenceReport:
    """Refine one axis over ``levels`` while holding the other at ``fixed``.

    ``levels`` are stepsizes (usually a halving sequence); each level is an
    independent run, fanned out to a process pool when ``workers`` permits.
    """
    if axis not in ("time", "space"):
        raise ValueError("axis must be 'time' or 'space'")
    jobs = []
    for step_size in levels:
        if axis == "time":
            m = _intervals_from_step(fixed)
            n_steps = _steps_from_step(step_size, t_final)
        else:
            m = _intervals_from_step(step_size)
            n_steps = _steps_from_step(fixed, t_final)
        jobs.append((m, n_steps, t_final, scheme, params))

    if workers is None or workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_study_level, jobs))
    else:
        results = [_study_level(job) for job in jobs]

    report = ConvergenceReport(axis=axis, levels=list(levels), fixed_step=fixed)
    for e_n, e_p in results:
        report.e_n.append(e_n)
        report.e_p.append(e_p)
    return report.finalize()


def _intervals_from_step(h: float) -> int:
    m = round(1.0 / h)
    if abs(m * h - 1.0) > 1e-9 * m:
        raise ValueError(f"space step {h} does not divide the unit interval")
    return m


def _steps_from_step(tau: float, t_final: float) -> int:
    n = round(t_final / tau)
    if n < 1 or abs(n * tau - t_final) > 1e-9 * n:
        raise ValueError(f"time step {tau} does not divide t_final = {t_final}")
    return n
