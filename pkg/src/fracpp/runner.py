"""Mode orchestration: turn a validated RunConfig into a response payload.

This layer is shared by the HTTP service and (through it) the CLI; it
performs no disk I/O, so the service stays stateless and the client owns
all artifact files.
"""
from __future__ import annotations

from .config import RunConfig
from .mms import convergence_study
from .model import mu_guard_thresholds
from .operators import GridSpec, SolverFailure
from .schemas import (
    ConvergeResult,
    SimulateResult,
    Snapshot,
    StabilityResult,
    StabilityRow,
    StepSummary,
    WeightsResult,
)
from .stepper import FieldPair, GuardViolation, build_operators, perturbation_experiment, run
from .weights import caputo_coeffs, centered_weights, wsgd_weights

PAPER_EXACT_SPACE_TAU = 1e-4


def _summary(report) -> StepSummary:
    return StepSummary(
        k=report.time_index,
        min_n=report.min_n,
        max_n=report.max_n,
        min_p=report.min_p,
        max_p=report.max_p,
        guard_flag=report.guard_violation is not None,
        guard_violation=report.guard_violation,
    )


def run_simulate(config: RunConfig) -> SimulateResult:
    grid = config.grid()
    params = config.model_params()
    x = grid.interior_nodes
    n0, p0 = config.initial_fields(x)
    initial = FieldPair(n0, p0, 0)

    mat_n, mat_p, coeffs, mu = build_operators(grid, params, config.scheme)
    b1 = float(coeffs.values[1]) if len(coeffs) > 1 else 0.0
    mu_n, mu_p = mu_guard_thresholds(params, b1)

    result = SimulateResult(
        mu=mu,
        mu_threshold_n=mu_n,
        mu_threshold_p=mu_p,
        x=[float(v) for v in grid.nodes],
    )
    if config.dump_matrix:
        result.matrix_n = mat_n.entries.tolist()
        result.matrix_p = mat_p.entries.tolist()

    try:
        history, reports = run(
            initial,
            grid,
            params,
            scheme=config.scheme,
            guards=config.bounds(),
            guard_mode=config.guards,
        )
    except GuardViolation as exc:
        result.status = "guard_abort"
        result.message = str(exc)
        result.abort_report = _summary(exc.report)
        return result
    except SolverFailure as exc:
        result.status = "solver_failure"
        result.message = str(exc)
        return result

    stride = config.snapshot_stride
    retained = sorted(set(range(0, history.top + 1, stride)) | {history.top})
    tau = grid.tau if grid.n_steps > 0 else 0.0
    for k in retained:
        level = history.level(k)
        result.snapshots.append(
            Snapshot(
                k=k,
                t=k * tau,
                n=[float(v) for v in level.n_full],
                p=[float(v) for v in level.p_full],
            )
        )
    result.summary = [_summary(r) for r in reports]
    return result


def run_converge(config: RunConfig) -> ConvergeResult:
    axis = "time" if config.mode == "converge-time" else "space"
    grid = config.grid()
    if axis == "time":
        fixed = grid.h
    else:
        fixed = PAPER_EXACT_SPACE_TAU if config.paper_exact else grid.tau
    try:
        report = convergence_study(
            axis,
            config.levels,
            fixed,
            config.scheme,
            config.model_params(),
            t_final=config.t_final,
            workers=config.workers,
        )
    except SolverFailure as exc:
        return ConvergeResult(status="solver_failure", message=str(exc), axis=axis)
    return ConvergeResult(
        axis=axis,
        fixed_step=report.fixed_step,
        levels=report.levels,
        e_n=report.e_n,
        e_p=report.e_p,
        orders_n=report.orders_n,
        orders_p=report.orders_p,
        monotone=report.monotone,
    )


def run_stability(config: RunConfig) -> StabilityResult:
    params = config.model_params()
    result = StabilityResult()
    try:
        for tau in config.levels:
            grid = GridSpec(
                left=config.left,
                right=config.right,
                m_intervals=config.m_intervals,
                n_steps=round(config.t_final / tau),
                t_final=config.t_final,
            )
            x = grid.interior_nodes
            n0, p0 = config.initial_fields(x)
            for epsilon in config.epsilons:
                divergence, initial_size = perturbation_experiment(
                    FieldPair(n0, p0, 0), grid, params, config.scheme, epsilon
                )
                ratio = divergence / initial_size if initial_size > 0 else 0.0
                result.rows.append(
                    StabilityRow(
                        tau=tau,
                        epsilon=epsilon,
                        max_divergence=divergence,
                        initial_size=initial_size,
                        ratio=ratio,
                    )
                )
    except SolverFailure as exc:
        return StabilityResult(status="solver_failure", message=str(exc))
    return result


def run_weights_dump(config: RunConfig) -> WeightsResult:
    if config.family == "caputo":
        table = caputo_coeffs(config.alpha, config.count)
        order = config.alpha
    elif config.family == "centered":
        table = centered_weights(config.beta, config.count)
        order = config.beta
    else:
        table = wsgd_weights(config.beta, config.count)
        order = config.beta
    return WeightsResult(
        family=config.family, order=order, values=[float(v) for v in table.values]
    )
