"""Discrete space operator: dense assembly with boundary fold, and direct
stencil application used as an independent consistency oracle.

The unknowns live on the interior nodes ``x_1..x_{M-1}``.  Zero-flux
boundaries are realized by the three-point interpolant
``u_0 = (4 u_1 - u_2)/3`` and ``u_M = (4 u_{M-1} - u_{M-2})/3``, which is
folded into the interior system at assembly time.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .weights import CenteredWeights, WsgdWeights

SpatialWeights = CenteredWeights | WsgdWeights

#: relative infinity-norm residual guaranteed by ``solve``
SOLVE_RESIDUAL_TOL = 1e-10


class SolverFailure(RuntimeError):
    """Raised when a linear solve cannot meet the residual guarantee."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform space-time grid on [left, right] x [0, t_final]."""

    left: float = 0.0
    right: float = 1.0
    m_intervals: int = 100
    n_steps: int = 100
    t_final: float = 1.0

    def __post_init__(self) -> None:
        if self.right <= self.left:
            raise ValueError("grid requires right > left")
        if self.m_intervals < 1 or self.n_steps < 0:
            raise ValueError("grid requires m_intervals >= 1 and n_steps >= 0")
        if self.t_final <= 0.0:
            raise ValueError("grid requires t_final > 0")

    @property
    def h(self) -> float:
        return (self.right - self.left) / self.m_intervals

    @property
    def tau(self) -> float:
        return self.t_final / self.n_steps

    @property
    def nodes(self) -> np.ndarray:
        """All grid nodes x_0..x_M."""
        return self.left + self.h * np.arange(self.m_intervals + 1)

    @property
    def interior_nodes(self) -> np.ndarray:
        return self.nodes[1:-1]


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense ``I + A`` for one species, with a reusable LU factorization.

    ``A = (mu * diffusion / h^beta) * W`` where ``W`` is the full symmetric
    stencil folded onto the interior unknowns.
    """

    entries: np.ndarray  # (M-1, M-1), I + A
    mu: float
    diffusion: float
    _lu: tuple = field(repr=False, default=None)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def eliminate_ghosts(interior: np.ndarray) -> np.ndarray:
    """Extend an interior vector u[1..M-1] to the full grid u[0..M].

    The boundary values come from the zero-slope three-point interpolant,
    exact for quadratics with vanishing derivative at the boundary.
    """
    interior = np.asarray(interior, dtype=float)
    if interior.ndim != 1 or len(interior) < 2:
        raise ValueError("interior vector must be 1-d with at least 2 entries")
    u0 = (4.0 * interior[0] - interior[1]) / 3.0
    um = (4.0 * interior[-1] - interior[-2]) / 3.0
    return np.concatenate(([u0], interior, [um]))


def apply_riesz(weights: SpatialWeights, field_values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Direct stencil application on a full-grid vector, no boundary fold.

    Returns ``-(1/h^beta) sum_j w[|j|] u_{i-j}`` at the interior nodes,
    with the sum truncated to the grid.  This is the raw (unfolded)
    operator; it serves as the truncation-order oracle for the assembled
    matrix.
    """
    u = np.asarray(field_values, dtype=float)
    m = grid.m_intervals
    if u.shape != (m + 1,):
        raise ValueError(f"field must have length M+1 = {m + 1}, got {u.shape}")
    if len(weights) < m:
        raise ValueError("weight table shorter than the grid stencil")
    w = weights.values
    ii = np.arange(1, m)
    ss = np.arange(0, m + 1)
    stencil = w[np.abs(np.subtract.outer(ii, ss))]
    return -(stencil @ u) / grid.h ** weights.beta


def assemble_matrix(
    weights: SpatialWeights, diffusion: float, mu: float, grid: GridSpec
) -> OperatorMatrix:
    """Assemble ``I + A`` on the interior unknowns with the boundary fold.

    The full (M+1)-wide stencil is folded by substituting the three-point
    boundary interpolants, which moves weighted copies of the first and
    last stencil columns onto columns 1, 2, M-2 and M-1.  The LU
    factorization is computed eagerly so repeated solves only
    back-substitute.
    """
    m = grid.m_intervals
    if m < 5:
        raise ValueError("assembly requires M >= 5 so the fold columns are distinct")
    if diffusion <= 0.0:
        raise ValueError("diffusion must be positive")
    if mu < 0.0:
        raise ValueError("mu must be non-negative")
    if len(weights) < m:
        raise ValueError("weight table shorter than the grid stencil")
    w = weights.values
    idx = np.arange(1, m)
    stencil = w[np.abs(np.subtract.outer(idx, idx))].copy()
    # fold of u_0 = (4 u_1 - u_2)/3 and u_M = (4 u_{M-1} - u_{M-2})/3
    stencil[:, 0] += (4.0 / 3.0) * w[idx]
    stencil[:, 1] -= (1.0 / 3.0) * w[idx]
    stencil[:, -1] += (4.0 / 3.0) * w[m - idx]
    stencil[:, -2] -= (1.0 / 3.0) * w[m - idx]
    entries = np.eye(m - 1) + (mu * diffusion / grid.h ** weights.beta) * stencil
    entries.setflags(write=False)
    return OperatorMatrix(entries=entries, mu=mu, diffusion=diffusion, _lu=lu_factor(entries))


def solve(matrix: OperatorMatrix, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """Solve ``(I + A) x = rhs``; returns ``(x, residual_inf_norm)``.

    The residual is checked against ``SOLVE_RESIDUAL_TOL * (1 + |rhs|_inf)``
    so iterative back-ends remain conformant substitutes.
    """
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (matrix.size,):
        raise ValueError(f"rhs must have length {matrix.size}, got {rhs.shape}")
    x = lu_solve(matrix._lu, rhs)
    residual = float(np.max(np.abs(matrix.entries @ x - rhs)))
    if not np.isfinite(residual) or residual > SOLVE_RESIDUAL_TOL * (1.0 + np.max(np.abs(rhs))):
        raise SolverFailure(
            f"linear solve residual {residual:.3e} exceeds tolerance; matrix may be singular"
        )
    return x, residual
