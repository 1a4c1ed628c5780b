"""Symmetric degrees of freedom with ``I = S**beta`` and ``J = S**delta``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import capacity_fn
from .regions import alpha_grid, symcap_bounds

S_LADDER = (1e2, 1e3, 1e4, 1e5, 1e6)


@dataclass(frozen=True)
class DofPoint:
    beta: float
    delta: float
    value: float


def dof_closed_form(beta: float, delta: float) -> float:
    if beta < 0 or delta < 0:
        raise ValueError("beta and delta must be nonnegative")
    return min(
        max(0.0, 1.0 - delta),
        max(0.0, 1.0 - beta, beta - delta),
        max(0.0, 1.0 - beta / 2 - delta / 2, beta / 2 - delta / 2),
    )


def dof_point(beta: float, delta: float) -> DofPoint:
    return DofPoint(beta, delta, dof_closed_form(beta, delta))


def w_curve(beta: float) -> float:
    """Jammer-free symmetric DoF, piecewise in the interference exponent."""
    if beta <= 0.5:
        return 1.0 - beta
    if beta <= 2 / 3:
        return beta
    if beta <= 1.0:
        return 1.0 - beta / 2
    if beta <= 2.0:
        return beta / 2
    return 1.0


def dof_alpha_grid(S: float, I: float, J: float, grid_step: float = 1e-3,
                   per_decade: int = 200) -> np.ndarray:
    """Uniform alpha grid plus log-spaced points down to well below ``1/(1+I')``.

    At large ``S`` the best split is near ``1/(1+I')``, far below any
    practical uniform step.
    """
    Ip = I / (1 + J)
    decades = int(np.ceil(np.log10(1 + Ip))) + 3
    logs = np.logspace(-decades, 0, decades * per_decade + 1)
    return np.union1d(np.union1d(alpha_grid(grid_step), logs), [1 / (1 + Ip)])


def dof_numeric(beta: float, delta: float, S_list=S_LADDER,
                grid_step: float = 1e-3) -> list[tuple[float, float, float]]:
    """``(S, lower/C(S), upper/C(S))`` along an increasing SNR ladder."""
    out = []
    prev = 0.0
    for S in S_list:
        if S <= 0 or S <= prev:
            raise ValueError("S_list must be positive and increasing")
        prev = S
        I, J = S ** beta, S ** delta
        lo, up = symcap_bounds(S, I, J, alphas=dof_alpha_grid(S, I, J, grid_step))
        cs = capacity_fn(S)
        out.append((float(S), lo / cs, up / cs))
    return out


def suboptimal_alpha(beta: float, delta: float, S: float) -> float:
    return (1 + S ** delta) / (1 + S ** delta + S ** beta)


def suboptimal_alpha_feasible_at_scale(beta: float, delta: float, S: float) -> bool:
    """Whether ``alpha = 1/(1+I')`` meets the power condition at this ``S``."""
    if delta >= 1:
        raise ValueError("delta must be < 1; the region is empty otherwise")
    a = suboptimal_alpha(beta, delta, S)
    return a * S + (1 - a) * S ** beta > S ** delta


def feasibility_threshold(beta: float, delta: float, S_grid=None) -> float:
    """Smallest grid ``S`` beyond which the suboptimal alpha stays feasible.

    Returns ``inf`` if it is infeasible at the top of the grid.
    """
    if S_grid is None:
        S_grid = np.logspace(-3, 12, 1501)
    ok = np.array([suboptimal_alpha_feasible_at_scale(beta, delta, s) for s in S_grid])
    if not ok[-1]:
        return float("inf")
    bad = np.flatnonzero(~ok)
    return float(S_grid[0] if bad.size == 0 else S_grid[bad[-1] + 1])
