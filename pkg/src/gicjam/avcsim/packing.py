"""Empirical spot-check of the common-randomness packing bound.

``p2`` averages, over codebook columns ``k`` and messages ``i``, the
probability that some other codeword ``x_j(k)`` of the same column is typical
and at least as close to ``x_i(k) + w + V`` as the true codeword. Storing all
``N*K`` codewords is out of reach at interesting rates, so each trial draws
one fresh column's true codeword and noise and integrates the ``N - 1``
independent competitors out exactly: for a single Gaussian competitor the
event depends only on its component along ``y`` (standard normal) and the
squared norm of the rest (chi-square with ``n - 1`` degrees of freedom).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid

from ..params import capacity_fn
from .codebook import default_epsilon

MENU = ("gaussian", "codeword", "spike", "constant")


@dataclass(frozen=True)
class PackingEstimate:
    n: int
    R: float
    p2: dict  # strategy -> mean estimate
    stderr: dict

    @property
    def worst(self) -> float:
        return max(self.p2.values())


def _chi2_between(lo, hi, df):
    lo = np.maximum(lo, 0.0)
    hi = np.maximum(hi, lo)
    lower_tail = stats.chi2.cdf(lo, df) < 0.5
    a = stats.chi2.cdf(hi, df) - stats.chi2.cdf(lo, df)
    b = stats.chi2.sf(lo, df) - stats.chi2.sf(hi, df)
    return np.maximum(np.where(lower_tail, a, b), 0.0)


def competitor_prob(ynorm, znorm2, n: int, eps: float, points: int = 2001) -> np.ndarray:
    """P(one competitor is typical and within ``||z||`` of ``y``), vectorized."""
    ynorm = np.atleast_1d(np.asarray(ynorm, dtype=float))
    z2 = np.atleast_1d(np.asarray(znorm2, dtype=float))
    r = np.sqrt(z2)
    top = math.sqrt(n * (1 + eps))
    t_lo = np.maximum(ynorm - r, -top)
    t_hi = np.minimum(ynorm + r, top)
    out = np.zeros_like(ynorm)
    live = t_hi > t_lo
    if not live.any():
        return out
    u = np.linspace(0.0, 1.0, points)
    t = t_lo[live, None] + (t_hi - t_lo)[live, None] * u[None, :]
    rest_hi = np.minimum(z2[live, None] - (ynorm[live, None] - t) ** 2, n * (1 + eps) - t * t)
    rest_lo = n * (1 - eps) - t * t
    f = stats.norm.pdf(t) * _chi2_between(rest_lo, rest_hi, n - 1)
    out[live] = trapezoid(f, t, axis=1)
    return out


def _menu_vector(kind: str, n: int, Lambda: float, rng: np.random.Generator) -> np.ndarray:
    if Lambda == 0:
        return np.zeros(n)
    if kind == "gaussian":
        g = rng.standard_normal(n)
        return math.sqrt(n * Lambda) * g / np.linalg.norm(g)
    if kind == "codeword":
        # codeword of an unrelated column, scaled to the jammer's power
        w = math.sqrt(Lambda) * rng.standard_normal(n)
        e = w @ w
        return w if e <= n * Lambda else w * math.sqrt(n * Lambda / e)
    if kind == "spike":
        w = np.zeros(n)
        w[0] = math.sqrt(n * Lambda)
        return w
    if kind == "constant":
        return np.full(n, math.sqrt(Lambda))
    raise ValueError(f"unknown menu entry {kind!r}")


def packing_spotcheck(R: float, Lambda: float, sigma2: float, n: int, K: int | None = None,
                     trials: int = 500, seed: int = 0, epsilon: float | None = None,
                     menu=MENU) -> PackingEstimate:
    """Estimate ``p2`` for each jammer vector in ``menu``.

    ``K`` (columns sharing the same messages) only enters through the
    requirement ``K >= n**2``; columns are i.i.d., so each trial samples a
    fresh one.
    """
    if K is None:
        K = n * n
    if K < n * n:
        raise ValueError("the packing bound needs K >= n**2")
    eps = default_epsilon(n) if epsilon is None else epsilon
    N = math.floor(2.0 ** (n * R))
    p2, se = {}, {}
    for idx, kind in enumerate(menu):
        rng = np.random.default_rng(np.random.SeedSequence([seed, 2, n, idx]))
        X = rng.standard_normal((trials, n))
        V = math.sqrt(sigma2) * rng.standard_normal((trials, n))
        W = np.array([_menu_vector(kind, n, Lambda, rng) for _ in range(trials)])
        Z = W + V
        Y = X + Z
        typical = np.abs(np.einsum("tn,tn->t", X, X) / n - 1) <= eps
        q = competitor_prob(np.linalg.norm(Y, axis=1), np.einsum("tn,tn->t", Z, Z), n, eps)
        # P(at least one of N-1 independent competitors)
        hit = -np.expm1((N - 1) * np.log1p(-np.minimum(q, 1 - 1e-300)))
        vals = np.where(typical, hit, 0.0)
        p2[kind] = float(vals.mean())
        se[kind] = float(vals.std(ddof=1) / math.sqrt(trials))
    return PackingEstimate(n, R, p2, se)


def rate_bound(Lambda: float, sigma2: float) -> float:
    return capacity_fn(1.0 / (Lambda + sigma2))
