"""Outer and inner bounds on the capacity region, as polygons in the (R1, R2) plane.

A :class:`RateRegion` is an intersection of halfspaces ``a1*R1 + a2*R2 <= b``
together with ``R1, R2 >= 0``. Inner-bound regions are open (strict
inequalities); we store them closed and report boundary points separately.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .params import NormalizedParams, _cap, capacity_fn

log = logging.getLogger(__name__)

TOL = 1e-9

HK_SHAPES = {(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)}


class Membership(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class Regime(str, enum.Enum):
    WEAK = "weak"
    STRONG = "strong"
    MIXED = "mixed"


@dataclass(frozen=True)
class Halfspace:
    """``a1*R1 + a2*R2 <= b`` with integer coefficients."""

    a1: int
    a2: int
    b: float

    def __post_init__(self):
        if (self.a1, self.a2) == (0, 0):
            raise ValueError("halfspace needs a nonzero coefficient")

    def slack(self, R1, R2):
        return self.b - self.a1 * R1 - self.a2 * R2

    def to_dict(self) -> dict:
        return {"a1": self.a1, "a2": self.a2, "b": self.b}


@dataclass(frozen=True)
class AlphaPair:
    """Private-message power fractions ``(alpha1, alpha2)``."""

    alpha1: float
    alpha2: float

    def __post_init__(self):
        for a in (self.alpha1, self.alpha2):
            if not (0.0 <= a <= 1.0):
                raise ValueError(f"alpha must lie in [0, 1], got {a}")

    def __iter__(self):
        return iter((self.alpha1, self.alpha2))

    def alpha(self, i: int) -> float:
        return self.alpha1 if i == 1 else self.alpha2


@dataclass(frozen=True)
class RateRegion:
    halfspaces: tuple = ()
    empty: bool = False
    open: bool = False

    @classmethod
    def empty_region(cls) -> "RateRegion":
        return cls((), empty=True)

    def _matrix(self):
        A = np.array([[h.a1, h.a2] for h in self.halfspaces], dtype=float).reshape(-1, 2)
        b = np.array([h.b for h in self.halfspaces], dtype=float)
        # rate nonnegativity
        A = np.vstack([A, [[-1.0, 0.0], [0.0, -1.0]]])
        b = np.concatenate([b, [0.0, 0.0]])
        return A, b

    def membership(self, R1: float, R2: float) -> Membership:
        if self.empty or R1 < 0 or R2 < 0:
            return Membership.OUTSIDE
        A, b = self._matrix()
        slack = b - A @ np.array([R1, R2], dtype=float)
        if np.any(slack < -TOL):
            return Membership.OUTSIDE
        if np.any(slack <= TOL):
            return Membership.BOUNDARY
        return Membership.INSIDE

    def classify_grid(self, R1, R2, tol: float = TOL) -> np.ndarray:
        """Vectorized membership: 2 inside, 1 boundary, 0 outside."""
        R1 = np.asarray(R1, dtype=float)
        R2 = np.asarray(R2, dtype=float)
        if self.empty:
            return np.zeros(np.broadcast(R1, R2).shape, dtype=int)
        A, b = self._matrix()
        slack = b[:, None] - A[:, :1] * R1.ravel()[None] - A[:, 1:] * R2.ravel()[None]
        smin = slack.min(axis=0)
        out = np.where(smin < -tol, 0, np.where(smin <= tol, 1, 2))
        return out.reshape(np.broadcast(R1, R2).shape)

    def min_slack(self, R1: float, R2: float) -> float:
        A, b = self._matrix()
        return float(np.min(b - A @ np.array([R1, R2], dtype=float)))

    def vertices(self) -> list[tuple[float, float]]:
        """Polygon vertices in counter-clockwise order (pairwise line intersections)."""
        if self.empty:
            return []
        A, b = self._matrix()
        pts = []
        for i, j in combinations(range(len(b)), 2):
            M = A[[i, j]]
            det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
            if abs(det) < 1e-12:
                continue
            x = np.linalg.solve(M, b[[i, j]])
            if np.all(b - A @ x >= -TOL):
                pts.append((float(x[0]) + 0.0, float(x[1]) + 0.0))
        uniq = []
        for p in pts:
            if not any(abs(p[0] - q[0]) <= 1e-9 and abs(p[1] - q[1]) <= 1e-9 for q in uniq):
                uniq.append(p)
        if len(uniq) > 2:
            cx = sum(p[0] for p in uniq) / len(uniq)
            cy = sum(p[1] for p in uniq) / len(uniq)
            uniq.sort(key=lambda p: math.atan2(p[1] - cy, p[0] - cx))
        return uniq

    def symmetric_rate(self) -> float:
        """Largest ``R`` with ``(R, R)`` in the region."""
        if self.empty:
            return 0.0
        return max(0.0, min(h.b / (h.a1 + h.a2) for h in self.halfspaces if h.a1 + h.a2 > 0))

    def to_dict(self) -> dict:
        return {
            "halfspaces": [h.to_dict() for h in self.halfspaces],
            "vertices": [list(v) for v in self.vertices()],
            "empty": self.empty,
            "open": self.open,
        }


@dataclass(frozen=True)
class UnionRegion:
    members: tuple = field(default_factory=tuple)

    @property
    def empty(self) -> bool:
        return len(self.members) == 0

    def membership(self, R1: float, R2: float) -> Membership:
        best = Membership.OUTSIDE
        for _, region in self.members:
            m = region.membership(R1, R2)
            if m is Membership.INSIDE:
                return m
            if m is Membership.BOUNDARY:
                best = m
        return best

    def classify_grid(self, R1, R2) -> np.ndarray:
        out = np.zeros(np.broadcast(np.asarray(R1), np.asarray(R2)).shape, dtype=int)
        for _, region in self.members:
            np.maximum(out, region.classify_grid(R1, R2), out=out)
        return out

    def symmetric_rate(self) -> float:
        return max((r.symmetric_rate() for _, r in self.members), default=0.0)

    def to_dict(self) -> dict:
        return {
            "empty": self.empty,
            "members": [
                {"alpha": [a.alpha1, a.alpha2], **r.to_dict()} for a, r in self.members
            ],
        }


def membership(region, R1: float, R2: float) -> Membership:
    return region.membership(R1, R2)


def outer_region(p: NormalizedParams) -> RateRegion:
    """Outer bound: the jammer-free outer polygon at the primed ratios, or empty."""
    if p.jammer_dominates():
        return RateRegion.empty_region()
    S = {1: p.S1p, 2: p.S2p}
    I = {1: p.I1p, 2: p.I2p}
    C = capacity_fn
    hs = [Halfspace(1, 0, C(S[1])), Halfspace(0, 1, C(S[2]))]
    for i, j in ((1, 2), (2, 1)):
        hs.append(Halfspace(1, 1, C(S[i] / (1 + I[j])) + C(I[j] + S[j])))
    hs.append(Halfspace(1, 1,
                        C((S[1] + I[1] + I[1] * I[2]) / (1 + I[2]))
                        + C((S[2] + I[2] + I[1] * I[2]) / (1 + I[1]))))
    for i, j in ((1, 2), (2, 1)):
        a = (2, 1) if i == 1 else (1, 2)
        hs.append(Halfspace(*a, C(S[i] / (1 + I[j])) + C(S[i] + I[i])
                            + C((S[j] + I[j] + I[i] * I[j]) / (1 + I[i]))))
    return RateRegion(tuple(hs))


def hk_terms(p: NormalizedParams, a: AlphaPair) -> dict:
    """The Han-Kobayashi mutual-information terms at the primed ratios.

    For receiver ``i`` (with ``j`` the other user):
    ``a_i`` private only, ``b_i`` own common+private, ``c_i`` own private plus
    the other user's common, ``d_i`` all three.
    """
    S = {1: p.S1p, 2: p.S2p}
    I = {1: p.I1p, 2: p.I2p}
    al = {1: a.alpha1, 2: a.alpha2}
    t = {}
    for i, j in ((1, 2), (2, 1)):
        den = 1.0 + al[j] * I[i]
        t[f"a{i}"] = capacity_fn(al[i] * S[i] / den)
        t[f"b{i}"] = capacity_fn(S[i] / den)
        t[f"c{i}"] = capacity_fn((al[i] * S[i] + (1 - al[j]) * I[i]) / den)
        t[f"d{i}"] = capacity_fn((S[i] + (1 - al[j]) * I[i]) / den)
    return t


def hk_region(p: NormalizedParams, a: AlphaPair) -> RateRegion:
    """Fixed-alpha Han-Kobayashi region at the primed ratios (open polygon)."""
    t = hk_terms(p, a)
    hs = [
        Halfspace(1, 0, t["b1"]),
        Halfspace(0, 1, t["b2"]),
        Halfspace(1, 1, t["d1"] + t["a2"]),
        Halfspace(1, 1, t["d2"] + t["a1"]),
        Halfspace(1, 1, t["c1"] + t["c2"]),
        Halfspace(2, 1, t["d1"] + t["a1"] + t["c2"]),
        Halfspace(1, 2, t["d2"] + t["a2"] + t["c1"]),
    ]
    return RateRegion(tuple(hs), open=True)


def alpha_feasible(p: NormalizedParams, a: AlphaPair) -> bool:
    """Strict power condition ``alpha_i S_i + (1 - alpha_j) I_i > J_i`` for both receivers.

    A receiver without a jammer (``J_i = 0``) imposes no condition.
    """
    return ((p.J1 == 0 or a.alpha1 * p.S1 + (1 - a.alpha2) * p.I1 > p.J1)
            and (p.J2 == 0 or a.alpha2 * p.S2 + (1 - a.alpha1) * p.I2 > p.J2))


def alpha_grid(step: float) -> np.ndarray:
    m = round(1.0 / step)
    if m < 1 or abs(m * step - 1.0) > 1e-9:
        raise ValueError(f"grid step must divide 1, got {step}")
    return np.arange(m + 1) / m


def tilde_inner_region(p: NormalizedParams, grid_step: float = 0.01) -> UnionRegion:
    """Union of fixed-alpha HK regions over the feasible alpha grid."""
    if not 0 < grid_step <= 0.1:
        raise ValueError("grid_step must lie in (0, 0.1]")
    if p.jammer_dominates():
        return UnionRegion(())
    grid = alpha_grid(grid_step)
    members = []
    for a1 in grid:
        for a2 in grid:
            a = AlphaPair(float(a1), float(a2))
            if alpha_feasible(p, a):
                members.append((a, hk_region(p, a)))
    return UnionRegion(tuple(members))


# --- symmetric capacity -------------------------------------------------------

def outer_symmetric(S: float, I: float, J: float) -> float:
    """Largest symmetric rate in the outer bound (four competing terms)."""
    if S <= J:
        return 0.0
    Sp, Ip = S / (1 + J), I / (1 + J)
    pair = _cap(Sp / (1 + Ip))
    direct = _cap(Sp + Ip)
    summ = _cap((Sp + Ip + Ip * Ip) / (1 + Ip))
    return float(min(_cap(Sp), 0.5 * (pair + direct), summ, (pair + direct + summ) / 3))


def hk_symmetric_rate(S: float, I: float, J: float, alpha):
    """Symmetric HK rate at a common ``alpha`` (vectorized over ``alpha``)."""
    alpha = np.asarray(alpha, dtype=float)
    Sp, Ip = S / (1 + J), I / (1 + J)
    den = 1 + alpha * Ip
    b = _cap(Sp / den)
    d = _cap((Sp + (1 - alpha) * Ip) / den)
    a = _cap(alpha * Sp / den)
    c = _cap((alpha * Sp + (1 - alpha) * Ip) / den)
    return np.minimum.reduce([b, 0.5 * (d + a), c, (d + a + c) / 3])


def symmetric_alpha_feasible(S: float, I: float, J: float, alpha):
    alpha = np.asarray(alpha, dtype=float)
    return (alpha * S + (1 - alpha) * I > J) | (J == 0)


@dataclass(frozen=True)
class SymcapCurves:
    outer: float
    tilde_inner: float
    hk_inner: float
    hk_suboptimal_alpha: float
    alpha_tilde: float
    alpha_hk: float


def symcap_curves(S: float, I: float, J: float, grid_step: float = 1e-3,
                  alphas=None) -> SymcapCurves:
    """All four symmetric-capacity curves at one parameter point.

    ``alphas`` overrides the uniform search grid. Ties in the alpha search
    resolve toward the smaller alpha.
    """
    if S <= J:
        return SymcapCurves(0.0, 0.0, 0.0, 0.0, math.nan, math.nan)
    grid = alpha_grid(grid_step) if alphas is None else np.unique(np.asarray(alphas, float))
    vals = hk_symmetric_rate(S, I, J, grid)
    k_hk = int(np.argmax(vals))
    feas = symmetric_alpha_feasible(S, I, J, grid)
    if feas.any():
        masked = np.where(feas, vals, -np.inf)
        k_t = int(np.argmax(masked))
        tilde, alpha_t = float(vals[k_t]), float(grid[k_t])
    else:
        tilde, alpha_t = 0.0, math.nan
    Ip = I / (1 + J)
    sub = float(hk_symmetric_rate(S, I, J, 1.0 / (1.0 + Ip)))
    return SymcapCurves(outer_symmetric(S, I, J), tilde, float(vals[k_hk]), sub,
                        alpha_t, float(grid[k_hk]))


def symcap_bounds(S: float, I: float, J: float, grid_step: float = 1e-3,
                  alphas=None) -> tuple[float, float]:
    """``(lower, upper)`` bounds on the symmetric capacity ``C_sym(S, I, J)``."""
    c = symcap_curves(S, I, J, grid_step, alphas)
    return c.tilde_inner, c.outer


# --- regimes and certificates ------------------------------------------------

def _weak_lhs(p: NormalizedParams, i: int, j: int) -> float:
    Sp = p.S1p if i == 1 else p.S2p
    Ijp = p.I1p if j == 1 else p.I2p
    Iip = p.I1p if i == 1 else p.I2p
    if Sp == 0:
        return 0.0 if Ijp == 0 else math.inf
    return math.sqrt(Ijp / Sp) * (1 + Iip)


def is_weak(p: NormalizedParams, rho1: float, rho2: float) -> bool:
    return (_weak_lhs(p, 1, 2) <= rho1 * (1 - rho2)
            and _weak_lhs(p, 2, 1) <= rho2 * (1 - rho1))


def find_weak_rho(p: NormalizedParams, step: float = 0.01):
    """Grid search over ``[0, 1]^2`` for a certifying ``(rho1, rho2)``; ``None`` if none."""
    grid = alpha_grid(step)
    l12, l21 = _weak_lhs(p, 1, 2), _weak_lhs(p, 2, 1)
    r1, r2 = np.meshgrid(grid, grid, indexing="ij")
    ok = (l12 <= r1 * (1 - r2)) & (l21 <= r2 * (1 - r1))
    if not ok.any():
        return None
    k = np.flatnonzero(ok.ravel())[0]
    return float(r1.ravel()[k]), float(r2.ravel()[k])


def is_strong(p: NormalizedParams) -> bool:
    return p.I2p >= p.S1p and p.I1p >= p.S2p


def regime_classify(p: NormalizedParams, rho1: float | None = None,
                    rho2: float | None = None) -> Regime:
    """Weak / strong / mixed classification at the primed ratios.

    With ``rho1 = rho2 = None`` the weak test searches a 0.01 rho grid.
    """
    if is_strong(p):
        return Regime.STRONG
    if rho1 is None or rho2 is None:
        weak = find_weak_rho(p) is not None
    else:
        weak = is_weak(p, rho1, rho2)
    return Regime.WEAK if weak else Regime.MIXED


def halfbit_alpha(p: NormalizedParams) -> AlphaPair:
    """The private-power split ``alpha_i = 1/(1 + I'_j)`` of the half-bit argument."""
    return AlphaPair(1.0 / (1.0 + p.I2p), 1.0 / (1.0 + p.I1p))


def halfbit_certificate(p: NormalizedParams) -> bool:
    """True when the half-bit split satisfies the alpha power condition."""
    if p.jammer_dominates():
        return False
    a = halfbit_alpha(p)
    ok = alpha_feasible(p, a)
    if log.isEnabledFor(logging.DEBUG):
        printed = (p.J1 < p.S1 / (1 + p.I2p) + p.I1 ** 2 / (1 + p.I1p)
                   and p.J2 < p.S2 / (1 + p.I1p) + p.I2 ** 2 / (1 + p.I2p))
        log.debug("halfbit %s: direct=%s printed-form=%s", p, ok, printed)
    return ok
