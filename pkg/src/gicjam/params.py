"""Channel parameters for the two-user Gaussian interference channel with jammers.

Physical parameters live in :class:`ChannelConfig`; everything downstream of
the simulator works on the power ratios in :class:`NormalizedParams`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np


def capacity_fn(x):
    """Gaussian capacity ``0.5 * log2(1 + x)`` in bits per channel use.

    Accepts a scalar or an array. Raises ``ValueError`` for negative or
    non-finite input.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"capacity_fn requires finite x >= 0, got {x!r}")
    out = 0.5 * np.log2(1.0 + arr)
    return float(out) if out.ndim == 0 else out


def _cap(x):
    # unchecked vectorized form for hot loops
    return 0.5 * np.log2(1.0 + x)


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ChannelConfig:
    """Gains and power limits of the 2-user / 2-jammer channel.

    ``h_ij`` is the gain from transmitter ``j`` to receiver ``i`` and ``g_i``
    the gain from jammer ``i`` to receiver ``i``.
    """

    h11: float = 1.0
    h12: float = 0.0
    h21: float = 0.0
    h22: float = 1.0
    g1: float = 0.0
    g2: float = 0.0
    P1: float = 1.0
    P2: float = 1.0
    Lambda: float = 0.0
    sigma2: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, float(getattr(self, f.name)))
            _require_finite(f.name, getattr(self, f.name))
        if self.P1 <= 0 or self.P2 <= 0:
            raise ValueError("transmit powers P1, P2 must be positive")
        if self.Lambda < 0:
            raise ValueError("jammer power Lambda must be nonnegative")
        if self.sigma2 <= 0:
            raise ValueError("noise variance sigma2 must be positive")

    def gain(self, rx: int, tx: int) -> float:
        return getattr(self, f"h{rx}{tx}")

    def power(self, user: int) -> float:
        return self.P1 if user == 1 else self.P2

    def jammer_gain(self, rx: int) -> float:
        return self.g1 if rx == 1 else self.g2

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown ChannelConfig fields: {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class NormalizedParams:
    """SNR / INR / JNR ratios ``(S1, S2, I1, I2, J1, J2)``.

    ``I1`` is the interference from transmitter 2 seen at receiver 1.
    The primed ratios divide by ``1 + J`` of the receiving side.
    """

    S1: float
    S2: float
    I1: float = 0.0
    I2: float = 0.0
    J1: float = 0.0
    J2: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            object.__setattr__(self, f.name, v)
            _require_finite(f.name, v)
            if v < 0:
                raise ValueError(f"{f.name} must be nonnegative, got {v}")

    @classmethod
    def symmetric(cls, S: float, I: float = 0.0, J: float = 0.0) -> "NormalizedParams":
        return cls(S, S, I, I, J, J)

    @property
    def S1p(self) -> float:
        return self.S1 / (1.0 + self.J1)

    @property
    def S2p(self) -> float:
        return self.S2 / (1.0 + self.J2)

    @property
    def I1p(self) -> float:
        return self.I1 / (1.0 + self.J1)

    @property
    def I2p(self) -> float:
        return self.I2 / (1.0 + self.J2)

    def primed(self) -> "NormalizedParams":
        """Jammer folded into the noise: ``(S', I')`` with ``J = 0``."""
        return NormalizedParams(self.S1p, self.S2p, self.I1p, self.I2p, 0.0, 0.0)

    def S(self, i: int) -> float:
        return self.S1 if i == 1 else self.S2

    def I(self, i: int) -> float:
        return self.I1 if i == 1 else self.I2

    def J(self, i: int) -> float:
        return self.J1 if i == 1 else self.J2

    def jammer_dominates(self) -> bool:
        """True when some receiver has ``S <= J``; the capacity region is then empty."""
        return self.S1 <= self.J1 or self.S2 <= self.J2

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizedParams":
        if set(d) <= {"S", "I", "J"} and "S" in d:
            return cls.symmetric(d["S"], d.get("I", 0.0), d.get("J", 0.0))
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown NormalizedParams fields: {sorted(unknown)}")
        return cls(**d)


def normalize(cfg: ChannelConfig) -> NormalizedParams:
    s2 = cfg.sigma2
    return NormalizedParams(
        S1=cfg.h11 ** 2 * cfg.P1 / s2,
        S2=cfg.h22 ** 2 * cfg.P2 / s2,
        I1=cfg.h12 ** 2 * cfg.P2 / s2,
        I2=cfg.h21 ** 2 * cfg.P1 / s2,
        J1=cfg.g1 ** 2 * cfg.Lambda / s2,
        J2=cfg.g2 ** 2 * cfg.Lambda / s2,
    )


@dataclass(frozen=True)
class CrossMatrix:
    """Gains ``g[i][k]`` from each of ``G`` jammers to receiver ``i``."""

    rows: tuple
    Lambda: float
    sigma2: float = 1.0

    def __post_init__(self):
        rows = tuple(tuple(float(g) for g in row) for row in self.rows)
        if len(rows) != 2:
            raise ValueError("cross matrix must have exactly two rows")
        if len(rows[0]) == 0 or len(rows[0]) != len(rows[1]):
            raise ValueError("cross matrix rows must be nonempty and of equal length")
        for row in rows:
            for g in row:
                _require_finite("jammer gain", g)
        _require_finite("Lambda", float(self.Lambda))
        _require_finite("sigma2", float(self.sigma2))
        if self.Lambda < 0 or self.sigma2 <= 0:
            raise ValueError("need Lambda >= 0 and sigma2 > 0")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "Lambda", float(self.Lambda))
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def G(self) -> int:
        return len(self.rows[0])

    def to_dict(self) -> dict:
        return {"rows": [list(r) for r in self.rows], "Lambda": self.Lambda, "sigma2": self.sigma2}

    @classmethod
    def from_dict(cls, d: dict) -> "CrossMatrix":
        if "rows" not in d or "Lambda" not in d:
            raise ValueError("cross matrix record needs 'rows' and 'Lambda'")
        return cls(rows=d["rows"], Lambda=d["Lambda"], sigma2=d.get("sigma2", 1.0))


def equivalent_gains(m: CrossMatrix) -> tuple[float, float]:
    """Gains ``|g_i| = sum_k |g_ik|`` of the equivalent two-jammer channel."""
    return tuple(math.fsum(abs(g) for g in row) for row in m.rows)


def reduce_jammers(m: CrossMatrix) -> tuple[float, float]:
    """Jammer-to-noise ratios ``(J1, J2)`` of the equivalent two-jammer model.

    Uses the magnitude sum of each row, so jammers whose received signals
    could be aligned (opposite-sign gains, opposite-sign jamming vectors)
    add coherently.
    """
    g1, g2 = equivalent_gains(m)
    return (g1 * g1 * m.Lambda / m.sigma2, g2 * g2 * m.Lambda / m.sigma2)


def aligned_jamming(rows: Sequence[float], w: np.ndarray) -> list[np.ndarray]:
    """Per-jammer vectors that make a single receiver's jamming add coherently.

    Jammer ``k`` sends ``sign(g_k) * w`` so the received sum is
    ``(sum_k |g_k|) * w``. Each vector has the same norm as ``w``.
    """
    return [np.copysign(1.0, g) * w for g in rows]


def reduced_params(cfg: ChannelConfig, m: CrossMatrix) -> NormalizedParams:
    """Normalized ratios for ``cfg`` with its jammers replaced by ``m``."""
    if m.sigma2 != cfg.sigma2:
        raise ValueError("cross matrix and channel must share sigma2")
    p = normalize(cfg)
    J1, J2 = reduce_jammers(m)
    return NormalizedParams(p.S1, p.S2, p.I1, p.I2, J1, J2)
