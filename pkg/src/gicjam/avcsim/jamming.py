"""Jammer strategies."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..params import ChannelConfig
from .codebook import Codebooks, encode

KINDS = ("gaussian_noise", "symmetrize", "fixed_vector")


class StrategyError(ValueError):
    """Jammer strategy that cannot be realized on the given channel."""


@dataclass(frozen=True)
class JammerStrategy:
    """What jammer ``rx`` transmits into receiver ``rx``.

    ``power`` is the per-symbol power actually used (``None`` means the full
    budget ``Lambda``). ``symmetrize`` impersonates ``target_user`` by sending
    a scaled codeword of a uniformly drawn message.
    """

    kind: str = "gaussian_noise"
    power: float | None = None
    target_user: int = 1
    vector: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise StrategyError(f"unknown jammer kind {self.kind!r}")
        if self.power is not None and self.power < 0:
            raise StrategyError("jammer power must be nonnegative")
        if self.target_user not in (1, 2):
            raise StrategyError("target_user must be 1 or 2")
        if self.kind == "fixed_vector" and self.vector is None:
            raise StrategyError("fixed_vector needs a vector")

    @classmethod
    def silent(cls) -> "JammerStrategy":
        return cls("gaussian_noise", power=0.0)

    @classmethod
    def gaussian(cls, power: float | None = None) -> "JammerStrategy":
        return cls("gaussian_noise", power=power)

    @classmethod
    def symmetrize(cls, target_user: int = 1) -> "JammerStrategy":
        return cls("symmetrize", target_user=target_user)

    @classmethod
    def fixed(cls, w) -> "JammerStrategy":
        return cls("fixed_vector", vector=tuple(float(v) for v in w))

    def label(self) -> str:
        if self.kind == "symmetrize":
            return f"symmetrize{self.target_user}"
        if self.kind == "gaussian_noise" and self.power == 0:
            return "silent"
        return self.kind

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.power is not None:
            d["power"] = self.power
        if self.kind == "symmetrize":
            d["target_user"] = self.target_user
        if self.vector is not None:
            d["vector"] = list(self.vector)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "JammerStrategy":
        d = dict(d)
        if "vector" in d and d["vector"] is not None:
            d["vector"] = tuple(float(v) for v in d["vector"])
        return cls(**d)


def _budget(strategy: JammerStrategy, Lambda: float) -> float:
    if strategy.power is None:
        return Lambda
    if strategy.power > Lambda:
        raise StrategyError(f"strategy power {strategy.power} exceeds Lambda={Lambda}")
    return strategy.power


def _project(w: np.ndarray, n: int, power: float) -> np.ndarray:
    e = w @ w
    cap = n * power
    if e > cap:
        w = w * math.sqrt(cap / e)
        # guard the last ulp
        while w @ w > cap:
            w = np.nextafter(w, 0.0)
    return w


def jam_with_info(strategy: JammerStrategy, cb: Codebooks, cfg: ChannelConfig, rx: int,
                  rng: np.random.Generator):
    """Jamming vector for receiver ``rx`` and the counterfeit message, if any."""
    n = cb.n
    power = _budget(strategy, cfg.Lambda)
    if strategy.kind == "gaussian_noise":
        if power == 0:
            return np.zeros(n), None
        w = math.sqrt(power) * rng.standard_normal(n)
        return _project(w, n, power), None
    if strategy.kind == "symmetrize":
        g = cfg.jammer_gain(rx)
        if g == 0:
            raise StrategyError(f"cannot symmetrize through a zero jammer gain at receiver {rx}")
        t = strategy.target_user
        Mc, Mp = cb.num_messages(t)
        mc, mp = int(rng.integers(Mc)), int(rng.integers(Mp))
        x = encode(cb, t, mc, mp, cfg.power(t))
        w = (cfg.gain(rx, t) / g) * x
        return _project(w, n, power), (mc, mp)
    w = np.asarray(strategy.vector, dtype=float)
    if w.shape != (n,):
        raise StrategyError(f"fixed vector has length {w.size}, need {n}")
    if w @ w > n * power:
        raise StrategyError("fixed vector violates the jammer power constraint")
    return w.copy(), None


def jam(strategy: JammerStrategy, cb: Codebooks, cfg: ChannelConfig, rx: int,
        rng: np.random.Generator) -> np.ndarray:
    return jam_with_info(strategy, cb, cfg, rx, rng)[0]
