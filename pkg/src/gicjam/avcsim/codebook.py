"""Simulation configuration, superposition codebooks and the encoder."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..params import ChannelConfig
from ..ratesplit import SplitRates
from ..regions import AlphaPair

# desk-scale caps
MAX_BOOK_BITS = 24
MAX_TRIPLES = 2 ** 24
MAX_CODEBOOK_FLOATS = 2 ** 26

# seed-sequence stream tags
STREAM_CODEBOOK = 0
STREAM_TRIAL = 1


class ConfigError(ValueError):
    """Simulation configuration outside the supported range."""


def book_size(n: int, rate: float) -> int:
    """Number of messages ``floor(2**(n*rate))`` (at least one)."""
    bits = n * rate
    if bits > MAX_BOOK_BITS + 1e-9:
        raise ConfigError(f"n*R = {bits:.1f} bits exceeds the desk-scale cap of "
                          f"{MAX_BOOK_BITS} bits per codebook")
    return max(1, int(math.floor(2.0 ** bits + 1e-9)))


def default_epsilon(n: int) -> float:
    # normalized correlations fluctuate as 1/sqrt(n)
    return 5.0 / math.sqrt(n)


@dataclass(frozen=True)
class SimConfig:
    cfg: ChannelConfig
    n: int
    rates: SplitRates
    alpha: AlphaPair
    gamma: float = 0.1
    epsilon: float | None = None
    trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("blocklength n must be positive")
        if not 0 < self.gamma < 1:
            raise ConfigError("gamma must lie in (0, 1)")
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", default_epsilon(self.n))
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")
        if self.trials < 1:
            raise ConfigError("trials must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        self.sizes()  # validates memory bounds

    def sizes(self) -> dict:
        r = self.rates
        s = {
            "M1c": book_size(self.n, r.R1c), "M1p": book_size(self.n, r.R1p),
            "M2c": book_size(self.n, r.R2c), "M2p": book_size(self.n, r.R2p),
        }
        for i, j in ((1, 2), (2, 1)):
            triples = s[f"M{i}c"] * s[f"M{i}p"] * s[f"M{j}c"]
            if triples > MAX_TRIPLES:
                raise ConfigError(f"receiver {i} would search {triples} candidates "
                                  f"(cap {MAX_TRIPLES})")
        floats = self.n * (s["M1c"] * (1 + s["M1p"]) + s["M2c"] * (1 + s["M2p"]))
        if floats > MAX_CODEBOOK_FLOATS:
            raise ConfigError(f"codebooks need {floats} floats (cap {MAX_CODEBOOK_FLOATS})")
        return s

    def variances(self, user: int) -> tuple[float, float]:
        """``(common, private)`` codeword variances of ``user``."""
        P = self.cfg.power(user)
        a = self.alpha.alpha(user)
        return (1 - self.gamma) * (1 - a) * P, (1 - self.gamma) * a * P


@dataclass(frozen=True)
class Codebooks:
    """``common[i-1]`` has shape ``(M_ic, n)``; ``private[i-1]`` has ``(M_ic, M_ip, n)``."""

    common: tuple
    private: tuple
    var_common: tuple
    var_private: tuple

    @property
    def n(self) -> int:
        return self.common[0].shape[1]

    def codeword(self, user: int, mc: int, mp: int) -> np.ndarray:
        return self.common[user - 1][mc] + self.private[user - 1][mc, mp]

    def num_messages(self, user: int) -> tuple[int, int]:
        c = self.private[user - 1]
        return c.shape[0], c.shape[1]


def build_codebooks(sc: SimConfig) -> Codebooks:
    """I.i.d. Gaussian superposition codebooks, a deterministic function of the seed."""
    s = sc.sizes()
    rng = np.random.default_rng(np.random.SeedSequence([sc.seed, STREAM_CODEBOOK]))
    common, private, vc, vp = [], [], [], []
    for user in (1, 2):
        var_c, var_p = sc.variances(user)
        Mc, Mp = s[f"M{user}c"], s[f"M{user}p"]
        common.append(math.sqrt(var_c) * rng.standard_normal((Mc, sc.n)))
        private.append(math.sqrt(var_p) * rng.standard_normal((Mc, Mp, sc.n)))
        vc.append(var_c)
        vp.append(var_p)
    return Codebooks(tuple(common), tuple(private), tuple(vc), tuple(vp))


def encode(cb: Codebooks, user: int, mc: int, mp: int, P: float) -> np.ndarray:
    """Superposed codeword, or zeros if its power is not below ``P``."""
    x = cb.codeword(user, mc, mp)
    if x @ x < cb.n * P:
        return x
    return np.zeros_like(x)
