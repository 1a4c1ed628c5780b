"""Monte-Carlo driver: per-trial RNG streams, decoding, error statistics."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .codebook import STREAM_TRIAL, Codebooks, SimConfig, build_codebooks, encode
from .decoder import EVENTS, Decoder
from .jamming import JammerStrategy, jam_with_info

Z95 = 1.959963984540054


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    if n == 0:
        return 0.0, 1.0
    p = k / n
    den = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


def trial_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, STREAM_TRIAL, t]))


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    sent: tuple  # (m1c, m1p, m2c, m2p)
    decoded_1: tuple | None  # (m1c, m1p, m2c)
    decoded_2: tuple | None  # (m2c, m2p, m1c)
    events_1: tuple = ()
    events_2: tuple = ()
    counterfeit_1: tuple | None = None
    counterfeit_2: tuple | None = None

    @property
    def error_1(self) -> bool:
        return self.decoded_1 is None or self.decoded_1[:2] != self.sent[:2]

    @property
    def error_2(self) -> bool:
        return self.decoded_2 is None or self.decoded_2[:2] != self.sent[2:]

    def to_json(self) -> str:
        d = {
            "trial": self.trial,
            "sent": list(self.sent),
            "decoded_1": None if self.decoded_1 is None else list(self.decoded_1),
            "decoded_2": None if self.decoded_2 is None else list(self.decoded_2),
            "error_event_1": list(self.events_1),
            "error_event_2": list(self.events_2),
        }
        if self.counterfeit_1 is not None:
            d["counterfeit_1"] = list(self.counterfeit_1)
        if self.counterfeit_2 is not None:
            d["counterfeit_2"] = list(self.counterfeit_2)
        return json.dumps(d, sort_keys=True)


@dataclass
class SimResult:
    trials: int
    errors_1: int = 0
    errors_2: int = 0
    errors_joint: int = 0
    events_1: Counter = field(default_factory=Counter)
    events_2: Counter = field(default_factory=Counter)
    outcomes: list = field(default_factory=list)

    @property
    def err1(self) -> float:
        return self.errors_1 / self.trials

    @property
    def err2(self) -> float:
        return self.errors_2 / self.trials

    @property
    def err_joint(self) -> float:
        return self.errors_joint / self.trials

    def ci(self, which: str = "joint") -> tuple[float, float]:
        k = {"1": self.errors_1, "2": self.errors_2, "joint": self.errors_joint}[which]
        return wilson_interval(k, self.trials)


def _simulate_channel(sc: SimConfig, cb: Codebooks, strat1, strat2, t: int, sizes):
    cfg = sc.cfg
    n = sc.n
    rng = trial_rng(sc.seed, t)
    sent = tuple(int(rng.integers(sizes[k])) for k in ("M1c", "M1p", "M2c", "M2p"))
    x1 = encode(cb, 1, sent[0], sent[1], cfg.P1)
    x2 = encode(cb, 2, sent[2], sent[3], cfg.P2)
    w1, cf1 = jam_with_info(strat1, cb, cfg, 1, rng)
    w2, cf2 = jam_with_info(strat2, cb, cfg, 2, rng)
    if x1 @ x1 > n * cfg.P1 or x2 @ x2 > n * cfg.P2:
        raise RuntimeError(f"trial {t}: transmitter power constraint violated")
    if w1 @ w1 > n * cfg.Lambda or w2 @ w2 > n * cfg.Lambda:
        raise RuntimeError(f"trial {t}: jammer power constraint violated")
    s = math.sqrt(cfg.sigma2)
    v1 = s * rng.standard_normal(n)
    v2 = s * rng.standard_normal(n)
    y1 = cfg.h11 * x1 + cfg.h12 * x2 + cfg.g1 * w1 + v1
    y2 = cfg.h21 * x1 + cfg.h22 * x2 + cfg.g2 * w2 + v2
    return sent, y1, y2, cf1, cf2


def _events(flags) -> tuple:
    return tuple(e for e, f in zip(EVENTS, flags) if f)


def run_trials(sc: SimConfig, strat1: JammerStrategy, strat2: JammerStrategy,
               cb: Codebooks | None = None, keep_outcomes: bool = True,
               batch: int | None = None) -> SimResult:
    """Simulate ``sc.trials`` independent blocks.

    Trial ``t`` draws everything from its own stream derived from
    ``(seed, t)``, so results do not depend on ``batch``.
    """
    if cb is None:
        cb = build_codebooks(sc)
    sizes = sc.sizes()
    dec1 = Decoder(cb, sc.cfg, 1, sc.epsilon)
    dec2 = Decoder(cb, sc.cfg, 2, sc.epsilon)
    if batch is None:
        batch = max(1, min(4096, 2 ** 21 // max(dec1.size, dec2.size)))
    res = SimResult(trials=sc.trials)
    for start in range(0, sc.trials, batch):
        ts = range(start, min(start + batch, sc.trials))
        rows = [_simulate_channel(sc, cb, strat1, strat2, t, sizes) for t in ts]
        sent = np.array([r[0] for r in rows])
        Y1 = np.array([r[1] for r in rows])
        Y2 = np.array([r[2] for r in rows])
        best1, ev1 = dec1.decode_batch(Y1, sent[:, [0, 1, 2]])
        best2, ev2 = dec2.decode_batch(Y2, sent[:, [2, 3, 0]])
        for k, t in enumerate(ts):
            d1 = None if best1[k] < 0 else tuple(int(v) for v in dec1.unflatten(best1[k]))
            d2 = None if best2[k] < 0 else tuple(int(v) for v in dec2.unflatten(best2[k]))
            s = tuple(int(v) for v in sent[k])
            e1 = d1 is None or d1[:2] != s[:2]
            e2 = d2 is None or d2[:2] != s[2:]
            o = TrialOutcome(t, s, d1, d2,
                             _events(ev1[k]) if e1 else (),
                             _events(ev2[k]) if e2 else (),
                             rows[k][3], rows[k][4])
            res.errors_1 += e1
            res.errors_2 += e2
            res.errors_joint += e1 or e2
            res.events_1.update(o.events_1)
            res.events_2.update(o.events_2)
            if keep_outcomes:
                res.outcomes.append(o)
    return res
