"""Monte-Carlo simulation of the rate-split code against jammers."""
from .codebook import (ConfigError, Codebooks, SimConfig, book_size, build_codebooks,
                       default_epsilon, encode)
from .decoder import EVENTS, Decoder, decode
from .jamming import JammerStrategy, StrategyError, jam, jam_with_info
from .packing import PackingEstimate, competitor_prob, packing_spotcheck, rate_bound
from .trials import SimResult, TrialOutcome, run_trials, wilson_interval

__all__ = [
    "ConfigError", "Codebooks", "SimConfig", "book_size", "build_codebooks",
    "default_epsilon", "encode", "EVENTS", "Decoder", "decode", "JammerStrategy",
    "StrategyError", "jam", "jam_with_info", "PackingEstimate", "competitor_prob",
    "packing_spotcheck", "rate_bound", "SimResult", "TrialOutcome", "run_trials",
    "wilson_interval",
]
