import json
import math

import numpy as np
import pytest
from scipy import stats

from gicjam.avcsim import (Codebooks, ConfigError, Decoder, JammerStrategy, SimConfig,
                           StrategyError, book_size, build_codebooks, decode, encode, jam,
                           jam_with_info, run_trials, wilson_interval)
from gicjam.params import ChannelConfig
from gicjam.ratesplit import SplitRates
from gicjam.regions import AlphaPair

# J1 = S1 = 1, no cross links: receiver 1 cannot tell a counterfeit from the real codeword
SYMM = ChannelConfig(h11=1, h12=0, h21=0, h22=1, g1=1, g2=1, P1=1, P2=1, Lambda=1, sigma2=1)
CROSS = ChannelConfig(h11=2, h12=math.sqrt(3), h21=math.sqrt(3), h22=2, g1=1, g2=1,
                      P1=1, P2=1, Lambda=1, sigma2=1)


def sim(cfg=SYMM, n=64, rates=(0, 0.05, 0, 0), alpha=(1, 1), **kw):
    return SimConfig(cfg, n, SplitRates(*rates), AlphaPair(*alpha), **kw)


# --- codebooks and encoder ------------------------------------------------------

def test_book_size():
    assert book_size(100, 0) == 1
    assert book_size(10, 0.5) == 32
    assert book_size(256, 0.02) == 34
    with pytest.raises(ConfigError):
        book_size(512, 0.05)


def test_config_validation():
    with pytest.raises(ConfigError):
        sim(gamma=0)
    with pytest.raises(ConfigError):
        sim(epsilon=0)
    with pytest.raises(ConfigError):
        sim(trials=0)
    with pytest.raises(ConfigError):
        sim(n=0)
    with pytest.raises(ConfigError):
        sim(n=64, rates=(0.3, 0.3, 0.3, 0))  # 2^19 * 2^19 * 2^19 triples


def test_zero_rate_books_have_one_codeword():
    cb = build_codebooks(sim(rates=(0, 0, 0, 0)))
    for user in (1, 2):
        assert cb.num_messages(user) == (1, 1)


def test_codebooks_deterministic():
    a, b = build_codebooks(sim(seed=9)), build_codebooks(sim(seed=9))
    for x, y in zip(a.common + a.private, b.common + b.private):
        np.testing.assert_array_equal(x, y)
    c = build_codebooks(sim(seed=10))
    assert not np.array_equal(a.private[0], c.private[0])


def test_private_book_variance():
    sc = sim(n=256, rates=(0, 0.02, 0, 0), alpha=(0.6, 1))
    cb = build_codebooks(sc)
    target = (1 - sc.gamma) * 0.6 * 1.0
    assert np.var(cb.private[0]) == pytest.approx(target, rel=0.05)
    # per-codeword powers within 3 sqrt(2/n) of the target for 99% of codewords
    powers = np.mean(cb.private[0] ** 2, axis=-1).ravel()
    assert np.mean(np.abs(powers - target) <= 3 * math.sqrt(2 / 256) * target) >= 0.99


def test_encode_superposition_and_fallback():
    common = (np.array([[1.0, 0.0]]), np.zeros((1, 2)))
    private = (np.array([[[0.0, 1.0], [3.0, 0.0]]]), np.zeros((1, 1, 2)))
    cb = Codebooks(common, private, (1, 1), (1, 1))
    np.testing.assert_array_equal(encode(cb, 1, 0, 0, P=1.5), [1.0, 1.0])
    # ||(4, 0)||^2 = 16 > n P = 3
    np.testing.assert_array_equal(encode(cb, 1, 0, 1, P=1.5), [0.0, 0.0])
    # equality also falls back: the rule needs power strictly below P
    np.testing.assert_array_equal(encode(cb, 1, 0, 0, P=1.0), [0.0, 0.0])


def test_fallback_rate_matches_chi_square_tail():
    n, gamma = 512, 0.1
    # all power private, so the codewords are independent
    sc = sim(n=n, rates=(0, 14 / n, 0, 0), alpha=(1, 1), gamma=gamma)
    cb = build_codebooks(sc)
    x = cb.private[0][0]
    rate = np.mean(np.einsum("mn,mn->m", x, x) >= n * 1.0)
    oracle = stats.chi2.sf(n / (1 - gamma), n)
    se = math.sqrt(oracle * (1 - oracle) / len(x))
    assert abs(rate - oracle) < 4 * se


# --- jammers -----------------------------------------------------------------

def test_silent_jammer():
    cb = build_codebooks(sim())
    cfg = ChannelConfig(g1=1, Lambda=0)
    w = jam(JammerStrategy.gaussian(), cb, cfg, 1, np.random.default_rng(0))
    assert not w.any()


def test_gaussian_jammer_power():
    sc = sim(n=512, rates=(0, 0, 0, 0))
    cb = build_codebooks(sc)
    rng = np.random.default_rng(3)
    ws = [jam(JammerStrategy.gaussian(), cb, SYMM, 1, rng) for _ in range(2000)]
    assert max(w @ w for w in ws) <= 512 * 1.0
    p = np.array([w @ w / 512 for w in ws])
    # before projection ||w||^2 / Lambda is chi-square with n degrees of freedom
    oracle = stats.chi2.sf(0.9 * 512, 512)
    assert np.mean(p >= 0.9) == pytest.approx(oracle, abs=4 * math.sqrt(oracle * (1 - oracle) / 2000))


def test_symmetrize_sends_a_legitimate_codeword():
    sc = sim(n=64, rates=(0, 0.1, 0, 0))
    cb = build_codebooks(sc)
    rng = np.random.default_rng(1)
    for _ in range(50):
        w, (mc, mp) = jam_with_info(JammerStrategy.symmetrize(1), cb, SYMM, 1, rng)
        np.testing.assert_array_equal(w, encode(cb, 1, mc, mp, 1.0))
        assert w @ w <= 64


def test_symmetrize_rescales_into_budget():
    cfg = ChannelConfig(h11=2, g1=1, P1=1, Lambda=1)
    cb = build_codebooks(sim(cfg=cfg, n=64, rates=(0, 0.1, 0, 0)))
    w = jam(JammerStrategy.symmetrize(1), cb, cfg, 1, np.random.default_rng(2))
    assert w @ w <= 64 * 1.0


def test_strategy_errors():
    cb = build_codebooks(sim())
    rng = np.random.default_rng(0)
    with pytest.raises(StrategyError):
        jam(JammerStrategy.symmetrize(1), cb, ChannelConfig(g1=0, Lambda=1), 1, rng)
    with pytest.raises(StrategyError):
        jam(JammerStrategy.gaussian(2.0), cb, SYMM, 1, rng)
    with pytest.raises(StrategyError):
        jam(JammerStrategy.fixed(np.full(64, 1.1)), cb, SYMM, 1, rng)
    with pytest.raises(StrategyError):
        jam(JammerStrategy.fixed(np.ones(3)), cb, SYMM, 1, rng)
    with pytest.raises(StrategyError):
        JammerStrategy("loud")


def test_strategy_roundtrip():
    for s in (JammerStrategy.silent(), JammerStrategy.symmetrize(2), JammerStrategy.fixed([1, 2])):
        assert JammerStrategy.from_dict(s.to_dict()) == s
    assert JammerStrategy.silent().label() == "silent"


# --- decoder -----------------------------------------------------------------

def test_noiseless_recovery_exhaustive():
    cfg = ChannelConfig(h11=1, h12=0.6, h21=0.4, h22=1, P1=1, P2=1, sigma2=1)
    sc = sim(cfg=cfg, n=64, rates=(0.05, 0.05, 0.05, 0.05), alpha=(0.5, 0.5), epsilon=0.9)
    cb = build_codebooks(sc)
    M1c, M1p = cb.num_messages(1)
    M2c, M2p = cb.num_messages(2)
    for m1c in range(M1c):
        for m1p in range(M1p):
            for m2c in range(M2c):
                x1 = cb.codeword(1, m1c, m1p)
                y = cfg.h11 * x1 + cfg.h12 * cb.common[1][m2c]
                assert decode(cb, y, cfg, 0.9, rx=1) == (m1c, m1p, m2c)


def test_tie_breaks_to_smaller_index():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(64)
    common = (np.zeros((1, 64)), np.zeros((1, 64)))
    private = (np.stack([x, x, -x])[None], np.zeros((1, 1, 64)))
    cb = Codebooks(common, private, (1.0, 1.0), (1.0, 1.0))
    cfg = ChannelConfig()
    # zero-power common codewords fail the power check unless eps is huge
    assert decode(cb, x, cfg, epsilon=2.0) == (0, 0, 0)


def test_decode_failure_when_nothing_typical():
    cb = build_codebooks(sim())
    assert decode(cb, np.full(64, 100.0), SYMM, epsilon=0.01) is None


def test_decoder_batch_matches_single():
    sc = sim(cfg=CROSS, rates=(0.05, 0.05, 0.05, 0.05), alpha=(0.5, 0.5))
    cb = build_codebooks(sc)
    dec = Decoder(cb, CROSS, 1, sc.epsilon)
    Y = np.random.default_rng(5).standard_normal((7, 64)) * 2
    best, _ = dec.decode_batch(Y)
    for k in range(7):
        d = dec.decode(Y[k])
        assert (d is None and best[k] < 0) or dec.flat_index(*d) == best[k]


# --- trials -----------------------------------------------------------------

def test_wilson():
    assert wilson_interval(0, 100)[0] == 0.0
    lo, hi = wilson_interval(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-4) and hi == pytest.approx(0.5962, abs=1e-4)
    assert wilson_interval(0, 0) == (0.0, 1.0)


def test_zero_rates_never_err():
    res = run_trials(sim(rates=(0, 0, 0, 0), gamma=0.3, trials=200),
                     JammerStrategy.gaussian(), JammerStrategy.gaussian())
    assert res.errors_1 == res.errors_2 == 0


def test_seed_determinism_and_batch_invariance():
    sc = sim(cfg=CROSS, rates=(0.05, 0.05, 0.05, 0.05), alpha=(0.5, 0.5), trials=60, seed=4)
    s = JammerStrategy.gaussian()
    a = run_trials(sc, s, s)
    b = run_trials(sc, s, s, batch=7)
    assert [o.to_json() for o in a.outcomes] == [o.to_json() for o in b.outcomes]


def test_error_events_iff_error():
    sc = sim(cfg=CROSS, rates=(0.08, 0.08, 0.08, 0.08), alpha=(0.5, 0.5), trials=300)
    res = run_trials(sc, JammerStrategy.gaussian(), JammerStrategy.symmetrize(2))
    assert res.errors_1 > 0
    for o in res.outcomes:
        assert bool(o.events_1) == o.error_1
        assert bool(o.events_2) == o.error_2
        rec = json.loads(o.to_json())
        assert set(rec) >= {"trial", "sent", "decoded_1", "decoded_2",
                            "error_event_1", "error_event_2"}


def test_symmetrize_counterfeit_wins_half_the_time():
    sc = sim(n=256, rates=(0, 0.03, 0, 0), trials=10_000)
    res = run_trials(sc, JammerStrategy.symmetrize(1), JammerStrategy.silent())
    hits = np.mean([o.decoded_1 is not None and o.decoded_1[:2] == o.counterfeit_1
                    for o in res.outcomes])
    assert hits == pytest.approx(0.5, abs=0.05)


def test_scaling_invariance():
    # gains x2, powers /4, noise fixed: every ratio and every float is unchanged
    c = 2.0
    scaled = ChannelConfig(h11=CROSS.h11 * c, h12=CROSS.h12 * c, h21=CROSS.h21 * c,
                           h22=CROSS.h22 * c, g1=c, g2=c, P1=1 / c ** 2, P2=1 / c ** 2,
                           Lambda=1 / c ** 2, sigma2=1)
    kw = dict(rates=(0.05, 0.05, 0.05, 0.05), alpha=(0.5, 0.5), trials=200, seed=2)
    strat = (JammerStrategy.gaussian(), JammerStrategy.symmetrize(1))
    a = run_trials(sim(cfg=CROSS, **kw), *strat)
    b = run_trials(sim(cfg=scaled, **kw), *strat)
    assert [o.to_json() for o in a.outcomes] == [o.to_json() for o in b.outcomes]


def test_more_noise_never_helps():
    kw = dict(n=64, rates=(0, 0.1, 0, 0), trials=10_000, seed=1)
    quiet = ChannelConfig(h11=1, h22=1, P1=4, P2=4, sigma2=1)
    loud = ChannelConfig(h11=1, h22=1, P1=4, P2=4, sigma2=2)
    s = JammerStrategy.silent()
    a = run_trials(sim(cfg=quiet, **kw), s, s, keep_outcomes=False)
    b = run_trials(sim(cfg=loud, **kw), s, s, keep_outcomes=False)
    slack = math.sqrt(a.err1 * (1 - a.err1) / kw["trials"])
    assert b.err1 >= a.err1 - slack


def test_desk_scale_achievability():
    # tiny rates at n = 512 on the S=4, I=3, J=1 channel with Gaussian jamming
    sc = sim(cfg=CROSS, n=512, rates=(0.01, 0.01, 0.01, 0.01), alpha=(0.095, 0.095),
             trials=1000)
    res = run_trials(sc, JammerStrategy.gaussian(), JammerStrategy.gaussian(),
                     keep_outcomes=False)
    assert res.err1 < 0.1 and res.err2 < 0.1


def test_desk_scale_converse():
    # above the outer symmetric bound the error stays large even at tiny n
    R = 1.3 * 0.7545
    sc = sim(cfg=CROSS, n=16, rates=(0, R, 0, R), alpha=(1, 1), trials=500)
    res = run_trials(sc, JammerStrategy.gaussian(), JammerStrategy.gaussian(),
                     keep_outcomes=False)
    assert res.err1 > 0.3 and res.err2 > 0.3
