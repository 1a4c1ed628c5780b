"""A jammer as strong as the signal replays counterfeit codewords.

For a few rates, prints the receiver-1 error rate and how often the decoder
picks the jammer's counterfeit instead of the real message. Compare with a
Gaussian jammer of the same power.
"""
import argparse

from gicjam import avcsim
from gicjam.params import ChannelConfig
from gicjam.ratesplit import SplitRates
from gicjam.regions import AlphaPair

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cfg = ChannelConfig(h11=1, h12=0, h21=0, h22=1, g1=1, g2=1, P1=1, P2=1, Lambda=1, sigma2=1)
    print(f"{'R1':>6} {'jammer':>14} {'err1':>7} {'95% CI':>17} {'counterfeit':>12}")
    for R1 in (0.01, 0.03, 0.05):
        sc = avcsim.SimConfig(cfg, args.n, SplitRates(0, R1, 0, 0), AlphaPair(1, 1),
                              trials=args.trials, seed=args.seed)
        cb = avcsim.build_codebooks(sc)
        for strat in (avcsim.JammerStrategy.symmetrize(1), avcsim.JammerStrategy.gaussian()):
            res = avcsim.run_trials(sc, strat, avcsim.JammerStrategy.silent(), cb=cb)
            fooled = sum(o.decoded_1 is not None and o.decoded_1[:2] == o.counterfeit_1
                         for o in res.outcomes) / res.trials
            lo, hi = res.ci("1")
            cf = f"{fooled:.3f}" if strat.kind == "symmetrize" else "-"
            print(f"{R1:6.2f} {strat.label():>14} {res.err1:7.3f} [{lo:.3f}, {hi:.3f}] {cf:>12}")
