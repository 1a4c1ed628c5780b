"""Command-line front end.

Every command reads a JSON config (``--config``), writes to ``--out`` or
stdout, and is a pure function of its inputs and seed. Outputs carry a
versioned schema string: JSON documents have a ``schema`` key, CSV files start
with a ``# schema=...`` line ahead of the header row, and trial logs open with
a header record.

Exit codes: 0 ok, 1 configuration error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field

from . import avcsim
from .dof import dof_closed_form, dof_numeric
from .params import ChannelConfig, CrossMatrix, NormalizedParams, equivalent_gains, normalize, \
    reduce_jammers, reduced_params
from .ratesplit import SplitRates
from .regions import AlphaPair, halfbit_alpha, hk_region, outer_region, symcap_curves, \
    tilde_inner_region

SCHEMA_REGION = "gicjam.region/1"
SCHEMA_SYMCAP = "gicjam.symcap/1"
SCHEMA_DOF = "gicjam.dof/1"
SCHEMA_SIM = "gicjam.simsummary/1"
SCHEMA_TRIALS = "gicjam.trials/1"
SCHEMA_REDUCE = "gicjam.reduce/1"

SEED_ENV = "GICJAM_SEED"
EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2

SWEEP_VARS = {"symcap": ("J", "I", "S"), "dof": ("beta", "delta")}


class CliConfigError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    step: float
    fixed: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("sweep step must be positive")
        if self.stop < self.start:
            raise ValueError("sweep stop must be >= start")

    def points(self) -> list[float]:
        # integer stepping avoids accumulated drift; rounding keeps labels clean
        k = int(round((self.stop - self.start) / self.step + 1e-9 * (self.stop - self.start + 1)))
        while self.start + k * self.step > self.stop + 1e-9 * max(1.0, abs(self.stop)):
            k -= 1
        return [round(self.start + i * self.step, 12) for i in range(k + 1)]

    @classmethod
    def from_config(cls, cfg: dict, allowed, step: float | None = None) -> "SweepSpec":
        var = cfg.get("variable")
        if var not in allowed:
            raise ValueError(f"variable must be one of {list(allowed)}, got {var!r}")
        rng = cfg.get("range")
        if not isinstance(rng, (list, tuple)) or len(rng) != 3:
            raise ValueError("range must be [start, stop, step]")
        start, stop, st = (float(v) for v in rng)
        fixed = dict(cfg.get("fixed", {}))
        if var in fixed:
            raise ValueError(f"{var} is both swept and fixed")
        return cls(var, start, stop, st if step is None else float(step), fixed)


# --- config helpers -------------------------------------------------------------

def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            d = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CliConfigError(f"cannot read config {path}: {e}") from e
    if not isinstance(d, dict):
        raise CliConfigError("config must be a JSON object")
    return d


def _params_from(d: dict) -> NormalizedParams:
    if "channel" in d:
        return normalize(ChannelConfig.from_dict(d["channel"]))
    keys = {"S", "I", "J", "S1", "S2", "I1", "I2", "J1", "J2"}
    sub = {k: v for k, v in d.items() if k in keys}
    if not sub:
        raise ValueError("config needs 'channel' or normalized ratios (S, I, J or S1..J2)")
    return NormalizedParams.from_dict(sub)


def _alpha_from(d: dict, p: NormalizedParams) -> AlphaPair:
    a = d.get("alpha")
    if a is None:
        return halfbit_alpha(p)
    if isinstance(a, (int, float)):
        return AlphaPair(float(a), float(a))
    return AlphaPair(float(a[0]), float(a[1]))


def _fmt(x) -> str:
    return repr(float(x))


def _csv_text(schema: str, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={schema}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, str) else _fmt(v) for v in r])
    return buf.getvalue()


def _json_text(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


# --- commands: each has a load phase (config errors) and a run phase -------------

def load_region(d: dict, args):
    p = _params_from(d)
    step = float(args.step if args.step is not None else d.get("grid_step", 0.1))
    if not 0 < step <= 0.1:
        raise ValueError("tilde grid step must lie in (0, 0.1]")
    return p, _alpha_from(d, p), step


def run_region(loaded, args) -> str:
    p, a, step = loaded
    outer = outer_region(p)
    tilde = tilde_inner_region(p, step)
    hk = {"alpha": [a.alpha1, a.alpha2], **hk_region(p, a).to_dict()}
    return _json_text({
        "schema": SCHEMA_REGION,
        "params": p.to_dict(),
        "empty": outer.empty,
        "outer": outer.to_dict(),
        "hk": hk,
        "tilde": {"grid_step": step, **tilde.to_dict()},
    })


def load_symcap(d: dict, args):
    spec = SweepSpec.from_config(d, SWEEP_VARS["symcap"], args.step)
    fixed = {k: float(v) for k, v in spec.fixed.items()}
    missing = {"S", "I", "J"} - {spec.variable} - set(fixed)
    if missing:
        raise ValueError(f"fixed parameters missing: {sorted(missing)}")
    if any(v < 0 for v in fixed.values()):
        raise ValueError("S, I, J must be nonnegative")
    alpha_step = float(d.get("alpha_step", 1e-3))
    return spec, fixed, alpha_step


def run_symcap(loaded, args) -> str:
    spec, fixed, alpha_step = loaded
    rows = []
    for x in spec.points():
        v = dict(fixed, **{spec.variable: x})
        c = symcap_curves(v["S"], v["I"], v["J"], alpha_step)
        rows.append((x, c.outer, c.tilde_inner, c.hk_inner, c.hk_suboptimal_alpha))
    rows.sort(key=lambda r: r[0])
    return _csv_text(SCHEMA_SYMCAP,
                     ("x", "outer", "tilde_inner", "hk_inner", "hk_suboptimal_alpha"), rows)


def load_dof(d: dict, args):
    spec = SweepSpec.from_config(d, SWEEP_VARS["dof"], args.step)
    other = "delta" if spec.variable == "beta" else "beta"
    if other not in spec.fixed:
        raise ValueError(f"fixed parameter missing: {other}")
    S_max = float(d.get("S_max", 1e6))
    if S_max <= 1:
        raise ValueError("S_max must exceed 1")
    return spec, float(spec.fixed[other]), S_max, float(d.get("alpha_step", 1e-3))


def run_dof(loaded, args) -> str:
    spec, other, S_max, alpha_step = loaded
    rows = []
    for x in spec.points():
        beta, delta = (x, other) if spec.variable == "beta" else (other, x)
        (_, lo, up), = dof_numeric(beta, delta, (S_max,), alpha_step)
        rows.append((beta, delta, dof_closed_form(beta, delta), lo, up))
    rows.sort(key=lambda r: r[0] if spec.variable == "beta" else r[1])
    return _csv_text(SCHEMA_DOF,
                     ("beta", "delta", "closed_form", "lower_at_Smax", "upper_at_Smax"), rows)


def _seed(args, d: dict) -> int:
    if args.seed is not None:
        return int(args.seed)
    if os.environ.get(SEED_ENV):
        return int(os.environ[SEED_ENV])
    return int(d.get("seed", 0))


def load_simulate(d: dict, args):
    cfg = ChannelConfig.from_dict(d["channel"])
    r = d.get("rates", {})
    rates = SplitRates(*(float(r.get(k, 0.0)) for k in ("R1c", "R1p", "R2c", "R2p")))
    a = d.get("alpha", [1.0, 1.0])
    sc = avcsim.SimConfig(
        cfg=cfg, n=int(d["n"]), rates=rates, alpha=AlphaPair(float(a[0]), float(a[1])),
        gamma=float(d.get("gamma", 0.1)), epsilon=d.get("epsilon"),
        trials=int(args.trials if args.trials is not None else d.get("trials", 1000)),
        seed=_seed(args, d),
    )
    strategies = []
    for s in d.get("strategies", [{"jammer1": {"kind": "gaussian_noise"},
                                   "jammer2": {"kind": "gaussian_noise"}}]):
        j1 = avcsim.JammerStrategy.from_dict(s.get("jammer1", {"kind": "gaussian_noise"}))
        j2 = avcsim.JammerStrategy.from_dict(s.get("jammer2", {"kind": "gaussian_noise"}))
        strategies.append((s.get("name", f"{j1.label()}/{j2.label()}"), j1, j2))
    return sc, strategies


def run_simulate(loaded, args) -> str:
    sc, strategies = loaded
    cb = avcsim.build_codebooks(sc)
    rows = []
    log = None
    if args.log:
        log = open(args.log, "w", encoding="utf-8", newline="\n")
        log.write(json.dumps({"schema": SCHEMA_TRIALS, "n": sc.n, "seed": sc.seed,
                              "trials": sc.trials}, sort_keys=True) + "\n")
    try:
        for name, j1, j2 in strategies:
            res = avcsim.run_trials(sc, j1, j2, cb=cb, keep_outcomes=log is not None)
            lo, hi = res.ci("joint")
            rows.append((name, str(sc.n), sc.rates.R1, sc.rates.R2, res.err1, res.err2, lo, hi))
            if log is not None:
                for o in res.outcomes:
                    rec = json.loads(o.to_json())
                    rec["strategy"] = name
                    log.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if log is not None:
            log.close()
    return _csv_text(SCHEMA_SIM, ("strategy", "n", "R1", "R2", "err1", "err2", "ci_low", "ci_high"),
                     rows)


def load_reduce(d: dict, args):
    m = CrossMatrix.from_dict(d.get("matrix", d))
    cfg = ChannelConfig.from_dict(d["channel"]) if "channel" in d else None
    return m, cfg


def run_reduce(loaded, args) -> str:
    m, cfg = loaded
    J1, J2 = reduce_jammers(m)
    g1, g2 = equivalent_gains(m)
    out = {"schema": SCHEMA_REDUCE, "J1": J1, "J2": J2, "g1": g1, "g2": g2, "G": m.G}
    if cfg is not None:
        out["params"] = reduced_params(cfg, m).to_dict()
    return _json_text(out)


COMMANDS = {
    "region": (load_region, run_region, "inner and outer rate regions with vertices"),
    "symcap": (load_symcap, run_symcap, "symmetric-capacity bounds along a sweep"),
    "dof": (load_dof, run_dof, "degrees-of-freedom sweep"),
    "simulate": (load_simulate, run_simulate, "Monte-Carlo error rates under jamming"),
    "reduce": (load_reduce, run_reduce, "collapse many jammers into two"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gicjam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, _, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=None,
                       help=f"RNG seed (overrides ${SEED_ENV} and the config)")
        p.add_argument("--step", type=float, default=None, help="sweep or alpha-grid step")
        p.add_argument("--trials", type=int, default=None, help="Monte-Carlo trials")
        if name == "simulate":
            p.add_argument("--log", default=None, help="JSON-lines trial log path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    load, run, _ = COMMANDS[args.command]
    try:
        loaded = load(_load_json(args.config), args)
    except (CliConfigError, ValueError, KeyError, TypeError, IndexError) as e:
        print(f"gicjam {args.command}: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        _emit(run(loaded, args), args.out)
    except Exception as e:  # noqa: BLE001 - surfaced as an exit code
        print(f"gicjam {args.command}: runtime error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
