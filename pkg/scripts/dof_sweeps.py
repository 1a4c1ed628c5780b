"""Symmetric degrees of freedom: closed form next to finite-SNR brackets."""
import argparse
import pathlib

from gicjam.cli import main

HERE = pathlib.Path(__file__).parent

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--step", type=float, default=None, help="override the sweep step")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in ("dof_vs_beta", "dof_vs_delta"):
        dest = out / f"{name}.csv"
        argv = ["dof", "--config", str(HERE / "configs" / f"{name}.json"), "--out", str(dest)]
        if args.step is not None:
            argv += ["--step", str(args.step)]
        rc = main(argv)
        if rc:
            raise SystemExit(rc)
        print(f"wrote {dest}")
