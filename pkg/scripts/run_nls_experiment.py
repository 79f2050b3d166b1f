#!/usr/bin/env python3
"""Desk-scale cubic-equation experiment with a verified frequency vector."""

import argparse
import pathlib

from modedrift.harness import ExperimentConfig, emit_report, run_experiment, write_timeseries_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--N", type=int, default=8)
    parser.add_argument("--s", type=float, default=1.0)
    parser.add_argument("--mu", type=float, default=10.0)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--eps", type=float, default=None)
    parser.add_argument("--jmax", type=int, default=None)
    parser.add_argument("--dt", type=float, default=1e-3)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out-dir", default="out/nls")
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = ExperimentConfig(equation="nls", N=args.N, s=args.s, mu=args.mu, c=args.c,
                              epsilon=args.eps, j_max=args.jmax, dt=args.dt, seed=args.seed,
                              sample_stride=50)
    result = run_experiment(config)
    write_timeseries_csv(result.monitors, "nls", out / "run.csv")
    emit_report(result.report, "json", out / "report.json")
    print(emit_report(result.report, "text"))


if __name__ == "__main__":
    main()
