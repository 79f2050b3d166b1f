#!/usr/bin/env python3
"""Desk-scale wave experiment: channel traversal, full evolution, figures.

Writes run.csv, report.json and (if driftfigs is installed) the four figure
kinds into --out-dir.
"""

import argparse
import pathlib

from modedrift.harness import ExperimentConfig, emit_report, run_experiment, write_timeseries_csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--p", type=int, default=2)
    parser.add_argument("--s", type=float, default=3.0)
    parser.add_argument("--mu", type=float, default=10.0)
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--eps", type=float, default=1e-3)
    parser.add_argument("--jmax", type=int, default=32)
    parser.add_argument("--dt", type=float, default=1e-3)
    parser.add_argument("--gamma-correction", action="store_true")
    parser.add_argument("--out-dir", default="out/wave")
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = ExperimentConfig(equation="wave", p=args.p, s=args.s, mu=args.mu, c=args.c,
                              epsilon=args.eps, j_max=args.jmax, dt=args.dt,
                              apply_gamma_correction=args.gamma_correction)
    result = run_experiment(config)
    write_timeseries_csv(result.monitors, "wave", out / "run.csv")
    emit_report(result.report, "json", out / "report.json")
    print(emit_report(result.report, "text"))

    try:
        from driftfigs import FigureRequest, render
    except ImportError:
        print("driftfigs not installed; skipping figures")
        return
    for kind in ("actions", "norms", "channel_plane", "distance"):
        render(FigureRequest(str(out / "run.csv"), str(out / "report.json"),
                             kind, str(out / f"{kind}.png")))
    print(f"figures written to {out}")


if __name__ == "__main__":
    main()
