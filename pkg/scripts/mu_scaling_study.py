#!/usr/bin/env python3
"""How closely the full wave system tracks the rescaled channel model.

Runs the same channel at several rescalings mu and fits the decay power of
the maximum l1 distance; the power should be at least 1.
"""

import argparse

import numpy as np

from modedrift.harness import ExperimentConfig, run_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--mus", type=float, nargs="+", default=[5.0, 10.0, 20.0])
    parser.add_argument("--jmax", type=int, default=32)
    parser.add_argument("--dt", type=float, default=1e-3)
    args = parser.parse_args()

    dists = []
    for mu in args.mus:
        config = ExperimentConfig(equation="wave", p=2, s=3.0, mu=mu, c=1.0, epsilon=1e-3,
                                  j_max=args.jmax, dt=args.dt, sample_stride=20)
        report = run_experiment(config).report
        dists.append(report.max_model_distance)
        print(f"mu = {mu:6.1f}   max l1 distance = {report.max_model_distance:.6f}   "
              f"ratio = {report.ratio:.4f} (model {report.model_ratio_prediction:.4f})")
    power = -np.polyfit(np.log(args.mus), np.log(dists), 1)[0]
    print(f"fitted decay power in 1/mu: {power:.3f}")


if __name__ == "__main__":
    main()
