"""Command-line front end: analyze, channel, simulate, constants, sweep."""

from __future__ import annotations

import argparse
import json
import math
import sys

from .channel import ChannelSpec, integrate_channel
from .constants import constants_table, evaluate_constants, growth_scale_inequality_holds
from .diophantine import compute_gamma_sqrt2, find_q_vector
from .harness import (
    ExperimentConfig,
    channel_summary,
    emit_report,
    load_sweep_configs,
    run_experiment,
    run_sweep,
    write_channel_csv,
    write_timeseries_csv,
)
from .resonance import (
    EnumerationFilters,
    MonomialClass,
    enumerate_monomials,
    min_divisor,
    nls_hamiltonian_filters,
)
from .spectral import ModeSet, frequencies_nls, frequencies_wave


def _monomial_json(m):
    if m.divisor_exact[0] == "sqrt2":
        omega = {"n": m.divisor_exact[1], "m": m.divisor_exact[2]}
    else:
        omega = {"l": list(m.divisor_exact[1]), "k": m.divisor_exact[2]}
    return {
        "alpha": [list(x) for x in m.alpha],
        "beta": [list(x) for x in m.beta],
        "degree": m.degree,
        "momentum": m.momentum_pi,
        "omega": omega,
        "omega_value": m.divisor_omega,
        "resonant": m.resonant,
        "coefficient": None if math.isnan(m.coefficient) else m.coefficient,
    }


def cmd_analyze(args) -> int:
    if args.equation == "wave":
        freq = frequencies_wave(args.p, j_max=args.jmax, gamma_search_bound=args.gamma_bound)
        filters = EnumerationFilters(resonant=True if args.resonant_only else None)
        certificate = compute_gamma_sqrt2(args.gamma_bound)
        cert_json = {"gamma": certificate.gamma, "tau": certificate.tau,
                     "search_bound": certificate.search_bound,
                     "witness": list(certificate.witness), "minimum": certificate.minimum}
        degree = args.degree if args.degree is not None else args.p + 1
    else:
        q, certificate = find_q_vector(args.gamma, args.tau, trials=args.q_trials,
                                       seed=args.seed, best_of=args.q_best_of)
        tangential = (1, -1, 2, 4 + args.N)
        j_max = args.jmax if args.jmax is not None else 4 * max(tangential)
        freq = frequencies_nls(ModeSet(j_max, tangential), q, gamma=args.gamma, tau=args.tau)
        filters = nls_hamiltonian_filters(args.N, resonant=True if args.resonant_only else None)
        cert_json = {"gamma": certificate.gamma, "tau": certificate.tau, "q": list(q),
                     "witness": [list(certificate.witness[0]), certificate.witness[1]],
                     "minimum": certificate.minimum}
        degree = args.degree if args.degree is not None else 4

    mclass = MonomialClass(degree, args.normal_count, args.selector)
    modes = freq.mode_set()
    monomials = enumerate_monomials(mclass, modes, freq, filters)
    try:
        divisor, witness = min_divisor(mclass, modes, freq, filters)
        min_div = {"value": divisor, "witness": _monomial_json(witness)}
    except ValueError:
        min_div = None
    doc = {
        "class": {"degree": mclass.degree, "normal_count": mclass.normal_count,
                  "selector": mclass.selector},
        "monomials": [_monomial_json(m) for m in monomials],
        "min_divisor": min_div,
        "certificate": cert_json,
    }
    _write(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_channel(args) -> int:
    if args.equation == "wave":
        spec = ChannelSpec("wave_plus", c=args.c, epsilon=args.eps, p=args.p)
    else:
        spec = ChannelSpec("nls", c=args.c, epsilon=args.eps)
    orbit = integrate_channel(spec)
    if args.out_csv:
        write_channel_csv(orbit, args.out_csv)
    summary = channel_summary(orbit)
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    _write(args.out_json, text)
    return 0


def cmd_simulate(args) -> int:
    config = ExperimentConfig(
        equation=args.equation,
        regime=args.regime,
        p=args.p,
        N=args.N,
        s=args.s,
        mu=args.mu,
        c=args.c,
        epsilon=args.eps,
        j_max=args.jmax,
        dt=args.dt,
        t_extend=args.t_extend,
        sample_stride=args.sample_stride,
        seed=args.seed,
        gamma_bound=args.gamma_bound,
        gamma=args.gamma,
        tau=args.tau,
        apply_gamma_correction=args.apply_gamma_correction,
    )
    result = run_experiment(config)
    if args.out and result.monitors is not None:
        write_timeseries_csv(result.monitors, config.equation, args.out)
    fmt = "text" if args.text else "json"
    text = emit_report(result.report, fmt, args.report)
    if args.report is None:
        sys.stdout.write(text)
    return 0


def cmd_constants(args) -> int:
    gamma = args.gamma if args.gamma is not None else compute_gamma_sqrt2(10_000).gamma
    consts = evaluate_constants(args.p, gamma, c_minus=args.c_minus)
    if args.json:
        from .harness import _constants_summary

        doc = _constants_summary(consts)
        doc["growth_scale_inequality"] = growth_scale_inequality_holds(args.p)
        _write(args.out, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        _write(args.out, constants_table(consts) + "\n")
    return 0


def cmd_sweep(args) -> int:
    configs = load_sweep_configs(args.config)
    run_sweep(configs, args.out_dir)
    return 0


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modedrift",
                                     description="resonance channels in truncated PDEs at desk scale")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="enumerate a monomial class as JSON")
    pa.add_argument("--equation", choices=("wave", "nls"), required=True)
    pa.add_argument("--p", type=int, default=2)
    pa.add_argument("--N", type=int, default=8)
    pa.add_argument("--degree", type=int, default=None)
    pa.add_argument("--normal-count", dest="normal_count", type=int, default=0)
    pa.add_argument("--selector", choices=("exactly_k", "at_most_k", "at_least_k"),
                    default="exactly_k")
    pa.add_argument("--resonant-only", action="store_true")
    pa.add_argument("--jmax", type=int, default=None)
    pa.add_argument("--gamma-bound", dest="gamma_bound", type=int, default=10_000)
    pa.add_argument("--gamma", type=float, default=1e-2)
    pa.add_argument("--tau", type=float, default=2.0)
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--q-trials", dest="q_trials", type=int, default=400)
    pa.add_argument("--q-best-of", dest="q_best_of", type=int, default=40)
    pa.add_argument("--out", default=None)
    pa.set_defaults(func=cmd_analyze)

    pc = sub.add_parser("channel", help="integrate a diffusion channel (CSV + JSON)")
    pc.add_argument("--equation", choices=("wave", "nls"), required=True)
    pc.add_argument("--p", type=int, default=2)
    pc.add_argument("--c", type=float, default=1.0)
    pc.add_argument("--eps", type=float, default=1e-3)
    pc.add_argument("--out-csv", dest="out_csv", default=None)
    pc.add_argument("--out-json", dest="out_json", default=None)
    pc.set_defaults(func=cmd_channel)

    ps = sub.add_parser("simulate", help="full desk-scale experiment")
    ps.add_argument("--equation", choices=("wave", "nls"), required=True)
    ps.add_argument("--regime", choices=("desk", "paper"), default="desk")
    ps.add_argument("--p", type=int, default=None)
    ps.add_argument("--N", type=int, default=None)
    ps.add_argument("--s", type=float, default=3.0)
    ps.add_argument("--mu", type=float, default=None)
    ps.add_argument("--c", type=float, default=1.0)
    ps.add_argument("--eps", type=float, default=None)
    ps.add_argument("--jmax", type=int, default=None)
    ps.add_argument("--dt", type=float, default=1e-3)
    ps.add_argument("--t-extend", dest="t_extend", type=float, default=1.0)
    ps.add_argument("--sample-stride", dest="sample_stride", type=int, default=10)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--gamma-bound", dest="gamma_bound", type=int, default=10_000)
    ps.add_argument("--gamma", type=float, default=1e-2)
    ps.add_argument("--tau", type=float, default=2.0)
    ps.add_argument("--apply-gamma-correction", action="store_true")
    ps.add_argument("--out", default=None, help="monitor CSV path")
    ps.add_argument("--report", default=None, help="report path (default stdout)")
    ps.add_argument("--text", action="store_true", help="human-readable report")
    ps.set_defaults(func=cmd_simulate)

    pk = sub.add_parser("constants", help="closed-form constant table")
    pk.add_argument("--p", type=int, required=True)
    pk.add_argument("--gamma", type=float, default=None)
    pk.add_argument("--c-minus", dest="c_minus", type=float, default=1.0)
    pk.add_argument("--json", action="store_true")
    pk.add_argument("--out", default=None)
    pk.set_defaults(func=cmd_constants)

    pw = sub.add_parser("sweep", help="run a TOML list of configs")
    pw.add_argument("config")
    pw.add_argument("--out-dir", dest="out_dir", default="sweep-out")
    pw.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
