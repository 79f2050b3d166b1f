"""Experiment pipelines: parameter selection, end-to-end runs, reports.

A run wires the other layers together: build the frequency table, self-check
the resonant set against its closed form, traverse the diffusion channel,
lift and rescale onto the tangential modes, optionally undo the normal-form
change of coordinates on the initial state, evolve the full truncated system
to the rescaled traversal time, and report norms, drifts and distances.

Two regimes are kept strictly apart.  "desk" runs use a moderate rescaling
mu supplied by the user and record which of the closed-form thresholds they
violate; "paper" configs are evaluate-only because the thresholds put mu
beyond any floating-point range, so they emit constants instead of dynamics.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .channel import (
    ChannelOrbit,
    ChannelSpec,
    TangentialTrajectory,
    epsilon_slack,
    integrate_channel,
    lift_and_rescale,
)
from .constants import PaperConstants, evaluate_constants, f_gamma_log
from .diophantine import check_q_vector, compute_gamma_sqrt2, find_q_vector
from .evolve import (
    BlowUpError,
    EvolutionProblem,
    MonitorSeries,
    evolve,
)
from .resonance import (
    EnumerationFilters,
    MonomialClass,
    enumerate_monomials,
    hermitian_closure,
    generator_vector_field,
    nls_hamiltonian_filters,
    normal_form_generator,
    wave_resonant_set,
)
from .spectral import (
    Frame,
    ModeSet,
    SpectralState,
    frequencies_nls,
    frequencies_wave,
    sobolev_norm,
)

SQRT2 = math.sqrt(2.0)


class StageError(RuntimeError):
    """Pipeline failure carrying the stage tag it happened in."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class ExperimentConfig:
    """Run parameters; mirrors the TOML sweep schema field by field."""

    equation: str                     # "wave" | "nls"
    regime: str = "desk"              # "desk" | "paper"
    p: int | None = None
    N: int | None = None
    tangential: tuple[int, ...] | None = None
    q: tuple[float, float, float] | None = None
    s: float = 3.0
    mu: float | None = None
    c: float = 1.0
    epsilon: float | None = None
    j_max: int | None = None
    dt: float = 1e-3
    t_extend: float = 1.0             # 1.0 runs to T; 1.2 shows post-drift behavior
    sample_stride: int = 10
    seed: int = 0
    gamma_bound: int = 10_000
    gamma: float = 1e-2               # requested diophantine gamma (nls)
    tau: float = 2.0
    q_trials: int = 400
    q_best_of: int = 40
    apply_gamma_correction: bool = False
    delta: float | None = None
    growth_target: float | None = None

    def __post_init__(self):
        if self.equation not in ("wave", "nls"):
            raise ValueError(f"unknown equation {self.equation!r}")
        if self.regime not in ("desk", "paper"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.equation == "wave":
            if self.p is None or self.p < 2 or self.p % 2:
                raise ValueError("wave runs need an even p >= 2")
        else:
            if self.N is None or self.N < 1:
                raise ValueError("nls runs need N >= 1")
            if self.tangential is None:
                self.tangential = (1, -1, 2, 4 + self.N)
            self.tangential = tuple(self.tangential)
        if self.regime == "desk" and self.mu is None:
            raise ValueError("desk regime needs an explicit mu")
        if self.q is not None:
            self.q = tuple(self.q)

    def resolved_j_max(self) -> int:
        if self.j_max is not None:
            return self.j_max
        top = self.p if self.equation == "wave" else max(abs(k) for k in self.tangential)
        return 4 * top

    def resolved_epsilon(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        if self.equation == "wave":
            # cap of the initial high-mode action: eps0 p^{-2s}
            eps0 = self.c / (1.0 - self.p ** (1 - 2 * self.s))
            return eps0 * self.p ** (-2 * self.s)
        return self.c / (2 ** (2 * self.s) * self.N ** self.s - 1.0)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["tangential"] = list(self.tangential) if self.tangential else None
        out["q"] = list(self.q) if self.q else None
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        for key in ("tangential", "q"):
            if data.get(key) is not None:
                data[key] = tuple(data[key])
        return cls(**data)


@dataclass
class ExperimentReport:
    """Measured outcomes of one run (dynamics fields absent in paper regime)."""

    equation: str
    regime: str
    s: float
    norm0: float | None = None
    normT: float | None = None
    ratio: float | None = None
    model_ratio_prediction: float | None = None
    T0: float | None = None
    T0_bounds: tuple[float, float] | None = None
    T: float | None = None
    T_formula_bounds: tuple[float, float] | None = None
    T_within_formula_bounds: bool | None = None
    drifts: dict[str, float] = field(default_factory=dict)
    max_model_distance: float | None = None
    channel_initial_actions: dict[str, float] = field(default_factory=dict)
    channel_final_actions: dict[str, float] = field(default_factory=dict)
    final_actions: dict[str, float] = field(default_factory=dict)
    reference_final_actions: dict[str, float] = field(default_factory=dict)
    certificate: dict | None = None
    violations: list[str] = field(default_factory=list)
    constants: dict | None = None
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"equation       {self.equation} ({self.regime} regime)",
                 f"sobolev index  {self.s!r}"]
        if self.norm0 is not None:
            lines += [
                f"norm0          {self.norm0!r}",
                f"normT          {self.normT!r}",
                f"ratio          {self.ratio!r}",
                f"model ratio    {self.model_ratio_prediction!r}",
                f"T0             {self.T0!r}  bounds {self.T0_bounds!r}",
                f"T              {self.T!r}",
                f"T formula rng  {self.T_formula_bounds!r} within={self.T_within_formula_bounds}",
                f"max distance   {self.max_model_distance!r}",
            ]
            lines += [f"drift[{k}]   {v!r}" for k, v in sorted(self.drifts.items())]
        if self.violations:
            lines.append("regime violations:")
            lines += [f"  - {v}" for v in self.violations]
        if self.constants is not None:
            lines.append("constants (log10 where large):")
            lines += [f"  {k} = {v!r}" for k, v in sorted(self.constants.items())]
        return "\n".join(lines) + "\n"


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    report: ExperimentReport
    monitors: MonitorSeries | None
    trajectory: TangentialTrajectory | None
    orbit: ChannelOrbit | None


def _provenance(config: ExperimentConfig) -> dict:
    return {
        "config": config.to_dict(),
        "version": __version__,
        "numpy": np.__version__,
        "thread_count": int(os.environ.get("OMP_NUM_THREADS", "1") or 1),
    }


def _constants_summary(consts: PaperConstants) -> dict:
    ln10 = math.log(10.0)
    return {
        "a": consts.a,
        "b": consts.b,
        "log10_mu0": consts.log_mu0 / ln10 if math.isfinite(consts.log_mu0) else math.inf,
        "C0": consts.C0,
        "C1": consts.C1,
        "log10_C1_tilde": consts.log_C1_tilde / ln10,
        "sigma1": consts.sigma1,
        "sigma2": consts.sigma2,
        "log10_c_plus": consts.log_c_plus / ln10,
        "log10_c_minus": consts.log_c_minus / ln10,
        "xi_desk": consts.xi_desk,
        "regime_valid": consts.regime_valid,
    }


def _desk_violations(config: ExperimentConfig, consts: PaperConstants | None) -> list[str]:
    out = []
    if config.equation == "wave":
        log_mu = math.log(config.mu)
        if consts is not None and log_mu < consts.log_mu0:
            out.append(
                f"mu={config.mu} far below the rescaling threshold "
                f"(log10 mu0 = {consts.log_mu0 / math.log(10.0):.6g})")
        if config.p <= 8:
            out.append("p <= 8: the approximation-argument exponents are out of range")
        if config.c < 1.0:
            out.append("channel height below the c- >= 1 window")
    else:
        mu_faithful = config.N ** (0.75 * config.s)
        if config.mu < mu_faithful:
            out.append(f"mu={config.mu} below the scale-faithful N^(3s/4) = {mu_faithful:.6g}")
        if config.mu < config.gamma ** -2 * config.c ** 5:
            out.append("mu below the gamma^-2 c^5 approximation threshold")
        k123 = [abs(k) for k in config.tangential[:3]]
        if max(k123) > math.sqrt(config.N):
            out.append("tangential modes exceed the sqrt(N) cap")
    return out


def _wave_resonance_selfcheck(freq) -> None:
    found = enumerate_monomials(MonomialClass(freq.p + 1, 0), freq.mode_set(), freq,
                                EnumerationFilters(resonant=True))
    if sorted(m.key() for m in found) != wave_resonant_set(freq.p):
        raise RuntimeError("resonant set does not match its closed form")
    extra = enumerate_monomials(MonomialClass(freq.p + 1, 1), freq.mode_set(), freq,
                                EnumerationFilters(resonant=True))
    if extra:
        raise RuntimeError("unexpected resonances with one normal factor")


def _nls_resonance_selfcheck(freq) -> None:
    found = enumerate_monomials(MonomialClass(4, 0), freq.mode_set(), freq,
                                nls_hamiltonian_filters(freq.N, resonant=True))
    k1, k2, k3, k4 = freq.tangential
    expected = sorted([
        (tuple(sorted(((k1, 1), (k3, 1)))), tuple(sorted(((k2, 1), (k4, 1))))),
        (tuple(sorted(((k2, 1), (k4, 1)))), tuple(sorted(((k1, 1), (k3, 1))))),
    ])
    if sorted(m.key() for m in found) != expected:
        raise RuntimeError("resonant quartic pair does not match its closed form")


def _gamma_corrected(state: SpectralState, freq, direction: float) -> SpectralState:
    """Flow of the normal-form generator for time +-1 (fixed-step RK4).

    Uses the generator of the normalized interaction (the one the integrator
    evolves), so the correction is consistent with the flowed Hamiltonian.
    """
    terms = hermitian_closure(normal_form_generator(freq.p, freq, weighted=False))
    j_max = state.j_max
    n_sub = 32
    h = direction / n_sub
    z = state.amplitudes.copy()
    for _ in range(n_sub):
        k1 = generator_vector_field(terms, z, j_max)
        k2 = generator_vector_field(terms, z + 0.5 * h * k1, j_max)
        k3 = generator_vector_field(terms, z + 0.5 * h * k2, j_max)
        k4 = generator_vector_field(terms, z + h * k3, j_max)
        z = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return state.with_amplitudes(z)


def _stage(tag):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and not isinstance(exc, StageError):
                raise StageError(tag, exc) from exc
            return False

    return _Ctx()


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Run the full pipeline for a desk config; paper configs evaluate only."""
    if config.regime == "paper":
        return _paper_regime_result(config)

    j_max = config.resolved_j_max()
    eps = config.resolved_epsilon()

    if config.equation == "wave":
        with _stage("frequencies"):
            gamma = compute_gamma_sqrt2(config.gamma_bound).gamma
            freq = frequencies_wave(config.p, j_max=j_max, gamma=gamma)
            certificate = {"gamma": gamma, "tau": 1.0, "search_bound": config.gamma_bound}
        with _stage("resonance-selfcheck"):
            _wave_resonance_selfcheck(freq)
        with _stage("channel"):
            spec = ChannelSpec("wave_plus", c=config.c, epsilon=eps, p=config.p)
            orbit = integrate_channel(spec)
        with _stage("lift"):
            traj = lift_and_rescale(orbit, mu=config.mu)
        consts = evaluate_constants(config.p, gamma, c_minus=config.c)
    else:
        with _stage("frequencies"):
            modes = ModeSet(j_max, config.tangential)
            if config.q is not None:
                ok, minimum, witness = check_q_vector(config.q, config.gamma, config.tau)
                if not ok:
                    raise ValueError("supplied q vector fails the divisor bound")
                q = config.q
                certificate = {"gamma": config.gamma, "tau": config.tau,
                               "minimum": minimum, "witness": [list(witness[0]), witness[1]]}
            else:
                q, cert = find_q_vector(config.gamma, config.tau, trials=config.q_trials,
                                        seed=config.seed, best_of=config.q_best_of)
                certificate = {"gamma": cert.gamma, "tau": cert.tau, "minimum": cert.minimum,
                               "witness": [list(cert.witness[0]), cert.witness[1]]}
            freq = frequencies_nls(modes, q, gamma=config.gamma, tau=config.tau, N=config.N)
        with _stage("resonance-selfcheck"):
            _nls_resonance_selfcheck(freq)
        with _stage("channel"):
            spec = ChannelSpec("nls", c=config.c, epsilon=eps)
            orbit = integrate_channel(spec)
        with _stage("lift"):
            traj = lift_and_rescale(orbit, mu=config.mu, tangential=config.tangential)
        consts = None

    with _stage("initial-data"):
        state0 = traj.state_at(0.0, j_max)
        state0 = SpectralState(state0.amplitudes, j_max, Frame.LAB, 0.0)
        if config.apply_gamma_correction:
            if config.equation != "wave":
                raise ValueError("the generator-flow correction is wave-only")
            state0 = _gamma_corrected(state0, freq, direction=-1.0)

    with _stage("evolve"):
        problem = EvolutionProblem.for_wave(freq) if config.equation == "wave" \
            else EvolutionProblem.for_nls(freq)
        T = config.t_extend * traj.T_rescaled
        if config.t_extend > 1.0:
            traj.clamp_overrun = True  # distance measured against the held endpoint
        try:
            final, monitors = evolve(problem, state0, T, config.dt,
                                     sample_stride=config.sample_stride,
                                     sobolev_s=config.s, reference=traj)
        except BlowUpError as exc:
            exc.args = (f"{exc} (partial monitors attached)",)
            raise

    with _stage("report"):
        report = _build_report(config, freq, orbit, traj, state0, final, monitors,
                               certificate, consts)
    return ExperimentResult(config, report, monitors, traj, orbit)


def _paper_regime_result(config: ExperimentConfig) -> ExperimentResult:
    if config.equation == "wave":
        gamma = compute_gamma_sqrt2(config.gamma_bound).gamma
        consts = evaluate_constants(config.p, gamma, c_minus=config.c)
        violations = [
            "paper regime is evaluate-only: mu0 exceeds any floating-point range "
            f"(log10 mu0 = {consts.log_mu0 / math.log(10):.6g})"]
        constants = _constants_summary(consts)
    else:
        mu_faithful = config.N ** (0.75 * config.s)
        constants = {"mu_scale_faithful": mu_faithful,
                     "mu_threshold": config.gamma ** -2 * config.c ** 5}
        violations = ["paper regime is evaluate-only for the cubic equation as well"]
    report = ExperimentReport(equation=config.equation, regime="paper", s=config.s,
                              violations=violations, constants=constants,
                              provenance=_provenance(config))
    return ExperimentResult(config, report, None, None, None)


def model_ratio_prediction(traj: TangentialTrajectory, orbit: ChannelOrbit, s: float) -> float:
    """Norm-growth ratio predicted by the channel endpoints alone."""
    w = lambda j: max(1.0, abs(j)) ** (2.0 * s)
    num = sum(w(j) * series[-1] for j, series in traj.mode_actions.items())
    den = sum(w(j) * series[0] for j, series in traj.mode_actions.items())
    return math.sqrt(num / den)


def _build_report(config, freq, orbit, traj, state0, final, monitors,
                  certificate, consts) -> ExperimentReport:
    s = config.s
    norm0 = sobolev_norm(state0, s)
    normT = sobolev_norm(final, s)
    ratio = normT / norm0
    prediction = model_ratio_prediction(traj, orbit, s)

    # report only the quantities the equation actually conserves (the wave
    # nonlinearity preserves momentum, the cubic one preserves mass)
    drifts = {"hamiltonian": monitors.relative_drift("hamiltonian")}
    if config.equation == "wave":
        drifts["momentum"] = monitors.relative_drift("momentum")
        drifts["pairing"] = float(np.max(monitors.pairing_deviation))
    else:
        drifts["mass"] = monitors.relative_drift("mass")

    if config.equation == "wave":
        p = config.p
        T_lo = 2.0 ** (p - 1) / p * norm0 ** (1 - p)
        T_hi = 2.0 ** (p + 2) / p * norm0 ** (1 - p)
    else:
        T_lo = 0.0
        T_hi = 12.0 * config.N ** s * norm0 ** -2
    T = config.t_extend * traj.T_rescaled

    modes = sorted(traj.mode_actions)
    channel_initial = {str(j): float(traj.mode_actions[j][0]) for j in modes}
    channel_final = {str(j): float(traj.mode_actions[j][-1]) for j in modes}
    measured = {str(j): float(abs(final.amplitude(j)) ** 2) for j in modes}
    reference = {str(j): float(traj.mode_actions[j][-1] / config.mu ** 2) for j in modes}

    return ExperimentReport(
        equation=config.equation,
        regime=config.regime,
        s=s,
        norm0=norm0,
        normT=normT,
        ratio=ratio,
        model_ratio_prediction=prediction,
        T0=orbit.T0,
        T0_bounds=orbit.bounds,
        T=T,
        T_formula_bounds=(T_lo, T_hi),
        T_within_formula_bounds=bool(T_lo <= T <= T_hi),
        drifts=drifts,
        max_model_distance=float(np.max(monitors.model_distance)),
        channel_initial_actions=channel_initial,
        channel_final_actions=channel_final,
        final_actions=measured,
        reference_final_actions=reference,
        certificate=certificate,
        violations=_desk_violations(config, consts),
        constants=_constants_summary(consts) if consts is not None else None,
        provenance=_provenance(config),
    )


# ---------------------------------------------------------------------------
# parameter selection
# ---------------------------------------------------------------------------

@dataclass
class WaveSelection:
    config: ExperimentConfig | None
    feasible_growth: bool
    minimal_s: float
    epsilon: float
    f_gamma_log10: float | None
    conditions: dict[str, bool]


def select_parameters_wave(p: int, s: float, delta: float, C_target: float,
                           regime: str = "desk", mu: float | None = None,
                           c: float = 1.0, gamma: float | None = None) -> WaveSelection:
    """Choose epsilon and check the growth-feasibility inequalities.

    The growth condition p^{s-2} >= 2 sqrt(2) C needs s > 2; failing that the
    selection reports the minimal s instead of a config.
    """
    if s <= 2:
        raise ValueError("growth targeting needs s > 2")
    if gamma is None:
        gamma = compute_gamma_sqrt2(10_000).gamma
    minimal_s = 2.0 + math.log(2 * SQRT2 * C_target) / math.log(p)
    feasible = p ** (s - 2) >= 2 * SQRT2 * C_target
    eps0 = c / (1.0 - p ** (1 - 2 * s))
    eps = eps0 * p ** (-2 * s)
    f_log10 = None
    conditions = {"growth_pK": feasible}
    if p != 8:
        f_log10 = f_gamma_log(p, gamma) / math.log(10.0)
        conditions["smallness_pdelta"] = f_log10 <= math.log10(delta / 2.0)
        conditions["lower_bound_lowb"] = f_log10 >= math.log10(delta / (2 * SQRT2))
    if not feasible:
        raise ValueError(f"growth target infeasible at (p={p}, s={s}); need s >= {minimal_s:.4f}")
    config = None
    if regime == "desk":
        if mu is None:
            raise ValueError("desk regime needs an explicit mu")
        config = ExperimentConfig(equation="wave", regime="desk", p=p, s=s, mu=mu, c=c,
                                  epsilon=eps, delta=delta, growth_target=C_target)
    else:
        config = ExperimentConfig(equation="wave", regime="paper", p=p, s=s, mu=None, c=c,
                                  epsilon=eps, delta=delta, growth_target=C_target)
    return WaveSelection(config, feasible, minimal_s, eps, f_log10, conditions)


@dataclass
class NlsSelection:
    config: ExperimentConfig | None
    feasible: bool
    N_required: int | None
    minimal_s_for_guard: float
    mu_scale_faithful: float | None
    epsilon: float | None
    time_vs_growth: dict | None


NLS_N_GUARD = 10 ** 6


def select_parameters_nls(s: float, delta: float, K: float, c: float = 1.0,
                          gamma: float = 1e-2, tau: float = 2.0,
                          C0_desk: float = 1.0, mu: float | None = None,
                          fallback_N: int | None = None,
                          regime: str = "desk") -> NlsSelection:
    """Smallest N meeting the three size inequalities, with a search guard.

    Above the guard the selection reports the minimal s that would bring N
    back under it and leaves the config to a user-chosen fallback N.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    if c < 1:
        raise ValueError("c >= 1 required")
    thresholds = [
        (C0_desk * gamma ** -2 * c ** 5) ** (4.0 / (3.0 * s)),
        (math.sqrt(2 * c) / delta) ** (4.0 / s),
        (K * math.sqrt(6.0 / c)) ** (4.0 / s),
        4.0,  # k3 = 2 must stay below sqrt(N)
    ]
    N_required = max(4, math.ceil(max(thresholds) - 1e-12))
    # minimal s that would fit the binding inequality at the guard
    binding = max(math.sqrt(2 * c) / delta, K * math.sqrt(6.0 / c))
    minimal_s_guard = 4.0 * math.log(binding) / math.log(NLS_N_GUARD)
    if N_required > NLS_N_GUARD:
        if fallback_N is None:
            return NlsSelection(None, False, N_required, minimal_s_guard, None, None, None)
        N = fallback_N
    else:
        N = N_required
    mu_faithful = N ** (0.75 * s)
    eps = c / (2 ** (2 * s) * N ** s - 1.0)
    time_vs_growth = None
    if delta < 1:
        alpha = math.log(K) / math.log(1.0 / delta)
        if alpha > 1:
            C = K / delta
            time_vs_growth = {"alpha": alpha, "C": C,
                              "T_bound": 6.0 * mu_faithful ** 2 / c,
                              "C_sixth": C ** 6}
    config = ExperimentConfig(equation="nls", regime=regime, N=N, s=s,
                              mu=(mu if regime == "desk" else None),
                              c=c, epsilon=eps, gamma=gamma, tau=tau,
                              delta=delta, growth_target=K) \
        if (regime == "paper" or mu is not None) else None
    return NlsSelection(config, N_required <= NLS_N_GUARD, N_required,
                        minimal_s_guard, mu_faithful, eps, time_vs_growth)


# ---------------------------------------------------------------------------
# emission: reports, CSV time series, sweeps
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    return repr(float(x))


def write_timeseries_csv(monitors: MonitorSeries, equation: str, path) -> None:
    """Monitor CSV: time, action_<j>..., hamiltonian, momentum|mass, sobolev_<s>, model_distance."""
    modes = sorted(monitors.mode_actions)
    conserved = "momentum" if equation == "wave" else "mass"
    header = ["time"] + [f"action_{j}" for j in modes] + ["hamiltonian", conserved]
    if monitors.sobolev is not None:
        header.append(f"sobolev_{_trim(monitors.sobolev_s)}")
    if monitors.model_distance is not None:
        header.append("model_distance")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        conserved_series = monitors.momentum if equation == "wave" else monitors.mass
        for i in range(len(monitors.times)):
            row = [_fmt(monitors.times[i])]
            row += [_fmt(monitors.mode_actions[j][i]) for j in modes]
            row += [_fmt(monitors.hamiltonian[i]), _fmt(conserved_series[i])]
            if monitors.sobolev is not None:
                row.append(_fmt(monitors.sobolev[i]))
            if monitors.model_distance is not None:
                row.append(_fmt(monitors.model_distance[i]))
            writer.writerow(row)


def _trim(s: float) -> str:
    return f"{s:g}"


def write_channel_csv(orbit: ChannelOrbit, path) -> None:
    """Channel CSV: time, per-slot actions, conserved level, Hamiltonian value."""
    spec = orbit.spec
    if spec.kind.startswith("wave"):
        labels = [f"I_{abs(m)}" for m in spec.slot_modes]
        conserved = "partial_momentum"
    else:
        labels = [f"I_{k}" for k in (1, 2, 3, 4)]
        conserved = "mass"
    ham = orbit.hamiltonian_series()
    level = orbit.conserved_series()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time"] + labels + [conserved, "hamiltonian_value"])
        for i in range(len(orbit.times)):
            row = [_fmt(orbit.times[i])]
            row += [_fmt(orbit.actions[k, i]) for k in range(orbit.actions.shape[0])]
            row += [_fmt(level[i]), _fmt(ham[i])]
            writer.writerow(row)


def channel_summary(orbit: ChannelOrbit) -> dict:
    return {
        "T0": orbit.T0,
        "T0_quadrature": orbit.T0_quadrature,
        "bounds": list(orbit.bounds),
        "epsilon_slack": epsilon_slack(orbit.spec),
        "initial_actions": [float(x) for x in orbit.initial_actions()],
        "final_actions": [float(x) for x in orbit.final_actions()],
    }


def emit_report(report: ExperimentReport, fmt: str, path=None) -> str:
    """Serialize a report; writes to path when given, returns the text."""
    if fmt == "json":
        text = report.to_json() + "\n"
    elif fmt == "text":
        text = report.to_text()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def report_from_json(text: str) -> ExperimentReport:
    data = json.loads(text)
    for key in ("T0_bounds", "T_formula_bounds"):
        if data.get(key) is not None:
            data[key] = tuple(data[key])
    return ExperimentReport(**data)


def load_sweep_configs(path) -> list[ExperimentConfig]:
    try:
        import tomllib
    except ModuleNotFoundError:  # python < 3.11
        import tomli as tomllib

    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    runs = doc.get("run")
    if not runs:
        raise ValueError("sweep file has no [[run]] tables")
    return [ExperimentConfig.from_dict(entry) for entry in runs]


def run_sweep(configs: list[ExperimentConfig], out_dir) -> list[ExperimentResult]:
    """Run configs sequentially; outputs are merged in config order."""
    os.makedirs(out_dir, exist_ok=True)
    results = []
    for i, config in enumerate(configs):
        result = run_experiment(config)
        emit_report(result.report, "json", os.path.join(out_dir, f"report_{i:03d}.json"))
        if result.monitors is not None:
            write_timeseries_csv(result.monitors, config.equation,
                                 os.path.join(out_dir, f"run_{i:03d}.csv"))
        results.append(result)
    merged = [r.report.to_dict() for r in results]
    with open(os.path.join(out_dir, "reports.json"), "w") as fh:
        json.dump(merged, fh, indent=2, sort_keys=True)
    return results
