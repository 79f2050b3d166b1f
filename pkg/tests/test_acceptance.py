"""Acceptance suite: one test per criterion, one PASS line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS lines as
they are produced.  The full-PDE runs (wave and cubic) take a few minutes
together; everything else is seconds.
"""

import json
import math
import time

import numpy as np
import pytest

from modedrift.channel import (
    ChannelSpec,
    epsilon_slack,
    integrate_channel,
)
from modedrift.constants import evaluate_constants, growth_scale_inequality_holds
from modedrift.diophantine import compute_gamma_sqrt2
from modedrift.evolve import (
    EvolutionProblem,
    nls_hamiltonian,
    nls_rhs,
    wave_hamiltonian_pair,
    wave_rhs_pair,
)
from modedrift.harness import ExperimentConfig, run_experiment, write_timeseries_csv, emit_report
from modedrift.resonance import (
    EnumerationFilters,
    MonomialClass,
    enumerate_monomials,
    nls_hamiltonian_filters,
    wave_resonant_set,
)
from modedrift.spectral import ModeSet, SpectralState, frequencies_nls, frequencies_wave
from modedrift.diophantine import find_q_vector

SQRT2 = math.sqrt(2.0)
GAMMA_ORACLE = 6 - 4 * SQRT2  # n=2 witness of the sqrt(2) search, ~0.34315


def _ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


# ---------------------------------------------------------------------------
# resonance combinatorics
# ---------------------------------------------------------------------------

def test_acceptance_resonance_oracle():
    start = time.time()
    for p in (2, 4, 6):
        freq = frequencies_wave(p, j_max=64)
        tangential_only = enumerate_monomials(MonomialClass(p + 1, 0), freq.mode_set(), freq,
                                              EnumerationFilters(resonant=True))
        assert sorted(m.key() for m in tangential_only) == wave_resonant_set(p), \
            f"wave p={p}: resonant tangential set differs from the closed form"
        one_normal = enumerate_monomials(MonomialClass(p + 1, 1), freq.mode_set(), freq,
                                         EnumerationFilters(resonant=True))
        assert one_normal == [], f"wave p={p}: unexpected resonances with one normal factor"
    q, _ = find_q_vector(1e-3, 2.0, trials=200, seed=5)
    modes = ModeSet(48, (1, -1, 2, 12))
    freq = frequencies_nls(modes, q, gamma=1e-3, tau=2.0)
    pair = enumerate_monomials(MonomialClass(4, 0), modes, freq,
                               nls_hamiltonian_filters(freq.N, resonant=True))
    assert len(pair) == 2
    assert {m.key() for m in pair} == {
        (((-1, 1), (12, 1)), ((1, 1), (2, 1))),
        (((1, 1), (2, 1)), ((-1, 1), (12, 1)))}
    elapsed = time.time() - start
    assert elapsed < 60.0, f"resonance oracle too slow: {elapsed:.1f}s"
    _ok(f"resonance oracle (wave p=2,4,6 and cubic pair) in {elapsed:.1f}s")


def test_acceptance_small_divisors():
    start = time.time()
    cert = compute_gamma_sqrt2(10_000)
    assert cert.gamma == pytest.approx(GAMMA_ORACLE, abs=1e-14)
    assert cert.gamma == pytest.approx(0.34315, abs=5e-6)
    violations = 0
    scanned = 0
    for p in (2, 4, 6):
        freq = frequencies_wave(p, j_max=64, gamma=cert.gamma)
        floor = cert.gamma / p ** 2
        found = enumerate_monomials(MonomialClass(p + 1, 1, "at_most_k"),
                                    freq.mode_set(), freq, EnumerationFilters(resonant=False))
        scanned += len(found)
        violations += sum(1 for m in found if abs(m.divisor_omega) < floor)
    assert violations == 0
    elapsed = time.time() - start
    _ok(f"small divisors >= gamma/p^2 ({scanned} non-resonant monomials, "
        f"0 violations) in {elapsed:.1f}s")


# ---------------------------------------------------------------------------
# channel traversal
# ---------------------------------------------------------------------------

def test_acceptance_channel_quadrature():
    for p in (2, 4, 6, 8):
        for c in (1.0, 2.0):
            for eps in (1e-3, 1e-6):
                spec = ChannelSpec("wave_plus", c=c, epsilon=eps, p=p, n_samples=201)
                orbit = integrate_channel(spec)  # raises if ODE/quadrature split
                assert abs(orbit.T0 - orbit.T0_quadrature) <= 1e-8 * orbit.T0_quadrature
                lower, upper = orbit.bounds
                assert orbit.T0 < upper, (p, c, eps)
                assert orbit.T0 >= lower - epsilon_slack(spec), (p, c, eps)
                assert orbit.actions[1, -1] == pytest.approx(c / p ** 2, abs=1e-8)
    spot = integrate_channel(ChannelSpec("wave_plus", c=1.0, epsilon=0.01, p=2))
    assert spot.T0 == pytest.approx(1.4778, abs=5e-4)
    assert SQRT2 < spot.T0 < 2 * SQRT2
    _ok("channel quadrature vs ODE (p in 2..8, c in {1,2}, eps in {1e-3,1e-6}), "
        f"spot T0 = {spot.T0:.6f}")


def test_acceptance_epsilon_independence():
    for p in (2, 4, 6, 8):
        for c in (1.0, 2.0):
            times = {}
            for eps in (1e-3, 1e-6):
                spec = ChannelSpec("wave_plus", c=c, epsilon=eps, p=p, n_samples=101)
                orbit = integrate_channel(spec)
                lower, upper = orbit.bounds
                assert lower - epsilon_slack(spec) <= orbit.T0 < upper
                times[eps] = orbit.T0
    _ok("traversal time lands in the analytic interval independently of eps")


def test_acceptance_nls_channel():
    eps = 0.01
    orbit = integrate_channel(ChannelSpec("nls", c=1.0, epsilon=eps, n_samples=401))
    expected = [1 / 6 + 2 * eps / 3, 0.5 - 4 * eps / 3, 1 / 6 + 2 * eps / 3, 1 / 6]
    np.testing.assert_allclose(orbit.final_actions(), expected, atol=1e-8)
    assert orbit.T0 <= 6.0
    level = orbit.conserved_series()
    assert np.max(np.abs(level - 1.0)) <= 1e-9
    _ok(f"cubic channel endpoints to 1e-8, T0 = {orbit.T0:.4f} <= 6, mass drift "
        f"{np.max(np.abs(level - 1.0)):.2e}")


# ---------------------------------------------------------------------------
# full-PDE desk runs (shared fixtures: base + stability variations)
# ---------------------------------------------------------------------------

WAVE_CFG = dict(equation="wave", p=2, s=3.0, mu=10.0, c=1.0, epsilon=1e-3,
                j_max=32, dt=1e-3, sample_stride=20)
NLS_CFG = dict(equation="nls", N=8, s=1.0, mu=10.0, c=1.0,
               j_max=48, dt=1e-3, sample_stride=50, seed=7,
               gamma=1e-2, tau=2.0, q_trials=400, q_best_of=40)


@pytest.fixture(scope="session")
def wave_runs():
    start = time.time()
    base = run_experiment(ExperimentConfig(**WAVE_CFG))
    wider = run_experiment(ExperimentConfig(**{**WAVE_CFG, "j_max": 64}))
    finer = run_experiment(ExperimentConfig(**{**WAVE_CFG, "dt": 5e-4}))
    return {"base": base, "wider": wider, "finer": finer, "elapsed": time.time() - start}


@pytest.fixture(scope="session")
def nls_runs():
    start = time.time()
    base = run_experiment(ExperimentConfig(**NLS_CFG))
    wider = run_experiment(ExperimentConfig(**{**NLS_CFG, "j_max": 96}))
    finer = run_experiment(ExperimentConfig(**{**NLS_CFG, "dt": 5e-4}))
    return {"base": base, "wider": wider, "finer": finer, "elapsed": time.time() - start}


@pytest.fixture(scope="session")
def acceptance_artifacts(wave_runs, tmp_path_factory):
    """CSV + report of the base wave run, for the figure tool."""
    out = tmp_path_factory.mktemp("acceptance")
    base = wave_runs["base"]
    csv_path = out / "wave_run.csv"
    report_path = out / "wave_report.json"
    write_timeseries_csv(base.monitors, "wave", csv_path)
    emit_report(base.report, "json", report_path)
    return {"csv": csv_path, "report": report_path}


def _stability(base, other, fields, modes):
    """Largest relative change of the reported quantities between two runs."""
    worst = 0.0
    for name in fields:
        x, y = getattr(base.report, name), getattr(other.report, name)
        worst = max(worst, abs(x - y) / abs(x))
    for j in modes:
        x = base.report.final_actions[j]
        y = other.report.final_actions[j]
        worst = max(worst, abs(x - y) / abs(x))
    return worst


def test_acceptance_full_pde_wave(wave_runs):
    base = wave_runs["base"]
    report = base.report
    assert report.drifts["hamiltonian"] <= 1e-6
    assert report.drifts["momentum"] <= 1e-6
    assert report.drifts["pairing"] <= 1e-10
    deviation = abs(report.ratio - report.model_ratio_prediction) / report.model_ratio_prediction
    assert deviation <= 0.20, f"ratio off the channel prediction by {deviation:.1%}"
    assert report.ratio >= 0.8 * report.model_ratio_prediction
    fields = ("norm0", "normT", "ratio", "T0", "T", "max_model_distance")
    modes = ("1", "2", "-1", "-2")
    for tag in ("wider", "finer"):
        change = _stability(base, wave_runs[tag], fields, modes)
        assert change <= 0.01, f"{tag}: reported quantities moved {change:.2%}"
    assert wave_runs["elapsed"] < 600.0
    _ok(f"wave desk run: ratio {report.ratio:.4f} vs model {report.model_ratio_prediction:.4f} "
        f"({deviation:.2%}), H drift {report.drifts['hamiltonian']:.2e}, "
        f"stable under refinement, {wave_runs['elapsed']:.0f}s")


def test_acceptance_full_pde_nls(nls_runs):
    base = nls_runs["base"]
    report = base.report
    assert report.drifts["mass"] <= 1e-6
    target = 1.0 / 6.0 / 100.0  # c/(6 mu^2)
    measured = report.final_actions["12"]
    deviation = abs(measured - target) / target
    assert deviation <= 0.20, f"receiving-mode action off by {deviation:.1%}"
    fields = ("norm0", "normT", "ratio", "T0", "T")
    modes = ("1", "-1", "2", "12")
    for tag in ("wider", "finer"):
        change = _stability(base, nls_runs[tag], fields, modes)
        assert change <= 0.01, f"{tag}: reported quantities moved {change:.2%}"
    _ok(f"cubic desk run: action(k4) {measured:.3e} vs c/(6 mu^2) {target:.3e} "
        f"({deviation:.2%}), mass drift {report.drifts['mass']:.2e}, "
        f"stable under refinement, {nls_runs['elapsed']:.0f}s")


# ---------------------------------------------------------------------------
# gradient consistency
# ---------------------------------------------------------------------------

def _random_states(problem, n, rng, amplitude=0.1):
    m = problem.mode_set.size
    for _ in range(n):
        scale = amplitude * rng.random()
        yield scale * (rng.standard_normal(m) + 1j * rng.standard_normal(m))


def test_acceptance_gradient_check():
    rng = np.random.default_rng(123)
    h = 1e-5

    freq = frequencies_wave(2, j_max=16)
    problem = EvolutionProblem.for_wave(freq)
    m = problem.mode_set.size
    for z in _random_states(problem, 100, rng):
        zp, zm = z, np.conj(z)
        fzp, _ = wave_rhs_pair(problem, zp, zm)
        picks = rng.choice(m, size=6, replace=False)
        for i in picks:
            e = np.zeros(m)
            e[i] = h
            fd = (wave_hamiltonian_pair(problem, zp, zm + e) -
                  wave_hamiltonian_pair(problem, zp, zm - e)) / (2 * h)
            assert abs(fzp[i] - 1j * fd) <= 1e-6 * abs(fzp[i]) + 1e-12

    q, _ = find_q_vector(1e-2, 2.0, trials=200, seed=9, best_of=10)
    nfreq = frequencies_nls(ModeSet(16, (1, -1, 2, 12)), q, gamma=1e-2, tau=2.0)
    nproblem = EvolutionProblem.for_nls(nfreq)
    m = nproblem.mode_set.size
    for u in _random_states(nproblem, 100, rng):
        f = nls_rhs(nproblem, u)
        picks = rng.choice(m, size=6, replace=False)
        for i in picks:
            e = np.zeros(m)
            e[i] = h
            dx = (nls_hamiltonian(nproblem, u + e) - nls_hamiltonian(nproblem, u - e)) / (2 * h)
            dy = (nls_hamiltonian(nproblem, u + 1j * e) - nls_hamiltonian(nproblem, u - 1j * e)) / (2 * h)
            fd = 0.5 * (dx + 1j * dy)
            assert abs(f[i] - 1j * fd) <= 1e-6 * abs(f[i]) + 1e-12
    _ok("vector fields match finite-difference Hamiltonian gradients "
        "(100 random states per equation)")


# ---------------------------------------------------------------------------
# closed-form constants
# ---------------------------------------------------------------------------

def test_acceptance_constants():
    consts = evaluate_constants(4, gamma=GAMMA_ORACLE)
    assert consts.C1 == 7_372_800
    for p in range(12, 42, 2):
        assert growth_scale_inequality_holds(p), f"scale inequality fails at p={p}"
    _ok("C1(p=4) = 7,372,800 exactly; growth-scale inequality holds for even p in [12, 40]")


# ---------------------------------------------------------------------------
# secondary: figure tool renders the acceptance artifacts
# ---------------------------------------------------------------------------

def test_acceptance_figures(acceptance_artifacts, tmp_path):
    driftfigs = pytest.importorskip("driftfigs")

    kinds = ("actions", "norms", "channel_plane", "distance")
    digests = {}
    for kind in kinds:
        out = tmp_path / f"{kind}.png"
        request = driftfigs.FigureRequest(
            csv_path=str(acceptance_artifacts["csv"]),
            report_path=str(acceptance_artifacts["report"]),
            kind=kind,
            out_path=str(out),
        )
        driftfigs.render(request)
        first = out.read_bytes()
        driftfigs.render(request)
        assert out.read_bytes() == first, f"{kind}: re-render is not byte-identical"
        digests[kind] = len(first)
    assert all(size > 0 for size in digests.values())
    _ok(f"figure tool rendered {', '.join(kinds)} deterministically")
