"""Time integration of the full truncated Hamiltonian PDEs.

The linear part is diagonal and stiff (frequencies grow with the cutoff), so
stepping uses Strang splitting: exact linear rotation for half a step, a
classical RK4 substep on the projected nonlinearity, then another exact half
rotation.  The nonlinear term is evaluated pseudospectrally on a zero-padded
grid large enough that the projected convolution is exact, which is what
makes the conserved-quantity monitors meaningful.

The wave system evolves the pair (z+, z-) as independent complex vectors;
initial data is placed on the real subspace (z- the conjugate of z+) and the
pairing is *checked* along the flow, never re-imposed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .channel import TangentialTrajectory
from .spectral import Frame, FrequencyTable, ModeSet, SQRT2, SpectralState


class BlowUpError(RuntimeError):
    def __init__(self, t):
        super().__init__(f"non-finite amplitude first detected at t = {t}")
        self.time = t
        self.partial_monitors = None  # filled by evolve() before re-raising


def required_grid_size(kind: str, j_max: int, p: int | None = None, N: int | None = None) -> int:
    """Smallest grid on which the projected nonlinearity is alias-free."""
    if kind == "wave":
        return (p + 1) * j_max + 1
    return 4 * j_max + N + 1


def default_padding(kind: str, j_max: int, p: int | None = None, N: int | None = None) -> int:
    base = 2 * j_max + 1
    needed = required_grid_size(kind, j_max, p, N)
    degree = p if kind == "wave" else 3
    spec_floor = math.ceil((degree + 1) / 2)
    return max(spec_floor, math.ceil(needed / base))


@dataclass(frozen=True)
class EvolutionProblem:
    """A truncated evolution: equation kind, dispersion, cutoff, dealiasing."""

    kind: str  # "wave" | "nls"
    freq: FrequencyTable
    mode_set: ModeSet
    dealias_padding: int

    def __post_init__(self):
        if self.kind not in ("wave", "nls"):
            raise ValueError(f"unknown problem kind {self.kind!r}")
        if self.mode_set.j_max > self.freq.j_max:
            raise ValueError("frequency table does not cover the mode window")
        degree = self.nonlinearity_degree
        if self.dealias_padding < math.ceil((degree + 1) / 2):
            raise ValueError("dealias padding below the (degree+1)/2 floor")
        if self.n_grid < required_grid_size(self.kind, self.mode_set.j_max,
                                            self.freq.p, self.freq.N):
            raise ValueError(
                f"dealias padding {self.dealias_padding} insufficient: aliasing would corrupt "
                f"the Galerkin projection (grid {self.n_grid} < "
                f"{required_grid_size(self.kind, self.mode_set.j_max, self.freq.p, self.freq.N)})")

    @property
    def nonlinearity_degree(self) -> int:
        return self.freq.p if self.kind == "wave" else 3

    @property
    def j_max(self) -> int:
        return self.mode_set.j_max

    @property
    def n_grid(self) -> int:
        return self.dealias_padding * (2 * self.mode_set.j_max + 1)

    @classmethod
    def for_wave(cls, freq: FrequencyTable, j_max: int | None = None,
                 padding: int | None = None) -> "EvolutionProblem":
        j_max = freq.j_max if j_max is None else j_max
        if padding is None:
            padding = default_padding("wave", j_max, p=freq.p)
        return cls("wave", freq, ModeSet(j_max, freq.tangential), padding)

    @classmethod
    def for_nls(cls, freq: FrequencyTable, j_max: int | None = None,
                padding: int | None = None) -> "EvolutionProblem":
        j_max = freq.j_max if j_max is None else j_max
        if padding is None:
            padding = default_padding("nls", j_max, N=freq.N)
        return cls("nls", freq, ModeSet(j_max, freq.tangential), padding)

    def omegas(self) -> np.ndarray:
        lo = self.freq.j_max - self.mode_set.j_max
        return self.freq.omega[lo:lo + self.mode_set.size]


# ---------------------------------------------------------------------------
# padded-grid transforms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _window_indices(j_max: int, n_grid: int) -> np.ndarray:
    return np.arange(-j_max, j_max + 1) % n_grid


@lru_cache(maxsize=64)
def _cos_table(N: int, n_grid: int) -> np.ndarray:
    return np.cos(N * 2.0 * np.pi * np.arange(n_grid) / n_grid)


def _to_grid(coeffs: np.ndarray, j_max: int, n_grid: int) -> np.ndarray:
    padded = np.zeros(n_grid, dtype=complex)
    padded[_window_indices(j_max, n_grid)] = coeffs
    return np.fft.ifft(padded) * n_grid


def _from_grid(values: np.ndarray, j_max: int, n_grid: int) -> np.ndarray:
    spectrum = np.fft.fft(values) / n_grid
    return spectrum[_window_indices(j_max, n_grid)]


# ---------------------------------------------------------------------------
# vector fields and Hamiltonian functionals
# ---------------------------------------------------------------------------

def wave_nonlinear_term(problem: EvolutionProblem, zplus: np.ndarray,
                        zminus: np.ndarray) -> np.ndarray:
    """Projected coefficients of w^p / sqrt(2) with w_j = (z+_j + z-_{-j}) / sqrt(2)."""
    j_max, n_grid = problem.j_max, problem.n_grid
    w = (zplus + zminus[::-1]) / SQRT2
    w_vals = _to_grid(w, j_max, n_grid)
    return _from_grid(w_vals ** problem.freq.p, j_max, n_grid) / SQRT2


def wave_rhs_pair(problem: EvolutionProblem, zplus: np.ndarray, zminus: np.ndarray,
                  include_linear: bool = True):
    g = wave_nonlinear_term(problem, zplus, zminus)
    if include_linear:
        omega = problem.omegas()
        return 1j * (omega * zplus + g), -1j * (omega * zminus + g[::-1])
    return 1j * g, -1j * g[::-1]


def wave_hamiltonian_pair(problem: EvolutionProblem, zplus: np.ndarray,
                          zminus: np.ndarray) -> complex:
    """Energy as an analytic polynomial of the pair (complex off the real subspace)."""
    j_max, n_grid = problem.j_max, problem.n_grid
    p = problem.freq.p
    quadratic = np.sum(problem.omegas() * zplus * zminus)
    w = (zplus + zminus[::-1]) / SQRT2
    w_vals = _to_grid(w, j_max, n_grid)
    interaction = np.mean(w_vals ** (p + 1)) / (p + 1)
    return quadratic + interaction


def nls_nonlinear_term(problem: EvolutionProblem, u: np.ndarray) -> np.ndarray:
    """Projected coefficients of cos(N x) |u|^2 u."""
    j_max, n_grid = problem.j_max, problem.n_grid
    u_vals = _to_grid(u, j_max, n_grid)
    cos_table = _cos_table(problem.freq.N, n_grid)
    return _from_grid(cos_table * np.abs(u_vals) ** 2 * u_vals, j_max, n_grid)


def nls_rhs(problem: EvolutionProblem, u: np.ndarray, include_linear: bool = True) -> np.ndarray:
    nl = nls_nonlinear_term(problem, u)
    if include_linear:
        return 1j * (problem.omegas() * u + nl)
    return 1j * nl


def nls_hamiltonian(problem: EvolutionProblem, u: np.ndarray) -> float:
    j_max, n_grid = problem.j_max, problem.n_grid
    u_vals = _to_grid(u, j_max, n_grid)
    quartic = 0.5 * np.mean(_cos_table(problem.freq.N, n_grid) * np.abs(u_vals) ** 4)
    return float(np.sum(problem.omegas() * np.abs(u) ** 2) + quartic)


def vector_field(problem: EvolutionProblem, state: SpectralState) -> SpectralState:
    """Time derivative of the state (wave: of z+, with z- the conjugate)."""
    if state.j_max != problem.j_max:
        raise ValueError("state does not match the problem's mode window")
    if problem.kind == "wave":
        dzp, _ = wave_rhs_pair(problem, state.amplitudes, np.conj(state.amplitudes))
        return state.with_amplitudes(dzp)
    return state.with_amplitudes(nls_rhs(problem, state.amplitudes))


def hamiltonian_value(problem: EvolutionProblem, state: SpectralState) -> float:
    if problem.kind == "wave":
        value = wave_hamiltonian_pair(problem, state.amplitudes, np.conj(state.amplitudes))
        return float(value.real)
    return nls_hamiltonian(problem, state.amplitudes)


# ---------------------------------------------------------------------------
# stepping
# ---------------------------------------------------------------------------

class _Stepper:
    """Strang splitting with cached rotation phases for a fixed dt."""

    def __init__(self, problem: EvolutionProblem, dt: float):
        self.problem = problem
        self.dt = dt
        omega = problem.omegas()
        self.half_rotation = np.exp(1j * omega * dt / 2.0)

    def _nonlinear_rk4(self, y):
        """Classical RK4 on the projected nonlinear flow."""
        dt = self.dt
        f = self._nl
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        return y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)

    def step(self, y):
        y = self._rotate(y, self.half_rotation)
        y = self._nonlinear_rk4(y)
        return self._rotate(y, self.half_rotation)


class _WaveStepper(_Stepper):
    def _nl(self, y):
        m = self.problem.mode_set.size
        dzp, dzm = wave_rhs_pair(self.problem, y[:m], y[m:], include_linear=False)
        return np.concatenate([dzp, dzm])

    def _rotate(self, y, phase):
        m = self.problem.mode_set.size
        return np.concatenate([y[:m] * phase, y[m:] * np.conj(phase)])


class _NlsStepper(_Stepper):
    def _nl(self, y):
        return nls_rhs(self.problem, y, include_linear=False)

    def _rotate(self, y, phase):
        return y * phase


def step(problem: EvolutionProblem, state: SpectralState, dt: float) -> SpectralState:
    """One Strang step of the public state (wave: pairing re-derived from z+)."""
    if dt == 0:
        raise ValueError("dt must be nonzero")
    if problem.kind == "wave":
        stepper = _WaveStepper(problem, dt)
        y = np.concatenate([state.amplitudes, np.conj(state.amplitudes)])
        y = stepper.step(y)
        m = problem.mode_set.size
        return state.with_amplitudes(y[:m], time=state.time + dt)
    stepper = _NlsStepper(problem, dt)
    return state.with_amplitudes(stepper.step(state.amplitudes), time=state.time + dt)


@dataclass
class MonitorSeries:
    """Sampled conserved quantities and tracked actions along an evolution."""

    times: np.ndarray
    hamiltonian: np.ndarray
    momentum: np.ndarray
    mass: np.ndarray
    mode_actions: dict[int, np.ndarray]
    sobolev_s: float | None
    sobolev: np.ndarray | None
    model_distance: np.ndarray | None
    pairing_deviation: np.ndarray | None

    def __post_init__(self):
        n = len(self.times)
        for series in (self.hamiltonian, self.momentum, self.mass):
            if len(series) != n:
                raise ValueError("monitor series lengths disagree")
        if not all(np.all(np.isfinite(s)) for s in (self.hamiltonian, self.momentum, self.mass)):
            raise ValueError("monitor series must be finite")

    def relative_drift(self, name: str) -> float:
        series = getattr(self, name)
        scale = {
            "hamiltonian": abs(self.hamiltonian[0]),
            "mass": abs(self.mass[0]),
            # symmetric data has exactly zero momentum; normalize by the
            # unsigned momentum content instead
            "momentum": self._momentum_scale(),
        }[name]
        return float(np.max(np.abs(series - series[0])) / max(scale, 1e-300))

    def _momentum_scale(self) -> float:
        total = sum(abs(j) * series[0] for j, series in self.mode_actions.items())
        return max(abs(self.momentum[0]), total, self.mass[0])


def evolve(problem: EvolutionProblem, state0: SpectralState, t_final: float, dt: float,
           sample_stride: int = 10, tracked_modes=None, sobolev_s: float | None = None,
           reference: TangentialTrajectory | None = None):
    """March the truncated system to t_final, sampling monitors on a stride.

    Returns (final state, MonitorSeries).  The final time is always sampled.
    A supplied reference trajectory adds the rotating-frame l1 distance to the
    monitors.  Blow-up raises :class:`BlowUpError` naming the first bad time.
    """
    if dt == 0 or t_final * dt < 0:
        raise ValueError("dt must be nonzero and share the sign of t_final")
    if problem.kind == "wave" and state0.frame is not Frame.LAB:
        raise ValueError("evolution starts from lab-frame data")
    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-9 * max(abs(t_final), 1.0):
        n_steps = math.floor(t_final / dt)
    tracked = tuple(tracked_modes) if tracked_modes is not None else problem.mode_set.tangential
    omega = problem.omegas()

    m = problem.mode_set.size
    if problem.kind == "wave":
        stepper = _WaveStepper(problem, dt)
        y = np.concatenate([state0.amplitudes, np.conj(state0.amplitudes)])
    else:
        stepper = _NlsStepper(problem, dt)
        y = state0.amplitudes.copy()

    samples = {"t": [], "ham": [], "mom": [], "mass": [], "sob": [], "dist": [], "pair": []}
    actions = {j: [] for j in tracked}

    def record(t, y):
        z = y[:m]
        if not np.all(np.isfinite(z)):
            raise BlowUpError(t)
        state = SpectralState(z, problem.j_max, Frame.LAB, t)
        samples["t"].append(t)
        if problem.kind == "wave":
            samples["ham"].append(float(wave_hamiltonian_pair(problem, y[:m], y[m:]).real))
            samples["pair"].append(float(np.max(np.abs(np.conj(y[:m]) - y[m:]))))
        else:
            samples["ham"].append(nls_hamiltonian(problem, z))
            samples["pair"].append(0.0)
        js = np.arange(-problem.j_max, problem.j_max + 1)
        actions_now = np.abs(z) ** 2
        samples["mom"].append(float(np.sum(js * actions_now)))
        samples["mass"].append(float(np.sum(actions_now)))
        for j in tracked:
            actions[j].append(float(actions_now[j + problem.j_max]))
        if sobolev_s is not None:
            weights = np.maximum(1.0, np.abs(js)) ** (2 * sobolev_s)
            samples["sob"].append(float(np.sqrt(np.sum(weights * actions_now))))
        if reference is not None:
            rotating = z * np.exp(-1j * omega * t)
            ref = reference.state_at(t, problem.j_max)
            samples["dist"].append(float(np.sum(np.abs(rotating - ref.amplitudes))))

    def build_series():
        return MonitorSeries(
            times=np.array(samples["t"]),
            hamiltonian=np.array(samples["ham"]),
            momentum=np.array(samples["mom"]),
            mass=np.array(samples["mass"]),
            mode_actions={j: np.array(v) for j, v in actions.items()},
            sobolev_s=sobolev_s,
            sobolev=np.array(samples["sob"]) if sobolev_s is not None else None,
            model_distance=np.array(samples["dist"]) if reference is not None else None,
            pairing_deviation=np.array(samples["pair"]) if problem.kind == "wave" else None,
        )

    t = state0.time
    try:
        record(t, y)
        remainder = t_final - n_steps * dt
        eps_rem = 1e-9 * abs(dt)
        for k in range(n_steps):
            y = stepper.step(y)
            t = state0.time + (k + 1) * dt
            if (k + 1) % sample_stride == 0 and not (k == n_steps - 1 and abs(remainder) <= eps_rem):
                record(t, y)
        if abs(remainder) > eps_rem:
            tail = _WaveStepper(problem, remainder) if problem.kind == "wave" else _NlsStepper(problem, remainder)
            y = tail.step(y)
            t = state0.time + t_final
            record(t, y)
        elif not samples["t"] or samples["t"][-1] != t:
            record(t, y)
    except BlowUpError as exc:
        exc.partial_monitors = build_series()
        raise

    final = SpectralState(y[:m], problem.j_max, Frame.LAB, state0.time + t_final)
    return final, build_series()


def rotating_frame(state: SpectralState, freq: FrequencyTable, to: Frame) -> SpectralState:
    """Toggle between lab and rotating frames: r_j = z_j e^{-i omega(j) t}."""
    if state.frame is to:
        raise ValueError(f"state already in the {to.value} frame")
    omega = np.array([freq.omega_of(j) for j in state.modes()])
    sign = -1.0 if to is Frame.ROTATING else 1.0
    return state.with_amplitudes(state.amplitudes * np.exp(sign * 1j * omega * state.time),
                                 frame=to)


def model_distance(state: SpectralState, reference: TangentialTrajectory, t: float) -> float:
    """l1 distance between a rotating-frame state and the rescaled model at t."""
    if state.frame is not Frame.ROTATING:
        raise ValueError("model distance is defined in the rotating frame")
    ref = reference.state_at(t, state.j_max)
    return float(np.sum(np.abs(state.amplitudes - ref.amplitudes)))


def real_subspace_deviation(zplus: np.ndarray, zminus: np.ndarray) -> float:
    return float(np.max(np.abs(np.conj(zplus) - zminus)))


# ---------------------------------------------------------------------------
# dense convolution oracles (reference implementations for tests)
# ---------------------------------------------------------------------------

def wave_nonlinear_oracle(problem: EvolutionProblem, zplus: np.ndarray,
                          zminus: np.ndarray) -> np.ndarray:
    """Direct O(M^p) convolution of w^p / sqrt(2), no transforms."""
    j_max = problem.j_max
    w = (zplus + zminus[::-1]) / SQRT2
    accum = w.copy()
    for _ in range(problem.freq.p - 1):
        accum = np.convolve(accum, w)
    # accum now covers [-k*j_max, k*j_max]; take the center window
    center = (len(accum) - 1) // 2
    return accum[center - j_max:center + j_max + 1] / SQRT2


def nls_nonlinear_oracle(problem: EvolutionProblem, u: np.ndarray) -> np.ndarray:
    """Direct convolution of cos(Nx)|u|^2 u via +-N shifts of u * ubar * u."""
    j_max, N = problem.j_max, problem.freq.N
    ubar_flip = np.conj(u)[::-1]  # coefficient of e^{ijx} in conj(u(x))
    cubic = np.convolve(np.convolve(u, ubar_flip), u)  # spans [-3 j_max, 3 j_max]
    center = (len(cubic) - 1) // 2
    out = np.zeros(2 * j_max + 1, dtype=complex)
    for j in range(-j_max, j_max + 1):
        out[j + j_max] = 0.5 * (cubic[center + j - N] + cubic[center + j + N])
    return out
