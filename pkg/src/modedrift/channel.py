"""Finite-dimensional resonant models and their diffusion channels.

The reduced Hamiltonians live on the tangential modes in action-angle
variables.  On the invariant section (resonant angle locked a quarter turn
from alignment) the action dynamics collapses to a scalar ODE along an
affine line in action space; the traversal time T0 is computed both by
adaptive integration of that ODE and by direct quadrature, which must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp

from .spectral import Frame, SQRT2, SpectralState

QUAD_ODE_RTOL = 1e-8  # required agreement between the two T0 routes


def wave_coupling(p: int) -> float:
    """Coefficient of the reduced wave Hamiltonian, sqrt(2)^(1-p)."""
    return SQRT2 ** (1 - p)


@dataclass(frozen=True)
class ChannelSpec:
    """Defining data of one diffusion channel.

    ``c`` is the conserved level (partial momentum for the wave channels,
    total mass for the Schroedinger one) and ``epsilon`` the initial action
    of the receiving high mode.
    """

    kind: str  # "wave_plus" | "wave_minus" | "nls"
    c: float
    epsilon: float
    p: int | None = None
    section_angle: float = math.pi / 2
    n_samples: int = 2001

    def __post_init__(self):
        if self.kind not in ("wave_plus", "wave_minus", "nls"):
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.c <= 0 or self.epsilon <= 0:
            raise ValueError("c and epsilon must be positive")
        if self.kind.startswith("wave"):
            if self.p is None or self.p < 2 or self.p % 2:
                raise ValueError("wave channels need an even p >= 2")
            if not self.c > self.p * self.epsilon:
                raise ValueError(f"need c > p*epsilon, got c={self.c}, p*eps={self.p * self.epsilon}")
        else:
            if not self.c > 8.0 * self.epsilon / 3.0:
                raise ValueError(f"need c > (8/3)*epsilon, got c={self.c}, eps={self.epsilon}")

    @property
    def target(self) -> float:
        return self.c / self.p ** 2 if self.kind.startswith("wave") else self.c / 6.0

    @property
    def nls_alpha(self) -> float:
        return (self.c - self.epsilon) / 3.0 + self.epsilon

    @property
    def nls_beta(self) -> float:
        return (self.c - self.epsilon) / 3.0 - self.epsilon

    @property
    def slot_modes(self) -> tuple[int, ...]:
        """Canonical mode labels of the action slots."""
        if self.kind == "wave_plus":
            return (1, self.p)
        if self.kind == "wave_minus":
            return (-1, -self.p)
        return (1, 2, 3, 4)  # abstract slots; the lift maps them onto the tangential set


def reduced_hamiltonian(kind: str, I, theta, p: int | None = None) -> float:
    """Value of the reduced resonant Hamiltonian at actions I, angles theta."""
    I = np.asarray(I, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(I < 0):
        raise ValueError("actions must be nonnegative")
    if kind.startswith("wave"):
        psi = p * theta[0] - theta[1]
        return wave_coupling(p) * I[0] ** (p / 2) * math.sqrt(I[1]) * math.cos(psi)
    psi = theta[0] - theta[1] + theta[2] - theta[3]
    return 2.0 * math.sqrt(np.prod(I)) * math.cos(psi)


def reduced_gradients(kind: str, I, theta, p: int | None = None):
    """(dG/dI, dG/dtheta) of the reduced Hamiltonian; Hamilton's equations are
    thetadot = +dG/dI, Idot = -dG/dtheta."""
    I = np.asarray(I, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(I < 0):
        raise ValueError("actions must be nonnegative")
    if kind.startswith("wave"):
        lam = wave_coupling(p)
        psi = p * theta[0] - theta[1]
        cos, sin = math.cos(psi), math.sin(psi)
        amp = I[0] ** (p / 2) * math.sqrt(I[1])
        if cos != 0 and I[1] == 0:
            raise ValueError("dG/dI singular at zero high-mode action off the section")
        dI = np.array([
            lam * (p / 2) * I[0] ** (p / 2 - 1) * math.sqrt(I[1]) * cos,
            lam * I[0] ** (p / 2) * cos / (2 * math.sqrt(I[1])) if cos != 0 else 0.0,
        ])
        dtheta = np.array([-lam * p * amp * sin, lam * amp * sin])
        return dI, dtheta
    psi = theta[0] - theta[1] + theta[2] - theta[3]
    cos, sin = math.cos(psi), math.sin(psi)
    amp = math.sqrt(float(np.prod(I)))
    dI = np.zeros(4)
    if cos != 0:
        if np.any(I == 0):
            raise ValueError("dG/dI singular at zero action off the section")
        dI = np.array([cos * amp / I[k] for k in range(4)])
    signs = np.array([1.0, -1.0, 1.0, -1.0])
    dtheta = -2.0 * amp * sin * signs  # dG/dtheta_k = -2 amp sin * dpsi/dtheta_k
    return dI, dtheta


def channel_field(spec: ChannelSpec, J: float) -> float:
    """Scalar right-hand side of the action drift on the invariant section."""
    if spec.kind.startswith("wave"):
        p, c = spec.p, spec.c
        if not (0 <= J <= c / p):
            raise ValueError(f"J={J} outside the channel [0, {c / p}]")
        return wave_coupling(p) * (c - p * J) ** (p / 2) * math.sqrt(J)
    a, b = spec.nls_alpha, spec.nls_beta
    if not (0 <= J <= a):
        raise ValueError(f"J={J} outside the channel [0, {a}]")
    return 2.0 * (a - J) * math.sqrt((b + J) * J)


def diffusion_time_bounds(spec: ChannelSpec) -> tuple[float, float]:
    """Analytic (lower, upper) bounds for the traversal time T0."""
    if spec.kind.startswith("wave"):
        p, c = spec.p, spec.c
        lower = SQRT2 ** (p + 1) / (c ** ((p - 1) / 2) * p)
        upper = lower / (1 - 1 / p) ** (p / 2)
        return lower, upper
    return 0.0, 6.0 / spec.c


def epsilon_slack(spec: ChannelSpec) -> float:
    """Correction subtracted from the lower bound: the exact quadrature loses
    a 2 sqrt(eps) sqrt(2)^{p-1} / c^{p/2} tail that the analytic bound ignores."""
    if spec.kind.startswith("wave"):
        return 2.0 * math.sqrt(spec.epsilon) * SQRT2 ** (spec.p - 1) / spec.c ** (spec.p / 2)
    return 0.0


def _quadrature_time(spec: ChannelSpec) -> float:
    """T0 as the direct integral of dJ / field(J), desingularized by J = w^2."""
    w0, w1 = math.sqrt(spec.epsilon), math.sqrt(spec.target)
    if spec.kind.startswith("wave"):
        p, c = spec.p, spec.c
        lam = wave_coupling(p)

        def integrand(w):
            return 2.0 / (lam * (c - p * w * w) ** (p / 2))
    else:
        a, b = spec.nls_alpha, spec.nls_beta

        def integrand(w):
            return 1.0 / ((a - w * w) * math.sqrt(b + w * w))

    value, err = quad(integrand, w0, w1, epsabs=1e-14, epsrel=1e-13, limit=200)
    return value


@dataclass
class ChannelOrbit:
    """Sampled channel orbit with its traversal time and analytic bounds."""

    spec: ChannelSpec
    times: np.ndarray = field(repr=False)
    actions: np.ndarray = field(repr=False)  # shape (n_slots, n_times)
    T0: float
    T0_quadrature: float
    bounds: tuple[float, float]
    frozen_angles: tuple[float, ...]

    @property
    def slot_modes(self):
        return self.spec.slot_modes

    def action_at(self, slot: int, t: float) -> float:
        return float(np.interp(t, self.times, self.actions[slot]))

    def initial_actions(self) -> np.ndarray:
        return self.actions[:, 0].copy()

    def final_actions(self) -> np.ndarray:
        return self.actions[:, -1].copy()

    def hamiltonian_series(self) -> np.ndarray:
        p = self.spec.p
        kind = self.spec.kind
        return np.array([reduced_hamiltonian(kind, self.actions[:, i], self.frozen_angles, p)
                         for i in range(len(self.times))])

    def conserved_series(self) -> np.ndarray:
        """Partial momentum I_low + p I_high (wave) or total mass (nls)."""
        if self.spec.kind.startswith("wave"):
            return self.actions[0] + self.spec.p * self.actions[1]
        return self.actions.sum(axis=0)


def _default_angles(spec: ChannelSpec) -> tuple[float, ...]:
    """Angles on the growing section: receiving mode a quarter turn ahead."""
    if spec.kind.startswith("wave"):
        return (0.0, spec.section_angle)
    return (0.0, 0.0, 0.0, spec.section_angle)


def section_residual(spec: ChannelSpec, angles) -> float:
    """How far the angles are from the invariant growing section (mod 2 pi)."""
    if spec.kind.startswith("wave"):
        value = angles[1] - spec.p * angles[0] - spec.section_angle
    else:
        value = angles[3] - angles[0] + angles[1] - angles[2] - spec.section_angle
    return abs(math.remainder(value, 2 * math.pi))


def integrate_channel(spec: ChannelSpec) -> ChannelOrbit:
    """Traverse the channel from J = epsilon to the target action.

    T0 comes from an adaptive Runge-Kutta integration of the section ODE and
    must match the direct quadrature to 1e-8 relative; disagreement raises.
    """
    target = spec.target
    if spec.epsilon > target * (1 + 1e-12):
        raise ValueError(f"epsilon={spec.epsilon} beyond the channel target {target}")

    lower, upper = diffusion_time_bounds(spec)
    if abs(spec.epsilon - target) <= 1e-15 * target:
        times = np.zeros(1)
        actions = _actions_from_J(spec, np.array([target]))
        return ChannelOrbit(spec, times, actions, 0.0, 0.0, (lower, upper),
                            _default_angles(spec))

    t_max = 1.5 * upper + 1.0

    def rhs(t, y):
        return [channel_field(spec, min(max(y[0], 0.0), _channel_sup(spec)))]

    def hit_target(t, y):
        return y[0] - target

    hit_target.terminal = True
    hit_target.direction = 1
    sol = solve_ivp(rhs, (0.0, t_max), [spec.epsilon], method="DOP853",
                    rtol=1e-10, atol=1e-14 * spec.c, dense_output=True,
                    events=hit_target, max_step=t_max / 50)
    if not sol.t_events[0].size:
        raise RuntimeError("channel orbit did not reach its target action")
    T0 = float(sol.t_events[0][0])
    T0_quad = _quadrature_time(spec)
    if abs(T0 - T0_quad) > QUAD_ODE_RTOL * max(abs(T0_quad), 1e-30):
        raise RuntimeError(
            f"integrator misconfiguration: ODE T0={T0!r} vs quadrature {T0_quad!r}")

    times = np.linspace(0.0, T0, spec.n_samples)
    J = np.clip(sol.sol(times)[0], 0.0, None)
    J[-1] = target
    return ChannelOrbit(spec, times, _actions_from_J(spec, J), T0, T0_quad,
                        (lower, upper), _default_angles(spec))


def _channel_sup(spec: ChannelSpec) -> float:
    return spec.c / spec.p if spec.kind.startswith("wave") else spec.nls_alpha


def _actions_from_J(spec: ChannelSpec, J: np.ndarray) -> np.ndarray:
    if spec.kind.startswith("wave"):
        return np.vstack([spec.c - spec.p * J, J])
    a, b = spec.nls_alpha, spec.nls_beta
    return np.vstack([a - J, b + J, a - J, J])


@dataclass
class TangentialTrajectory:
    """Rescaled lift of channel orbits onto actual Fourier modes.

    Amplitudes are mu^{-1} sqrt(I_j(t / mu^{rho})) e^{i theta_j} with frozen
    angles, where rho = p - 1 for the wave model and 2 for the Schroedinger
    one.
    """

    kind: str  # "wave" | "nls"
    mu: float
    time_scale: float
    orbits: tuple[ChannelOrbit, ...]
    mode_actions: dict[int, np.ndarray] = field(repr=False)
    mode_angles: dict[int, float]
    times: np.ndarray = field(repr=False)
    T0: float
    # hold the endpoint for queries past the traversal (post-drift display)
    clamp_overrun: bool = False

    @property
    def T_rescaled(self) -> float:
        return self.time_scale * self.T0

    @property
    def modes(self) -> tuple[int, ...]:
        return tuple(sorted(self.mode_actions))

    def action_at(self, j: int, t_phys: float) -> float:
        t_model = self._model_time(t_phys)
        return float(np.interp(t_model, self.times, self.mode_actions[j])) / self.mu ** 2

    def state_at(self, t_phys: float, j_max: int) -> SpectralState:
        t_model = self._model_time(t_phys)
        state = SpectralState.zero(j_max, frame=Frame.ROTATING, time=t_phys)
        amps = state.amplitudes
        for j, series in self.mode_actions.items():
            action = np.interp(t_model, self.times, series)
            amps[j + j_max] = math.sqrt(max(action, 0.0)) / self.mu * \
                np.exp(1j * self.mode_angles[j])
        return state

    def _model_time(self, t_phys: float) -> float:
        t_model = t_phys / self.time_scale
        if t_model < -1e-12 or t_model > self.T0 * (1 + 1e-9) + 1e-12:
            if self.clamp_overrun and t_model > 0:
                return self.T0
            raise ValueError(f"time {t_phys} outside the trajectory span [0, {self.T_rescaled}]")
        return min(max(t_model, 0.0), self.T0)


def lift_and_rescale(orbit: ChannelOrbit, mu: float,
                     initial_angles: dict[int, float] | None = None,
                     tangential: tuple[int, ...] | None = None,
                     mirror_orbit: ChannelOrbit | None = None) -> TangentialTrajectory:
    """Lift channel actions to complex tangential amplitudes and rescale by mu.

    For a wave channel the mirrored channel on the opposite modes is excited
    as well (pass ``mirror_orbit`` to use different parameters; by default the
    same orbit is reflected).  For the Schroedinger channel ``tangential``
    names the four modes (k1, k2, k3, k4) the slots map onto.
    """
    if mu < 1:
        raise ValueError("mu must be >= 1")
    spec = orbit.spec
    if spec.kind.startswith("wave"):
        p = spec.p
        time_scale = mu ** (p - 1)
        sign = 1 if spec.kind == "wave_plus" else -1
        mirror = mirror_orbit if mirror_orbit is not None else orbit
        if mirror is not orbit and (len(mirror.times) != len(orbit.times)
                                    or not np.allclose(mirror.times, orbit.times)):
            raise ValueError("mirror orbit must share the time grid of the main orbit")
        if mirror.spec.kind == spec.kind:
            mirror_sign = -sign
        else:
            mirror_sign = 1 if mirror.spec.kind == "wave_plus" else -1
        angles = dict(initial_angles or {})
        for s, orb in ((sign, orbit), (mirror_sign, mirror)):
            angles.setdefault(s * 1, 0.0)
            angles.setdefault(s * p, p * angles[s * 1] + spec.section_angle)
        for s, orb in ((sign, orbit), (mirror_sign, mirror)):
            residual = abs(math.remainder(
                angles[s * p] - p * angles[s * 1] - spec.section_angle, 2 * math.pi))
            if residual > 1e-9:
                raise ValueError("initial angles violate the invariant-section condition")
        mode_actions = {sign * 1: orbit.actions[0], sign * p: orbit.actions[1],
                        mirror_sign * 1: mirror.actions[0], mirror_sign * p: mirror.actions[1]}
        mode_angles = {j: angles[j] for j in mode_actions}
        return TangentialTrajectory("wave", mu, time_scale, (orbit, mirror),
                                    mode_actions, mode_angles, orbit.times, orbit.T0)

    if tangential is None:
        raise ValueError("the nls lift needs the tangential modes (k1, k2, k3, k4)")
    k1, k2, k3, k4 = tangential
    time_scale = mu ** 2
    if initial_angles is None:
        defaults = _default_angles(spec)
        initial_angles = {k1: defaults[0], k2: defaults[1], k3: defaults[2], k4: defaults[3]}
    theta = (initial_angles[k1], initial_angles[k2], initial_angles[k3], initial_angles[k4])
    if section_residual(spec, theta) > 1e-9:
        raise ValueError("initial angles violate the invariant-section condition")
    mode_actions = {k1: orbit.actions[0], k2: orbit.actions[1],
                    k3: orbit.actions[2], k4: orbit.actions[3]}
    mode_angles = dict(initial_angles)
    return TangentialTrajectory("nls", mu, time_scale, (orbit,),
                                mode_actions, mode_angles, orbit.times, orbit.T0)


def model_vector_field(kind: str, amps: dict[int, complex], p: int | None = None,
                       tangential: tuple[int, ...] | None = None) -> dict[int, complex]:
    """Resonant vector field on the tangential complex amplitudes.

    Used for cross-checks: the rescaled lift must be an exact orbit of this
    field, and it is homogeneous of degree p (or 3) so rescaling amplitudes by
    1/mu slows it by mu^{p-1} (mu^2).
    """
    if kind == "wave":
        lam = wave_coupling(p)
        out = {j: 0.0 + 0.0j for j in amps}
        for sign in (1, -1):
            lo, hi = sign * 1, sign * p
            if lo in amps and hi in amps:
                out[lo] += 1j * (lam / 2) * p * np.conj(amps[lo]) ** (p - 1) * amps[hi]
                out[hi] += 1j * (lam / 2) * amps[lo] ** p
        return out
    k1, k2, k3, k4 = tangential
    r1, r2, r3, r4 = amps[k1], amps[k2], amps[k3], amps[k4]
    return {
        k1: 1j * r2 * np.conj(r3) * r4,
        k2: 1j * r1 * np.conj(r4) * r3,
        k3: 1j * r2 * np.conj(r1) * r4,
        k4: 1j * r1 * np.conj(r2) * r3,
    }
