"""Fourier-side state representation for Hamiltonian PDEs on the circle.

Everything here works with finitely truncated spectra: a state is a dense
complex array over the mode window [-j_max, j_max].  The two equations share
this layer; they differ only in how the convolution potential feeds into the
linear frequencies (second-order in time for the wave system, first-order for
the Schroedinger one).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

SQRT2 = math.sqrt(2.0)


class Frame(enum.Enum):
    """Whether amplitudes carry the linear rotation or have it removed."""

    LAB = "lab"
    ROTATING = "rotating"


@dataclass(frozen=True)
class ModeSet:
    """Galerkin window [-j_max, j_max] plus the distinguished tangential modes."""

    j_max: int
    tangential: tuple[int, ...]

    def __post_init__(self):
        if self.j_max < 1:
            raise ValueError("j_max must be a positive integer")
        if len(set(self.tangential)) != len(self.tangential):
            raise ValueError("tangential set contains duplicates")
        for j in self.tangential:
            if abs(j) > self.j_max:
                raise ValueError(f"tangential mode {j} outside [-{self.j_max}, {self.j_max}]")

    @property
    def size(self) -> int:
        return 2 * self.j_max + 1

    def modes(self) -> np.ndarray:
        return np.arange(-self.j_max, self.j_max + 1)

    def normal_modes(self) -> list[int]:
        tang = set(self.tangential)
        return [j for j in range(-self.j_max, self.j_max + 1) if j not in tang]

    def index(self, j: int) -> int:
        if abs(j) > self.j_max:
            raise ValueError(f"mode {j} outside window [-{self.j_max}, {self.j_max}]")
        return j + self.j_max


@dataclass(frozen=True)
class PotentialSpectrum:
    """Finitely supported real Fourier data of a convolution potential.

    ``coefficients`` stores the exponential-basis values, i.e. cos(k x) is
    split as half weight on +k and half on -k.  The effective dispersion
    shift of mode j combines both signed coefficients, so ``multiplier``
    is the quantity entering the frequency relation.
    """

    coefficients: dict[int, float]

    def __post_init__(self):
        for j, v in self.coefficients.items():
            if not isinstance(j, int):
                raise ValueError("mode indices must be integers")
            if not np.isfinite(v):
                raise ValueError("potential coefficients must be finite reals")

    def value(self, j: int) -> float:
        return self.coefficients.get(j, 0.0)

    def multiplier(self, j: int) -> float:
        if j == 0:
            return self.value(0)
        return self.value(j) + self.value(-j)


def potential_wave(p: int) -> PotentialSpectrum:
    """Convolution potential whose cosine peaks sit on modes 0, 1 and p.

    The weights are chosen so the dispersion relation omega(j)^2 = j^2 +
    multiplier(j) doubles the tangential frequencies: multiplier(j) = j^2 on
    {1, p}, hence omega = sqrt(2)|j| there.
    """
    if p < 2 or p % 2 != 0:
        raise ValueError(f"nonlinearity degree p={p} rejected: p must be an even integer >= 2")
    return PotentialSpectrum({0: 1.0, 1: 0.5, -1: 0.5, p: p * p / 2.0, -p: p * p / 2.0})


@dataclass(frozen=True)
class FrequencyTable:
    """Linear oscillation frequencies over the mode window.

    ``gamma``/``tau`` carry the diophantine data certifying the small-divisor
    lower bounds: for the wave table tau is 1 (|sqrt(2) n + m| >= gamma / n),
    for the Schroedinger table the exponent of <l>^tau.
    """

    kind: str  # "wave" | "nls"
    j_max: int
    omega: np.ndarray = field(repr=False)
    gamma: float
    tau: float
    tangential: tuple[int, ...]
    p: int | None = None
    N: int | None = None
    q: tuple[float, float, float] | None = None
    potential: PotentialSpectrum | None = None

    def __post_init__(self):
        if self.omega.shape != (2 * self.j_max + 1,):
            raise ValueError("omega array does not match the mode window")
        off_zero = np.delete(self.omega, self.j_max)
        if np.any(off_zero <= 0) or self.omega[self.j_max] < 0:
            # j = 0 carries omega = j^2 = 0 in the Schroedinger table; every
            # other frequency must be strictly positive.
            raise ValueError("frequencies must be positive away from j = 0")
        if not (0 < self.gamma < 1):
            raise ValueError("gamma must lie in (0, 1)")

    def omega_of(self, j: int) -> float:
        if abs(j) > self.j_max:
            raise ValueError(f"frequency table has no mode {j} (window [-{self.j_max}, {self.j_max}])")
        return float(self.omega[j + self.j_max])

    def mode_set(self) -> ModeSet:
        return ModeSet(self.j_max, self.tangential)

    def with_j_max(self, j_max: int) -> "FrequencyTable":
        """Re-tabulate the same dispersion law on a wider or narrower window."""
        if self.kind == "wave":
            return frequencies_wave(self.p, j_max=j_max, gamma=self.gamma)
        return frequencies_nls(ModeSet(j_max, self.tangential), self.q,
                               gamma=self.gamma, tau=self.tau, N=self.N)


def frequencies_wave(p: int, j_max: int | None = None, gamma: float | None = None,
                     gamma_search_bound: int = 10_000) -> FrequencyTable:
    """Frequency table for the wave system: 1 at j=0, sqrt(2)|j| on {+-1, +-p}, |j| else."""
    if p < 2 or p % 2 != 0:
        raise ValueError(f"nonlinearity degree p={p} rejected: p must be an even integer >= 2")
    if j_max is None:
        j_max = 4 * p
    tangential = (-p, -1, 1, p)
    if max(abs(j) for j in tangential) > j_max:
        raise ValueError("j_max too small to contain the tangential set")
    if gamma is None:
        from .diophantine import compute_gamma_sqrt2

        gamma = compute_gamma_sqrt2(gamma_search_bound).gamma
    js = np.arange(-j_max, j_max + 1)
    omega = np.abs(js).astype(float)
    omega[j_max] = 1.0  # j = 0
    for j in tangential:
        omega[j + j_max] = SQRT2 * abs(j)
    pot = potential_wave(p)
    table = FrequencyTable(kind="wave", j_max=j_max, omega=omega, gamma=gamma, tau=1.0,
                           tangential=tangential, p=p, potential=pot)
    # dispersion consistency: omega(j)^2 = j^2 + multiplier(j)
    for j in (0, 1, p, min(3, j_max)):
        expected = math.sqrt(j * j + pot.multiplier(j))
        assert abs(table.omega_of(j) - expected) < 1e-12
    return table


def frequencies_nls(modes: ModeSet, q: tuple[float, float, float],
                    gamma: float, tau: float, N: int | None = None) -> FrequencyTable:
    """Frequency table for the Schroedinger system.

    The tangential set is (k1, k2, k3, k4) with k4 = k1 - k2 + k3 + N; the
    potential shifts those four modes so their frequencies are q1, q2, q3 and
    q1 - q2 + q3, while every other mode keeps omega(j) = j^2.
    """
    if len(modes.tangential) != 4:
        raise ValueError("the tangential set must have exactly four modes (k1, k2, k3, k4)")
    k1, k2, k3, k4 = modes.tangential
    if not (k1 > 0 and k3 > 0 and k2 < 0):
        raise ValueError(f"tangential set {(k1, k2, k3, k4)} rejected: need k1, k3 > 0 and k2 < 0")
    if N is None:
        N = k4 - (k1 - k2 + k3)
    if k4 != k1 - k2 + k3 + N:
        raise ValueError(f"tangential set rejected: k4 must equal k1 - k2 + k3 + N = {k1 - k2 + k3 + N}")
    if N < 1:
        raise ValueError("the cosine wavenumber N must be a positive integer")
    q = tuple(float(x) for x in q)
    if len(q) != 3 or any(not (1.0 <= x <= 2.0) for x in q):
        raise ValueError("q must be a 3-vector with entries in [1, 2]")
    js = np.arange(-modes.j_max, modes.j_max + 1)
    omega = (js.astype(float)) ** 2
    tang_omega = {k1: q[0], k2: q[1], k3: q[2], k4: q[0] - q[1] + q[2]}
    pot = {k: w - k * k for k, w in tang_omega.items()}
    for k, w in tang_omega.items():
        omega[k + modes.j_max] = w
    return FrequencyTable(kind="nls", j_max=modes.j_max, omega=omega, gamma=gamma, tau=tau,
                          tangential=modes.tangential, N=N, q=q,
                          potential=PotentialSpectrum(pot))


@dataclass(frozen=True)
class SpectralState:
    """Truncated complex Fourier amplitudes with a frame tag and timestamp."""

    amplitudes: np.ndarray = field(repr=False)
    j_max: int
    frame: Frame = Frame.LAB
    time: float = 0.0

    def __post_init__(self):
        if self.amplitudes.shape != (2 * self.j_max + 1,):
            raise ValueError("amplitude array does not match the mode window")

    @classmethod
    def zero(cls, j_max: int, frame: Frame = Frame.LAB, time: float = 0.0) -> "SpectralState":
        return cls(np.zeros(2 * j_max + 1, dtype=complex), j_max, frame, time)

    @classmethod
    def from_modes(cls, j_max: int, values: dict[int, complex],
                   frame: Frame = Frame.LAB, time: float = 0.0) -> "SpectralState":
        amps = np.zeros(2 * j_max + 1, dtype=complex)
        for j, v in values.items():
            if abs(j) > j_max:
                raise ValueError(f"mode {j} outside window [-{j_max}, {j_max}]")
            amps[j + j_max] = v
        return cls(amps, j_max, frame, time)

    def amplitude(self, j: int) -> complex:
        if abs(j) > self.j_max:
            return 0.0 + 0.0j
        return complex(self.amplitudes[j + self.j_max])

    def action(self, j: int) -> float:
        return abs(self.amplitude(j)) ** 2

    def modes(self) -> np.ndarray:
        return np.arange(-self.j_max, self.j_max + 1)

    def with_amplitudes(self, amplitudes: np.ndarray, time: float | None = None,
                        frame: Frame | None = None) -> "SpectralState":
        return SpectralState(amplitudes, self.j_max,
                             self.frame if frame is None else frame,
                             self.time if time is None else time)


def sobolev_norm(state: SpectralState, s: float) -> float:
    """H^s norm (sum of |z_j|^2 <j>^{2s})^{1/2} with <j> = max(1, |j|)."""
    js = np.abs(state.modes()).astype(float)
    weights = np.maximum(1.0, js) ** (2.0 * s)
    return float(np.sqrt(np.sum(weights * np.abs(state.amplitudes) ** 2)))


def ell1_norm(state: SpectralState) -> float:
    return float(np.sum(np.abs(state.amplitudes)))


def momentum(state: SpectralState) -> float:
    """Conserved quantity sum_j j |z_j|^2 (real-valued convention)."""
    js = state.modes().astype(float)
    return float(np.sum(js * np.abs(state.amplitudes) ** 2))


def mass(state: SpectralState) -> float:
    return float(np.sum(np.abs(state.amplitudes) ** 2))


def is_conjugate_symmetric(state: SpectralState, tol: float = 1e-12) -> bool:
    """True when the state is the spectrum of a real-valued field."""
    a = state.amplitudes
    return bool(np.max(np.abs(a - np.conj(a[::-1]))) <= tol * max(1.0, np.max(np.abs(a))))


def to_complex_coords(u: SpectralState, v: SpectralState, freq: FrequencyTable) -> SpectralState:
    """Map real fields (u, v) to the first complex coordinate z+.

    z+_j = (omega(j)^{1/2} u_j - i omega(j)^{-1/2} v_j) / sqrt(2); the second
    coordinate is the conjugate on the real subspace and is not stored.
    """
    if u.j_max != v.j_max:
        raise ValueError("u and v live on different mode windows")
    if u.j_max > freq.j_max:
        raise ValueError(f"frequency table missing mode {u.j_max} needed by the state support")
    half = np.array([math.sqrt(freq.omega_of(j)) for j in u.modes()])
    amps = (half * u.amplitudes - 1j * v.amplitudes / half) / SQRT2
    return SpectralState(amps, u.j_max, Frame.LAB, u.time)


def from_complex_coords(zplus: SpectralState, freq: FrequencyTable) -> tuple[SpectralState, SpectralState]:
    """Inverse of :func:`to_complex_coords` on the real subspace."""
    if zplus.j_max > freq.j_max:
        raise ValueError(f"frequency table missing mode {zplus.j_max} needed by the state support")
    half = np.array([math.sqrt(freq.omega_of(j)) for j in zplus.modes()])
    z = zplus.amplitudes
    zbar_rev = np.conj(z[::-1])  # entry j holds conj(z_{-j})
    u = (z + zbar_rev) / (SQRT2 * half)
    v = 1j * half * (z - zbar_rev) / SQRT2
    mk = lambda a: SpectralState(a, zplus.j_max, Frame.LAB, zplus.time)
    return mk(u), mk(v)
