"""Brute-force resonance combinatorics for the truncated Hamiltonians.

Monomials z^alpha zbar^beta are enumerated exhaustively over the tangential
set plus a bounded window of normal modes, filtered by momentum, and their
frequency divisors Omega(alpha, beta) = sum_j omega(j) (alpha_j - beta_j) are
tracked exactly: as integer pairs (n, m) with Omega = sqrt(2) n + m for the
wave table, and as (l, k) with Omega = q . l + k for the Schroedinger table.
Resonance is the vanishing of the exact representation, never a float test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .diophantine import DiophantineCertificate, check_q_vector, compute_gamma_sqrt2, find_q_vector  # noqa: F401
from .spectral import SQRT2, FrequencyTable, ModeSet, frequencies_wave

CANDIDATE_CAP = 10_000_000


@dataclass(frozen=True)
class Monomial:
    """Sparse multi-index pair with cached degree, momentum and divisor.

    ``alpha``/``beta`` are canonically sorted ((mode, exponent), ...) tuples;
    ``divisor_exact`` is ("sqrt2", n, m) or ("qvec", (l1, l2, l3), k).
    """

    alpha: tuple[tuple[int, int], ...]
    beta: tuple[tuple[int, int], ...]
    degree: int
    momentum_pi: int
    divisor_omega: float
    divisor_exact: tuple
    coefficient: float

    @property
    def resonant(self) -> bool:
        tag = self.divisor_exact[0]
        if tag == "sqrt2":
            return self.divisor_exact[1] == 0 and self.divisor_exact[2] == 0
        l, k = self.divisor_exact[1], self.divisor_exact[2]
        return l == (0, 0, 0) and k == 0

    def normal_count(self, tangential) -> int:
        tang = set(tangential)
        return sum(e for j, e in self.alpha if j not in tang) + \
            sum(e for j, e in self.beta if j not in tang)

    def conjugate(self) -> "Monomial":
        tag = self.divisor_exact[0]
        if tag == "sqrt2":
            exact = ("sqrt2", -self.divisor_exact[1], -self.divisor_exact[2])
        else:
            l = tuple(-x for x in self.divisor_exact[1])
            exact = ("qvec", l, -self.divisor_exact[2])
        return Monomial(self.beta, self.alpha, self.degree, -self.momentum_pi,
                        -self.divisor_omega, exact, self.coefficient)

    def key(self):
        return (self.alpha, self.beta)


def monomial_momentum(alpha, beta) -> int:
    """Independent recomputation of pi(alpha, beta) = sum_j j (alpha_j - beta_j)."""
    return sum(j * e for j, e in alpha) - sum(j * e for j, e in beta)


def monomial_degree(alpha, beta) -> int:
    return sum(e for _, e in alpha) + sum(e for _, e in beta)


def monomial_divisor(alpha, beta, freq: FrequencyTable) -> float:
    return sum(freq.omega_of(j) * e for j, e in alpha) - \
        sum(freq.omega_of(j) * e for j, e in beta)


@dataclass(frozen=True)
class MonomialClass:
    """Monomials of fixed degree sorted by how many normal-mode factors they carry."""

    degree: int
    normal_count: int
    selector: str = "exactly_k"

    def __post_init__(self):
        if self.selector not in ("exactly_k", "at_most_k", "at_least_k"):
            raise ValueError(f"unknown selector {self.selector!r}")
        if not (0 <= self.normal_count <= self.degree):
            raise ValueError("normal_count must lie in [0, degree]")

    def counts(self) -> list[int]:
        if self.selector == "exactly_k":
            return [self.normal_count]
        if self.selector == "at_most_k":
            return list(range(0, self.normal_count + 1))
        return list(range(self.normal_count, self.degree + 1))


@dataclass(frozen=True)
class EnumerationFilters:
    """Filters applied during enumeration.

    ``momentum_zero`` keeps pi(alpha, beta) = 0 (the wave Hamiltonian
    support); ``momentum_targets`` overrides it with an explicit allowed set,
    e.g. (-N, N) for the Schroedinger quartic whose monomials carry momentum
    +-N.  ``balanced`` restricts to |alpha| = |beta| (gauge-invariant
    nonlinearity).  ``resonant`` True keeps only exact resonances, False only
    non-resonances, None keeps both.
    """

    momentum_zero: bool = True
    resonant: bool | None = None
    divisor_tolerance: float = 1e-9
    momentum_targets: tuple[int, ...] | None = None
    balanced: bool = False

    def targets(self):
        if self.momentum_targets is not None:
            return self.momentum_targets
        return (0,) if self.momentum_zero else None


def nls_hamiltonian_filters(N: int, resonant: bool | None = None) -> EnumerationFilters:
    """Filters selecting monomials actually present in the cos(Nx)|u|^2 u quartic."""
    return EnumerationFilters(momentum_zero=False, resonant=resonant,
                              momentum_targets=(-N, N), balanced=True)


def _compositions(total: int, slots: int):
    """All tuples of `slots` nonnegative integers summing to `total`."""
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


def _count_compositions(total: int, slots: int) -> int:
    return math.comb(total + slots - 1, slots - 1)


def _wave_sqrt2_parts(mode: int, freq: FrequencyTable) -> tuple[int, int]:
    """Decompose omega(mode) of the wave table as sqrt(2)*n + m with integers."""
    if mode in freq.tangential:
        return abs(mode), 0
    if mode == 0:
        return 0, 1
    return 0, abs(mode)


def _nls_q_parts(mode: int, freq: FrequencyTable) -> tuple[tuple[int, int, int], int]:
    """Decompose omega(mode) of the nls table as q . l + k with integer data."""
    k1, k2, k3, k4 = freq.tangential
    if mode == k1:
        return (1, 0, 0), 0
    if mode == k2:
        return (0, 1, 0), 0
    if mode == k3:
        return (0, 0, 1), 0
    if mode == k4:
        return (1, -1, 1), 0
    return (0, 0, 0), mode * mode


def _exact_divisor(alpha, beta, freq: FrequencyTable):
    if freq.kind == "wave":
        n = m = 0
        for j, e in alpha:
            nj, mj = _wave_sqrt2_parts(j, freq)
            n += nj * e
            m += mj * e
        for j, e in beta:
            nj, mj = _wave_sqrt2_parts(j, freq)
            n -= nj * e
            m -= mj * e
        return ("sqrt2", n, m), SQRT2 * n + m
    l = [0, 0, 0]
    k = 0
    for j, e in alpha:
        lj, kj = _nls_q_parts(j, freq)
        l = [a + b * e for a, b in zip(l, lj)]
        k += kj * e
    for j, e in beta:
        lj, kj = _nls_q_parts(j, freq)
        l = [a - b * e for a, b in zip(l, lj)]
        k -= kj * e
    q = freq.q
    return ("qvec", tuple(l), k), q[0] * l[0] + q[1] * l[1] + q[2] * l[2] + k


def _hamiltonian_coefficient(alpha, beta, freq: FrequencyTable) -> float:
    """Coefficient data attached to an enumerated monomial.

    Wave: the multinomial C = degree!/(alpha! beta!) prod omega(j)^{-(a_j+b_j)/2}.
    Schroedinger quartic: the count of ordered convolution quadruples realizing
    the monomial, normalized so the distinct-index resonant pair has weight 1.
    """
    if freq.kind == "wave":
        deg = monomial_degree(alpha, beta)
        value = float(math.factorial(deg))
        for j, e in itertools.chain(alpha, beta):
            value /= math.factorial(e)
            value *= freq.omega_of(j) ** (-e / 2.0)
        return value
    na = sum(e for _, e in alpha)
    nb = sum(e for _, e in beta)
    if na != 2 or nb != 2:
        return float("nan")
    orderings = math.factorial(na) * math.factorial(nb)
    for _, e in itertools.chain(alpha, beta):
        orderings //= math.factorial(e)
    return orderings / 4.0


def _normal_slot_pairs(normal_modes, count: int):
    """Multisets of `count` signed normal factors; sign 0 -> alpha, 1 -> beta."""
    slots = [(j, side) for j in normal_modes for side in (0, 1)]
    return itertools.combinations_with_replacement(slots, count)


def _estimate_candidates(mclass: MonomialClass, n_tang_slots: int, n_normal: int) -> int:
    total = 0
    for k in mclass.counts():
        t = mclass.degree - k
        if t < 0:
            continue
        tangential_count = _count_compositions(t, n_tang_slots)
        normal_count = math.comb(2 * n_normal + k - 1, k) if k else 1
        total += tangential_count * normal_count
    return total


def enumerate_monomials(mclass: MonomialClass, modes: ModeSet, freq: FrequencyTable,
                        filters: EnumerationFilters | None = None) -> list[Monomial]:
    """Exhaustive, deterministic enumeration of a monomial class.

    The support is the tangential set plus (when the class admits normal
    factors) every normal mode in the window.  Output is sorted
    lexicographically on the (alpha, beta) representation.
    """
    if filters is None:
        filters = EnumerationFilters()
    if mclass.degree > 12 and max(mclass.counts()) > 1:
        raise ValueError("combinatorial guard: need degree <= 12 or normal_count <= 1")
    tangential = sorted(modes.tangential)
    normal_modes = modes.normal_modes()
    n_slots = 2 * len(tangential)
    estimate = _estimate_candidates(mclass, n_slots, len(normal_modes))
    if estimate > CANDIDATE_CAP:
        raise ValueError(f"combinatorial guard: {estimate} candidates exceed the cap {CANDIDATE_CAP}")
    if filters.divisor_tolerance <= 0:
        raise ValueError("divisor_tolerance must be positive")

    targets = filters.targets()
    out = []
    seen = set()
    for k in mclass.counts():
        t = mclass.degree - k
        if t < 0:
            continue
        for comp in _compositions(t, n_slots):
            alpha_t = {tangential[i]: comp[i] for i in range(len(tangential)) if comp[i]}
            beta_t = {tangential[i]: comp[len(tangential) + i]
                      for i in range(len(tangential)) if comp[len(tangential) + i]}
            if k == 0:
                _emit(alpha_t, beta_t, mclass, freq, filters, targets, out, seen)
                continue
            for combo in _normal_slot_pairs(normal_modes, k):
                alpha = dict(alpha_t)
                beta = dict(beta_t)
                for j, side in combo:
                    d = alpha if side == 0 else beta
                    d[j] = d.get(j, 0) + 1
                _emit(alpha, beta, mclass, freq, filters, targets, out, seen)
    out.sort(key=Monomial.key)
    return out


def _emit(alpha_map, beta_map, mclass, freq, filters, targets, out, seen):
    alpha = tuple(sorted(alpha_map.items()))
    beta = tuple(sorted(beta_map.items()))
    if (alpha, beta) in seen:
        return
    if filters.balanced:
        if sum(e for _, e in alpha) != sum(e for _, e in beta):
            return
    pi = monomial_momentum(alpha, beta)
    if targets is not None and pi not in targets:
        return
    exact, omega_float = _exact_divisor(alpha, beta, freq)
    if exact[0] == "sqrt2":
        is_res = exact[1] == 0 and exact[2] == 0
    else:
        is_res = exact[1] == (0, 0, 0) and exact[2] == 0
    if filters.resonant is True and not is_res:
        return
    if filters.resonant is False and is_res:
        return
    if filters.resonant is True and abs(omega_float) > filters.divisor_tolerance:
        # exact bookkeeping and the float value must agree on resonance
        raise AssertionError("exact resonance with non-small float divisor")
    seen.add((alpha, beta))
    out.append(Monomial(alpha, beta, monomial_degree(alpha, beta), pi, omega_float,
                        exact, _hamiltonian_coefficient(alpha, beta, freq)))


def min_divisor(mclass: MonomialClass, modes: ModeSet, freq: FrequencyTable,
                filters: EnumerationFilters | None = None) -> tuple[float, Monomial]:
    """Minimum |Omega| over the non-resonant members of a class, with witness."""
    if filters is None:
        filters = EnumerationFilters()
    filters = EnumerationFilters(momentum_zero=filters.momentum_zero, resonant=False,
                                 divisor_tolerance=filters.divisor_tolerance,
                                 momentum_targets=filters.momentum_targets,
                                 balanced=filters.balanced)
    monomials = enumerate_monomials(mclass, modes, freq, filters)
    if not monomials:
        raise ValueError("class has no non-resonant members to minimize over")
    witness = min(monomials, key=lambda m: abs(m.divisor_omega))
    return abs(witness.divisor_omega), witness


def monomial_coefficient(monomial: Monomial, p: int, freq: FrequencyTable) -> float:
    """Wave interaction coefficient (p+1)!/(alpha! beta!) prod omega^{-(a+b)/2}."""
    if monomial.degree != p + 1:
        raise ValueError(f"degree {monomial.degree} does not match p+1 = {p + 1}")
    return _hamiltonian_coefficient(monomial.alpha, monomial.beta, freq)


def wave_resonant_set(p: int) -> list[tuple[tuple, tuple]]:
    """Closed-form resonant support of the degree p+1 tangential class."""
    pairs = []
    for sign in (1, -1):
        lo, hi = sign * 1, sign * p
        pairs.append((((lo, p),), ((hi, 1),)))
        pairs.append((((hi, 1),), ((lo, p),)))
    return sorted(pairs)


def normal_form_generator(p: int, freq: FrequencyTable | None = None,
                          j_max: int | None = None, weighted: bool = True
                          ) -> list[tuple[Monomial, complex]]:
    """One normal-form step: generator coefficients on the degree p+1 classes.

    For non-resonant (alpha, beta) with at most one normal factor the
    generator solves the homological equation, F = -i C / (Omega (p+1)
    sqrt(2)^{p+1}); resonant monomials get coefficient zero.  ``weighted``
    keeps the omega^{-1/2} factors inside C; the normalized variant used by
    the integrator's Hamiltonian drops them.
    """
    if p % 2 != 0 or p < 2:
        raise ValueError("p must be an even integer >= 2")
    if p > 8:
        raise ValueError("desk-scale guard: normal-form generator limited to p <= 8")
    if freq is None:
        freq = frequencies_wave(p, j_max=j_max)
    modes = freq.mode_set()
    mclass = MonomialClass(p + 1, 1, "at_most_k")
    monomials = enumerate_monomials(mclass, modes, freq, EnumerationFilters())
    gamma = freq.gamma
    floor = gamma / p ** 2
    norm = math.sqrt(2.0) ** (p + 1) * (p + 1)
    terms = []
    for mono in monomials:
        if mono.resonant:
            terms.append((mono, 0.0 + 0.0j))
            continue
        if abs(mono.divisor_omega) < floor * (1 - 1e-12):
            raise ValueError(
                f"divisor {mono.divisor_omega} below gamma/p^2 = {floor}: diophantine setup broken")
        coeff = mono.coefficient if weighted else _unweighted_coefficient(mono)
        terms.append((mono, -1j * coeff / (mono.divisor_omega * norm)))
    return terms


def _unweighted_coefficient(mono: Monomial) -> float:
    value = float(math.factorial(mono.degree))
    for _, e in itertools.chain(mono.alpha, mono.beta):
        value /= math.factorial(e)
    return value


# ---------------------------------------------------------------------------
# Polynomial evaluation helpers (used by the generator flow and by tests that
# verify the homological equation as an identity at sample points).
# ---------------------------------------------------------------------------

def poly_value(terms, z: np.ndarray, j_max: int) -> complex:
    """Evaluate sum c * z^alpha conj(z)^beta at a complex amplitude vector."""
    zb = np.conj(z)
    total = 0.0 + 0.0j
    for mono, c in terms:
        if c == 0:
            continue
        value = c
        for j, e in mono.alpha:
            value *= z[j + j_max] ** e
        for j, e in mono.beta:
            value *= zb[j + j_max] ** e
        total += value
    return total


def poly_gradient_zbar(terms, z: np.ndarray, j_max: int) -> np.ndarray:
    """d/d conj(z_j) of the polynomial, as a dense array over the window."""
    zb = np.conj(z)
    grad = np.zeros_like(z)
    for mono, c in terms:
        if c == 0:
            continue
        base = c
        for j, e in mono.alpha:
            base *= z[j + j_max] ** e
        for j, e in mono.beta:
            prefactor = base * e
            for jj, ee in mono.beta:
                prefactor *= zb[jj + j_max] ** (ee - 1 if jj == j else ee)
            grad[j + j_max] += prefactor
    return grad


def poly_gradient_z(terms, z: np.ndarray, j_max: int) -> np.ndarray:
    zb = np.conj(z)
    grad = np.zeros_like(z)
    for mono, c in terms:
        if c == 0:
            continue
        base = c
        for j, e in mono.beta:
            base *= zb[j + j_max] ** e
        for j, e in mono.alpha:
            prefactor = base * e
            for jj, ee in mono.alpha:
                prefactor *= z[jj + j_max] ** (ee - 1 if jj == j else ee)
            grad[j + j_max] += prefactor
    return grad


def generator_vector_field(terms, z: np.ndarray, j_max: int) -> np.ndarray:
    """Hamiltonian vector field i dF/dzbar of a real generator on the z-chart."""
    return 1j * poly_gradient_zbar(terms, z, j_max)


def hermitian_closure(terms) -> list:
    """Append conjugate monomials so the polynomial is real-valued."""
    out = list(terms)
    keys = {mono.key() for mono, _ in terms}
    for mono, c in terms:
        conj = mono.conjugate()
        if conj.key() not in keys:
            out.append((conj, np.conj(c)))
    out.sort(key=lambda tc: tc[0].key())
    return out
