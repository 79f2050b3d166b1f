"""Small-divisor constants by exhaustive search.

Two certificates are produced: the badly-approximable constant of sqrt(2)
(|sqrt(2) n + m| >= gamma / n) and a frequency 3-vector q in [1, 2]^3 with
|q . l + k| >= gamma / <l>^tau over the finite index range that the degree-4
resonance analysis touches (0 < |l|_1 <= 9).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

SQRT2 = math.sqrt(2.0)

#: The degree-4 classes with at most one normal mode only produce integer
#: combinations q . l with |l|_1 up to 9, so a verified q only needs to be
#: checked on that finite range.
ELL_RANGE = 9


@dataclass(frozen=True)
class DiophantineCertificate:
    """Outcome of a finite small-divisor search.

    ``minimum`` is the smallest normalized divisor found (n |sqrt(2) n + m|,
    or |q . l + k| <l>^tau) and ``witness`` the index tuple achieving it
    exactly; ``gamma`` is the certified lower-bound constant.
    """

    gamma: float
    tau: float
    search_bound: int
    witness: tuple
    minimum: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("a certificate needs gamma > 0")


def compute_gamma_sqrt2(n_bound: int) -> DiophantineCertificate:
    """Exhaustively minimize n |sqrt(2) n + m| over 1 <= n <= n_bound.

    For each n only the nearest integer to -sqrt(2) n can compete, so the
    scan is linear in n_bound.
    """
    if n_bound < 1:
        raise ValueError("n_bound must be >= 1")
    best = math.inf
    witness = (0, 0)
    for n in range(1, n_bound + 1):
        m = -round(SQRT2 * n)
        value = n * abs(SQRT2 * n + m)
        if value < best:
            best = value
            witness = (n, m)
    return DiophantineCertificate(gamma=best, tau=1.0, search_bound=n_bound,
                                  witness=witness, minimum=best)


def _ell_grid(ell_range: int = ELL_RANGE) -> list[tuple[int, int, int]]:
    grid = []
    for l in itertools.product(range(-ell_range, ell_range + 1), repeat=3):
        norm = abs(l[0]) + abs(l[1]) + abs(l[2])
        if 0 < norm <= ell_range:
            grid.append(l)
    return grid


def check_q_vector(q, gamma: float, tau: float,
                   ell_range: int = ELL_RANGE) -> tuple[bool, float, tuple]:
    """Verify |q . l + k| >= gamma / <l>^tau on 0 < |l|_1 <= ell_range.

    Returns (ok, minimum of |q . l + k| <l>^tau, witness (l, k)).  Only the
    integers k nearest to -q . l can violate the bound, so k runs over a
    window of width 2 around the rounded value.
    """
    q = np.asarray(q, dtype=float)
    best = math.inf
    witness = ((0, 0, 0), 0)
    for l in _ell_grid(ell_range):
        dot = float(q[0] * l[0] + q[1] * l[1] + q[2] * l[2])
        norm = abs(l[0]) + abs(l[1]) + abs(l[2])
        k0 = -round(dot)
        for k in (k0 - 1, k0, k0 + 1):
            value = abs(dot + k) * norm ** tau
            if value < best:
                best = value
                witness = (l, k)
    return best >= gamma, best, witness


def find_q_vector(gamma: float, tau: float, trials: int = 200, seed: int = 0,
                  best_of: int = 1, ell_range: int = ELL_RANGE):
    """Rejection-sample q in [1, 2]^3 until the divisor bound verifies.

    With ``best_of`` > 1 the search keeps sampling among verified candidates
    and returns the one with the largest normalized minimum (useful at desk
    scale where a roomy certificate improves model tracking).  Deterministic
    given the seed.
    """
    if not (0 < gamma < 1):
        raise ValueError("gamma must lie in (0, 1)")
    if tau < 0:
        raise ValueError("tau must be >= 0")
    rng = np.random.default_rng(seed)
    best_q = None
    best_cert = None
    found = 0
    for _ in range(trials):
        q = 1.0 + rng.random(3)
        ok, minimum, witness = check_q_vector(q, gamma, tau, ell_range)
        if not ok:
            continue
        found += 1
        if best_cert is None or minimum > best_cert.minimum:
            best_q = tuple(float(x) for x in q)
            best_cert = DiophantineCertificate(gamma=gamma, tau=tau, search_bound=ell_range,
                                               witness=witness, minimum=minimum)
        if found >= best_of:
            break
    if best_q is None:
        raise ValueError(
            f"no q vector verified after {trials} trials; try a smaller gamma than {gamma}")
    return best_q, best_cert
