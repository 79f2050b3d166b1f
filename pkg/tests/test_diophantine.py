import itertools
import math

import numpy as np
import pytest

from modedrift.diophantine import check_q_vector, compute_gamma_sqrt2, find_q_vector

SQRT2 = math.sqrt(2.0)


def brute_force_gamma(n_bound):
    """Oracle: scan a wide window of m for every n instead of just the nearest."""
    best = math.inf
    witness = None
    for n in range(1, n_bound + 1):
        center = int(round(SQRT2 * n))
        for m in range(-center - 3, -center + 4):
            value = n * abs(SQRT2 * n + m)
            if value < best:
                best = value
                witness = (n, m)
    return best, witness


def test_gamma_n_bound_one():
    cert = compute_gamma_sqrt2(1)
    assert cert.gamma == pytest.approx(SQRT2 - 1)
    assert cert.witness == (1, -1)


def test_gamma_n_bound_100_matches_oracle():
    cert = compute_gamma_sqrt2(100)
    oracle_value, oracle_witness = brute_force_gamma(100)
    assert cert.gamma == pytest.approx(oracle_value, rel=0, abs=0)
    assert cert.witness == oracle_witness == (2, -3)
    # frozen oracle value: 2 |2 sqrt(2) - 3| = 6 - 4 sqrt(2)
    assert cert.gamma == pytest.approx(6 - 4 * SQRT2, abs=1e-14)
    assert cert.gamma == pytest.approx(0.34315, abs=5e-6)


def test_gamma_monotone_and_bounded_below():
    bounds = [1, 2, 5, 10, 100, 1000, 10_000]
    values = [compute_gamma_sqrt2(b).gamma for b in bounds]
    for a, b in zip(values, values[1:]):
        assert b <= a + 1e-15
    assert all(v > 0.34 for v in values)
    # minima live on continued-fraction denominators of sqrt(2): 1, 2, 5, 12, ...
    for b in bounds:
        n, m = compute_gamma_sqrt2(b).witness
        assert n in (1, 2, 5, 12, 29, 70, 169, 408, 985, 2378, 5741)


def test_certificate_witness_exact():
    cert = compute_gamma_sqrt2(500)
    n, m = cert.witness
    assert n * abs(SQRT2 * n + m) == cert.minimum


def test_rational_q_fails():
    ok, minimum, witness = check_q_vector((1.0, 1.0, 1.0), gamma=1e-3, tau=2.0)
    assert not ok
    assert minimum == 0.0
    l, k = witness
    # some integer combination vanishes identically, e.g. l = (1, -1, 0), k = 0
    assert l[0] + l[1] * 1.0 + l[2] == pytest.approx(-k)


def test_find_q_vector_deterministic_and_verified():
    q1, cert1 = find_q_vector(1e-3, 2.0, trials=200, seed=42)
    q2, cert2 = find_q_vector(1e-3, 2.0, trials=200, seed=42)
    assert q1 == q2
    assert cert1.minimum == cert2.minimum
    assert all(1.0 <= x <= 2.0 for x in q1)
    ok, minimum, witness = check_q_vector(q1, 1e-3, 2.0)
    assert ok and minimum >= 1e-3
    assert minimum == cert1.minimum


def test_certificate_independent_loop_order():
    # reversed-order oracle must find the same minimum
    q, cert = find_q_vector(1e-3, 2.0, trials=200, seed=3)
    best = math.inf
    for l in reversed(list(itertools.product(range(-9, 10), repeat=3))):
        norm = sum(abs(x) for x in l)
        if not (0 < norm <= 9):
            continue
        dot = float(np.dot(q, l))
        for k in range(int(-abs(dot)) - 2, int(abs(dot)) + 3):
            best = min(best, abs(dot + k) * norm ** 2.0)
    assert best == pytest.approx(cert.minimum, rel=0, abs=0)


def test_find_q_vector_error_when_gamma_too_large():
    with pytest.raises(ValueError, match="smaller gamma"):
        find_q_vector(0.99, 0.0, trials=50, seed=0)
