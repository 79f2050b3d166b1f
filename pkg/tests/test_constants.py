import math

import pytest

from modedrift.constants import (
    constants_table,
    evaluate_constants,
    f_gamma_log,
    growth_scale_inequality_holds,
)


def test_c1_exact_value_p4():
    consts = evaluate_constants(4, gamma=0.34)
    assert consts.C1 == 7_372_800
    assert consts.C1 == 2 ** 3 * 4 ** 3 * math.factorial(5) ** 2


def test_rescaling_exponent_p4():
    consts = evaluate_constants(4, gamma=0.34)
    assert consts.a == 4 * math.factorial(4) * 4 ** 5 == 98_304
    # dominant term of log10 mu0 at gamma -> 1: a log10(4)
    dominant = consts.a * math.log10(4.0)
    assert dominant == pytest.approx(59_184.905, abs=0.01)
    assert consts.log_mu0 == pytest.approx(consts.a * math.log(4) - consts.b * math.log(0.34))


def test_sigma_exponents():
    consts = evaluate_constants(4, gamma=0.34)
    assert consts.sigma1 == 5.0
    assert consts.sigma2 == 4.5
    for p in (2, 6, 12):
        c = evaluate_constants(p, gamma=0.34)
        assert c.sigma1 == 0.75 * p + 2
        assert c.sigma2 == c.sigma1 - 0.5


def test_b_sign_flags_paper_regime():
    assert evaluate_constants(4, 0.3).b == -1.0
    assert not evaluate_constants(4, 0.3).regime_valid
    assert evaluate_constants(8, 0.3).b == math.inf
    c12 = evaluate_constants(12, 0.3)
    assert c12.b == pytest.approx(1.0)
    assert c12.regime_valid


def test_c_plus_log_relation():
    consts = evaluate_constants(12, gamma=0.34)
    assert consts.log_c_plus == pytest.approx(consts.a / 4 * math.log(12))
    assert consts.r ** ((consts.p - 1) / 2) == pytest.approx(2.0)
    assert consts.log_c_minus == pytest.approx(consts.log_c_plus - math.log(consts.r))
    assert consts.log_c_minus >= 0.0  # c- >= 1


@pytest.mark.parametrize("p", list(range(12, 42, 2)))
def test_growth_scale_inequality_paper_window(p):
    assert growth_scale_inequality_holds(p)


def test_f_gamma_log():
    value = f_gamma_log(4, 0.5)
    expected = -(7 / 8) * 4 * 24 * 256 * math.log(4) + math.log(0.5) / (2 - 4)
    assert value == pytest.approx(expected)
    with pytest.raises(ValueError, match="p = 8"):
        f_gamma_log(8, 0.5)


def test_c0_value():
    consts = evaluate_constants(4, gamma=0.34)
    assert consts.C0 == pytest.approx(math.sqrt(2.0) ** 3 * 16 * 120)


def test_xi_uses_desk_height():
    c1 = evaluate_constants(4, 0.34, c_minus=1.0)
    c4 = evaluate_constants(4, 0.34, c_minus=4.0)
    assert c4.xi_desk == pytest.approx(c1.xi_desk * 2.0 ** 3)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        evaluate_constants(3, 0.3)
    with pytest.raises(ValueError):
        evaluate_constants(4, 1.5)


def test_table_renders():
    text = constants_table(evaluate_constants(4, 0.34))
    assert "7372800" in text
    assert "log10 mu0" in text
