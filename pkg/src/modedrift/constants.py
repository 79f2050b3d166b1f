"""Closed-form constants of the growth construction, evaluated in log space.

The parameter sizes that make the rigorous approximation argument work are
astronomically large (the rescaling exponent involves p * p! * 4^{p+1}), so
everything that can overflow is carried as a natural logarithm with exact
integer arithmetic for the factorials.  Nothing here is ever fed to the
integrators; the desk runs use moderate parameters and record which of these
thresholds they violate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

SQRT2 = math.sqrt(2.0)


def _log_factorial(n: int) -> float:
    return math.log(math.factorial(n))


@dataclass(frozen=True)
class PaperConstants:
    """All constant formulas for one even degree p, large values as logs."""

    p: int
    gamma: float
    a: int                 # rescaling exponent choice, p p! 4^(p+1)
    b: float               # 1 / (p/4 - 2); positive only for p > 8
    log_mu0: float         # log(p^a gamma^-b)
    C0: float              # sqrt(2)^(p-1) p^2 (p+1)!
    log_C0: float
    C1: int                # 2^(p-1) p^3 ((p+1)!)^2, exact integer
    log_C1: float
    C1_tilde: float        # (3p-1) p^5 2^{(3p-5)/2} ((p+1)!)^3
    log_C1_tilde: float
    sigma1: float          # 3p/4 + 2
    sigma2: float          # sigma1 - 1/2
    r: float               # channel-height spread, r^{(p-1)/2} = 2
    log_c_plus: float      # (a/4) log p
    log_c_minus: float     # log_c_plus - log r
    c_minus_desk: float
    xi_desk: float         # sqrt(2)^{3p-1} p^2 p! sqrt(c_minus_desk)^{p-1}
    regime_valid: bool     # the paper-regime exponents need p > 8

    def log10_mu0(self) -> float:
        return self.log_mu0 / math.log(10.0)


def evaluate_constants(p: int, gamma: float, c_minus: float = 1.0) -> PaperConstants:
    """Populate every constant formula for degree p and diophantine gamma."""
    if p < 2 or p % 2:
        raise ValueError("p must be an even integer >= 2")
    if not (0 < gamma < 1):
        raise ValueError("gamma must lie in (0, 1)")
    a = p * math.factorial(p) * 4 ** (p + 1)
    if p == 8:
        b = math.inf
    else:
        b = 1.0 / (p / 4.0 - 2.0)
    log_mu0 = a * math.log(p) - b * math.log(gamma) if p != 8 else math.inf
    log_fact = _log_factorial(p + 1)
    log_C0 = (p - 1) / 2 * math.log(2.0) + 2 * math.log(p) + log_fact
    C1 = 2 ** (p - 1) * p ** 3 * math.factorial(p + 1) ** 2
    log_C1 = (p - 1) * math.log(2.0) + 3 * math.log(p) + 2 * log_fact
    log_C1_tilde = math.log(3 * p - 1) + 5 * math.log(p) + \
        (1.5 * p - 2.5) * math.log(2.0) + 3 * log_fact
    sigma1 = 0.75 * p + 2.0
    r = 2.0 ** (2.0 / (p - 1))
    log_c_plus = (a / 4.0) * math.log(p)
    xi_desk = SQRT2 ** (3 * p - 1) * p ** 2 * math.factorial(p) * \
        math.sqrt(c_minus) ** (p - 1)
    return PaperConstants(
        p=p, gamma=gamma, a=a, b=b, log_mu0=log_mu0,
        C0=math.exp(log_C0), log_C0=log_C0,
        C1=C1, log_C1=log_C1,
        C1_tilde=math.exp(log_C1_tilde) if log_C1_tilde < 700 else math.inf,
        log_C1_tilde=log_C1_tilde,
        sigma1=sigma1, sigma2=sigma1 - 0.5,
        r=r, log_c_plus=log_c_plus, log_c_minus=log_c_plus - math.log(r),
        c_minus_desk=c_minus, xi_desk=xi_desk,
        regime_valid=p > 8,
    )


def f_gamma_log(p: int, gamma: float) -> float:
    """log of the initial-size function p^{-(7/8) p p! 4^p} gamma^{1/(p/2 - 4)}."""
    if p == 8:
        raise ValueError("the gamma exponent 1/(p/2 - 4) is singular at p = 8")
    return -(7.0 / 8.0) * p * math.factorial(p) * 4 ** p * math.log(p) + \
        math.log(gamma) / (p / 2.0 - 4.0)


def growth_scale_inequality_holds(p: int) -> bool:
    """Log-space check of c_plus <= 2^{2 - 1/p} (p!)^{2/p} p^{a/2 - 14}."""
    consts = evaluate_constants(p, gamma=0.5)
    rhs = (2.0 - 1.0 / p) * math.log(2.0) + (2.0 / p) * _log_factorial(p) + \
        (consts.a / 2.0 - 14.0) * math.log(p)
    return consts.log_c_plus <= rhs


def constants_table(consts: PaperConstants) -> str:
    """Human-readable rendering with log10 for the astronomically large entries."""
    lines = [
        f"p                 {consts.p}",
        f"gamma             {consts.gamma!r}",
        f"a = p p! 4^(p+1)  {consts.a}",
        f"b                 {consts.b!r}",
        f"log10 mu0         {consts.log10_mu0()!r}",
        f"C0                {consts.C0!r}",
        f"C1 (exact)        {consts.C1}",
        f"C1~ (log)         {consts.log_C1_tilde!r}",
        f"sigma1, sigma2    {consts.sigma1!r}, {consts.sigma2!r}",
        f"r                 {consts.r!r}",
        f"log10 c+          {consts.log_c_plus / math.log(10.0)!r}",
        f"log10 c-          {consts.log_c_minus / math.log(10.0)!r}",
        f"Xi (desk c-)      {consts.xi_desk!r}",
        f"paper regime ok   {consts.regime_valid} (needs p > 8)",
    ]
    return "\n".join(lines)
