"""Deterministic microcredit loan model.

A contract hands out ``principal`` and is repaid in ``num_payments``
equal installments, one per period, ``periods_per_year`` periods a year.
With q = exp(-r/m) the per-period discount factor at continuously
compounded annual rate r, the balance condition

    principal = installment * (q + q^2 + ... + q^N)

has exactly one root q_plus in (0, 1) whenever the installments total
more than the principal.  The effective annual rate of the contract is
r = -m * ln(q_plus).

The same condition, multiplied by (1 - q)/principal, is the degree-N+1
polynomial  (1+a) q^(N+1) - (N+1+a) q + N  with a the nominal interest
fraction; that form adds the trivial root q = 1 and is what the
asymptotic module blows up for large N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NoRootInUnitInterval

__all__ = [
    "LoanContract",
    "NominalInterestFraction",
    "RateSolution",
    "yunus_polynomial_eval",
    "phi_eval",
    "solve_q_plus",
    "rate_from_q",
    "q_from_rate",
]

DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class LoanContract:
    """An equal-installment loan.

    The canonical example: 1000 lent, repaid as 22 per week for 50
    weeks, 52 periods a year.
    """

    principal: float
    installment: float
    num_payments: int
    periods_per_year: int

    def __post_init__(self):
        if not self.principal > 0:
            raise DomainError(f"principal must be positive, got {self.principal}")
        if not self.installment > 0:
            raise DomainError(f"installment must be positive, got {self.installment}")
        if self.num_payments < 1:
            raise DomainError(f"num_payments must be >= 1, got {self.num_payments}")
        if self.periods_per_year < 1:
            raise DomainError(
                f"periods_per_year must be >= 1, got {self.periods_per_year}"
            )
        if not self.installment * self.num_payments > self.principal:
            raise DomainError(
                "installment * num_payments must exceed principal "
                f"({self.installment} * {self.num_payments} <= {self.principal}): "
                "nominal interest fraction would be <= 0 and no discount "
                "factor in (0, 1) balances the loan"
            )

    @property
    def nominal_fraction(self) -> float:
        """a = (total installments - principal) / principal, always > 0."""
        return (self.installment * self.num_payments - self.principal) / self.principal


@dataclass(frozen=True)
class NominalInterestFraction:
    """Validated nominal interest fraction a (0.1 for the canonical contract)."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError(f"nominal interest fraction must be positive, got {self.a}")

    @classmethod
    def from_contract(cls, contract: LoanContract) -> "NominalInterestFraction":
        return cls(contract.nominal_fraction)

    def __float__(self) -> float:
        return self.a


@dataclass(frozen=True)
class RateSolution:
    """The root q_plus in (0, 1) and the annual rate it encodes."""

    q_plus: float
    annual_rate: float


def yunus_polynomial_eval(contract: LoanContract, q: float) -> float:
    """Balance residual  principal - installment * sum_{k=1..N} q^k.

    Its unique zero in (0, 1) is q_plus.  Evaluated by Horner summation;
    the closed-form quotient (q - q^(N+1))/(1 - q) is avoided because it
    cancels catastrophically near q = 1, exactly where the root lives.

    >>> c = LoanContract(1000, 22, 50, 52)
    >>> yunus_polynomial_eval(c, 1.0)
    -100.0
    >>> yunus_polynomial_eval(c, 0.0)
    1000.0
    """
    s = 0.0
    for _ in range(contract.num_payments):
        s = q * (1.0 + s)
    return contract.principal - contract.installment * s


def phi_eval(a: float | NominalInterestFraction, num_payments: int, q: float) -> float:
    """(1+a) q^(N+1) - (N+1+a) q + N, the normalized polynomial form.

    Evaluated as (1+a)(q^(N+1) - 1) - (N+1+a)(q - 1), which is the same
    polynomial but returns exactly 0.0 at the trivial root q = 1.
    """
    a = float(a)
    if num_payments < 1:
        raise DomainError(f"num_payments must be >= 1, got {num_payments}")
    n = num_payments
    return (1.0 + a) * (q ** (n + 1) - 1.0) - (n + 1.0 + a) * (q - 1.0)


def rate_from_q(q: float, periods_per_year: int) -> float:
    """Annual continuously compounded rate r = -m * ln(q) for q in (0, 1)."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"discount factor must lie in (0, 1), got {q}")
    return -periods_per_year * math.log(q)

def q_from_rate(annual_rate: float, periods_per_year: int) -> float:
    """Per-period discount factor q = exp(-r/m) for r > 0. Inverse of rate_from_q."""
    if not annual_rate > 0:
        raise DomainError(f"annual rate must be positive, got {annual_rate}")
    return math.exp(-annual_rate / periods_per_year)


def solve_q_plus(contract: LoanContract, tol: float = DEFAULT_TOL) -> RateSolution:
    """Find the root q_plus of the balance residual in (0, 1).

    The residual is strictly decreasing with value ``principal`` at
    q = 0 and negative on (q_plus, 1), so an upper bracket is found by
    scanning h_i = 1 - 2^-i until the residual turns negative (at most
    ~log2(N^2) steps in practice), then bisecting.  The last positive
    candidate serves as the lower bracket, which keeps the bisection
    interval tight near 1.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    lo = 0.0
    hi = None
    for i in range(1, 61):
        h = 1.0 - 2.0 ** -i
        if yunus_polynomial_eval(contract, h) < 0.0:
            hi = h
            break
        lo = h
    if hi is None:
        raise NoRootInUnitInterval(
            "no sign change of the balance residual in (0, 1) after 60 halvings"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if yunus_polynomial_eval(contract, mid) < 0.0:
            hi = mid
        else:
            lo = mid
    q = 0.5 * (lo + hi)
    return RateSolution(q_plus=q, annual_rate=rate_from_q(q, contract.periods_per_year))
