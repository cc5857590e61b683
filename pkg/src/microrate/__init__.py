"""Effective annual interest rates of microcredit contracts.

Four views of the same contract: the exact rate from the balance
polynomial, the Monte Carlo law of the rate under random repayment
delays, the closed-form actuarial expected rate, and a large-N
asymptotic approximation.
"""

from .asymptotic import (
    AsymptoticSolution,
    approx_actuarial_rate,
    approx_q_plus,
    psi_eval,
    solve_asymptotic,
    solve_x_plus,
)
from .errors import BracketFailure, DegenerateSample, DomainError, NoRootInUnitInterval
from .loan import (
    LoanContract,
    NominalInterestFraction,
    RateSolution,
    phi_eval,
    q_from_rate,
    rate_from_q,
    solve_q_plus,
    yunus_polynomial_eval,
)
from .stochastic import (
    DelayModel,
    Histogram,
    RepaymentPath,
    SimulationConfig,
    SimulationResult,
    SummaryStats,
    actuarial_rate,
    actuarial_rate_from_q,
    build_histogram,
    run_simulation,
    sample_path,
    solve_R,
    summary_json,
    summary_stats,
    trial_rng,
    write_histogram_csv,
    write_samples_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticSolution",
    "BracketFailure",
    "DegenerateSample",
    "DelayModel",
    "DomainError",
    "Histogram",
    "LoanContract",
    "NoRootInUnitInterval",
    "NominalInterestFraction",
    "RateSolution",
    "RepaymentPath",
    "SimulationConfig",
    "SimulationResult",
    "SummaryStats",
    "actuarial_rate",
    "actuarial_rate_from_q",
    "approx_actuarial_rate",
    "approx_q_plus",
    "build_histogram",
    "phi_eval",
    "psi_eval",
    "q_from_rate",
    "rate_from_q",
    "run_simulation",
    "sample_path",
    "solve_R",
    "solve_asymptotic",
    "solve_q_plus",
    "solve_x_plus",
    "summary_json",
    "summary_stats",
    "trial_rng",
    "write_histogram_csv",
    "write_samples_csv",
    "yunus_polynomial_eval",
]
