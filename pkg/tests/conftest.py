import time

import pytest

from microrate import DelayModel, LoanContract, SimulationConfig, run_simulation

CANONICAL = LoanContract(
    principal=1000.0, installment=22.0, num_payments=50, periods_per_year=52
)


@pytest.fixture(scope="session")
def canonical():
    return CANONICAL


@pytest.fixture(scope="session")
def sim_p95():
    """The default experiment (p=0.95, 1e5 trials, seed 42), run once per
    session, with its single-threaded wall time."""
    config = SimulationConfig(
        contract=CANONICAL,
        delay_model=DelayModel(0.95),
        num_trials=100_000,
        seed=42,
    )
    start = time.perf_counter()
    result = run_simulation(config, workers=1)
    elapsed = time.perf_counter() - start
    return result, elapsed
