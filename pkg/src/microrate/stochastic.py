"""Random repayment delays and the distribution of the realized rate.

Each installment lands one or more periods after the previous one: the
inter-payment gaps X_1..X_N are i.i.d. geometric on {1, 2, ...} with
P(X = 1) = p, so p is the per-period probability that the borrower
manages to pay.  A repayment path turns the balance condition into

    principal = installment * sum_{n=1..N} exp(-R * S_n / m),
    S_n = X_1 + ... + X_n,

whose unique positive root R is the realized annual rate of that path.
The Monte Carlo engine samples many paths and summarizes the law of R;
the actuarial rate is the closed-form constant rate that satisfies the
same condition in expectation, m * ln(1 + p * (1/q_plus - 1)).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import BracketFailure, DegenerateSample, DomainError
from .loan import DEFAULT_TOL, LoanContract, solve_q_plus

__all__ = [
    "DelayModel",
    "RepaymentPath",
    "SimulationConfig",
    "SummaryStats",
    "Histogram",
    "SimulationResult",
    "trial_rng",
    "sample_path",
    "solve_R",
    "run_simulation",
    "summary_stats",
    "build_histogram",
    "actuarial_rate",
    "actuarial_rate_from_q",
    "write_samples_csv",
    "write_histogram_csv",
    "summary_json",
]

_MAX_SEED = 2**64


@dataclass(frozen=True)
class DelayModel:
    """Geometric delay model: P(gap = k) = p * (1-p)^(k-1), k = 1, 2, ..."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise DomainError(f"payment probability must lie in (0, 1], got {self.p}")


@dataclass(frozen=True)
class RepaymentPath:
    """One realization of the gaps X_1..X_N and their partial sums."""

    gaps: tuple[int, ...]
    partial_sums: tuple[int, ...]

    def __post_init__(self):
        if len(self.gaps) == 0:
            raise DomainError("a repayment path needs at least one payment")
        if len(self.gaps) != len(self.partial_sums):
            raise DomainError("gaps and partial_sums must have equal length")
        running = 0
        for n, (gap, s) in enumerate(zip(self.gaps, self.partial_sums)):
            if gap < 1:
                raise DomainError(f"gap #{n} is {gap}; every gap must be >= 1")
            running += gap
            if s != running:
                raise DomainError(
                    f"partial_sums[{n}] = {s} does not match the gap sum {running}"
                )

    @classmethod
    def from_gaps(cls, gaps) -> "RepaymentPath":
        gaps = tuple(int(g) for g in gaps)
        sums = []
        total = 0
        for g in gaps:
            total += g
            sums.append(total)
        return cls(gaps=gaps, partial_sums=tuple(sums))

    def __len__(self) -> int:
        return len(self.gaps)


@dataclass(frozen=True)
class SimulationConfig:
    contract: LoanContract
    delay_model: DelayModel
    num_trials: int
    seed: int
    solver_tol: float = DEFAULT_TOL
    num_bins: int = 60

    def __post_init__(self):
        if self.num_trials < 1:
            raise DomainError(f"num_trials must be >= 1, got {self.num_trials}")
        if not 0 <= self.seed < _MAX_SEED:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not self.solver_tol > 0:
            raise DomainError(f"solver_tol must be positive, got {self.solver_tol}")
        if self.num_bins < 1:
            raise DomainError(f"num_bins must be >= 1, got {self.num_bins}")


@dataclass(frozen=True)
class SummaryStats:
    """Moment summary of a sample, annual-rate units.

    skewness is m3/m2^1.5 and kurtosis the raw m4/m2^2 (a Gaussian
    scores 3, the two-point law scores the minimum 1), both from
    biased divide-by-n central moments.  NaN when the sample is
    degenerate.
    """

    mean: float
    std_dev: float
    skewness: float
    kurtosis: float
    min: float
    max: float

    @property
    def is_degenerate(self) -> bool:
        return math.isnan(self.skewness)


@dataclass(frozen=True)
class Histogram:
    """Equal-width bins over [min, max], right-open except the last."""

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]


@dataclass(frozen=True)
class SimulationResult:
    config: SimulationConfig
    samples: np.ndarray = field(repr=False)
    stats: SummaryStats
    histogram: Histogram


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one trial.

    Philox keyed directly by the (seed, trial) pair, so any trial's
    stream can be reconstructed without generating its predecessors and
    results do not depend on how trials are scheduled.
    """
    if not 0 <= seed < _MAX_SEED:
        raise DomainError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if trial < 0:
        raise DomainError(f"trial index must be >= 0, got {trial}")
    return np.random.Generator(np.random.Philox(key=(trial << 64) | seed))


def _sample_gap_array(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    if p >= 1.0:
        return np.ones(n, dtype=np.int64)
    u = rng.random(n)
    # keep U in (0, 1): rng.random can return exactly 0.0
    u = np.maximum(u, np.finfo(float).tiny)
    return np.ceil(np.log(u) / math.log1p(-p)).astype(np.int64)


def sample_path(
    delay_model: DelayModel, num_payments: int, rng: np.random.Generator
) -> RepaymentPath:
    """Draw one repayment path of ``num_payments`` geometric gaps.

    Inverse transform X = ceil(ln U / ln(1-p)), one uniform per draw;
    p = 1 degenerates to every gap equal to 1.  Partial sums are exact
    integer arithmetic.
    """
    if num_payments < 1:
        raise DomainError(f"num_payments must be >= 1, got {num_payments}")
    gaps = _sample_gap_array(rng, num_payments, delay_model.p)
    sums = np.cumsum(gaps)
    return RepaymentPath(
        gaps=tuple(int(g) for g in gaps), partial_sums=tuple(int(s) for s in sums)
    )


def _solve_rate_rows(
    contract: LoanContract, partial_sums: np.ndarray, tol: float
) -> np.ndarray:
    """Realized rate for each row of a (trials, N) partial-sum matrix.

    Present value g(R) = c * sum_n exp(-R * S_n / m) is strictly
    decreasing from g(0) = c*N > P to 0, so each row has a unique root.
    Doubling from R = 1 finds an upper bracket per row; bisection then
    shrinks each row's own bracket and freezes it once narrower than
    tol, so a row's iteration sequence never depends on which other
    rows share the batch.
    """
    c = contract.installment
    principal = contract.principal
    scaled = partial_sums / contract.periods_per_year  # S_n / m, float

    def present_value(rates: np.ndarray, rows: np.ndarray) -> np.ndarray:
        return c * np.exp(-rates[:, None] * scaled[rows]).sum(axis=1)

    n_rows = scaled.shape[0]
    all_rows = np.arange(n_rows)
    lo = np.zeros(n_rows)
    hi = np.ones(n_rows)
    active = present_value(hi, all_rows) >= principal
    for _ in range(200):
        if not active.any():
            break
        rows = np.where(active)[0]
        lo[rows] = hi[rows]
        hi[rows] *= 2.0
        active[rows] = present_value(hi[rows], rows) >= principal
    else:
        raise BracketFailure("no upper bracket for the realized rate after 200 doublings")

    while True:
        open_rows = np.where(hi - lo > tol)[0]
        if open_rows.size == 0:
            break
        mid = 0.5 * (lo[open_rows] + hi[open_rows])
        below = present_value(mid, open_rows) < principal
        hi[open_rows[below]] = mid[below]
        lo[open_rows[~below]] = mid[~below]
    return 0.5 * (lo + hi)


def solve_R(contract: LoanContract, path: RepaymentPath, tol: float = DEFAULT_TOL) -> float:
    """Realized annual rate of one repayment path.

    The path must have exactly ``contract.num_payments`` gaps.  Reduces
    to the deterministic rate when every gap is 1.
    """
    if len(path) != contract.num_payments:
        raise DomainError(
            f"path has {len(path)} payments, contract expects {contract.num_payments}"
        )
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    sums = np.asarray(path.partial_sums, dtype=np.int64).reshape(1, -1)
    return float(_solve_rate_rows(contract, sums, tol)[0])


def summary_stats(samples) -> SummaryStats:
    """Mean, population std dev, skewness m3/m2^1.5, raw kurtosis m4/m2^2.

    Raises DegenerateSample when all samples coincide; the exception
    carries the partial stats (zero variance detected exactly, via
    min == max, so a delay-free simulation reports std_dev == 0.0).
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise DomainError("summary_stats needs at least one sample")
    lo = float(x.min())
    hi = float(x.max())
    if lo == hi:
        raise DegenerateSample(
            SummaryStats(
                mean=lo, std_dev=0.0, skewness=math.nan, kurtosis=math.nan, min=lo, max=hi
            )
        )
    mean = float(x.mean())
    d = x - mean
    m2 = float((d * d).mean())
    m3 = float((d**3).mean())
    m4 = float((d**4).mean())
    return SummaryStats(
        mean=mean,
        std_dev=math.sqrt(m2),
        skewness=m3 / m2**1.5,
        kurtosis=m4 / m2**2,
        min=lo,
        max=hi,
    )


def build_histogram(samples, num_bins: int) -> Histogram:
    """Equal-width histogram over [min, max] of the sample.

    Bins are right-open except the last (numpy convention); a zero-span
    sample is widened to [x - 0.5, x + 0.5] so the edges still increase.
    """
    if num_bins < 1:
        raise DomainError(f"num_bins must be >= 1, got {num_bins}")
    counts, edges = np.histogram(np.asarray(samples, dtype=float), bins=num_bins)
    return Histogram(
        bin_edges=tuple(float(e) for e in edges),
        counts=tuple(int(c) for c in counts),
    )


def run_simulation(config: SimulationConfig, workers: int = 1) -> SimulationResult:
    """Monte Carlo over repayment paths: one realized rate per trial.

    Trial t draws its path from trial_rng(seed, t) and its rate is
    assembled into position t, so the output is bit-identical for a
    given config no matter how many workers execute the trials.
    """
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    contract = config.contract
    n = contract.num_payments
    p = config.delay_model.p
    trials = config.num_trials
    samples = np.empty(trials, dtype=float)

    def fill(start: int, stop: int) -> None:
        gaps = np.empty((stop - start, n), dtype=np.int64)
        for i, t in enumerate(range(start, stop)):
            gaps[i] = _sample_gap_array(trial_rng(config.seed, t), n, p)
        sums = np.cumsum(gaps, axis=1)
        samples[start:stop] = _solve_rate_rows(contract, sums, config.solver_tol)

    if workers == 1 or trials < 2 * workers:
        fill(0, trials)
    else:
        bounds = np.linspace(0, trials, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda se: fill(*se), zip(bounds[:-1], bounds[1:])))

    try:
        stats = summary_stats(samples)
    except DegenerateSample as degenerate:
        stats = degenerate.stats
    return SimulationResult(
        config=config,
        samples=samples,
        stats=stats,
        histogram=build_histogram(samples, config.num_bins),
    )


def actuarial_rate_from_q(q_plus: float, p: float, periods_per_year: int) -> float:
    """Closed form m * ln(1 + p * (1/q_plus - 1)).

    This is the constant rate whose per-period expected discount factor
    E[exp(-r/m * X)] under the geometric delay model equals q_plus.
    p = 1 is taken literally as -m * ln(q_plus) so the delay-free case
    collapses to the deterministic rate without rounding residue.
    """
    if not 0.0 < q_plus < 1.0:
        raise DomainError(f"q_plus must lie in (0, 1), got {q_plus}")
    if not 0.0 < p <= 1.0:
        raise DomainError(f"payment probability must lie in (0, 1], got {p}")
    if p == 1.0:
        return -periods_per_year * math.log(q_plus)
    return periods_per_year * math.log1p(p * (1.0 / q_plus - 1.0))


def actuarial_rate(
    contract: LoanContract, delay_model: DelayModel, tol: float = DEFAULT_TOL
) -> float:
    """Expected-balance rate of the contract under the delay model."""
    q = solve_q_plus(contract, tol).q_plus
    return actuarial_rate_from_q(q, delay_model.p, contract.periods_per_year)


# --- file formats consumed by external plotters and the CLI ---

def write_samples_csv(path, samples) -> None:
    """``trial,R`` rows, R printed with 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("trial,R\n")
        for t, r in enumerate(samples):
            fh.write(f"{t},{r:.17g}\n")


def write_histogram_csv(path, histogram: Histogram) -> None:
    """``bin_left,bin_right,count`` rows, one per bin."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("bin_left,bin_right,count\n")
        edges = histogram.bin_edges
        for i, count in enumerate(histogram.counts):
            fh.write(f"{edges[i]:.17g},{edges[i + 1]:.17g},{count}\n")


def _json_float(x: float):
    # strict JSON has no NaN; degenerate skewness/kurtosis serialize as null
    return None if math.isnan(x) else x


def summary_json(result: SimulationResult) -> dict:
    """Summary object with the deterministic and actuarial references.

    Together with the histogram CSV this is enough for an external
    plotter to overlay the Gaussian fit N(actuarial_rate, std_dev).
    """
    config = result.config
    stats = result.stats
    deterministic = solve_q_plus(config.contract, config.solver_tol).annual_rate
    return {
        "mean": stats.mean,
        "std_dev": stats.std_dev,
        "skewness": _json_float(stats.skewness),
        "kurtosis": _json_float(stats.kurtosis),
        "min": stats.min,
        "max": stats.max,
        "actuarial_rate": actuarial_rate(
            config.contract, config.delay_model, config.solver_tol
        ),
        "deterministic_rate": deterministic,
        "p": config.delay_model.p,
        "trials": config.num_trials,
        "seed": config.seed,
    }


def summary_json_str(result: SimulationResult) -> str:
    return json.dumps(summary_json(result))
