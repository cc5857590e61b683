"""Command-line surface: solve, actuarial, simulate, approx.

Machine-readable JSON goes to stdout, notes to stderr.  Exit codes:
0 success, 2 invalid flags or domain validation, 3 output I/O failure.
Contract flags default to the canonical example (1000 lent, 22 per
week, 50 weeks, 52 periods a year), so a bare ``microrate solve``
reproduces its effective rate of roughly 19.74%.
"""

from __future__ import annotations

import argparse
import json
import sys

from .asymptotic import psi_eval, solve_asymptotic, solve_x_plus
from .errors import DomainError
from .loan import LoanContract, phi_eval, solve_q_plus
from .stochastic import (
    DelayModel,
    SimulationConfig,
    actuarial_rate_from_q,
    run_simulation,
    summary_json,
    write_histogram_csv,
    write_samples_csv,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


def _add_contract_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--principal", type=float, default=1000.0)
    parser.add_argument("--installment", type=float, default=22.0)
    parser.add_argument("--payments", type=int, default=50)
    parser.add_argument("--periods-per-year", type=int, default=52)


def _contract(args: argparse.Namespace) -> LoanContract:
    return LoanContract(
        principal=args.principal,
        installment=args.installment,
        num_payments=args.payments,
        periods_per_year=args.periods_per_year,
    )


def _emit(obj: dict) -> None:
    print(json.dumps(obj))


def cmd_solve(args: argparse.Namespace) -> int:
    contract = _contract(args)
    solution = solve_q_plus(contract, args.tol)
    _emit(
        {
            "q_plus": solution.q_plus,
            "annual_rate": solution.annual_rate,
            "nominal_fraction_a": contract.nominal_fraction,
        }
    )
    return EXIT_OK


def cmd_actuarial(args: argparse.Namespace) -> int:
    contract = _contract(args)
    delay = DelayModel(args.p)
    solution = solve_q_plus(contract, args.tol)
    _emit(
        {
            "q_plus": solution.q_plus,
            "deterministic_rate": solution.annual_rate,
            "actuarial_rate": actuarial_rate_from_q(
                solution.q_plus, delay.p, contract.periods_per_year
            ),
            "p": delay.p,
        }
    )
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    config = SimulationConfig(
        contract=_contract(args),
        delay_model=DelayModel(args.p),
        num_trials=args.trials,
        seed=args.seed,
        solver_tol=args.tol,
        num_bins=args.bins,
    )
    result = run_simulation(config)
    write_samples_csv(args.out_samples, result.samples)
    print(f"wrote {args.out_samples}", file=sys.stderr)
    write_histogram_csv(args.out_histogram, result.histogram)
    print(f"wrote {args.out_histogram}", file=sys.stderr)
    _emit(summary_json(result))
    return EXIT_OK


def _write_curves_csv(path, a: float, num_payments: int) -> None:
    """phi(q) next to the rescaled blow-up psi_a(N(q-1)) on a q-grid
    spanning both roots (q_plus_approx and the trivial 1)."""
    x_plus = solve_x_plus(a)
    n = num_payments
    lo = 1.0 - 3.0 * x_plus / n
    hi = 1.0 + x_plus / n
    steps = 400
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("q,phi,psi_rescaled\n")
        for i in range(steps + 1):
            q = lo + (hi - lo) * i / steps
            fh.write(
                f"{q:.17g},{phi_eval(a, n, q):.17g},{psi_eval(a, n * (q - 1.0)):.17g}\n"
            )


def cmd_approx(args: argparse.Namespace) -> int:
    solution = solve_asymptotic(
        args.a, args.payments, args.periods_per_year, args.p, args.tol
    )
    # exact root of the contract with the same nominal fraction, for the error column
    principal = 1000.0
    contract = LoanContract(
        principal=principal,
        installment=principal * (1.0 + args.a) / args.payments,
        num_payments=args.payments,
        periods_per_year=args.periods_per_year,
    )
    q_exact = solve_q_plus(contract, args.tol).q_plus
    if args.out_curves is not None:
        _write_curves_csv(args.out_curves, args.a, args.payments)
        print(f"wrote {args.out_curves}", file=sys.stderr)
    _emit(
        {
            "x_plus": solution.x_plus,
            "q_plus_approx": solution.q_plus_approx,
            "q_plus_exact": q_exact,
            "abs_error": abs(solution.q_plus_approx - q_exact),
            "actuarial_rate_approx": solution.actuarial_rate_approx,
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="microrate",
        description="Effective annual interest rates of microcredit contracts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="deterministic discount factor and rate")
    _add_contract_flags(solve)
    solve.add_argument("--tol", type=float, default=1e-12)
    solve.set_defaults(func=cmd_solve)

    actuarial = sub.add_parser("actuarial", help="closed-form expected-balance rate")
    _add_contract_flags(actuarial)
    actuarial.add_argument("--p", type=float, default=0.95)
    actuarial.add_argument("--tol", type=float, default=1e-12)
    actuarial.set_defaults(func=cmd_actuarial)

    simulate = sub.add_parser("simulate", help="Monte Carlo over random repayment paths")
    _add_contract_flags(simulate)
    simulate.add_argument("--p", type=float, default=0.95)
    simulate.add_argument("--trials", type=int, default=100_000)
    simulate.add_argument("--seed", type=int, default=42)
    simulate.add_argument("--bins", type=int, default=60)
    simulate.add_argument("--tol", type=float, default=1e-12)
    simulate.add_argument("--out-samples", default="samples.csv")
    simulate.add_argument("--out-histogram", default="histogram.csv")
    simulate.set_defaults(func=cmd_simulate)

    approx = sub.add_parser("approx", help="large-N approximation of root and rate")
    approx.add_argument("--a", type=float, default=0.1)
    approx.add_argument("--payments", type=int, default=50)
    approx.add_argument("--periods-per-year", type=int, default=52)
    approx.add_argument("--p", type=float, default=0.95)
    approx.add_argument("--tol", type=float, default=1e-12)
    approx.add_argument("--out-curves", default=None)
    approx.set_defaults(func=cmd_approx)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
