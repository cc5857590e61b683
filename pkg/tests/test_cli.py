import json
import math
import subprocess
import sys

import numpy as np

from microrate import (
    DelayModel,
    LoanContract,
    SimulationConfig,
    psi_eval,
    run_simulation,
    summary_json,
    yunus_polynomial_eval,
)
from microrate.cli import main


def run_cli(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "microrate", *args],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def test_solve_defaults_reproduce_canonical_contract():
    proc = run_cli("solve")
    assert proc.returncode == 0
    out = json.loads(proc.stdout)
    assert abs(out["q_plus"] - 0.9962107) < 1e-6
    assert abs(out["annual_rate"] - 0.1974) < 5e-4
    assert out["nominal_fraction_a"] == 0.1
    # output numbers round-trip: the reprinted root still kills the residual
    contract = LoanContract(1000, 22, 50, 52)
    assert abs(yunus_polynomial_eval(contract, out["q_plus"])) < 1e-6


def test_solve_rejects_zero_interest():
    proc = run_cli("solve", "--principal", "1000", "--installment", "20")
    assert proc.returncode == 2
    assert "exceed principal" in proc.stderr


def test_solve_scaling_invariance():
    base = json.loads(run_cli("solve").stdout)
    scaled = json.loads(
        run_cli("solve", "--principal", "2000", "--installment", "44").stdout
    )
    assert scaled["q_plus"] == base["q_plus"]


def test_solve_unknown_flag_exits_2():
    assert run_cli("solve", "--frequency", "12").returncode == 2


def test_actuarial_p1_equals_deterministic():
    out = json.loads(run_cli("actuarial", "--p", "1").stdout)
    assert abs(out["actuarial_rate"] - out["deterministic_rate"]) < 1e-10


def test_actuarial_matches_library():
    proc = run_cli("actuarial", "--p", "0.95")
    out = json.loads(proc.stdout)
    from microrate import actuarial_rate

    expected = actuarial_rate(LoanContract(1000, 22, 50, 52), DelayModel(0.95))
    assert out["actuarial_rate"] == expected
    assert out["p"] == 0.95


def test_actuarial_rejects_bad_p():
    assert run_cli("actuarial", "--p", "1.5").returncode == 2
    assert run_cli("actuarial", "--p", "0").returncode == 2


def test_simulate_p1_writes_constant_samples(tmp_path):
    proc = run_cli(
        "simulate", "--p", "1", "--trials", "100", "--seed", "7", cwd=tmp_path
    )
    assert proc.returncode == 0
    lines = (tmp_path / "samples.csv").read_text().splitlines()
    assert lines[0] == "trial,R"
    values = {line.split(",")[1] for line in lines[1:]}
    assert len(lines) == 101
    assert len(values) == 1
    # with the delay-free path known, the balance equation can be rechecked
    rate = float(values.pop())
    contract = LoanContract(1000, 22, 50, 52)
    pv = sum(22.0 * math.exp(-rate * n / 52) for n in range(1, 51))
    assert abs(pv - 1000.0) < 1e-6
    summary = json.loads(proc.stdout)
    assert summary["std_dev"] == 0.0
    assert summary["skewness"] is None


def test_simulate_runs_are_byte_identical(tmp_path):
    flags = ["simulate", "--p", "0.9", "--trials", "400", "--seed", "11", "--bins", "24"]
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    dir_a.mkdir()
    dir_b.mkdir()
    proc_a = run_cli(*flags, cwd=dir_a)
    proc_b = run_cli(*flags, cwd=dir_b)
    assert proc_a.returncode == proc_b.returncode == 0
    assert proc_a.stdout == proc_b.stdout
    assert (dir_a / "samples.csv").read_bytes() == (dir_b / "samples.csv").read_bytes()
    assert (dir_a / "histogram.csv").read_bytes() == (dir_b / "histogram.csv").read_bytes()


def test_simulate_summary_matches_library(tmp_path):
    proc = run_cli(
        "simulate", "--p", "0.95", "--trials", "500", "--seed", "42", cwd=tmp_path
    )
    got = json.loads(proc.stdout)
    config = SimulationConfig(
        contract=LoanContract(1000, 22, 50, 52),
        delay_model=DelayModel(0.95),
        num_trials=500,
        seed=42,
    )
    expected = summary_json(run_simulation(config))
    assert got == expected
    # samples file agrees with the library run as well
    lines = (tmp_path / "samples.csv").read_text().splitlines()[1:]
    result = run_simulation(config)
    assert np.array_equal(
        np.array([float(line.split(",")[1]) for line in lines]), result.samples
    )


def test_simulate_unwritable_path_exits_3(tmp_path):
    proc = run_cli(
        "simulate",
        "--trials", "10",
        "--out-samples", "/nonexistent-dir/samples.csv",
        cwd=tmp_path,
    )
    assert proc.returncode == 3


def test_approx_published_values(tmp_path):
    proc = run_cli("approx", "--a", "0.1", "--payments", "50", cwd=tmp_path)
    out = json.loads(proc.stdout)
    assert abs(out["x_plus"] - 0.1937476) < 1e-6
    assert abs(out["q_plus_approx"] - 0.9961250) < 1e-6
    assert abs(out["q_plus_exact"] - 0.9962107) < 1e-6
    assert out["abs_error"] < 2e-4
    assert abs(psi_eval(0.1, -out["x_plus"])) < 1e-6


def test_approx_rejects_nonpositive_a():
    assert run_cli("approx", "--a", "0").returncode == 2
    assert run_cli("approx", "--a", "-0.2").returncode == 2


def test_approx_curve_dump(tmp_path):
    curves = tmp_path / "curves.csv"
    proc = run_cli("approx", "--out-curves", str(curves), cwd=tmp_path)
    assert proc.returncode == 0
    lines = curves.read_text().splitlines()
    assert lines[0] == "q,phi,psi_rescaled"
    assert len(lines) == 402
    # the dumped polynomial and its blow-up stay close on the window
    for line in lines[1:50]:
        q, phi, psi = map(float, line.split(","))
        assert abs(phi - psi) < 0.01


def test_main_callable_directly(capsys):
    assert main(["solve"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["q_plus"] - 0.9962107) < 1e-6
