"""Acceptance gate: one test per shipping criterion.

Run with ``pytest -v tests/test_acceptance.py`` to get a pass/fail line per
criterion. The heavy day-long traces are generated once per session and
shared across criteria.
"""

import json
import time

import numpy as np
import pytest

from conftest import REF_TRUTH, exact_model, make_trace
from oracles import normal_equations_ols
from wattmodel import (
    DesignMatrix,
    PowerSample,
    SimConfig,
    Tariff,
    align,
    breakdown,
    default_tolerance,
    evaluate,
    fit_ols,
    format_metrics,
    format_power,
    generate,
    integrate,
    project_cost,
    train,
)
from wattmodel.cli import main as cli_main

# In-sample MAPE of the sigma=2 W bursty day trace (seed 42), frozen at
# first build. The generator is a fixed portable algorithm, so this value
# is stable; the tolerance only absorbs float reassociation across numpy
# versions.
GOLDEN_MAPE_SIGMA2_SEED42 = 0.9452867565239699

TRUE_COEFFS = (REF_TRUTH.alpha, REF_TRUTH.beta_cpu, REF_TRUTH.beta_mem,
               REF_TRUTH.beta_disk, REF_TRUTH.beta_net)


def day_config(noise, seed):
    return SimConfig(
        truth=REF_TRUTH,
        duration_s=86400.0,
        interval_s=1.0,
        noise_sigma_w=noise,
        seed=seed,
        workload_profile="bursty",
    )


def model_coeffs(model):
    return (model.alpha, model.beta_cpu, model.beta_mem, model.beta_disk,
            model.beta_net)


@pytest.fixture(scope="module")
def noiseless_day():
    """Noiseless 86400-row trace, its fitted model, and the fit wall time."""
    metrics, power = generate(day_config(noise=0.0, seed=1))
    trace = align(metrics, power, default_tolerance(metrics))
    start = time.perf_counter()
    model = train(trace)
    fit_seconds = time.perf_counter() - start
    return trace, model, fit_seconds


@pytest.fixture(scope="module")
def noisy_day():
    """The sigma=2 W, seed-42 day trace and its fitted model."""
    metrics, power = generate(day_config(noise=2.0, seed=42))
    trace = align(metrics, power, default_tolerance(metrics))
    return trace, train(trace)


def test_criterion_01_coefficient_recovery(noiseless_day):
    """Noiseless full-rank day trace: all five coefficients recovered to
    1e-6 relative, with the 86400-row fit completing in under a second."""
    trace, model, fit_seconds = noiseless_day
    assert len(trace) == 86400
    for got, expected in zip(model_coeffs(model), TRUE_COEFFS):
        assert got == pytest.approx(expected, rel=1e-6)
    assert fit_seconds < 1.0


def test_criterion_02_significance_saturation(noisy_day):
    """sigma=2 W bursty day (n=86400, seed 42): every p-value < 2e-16."""
    trace, model = noisy_day
    assert len(trace) == 86400
    assert all(p < 2e-16 for p in model.diagnostics.p_values)


def test_criterion_03_accuracy_metric(noisy_day):
    """accuracy = 100 - MAPE exactly; the constructed 3.91%-error row reports
    96.09% accuracy to 1e-9; held-out sigma=2 W accuracy >= 96%; in-sample
    MAPE matches the frozen golden value."""
    single = make_trace(cpu=[0.0], mem=[0.0], disk=[0.0], net=[0.0],
                        power=[100.0])
    report = evaluate(exact_model(96.09), single)
    assert report.mape == pytest.approx(3.91, abs=1e-9)
    assert report.accuracy == pytest.approx(96.09, abs=1e-9)
    assert report.accuracy == 100.0 - report.mape

    trace, model = noisy_day
    in_sample = evaluate(model, trace)
    assert in_sample.mape == pytest.approx(GOLDEN_MAPE_SIGMA2_SEED42, rel=1e-9)
    assert in_sample.mape < 1.0

    held_metrics, held_power = generate(day_config(noise=2.0, seed=43))
    held = align(held_metrics, held_power, default_tolerance(held_metrics))
    assert evaluate(model, held).accuracy >= 96.0


def test_criterion_04_daily_energy():
    """Constant 655.4167 W sampled every 60 s for 24 h: 15.73 +- 0.01 kWh/day."""
    samples = [PowerSample(i * 60.0, 655.4167) for i in range(1441)]
    report = integrate(samples)
    assert report.duration_s == 86400.0
    assert report.kwh_per_day == pytest.approx(15.73, abs=0.01)


def test_criterion_05_cost_projection():
    """15.73 kWh/day at $0.14/kWh with 15%/yr escalation over 36 months:
    total within 2% of $2,767 under the annual-step convention."""
    total = project_cost(15.73, Tariff(0.14, 0.15), 36).total_cost
    assert abs(total - 2767.0) / 2767.0 <= 0.02
    assert total == pytest.approx(2791.21, abs=0.01)  # the convention's value


def test_criterion_06_breakdown_share():
    """Reference category costs with $2,767 energy: total $106,037 and an
    energy share of 2.6% +- 0.05 pp."""
    report = breakdown(2767.0, [
        ("Data transfer", 58084.0),
        ("VM hours", 40568.0),
        ("Storage", 2325.0),
        ("Storage I/O", 2293.0),
    ])
    assert report.total == 106037.0
    energy = next(c for c in report.categories if c.label == "Energy usage")
    assert energy.percent == pytest.approx(2.6, abs=0.05)


def test_criterion_07_ols_oracle_equivalence():
    """QR coefficients match the independent normal-equations solver to 1e-8
    relative on 100 seeded well-conditioned 50x5 designs, in under 1 s."""
    start = time.perf_counter()
    for seed in range(100):
        rng = np.random.default_rng(seed)
        x = np.column_stack([np.ones(50)] +
                            [rng.uniform(0.05, 1.0, 50) for _ in range(4)])
        y = x @ np.array([50.0, 20.0, 3.0, -4.0, 1.5]) + rng.standard_normal(50)
        beta, _ = fit_ols(DesignMatrix(x=x, y=y))
        expected = normal_equations_ols(x, y)
        assert np.allclose(beta, expected, rtol=1e-8, atol=1e-10), f"seed {seed}"
    assert time.perf_counter() - start < 1.0


def test_criterion_08_invariant_suites():
    """Residual orthogonality, scale equivariance, trapezoid exactness,
    projection monotonicity, and seed determinism all hold."""
    # residual orthogonality
    rng = np.random.default_rng(8)
    x = np.column_stack([np.ones(80)] +
                        [rng.uniform(0.05, 1.0, 80) for _ in range(4)])
    y = x @ np.array([100.0, 10.0, -5.0, 2.0, 7.0]) + 2.0 * rng.standard_normal(80)
    beta, _ = fit_ols(DesignMatrix(x=x, y=y))
    resid = y - x @ beta
    y_norm = float(np.sqrt(y @ y))
    for j in range(5):
        col = x[:, j]
        assert abs(float(resid @ col)) <= 1e-6 * y_norm * float(np.sqrt(col @ col))

    # scale equivariance
    x2 = x.copy()
    x2[:, 3] *= 12.5
    beta2, _ = fit_ols(DesignMatrix(x=x2, y=y))
    assert beta2[3] == pytest.approx(beta[3] / 12.5, rel=1e-8)
    assert np.allclose(x2 @ beta2, x @ beta, rtol=1e-8)

    # trapezoid constant-exactness
    watts, duration = 655.4167, 7200.0
    samples = [PowerSample(t, watts) for t in (0.0, 1800.0, duration)]
    assert integrate(samples).kwh == watts * duration / 3.6e6

    # projection monotonicity
    base = project_cost(10.0, Tariff(0.2, 0.1), 24).total_cost
    assert project_cost(12.0, Tariff(0.2, 0.1), 24).total_cost > base
    assert project_cost(10.0, Tariff(0.3, 0.1), 24).total_cost > base
    assert project_cost(10.0, Tariff(0.2, 0.3), 24).total_cost > base
    assert project_cost(10.0, Tariff(0.2, 0.1), 36).total_cost > base

    # seed determinism: byte-identical generator output across runs
    cfg = SimConfig(truth=REF_TRUTH, duration_s=3600.0, interval_s=60.0,
                    noise_sigma_w=2.0, seed=7, workload_profile="bursty")
    m1, p1 = generate(cfg)
    m2, p2 = generate(cfg)
    assert format_metrics(m1).encode() == format_metrics(m2).encode()
    assert format_power(p1).encode() == format_power(p2).encode()


def test_criterion_09_end_to_end_pipeline(tmp_path, capsys):
    """simulate(sigma=0) -> fit -> evaluate through CLI files: exit code 0
    at every stage and a reported MAPE of zero."""
    m = tmp_path / "metrics.csv"
    p = tmp_path / "power.csv"
    model = tmp_path / "model.json"
    assert cli_main(["simulate", "--noise-w", "0", "--seed", "5",
                     "--duration-s", "21600", "--interval-s", "60",
                     "--out-metrics", str(m), "--out-power", str(p)]) == 0
    assert cli_main(["fit", "--metrics", str(m), "--power", str(p),
                     "--out", str(model)]) == 0
    capsys.readouterr()
    assert cli_main(["evaluate", "--model", str(model), "--metrics", str(m),
                     "--power", str(p)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["mape"] == pytest.approx(0.0, abs=1e-9)
