"""Shared test fixtures and small builders."""

import pytest

from wattmodel import (
    AlignedRow,
    AlignedTrace,
    AlignmentMeta,
    FitDiagnostics,
    GroundTruth,
    PowerModel,
)

# Coefficients used throughout as a realistic ground truth: baseline watts
# plus per-unit weights whose magnitudes span ten orders, exercising the
# solver's scaling behavior.
REF_TRUTH = GroundTruth(
    alpha=107.5,
    beta_cpu=124.9,
    beta_mem=5.471e-06,
    beta_disk=3.661e-02,
    beta_net=3.382e-08,
)


def make_trace(cpu, mem, disk, net, power, start=0.0, step=60.0):
    """Build an AlignedTrace directly from parallel value sequences."""
    rows = tuple(
        AlignedRow(start + i * step, c, m, d, e, p)
        for i, (c, m, d, e, p) in enumerate(zip(cpu, mem, disk, net, power))
    )
    meta = AlignmentMeta(n_metrics=len(rows), n_power=len(rows), n_dropped=0)
    return AlignedTrace(rows=rows, source_meta=meta)


def exact_model(alpha, beta_cpu=0.0, beta_mem=0.0, beta_disk=0.0, beta_net=0.0):
    """A PowerModel with hand-set coefficients and placeholder diagnostics."""
    diag = FitDiagnostics(
        r_squared=1.0,
        residual_sigma=0.0,
        std_errors=(0.0,) * 5,
        t_stats=(0.0,) * 5,
        p_values=(0.0,) * 5,
        df=10,
        n_samples=15,
    )
    return PowerModel(
        alpha=alpha,
        beta_cpu=beta_cpu,
        beta_mem=beta_mem,
        beta_disk=beta_disk,
        beta_net=beta_net,
        diagnostics=diag,
        hardware_id="bench",
        created_at=0.0,
    )


@pytest.fixture
def ref_truth():
    return REF_TRUTH
