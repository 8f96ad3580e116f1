"""Ordinary least squares with full inferential diagnostics.

The solver is written directly on Householder reflections rather than the
normal equations: the regressor columns here routinely span ten orders of
magnitude (a CPU fraction next to raw byte counters), and squaring the
condition number via X'X is not acceptable on such designs. Q is never
materialized; reflections are applied to the response in place.

Two-sided Student-t tail probabilities come from the regularized incomplete
beta function, evaluated by continued fraction (modified Lentz). Extreme
tails underflow cleanly to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

COLUMN_NAMES = ("intercept", "cpu", "mem", "disk", "net")

# R diagonal below RANK_RTOL times the column norm flags the column as
# linearly dependent (constant or duplicated); merely ill-scaled columns pass.
RANK_RTOL = 1e-10

# p-values this small are indistinguishable from zero in double precision
# reporting; they are returned as exactly 0.0.
P_UNDERFLOW = 1e-300

MIN_ROWS = len(COLUMN_NAMES) + 1  # 5 parameters + 1 residual degree of freedom


class RegressionError(ValueError):
    """Base class for fit failures."""


class InsufficientDataError(RegressionError):
    """Fewer rows than parameters plus one residual degree of freedom."""


class RankDeficiencyError(RegressionError):
    """A design column is (numerically) linearly dependent on the others."""

    def __init__(self, column: str):
        super().__init__(
            f"design matrix is rank deficient: column {column!r} carries no "
            f"independent variation"
        )
        self.column = column


@dataclass(frozen=True)
class FitDiagnostics:
    """Per-coefficient inference plus whole-fit summary statistics."""

    r_squared: float
    residual_sigma: float
    std_errors: tuple[float, ...]
    t_stats: tuple[float, ...]
    p_values: tuple[float, ...]
    df: int
    n_samples: int


@dataclass(frozen=True)
class DesignMatrix:
    """Intercept column of ones plus the four regressors, with the response."""

    x: np.ndarray  # (n, 5); column 0 all ones
    y: np.ndarray  # (n,)

    def __post_init__(self):
        x, y = np.asarray(self.x, dtype=float), np.asarray(self.y, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x.ndim != 2 or x.shape[1] != len(COLUMN_NAMES):
            raise RegressionError(f"design must have {len(COLUMN_NAMES)} columns")
        if y.shape != (x.shape[0],):
            raise RegressionError("response length must match design rows")
        if x.shape[0] < MIN_ROWS:
            raise InsufficientDataError(
                f"need at least {MIN_ROWS} rows to fit {len(COLUMN_NAMES)} "
                f"parameters, got {x.shape[0]}"
            )
        if not np.isfinite(x).all() or not np.isfinite(y).all():
            raise RegressionError("design matrix entries must be finite")
        if not (x[:, 0] == 1.0).all():
            raise RegressionError("first design column must be all ones")

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @classmethod
    def from_regressors(cls, cpu, mem, disk, net, power) -> "DesignMatrix":
        cols = [np.asarray(c, dtype=float) for c in (cpu, mem, disk, net)]
        y = np.asarray(power, dtype=float)
        x = np.column_stack([np.ones(len(y))] + cols)
        return cls(x=x, y=y)


def _householder_reduce(x: np.ndarray, y: np.ndarray):
    """Reduce [x | y] by Householder reflections; return (R, Q'y).

    Each reflection H = I - 2 v v'/(v'v) zeroes one column below the
    diagonal and is applied to the trailing columns and to y, so Q itself
    is never formed. A zero pivot column is skipped and surfaces as a zero
    R diagonal for the rank check.
    """
    a = np.array(x, dtype=float, copy=True)
    z = np.array(y, dtype=float, copy=True)
    n, p = a.shape
    for j in range(p):
        v = a[j:, j].copy()
        norm = math.sqrt(float(v @ v))
        if norm == 0.0:
            continue
        # sign chosen to add magnitudes, never cancel
        v[0] += norm if v[0] >= 0.0 else -norm
        scale = 2.0 / float(v @ v)
        a[j:, j:] -= np.outer(v, scale * (v @ a[j:, j:]))
        z[j:] -= v * (scale * float(v @ z[j:]))
    return np.triu(a[:p, :p]), z[:p]


def _back_substitute(r: np.ndarray, b: np.ndarray) -> np.ndarray:
    p = r.shape[0]
    out = np.zeros(p)
    for i in range(p - 1, -1, -1):
        out[i] = (b[i] - float(r[i, i + 1 :] @ out[i + 1 :])) / r[i, i]
    return out


def _upper_inverse(r: np.ndarray) -> np.ndarray:
    p = r.shape[0]
    inv = np.zeros((p, p))
    eye = np.eye(p)
    for j in range(p):
        inv[:, j] = _back_substitute(r, eye[:, j])
    return inv


def fit_ols(design: DesignMatrix) -> tuple[np.ndarray, FitDiagnostics]:
    """Least-squares coefficients plus standard errors, t-stats, p-values, R².

    Standard errors use the unbiased residual variance and the diagonal of
    (R'R)^-1; R² is measured against the mean-only model.
    """
    x, y = design.x, design.y
    n, p = x.shape
    col_norms = np.sqrt((x * x).sum(axis=0))

    r, qty = _householder_reduce(x, y)
    for j in range(p):
        if abs(r[j, j]) <= RANK_RTOL * col_norms[j]:
            raise RankDeficiencyError(COLUMN_NAMES[j])

    beta = _back_substitute(r, qty)
    resid = y - x @ beta
    ssr = float(resid @ resid)
    df = n - p
    sigma2 = ssr / df
    residual_sigma = math.sqrt(sigma2)

    r_inv = _upper_inverse(r)
    xtx_inv_diag = (r_inv * r_inv).sum(axis=1)
    std_errors = np.sqrt(sigma2 * xtx_inv_diag)

    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = np.where(
            std_errors > 0.0,
            beta / std_errors,
            np.where(beta == 0.0, 0.0, np.sign(beta) * np.inf),
        )
    p_values = tuple(student_t_sf(float(t), df) for t in t_stats)

    sst = float(((y - y.mean()) ** 2).sum())
    if sst == 0.0:
        r_squared = 1.0 if ssr == 0.0 else 0.0
    else:
        r_squared = min(1.0, max(0.0, 1.0 - ssr / sst))

    diagnostics = FitDiagnostics(
        r_squared=r_squared,
        residual_sigma=residual_sigma,
        std_errors=tuple(float(v) for v in std_errors),
        t_stats=tuple(float(v) for v in t_stats),
        p_values=p_values,
        df=df,
        n_samples=n,
    )
    return beta, diagnostics


def student_t_sf(t: float, df: int) -> float:
    """Two-sided tail probability P(|T_df| >= |t|).

    Uses the identity p = I_x(df/2, 1/2) with x = df/(df + t²), where I is
    the regularized incomplete beta function. Exactly symmetric in t <-> -t
    (only t² enters); p = 1 at t = 0; returns 0.0 once the tail underflows.
    """
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    if math.isnan(t):
        raise ValueError("t must not be NaN")
    if math.isinf(t):
        return 0.0
    tt = t * t
    if tt == 0.0:
        return 1.0
    x = df / (df + tt)
    p = _betainc(0.5 * df, 0.5, x)
    if p < P_UNDERFLOW:
        return 0.0
    return min(1.0, max(0.0, p))


def _betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) by continued fraction.

    The symmetry I_x(a,b) = 1 - I_{1-x}(b,a) routes evaluation to whichever
    side the continued fraction converges fast on. The prefactor
    x^a (1-x)^b / B(a,b) is assembled in log space so deep tails underflow
    to 0 instead of overflowing intermediate terms.
    """
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front) if ln_front > -745.0 else 0.0
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


_CF_MAX_ITER = 300
_CF_EPS = 1e-16
_CF_TINY = 1e-300  # guards against division by zero in Lentz's method


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, modified Lentz scheme."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h
