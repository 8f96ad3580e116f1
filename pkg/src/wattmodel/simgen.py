"""Seeded synthetic metric/power trace pairs from a known ground truth.

Both streams share one timestamp grid; power is the ground-truth model
applied to the generated regressors plus optional Gaussian noise, floored
at 1 W so every sample stays a valid meter reading (floorings are counted
and reported via FloorWarning).

Randomness comes from a self-contained xorshift64* generator rather than
any runtime's default RNG, so one seed yields byte-identical traces across
runs and platforms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .trace import MetricSample, PowerSample

PROFILES = ("idle", "constant", "diurnal", "bursty")

# Full-scale regressor magnitudes the profiles swing over. cpu is a
# fraction; the others are sized like raw byte/throughput counters so the
# trace exercises coefficient scales spanning many orders of magnitude.
CPU_SCALE = 1.0
MEM_SCALE = 4.0e6
DISK_SCALE = 400.0
NET_SCALE = 4.0e8
_SCALES = (CPU_SCALE, MEM_SCALE, DISK_SCALE, NET_SCALE)

# Bursty square-wave cycle counts per regressor over the trace duration.
# Pairwise coprime so no two regressors ever lock into the same on/off
# pattern — this is what guarantees full-rank variation by construction.
_BURSTY_CYCLES = (19.0, 29.0, 43.0, 61.0)
_BURSTY_HIGH = 0.8
_BURSTY_LOW = 0.05

_DIURNAL_PERIOD_S = 86_400.0
_DIURNAL_JITTER = 0.05

_MASK64 = (1 << 64) - 1
# Multiplier 2685821657736338717 is the standard xorshift64* output
# scrambler; shift triple (12, 25, 27) is the classic full-period choice.
_XORSHIFT_MULT = 0x2545F4914F6CDD1D
# Golden-ratio increment, used only to displace an all-zero seed (xorshift
# state must never be zero).
_ZERO_SEED_FILL = 0x9E3779B97F4A7C15


class SimConfigError(ValueError):
    """Invalid simulation configuration."""


class FloorWarning(UserWarning):
    """Noise pushed samples below 1 W; they were floored."""


class PortableRandom:
    """xorshift64* uniforms plus Box-Muller Gaussians, platform-independent."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64
        if self._state == 0:
            self._state = _ZERO_SEED_FILL
        self._spare_gaussian: float | None = None

    def next_u64(self) -> int:
        x = self._state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self._state = x
        return (x * _XORSHIFT_MULT) & _MASK64

    def uniform(self) -> float:
        """Uniform in [0, 1), from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def gaussian(self) -> float:
        """Standard normal via Box-Muller; pairs are cached."""
        if self._spare_gaussian is not None:
            z = self._spare_gaussian
            self._spare_gaussian = None
            return z
        u1 = 1.0 - self.uniform()  # (0, 1]: keeps log() finite
        u2 = self.uniform()
        radius = math.sqrt(-2.0 * math.log(u1))
        theta = 2.0 * math.pi * u2
        self._spare_gaussian = radius * math.sin(theta)
        return radius * math.cos(theta)


@dataclass(frozen=True)
class GroundTruth:
    """The generating model's coefficients."""

    alpha: float
    beta_cpu: float
    beta_mem: float
    beta_disk: float
    beta_net: float

    def __post_init__(self):
        for name in ("alpha", "beta_cpu", "beta_mem", "beta_disk", "beta_net"):
            if not math.isfinite(getattr(self, name)):
                raise SimConfigError(f"truth coefficient {name} must be finite")


@dataclass(frozen=True)
class SimConfig:
    truth: GroundTruth
    duration_s: float
    interval_s: float
    noise_sigma_w: float = 0.0
    seed: int = 1
    workload_profile: str = "bursty"

    def __post_init__(self):
        if not math.isfinite(self.interval_s) or self.interval_s <= 0.0:
            raise SimConfigError(f"interval_s must be > 0, got {self.interval_s}")
        if not math.isfinite(self.duration_s) or self.duration_s < 2.0 * self.interval_s:
            raise SimConfigError(
                f"duration_s must be at least 2x interval_s, got "
                f"{self.duration_s} vs interval {self.interval_s}"
            )
        if not math.isfinite(self.noise_sigma_w) or self.noise_sigma_w < 0.0:
            raise SimConfigError(f"noise_sigma_w must be >= 0, got {self.noise_sigma_w}")
        if self.workload_profile not in PROFILES:
            raise SimConfigError(
                f"unknown workload_profile {self.workload_profile!r}; "
                f"expected one of {PROFILES}"
            )
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise SimConfigError(f"seed must be an integer, got {self.seed!r}")


def _regressors(config: SimConfig, rng: PortableRandom):
    """Per-sample regressor generator for the configured profile.

    Any per-profile random state (phases) is drawn up front from the shared
    stream so sample values depend only on seed and sample index order.
    """
    profile = config.workload_profile
    if profile == "idle":
        return lambda t: (0.0, 0.0, 0.0, 0.0)

    if profile == "constant":
        mid = tuple(0.5 * s for s in _SCALES)
        return lambda t: mid

    if profile == "diurnal":
        phases = tuple(rng.uniform() * 2.0 * math.pi for _ in _SCALES)

        def diurnal(t: float):
            values = []
            for scale, phase in zip(_SCALES, phases):
                base = 0.5 + 0.4 * math.sin(2.0 * math.pi * t / _DIURNAL_PERIOD_S + phase)
                jitter = _DIURNAL_JITTER * (2.0 * rng.uniform() - 1.0)
                values.append(min(scale, max(0.0, scale * (base + jitter))))
            return tuple(values)

        return diurnal

    periods = tuple(config.duration_s / c for c in _BURSTY_CYCLES)
    phases = tuple(rng.uniform() * p for p in periods)

    def bursty(t: float):
        values = []
        for scale, period, phase in zip(_SCALES, periods, phases):
            on = (t + phase) % period < 0.5 * period
            values.append(scale * (_BURSTY_HIGH if on else _BURSTY_LOW))
        return tuple(values)

    return bursty


def generate(config: SimConfig) -> tuple[list[MetricSample], list[PowerSample]]:
    """Produce paired metric and power streams on one timestamp grid."""
    rng = PortableRandom(config.seed)
    sample_fn = _regressors(config, rng)
    truth = config.truth
    n = max(2, int(round(config.duration_s / config.interval_s)))

    metrics: list[MetricSample] = []
    power: list[PowerSample] = []
    floored = 0
    for i in range(n):
        t = i * config.interval_s
        cpu, mem, disk, net = sample_fn(t)
        watts = (
            truth.alpha
            + truth.beta_cpu * cpu
            + truth.beta_mem * mem
            + truth.beta_disk * disk
            + truth.beta_net * net
        )
        if config.noise_sigma_w > 0.0:
            watts += config.noise_sigma_w * rng.gaussian()
        if watts < 1.0:
            watts = 1.0
            floored += 1
        metrics.append(MetricSample(t, cpu, mem, disk, net))
        power.append(PowerSample(t, watts))

    if floored:
        warnings.warn(
            f"{floored} of {n} generated power samples fell below 1 W and were floored",
            FloorWarning,
            stacklevel=2,
        )
    return metrics, power


def describe(config: SimConfig) -> str:
    """Stable human-readable summary of the configuration."""
    t = config.truth
    lines = [
        f"workload profile: {config.workload_profile}",
        f"duration_s:       {config.duration_s!r}",
        f"interval_s:       {config.interval_s!r}",
        f"noise_sigma_w:    {config.noise_sigma_w!r}",
        f"seed:             {config.seed}",
        f"truth alpha:      {t.alpha!r} W baseline",
        f"truth beta_cpu:   {t.beta_cpu!r}",
        f"truth beta_mem:   {t.beta_mem!r}",
        f"truth beta_disk:  {t.beta_disk!r}",
        f"truth beta_net:   {t.beta_net!r}",
    ]
    return "\n".join(lines)
