"""Parse, validate, and time-align utilization and power-meter CSV streams.

Metrics CSV:  header ``timestamp,cpu,mem,disk,net`` — cpu is a fraction of
total machine CPU in [0, 1]; mem/disk/net are non-negative magnitudes in
whatever units the collector emitted (the model coefficients absorb units).
Power CSV:    header ``timestamp,power_w`` with wall power in watts (> 0).

Timestamps are decimal seconds (epoch or run-relative); only deltas matter.
Both streams must be strictly increasing in time: duplicate timestamps make
"nearest sample" pairing ambiguous and are rejected.
"""

from __future__ import annotations

import math
import statistics
from bisect import bisect_left
from dataclasses import dataclass
from typing import NamedTuple, Sequence, TextIO, Union

METRICS_HEADER = "timestamp,cpu,mem,disk,net"
POWER_HEADER = "timestamp,power_w"


class TraceError(ValueError):
    """Invalid trace data: malformed CSV, out-of-range field, bad ordering."""


class ParseError(TraceError):
    """CSV parse failure, annotated with the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class AlignmentError(TraceError):
    """Alignment produced zero rows; carries the stream and drop counts."""

    def __init__(self, message: str, *, n_metrics: int, n_power: int, n_dropped: int):
        super().__init__(message)
        self.n_metrics = n_metrics
        self.n_power = n_power
        self.n_dropped = n_dropped


@dataclass(frozen=True, slots=True)
class MetricSample:
    """One timestamped observation of resource usage."""

    timestamp: float
    cpu: float
    mem: float
    disk: float
    net: float

    def __post_init__(self):
        for name in ("timestamp", "cpu", "mem", "disk", "net"):
            if not math.isfinite(getattr(self, name)):
                raise TraceError(f"MetricSample.{name} must be finite")
        if not 0.0 <= self.cpu <= 1.0:
            raise TraceError(f"cpu {self.cpu} outside [0, 1]")
        for name in ("mem", "disk", "net"):
            if getattr(self, name) < 0.0:
                raise TraceError(f"{name} must be >= 0, got {getattr(self, name)}")


@dataclass(frozen=True, slots=True)
class PowerSample:
    """One timestamped wall-power reading in watts."""

    timestamp: float
    power_w: float

    def __post_init__(self):
        if not math.isfinite(self.timestamp):
            raise TraceError("PowerSample.timestamp must be finite")
        if not math.isfinite(self.power_w) or self.power_w <= 0.0:
            raise TraceError(f"power_w must be > 0 and finite, got {self.power_w}")


class AlignedRow(NamedTuple):
    timestamp: float
    cpu: float
    mem: float
    disk: float
    net: float
    power_w: float


@dataclass(frozen=True, slots=True)
class AlignmentMeta:
    """Input and drop counts from one alignment pass."""

    n_metrics: int
    n_power: int
    n_dropped: int


@dataclass(frozen=True)
class AlignedTrace:
    """Paired (regressors, power) rows, strictly increasing in time."""

    rows: tuple[AlignedRow, ...]
    source_meta: AlignmentMeta

    def __post_init__(self):
        prev = -math.inf
        for row in self.rows:
            if row.timestamp <= prev:
                raise TraceError(
                    f"aligned rows must be strictly increasing in time "
                    f"(timestamp {row.timestamp} after {prev})"
                )
            prev = row.timestamp

    def __len__(self) -> int:
        return len(self.rows)


def _parse_float(raw: str, field: str, line_no: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(line_no, f"non-numeric value {raw!r} for {field}") from None
    if not math.isfinite(value):
        raise ParseError(line_no, f"non-finite value {raw!r} for {field}")
    return value


def _check_order(timestamp: float, prev: float | None, line_no: int) -> None:
    if prev is None:
        return
    if timestamp < prev:
        raise ParseError(line_no, f"timestamp {timestamp} decreases from previous {prev}")
    if timestamp == prev:
        raise ParseError(line_no, f"duplicate timestamp {timestamp}")


def _iter_csv(text: Union[str, TextIO], header: str):
    """Yield (line_no, fields) for each data line after checking the header."""
    if hasattr(text, "read"):
        text = text.read()
    lines = text.splitlines()
    if not lines or lines[0].strip() != header:
        found = lines[0].strip() if lines else "<empty stream>"
        raise ParseError(1, f"expected header {header!r}, found {found!r}")
    n_fields = header.count(",") + 1
    for line_no, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != n_fields:
            raise ParseError(line_no, f"expected {n_fields} fields, got {len(fields)}")
        yield line_no, fields


def parse_metrics(text: Union[str, TextIO]) -> list[MetricSample]:
    """Parse a metrics CSV stream into samples, verifying order and ranges."""
    samples: list[MetricSample] = []
    prev_ts: float | None = None
    for line_no, fields in _iter_csv(text, METRICS_HEADER):
        ts, cpu, mem, disk, net = (
            _parse_float(raw, name, line_no)
            for raw, name in zip(fields, ("timestamp", "cpu", "mem", "disk", "net"))
        )
        if not 0.0 <= cpu <= 1.0:
            raise ParseError(line_no, f"cpu {cpu} outside [0, 1]")
        for value, name in ((mem, "mem"), (disk, "disk"), (net, "net")):
            if value < 0.0:
                raise ParseError(line_no, f"{name} must be >= 0, got {value}")
        _check_order(ts, prev_ts, line_no)
        prev_ts = ts
        samples.append(MetricSample(ts, cpu, mem, disk, net))
    return samples


def parse_power(text: Union[str, TextIO]) -> list[PowerSample]:
    """Parse a power CSV stream into samples, verifying order and positivity."""
    samples: list[PowerSample] = []
    prev_ts: float | None = None
    for line_no, fields in _iter_csv(text, POWER_HEADER):
        ts = _parse_float(fields[0], "timestamp", line_no)
        power = _parse_float(fields[1], "power_w", line_no)
        if power <= 0.0:
            raise ParseError(line_no, f"power_w must be > 0, got {power}")
        _check_order(ts, prev_ts, line_no)
        prev_ts = ts
        samples.append(PowerSample(ts, power))
    return samples


def format_metrics(samples: Sequence[MetricSample]) -> str:
    """Render samples back to metrics CSV; floats keep round-trip precision."""
    lines = [METRICS_HEADER]
    for s in samples:
        lines.append(f"{s.timestamp!r},{s.cpu!r},{s.mem!r},{s.disk!r},{s.net!r}")
    return "\n".join(lines) + "\n"


def format_power(samples: Sequence[PowerSample]) -> str:
    """Render samples back to power CSV; floats keep round-trip precision."""
    lines = [POWER_HEADER]
    for s in samples:
        lines.append(f"{s.timestamp!r},{s.power_w!r}")
    return "\n".join(lines) + "\n"


def default_tolerance(metrics: Sequence[MetricSample]) -> float:
    """Half the median metric sampling interval, the default pairing window."""
    if len(metrics) < 2:
        raise TraceError("need at least 2 metric samples to derive a tolerance")
    intervals = [b.timestamp - a.timestamp for a, b in zip(metrics, metrics[1:])]
    return statistics.median(intervals) / 2.0


def _require_strictly_increasing(timestamps: Sequence[float], stream: str) -> None:
    for prev, cur in zip(timestamps, timestamps[1:]):
        if cur <= prev:
            raise TraceError(
                f"{stream} timestamps must be strictly increasing "
                f"({cur} after {prev})"
            )


def align(
    metrics: Sequence[MetricSample],
    power: Sequence[PowerSample],
    tolerance_s: float,
) -> AlignedTrace:
    """Pair each metric sample with the nearest power sample within tolerance.

    Metric samples with no power sample in range are dropped (and counted);
    one power sample may serve several metric samples. Equidistant candidates
    resolve to the earlier power sample.
    """
    if not (tolerance_s > 0.0) or not math.isfinite(tolerance_s):
        raise TraceError(f"tolerance_s must be a positive number, got {tolerance_s}")
    metric_ts = [m.timestamp for m in metrics]
    power_ts = [p.timestamp for p in power]
    _require_strictly_increasing(metric_ts, "metric")
    _require_strictly_increasing(power_ts, "power")

    rows: list[AlignedRow] = []
    dropped = 0
    for m in metrics:
        i = bisect_left(power_ts, m.timestamp)
        best = None
        best_dist = math.inf
        # earlier candidate first so that equal distances keep it
        for j in (i - 1, i):
            if 0 <= j < len(power_ts):
                dist = abs(power_ts[j] - m.timestamp)
                if dist < best_dist:
                    best, best_dist = power[j], dist
        if best is not None and best_dist <= tolerance_s:
            rows.append(AlignedRow(m.timestamp, m.cpu, m.mem, m.disk, m.net, best.power_w))
        else:
            dropped += 1

    meta = AlignmentMeta(n_metrics=len(metrics), n_power=len(power), n_dropped=dropped)
    if not rows:
        raise AlignmentError(
            f"no metric sample found a power sample within {tolerance_s} s "
            f"({meta.n_metrics} metric and {meta.n_power} power samples, "
            f"{dropped} dropped)",
            n_metrics=meta.n_metrics,
            n_power=meta.n_power,
            n_dropped=dropped,
        )
    return AlignedTrace(rows=tuple(rows), source_meta=meta)
