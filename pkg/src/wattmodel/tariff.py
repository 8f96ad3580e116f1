"""Escalating-tariff cost projection and cost-category breakdown reports.

Escalation steps annually: the horizon is split into 365-day years (the
final partial year pro-rated by days) and year k is billed at
rate * (1 + escalation)^k. Costs are kept at full float precision; rounding
to cents happens only when rendering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

DAYS_PER_YEAR = 365.0
MONTHS_PER_YEAR = 12

ENERGY_CATEGORY_LABEL = "Energy usage"


class TariffError(ValueError):
    """Invalid tariff parameters or category costs."""


@dataclass(frozen=True)
class Tariff:
    rate_per_kwh: float
    escalation_per_year: float = 0.0
    currency_label: str = "$"

    def __post_init__(self):
        if not math.isfinite(self.rate_per_kwh) or self.rate_per_kwh <= 0.0:
            raise TariffError(f"rate_per_kwh must be > 0, got {self.rate_per_kwh}")
        if not math.isfinite(self.escalation_per_year) or self.escalation_per_year < 0.0:
            raise TariffError(
                f"escalation_per_year must be >= 0, got {self.escalation_per_year}"
            )


class YearCost(NamedTuple):
    year_index: int
    kwh: float
    rate_used: float
    cost: float


@dataclass(frozen=True)
class CostProjection:
    yearly: tuple[YearCost, ...]
    total_cost: float
    horizon_months: int


class CategoryShare(NamedTuple):
    label: str
    cost: float
    percent: float


@dataclass(frozen=True)
class BreakdownReport:
    categories: tuple[CategoryShare, ...]
    total: float


def project_cost(kwh_per_day: float, tariff: Tariff, horizon_months: int) -> CostProjection:
    """Cost schedule for a constant daily energy demand under the tariff."""
    if not math.isfinite(kwh_per_day) or kwh_per_day <= 0.0:
        raise TariffError(f"kwh_per_day must be > 0, got {kwh_per_day}")
    if horizon_months < 1:
        raise TariffError(f"horizon_months must be >= 1, got {horizon_months}")

    days_left = horizon_months * DAYS_PER_YEAR / MONTHS_PER_YEAR
    yearly: list[YearCost] = []
    year = 0
    while days_left > 0.0:
        days = min(DAYS_PER_YEAR, days_left)
        rate = tariff.rate_per_kwh * (1.0 + tariff.escalation_per_year) ** year
        kwh = kwh_per_day * days
        yearly.append(YearCost(year_index=year, kwh=kwh, rate_used=rate, cost=kwh * rate))
        days_left -= days
        year += 1
    return CostProjection(
        yearly=tuple(yearly),
        total_cost=math.fsum(y.cost for y in yearly),
        horizon_months=horizon_months,
    )


def breakdown(
    energy_cost: float,
    other_categories: Sequence[tuple[str, float]],
    energy_label: str = ENERGY_CATEGORY_LABEL,
) -> BreakdownReport:
    """Append the energy line to the other categories and compute shares.

    Categories come back sorted by descending cost (ties keep input order,
    energy last).
    """
    if not math.isfinite(energy_cost) or energy_cost < 0.0:
        raise TariffError(f"energy cost must be >= 0, got {energy_cost}")
    entries = list(other_categories) + [(energy_label, energy_cost)]
    for label, cost in entries:
        if not math.isfinite(cost) or cost < 0.0:
            raise TariffError(f"category {label!r} cost must be >= 0, got {cost}")
    total = math.fsum(cost for _, cost in entries)
    if total <= 0.0:
        raise TariffError("all category costs are zero; percentages are undefined")
    entries.sort(key=lambda item: -item[1])
    categories = tuple(
        CategoryShare(label=label, cost=cost, percent=cost / total * 100.0)
        for label, cost in entries
    )
    return BreakdownReport(categories=categories, total=total)


def render_projection_text(projection: CostProjection, currency: str = "$") -> str:
    """Year-by-year schedule as an aligned plain-text table."""
    header = ("Year", "kWh", f"Rate ({currency}/kWh)", f"Cost ({currency})")
    rows = [
        (str(y.year_index), f"{y.kwh:,.2f}", f"{y.rate_used:.6g}", f"{y.cost:,.2f}")
        for y in projection.yearly
    ]
    rows.append(("Total", "", "", f"{projection.total_cost:,.2f}"))
    return _render_table(header, rows)


def render_breakdown_text(report: BreakdownReport, currency: str = "$") -> str:
    """Category/cost/percent breakdown as an aligned plain-text table."""
    header = ("Category", f"Cost ({currency})", "Percent")
    rows = [
        (c.label, f"{c.cost:,.2f}", f"{c.percent:.1f}%") for c in report.categories
    ]
    rows.append(("Total", f"{report.total:,.2f}", "100.0%"))
    return _render_table(header, rows)


def projection_as_dict(projection: CostProjection) -> dict:
    return {
        "horizon_months": projection.horizon_months,
        "yearly": [
            {
                "year_index": y.year_index,
                "kwh": y.kwh,
                "rate_used": y.rate_used,
                "cost": y.cost,
            }
            for y in projection.yearly
        ],
        "total_cost": projection.total_cost,
    }


def breakdown_as_json(report: BreakdownReport) -> list[dict]:
    """The breakdown's machine form: a list of {label, cost, percent}."""
    return [
        {"label": c.label, "cost": c.cost, "percent": c.percent}
        for c in report.categories
    ]


def _render_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [
        max(len(header[i]), max((len(r[i]) for r in rows), default=0))
        for i in range(len(header))
    ]
    def fmt(cells):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(cells)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines)
