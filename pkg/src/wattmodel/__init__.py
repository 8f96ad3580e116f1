"""Server power modeling: fit, predict, integrate, and cost out.

Fits Power = alpha + b_cpu*CPU + b_mem*Memory + b_disk*Disk + b_net*Network
to paired utilization/power-meter traces, evaluates prediction accuracy,
integrates watts into kWh, and projects multi-year cost under an
escalating tariff. A synthetic trace generator with a portable seeded RNG
closes the loop for testing.
"""

from .energy import (
    EnergyError,
    EnergyReport,
    GapWarning,
    integrate,
    integrate_predicted,
)
from .powermodel import (
    EvaluationReport,
    ModelFormatError,
    PowerModel,
    evaluate,
    load_model,
    predict,
    save_model,
    train,
)
from .regression import (
    COLUMN_NAMES,
    DesignMatrix,
    FitDiagnostics,
    InsufficientDataError,
    RankDeficiencyError,
    RegressionError,
    fit_ols,
    student_t_sf,
)
from .simgen import (
    PROFILES,
    FloorWarning,
    GroundTruth,
    PortableRandom,
    SimConfig,
    SimConfigError,
    describe,
    generate,
)
from .tariff import (
    BreakdownReport,
    CategoryShare,
    CostProjection,
    Tariff,
    TariffError,
    YearCost,
    breakdown,
    breakdown_as_json,
    project_cost,
    projection_as_dict,
    render_breakdown_text,
    render_projection_text,
)
from .trace import (
    AlignedRow,
    AlignedTrace,
    AlignmentError,
    AlignmentMeta,
    MetricSample,
    ParseError,
    PowerSample,
    TraceError,
    align,
    default_tolerance,
    format_metrics,
    format_power,
    parse_metrics,
    parse_power,
)

__version__ = "0.1.0"

__all__ = [
    "AlignedRow",
    "AlignedTrace",
    "AlignmentError",
    "AlignmentMeta",
    "BreakdownReport",
    "CategoryShare",
    "COLUMN_NAMES",
    "CostProjection",
    "DesignMatrix",
    "EnergyError",
    "EnergyReport",
    "EvaluationReport",
    "FitDiagnostics",
    "FloorWarning",
    "GapWarning",
    "GroundTruth",
    "InsufficientDataError",
    "MetricSample",
    "ModelFormatError",
    "ParseError",
    "PortableRandom",
    "PowerModel",
    "PowerSample",
    "PROFILES",
    "RankDeficiencyError",
    "RegressionError",
    "SimConfig",
    "SimConfigError",
    "Tariff",
    "TariffError",
    "TraceError",
    "YearCost",
    "align",
    "breakdown",
    "breakdown_as_json",
    "default_tolerance",
    "describe",
    "evaluate",
    "fit_ols",
    "format_metrics",
    "format_power",
    "generate",
    "integrate",
    "integrate_predicted",
    "load_model",
    "parse_metrics",
    "parse_power",
    "predict",
    "project_cost",
    "projection_as_dict",
    "render_breakdown_text",
    "render_projection_text",
    "save_model",
    "student_t_sf",
    "train",
]
