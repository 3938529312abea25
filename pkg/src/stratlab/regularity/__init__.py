from .limits import (
    ArcAnalysis,
    DirectionClass,
    Kind,
    Lemma2Record,
    LimitOutcome,
    Pairing,
    PreconditionError,
    lemma2_check,
    limit_direction,
    limit_ratio_a,
    limit_ratio_delta,
    numeric_ratios,
    ratio_limit,
)
from .probes import ProbeError, ProbeResult, probe_ring_max
from .report import ConsistencyError, RegularityReport, analyze_arc, format_row
from .sines import (
    DegenerateInput,
    circle,
    log_spiral,
    realified_secant_sine,
    root_spiral,
    sin_angle,
    sine_subspace_subspace,
    sine_vector_subspace,
    spiral_angle,
)

__all__ = [
    "ArcAnalysis",
    "ConsistencyError",
    "DegenerateInput",
    "circle",
    "DirectionClass",
    "Kind",
    "Lemma2Record",
    "LimitOutcome",
    "Pairing",
    "PreconditionError",
    "ProbeError",
    "ProbeResult",
    "RegularityReport",
    "analyze_arc",
    "format_row",
    "lemma2_check",
    "limit_direction",
    "limit_ratio_a",
    "limit_ratio_delta",
    "log_spiral",
    "numeric_ratios",
    "probe_ring_max",
    "ratio_limit",
    "realified_secant_sine",
    "root_spiral",
    "sin_angle",
    "sine_subspace_subspace",
    "sine_vector_subspace",
    "spiral_angle",
]
