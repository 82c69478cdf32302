"""Co-jump detection and systemic crash analysis on minute return panels."""

from cocrash._core import (
    CocrashError,
    CrashTable,
    JumpEvent,
    NullDistribution,
    SessionCalendar,
    analyze,
    average_ranks,
    bipower_scale,
    build_null,
    crash_weighted_dtv,
    decreasing_ranks,
    deseasonalize,
    detect_jumps,
    estimate_periodicity,
    format_iso_minute,
    liquid_crash_fraction,
    parse_iso_minute,
    simulate,
    spearman,
    volume_frequency_correlation,
    weighted_permutation,
)

__all__ = [
    "CocrashError",
    "CrashTable",
    "JumpEvent",
    "NullDistribution",
    "SessionCalendar",
    "analyze",
    "average_ranks",
    "bipower_scale",
    "build_null",
    "crash_weighted_dtv",
    "decreasing_ranks",
    "deseasonalize",
    "detect_jumps",
    "estimate_periodicity",
    "format_iso_minute",
    "liquid_crash_fraction",
    "parse_iso_minute",
    "simulate",
    "spearman",
    "volume_frequency_correlation",
    "weighted_permutation",
]
