"""Highly responsive prefix detection for IPv4 scan results."""

from ._core import (
    DEFAULT_THRESHOLD,
    STRICT_THRESHOLD,
    AppResult,
    Error,
    HrpThreshold,
    IngestError,
    IoError,
    PrefixStat,
    PrefixTable,
    RoutingTable,
    SamplePolicy,
    ScanMeta,
    TargetPlan,
    UsageError,
    aggregate,
    aggregate_file,
    build_plan,
    classify,
    classify_sample,
    enrich,
    escalate,
    evaluate_plan,
    histogram,
    hrp_address_share,
    hrp_set,
    stats_csv,
    vantage_diff,
)

__all__ = [name for name in dir() if not name.startswith("_")]
