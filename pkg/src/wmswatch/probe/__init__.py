"""Single monitoring requests with timing decomposition and outcome classes."""

from .engine import (
    DEFAULT_TIMEOUT_S,
    VersionSupport,
    build_getmap_spec,
    probe_getcapabilities,
    probe_getmap,
    probe_version_support,
)
from .transport import (
    Exchange,
    HttpTransport,
    MockTransport,
    Transport,
    TransportFailure,
    TransportResult,
    synthetic_timing,
)
from .types import (
    TIMING_SLACK_MS,
    ErrorClass,
    GetMapSpec,
    Operation,
    ProbeRecord,
    RawOutcome,
    TimingBreakdown,
    classify_outcome,
)

__all__ = [
    "DEFAULT_TIMEOUT_S",
    "TIMING_SLACK_MS",
    "ErrorClass",
    "Exchange",
    "GetMapSpec",
    "HttpTransport",
    "MockTransport",
    "Operation",
    "ProbeRecord",
    "RawOutcome",
    "TimingBreakdown",
    "Transport",
    "TransportFailure",
    "TransportResult",
    "VersionSupport",
    "build_getmap_spec",
    "classify_outcome",
    "probe_getcapabilities",
    "probe_getmap",
    "probe_version_support",
    "synthetic_timing",
]
