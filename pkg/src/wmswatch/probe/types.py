"""Probe record types and the outcome classification rules.

The error taxonomy is two-valued by design: failures before a usable server
response (DNS, connect, timeout) are server access errors and mean the
operation was inaccessible; failures after the server answered (bad status,
wrong payload, exception reports) are request processing errors and leave
the operation accessible but unsuccessful.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from enum import Enum

from ..model.types import parse_ts

TIMING_SLACK_MS = 5


class Operation(str, Enum):
    GET_CAPABILITIES = "get_capabilities"
    GET_MAP = "get_map"


class ErrorClass(str, Enum):
    SERVER_ACCESS = "server-access-error"
    REQUEST_PROCESSING = "request-processing-error"


class RawOutcome(str, Enum):
    """The six distilled results of one HTTP exchange."""

    DNS_FAIL = "dns-fail"
    CONNECT_FAIL = "connect-fail"
    TIMEOUT = "timeout"
    NON_200 = "non-200"
    WRONG_PAYLOAD = "200-wrong-payload"
    OK = "200-ok"


def classify_outcome(raw: RawOutcome) -> tuple[bool, bool, ErrorClass | None]:
    """Map a raw outcome to (accessible, success, error_class).

    Total and deterministic over all six raw kinds; the payload-specific
    judgment (what counts as a wrong payload) happens upstream in the probe
    operations.
    """
    if raw in (RawOutcome.DNS_FAIL, RawOutcome.CONNECT_FAIL, RawOutcome.TIMEOUT):
        return (False, False, ErrorClass.SERVER_ACCESS)
    if raw in (RawOutcome.NON_200, RawOutcome.WRONG_PAYLOAD):
        return (True, False, ErrorClass.REQUEST_PROCESSING)
    if raw is RawOutcome.OK:
        return (True, True, None)
    raise ValueError(f"unknown raw outcome: {raw!r}")


@dataclass(frozen=True)
class TimingBreakdown:
    """Phase decomposition of one request, integer milliseconds.

    Phases are contiguous: DNS resolution, TCP/TLS connect, request send
    plus server processing (up to the first response byte), and body
    transfer.  The phase sum stays within a small accounting slack of the
    recorded total.
    """

    dns_ms: int
    connect_ms: int
    request_processing_ms: int
    transfer_ms: int
    total_ms: int

    def __post_init__(self):
        for name in ("dns_ms", "connect_ms", "request_processing_ms",
                     "transfer_ms", "total_ms"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if abs(self.phase_sum() - self.total_ms) > TIMING_SLACK_MS:
            raise ValueError(
                f"phase sum {self.phase_sum()} deviates from total {self.total_ms} "
                f"by more than {TIMING_SLACK_MS} ms")

    def phase_sum(self) -> int:
        return (self.dns_ms + self.connect_ms + self.request_processing_ms
                + self.transfer_ms)

    def to_dict(self) -> dict:
        return {"dns_ms": self.dns_ms, "connect_ms": self.connect_ms,
                "request_processing_ms": self.request_processing_ms,
                "transfer_ms": self.transfer_ms, "total_ms": self.total_ms}

    @classmethod
    def from_dict(cls, d: dict) -> "TimingBreakdown":
        return cls(dns_ms=d["dns_ms"], connect_ms=d["connect_ms"],
                   request_processing_ms=d["request_processing_ms"],
                   transfer_ms=d["transfer_ms"], total_ms=d["total_ms"])


@dataclass
class ProbeRecord:
    """One monitoring observation for one operation from one site."""

    service_id: str
    site_id: str
    operation: Operation
    started_at: dt.datetime
    accessible: bool
    success: bool
    timing: TimingBreakdown | None = None
    response_bytes: int = 0
    download_speed_bytes_per_s: float | None = None
    error_class: ErrorClass | None = None
    error_detail: str = ""

    def __post_init__(self):
        if self.success and not self.accessible:
            raise ValueError("success implies accessible")
        if (self.error_class is None) != self.success:
            raise ValueError("error_class must be present iff success is false")
        if self.error_class is ErrorClass.SERVER_ACCESS and self.accessible:
            raise ValueError("server access errors imply inaccessible")
        if self.error_class is ErrorClass.REQUEST_PROCESSING and not self.accessible:
            raise ValueError("request processing errors imply accessible")
        if (self.download_speed_bytes_per_s is None and self.timing is not None
                and self.timing.transfer_ms > 0):
            self.download_speed_bytes_per_s = (
                self.response_bytes / (self.timing.transfer_ms / 1000.0))

    def to_dict(self) -> dict:
        return {
            "service_id": self.service_id,
            "site_id": self.site_id,
            "operation": self.operation.value,
            "started_at": self.started_at.astimezone(dt.timezone.utc).isoformat(),
            "timing": self.timing.to_dict() if self.timing else None,
            "response_bytes": self.response_bytes,
            "download_speed_bytes_per_s": self.download_speed_bytes_per_s,
            "accessible": self.accessible,
            "success": self.success,
            "error_class": self.error_class.value if self.error_class else None,
            "error_detail": self.error_detail,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProbeRecord":
        timing = d.get("timing")
        return cls(
            service_id=d["service_id"],
            site_id=d["site_id"],
            operation=Operation(d["operation"]),
            started_at=parse_ts(d["started_at"]),
            timing=TimingBreakdown.from_dict(timing) if timing else None,
            response_bytes=d.get("response_bytes", 0),
            download_speed_bytes_per_s=d.get("download_speed_bytes_per_s"),
            accessible=d["accessible"],
            success=d["success"],
            error_class=ErrorClass(d["error_class"]) if d.get("error_class") else None,
            error_detail=d.get("error_detail", ""),
        )


@dataclass(frozen=True)
class GetMapSpec:
    """Parameters for the standing GetMap test request.

    The bbox is already in request axis order for the chosen CRS (WMS 1.3.0
    swaps EPSG:4326 to lat/lon).  400x200 output keeps the payload size
    roughly comparable across services even when the image distorts.
    """

    layer_name: str
    crs: str
    bbox: tuple[float, float, float, float]
    format: str
    version: str
    width: int = 400
    height: int = 200

    def __post_init__(self):
        if not self.layer_name:
            raise ValueError("exactly one named layer must be requested")
