"""Stability metrics over probe-record windows.

Successability counts correct responses; accessibility counts any
response at all.  The three-way accessibility classing and the two-way
error taxonomy follow directly from the per-record flags, so everything
here is a pure fold over a window of records.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from ..errors import EmptyWindow, NoFailures
from ..probe.types import ErrorClass, Operation, ProbeRecord


class AccessibilityClass(str, Enum):
    ALWAYS_ACCESSIBLE = "always-accessible"
    TEMPORALLY_INACCESSIBLE = "temporally-inaccessible"
    CONSTANTLY_INACCESSIBLE = "constantly-inaccessible"


@dataclass
class QoSSummary:
    service_id: str
    operation: Operation
    window: tuple[dt.datetime, dt.datetime]
    n_probes: int
    n_accessible: int
    n_success: int
    successability: float
    accessibility_class: AccessibilityClass
    rt_min_ms: int | None
    rt_avg_ms: float | None
    rt_max_ms: int | None

    def __post_init__(self):
        if not 0.0 <= self.successability <= 1.0:
            raise ValueError("successability out of [0, 1]")
        if self.rt_min_ms is not None and not (
                self.rt_min_ms <= self.rt_avg_ms <= self.rt_max_ms):
            raise ValueError("response-time aggregates out of order")

    def to_dict(self) -> dict:
        return {
            "service_id": self.service_id,
            "operation": self.operation.value,
            "window": [self.window[0].isoformat(), self.window[1].isoformat()],
            "n_probes": self.n_probes,
            "n_accessible": self.n_accessible,
            "n_success": self.n_success,
            "successability": self.successability,
            "accessibility_class": self.accessibility_class.value,
            "rt_min_ms": self.rt_min_ms,
            "rt_avg_ms": self.rt_avg_ms,
            "rt_max_ms": self.rt_max_ms,
        }


def successability(records: Sequence[ProbeRecord]) -> float:
    """Share of successful responses among all requests in the window."""
    if not records:
        raise EmptyWindow("successability over zero probes")
    return sum(1 for r in records if r.success) / len(records)


def classify_accessibility(records: Sequence[ProbeRecord]) -> AccessibilityClass:
    """Three-way classing on the per-record accessible flag (not success)."""
    if not records:
        raise EmptyWindow("accessibility over zero probes")
    flags = [r.accessible for r in records]
    if all(flags):
        return AccessibilityClass.ALWAYS_ACCESSIBLE
    if not any(flags):
        return AccessibilityClass.CONSTANTLY_INACCESSIBLE
    return AccessibilityClass.TEMPORALLY_INACCESSIBLE


def error_shares(records: Iterable[ProbeRecord]) -> dict[ErrorClass, float]:
    """Share of each error class among the failed records; sums to one."""
    counts = {ErrorClass.SERVER_ACCESS: 0, ErrorClass.REQUEST_PROCESSING: 0}
    total = 0
    for rec in records:
        if rec.error_class is not None:
            counts[rec.error_class] += 1
            total += 1
    if total == 0:
        raise NoFailures("error shares over a window with no failed records")
    return {cls: count / total for cls, count in counts.items()}


def summarize(service_id: str, operation: Operation,
              records: Sequence[ProbeRecord],
              window: tuple[dt.datetime, dt.datetime]) -> QoSSummary:
    """Aggregate one (service, operation) window into a QoSSummary.

    Response-time aggregates cover successful probes only; they are None
    when nothing succeeded.
    """
    if not records:
        raise EmptyWindow(f"no records for {service_id}/{operation.value}")
    succ_times = [r.timing.total_ms for r in records
                  if r.success and r.timing is not None]
    return QoSSummary(
        service_id=service_id,
        operation=operation,
        window=window,
        n_probes=len(records),
        n_accessible=sum(1 for r in records if r.accessible),
        n_success=sum(1 for r in records if r.success),
        successability=successability(records),
        accessibility_class=classify_accessibility(records),
        rt_min_ms=min(succ_times) if succ_times else None,
        rt_avg_ms=sum(succ_times) / len(succ_times) if succ_times else None,
        rt_max_ms=max(succ_times) if succ_times else None,
    )
