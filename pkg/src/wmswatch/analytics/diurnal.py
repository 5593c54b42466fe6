"""Diurnal (virtual-day) response-time series in the service's local time."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Sequence

from ..probe.types import ProbeRecord

DEFAULT_PEAK_FACTOR = 1.5


def timezone_offset_from_longitude(lon: float) -> int:
    """Whole-hour offset estimated from longitude (15 degrees per hour)."""
    return round(lon / 15.0)


@dataclass
class DiurnalSeries:
    tz_offset_hours: int
    hour_mean_ms: list[float | None] = field(default_factory=lambda: [None] * 24)
    hour_max_ms: list[int | None] = field(default_factory=lambda: [None] * 24)
    peak_hours: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"tz_offset_hours": self.tz_offset_hours,
                "hour_mean_ms": self.hour_mean_ms,
                "hour_max_ms": self.hour_max_ms,
                "peak_hours": self.peak_hours}


def diurnal_series(records: Sequence[ProbeRecord],
                   tz_offset_hours: int | None = None,
                   server_lon: float | None = None,
                   peak_factor: float = DEFAULT_PEAK_FACTOR) -> DiurnalSeries:
    """Fold successful probes into a local-time hourly profile.

    The timezone comes from an explicit offset, else from the server
    longitude, else UTC.  Peak windows are the hours whose mean exceeds the
    daily median of hourly means by ``peak_factor``; a flat series has no
    peaks.
    """
    if tz_offset_hours is None:
        tz_offset_hours = (timezone_offset_from_longitude(server_lon)
                           if server_lon is not None else 0)

    buckets: list[list[int]] = [[] for _ in range(24)]
    for rec in records:
        if not rec.success or rec.timing is None:
            continue
        hour = (rec.started_at.hour + tz_offset_hours) % 24
        buckets[hour].append(rec.timing.total_ms)

    series = DiurnalSeries(tz_offset_hours=tz_offset_hours)
    means = []
    for hour, values in enumerate(buckets):
        if values:
            mean = sum(values) / len(values)
            series.hour_mean_ms[hour] = mean
            series.hour_max_ms[hour] = max(values)
            means.append(mean)
    if means:
        median = statistics.median(means)
        threshold = peak_factor * median
        series.peak_hours = [
            hour for hour in range(24)
            if series.hour_mean_ms[hour] is not None
            and series.hour_mean_ms[hour] > threshold
        ]
    return series
