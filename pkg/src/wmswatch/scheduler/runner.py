"""Campaign execution: one coordinator clock, per-site dispatch, report.

At desk scale the sites are in-process workers driven by a single logical
clock; a real deployment runs one agent per machine speaking the same
record format to the store.  The coordinator owns all cross-site state:
the pause switch, the per-host limiter and alternate-site activation.
"""

from __future__ import annotations

import datetime as dt
import time
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import urlsplit

from ..probe.types import ProbeRecord
from .types import CampaignPlan, Fire, MonitoringSite, SiteRole

CONSECUTIVE_MISSES_TO_FAIL_OVER = 3

ProbeEngine = Callable[[Fire], ProbeRecord]
Sink = Callable[[ProbeRecord], None]
Control = Callable[[], str]  # "running" | "paused" | "cancelled"


class SimClock:
    """Virtual clock: sleeping advances time instantly."""

    def __init__(self, start: dt.datetime):
        self._now = start

    def now(self) -> dt.datetime:
        return self._now

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            self._now += dt.timedelta(seconds=seconds)

    def sleep_until(self, when: dt.datetime) -> None:
        if when > self._now:
            self._now = when


class RealClock:
    def now(self) -> dt.datetime:
        return dt.datetime.now(dt.timezone.utc)

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)

    def sleep_until(self, when: dt.datetime) -> None:
        self.sleep((when - self.now()).total_seconds())


@dataclass
class RunReport:
    due: int = 0
    fired: int = 0
    missed: int = 0
    late: int = 0
    missed_by_reason: dict[str, int] = field(default_factory=dict)
    lateness_histogram: dict[str, int] = field(default_factory=dict)
    failovers: dict[str, str] = field(default_factory=dict)

    def miss(self, reason: str) -> None:
        self.missed += 1
        self.missed_by_reason[reason] = self.missed_by_reason.get(reason, 0) + 1

    def record_lateness(self, lateness_s: float, bound_s: float) -> None:
        if lateness_s > bound_s:
            self.late += 1
        for label, upper in (("<1s", 1.0), ("1-5s", 5.0), ("5-10s", 10.0)):
            if lateness_s < upper:
                self.lateness_histogram[label] = \
                    self.lateness_histogram.get(label, 0) + 1
                return
        self.lateness_histogram[">=10s"] = \
            self.lateness_histogram.get(">=10s", 0) + 1

    def to_dict(self) -> dict:
        return {
            "due": self.due, "fired": self.fired, "missed": self.missed,
            "late": self.late, "missed_by_reason": dict(self.missed_by_reason),
            "lateness_histogram": dict(self.lateness_histogram),
            "failovers": dict(self.failovers),
        }


def _find_alternate(failed: MonitoringSite,
                    sites: dict[str, MonitoringSite]) -> MonitoringSite | None:
    for site in sites.values():
        if (site.role is SiteRole.ALTERNATE and not site.active
                and site.location.city == failed.location.city
                and site.site_id != failed.site_id):
            return site
    return None


def run_campaign(plan: CampaignPlan, engine: ProbeEngine, sink: Sink,
                 clock=None, sites: dict[str, MonitoringSite] | None = None,
                 control: Control | None = None,
                 lateness_bound_s: float = 10.0,
                 host_min_interval_s: float = 0.0,
                 host_of: Callable[[str], str] | None = None) -> RunReport:
    """Dispatch every due fire of the plan, in order, through the engine.

    A fire is *missed* (never fired) when its site is inactive or the
    campaign is paused at its due time; everything else is fired, however
    late.  fired + missed always equals the number of due fires.  A site
    missing three consecutive fires fails over to an inactive alternate at
    the same city, if one exists.
    """
    clock = clock or SimClock(plan.start)
    sites = sites or {}
    report = RunReport(due=len(plan.fires))
    consecutive_misses: dict[str, int] = {}
    alias: dict[str, str] = {}
    next_allowed: dict[str, dt.datetime] = {}

    for index, fire in enumerate(plan.fires):
        # cancellation stops the clock immediately: everything left is missed
        if control is not None and control() == "cancelled":
            for _ in range(len(plan.fires) - index):
                report.miss("cancelled")
            break
        clock.sleep_until(fire.due)

        state = control() if control is not None else "running"
        if state == "cancelled":
            for _ in range(len(plan.fires) - index):
                report.miss("cancelled")
            break
        if state == "paused":
            report.miss("paused")
            continue

        site_id = alias.get(fire.site_id, fire.site_id)
        site = sites.get(site_id)
        if site is not None and not site.active:
            report.miss("site-inactive")
            misses = consecutive_misses.get(fire.site_id, 0) + 1
            consecutive_misses[fire.site_id] = misses
            if misses >= CONSECUTIVE_MISSES_TO_FAIL_OVER and site_id == fire.site_id:
                alternate = _find_alternate(site, sites)
                if alternate is not None:
                    alternate.active = True
                    alias[fire.site_id] = alternate.site_id
                    report.failovers[fire.site_id] = alternate.site_id
            continue
        consecutive_misses[fire.site_id] = 0

        if host_min_interval_s > 0 and host_of is not None:
            host = host_of(fire.service_id)
            allowed = next_allowed.get(host)
            if allowed is not None and allowed > clock.now():
                clock.sleep_until(allowed)
            next_allowed[host] = clock.now() + dt.timedelta(
                seconds=host_min_interval_s)

        lateness = (clock.now() - fire.due).total_seconds()
        report.record_lateness(lateness, lateness_bound_s)

        dispatched = fire if site_id == fire.site_id else Fire(
            due=fire.due, service_id=fire.service_id, site_id=site_id,
            operation=fire.operation, group_index=fire.group_index,
            day_index=fire.day_index)
        record = engine(dispatched)
        sink(record)
        report.fired += 1

    return report


def host_of_url(url: str) -> str:
    return (urlsplit(url).hostname or "").lower()
