"""Monitoring sites, campaign configuration and the materialized plan."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from enum import Enum

from ..model.types import parse_ts
from ..probe.types import Operation

ROUTINE_INTERVAL_S = 7 * 86400  # both operations tested weekly in routine mode
DEFAULT_CYCLE_DAYS = 6
DEFAULT_RECORDS_PER_DAY = 48


class SiteRole(str, Enum):
    ROUTINE = "routine"
    INTENSIVE = "intensive"
    ALTERNATE = "alternate"


class CampaignMode(str, Enum):
    ROUTINE = "routine"
    INTENSIVE = "intensive"


@dataclass(frozen=True)
class SiteLocation:
    lat: float
    lon: float
    city: str = ""
    country: str = ""
    continent: str = ""

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0 and -180.0 <= self.lon <= 180.0):
            raise ValueError(f"site coordinates out of range: {self.lat}, {self.lon}")


@dataclass
class MonitoringSite:
    site_id: str
    label: str
    location: SiteLocation
    role: SiteRole = SiteRole.INTENSIVE
    active: bool = True

    def to_dict(self) -> dict:
        return {
            "site_id": self.site_id,
            "label": self.label,
            "location": {"lat": self.location.lat, "lon": self.location.lon,
                         "city": self.location.city, "country": self.location.country,
                         "continent": self.location.continent},
            "role": self.role.value,
            "active": self.active,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MonitoringSite":
        loc = d["location"]
        return cls(site_id=d["site_id"], label=d.get("label", d["site_id"]),
                   location=SiteLocation(lat=loc["lat"], lon=loc["lon"],
                                         city=loc.get("city", ""),
                                         country=loc.get("country", ""),
                                         continent=loc.get("continent", "")),
                   role=SiteRole(d.get("role", "intensive")),
                   active=bool(d.get("active", True)))


@dataclass
class CampaignConfig:
    """The operator-supplied subset of a campaign plan (JSON-file friendly)."""

    campaign_id: str
    mode: CampaignMode
    services: list[str]
    sites: list[str]
    start: dt.datetime
    operations: list[Operation] = field(
        default_factory=lambda: [Operation.GET_CAPABILITIES])
    cycle_days: int = DEFAULT_CYCLE_DAYS
    records_per_day_target: int = DEFAULT_RECORDS_PER_DAY
    duration_s: float | None = None  # defaults to one cycle (or one week)
    slot_budget_s: float = 300.0
    expected_probe_cost_s: float = 3.0

    def __post_init__(self):
        if self.cycle_days < 1:
            raise ValueError("cycle_days must be >= 1")
        if self.records_per_day_target < 1:
            raise ValueError("records_per_day_target must be >= 1")
        if not self.operations:
            raise ValueError("at least one operation required")

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        return cls(
            campaign_id=d["campaign_id"],
            mode=CampaignMode(d["mode"]),
            services=list(d["services"]),
            sites=list(d["sites"]),
            start=parse_ts(d["start"]),
            operations=[Operation(o) for o in d.get(
                "operations", ["get_capabilities"])],
            cycle_days=int(d.get("cycle_days", DEFAULT_CYCLE_DAYS)),
            records_per_day_target=int(d.get("records_per_day_target",
                                             DEFAULT_RECORDS_PER_DAY)),
            duration_s=d.get("duration_s"),
            slot_budget_s=float(d.get("slot_budget_s", 300.0)),
            expected_probe_cost_s=float(d.get("expected_probe_cost_s", 3.0)),
        )

    def to_dict(self) -> dict:
        return {
            "campaign_id": self.campaign_id,
            "mode": self.mode.value,
            "services": list(self.services),
            "sites": list(self.sites),
            "start": self.start.astimezone(dt.timezone.utc).isoformat(),
            "operations": [o.value for o in self.operations],
            "cycle_days": self.cycle_days,
            "records_per_day_target": self.records_per_day_target,
            "duration_s": self.duration_s,
            "slot_budget_s": self.slot_budget_s,
            "expected_probe_cost_s": self.expected_probe_cost_s,
        }


@dataclass(frozen=True)
class Fire:
    """One scheduled probe dispatch."""

    due: dt.datetime
    service_id: str
    site_id: str
    operation: Operation
    group_index: int
    day_index: int


@dataclass
class CampaignPlan:
    campaign_id: str
    mode: CampaignMode
    operations: list[Operation]
    services: list[str]
    sites: list[str]
    groups: list[list[str]]
    per_probe_interval: dt.timedelta
    cycle_days: int
    records_per_day_target: int
    start: dt.datetime
    end: dt.datetime
    fires: list[Fire] = field(default_factory=list)

    def __post_init__(self):
        if self.mode is CampaignMode.ROUTINE and \
                self.per_probe_interval != dt.timedelta(seconds=ROUTINE_INTERVAL_S):
            raise ValueError("routine campaigns run on a weekly interval")
        flattened = [s for group in self.groups for s in group]
        if sorted(flattened) != sorted(self.services):
            raise ValueError("groups must partition the service list")
