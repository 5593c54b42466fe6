"""Candidate selection, grouping, fire-time generation and cycle folding.

The intensive schedule realizes the merged five-minute lattice like this:
every site probes each service once per ``24h / records_per_day`` (the
actual interval, 30 min by default), and day *d* of the cycle shifts all of
that day's fires by ``d * interval / cycle_days`` (5 min by default).
Folding one full cycle modulo 24 h then interleaves the days into one
virtual day with near-equal spacing.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence
from urllib.parse import urlsplit

from ..errors import InfeasibleSchedule
from ..model.types import ServiceRecord
from ..probe.types import ProbeRecord
from .types import (
    CampaignConfig,
    CampaignMode,
    CampaignPlan,
    Fire,
    ROUTINE_INTERVAL_S,
)

DEFAULT_PROVIDER_CAP = 5


def select_candidates(services: Sequence[ServiceRecord],
                      cap_per_provider: int = DEFAULT_PROVIDER_CAP,
                      resolve_ip: Callable[[str], str | None] | None = None
                      ) -> list[str]:
    """Pick services for intensive monitoring while capping load per origin.

    Greedy scan in stable id order; a service is admitted only while the
    counts for its host name, its resolved IP (when a resolver is given)
    and its provider name all sit below the cap.  Admission bumps all
    applicable counters, so five services from one provider spread over
    five hosts still exhaust that provider's budget.
    """
    host_count: dict[str, int] = {}
    ip_count: dict[str, int] = {}
    provider_count: dict[str, int] = {}
    admitted: list[str] = []

    for svc in sorted(services, key=lambda s: s.id):
        host = (urlsplit(svc.canonical_url).hostname or "").lower()
        ip = resolve_ip(host) if resolve_ip else None
        provider = (svc.provider_name or "").strip().lower() or None

        keys = [(host_count, host)]
        if ip:
            keys.append((ip_count, ip))
        if provider:
            keys.append((provider_count, provider))
        if any(counter.get(key, 0) >= cap_per_provider for counter, key in keys):
            continue
        for counter, key in keys:
            counter[key] = counter.get(key, 0) + 1
        admitted.append(svc.id)
    return admitted


def partition_groups(service_ids: Sequence[str], slot_budget_s: float,
                     expected_probe_cost_s: float,
                     per_probe_interval_s: float | None = None
                     ) -> list[list[str]]:
    """Contiguous groups sized so one group's probes fit in one slot.

    When the probe interval is given, the schedule must be able to visit
    every group within it: group_count * slot_budget <= interval, otherwise
    the schedule is infeasible.
    """
    if expected_probe_cost_s <= 0:
        raise ValueError("expected_probe_cost_s must be > 0")
    if slot_budget_s < expected_probe_cost_s:
        raise ValueError("slot_budget_s must cover at least one probe")
    ids = list(service_ids)
    if not ids:
        return []
    group_size = max(int(slot_budget_s // expected_probe_cost_s), 1)
    groups = [ids[i:i + group_size] for i in range(0, len(ids), group_size)]
    if per_probe_interval_s is not None:
        needed = len(groups) * slot_budget_s
        if needed > per_probe_interval_s:
            raise InfeasibleSchedule(
                f"{len(groups)} groups x {slot_budget_s:.0f}s slots need "
                f"{needed:.0f}s but the probe interval is {per_probe_interval_s:.0f}s")
    return groups


def build_plan(config: CampaignConfig) -> CampaignPlan:
    """Materialize deterministic fire times for a campaign.

    Intensive mode: per-site interval = 24h / records_per_day_target, with
    the per-day phase offset described in the module docstring; services are
    staggered group by group inside each slot.  Routine mode: one fire per
    operation per site per 7-day window.
    """
    if config.mode is CampaignMode.ROUTINE:
        interval_s = float(ROUTINE_INTERVAL_S)
        duration_s = config.duration_s or float(ROUTINE_INTERVAL_S)
        groups = [list(config.services)] if config.services else []
    else:
        interval_s = 86400.0 / config.records_per_day_target
        duration_s = config.duration_s or config.cycle_days * 86400.0
        groups = partition_groups(config.services, config.slot_budget_s,
                                  config.expected_probe_cost_s,
                                  per_probe_interval_s=interval_s)

    start = config.start
    end = start + dt.timedelta(seconds=duration_s)
    fires: list[Fire] = []

    for group_index, group in enumerate(groups):
        group_offset_s = (group_index * config.slot_budget_s
                          if config.mode is CampaignMode.INTENSIVE else 0.0)
        for service_id in group:
            for site_id in config.sites:
                for op in config.operations:
                    k = 0
                    while True:
                        base_s = k * interval_s
                        if config.mode is CampaignMode.INTENSIVE:
                            day = int(base_s // 86400)
                            phase_s = ((day % config.cycle_days)
                                       * interval_s / config.cycle_days)
                        else:
                            day = int(base_s // 86400)
                            phase_s = 0.0
                        due_s = base_s + phase_s + group_offset_s
                        if due_s >= duration_s:
                            break
                        fires.append(Fire(
                            due=start + dt.timedelta(seconds=due_s),
                            service_id=service_id, site_id=site_id,
                            operation=op, group_index=group_index,
                            day_index=day))
                        k += 1

    fires.sort(key=lambda f: (f.due, f.service_id, f.site_id, f.operation.value))
    return CampaignPlan(
        campaign_id=config.campaign_id,
        mode=config.mode,
        operations=list(config.operations),
        services=list(config.services),
        sites=list(config.sites),
        groups=groups,
        per_probe_interval=dt.timedelta(seconds=interval_s),
        cycle_days=config.cycle_days,
        records_per_day_target=config.records_per_day_target,
        start=start,
        end=end,
        fires=fires,
    )


@dataclass
class FoldedSeries:
    """One cycle of records folded modulo 24 h into a virtual day."""

    offsets_s: list[float] = field(default_factory=list)
    gaps_s: list[float] = field(default_factory=list)
    out_of_window: list[int] = field(default_factory=list)

    @property
    def max_gap_s(self) -> float:
        return max(self.gaps_s) if self.gaps_s else 0.0


def merge_cycle(records: Sequence[ProbeRecord], cycle_days: int,
                cycle_start: dt.datetime | None = None) -> FoldedSeries:
    """Fold one (service, site, op) cycle's records into a virtual day.

    Timestamps are folded modulo 24 h relative to the cycle start (default:
    midnight UTC of the earliest record).  Records outside the cycle window
    are flagged by input index, not folded.  Gaps include the wrap-around
    between the last and first folded sample.
    """
    out = FoldedSeries()
    if not records:
        return out
    if cycle_start is None:
        earliest = min(r.started_at for r in records)
        cycle_start = earliest.replace(hour=0, minute=0, second=0, microsecond=0)
    window_s = cycle_days * 86400.0

    for idx, rec in enumerate(records):
        delta_s = (rec.started_at - cycle_start).total_seconds()
        if 0 <= delta_s < window_s:
            out.offsets_s.append(delta_s % 86400.0)
        else:
            out.out_of_window.append(idx)

    out.offsets_s.sort()
    n = len(out.offsets_s)
    if n >= 2:
        out.gaps_s = [b - a for a, b in zip(out.offsets_s, out.offsets_s[1:])]
        out.gaps_s.append(out.offsets_s[0] + 86400.0 - out.offsets_s[-1])
    return out


def fold_lattice_check(plan: CampaignPlan) -> float:
    """Max folded gap (seconds) of the plan's own fire times for one
    (service, site, op) key; scheduling diagnostics, not measurement."""
    if not plan.fires:
        return 0.0
    first = plan.fires[0]
    offsets = sorted(
        ((f.due - plan.start).total_seconds() % 86400.0)
        for f in plan.fires
        if (f.service_id, f.site_id, f.operation) ==
           (first.service_id, first.site_id, first.operation))
    if len(offsets) < 2:
        return 0.0
    gaps = [b - a for a, b in zip(offsets, offsets[1:])]
    gaps.append(offsets[0] + 86400.0 - offsets[-1])
    return max(gaps)
