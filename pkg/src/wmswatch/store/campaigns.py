"""Campaign lifecycle service: create, run (threaded), pause/resume, report.

The runner thread consults the store's campaign state before every fire, so
a pause acknowledged over REST stops probe emission at the next dispatch.
Two engine modes: real probing over HTTP, and a simulated engine for
desk-scale runs and tests (always-successful records with a configurable
latency, no sockets).
"""

from __future__ import annotations

import datetime as dt
import logging
import threading

from ..errors import ReferentialViolation, UnknownId
from ..probe.engine import probe_getcapabilities, probe_getmap, build_getmap_spec
from ..probe.transport import HttpTransport
from ..probe.types import Operation, ProbeRecord
from ..scheduler.plan import build_plan
from ..scheduler.runner import RealClock, RunReport, run_campaign
from ..scheduler.types import CampaignConfig, Fire
from .db import Store

log = logging.getLogger(__name__)


class _SimulatedEngine:
    """Always-successful in-process engine for simulated campaigns."""

    def __init__(self, latency_ms: int = 20, response_bytes: int = 4096):
        self.latency_ms = max(int(latency_ms), 1)
        self.response_bytes = response_bytes

    def __call__(self, fire: Fire) -> ProbeRecord:
        from ..probe.transport import synthetic_timing

        quarter = self.latency_ms // 4
        timing = synthetic_timing(quarter, quarter, quarter,
                                  self.latency_ms - 3 * quarter)
        return ProbeRecord(
            service_id=fire.service_id, site_id=fire.site_id,
            operation=fire.operation,
            started_at=dt.datetime.now(dt.timezone.utc),
            accessible=True, success=True, timing=timing,
            response_bytes=self.response_bytes)


class _HttpEngine:
    """Engine that actually probes the monitored services."""

    def __init__(self, store: Store, timeout_s: float = 60.0):
        self._store = store
        self._timeout_s = timeout_s
        self._transport = HttpTransport()
        self._specs: dict[str, object] = {}

    def __call__(self, fire: Fire) -> ProbeRecord:
        service = self._store.get_service(fire.service_id)
        if fire.operation is Operation.GET_CAPABILITIES:
            return probe_getcapabilities(service, fire.site_id, self._transport,
                                         timeout_s=self._timeout_s)
        spec = self._specs.get(fire.service_id)
        if spec is None:
            doc = self._store.get_capabilities_doc(fire.service_id)
            spec = build_getmap_spec(doc)
            self._specs[fire.service_id] = spec
        return probe_getmap(service, spec, fire.site_id, self._transport,
                            timeout_s=self._timeout_s)


class CampaignService:
    """Owns campaign threads and wires runner output into the store."""

    def __init__(self, store: Store):
        self._store = store
        self._threads: dict[str, threading.Thread] = {}
        self._reports: dict[str, RunReport] = {}
        self._lock = threading.Lock()

    def create(self, body: dict) -> dict:
        """Validate and persist a campaign from a REST/CLI payload.

        The payload is a CampaignConfig dict plus optional flags:
        ``autostart`` (run immediately in a thread) and ``simulate``
        (use the in-process engine; optional ``latency_ms``).
        """
        config = CampaignConfig.from_dict(body)
        for service_id in config.services:
            if not self._store.has_service(service_id):
                raise ReferentialViolation(f"unknown service {service_id!r}")
        for site_id in config.sites:
            if not self._store.has_site(site_id):
                raise ReferentialViolation(f"unknown site {site_id!r}")
        build_plan(config)  # validates feasibility before anything persists

        self._store.create_campaign(config.campaign_id, body, state="created")
        if body.get("autostart"):
            self.start(config.campaign_id)
        return self._store.campaign(config.campaign_id)

    def start(self, campaign_id: str) -> None:
        record = self._store.campaign(campaign_id)
        if record["state"] == "running":
            return
        config = CampaignConfig.from_dict(record["config"])
        simulate = bool(record["config"].get("simulate"))
        latency_ms = int(record["config"].get("latency_ms", 20))
        engine = (_SimulatedEngine(latency_ms=latency_ms) if simulate
                  else _HttpEngine(self._store))

        # anchor the plan at now so fires are actually due in this run
        config.start = dt.datetime.now(dt.timezone.utc)
        plan = build_plan(config)
        self._store.set_campaign_state(campaign_id, "running")

        report = RunReport()
        with self._lock:
            self._reports[campaign_id] = report

        def control() -> str:
            try:
                state = self._store.campaign_state(campaign_id)
            except Exception:
                return "cancelled"  # store gone: wind the run down
            return state if state in ("paused", "cancelled") else "running"

        def sink(rec: ProbeRecord) -> None:
            self._store.append_probe(rec)

        def run() -> None:
            sites = {s.site_id: s for s in self._store.list_sites()
                     if s.site_id in config.sites}
            result = run_campaign(plan, engine, sink, clock=RealClock(),
                                  sites=sites, control=control)
            report.__dict__.update(result.__dict__)
            with self._lock:
                self._reports[campaign_id] = result
            try:
                state = self._store.campaign_state(campaign_id)
                self._store.save_campaign_report(campaign_id, result.to_dict())
                if state != "cancelled":
                    self._store.set_campaign_state(campaign_id, "done")
            except UnknownId:
                log.warning("campaign %s vanished before completion", campaign_id)

        thread = threading.Thread(target=run, daemon=True,
                                  name=f"campaign-{campaign_id}")
        with self._lock:
            self._threads[campaign_id] = thread
        thread.start()

    def pause(self, campaign_id: str) -> dict:
        if self._store.campaign_state(campaign_id) in ("running", "created"):
            self._store.set_campaign_state(campaign_id, "paused")
        return self._store.campaign(campaign_id)

    def resume(self, campaign_id: str) -> dict:
        if self._store.campaign_state(campaign_id) == "paused":
            self._store.set_campaign_state(campaign_id, "running")
        return self._store.campaign(campaign_id)

    def report(self, campaign_id: str) -> dict:
        record = self._store.campaign(campaign_id)
        if record["report"] is not None:
            return {"state": record["state"], **record["report"]}
        with self._lock:
            live = self._reports.get(campaign_id)
        if live is not None:
            return {"state": record["state"], **live.to_dict()}
        return {"state": record["state"], "due": 0, "fired": 0, "missed": 0,
                "late": 0, "missed_by_reason": {}, "lateness_histogram": {},
                "failovers": {}}

    def wait(self, campaign_id: str, timeout_s: float = 30.0) -> None:
        thread = self._threads.get(campaign_id)
        if thread is not None:
            thread.join(timeout_s)

    def shutdown(self, timeout_s: float = 10.0) -> None:
        """Cancel every live run and join its thread; call before closing
        the store."""
        with self._lock:
            threads = dict(self._threads)
        for campaign_id, thread in threads.items():
            if thread.is_alive():
                try:
                    self._store.set_campaign_state(campaign_id, "cancelled")
                except Exception:
                    pass
        for thread in threads.values():
            thread.join(timeout_s)
