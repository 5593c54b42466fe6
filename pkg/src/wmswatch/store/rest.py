"""REST data-access service over the store (JSON bodies, UTF-8).

Every read is a pure view: identical GETs between writes return identical
bodies.  2xx/4xx mapping: unknown ids are 404, malformed parameters 400,
everything unexpected 500.  Mutations are POSTs; an optional shared token
(config) gates them when set.
"""

from __future__ import annotations

import datetime as dt
import json
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from ..analytics import reports as report_builders
from ..analytics.geo import closest_site_analysis, regression_for_service
from ..analytics.powerlaw import fit_power_law
from ..analytics.qos import summarize
from ..errors import (
    AddressInUse,
    BadRange,
    DuplicateRecord,
    MissingGeolocation,
    ReferentialViolation,
    StoreError,
    TooFewSamples,
    TooFewSites,
    UnknownId,
    WmsWatchError,
    ZeroVariance,
)
from ..model.types import parse_ts
from ..probe.types import Operation
from ..scheduler.plan import merge_cycle
from .campaigns import CampaignService
from .db import Store

DEFAULT_PAGE_SIZE = 100
MAX_PAGE_SIZE = 1000

_EPOCH = dt.datetime(1970, 1, 1, tzinfo=dt.timezone.utc)
_FAR_FUTURE = dt.datetime(9999, 1, 1, tzinfo=dt.timezone.utc)


class _HttpError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _bad(message: str) -> _HttpError:
    return _HttpError(400, message)


def _parse_operation(params: dict, default: str = "get_capabilities") -> Operation:
    raw = params.get("op", [default])[0]
    try:
        return Operation(raw)
    except ValueError:
        raise _bad(f"unknown operation {raw!r}")


def _parse_window(params: dict) -> tuple[dt.datetime, dt.datetime]:
    try:
        frm = parse_ts(params["from"][0]) if "from" in params else _EPOCH
        to = parse_ts(params["to"][0]) if "to" in params else _FAR_FUTURE
    except ValueError as exc:
        raise _bad(f"bad timestamp: {exc}")
    if frm > to:
        raise _bad("from must not exceed to")
    return frm, to


def _parse_page(params: dict) -> tuple[int, int]:
    try:
        page = int(params.get("page", ["1"])[0])
        size = int(params.get("page_size", [str(DEFAULT_PAGE_SIZE)])[0])
    except ValueError:
        raise _bad("page and page_size must be integers")
    if page < 1 or size < 1:
        raise _bad("page and page_size must be positive")
    return page, min(size, MAX_PAGE_SIZE)


class RestApi:
    """Route table and handlers, separable from the HTTP plumbing."""

    def __init__(self, store: Store, campaigns: CampaignService | None = None,
                 token: str | None = None):
        self.store = store
        self.campaigns = campaigns or CampaignService(store)
        self.token = token
        self.routes = [
            ("GET", re.compile(r"^/api/v1/sites$"), self.get_sites),
            ("GET", re.compile(r"^/api/v1/services$"), self.get_services),
            ("GET", re.compile(r"^/api/v1/services/(?P<sid>[^/]+)$"),
             self.get_service),
            ("GET", re.compile(r"^/api/v1/services/(?P<sid>[^/]+)/layers$"),
             self.get_layers),
            ("GET", re.compile(r"^/api/v1/services/(?P<sid>[^/]+)/probes$"),
             self.get_probes),
            ("GET", re.compile(r"^/api/v1/services/(?P<sid>[^/]+)/summary$"),
             self.get_summary),
            ("GET", re.compile(r"^/api/v1/services/(?P<sid>[^/]+)/folded$"),
             self.get_folded),
            ("GET", re.compile(r"^/api/v1/reports/(?P<name>[^/]+)$"),
             self.get_report),
            ("GET", re.compile(r"^/api/v1/campaigns$"), self.get_campaigns),
            ("GET", re.compile(r"^/api/v1/campaigns/(?P<cid>[^/]+)$"),
             self.get_campaign),
            ("GET", re.compile(r"^/api/v1/campaigns/(?P<cid>[^/]+)/report$"),
             self.get_campaign_report),
            ("POST", re.compile(r"^/api/v1/campaigns$"), self.post_campaign),
            ("POST", re.compile(r"^/api/v1/campaigns/(?P<cid>[^/]+)/pause$"),
             self.post_pause),
            ("POST", re.compile(r"^/api/v1/campaigns/(?P<cid>[^/]+)/resume$"),
             self.post_resume),
        ]

    # --- dispatch -----------------------------------------------------------

    def handle(self, method: str, path: str, query: dict, body: dict | None,
               auth_header: str | None) -> tuple[int, dict | list]:
        for route_method, pattern, handler in self.routes:
            if route_method != method:
                continue
            m = pattern.match(path)
            if not m:
                continue
            if method == "POST" and self.token:
                if auth_header != f"Bearer {self.token}":
                    return 401, {"error": "missing or invalid token"}
            try:
                return 200, handler(query=query, body=body, **m.groupdict())
            except _HttpError as exc:
                return exc.status, {"error": exc.message}
            except UnknownId as exc:
                return 404, {"error": str(exc)}
            except (BadRange, ReferentialViolation, DuplicateRecord,
                    TooFewSamples, TooFewSites, ZeroVariance,
                    MissingGeolocation) as exc:
                return 400, {"error": str(exc)}
            except (StoreError, WmsWatchError) as exc:
                return 400, {"error": str(exc)}
            except (KeyError, ValueError, TypeError) as exc:
                return 400, {"error": f"malformed request: {exc}"}
        return 404, {"error": f"no route for {method} {path}"}

    # --- handlers -------------------------------------------------------------

    def get_sites(self, query, body):
        return [s.to_dict() for s in self.store.list_sites()]

    def get_services(self, query, body):
        page, size = _parse_page(query)
        liveness = query.get("liveness", [None])[0]
        continent = query.get("continent", [None])[0]
        items, total = self.store.list_services(
            liveness=liveness, continent=continent,
            limit=size, offset=(page - 1) * size)
        return {"items": [s.to_dict() for s in items], "page": page,
                "page_size": size, "total": total}

    def get_service(self, query, body, sid):
        return self.store.get_service(sid).to_dict()

    def get_layers(self, query, body, sid):
        return self.store.layers_for_service(sid)

    def get_probes(self, query, body, sid):
        if not self.store.has_service(sid):
            raise UnknownId(f"service {sid!r}")
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        site = query.get("site", [None])[0]
        records = self.store.query_probes(sid, op, frm, to, site_id=site)
        return [r.to_dict() for r in records]

    def get_summary(self, query, body, sid):
        if not self.store.has_service(sid):
            raise UnknownId(f"service {sid!r}")
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        records = self.store.query_probes(sid, op, frm, to)
        if not records:
            return {"service_id": sid, "operation": op.value, "n_probes": 0}
        return summarize(sid, op, records, (frm, to)).to_dict()

    def get_folded(self, query, body, sid):
        if not self.store.has_service(sid):
            raise UnknownId(f"service {sid!r}")
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        site = query.get("site", [None])[0]
        try:
            cycle_days = int(query.get("cycle_days", ["6"])[0])
        except ValueError:
            raise _bad("cycle_days must be an integer")
        records = self.store.query_probes(sid, op, frm, to, site_id=site)
        folded = merge_cycle(records, cycle_days)
        return {"offsets_s": folded.offsets_s, "gaps_s": folded.gaps_s,
                "out_of_window": folded.out_of_window,
                "max_gap_s": folded.max_gap_s}

    # --- reports ---------------------------------------------------------------

    def get_report(self, query, body, name):
        builder = getattr(self, f"_report_{name}", None)
        if builder is None:
            raise UnknownId(f"report {name!r}")
        return builder(query)

    def _report_accessibility(self, query):
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        return report_builders.accessibility_table(
            self.store.probes_by_service(op, frm, to))

    def _report_errors(self, query):
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        records = [r for recs in self.store.probes_by_service(op, frm, to).values()
                   for r in recs]
        return report_builders.error_table(records)

    def _report_versions(self, query):
        return report_builders.version_tally(self.store.service_versions())

    def _report_crs(self, query):
        return report_builders.crs_tally(self.store.all_layer_records())

    def _report_keywords(self, query):
        try:
            n = int(query.get("n", ["50"])[0])
        except ValueError:
            raise _bad("n must be an integer")
        return report_builders.keyword_top(self.store.all_layer_records(), n=n)

    def _report_coverage(self, query):
        try:
            cell = float(query.get("cell", ["1.0"])[0])
        except ValueError:
            raise _bad("cell must be a number")
        return report_builders.coverage_report(self.store.all_layer_records(),
                                               cell_deg=cell)

    def _report_yearly(self, query):
        return report_builders.yearly_report(self.store.layers_by_service())

    def _report_providers(self, query):
        return report_builders.provider_tally(
            self.store.list_services(limit=10**9)[0])

    def _report_power_law_providers(self, query):
        tally = report_builders.provider_tally(
            self.store.list_services(limit=10**9)[0])
        counts = tally["counts"]
        try:
            n_boot = int(query.get("n_boot", ["200"])[0])
        except ValueError:
            raise _bad("n_boot must be an integer")
        fit = fit_power_law([float(c) for c in counts], "discrete", 1,
                            min_tail=int(query.get("min_tail", ["50"])[0]),
                            n_boot=n_boot, seed=0)
        return fit.to_dict()

    def _report_power_law_response_times(self, query):
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        samples = []
        for records in self.store.probes_by_service(op, frm, to).values():
            times = [r.timing.total_ms for r in records
                     if r.success and r.timing is not None]
            if times:
                samples.append(sum(times) / len(times) / 1000.0)
        try:
            n_boot = int(query.get("n_boot", ["200"])[0])
        except ValueError:
            raise _bad("n_boot must be an integer")
        fit = fit_power_law(samples, "continuous", "scan",
                            min_tail=int(query.get("min_tail", ["50"])[0]),
                            n_boot=n_boot, seed=0,
                            truncation_note="probe timeout caps observations at 60 s")
        return fit.to_dict()

    def _rt_by_service_site(self, op, frm, to):
        out: dict[tuple[str, str], list[int]] = {}
        for sid, records in self.store.probes_by_service(op, frm, to).items():
            for r in records:
                if r.success and r.timing is not None:
                    out.setdefault((sid, r.site_id), []).append(r.timing.total_ms)
        return {k: sum(v) / len(v) for k, v in out.items()}

    def _report_continent_matrix(self, query):
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        services = self.store.list_services(limit=10**9)[0]
        sites = self.store.list_sites()
        rt = self._rt_by_service_site(op, frm, to)
        return closest_site_analysis(services, sites, rt).to_dict()

    def _report_regression(self, query):
        op = _parse_operation(query)
        frm, to = _parse_window(query)
        sites = self.store.list_sites()
        rt = self._rt_by_service_site(op, frm, to)
        rows = []
        r2_values = []
        for svc in self.store.list_services(limit=10**9)[0]:
            rt_by_site = {site_id: avg for (sid, site_id), avg in rt.items()
                          if sid == svc.id}
            try:
                summary = regression_for_service(svc, sites, rt_by_site)
            except (TooFewSites, ZeroVariance, MissingGeolocation):
                continue
            rows.append({"service_id": svc.id, **summary.to_dict()})
            r2_values.append(summary.r_squared)
        return {"services": rows,
                "average_r_squared": (sum(r2_values) / len(r2_values)
                                      if r2_values else None)}

    # --- campaigns ----------------------------------------------------------------

    def get_campaigns(self, query, body):
        return self.campaigns_list()

    def campaigns_list(self):
        return self.store.list_campaigns()

    def get_campaign(self, query, body, cid):
        return self.store.campaign(cid)

    def get_campaign_report(self, query, body, cid):
        self.store.campaign(cid)  # 404 on unknown id
        return self.campaigns.report(cid)

    def post_campaign(self, query, body, **_kw):
        if not isinstance(body, dict):
            raise _bad("JSON object body required")
        return self.campaigns.create(body)

    def post_pause(self, query, body, cid):
        return self.campaigns.pause(cid)

    def post_resume(self, query, body, cid):
        return self.campaigns.resume(cid)


class RestServer:
    """ThreadingHTTPServer wrapper bound to a RestApi."""

    def __init__(self, api: RestApi, host: str = "127.0.0.1", port: int = 0):
        handler = _make_handler(api)
        try:
            self._server = ThreadingHTTPServer((host, port), handler)
        except OSError as exc:
            raise AddressInUse(f"cannot bind {host}:{port}: {exc}") from exc
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> None:
        self._thread = threading.Thread(target=self._server.serve_forever,
                                        daemon=True, name="wmswatch-rest")
        self._thread.start()

    def serve_forever(self) -> None:
        self._server.serve_forever()

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()


def _make_handler(api: RestApi):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):
            pass

        def _respond(self, status: int, payload) -> None:
            blob = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(blob)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(blob)

        def _dispatch(self, method: str) -> None:
            parts = urlsplit(self.path)
            query = parse_qs(parts.query, keep_blank_values=True)
            body = None
            if method == "POST":
                length = int(self.headers.get("Content-Length") or 0)
                raw = self.rfile.read(length) if length else b""
                if raw:
                    try:
                        body = json.loads(raw.decode("utf-8"))
                    except ValueError:
                        self._respond(400, {"error": "request body is not JSON"})
                        return
            try:
                status, payload = api.handle(
                    method, parts.path, query, body,
                    self.headers.get("Authorization"))
            except Exception as exc:  # pragma: no cover - last-resort guard
                status, payload = 500, {"error": f"internal error: {exc}"}
            self._respond(status, payload)

        def do_GET(self):
            self._dispatch("GET")

        def do_POST(self):
            self._dispatch("POST")

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers",
                             "Content-Type, Authorization")
            self.send_header("Content-Length", "0")
            self.end_headers()

    return Handler


def serve_rest(bind: str, store: Store,
               campaigns: CampaignService | None = None,
               token: str | None = None) -> RestServer:
    """Start the REST service on ``host:port`` (port 0 picks a free one)."""
    host, _, port_s = bind.partition(":")
    server = RestServer(RestApi(store, campaigns, token=token),
                        host=host or "127.0.0.1",
                        port=int(port_s) if port_s else 0)
    server.start()
    return server
