import datetime as dt
import time

import pytest
import requests

from helpers import probe_rec
from wmswatch.model import (
    Liveness,
    Provenance,
    ServerLocation,
    ServiceRecord,
    parse_capabilities,
)
from wmswatch.probe import Operation
from wmswatch.scheduler import MonitoringSite, SiteLocation
from wmswatch.store import CampaignService, RestApi, RestServer, Store

NOW = dt.datetime(2015, 9, 1, tzinfo=dt.timezone.utc)


def _svc(i, continent="North America"):
    return ServiceRecord(
        id=f"svc{i:04d}", canonical_url=f"http://h{i}.test/wms?service=WMS",
        discovered_from=Provenance.MANUAL, first_seen=NOW, last_seen=NOW,
        server_location=ServerLocation(lat=40.0, lon=-100.0, continent=continent),
        provider_name="prov", liveness=Liveness.VALID)


def _site(sid, lat=53.3, lon=-6.3):
    return MonitoringSite(site_id=sid, label=sid,
                          location=SiteLocation(lat=lat, lon=lon, city=sid,
                                                continent="Europe"))


@pytest.fixture(scope="module")
def server(request):
    store = Store(":memory:")
    fixture_dir = request.getfixturevalue("fixture_dir")
    doc = parse_capabilities((fixture_dir / "caps_130_nested.xml").read_bytes())
    for i in range(3):
        store.upsert_service(_svc(i), doc if i == 0 else None)
    store.upsert_site(_site("site-a"))
    store.upsert_site(_site("site-b", lat=40.6, lon=-74.1))
    for minute in range(30):
        store.append_probe(
            probe_rec(service_id="svc0000", site_id="site-a",
                      started_at=NOW + dt.timedelta(minutes=minute),
                      success=minute % 5 != 0, accessible=True),
            now=NOW + dt.timedelta(hours=1))
    campaigns = CampaignService(store)
    api = RestApi(store, campaigns)
    srv = RestServer(api)
    srv.start()
    yield srv
    campaigns.shutdown()
    srv.stop()
    store.close()


def _get(server, path, **kw):
    return requests.get(server.url + path, timeout=10, **kw)


def test_sites_listing(server):
    resp = _get(server, "/api/v1/sites")
    assert resp.status_code == 200
    assert {s["site_id"] for s in resp.json()} == {"site-a", "site-b"}


def test_services_pagination(server):
    resp = _get(server, "/api/v1/services?page=1&page_size=2")
    body = resp.json()
    assert body["total"] == 3
    assert len(body["items"]) == 2
    resp2 = _get(server, "/api/v1/services?page=2&page_size=2")
    assert len(resp2.json()["items"]) == 1


def test_service_detail_and_layers(server):
    assert _get(server, "/api/v1/services/svc0000").json()["id"] == "svc0000"
    layers = _get(server, "/api/v1/services/svc0000/layers").json()
    assert len(layers) == 7
    assert any(l["name"] == "rivers" for l in layers)


def test_unknown_ids_are_404(server):
    assert _get(server, "/api/v1/services/ghost").status_code == 404
    assert _get(server, "/api/v1/services/ghost/probes").status_code == 404
    assert _get(server, "/api/v1/campaigns/ghost/report").status_code == 404
    assert _get(server, "/api/v1/reports/ghost").status_code == 404
    assert _get(server, "/api/v1/nothing/here").status_code == 404


def test_malformed_params_are_400(server):
    base = "/api/v1/services/svc0000/probes"
    assert _get(server, base + "?from=2015-09-02T00:00:00Z&to=2015-09-01T00:00:00Z"
                ).status_code == 400
    assert _get(server, base + "?from=banana").status_code == 400
    assert _get(server, base + "?op=get_everything").status_code == 400
    assert _get(server, "/api/v1/services?page=0").status_code == 400
    assert _get(server, "/api/v1/services?page=x").status_code == 400


def test_probe_window_half_open(server):
    rows = _get(server, "/api/v1/services/svc0000/probes",
                params={"from": NOW.isoformat(),
                        "to": (NOW + dt.timedelta(minutes=10)).isoformat()}).json()
    assert len(rows) == 10  # minutes 0..9, minute 10 excluded


def test_summary_endpoint(server):
    body = _get(server, "/api/v1/services/svc0000/summary").json()
    assert body["n_probes"] == 30
    assert body["n_success"] == 24
    assert body["accessibility_class"] == "always-accessible"


def test_folded_endpoint(server):
    body = _get(server, "/api/v1/services/svc0000/folded?cycle_days=1").json()
    assert len(body["offsets_s"]) == 30
    assert body["max_gap_s"] > 0


def test_reads_are_pure_views(server):
    a = _get(server, "/api/v1/services/svc0000/probes").content
    b = _get(server, "/api/v1/services/svc0000/probes").content
    assert a == b


def test_reports_endpoints(server):
    assert _get(server, "/api/v1/reports/versions").json()["versions"] == {"1.3.0": 1}
    crs = _get(server, "/api/v1/reports/crs").json()
    assert crs["total_layers"] == 7
    keywords = _get(server, "/api/v1/reports/keywords?n=5").json()["keywords"]
    assert any(k["keyword"] == "geology" for k in keywords)
    acc = _get(server, "/api/v1/reports/accessibility").json()
    assert acc["total_services"] == 1
    errors = _get(server, "/api/v1/reports/errors").json()
    assert errors["failed_records"] == 6
    yearly = _get(server, "/api/v1/reports/yearly").json()
    assert yearly["dated_layers"] >= 2
    coverage = _get(server, "/api/v1/reports/coverage?cell=30").json()
    assert coverage["cell_deg"] == 30.0


# --- campaign flow ------------------------------------------------------------------


def _fast_campaign_body(campaign_id, duration_s=3.0, services=("svc0001",)):
    return {
        "campaign_id": campaign_id,
        "mode": "intensive",
        "services": list(services),
        "sites": ["site-a"],
        "start": "2015-09-01T00:00:00+00:00",  # overridden at start time
        "operations": ["get_capabilities"],
        "records_per_day_target": 288000,      # one fire every 0.3 s
        "cycle_days": 1,
        "duration_s": duration_s,
        "slot_budget_s": 0.25,
        "expected_probe_cost_s": 0.05,
        "simulate": True,
        "latency_ms": 5,
        "autostart": True,
    }


def test_campaign_end_to_end(server):
    resp = requests.post(server.url + "/api/v1/campaigns",
                         json=_fast_campaign_body("e2e"), timeout=10)
    assert resp.status_code == 200, resp.text
    deadline = time.time() + 30
    while time.time() < deadline:
        body = _get(server, "/api/v1/campaigns/e2e/report").json()
        if body["state"] == "done":
            break
        time.sleep(0.2)
    assert body["state"] == "done"
    assert body["due"] == 10
    assert body["fired"] + body["missed"] == body["due"]
    rows = _get(server, "/api/v1/services/svc0001/probes"
                        "?from=2015-01-01T00:00:00Z&to=2030-01-01T00:00:00Z").json()
    assert len(rows) == body["fired"]


def test_campaign_validation_errors(server):
    bad = _fast_campaign_body("badsvc", services=("ghost",))
    resp = requests.post(server.url + "/api/v1/campaigns", json=bad, timeout=10)
    assert resp.status_code == 400
    resp = requests.post(server.url + "/api/v1/campaigns", json={"x": 1}, timeout=10)
    assert resp.status_code == 400


def test_pause_halts_probe_emission(server):
    resp = requests.post(server.url + "/api/v1/campaigns",
                         json=_fast_campaign_body("pausable", duration_s=30.0,
                                                  services=("svc0002",)),
                         timeout=10)
    assert resp.status_code == 200, resp.text
    probes_url = (server.url + "/api/v1/services/svc0002/probes"
                  "?from=2015-01-01T00:00:00Z&to=2030-01-01T00:00:00Z")
    deadline = time.time() + 20
    while time.time() < deadline:
        if len(requests.get(probes_url, timeout=10).json()) >= 2:
            break
        time.sleep(0.1)
    assert len(requests.get(probes_url, timeout=10).json()) >= 2

    assert requests.post(server.url + "/api/v1/campaigns/pausable/pause",
                         timeout=10).json()["state"] == "paused"
    time.sleep(0.6)  # allow any in-flight dispatch to land
    frozen = len(requests.get(probes_url, timeout=10).json())
    time.sleep(1.2)
    assert len(requests.get(probes_url, timeout=10).json()) == frozen

    resumed = requests.post(server.url + "/api/v1/campaigns/pausable/resume",
                            timeout=10).json()
    assert resumed["state"] == "running"
    deadline = time.time() + 20
    grown = False
    while time.time() < deadline:
        if len(requests.get(probes_url, timeout=10).json()) > frozen:
            grown = True
            break
        time.sleep(0.1)
    assert grown
