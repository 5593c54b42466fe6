import datetime as dt
import random

import pytest

from helpers import make_caps_xml, negotiating_mock_transport
from wmswatch.errors import NoNamedLayer, NoUsableFormat
from wmswatch.model import CapabilitiesDoc, LayerRecord, Provenance, ServiceRecord, parse_capabilities
from wmswatch.probe import (
    ErrorClass,
    Exchange,
    MockTransport,
    Operation,
    ProbeRecord,
    RawOutcome,
    TimingBreakdown,
    TransportFailure,
    build_getmap_spec,
    classify_outcome,
    probe_getcapabilities,
    probe_getmap,
    probe_version_support,
    synthetic_timing,
)

NOW = dt.datetime(2015, 9, 1, tzinfo=dt.timezone.utc)


def _service(url="http://mock.test/wms?service=WMS"):
    return ServiceRecord(id="svc1", canonical_url=url,
                         discovered_from=Provenance.MANUAL,
                         first_seen=NOW, last_seen=NOW)


# --- classify_outcome ---------------------------------------------------------

TRUTH_TABLE = {
    RawOutcome.DNS_FAIL:      (False, False, ErrorClass.SERVER_ACCESS),
    RawOutcome.CONNECT_FAIL:  (False, False, ErrorClass.SERVER_ACCESS),
    RawOutcome.TIMEOUT:       (False, False, ErrorClass.SERVER_ACCESS),
    RawOutcome.NON_200:       (True, False, ErrorClass.REQUEST_PROCESSING),
    RawOutcome.WRONG_PAYLOAD: (True, False, ErrorClass.REQUEST_PROCESSING),
    RawOutcome.OK:            (True, True, None),
}


def test_classification_truth_table_exhaustive():
    assert set(TRUTH_TABLE) == set(RawOutcome)  # table covers every raw kind
    for raw, expected in TRUTH_TABLE.items():
        assert classify_outcome(raw) == expected


def test_classification_deterministic():
    for raw in RawOutcome:
        assert classify_outcome(raw) == classify_outcome(raw)


# --- timing and record invariants ----------------------------------------------

def test_timing_sum_within_slack():
    t = synthetic_timing(10, 20, 100, 50, jitter_ms=4)
    assert abs(t.phase_sum() - t.total_ms) <= 5


def test_timing_rejects_excess_drift():
    with pytest.raises(ValueError):
        TimingBreakdown(dns_ms=10, connect_ms=10, request_processing_ms=10,
                        transfer_ms=10, total_ms=100)


def test_timing_rejects_negative():
    with pytest.raises(ValueError):
        TimingBreakdown(dns_ms=-1, connect_ms=0, request_processing_ms=0,
                        transfer_ms=0, total_ms=0)


def test_record_invariants():
    with pytest.raises(ValueError):  # success without accessible
        ProbeRecord(service_id="s", site_id="m", operation=Operation.GET_MAP,
                    started_at=NOW, accessible=False, success=True)
    with pytest.raises(ValueError):  # failure without error class
        ProbeRecord(service_id="s", site_id="m", operation=Operation.GET_MAP,
                    started_at=NOW, accessible=True, success=False)
    with pytest.raises(ValueError):  # access error but accessible
        ProbeRecord(service_id="s", site_id="m", operation=Operation.GET_MAP,
                    started_at=NOW, accessible=True, success=False,
                    error_class=ErrorClass.SERVER_ACCESS)


def test_download_speed_derived():
    rec = ProbeRecord(service_id="s", site_id="m",
                      operation=Operation.GET_CAPABILITIES, started_at=NOW,
                      accessible=True, success=True,
                      timing=synthetic_timing(1, 1, 8, 500),
                      response_bytes=1000)
    assert rec.download_speed_bytes_per_s == pytest.approx(2000.0)


# --- probe_getcapabilities -------------------------------------------------------

def test_getcap_happy_path():
    transport = MockTransport().add("mock.test", Exchange(
        status=200, content_type="application/xml",
        body=make_caps_xml("1.3.0"),
        timing=synthetic_timing(5, 10, 80, 25), url="x"))
    rec = probe_getcapabilities(_service(), "site-a", transport, clock=lambda: NOW)
    assert rec.success and rec.accessible
    assert rec.error_class is None
    assert rec.timing.total_ms == 120
    assert rec.operation is Operation.GET_CAPABILITIES
    assert rec.response_bytes == len(make_caps_xml("1.3.0"))
    # no version parameter goes out
    assert "version" not in transport.calls[0].lower()


def test_getcap_http_500_is_request_processing():
    transport = MockTransport().add("mock.test", Exchange(
        status=500, content_type="text/html", body=b"<html>boom</html>",
        timing=synthetic_timing(1, 2, 30, 1), url="x"))
    rec = probe_getcapabilities(_service(), "site-a", transport)
    assert rec.accessible and not rec.success
    assert rec.error_class is ErrorClass.REQUEST_PROCESSING


def test_getcap_refused_is_server_access():
    transport = MockTransport().add("mock.test", TransportFailure(
        RawOutcome.CONNECT_FAIL, "refused"))
    rec = probe_getcapabilities(_service(), "site-a", transport)
    assert not rec.accessible and not rec.success
    assert rec.error_class is ErrorClass.SERVER_ACCESS


def test_getcap_html_payload_is_request_processing():
    transport = MockTransport().add("mock.test", Exchange(
        status=200, content_type="text/html", body=b"<html>hi</html>",
        timing=synthetic_timing(1, 2, 3, 4), url="x"))
    rec = probe_getcapabilities(_service(), "site-a", transport)
    assert rec.accessible and not rec.success
    assert rec.error_class is ErrorClass.REQUEST_PROCESSING


def test_exactly_one_request_per_probe():
    transport = MockTransport().add("mock.test", Exchange(
        status=200, content_type="application/xml", body=make_caps_xml("1.1.1"),
        timing=synthetic_timing(1, 1, 1, 1), url="x"))
    probe_getcapabilities(_service(), "site-a", transport)
    assert len(transport.calls) == 1


# --- build_getmap_spec ------------------------------------------------------------

def _doc(formats, crs_list=("EPSG:4326",), version="1.1.1",
         bbox=(-10.0, -5.0, 10.0, 5.0)):
    layer = LayerRecord(name="roads", title="roads", crs_list=list(crs_list),
                        geographic_bbox=bbox)
    return CapabilitiesDoc(service_version=version, supported_formats=list(formats),
                           root_layers=[layer])


def test_spec_prefers_png():
    spec = build_getmap_spec(_doc(["image/gif", "image/png"]))
    assert spec.format == "image/png"
    assert spec.layer_name == "roads"
    assert (spec.width, spec.height) == (400, 200)
    assert spec.bbox == (-10.0, -5.0, 10.0, 5.0)


def test_spec_falls_back_to_jpeg():
    spec = build_getmap_spec(_doc(["image/tiff", "image/jpeg"]))
    assert spec.format == "image/jpeg"


def test_spec_no_formats():
    with pytest.raises(NoUsableFormat):
        build_getmap_spec(_doc([]))


def test_spec_no_named_layer():
    doc = CapabilitiesDoc(service_version="1.1.1",
                          supported_formats=["image/png"],
                          root_layers=[LayerRecord(name=None, title="container")])
    with pytest.raises(NoNamedLayer):
        build_getmap_spec(doc)


def test_spec_axis_order_130_epsg4326():
    spec = build_getmap_spec(_doc(["image/png"], version="1.3.0"))
    assert spec.crs == "EPSG:4326"
    assert spec.bbox == (-5.0, -10.0, 5.0, 10.0)  # lat/lon order


def test_spec_crs84_keeps_lonlat_order():
    spec = build_getmap_spec(_doc(["image/png"], crs_list=("CRS:84", "EPSG:4326"),
                                  version="1.3.0"))
    assert spec.crs == "CRS:84"
    assert spec.bbox == (-10.0, -5.0, 10.0, 5.0)


def test_spec_111_no_axis_swap():
    spec = build_getmap_spec(_doc(["image/png"], version="1.1.1"))
    assert spec.bbox == (-10.0, -5.0, 10.0, 5.0)


# --- probe_getmap ------------------------------------------------------------------

PNG_BYTES = b"\x89PNG\r\n\x1a\n" + b"\x00" * 9208  # 9216 bytes total


def test_getmap_happy_path():
    transport = MockTransport().add("request=GetMap", Exchange(
        status=200, content_type="image/png", body=PNG_BYTES,
        timing=synthetic_timing(5, 10, 200, 85), url="x"))
    spec = build_getmap_spec(_doc(["image/png"]))
    rec = probe_getmap(_service(), spec, "site-a", transport, clock=lambda: NOW)
    assert rec.success
    assert rec.response_bytes == 9216
    assert rec.operation is Operation.GET_MAP
    url = transport.calls[0]
    assert "layers=roads" in url and "width=400" in url and "height=200" in url
    assert "SRS=EPSG:4326" in url  # 1.1.1 spells it SRS


def test_getmap_exception_report_is_request_processing():
    body = (b'<?xml version="1.0"?><ServiceExceptionReport>'
            b'<ServiceException>layer gone</ServiceException></ServiceExceptionReport>')
    transport = MockTransport().add("request=GetMap", Exchange(
        status=200, content_type="application/vnd.ogc.se_xml", body=body,
        timing=synthetic_timing(1, 1, 20, 2), url="x"))
    spec = build_getmap_spec(_doc(["image/png"]))
    rec = probe_getmap(_service(), spec, "site-a", transport)
    assert rec.accessible and not rec.success
    assert rec.error_class is ErrorClass.REQUEST_PROCESSING


def test_getmap_timeout_caps_total():
    stalled = TransportFailure(RawOutcome.TIMEOUT, "60 s stall",
                               timing=TimingBreakdown(1, 1, 59998, 0, 60000))
    transport = MockTransport().add("request=GetMap", stalled)
    spec = build_getmap_spec(_doc(["image/png"]))
    rec = probe_getmap(_service(), spec, "site-a", transport, timeout_s=60.0)
    assert not rec.accessible
    assert rec.error_class is ErrorClass.SERVER_ACCESS
    assert rec.timing.total_ms == 60000


def test_getmap_130_uses_crs_key():
    transport = MockTransport().add("request=GetMap", Exchange(
        status=200, content_type="image/png", body=PNG_BYTES,
        timing=synthetic_timing(1, 1, 1, 1), url="x"))
    spec = build_getmap_spec(_doc(["image/png"], version="1.3.0"))
    probe_getmap(_service(), spec, "site-a", transport)
    assert "CRS=EPSG:4326" in transport.calls[0]
    assert "version=1.3.0" in transport.calls[0]


# --- probe_version_support -----------------------------------------------------------

def test_version_support_two_version_server():
    transport = negotiating_mock_transport(["1.1.1", "1.3.0"])
    out = probe_version_support(_service(), "site-a", transport)
    assert out.supported == {"1.1.1", "1.3.0"}
    assert out.outcomes["1.1.1"] == "supported"
    assert out.outcomes["1.3.0"] == "supported"
    assert out.outcomes["1.0.0"] == "negotiated-to-1.1.1"
    assert out.outcomes["1.1.0"] == "negotiated-to-1.1.1"
    assert len(transport.calls) == 4  # exactly one request per candidate version


def test_version_support_unreachable():
    transport = MockTransport()  # no rules: everything is a dead host
    out = probe_version_support(_service(), "site-a", transport)
    assert out.supported == set()
    assert set(out.outcomes.values()) == {"unreachable"}


def test_version_support_always_130_server():
    transport = negotiating_mock_transport(["1.3.0"])
    out = probe_version_support(_service(), "site-a", transport)
    assert out.supported == {"1.3.0"}
    assert out.outcomes["1.3.0"] == "supported"
    assert out.outcomes["1.0.0"] == "negotiated-to-1.3.0"


# --- randomized timing property ---------------------------------------------------

def test_timing_sum_property_randomized():
    rng = random.Random(42)
    for _ in range(200):
        phases = [rng.randint(0, 3000) for _ in range(4)]
        jitter = rng.randint(-5, 5)
        if sum(phases) + jitter < 0:
            jitter = 0
        t = synthetic_timing(*phases, jitter_ms=jitter)
        assert abs(t.phase_sum() - t.total_ms) <= 5
        transport = MockTransport().add("mock.test", Exchange(
            status=200, content_type="application/xml",
            body=make_caps_xml("1.3.0"), timing=t, url="x"))
        rec = probe_getcapabilities(_service(), "site-a", transport)
        assert abs(rec.timing.phase_sum() - rec.timing.total_ms) <= 5
