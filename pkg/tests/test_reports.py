import datetime as dt

import pytest

from helpers import probe_rec
from wmswatch.analytics.reports import (
    accessibility_table,
    classify_crs,
    crs_tally,
    error_table,
    keyword_top,
    provider_tally,
    rows_to_csv,
    version_tally,
)
from wmswatch.model import LayerRecord, Provenance, ServiceRecord

NOW = dt.datetime(2015, 9, 1, tzinfo=dt.timezone.utc)


def test_classify_crs_families():
    assert classify_crs("EPSG:3857") == "web-mercator"
    assert classify_crs("EPSG:102100") == "web-mercator"
    assert classify_crs("EPSG:26919") == "utm"
    assert classify_crs("EPSG:32633") == "utm"
    assert classify_crs("EPSG:3031") == "antarctic-stereographic"
    assert classify_crs("EPSG:3005") == "albers"
    assert classify_crs("EPSG:4326") == "geographic"
    assert classify_crs("CRS:84") == "geographic"
    assert classify_crs("EPSG:9999999") is None
    assert classify_crs("junk") is None


def test_crs_tally_shares_overlap():
    layers = [
        LayerRecord(name="a", title="a", crs_list=["EPSG:4326", "EPSG:3857"]),
        LayerRecord(name="b", title="b", crs_list=["EPSG:3857"]),
        LayerRecord(name="c", title="c", crs_list=["EPSG:26919"]),
    ]
    tally = crs_tally(layers)
    assert tally["total_layers"] == 3
    fams = tally["families"]
    assert fams["web-mercator"]["layers"] == 2
    assert fams["web-mercator"]["share"] == pytest.approx(2 / 3)
    assert fams["geographic"]["layers"] == 1
    assert fams["utm"]["layers"] == 1


def test_version_tally():
    tally = version_tally(["1.3.0", "1.3.0", "1.1.1"])
    assert tally["versions"] == {"1.1.1": 1, "1.3.0": 2}
    assert tally["total"] == 3


def test_accessibility_table_shares():
    by_svc = {
        "a": [probe_rec()] * 3,
        "b": [probe_rec(accessible=False, success=False)] * 2,
        "c": [probe_rec(), probe_rec(accessible=False, success=False)],
        "d": [probe_rec()] * 4,
    }
    table = accessibility_table(by_svc)
    assert table["total_services"] == 4
    assert table["classes"]["always-accessible"]["services"] == 2
    assert table["classes"]["constantly-inaccessible"]["share"] == 0.25
    assert table["classes"]["temporally-inaccessible"]["services"] == 1


def test_error_table():
    recs = ([probe_rec(accessible=True, success=False)] * 3
            + [probe_rec(accessible=False, success=False)] * 2
            + [probe_rec()] * 10)
    table = error_table(recs)
    assert table["failed_records"] == 5
    assert table["shares"]["request-processing-error"] == pytest.approx(0.6)
    assert table["shares"]["server-access-error"] == pytest.approx(0.4)


def test_keyword_top_limits():
    layers = [LayerRecord(name="a", title="Geology climate water")] * 3
    out = keyword_top(layers, n=2)
    assert len(out["keywords"]) == 2
    assert out["keywords"][0]["layers"] == 3


def test_provider_tally_counts():
    def svc(i, provider):
        return ServiceRecord(id=f"s{i}", canonical_url=f"http://h{i}/wms?service=WMS",
                             discovered_from=Provenance.MANUAL,
                             first_seen=NOW, last_seen=NOW, provider_name=provider)
    services = [svc(0, "EDAC"), svc(1, "EDAC"), svc(2, "NOAA"), svc(3, None)]
    tally = provider_tally(services)
    assert tally["providers"][0] == {"provider": "EDAC", "services": 2}
    assert tally["counts"] == [2, 1]
    assert tally["total_with_provider"] == 3


def test_rows_to_csv():
    text = rows_to_csv([{"a": 1, "b": "x"}, {"a": 2, "b": "y"}], ["a", "b"])
    assert text.splitlines() == ["a,b", "1,x", "2,y"]
