import pytest

from wmswatch.analytics import yearly_distribution
from wmswatch.model import LayerRecord


def _layer(title="", dim=None):
    return LayerRecord(name="x", title=title, time_dimension=dim)


def test_basic_distribution():
    dist = yearly_distribution({
        "svc1": [_layer("Roads 2000"), _layer("Roads 2006")],
    })
    assert dist.layer_count == {2000: 1, 2006: 1}
    assert dist.services_with_latest_layer_count == {2006: 1}
    assert dist.dated_layers == 2
    assert dist.dated_services == 1


def test_undated_service_contributes_nothing():
    dist = yearly_distribution({"svc1": [_layer("Roads"), _layer("Rivers")]})
    assert dist.layer_count == {}
    assert dist.dated_services == 0


def test_dimension_years_counted():
    dist = yearly_distribution({
        "svc1": [_layer(dim="2015-01-01/2015-08-29/P8D")],
    })
    assert dist.layer_count == {2015: 1}
    assert dist.services_with_latest_layer_count == {2015: 1}


def test_multi_year_layer_counts_in_each_year():
    dist = yearly_distribution({"svc1": [_layer(dim="2001/2003")]})
    assert dist.layer_count == {2001: 1, 2002: 1, 2003: 1}
    assert dist.services_with_latest_layer_count == {2003: 1}
    assert dist.dated_layers == 1


def test_latest_before_year_share():
    # proportions mirroring the published 4124-of-4587 currency figure
    services = {}
    for i in range(4124):
        services[f"old{i}"] = [_layer(f"Data {2000 + i % 12}")]  # 2000..2011
    for i in range(4587 - 4124):
        services[f"new{i}"] = [_layer(f"Data {2013 + i % 3}")]
    dist = yearly_distribution(services)
    assert dist.dated_services == 4587
    share = dist.share_of_services_with_latest_before(2013)
    assert share == pytest.approx(4124 / 4587)
    assert abs(share * 100 - 89.91) < 0.01  # percentage-point tolerance
