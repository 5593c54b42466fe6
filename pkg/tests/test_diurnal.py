import datetime as dt

from helpers import probe_rec
from wmswatch.analytics import diurnal_series, timezone_offset_from_longitude


BASE = dt.datetime(2015, 9, 1, tzinfo=dt.timezone.utc)


def _day_of_records(rt_by_hour, day_offset=0):
    recs = []
    for hour, rt in enumerate(rt_by_hour):
        recs.append(probe_rec(
            total_ms=rt,
            started_at=BASE + dt.timedelta(days=day_offset, hours=hour)))
    return recs


def test_constant_series_has_no_peaks():
    series = diurnal_series(_day_of_records([100] * 24), tz_offset_hours=0)
    assert series.peak_hours == []
    assert all(m == 100 for m in series.hour_mean_ms)


def test_injected_morning_peaks_detected():
    rts = [100] * 24
    for h in (9, 10, 11):
        rts[h] = 400
    series = diurnal_series(_day_of_records(rts), tz_offset_hours=0)
    assert set(series.peak_hours) == {9, 10, 11}
    assert series.hour_max_ms[9] == 400


def test_folding_respects_local_offset():
    rts = [100] * 24
    for h in (9, 10, 11):
        rts[h] = 400
    base = diurnal_series(_day_of_records(rts), tz_offset_hours=0)
    # same series shifted 5 hours in UTC with a +5 h timezone folds back
    shifted_records = [
        probe_rec(total_ms=rt, started_at=BASE + dt.timedelta(hours=hour - 5))
        for hour, rt in enumerate(rts)
    ]
    shifted = diurnal_series(shifted_records, tz_offset_hours=5)
    assert shifted.hour_mean_ms == base.hour_mean_ms
    assert shifted.peak_hours == base.peak_hours


def test_timezone_from_longitude():
    assert timezone_offset_from_longitude(0.0) == 0
    assert timezone_offset_from_longitude(-112.0) == -7  # Arizona-ish
    assert timezone_offset_from_longitude(116.4) == 8

    rts = [100] * 24
    rts[3] = 900  # 03:00 UTC spike
    series = diurnal_series(_day_of_records(rts), server_lon=116.4)
    assert series.tz_offset_hours == 8
    assert series.peak_hours == [11]  # 03:00 UTC is 11:00 local


def test_failed_probes_excluded():
    recs = _day_of_records([100] * 24)
    recs.append(probe_rec(accessible=False, success=False, started_at=BASE))
    series = diurnal_series(recs, tz_offset_hours=0)
    assert series.hour_mean_ms[0] == 100


def test_multiple_days_average():
    day1 = _day_of_records([100] * 24, day_offset=0)
    day2 = _day_of_records([300] * 24, day_offset=1)
    series = diurnal_series(day1 + day2, tz_offset_hours=0)
    assert all(m == 200 for m in series.hour_mean_ms)
    assert all(mx == 300 for mx in series.hour_max_ms)
