"""Layer time-dimension parsing and data-collection-year extraction."""

from __future__ import annotations

import datetime as dt
import re

from ..errors import Unparseable
from .types import LayerRecord, TimeExtent

YEAR_RANGE = (1900, 2099)

_YEAR_TOKEN = re.compile(r"(?<!\d)(19\d{2}|20\d{2})(?!\d)")

_DURATION = re.compile(
    r"^P(?:(?P<years>\d+)Y)?(?:(?P<months>\d+)M)?(?:(?P<weeks>\d+)W)?(?:(?P<days>\d+)D)?"
    r"(?:T(?:(?P<hours>\d+)H)?(?:(?P<minutes>\d+)M)?(?:(?P<seconds>\d+(?:\.\d+)?)S)?)?$"
)


def parse_duration(text: str) -> dt.timedelta | None:
    """ISO-8601 duration to a timedelta.

    Calendar units are approximated (year = 365 d, month = 30 d); monitoring
    dimensions use day/hour periods almost exclusively, so the approximation
    only affects year coverage at the margins.
    """
    m = _DURATION.match(text.strip())
    if not m or text.strip() == "P":
        return None
    parts = {k: float(v) for k, v in m.groupdict().items() if v}
    if not parts:
        return None
    days = (parts.get("years", 0) * 365 + parts.get("months", 0) * 30
            + parts.get("weeks", 0) * 7 + parts.get("days", 0))
    seconds = (parts.get("hours", 0) * 3600 + parts.get("minutes", 0) * 60
               + parts.get("seconds", 0))
    return dt.timedelta(days=days, seconds=seconds)


def _parse_date_token(token: str) -> tuple[dt.date, bool] | None:
    """Return (date, year_granularity) or None if the token has no date."""
    token = token.strip()
    if not token:
        return None
    if re.fullmatch(r"\d{4}", token):
        year = int(token)
        if not 1 <= year <= 9999:
            return None
        return dt.date(year, 1, 1), True
    # strip any time-of-day part
    datepart = token.split("T", 1)[0]
    m = re.fullmatch(r"(\d{4})-(\d{1,2})(?:-(\d{1,2}))?", datepart)
    if not m:
        return None
    year, month = int(m.group(1)), int(m.group(2))
    day = int(m.group(3)) if m.group(3) else 1
    try:
        return dt.date(year, month, day), False
    except ValueError:
        return None


def _parse_item(item: str) -> TimeExtent | None:
    pieces = item.split("/")
    start = _parse_date_token(pieces[0])
    if start is None:
        return None
    start_date, year_gran = start
    end_date = start_date
    period = None
    if len(pieces) >= 2:
        end = _parse_date_token(pieces[1])
        if end is None:
            return None
        end_date = end[0]
        year_gran = year_gran or end[1]
    if len(pieces) >= 3:
        period = parse_duration(pieces[2])
        if period is None or period <= dt.timedelta(0):
            return None
    if start_date > end_date:
        return None
    return TimeExtent(start=start_date, end=end_date, period=period,
                      year_granularity=year_gran)


def parse_time_dimension(text: str) -> list[TimeExtent]:
    """Parse a raw dimension string into a list of extents.

    Handles comma-separated items where each item is a single date, a
    ``start/end`` pair, or ``start/end/period``; bare year tokens are
    tolerated.  Items that fail to parse are skipped; if nothing parses,
    :class:`Unparseable` is raised so the caller can record the layer as
    having no collection time.
    """
    extents = [e for e in (_parse_item(i) for i in text.split(",")) if e]
    if not extents:
        raise Unparseable(f"no recognizable date token in {text!r}")
    return extents


def extract_layer_years(layer: LayerRecord) -> set[int]:
    """Union of collection years from the time dimension and from 4-digit
    year tokens embedded in the layer name/title (e.g. "Population Density
    2000").  Years outside 1900-2099 are discarded.  Empty set means the
    layer carries no usable collection time.
    """
    years: set[int] = set()
    if layer.time_dimension:
        try:
            for extent in parse_time_dimension(layer.time_dimension):
                years.update(extent.years())
        except Unparseable:
            pass
    for text in (layer.name or "", layer.title or ""):
        for token in _YEAR_TOKEN.findall(text):
            years.add(int(token))
    lo, hi = YEAR_RANGE
    return {y for y in years if lo <= y <= hi}
