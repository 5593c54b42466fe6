"""Named survey reports: one builder per published table or figure.

Builders are pure functions over in-memory snapshots (services, layers,
probe records); the REST layer and CLI assemble snapshots from the store
and serialize the result as JSON or CSV.
"""

from __future__ import annotations

import csv
import io
import re
from collections import Counter
from typing import Iterable, Mapping, Sequence

from ..model.types import LayerRecord, ServiceRecord
from ..probe.types import Operation, ProbeRecord
from .coverage import coverage_grid
from .keywords import keyword_frequency
from .qos import AccessibilityClass, classify_accessibility, error_shares
from .years import yearly_distribution

# projection families of interest, keyed by the EPSG-style identifiers that
# map layers actually advertise
_WEB_MERCATOR = {"3857", "900913", "102100", "102113", "3785"}
_ANTARCTIC_STEREO = {"3031", "3976", "102021"}
_ALBERS = {"3005", "5070", "102003", "3310", "102008"}
_GEOGRAPHIC = {"4326", "4258", "4269", "4267", "4283", "4490", "84"}

_UTM_RANGES = ((32601, 32660), (32701, 32760), (26901, 26960), (25828, 25838))

_CRS_CODE = re.compile(r"(\d+)\s*$")


def classify_crs(crs_id: str) -> str | None:
    """Map a CRS identifier to a projection family, None if unrecognized."""
    ident = crs_id.strip().upper()
    if ident in ("CRS:84", "OGC:CRS84"):
        return "geographic"
    m = _CRS_CODE.search(ident)
    if not m:
        return None
    code = m.group(1)
    if code in _WEB_MERCATOR:
        return "web-mercator"
    if code in _ANTARCTIC_STEREO:
        return "antarctic-stereographic"
    if code in _ALBERS:
        return "albers"
    if code in _GEOGRAPHIC:
        return "geographic"
    n = int(code)
    if any(lo <= n <= hi for lo, hi in _UTM_RANGES):
        return "utm"
    return None


def crs_tally(layers: Sequence[LayerRecord]) -> dict:
    """Per-family support share of layers (a layer counts once per family it
    supports; families overlap, so shares do not sum to one)."""
    total = len(layers)
    family_counts: Counter = Counter()
    for layer in layers:
        families = {classify_crs(c) for c in layer.crs_list}
        families.discard(None)
        family_counts.update(families)
    return {
        "total_layers": total,
        "families": {
            family: {"layers": count,
                     "share": count / total if total else 0.0}
            for family, count in sorted(family_counts.items())
        },
    }


def version_tally(services_versions: Iterable[str]) -> dict:
    counts = Counter(services_versions)
    return {"versions": dict(sorted(counts.items())), "total": sum(counts.values())}


def accessibility_table(records_by_service: Mapping[str, Sequence[ProbeRecord]]
                        ) -> dict:
    """Share of services in each accessibility class (one class per
    service, from its record window)."""
    counts = Counter()
    for records in records_by_service.values():
        if records:
            counts[classify_accessibility(records).value] += 1
    total = sum(counts.values())
    return {
        "total_services": total,
        "classes": {
            cls.value: {"services": counts.get(cls.value, 0),
                        "share": counts.get(cls.value, 0) / total if total else 0.0}
            for cls in AccessibilityClass
        },
    }


def error_table(records: Sequence[ProbeRecord]) -> dict:
    shares = error_shares(records)
    return {"shares": {cls.value: share for cls, share in shares.items()},
            "failed_records": sum(1 for r in records if r.error_class is not None)}


def keyword_top(layers: Sequence[LayerRecord], n: int = 50) -> dict:
    ranked = keyword_frequency(layers)[:n]
    return {"keywords": [{"keyword": k, "layers": c} for k, c in ranked]}


def coverage_report(layers: Sequence[LayerRecord], cell_deg: float = 1.0) -> dict:
    return coverage_grid(layers, cell_deg=cell_deg).to_dict()


def yearly_report(layers_by_service: Mapping[str, Sequence[LayerRecord]]) -> dict:
    return yearly_distribution(layers_by_service).to_dict()


def provider_tally(services: Sequence[ServiceRecord]) -> dict:
    """Services per provider, the raw material for the provider power law."""
    counts = Counter(s.provider_name for s in services if s.provider_name)
    ranked = counts.most_common()
    return {
        "providers": [{"provider": name, "services": count}
                      for name, count in ranked],
        "counts": [count for _name, count in ranked],
        "total_with_provider": sum(counts.values()),
    }


def rows_to_csv(rows: Sequence[Mapping], fieldnames: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


OPERATIONS = {op.value: op for op in Operation}
