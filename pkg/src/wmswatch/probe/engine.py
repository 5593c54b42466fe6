"""The two standing probe operations plus version-support testing.

Testing rules: GetCapabilities goes out without a version parameter so the
server answers with its default; GetMap requests exactly one layer (the
first named one) at 400x200, preferring PNG, then JPEG, then whatever else
the service advertises.  All failures are encoded in the returned record,
never raised.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Callable
from urllib.parse import quote, urlsplit, urlunsplit

from ..errors import NoNamedLayer, NoUsableFormat, NotWms, NotXml, Truncated
from ..model import (
    KNOWN_VERSIONS,
    CapabilitiesDoc,
    ServiceRecord,
    first_named_layer,
    parse_capabilities,
)
from ..crawler.urlnorm import form_getcapabilities_url
from .transport import Exchange, Transport, TransportFailure, TransportResult
from .types import (
    ErrorClass,
    GetMapSpec,
    Operation,
    ProbeRecord,
    RawOutcome,
    classify_outcome,
)

DEFAULT_TIMEOUT_S = 60.0

Clock = Callable[[], dt.datetime]


def _utcnow() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc)


def _append_params(url: str, params: list[tuple[str, str]]) -> str:
    parts = urlsplit(url)
    extra = "&".join(f"{k}={quote(str(v), safe=':,/')}" for k, v in params)
    query = f"{parts.query}&{extra}" if parts.query else extra
    return urlunsplit((parts.scheme, parts.netloc, parts.path, query, parts.fragment))


def _looks_like_exception_report(body: bytes) -> bool:
    head = body[:2048].lstrip()
    return b"ServiceException" in head


def _raw_outcome(result: TransportResult, payload_ok) -> tuple[RawOutcome, str]:
    if isinstance(result, TransportFailure):
        return result.kind, result.detail
    if result.status != 200:
        return RawOutcome.NON_200, f"HTTP {result.status}"
    ok, detail = payload_ok(result)
    return (RawOutcome.OK, "") if ok else (RawOutcome.WRONG_PAYLOAD, detail)


def _record(service_id: str, site_id: str, op: Operation, started: dt.datetime,
            result: TransportResult, raw: RawOutcome, detail: str) -> ProbeRecord:
    accessible, success, error_class = classify_outcome(raw)
    timing = result.timing
    nbytes = len(result.body) if isinstance(result, Exchange) else 0
    return ProbeRecord(
        service_id=service_id,
        site_id=site_id,
        operation=op,
        started_at=started,
        timing=timing,
        response_bytes=nbytes,
        accessible=accessible,
        success=success,
        error_class=error_class,
        error_detail=detail,
    )


def probe_getcapabilities(service: ServiceRecord, site_id: str,
                          transport: Transport,
                          timeout_s: float = DEFAULT_TIMEOUT_S,
                          clock: Clock = _utcnow) -> ProbeRecord:
    """One GetCapabilities request without a version parameter.

    Success means HTTP 200 and a payload that parses as a capabilities
    document.  The canonical URL never carries version/request parameters,
    so the server's default version is what gets measured.
    """
    url = form_getcapabilities_url(service.canonical_url)
    started = clock()
    result = transport.perform(url, timeout_s=timeout_s)

    def payload_ok(exchange: Exchange):
        try:
            parse_capabilities(exchange.body)
            return True, ""
        except (NotXml, NotWms, Truncated) as exc:
            return False, f"{type(exc).__name__}: {exc}"

    raw, detail = _raw_outcome(result, payload_ok)
    return _record(service.id, site_id, Operation.GET_CAPABILITIES, started,
                   result, raw, detail)


def build_getmap_spec(doc: CapabilitiesDoc,
                      width: int = 400, height: int = 200) -> GetMapSpec:
    """Derive the standing GetMap test request from a capabilities document.

    Layer: first named layer (a named cascading parent qualifies).
    Format: first advertised PNG, then JPEG, then the first listed format.
    CRS: CRS:84 on 1.3.0 when offered (keeps lon/lat axis order), otherwise
    EPSG:4326, otherwise the layer's first CRS.  For EPSG:4326 under 1.3.0
    the bbox is emitted in lat/lon order per the standard.
    """
    layer = first_named_layer(doc)  # raises NoNamedLayer

    formats = doc.supported_formats
    if not formats:
        raise NoUsableFormat("capabilities advertises no GetMap format")
    fmt = (next((f for f in formats if "png" in f.lower()), None)
           or next((f for f in formats if "jp" in f.lower()), None)
           or formats[0])

    crs_list = layer.crs_list or ["EPSG:4326"]
    swap_axes = False
    if doc.service_version == "1.3.0" and "CRS:84" in crs_list:
        crs = "CRS:84"
    elif "EPSG:4326" in crs_list:
        crs = "EPSG:4326"
        swap_axes = doc.service_version == "1.3.0"
    else:
        crs = crs_list[0]

    w, s, e, n = layer.geographic_bbox or (-180.0, -90.0, 180.0, 90.0)
    bbox = (s, w, n, e) if swap_axes else (w, s, e, n)

    return GetMapSpec(layer_name=layer.name, crs=crs, bbox=bbox, format=fmt,
                      version=doc.service_version, width=width, height=height)


def probe_getmap(service: ServiceRecord, spec: GetMapSpec, site_id: str,
                 transport: Transport,
                 timeout_s: float = DEFAULT_TIMEOUT_S,
                 clock: Clock = _utcnow) -> ProbeRecord:
    """One GetMap request per the standing spec.

    Success means HTTP 200, an image content type and a non-empty body; no
    pixel-level decoding.  An OGC exception report counts as a request
    processing error (the server answered, it just refused to render).
    """
    crs_key = "CRS" if spec.version == "1.3.0" else "SRS"
    params = [
        ("service", "WMS"),
        ("request", "GetMap"),
        ("version", spec.version),
        ("layers", spec.layer_name),
        ("styles", ""),
        (crs_key, spec.crs),
        ("bbox", ",".join(repr(v) if isinstance(v, float) else str(v)
                          for v in spec.bbox)),
        ("width", str(spec.width)),
        ("height", str(spec.height)),
        ("format", spec.format),
    ]
    url = _append_params(service.canonical_url, params)
    started = clock()
    result = transport.perform(url, timeout_s=timeout_s)

    def payload_ok(exchange: Exchange):
        if _looks_like_exception_report(exchange.body):
            return False, "OGC service exception report"
        if not exchange.content_type.startswith("image/"):
            return False, f"non-image content type {exchange.content_type!r}"
        if not exchange.body:
            return False, "empty image body"
        return True, ""

    raw, detail = _raw_outcome(result, payload_ok)
    return _record(service.id, site_id, Operation.GET_MAP, started,
                   result, raw, detail)


@dataclass
class VersionSupport:
    """Outcome of the four explicit-version capability probes.

    ``supported`` collects every version the server actually declared in a
    parseable response; ``outcomes`` records the per-requested-version
    result: ``supported`` when the declared version equals the request,
    ``negotiated-to-X`` when the server answered with another version per
    the WMS negotiation rules, otherwise ``not-wms`` or ``unreachable``.
    """

    supported: set[str] = field(default_factory=set)
    outcomes: dict[str, str] = field(default_factory=dict)


def probe_version_support(service: ServiceRecord, site_id: str,
                          transport: Transport,
                          timeout_s: float = DEFAULT_TIMEOUT_S) -> VersionSupport:
    """Issue one GetCapabilities per known version with an explicit version
    parameter and derive the supported-version set from the declared
    versions of the parseable responses."""
    out = VersionSupport()
    base = form_getcapabilities_url(service.canonical_url)
    for version in KNOWN_VERSIONS:
        url = _append_params(base, [("version", version)])
        result = transport.perform(url, timeout_s=timeout_s)
        if isinstance(result, TransportFailure):
            out.outcomes[version] = "unreachable"
            continue
        try:
            doc = parse_capabilities(result.body)
        except (NotXml, NotWms, Truncated):
            out.outcomes[version] = "not-wms"
            continue
        declared = doc.service_version
        out.supported.add(declared)
        out.outcomes[version] = ("supported" if declared == version
                                 else f"negotiated-to-{declared}")
    return out
