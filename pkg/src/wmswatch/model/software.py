"""Publisher-software detection from URL shape and document metadata."""

from __future__ import annotations

from urllib.parse import parse_qsl, urlsplit

from .types import CapabilitiesDoc, PublisherSoftware


def _url_evidence(url: str) -> PublisherSoftware:
    try:
        parts = urlsplit(url)
    except ValueError:
        return PublisherSoftware.UNKNOWN
    path = parts.path.lower()
    if "/arcgis/" in path and ("/mapserver" in path or "/services/" in path):
        return PublisherSoftware.ARCGIS_SERVER
    if "/geoserver/" in path or path.endswith("/geoserver"):
        return PublisherSoftware.GEOSERVER
    if any(k.lower() == "map" for k, _ in parse_qsl(parts.query, keep_blank_values=True)):
        return PublisherSoftware.MAPSERVER
    return PublisherSoftware.UNKNOWN


def _doc_evidence(doc: CapabilitiesDoc | None) -> PublisherSoftware:
    if doc is None:
        return PublisherSoftware.UNKNOWN
    text = " ".join(
        filter(None, [doc.title, doc.abstract, doc.contact_organization or ""])
        ).lower()
    text += " " + " ".join(doc.keywords).lower()
    if "arcgis" in text or "esri" in text:
        return PublisherSoftware.ARCGIS_SERVER
    if "geoserver" in text:
        return PublisherSoftware.GEOSERVER
    if "mapserver" in text or "umn mapserver" in text:
        return PublisherSoftware.MAPSERVER
    return PublisherSoftware.UNKNOWN


def detect_publisher_software(url: str,
                              doc: CapabilitiesDoc | None = None) -> PublisherSoftware:
    """Classify the software behind a WMS endpoint.

    URL evidence wins over document evidence on conflict; within each source
    the precedence is arcgis-server, then geoserver, then mapserver.
    """
    verdict = _url_evidence(url)
    if verdict is not PublisherSoftware.UNKNOWN:
        return verdict
    return _doc_evidence(doc)
