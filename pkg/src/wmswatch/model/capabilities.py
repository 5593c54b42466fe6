"""Multi-version WMS capabilities parser.

Accepts raw response bytes and produces a :class:`CapabilitiesDoc`.  The
acceptance bar is deliberately shallow: well-formed XML plus the right root
element.  Real-world documents violate the official schemas pervasively, so
anything deeper stays tolerant — a malformed bounding box drops to ``None``
instead of failing the whole document.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from ..errors import NoNamedLayer, NotWms, NotXml, Truncated
from .types import (
    KNOWN_VERSIONS,
    ROOT_130,
    ROOT_PRE_130,
    CapabilitiesDoc,
    LayerRecord,
)

DEFAULT_SIZE_CAP = 32 * 1024 * 1024

# image formats appear under Request/GetMap (1.1+) or Request/Map (1.0.0)
_GETMAP_TAGS = ("GetMap", "Map")


def _localname(tag) -> str:
    if not isinstance(tag, str):
        return ""
    return tag.rsplit("}", 1)[-1]


def _child(el, name):
    for c in el:
        if _localname(c.tag) == name:
            return c
    return None

def _children(el, name):
    return [c for c in el if _localname(c.tag) == name]


def _text(el, name) -> str:
    c = _child(el, name)
    return (c.text or "").strip() if c is not None else ""


def _parse_xml(xml_bytes: bytes) -> ET.Element:
    try:
        return ET.fromstring(xml_bytes)
    except ET.ParseError:
        pass
    # Broken or lying encoding declarations are common; retry decoded.
    for enc in ("utf-8", "latin-1"):
        try:
            text = xml_bytes.decode(enc)
        except UnicodeDecodeError:
            continue
        text = re.sub(r"^\s*<\?xml[^>]*\?>", "", text, count=1)
        try:
            return ET.fromstring(text)
        except ET.ParseError:
            continue
    raise NotXml("payload is not well-formed XML")


def _resolve_version(root_name: str, declared: str | None) -> str:
    if declared in KNOWN_VERSIONS:
        return declared
    # Absent or off-spec version attributes fall back to the most common
    # version of the root's family.
    return "1.3.0" if root_name == ROOT_130 else "1.1.1"


def _keywords(el) -> list[str]:
    kws: list[str] = []
    kl = _child(el, "KeywordList")
    if kl is not None:
        kws = [(k.text or "").strip() for k in _children(kl, "Keyword")]
    else:
        # 1.0.0 carries a single whitespace-separated Keywords element
        raw = _text(el, "Keywords")
        if raw:
            kws = raw.split()
    return [k for k in kws if k]


def _parse_bbox(layer_el) -> tuple[float, float, float, float] | None:
    geo = _child(layer_el, "EX_GeographicBoundingBox")
    try:
        if geo is not None:
            w = float(_text(geo, "westBoundLongitude"))
            e = float(_text(geo, "eastBoundLongitude"))
            s = float(_text(geo, "southBoundLatitude"))
            n = float(_text(geo, "northBoundLatitude"))
        else:
            ll = _child(layer_el, "LatLonBoundingBox")
            if ll is None:
                return None
            w = float(ll.get("minx"))
            s = float(ll.get("miny"))
            e = float(ll.get("maxx"))
            n = float(ll.get("maxy"))
    except (TypeError, ValueError):
        return None
    if s > n:
        return None
    if not (-180.0 <= w <= 180.0 and -180.0 <= e <= 180.0
            and -90.0 <= s <= 90.0 and -90.0 <= n <= 90.0):
        return None
    return (w, s, e, n)


def _parse_crs_list(layer_el) -> list[str]:
    crs: list[str] = []
    for tag in ("CRS", "SRS"):
        for el in _children(layer_el, tag):
            text = (el.text or "").strip()
            # pre-1.1.1 documents may pack several identifiers in one element
            crs.extend(t for t in text.split() if t)
    seen = set()
    out = []
    for c in crs:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _parse_time_dimension(layer_el) -> str | None:
    # 1.1.x declares <Dimension name="time"/> and puts values in
    # <Extent name="time">; 1.3.0 inlines values in <Dimension>.
    for el in _children(layer_el, "Extent"):
        if (el.get("name") or "").lower() == "time":
            value = (el.text or "").strip()
            if value:
                return value
    for el in _children(layer_el, "Dimension"):
        if (el.get("name") or "").lower() == "time":
            value = (el.text or "").strip()
            if value:
                return value
    return None


def _parse_layer(layer_el, inherited_bbox, inherited_crs) -> LayerRecord:
    name = _text(layer_el, "Name") or None
    title = _text(layer_el, "Title")
    abstract = _text(layer_el, "Abstract") or None

    own_bbox = _parse_bbox(layer_el)
    bbox = own_bbox if own_bbox is not None else inherited_bbox

    own_crs = _parse_crs_list(layer_el)
    crs = own_crs + [c for c in inherited_crs if c not in own_crs]

    children = [
        _parse_layer(c, bbox, crs)
        for c in _children(layer_el, "Layer")
    ]

    return LayerRecord(
        name=name,
        title=title,
        keywords=_keywords(layer_el),
        geographic_bbox=bbox,
        crs_list=crs,
        time_dimension=_parse_time_dimension(layer_el),
        children=children,
        abstract=abstract,
    )


def _parse_formats(capability_el) -> list[str]:
    request = _child(capability_el, "Request")
    if request is None:
        return []
    for tag in _GETMAP_TAGS:
        getmap = _child(request, tag)
        if getmap is None:
            continue
        formats: list[str] = []
        for fmt in _children(getmap, "Format"):
            text = (fmt.text or "").strip()
            if text:
                formats.append(text)
            else:
                # 1.0.0 lists formats as empty child elements: <PNG/><GIF/>
                formats.extend(_localname(c.tag) for c in fmt)
        return [f for f in formats if f]
    return []


def parse_capabilities(xml_bytes: bytes,
                       size_cap: int = DEFAULT_SIZE_CAP) -> CapabilitiesDoc:
    """Parse a GetCapabilities payload into a :class:`CapabilitiesDoc`.

    Raises :class:`NotXml` for non-XML payloads, :class:`NotWms` for XML
    with the wrong root element (service-exception reports, WMTS documents,
    HTML masquerading as XML), and :class:`Truncated` when the payload
    exceeds ``size_cap`` bytes.
    """
    if len(xml_bytes) > size_cap:
        raise Truncated(f"payload of {len(xml_bytes)} bytes exceeds cap {size_cap}")
    root = _parse_xml(xml_bytes)

    root_name = _localname(root.tag)
    if root_name not in (ROOT_130, ROOT_PRE_130):
        raise NotWms(f"root element {root_name!r} is not a WMS capabilities root")

    version = _resolve_version(root_name, root.get("version"))

    service = _child(root, "Service")
    title = abstract = ""
    keywords: list[str] = []
    contact = None
    if service is not None:
        title = _text(service, "Title")
        abstract = _text(service, "Abstract")
        keywords = _keywords(service)
        ci = _child(service, "ContactInformation")
        if ci is not None:
            cpp = _child(ci, "ContactPersonPrimary")
            org = _text(cpp, "ContactOrganization") if cpp is not None else ""
            contact = org or _text(ci, "ContactOrganization") or None

    capability = _child(root, "Capability")
    formats: list[str] = []
    root_layers: list[LayerRecord] = []
    if capability is not None:
        formats = _parse_formats(capability)
        root_layers = [
            _parse_layer(el, None, [])
            for el in _children(capability, "Layer")
        ]

    return CapabilitiesDoc(
        service_version=version,
        title=title,
        abstract=abstract,
        keywords=keywords,
        contact_organization=contact,
        supported_formats=formats,
        root_layers=root_layers,
        raw_size_bytes=len(xml_bytes),
    )


def first_named_layer(doc: CapabilitiesDoc) -> LayerRecord:
    """First layer in pre-order document traversal with a non-empty name.

    Cascading parents qualify: a named group layer is requestable as a
    single layer, so it wins over its own children.
    """
    for layer in doc.iter_layers():
        if layer.is_named:
            return layer
    raise NoNamedLayer("capabilities advertises no named layer")
