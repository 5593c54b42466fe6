"""Domain types for discovered services and their parsed metadata.

All types serialize to a stable JSON shape (``to_dict`` / ``from_dict``)
whose field names match the attribute names exactly; that shape is what the
store persists and the REST API returns.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from enum import Enum


KNOWN_VERSIONS = ("1.0.0", "1.1.0", "1.1.1", "1.3.0")

# Root element names by standard family. 1.3.0 renamed the root; everything
# earlier (1.0.0 through 1.1.1) shares WMT_MS_Capabilities.
ROOT_130 = "WMS_Capabilities"
ROOT_PRE_130 = "WMT_MS_Capabilities"


class Provenance(str, Enum):
    SEED_PAGE = "seed-page"
    SEARCH_RESULT_PAGE = "search-result-page"
    ARCGIS_DIRECTORY = "arcgis-directory"
    MANUAL = "manual"


class ProviderType(str, Enum):
    GOVERNMENT = "government"
    ACADEMIC = "academic"
    INTERGOVERNMENTAL = "intergovernmental"
    INDUSTRY = "industry"
    NONPROFIT = "nonprofit"
    UNKNOWN = "unknown"


class PublisherSoftware(str, Enum):
    ARCGIS_SERVER = "arcgis-server"
    GEOSERVER = "geoserver"
    MAPSERVER = "mapserver"
    UNKNOWN = "unknown"


class Liveness(str, Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ServerLocation:
    lat: float
    lon: float
    country: str | None = None
    continent: str | None = None

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")

    def to_dict(self) -> dict:
        return {"lat": self.lat, "lon": self.lon,
                "country": self.country, "continent": self.continent}

    @classmethod
    def from_dict(cls, d: dict) -> "ServerLocation":
        return cls(lat=d["lat"], lon=d["lon"],
                   country=d.get("country"), continent=d.get("continent"))


def _iso(ts: dt.datetime | None) -> str | None:
    return None if ts is None else ts.astimezone(dt.timezone.utc).isoformat()


def parse_ts(s: str) -> dt.datetime:
    """Parse an ISO-8601 timestamp, defaulting naive values to UTC."""
    ts = dt.datetime.fromisoformat(s.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=dt.timezone.utc)
    return ts


@dataclass
class ServiceRecord:
    """A discovered WMS endpoint.

    ``canonical_url`` must already be in dedup-normalized form (the
    normalization is a fixed point: applying it again changes nothing).
    """

    id: str
    canonical_url: str
    discovered_from: Provenance
    first_seen: dt.datetime
    last_seen: dt.datetime
    server_location: ServerLocation | None = None
    provider_name: str | None = None
    provider_type: ProviderType = ProviderType.UNKNOWN
    publisher_software: PublisherSoftware = PublisherSoftware.UNKNOWN
    liveness: Liveness = Liveness.UNKNOWN

    def __post_init__(self):
        if not self.canonical_url.lower().startswith(("http://", "https://")):
            raise ValueError(f"canonical_url must be absolute http(s): {self.canonical_url}")

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "canonical_url": self.canonical_url,
            "discovered_from": self.discovered_from.value,
            "first_seen": _iso(self.first_seen),
            "last_seen": _iso(self.last_seen),
            "server_location": self.server_location.to_dict() if self.server_location else None,
            "provider_name": self.provider_name,
            "provider_type": self.provider_type.value,
            "publisher_software": self.publisher_software.value,
            "liveness": self.liveness.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ServiceRecord":
        loc = d.get("server_location")
        return cls(
            id=d["id"],
            canonical_url=d["canonical_url"],
            discovered_from=Provenance(d["discovered_from"]),
            first_seen=parse_ts(d["first_seen"]),
            last_seen=parse_ts(d["last_seen"]),
            server_location=ServerLocation.from_dict(loc) if loc else None,
            provider_name=d.get("provider_name"),
            provider_type=ProviderType(d.get("provider_type", "unknown")),
            publisher_software=PublisherSoftware(d.get("publisher_software", "unknown")),
            liveness=Liveness(d.get("liveness", "unknown")),
        )


@dataclass
class LayerRecord:
    """One node of the capabilities layer tree.

    A layer is *named* (hence requestable) iff ``name`` is a non-empty
    string.  ``geographic_bbox`` is (west, south, east, north) in degrees;
    west > east is legal and means the box crosses the antimeridian.
    ``abstract`` is carried for keyword analytics even though most client
    code only needs name/title.
    """

    name: str | None
    title: str
    keywords: list[str] = field(default_factory=list)
    geographic_bbox: tuple[float, float, float, float] | None = None
    crs_list: list[str] = field(default_factory=list)
    time_dimension: str | None = None
    children: list["LayerRecord"] = field(default_factory=list)
    is_cascading_parent: bool = False
    abstract: str | None = None

    def __post_init__(self):
        if self.name is not None and self.name == "":
            self.name = None
        if self.geographic_bbox is not None:
            w, s, e, n = self.geographic_bbox
            if s > n:
                raise ValueError(f"bbox south > north: {self.geographic_bbox}")
            if not (-180.0 <= w <= 180.0 and -180.0 <= e <= 180.0
                    and -90.0 <= s <= 90.0 and -90.0 <= n <= 90.0):
                raise ValueError(f"bbox out of degree range: {self.geographic_bbox}")
        self.is_cascading_parent = bool(self.children)

    @property
    def is_named(self) -> bool:
        return bool(self.name)

    def walk(self):
        """Yield this layer and all descendants in pre-order document order."""
        yield self
        for child in self.children:
            yield from child.walk()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "title": self.title,
            "keywords": list(self.keywords),
            "geographic_bbox": list(self.geographic_bbox) if self.geographic_bbox else None,
            "crs_list": list(self.crs_list),
            "time_dimension": self.time_dimension,
            "children": [c.to_dict() for c in self.children],
            "is_cascading_parent": self.is_cascading_parent,
            "abstract": self.abstract,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LayerRecord":
        bbox = d.get("geographic_bbox")
        return cls(
            name=d.get("name"),
            title=d.get("title", ""),
            keywords=list(d.get("keywords", [])),
            geographic_bbox=tuple(bbox) if bbox else None,
            crs_list=list(d.get("crs_list", [])),
            time_dimension=d.get("time_dimension"),
            children=[cls.from_dict(c) for c in d.get("children", [])],
            abstract=d.get("abstract"),
        )


@dataclass
class CapabilitiesDoc:
    """Parsed service metadata from one GetCapabilities response."""

    service_version: str
    title: str = ""
    abstract: str = ""
    keywords: list[str] = field(default_factory=list)
    contact_organization: str | None = None
    supported_formats: list[str] = field(default_factory=list)
    root_layers: list[LayerRecord] = field(default_factory=list)
    raw_size_bytes: int = 0

    def __post_init__(self):
        if self.service_version not in KNOWN_VERSIONS:
            raise ValueError(f"unknown WMS version: {self.service_version}")

    @property
    def root_element(self) -> str:
        return ROOT_130 if self.service_version == "1.3.0" else ROOT_PRE_130

    def iter_layers(self):
        """All layers of the tree in pre-order document order."""
        for root in self.root_layers:
            yield from root.walk()

    def named_layer_count(self) -> int:
        return sum(1 for layer in self.iter_layers() if layer.is_named)

    def to_dict(self) -> dict:
        return {
            "service_version": self.service_version,
            "title": self.title,
            "abstract": self.abstract,
            "keywords": list(self.keywords),
            "contact_organization": self.contact_organization,
            "supported_formats": list(self.supported_formats),
            "root_layers": [l.to_dict() for l in self.root_layers],
            "raw_size_bytes": self.raw_size_bytes,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CapabilitiesDoc":
        return cls(
            service_version=d["service_version"],
            title=d.get("title", ""),
            abstract=d.get("abstract", ""),
            keywords=list(d.get("keywords", [])),
            contact_organization=d.get("contact_organization"),
            supported_formats=list(d.get("supported_formats", [])),
            root_layers=[LayerRecord.from_dict(l) for l in d.get("root_layers", [])],
            raw_size_bytes=d.get("raw_size_bytes", 0),
        )


@dataclass(frozen=True)
class TimeExtent:
    """One temporal extent from a layer time dimension.

    Single dates become start == end.  ``year_granularity`` marks extents
    recovered from bare year tokens like "2000".
    """

    start: dt.date
    end: dt.date
    period: dt.timedelta | None = None
    year_granularity: bool = False

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"extent start after end: {self.start} > {self.end}")
        if self.period is not None and self.period <= dt.timedelta(0):
            raise ValueError(f"period must be strictly positive: {self.period}")

    def years(self) -> set[int]:
        return set(range(self.start.year, self.end.year + 1))
