"""Domain types and the multi-version WMS capabilities parser."""

from .capabilities import DEFAULT_SIZE_CAP, first_named_layer, parse_capabilities
from .software import detect_publisher_software
from .timedim import extract_layer_years, parse_duration, parse_time_dimension
from .types import (
    KNOWN_VERSIONS,
    CapabilitiesDoc,
    LayerRecord,
    Liveness,
    Provenance,
    ProviderType,
    PublisherSoftware,
    ServerLocation,
    ServiceRecord,
    TimeExtent,
    parse_ts,
)

__all__ = [
    "KNOWN_VERSIONS",
    "DEFAULT_SIZE_CAP",
    "CapabilitiesDoc",
    "LayerRecord",
    "Liveness",
    "Provenance",
    "ProviderType",
    "PublisherSoftware",
    "ServerLocation",
    "ServiceRecord",
    "TimeExtent",
    "detect_publisher_software",
    "extract_layer_years",
    "first_named_layer",
    "parse_capabilities",
    "parse_duration",
    "parse_time_dimension",
    "parse_ts",
]
