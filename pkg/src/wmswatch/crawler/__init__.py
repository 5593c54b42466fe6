"""WMS endpoint discovery: page crawling, URL formation, validation."""

from .arcgis import walk_arcgis_directory
from .engine import (
    CrawlConfig,
    CrawlResult,
    CrawlSeed,
    CrawlSummary,
    SeedKind,
    ValidationResult,
    Verdict,
    crawl,
    service_id_for,
    validate_wms_url,
)
from .extract import (
    CandidateRules,
    CandidateUrl,
    DEFAULT_RULES,
    MatchRule,
    classify_url,
    extract_candidate_urls,
)
from .fetch import (
    FakeFetcher,
    FetchError,
    FetchResponse,
    Fetcher,
    RateLimiter,
    RequestsFetcher,
)
from .urlnorm import dedup_key, form_getcapabilities_url

__all__ = [
    "CandidateRules",
    "CandidateUrl",
    "CrawlConfig",
    "CrawlResult",
    "CrawlSeed",
    "CrawlSummary",
    "DEFAULT_RULES",
    "FakeFetcher",
    "FetchError",
    "FetchResponse",
    "Fetcher",
    "MatchRule",
    "RateLimiter",
    "RequestsFetcher",
    "SeedKind",
    "ValidationResult",
    "Verdict",
    "classify_url",
    "crawl",
    "dedup_key",
    "extract_candidate_urls",
    "form_getcapabilities_url",
    "service_id_for",
    "validate_wms_url",
    "walk_arcgis_directory",
]
