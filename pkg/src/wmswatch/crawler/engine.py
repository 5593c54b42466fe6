"""Breadth-first discovery crawl: pages in, validated ServiceRecords out.

The crawl is best-effort by design.  A fetch failure never aborts the run;
it lands in the summary counters instead.  Admission is strict the other
way around: nothing enters the result set without a capabilities document
that actually parsed, and dedup happens on the canonical service key.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from urllib.parse import urljoin, urlsplit, urlunsplit
from urllib.robotparser import RobotFileParser

from ..errors import MalformedUrl, NotWms, NotXml, Truncated
from ..model import (
    CapabilitiesDoc,
    Liveness,
    Provenance,
    ServiceRecord,
    detect_publisher_software,
    parse_capabilities,
)
from .arcgis import walk_arcgis_directory
from .extract import (
    CandidateUrl,
    MatchRule,
    _AnchorCollector,
    classify_url,
    extract_candidate_urls,
)
from .fetch import Fetcher, FetchError, RateLimiter
from .urlnorm import dedup_key, form_getcapabilities_url

log = logging.getLogger(__name__)


class SeedKind(str, Enum):
    GENERIC_PAGE = "generic-page"
    ARCGIS_DIRECTORY = "arcgis-directory"
    CATALOG = "catalog"


class Verdict(str, Enum):
    VALID_WMS = "valid-wms"
    NOT_WMS = "not-wms"
    UNREACHABLE = "unreachable"


@dataclass(frozen=True)
class CrawlSeed:
    url: str
    kind: SeedKind = SeedKind.GENERIC_PAGE
    max_depth: int = 2
    note: str = ""

    def __post_init__(self):
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if not self.url.lower().startswith(("http://", "https://")):
            raise ValueError(f"seed url must be absolute http(s): {self.url!r}")

    @classmethod
    def from_json_line(cls, line: str) -> "CrawlSeed":
        d = json.loads(line)
        return cls(url=d["url"], kind=SeedKind(d.get("kind", "generic-page")),
                   max_depth=int(d.get("max_depth", 2)), note=d.get("note", ""))


@dataclass
class ValidationResult:
    candidate: CandidateUrl
    verdict: Verdict
    http_status: int | None = None
    root_element: str | None = None
    elapsed_ms: float = 0.0


@dataclass
class CrawlSummary:
    pages_fetched: int = 0
    fetch_failures: int = 0
    candidates_seen: int = 0
    validations: int = 0
    admitted: int = 0
    skipped_robots: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class CrawlResult:
    services: list[ServiceRecord] = field(default_factory=list)
    capabilities: dict[str, CapabilitiesDoc] = field(default_factory=dict)
    validations: list[ValidationResult] = field(default_factory=list)
    summary: CrawlSummary = field(default_factory=CrawlSummary)


def validate_wms_url(url: str, fetcher: Fetcher, timeout_s: float = 30.0,
                     candidate: CandidateUrl | None = None
                     ) -> tuple[ValidationResult, CapabilitiesDoc | None]:
    """Fetch a formed capabilities URL and decide whether a WMS lives there.

    Errors are data: network trouble means ``unreachable``, a payload that
    is not a capabilities document means ``not-wms``.
    """
    if candidate is None:
        candidate = CandidateUrl(url=url, source_page="", match_rule=MatchRule.EXPLICIT_KVP)
    try:
        resp = fetcher.fetch(url, timeout_s=timeout_s)
    except FetchError:
        return ValidationResult(candidate, Verdict.UNREACHABLE), None
    try:
        doc = parse_capabilities(resp.body)
    except (NotXml, NotWms, Truncated):
        return ValidationResult(candidate, Verdict.NOT_WMS,
                                http_status=resp.status,
                                elapsed_ms=resp.elapsed_ms), None
    return ValidationResult(candidate, Verdict.VALID_WMS,
                            http_status=resp.status,
                            root_element=doc.root_element,
                            elapsed_ms=resp.elapsed_ms), doc


def service_id_for(canonical_url: str) -> str:
    return hashlib.sha1(canonical_url.encode()).hexdigest()[:16]


@dataclass
class CrawlConfig:
    politeness_delay_s: float = 1.0
    validation_timeout_s: float = 30.0
    page_timeout_s: float = 30.0
    respect_robots: bool = True
    links_per_page: int = 200
    user_agent: str = "wmswatch"


class _RobotsCache:
    def __init__(self, fetcher: Fetcher, enabled: bool, agent: str):
        self._fetcher = fetcher
        self._enabled = enabled
        self._agent = agent
        self._cache: dict[str, RobotFileParser | None] = {}

    def allowed(self, url: str) -> bool:
        if not self._enabled:
            return True
        parts = urlsplit(url)
        host = parts.netloc.lower()
        if host not in self._cache:
            robots_url = urlunsplit((parts.scheme, parts.netloc, "/robots.txt", "", ""))
            parser = RobotFileParser()
            try:
                resp = self._fetcher.fetch(robots_url, timeout_s=10.0)
                if resp.status == 200:
                    parser.parse(resp.body.decode("utf-8", errors="replace").splitlines())
                else:
                    parser = None
            except FetchError:
                parser = None
            self._cache[host] = parser
        parser = self._cache[host]
        return True if parser is None else parser.can_fetch(self._agent, url)


def crawl(seeds: list[CrawlSeed], budget: int, fetcher: Fetcher,
          config: CrawlConfig | None = None,
          limiter: RateLimiter | None = None,
          now: dt.datetime | None = None) -> CrawlResult:
    """Run the discovery workflow over the seed list.

    ``budget`` caps page fetches (seed pages and directory pages included;
    validation requests and robots.txt lookups are not pages).  Every
    candidate is validated before admission and deduplicated on its
    canonical key, so two pages linking the same endpoint with shuffled
    query parameters still produce one ServiceRecord.
    """
    if budget < 0:
        raise ValueError("budget must be >= 0")
    config = config or CrawlConfig()
    limiter = limiter or RateLimiter(config.politeness_delay_s)
    robots = _RobotsCache(fetcher, config.respect_robots, config.user_agent)
    stamp = now or dt.datetime.now(dt.timezone.utc)

    result = CrawlResult()
    seen_pages: set[str] = set()
    seen_candidates: set[str] = set()
    admitted: dict[str, ServiceRecord] = {}

    def admit(candidate: CandidateUrl, provenance: Provenance) -> None:
        try:
            # idempotent, so already-complete KVP URLs pass through verbatim
            url = form_getcapabilities_url(candidate.url)
            key = dedup_key(url)
        except MalformedUrl:
            return
        if key in seen_candidates:
            return
        seen_candidates.add(key)
        result.summary.candidates_seen += 1
        limiter.wait(url)
        validation, doc = validate_wms_url(url, fetcher,
                                           timeout_s=config.validation_timeout_s,
                                           candidate=candidate)
        result.summary.validations += 1
        result.validations.append(validation)
        if validation.verdict is not Verdict.VALID_WMS or doc is None:
            if validation.verdict is Verdict.UNREACHABLE:
                result.summary.fetch_failures += 1
            return
        if key in admitted:
            return
        record = ServiceRecord(
            id=service_id_for(key),
            canonical_url=key,
            discovered_from=provenance,
            first_seen=stamp,
            last_seen=stamp,
            publisher_software=detect_publisher_software(url, doc),
            liveness=Liveness.VALID,
        )
        admitted[key] = record
        result.services.append(record)
        result.capabilities[record.id] = doc
        result.summary.admitted += 1

    # pages are (url, depth, seed); depth 0 candidates keep seed provenance
    frontier: deque[tuple[str, int, CrawlSeed]] = deque()

    for seed in seeds:
        if seed.kind is SeedKind.ARCGIS_DIRECTORY:
            remaining = max(budget - result.summary.pages_fetched, 0)
            counting = _CountingFetcher(fetcher, result.summary, limiter)
            for cand in walk_arcgis_directory(seed.url, counting,
                                              max_depth=seed.max_depth,
                                              page_budget=remaining,
                                              timeout_s=config.page_timeout_s):
                admit(cand, Provenance.ARCGIS_DIRECTORY)
            continue
        # a seed that itself looks like a WMS endpoint is validated directly
        rule = classify_url(seed.url, None)
        if rule is not None:
            admit(CandidateUrl(url=seed.url, source_page=seed.url, match_rule=rule),
                  Provenance.SEED_PAGE)
        frontier.append((seed.url, 0, seed))

    while frontier:
        page_url, depth, seed = frontier.popleft()
        if page_url in seen_pages or result.summary.pages_fetched >= budget:
            continue
        seen_pages.add(page_url)
        if not robots.allowed(page_url):
            result.summary.skipped_robots += 1
            continue
        limiter.wait(page_url)
        result.summary.pages_fetched += 1
        try:
            resp = fetcher.fetch(page_url, timeout_s=config.page_timeout_s)
        except FetchError:
            result.summary.fetch_failures += 1
            continue
        if resp.status != 200:
            continue

        provenance = (Provenance.SEED_PAGE if depth == 0
                      else Provenance.SEARCH_RESULT_PAGE)
        candidates = extract_candidate_urls(resp.body, page_url)
        candidate_urls = {c.url for c in candidates}
        for cand in candidates:
            admit(cand, provenance)

        if depth < seed.max_depth:
            links = _page_links(resp.body, page_url, config.links_per_page)
            for link in links:
                if link not in candidate_urls and link not in seen_pages:
                    frontier.append((link, depth + 1, seed))

    return result


def _page_links(body: bytes, base_url: str, cap: int) -> list[str]:
    parser = _AnchorCollector()
    try:
        parser.feed(body.decode("utf-8", errors="replace"))
        parser.close()
    except Exception:
        return []
    out: list[str] = []
    seen: set[str] = set()
    for href, _ in parser.anchors:
        if not href:
            continue
        url = urljoin(base_url, href.strip()).split("#", 1)[0]
        if not url.lower().startswith(("http://", "https://")):
            continue
        if url not in seen:
            seen.add(url)
            out.append(url)
        if len(out) >= cap:
            break
    return out


class _CountingFetcher:
    """Wrap a fetcher so directory-walk fetches count against the page
    budget and respect the shared per-host limiter."""

    def __init__(self, inner: Fetcher, summary: CrawlSummary, limiter: RateLimiter):
        self._inner = inner
        self._summary = summary
        self._limiter = limiter

    def fetch(self, url: str, timeout_s: float = 30.0):
        self._limiter.wait(url)
        self._summary.pages_fetched += 1
        return self._inner.fetch(url, timeout_s=timeout_s)
