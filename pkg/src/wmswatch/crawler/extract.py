"""Candidate WMS URL extraction from crawled pages.

The filter rules live in :class:`CandidateRules` instead of being inlined
so operators can tune them per deployment; the defaults encode the usual
ways a capabilities URL shows up on the open web: the full KVP request
posted verbatim, or a bare endpoint prefix whose anchor text or path shape
gives it away.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from html.parser import HTMLParser
from urllib.parse import parse_qsl, urljoin, urlsplit


class MatchRule(str, Enum):
    EXPLICIT_KVP = "explicit-kvp"
    PREFIX_FORMED = "prefix-formed"
    ARCGIS_DERIVED = "arcgis-derived"


@dataclass(frozen=True)
class CandidateUrl:
    url: str
    source_page: str
    match_rule: MatchRule
    anchor_text: str | None = None


@dataclass(frozen=True)
class CandidateRules:
    anchor_substrings: tuple[str, ...] = ("wms", "web map service")
    path_suffixes: tuple[str, ...] = ("/wms", "/ows", "/wmsserver")


DEFAULT_RULES = CandidateRules()

_BARE_URL = re.compile(r"https?://[^\s\"'<>]+", re.IGNORECASE)
_TRAILING_JUNK = ".,;:)]}>\"'"


class _AnchorCollector(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.anchors: list[tuple[str, str]] = []
        self._href: str | None = None
        self._text: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            self._flush()
            self._href = dict(attrs).get("href")
            self._text = []

    def handle_endtag(self, tag):
        if tag == "a":
            self._flush()

    def handle_data(self, data):
        if self._href is not None:
            self._text.append(data)

    def _flush(self):
        if self._href is not None:
            self.anchors.append((self._href, " ".join(self._text).strip()))
        self._href = None
        self._text = []

    def close(self):
        self._flush()
        super().close()


def _query_keys(url: str) -> dict[str, str]:
    """Lower-cased query mapping (first value wins per key)."""
    out: dict[str, str] = {}
    for k, v in parse_qsl(urlsplit(url).query, keep_blank_values=True):
        out.setdefault(k.lower(), v.lower())
    return out


def classify_url(url: str, anchor_text: str | None,
                 rules: CandidateRules = DEFAULT_RULES) -> MatchRule | None:
    """Apply the candidate rules to one URL; None means not a candidate."""
    try:
        parts = urlsplit(url)
    except ValueError:
        return None
    if parts.scheme.lower() not in ("http", "https") or not parts.netloc:
        return None
    q = _query_keys(url)
    if q.get("service") == "wms" and q.get("request") == "getcapabilities":
        return MatchRule.EXPLICIT_KVP
    path = parts.path.lower().rstrip("/") or "/"
    if any(path.endswith(suffix) for suffix in rules.path_suffixes):
        return MatchRule.PREFIX_FORMED
    if q.get("service") == "wms" and "request" not in q:
        return MatchRule.PREFIX_FORMED
    if anchor_text:
        lowered = anchor_text.lower()
        if any(s in lowered for s in rules.anchor_substrings):
            return MatchRule.PREFIX_FORMED
    return None


def extract_candidate_urls(page_bytes: bytes, base_url: str,
                           rules: CandidateRules = DEFAULT_RULES) -> list[CandidateUrl]:
    """Pull candidate WMS URLs out of an HTML or plain-text page.

    Anchors are resolved against ``base_url``; bare URLs appearing as text
    are picked up too.  Duplicates within the page collapse to the first
    occurrence.  An unparseable page simply yields nothing.
    """
    text = page_bytes.decode("utf-8", errors="replace")

    found: list[tuple[str, str | None]] = []
    parser = _AnchorCollector()
    try:
        parser.feed(text)
        parser.close()
    except Exception:
        pass
    for href, anchor_text in parser.anchors:
        if not href:
            continue
        resolved = urljoin(base_url, href.strip())
        found.append((resolved, anchor_text or None))

    in_anchors = {u for u, _ in found}
    for m in _BARE_URL.finditer(text):
        url = m.group(0).rstrip(_TRAILING_JUNK)
        if url not in in_anchors:
            found.append((url, None))

    out: list[CandidateUrl] = []
    seen: set[str] = set()
    for url, anchor_text in found:
        if url in seen:
            continue
        rule = classify_url(url, anchor_text, rules)
        if rule is None:
            continue
        seen.add(url)
        out.append(CandidateUrl(url=url, source_page=base_url,
                                match_rule=rule, anchor_text=anchor_text))
    return out
