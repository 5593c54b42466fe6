"""Recursive walker for ArcGIS-style REST service directories.

Directories expose a JSON view (``?f=json``) listing folders and services;
that view is preferred because it survives HTML skin changes.  Pages that
merely *mention* a service directory (blog posts, docs) lack the
folders/services structure and yield nothing.
"""

from __future__ import annotations

import json
import logging
import re
from urllib.parse import urljoin, urlsplit, urlunsplit

from .extract import CandidateUrl, MatchRule, _AnchorCollector
from .fetch import Fetcher, FetchError
from .urlnorm import form_getcapabilities_url

log = logging.getLogger(__name__)

_HTML_SECTION = re.compile(r">\s*(Folders|Services)\s*[:<]", re.IGNORECASE)


def _base_url(url: str) -> str:
    parts = urlsplit(url)
    return urlunsplit((parts.scheme, parts.netloc, parts.path.rstrip("/"), "", ""))


def _services_root(url: str) -> str:
    """Directory URLs look like .../rest/services[/Folder]; service names in
    the JSON view are relative to the services root."""
    parts = urlsplit(url)
    path = parts.path.rstrip("/")
    lowered = path.lower()
    idx = lowered.find("/services")
    if idx >= 0:
        path = path[:idx + len("/services")]
    return urlunsplit((parts.scheme, parts.netloc, path, "", ""))


def _fetch_json(fetcher: Fetcher, url: str, timeout_s: float) -> dict | None:
    sep = "&" if urlsplit(url).query else "?"
    try:
        resp = fetcher.fetch(url + sep + "f=json", timeout_s=timeout_s)
    except FetchError:
        return None
    if resp.status != 200:
        return None
    try:
        doc = json.loads(resp.body.decode("utf-8", errors="replace"))
    except ValueError:
        return None
    return doc if isinstance(doc, dict) else None


def _candidates_from_listing(doc: dict, services_root: str,
                             page_url: str) -> list[CandidateUrl]:
    out = []
    for svc in doc.get("services", []):
        if not isinstance(svc, dict) or svc.get("type") != "MapServer":
            continue
        name = svc.get("name")
        if not name:
            continue
        wms_url = f"{services_root}/{name}/MapServer/WMSServer"
        out.append(CandidateUrl(url=form_getcapabilities_url(wms_url),
                                source_page=page_url,
                                match_rule=MatchRule.ARCGIS_DERIVED))
    return out


def _html_fallback(fetcher: Fetcher, url: str, timeout_s: float,
                   services_root: str) -> tuple[list[CandidateUrl], list[str]]:
    """Scrape the HTML skin: MapServer links become candidates, folder links
    (paths directly under the directory) become recursion targets."""
    try:
        resp = fetcher.fetch(url, timeout_s=timeout_s)
    except FetchError:
        return [], []
    html = resp.body.decode("utf-8", errors="replace")
    if resp.status != 200 or not _HTML_SECTION.search(html):
        return [], []
    parser = _AnchorCollector()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        return [], []

    candidates: list[CandidateUrl] = []
    folders: list[str] = []
    dir_base = _base_url(url)
    for href, _text in parser.anchors:
        if not href:
            continue
        resolved = _base_url(urljoin(url + "/", href.strip()))
        if resolved.lower().endswith("/mapserver"):
            candidates.append(CandidateUrl(
                url=form_getcapabilities_url(resolved + "/WMSServer"),
                source_page=url, match_rule=MatchRule.ARCGIS_DERIVED))
        elif (resolved.startswith(dir_base + "/")
              and "/" not in resolved[len(dir_base) + 1:]):
            folders.append(resolved)
    return candidates, folders


def walk_arcgis_directory(root_url: str, fetcher: Fetcher,
                          max_depth: int = 4, page_budget: int = 50,
                          timeout_s: float = 30.0) -> list[CandidateUrl]:
    """Enumerate WMS endpoints beneath an ArcGIS-style REST directory.

    Returns formed GetCapabilities candidates for every MapServer service
    found within ``max_depth`` folder levels and ``page_budget`` page
    fetches.  Non-directory pages return an empty list; fetch failures mid-
    walk degrade to partial results with a warning.
    """
    root = _base_url(root_url)
    services_root = _services_root(root)
    out: list[CandidateUrl] = []
    seen_pages: set[str] = set()
    seen_urls: set[str] = set()
    frontier: list[tuple[str, int]] = [(root, 0)]
    fetches = 0

    while frontier:
        page, depth = frontier.pop(0)
        if page in seen_pages or fetches >= page_budget:
            continue
        seen_pages.add(page)
        fetches += 1

        listing = _fetch_json(fetcher, page, timeout_s)
        if listing is not None and ("services" in listing or "folders" in listing):
            found = _candidates_from_listing(listing, services_root, page)
            folders = [f"{services_root}/{name}"
                       for name in listing.get("folders", []) if name]
        elif listing is not None:
            # JSON but not a directory listing (some other REST resource)
            continue
        else:
            found, folders = _html_fallback(fetcher, page, timeout_s, services_root)
            if not found and not folders:
                if depth == 0:
                    log.warning("not an ArcGIS service directory: %s", page)
                continue

        for cand in found:
            if cand.url not in seen_urls:
                seen_urls.add(cand.url)
                out.append(cand)
        if depth < max_depth:
            frontier.extend((folder, depth + 1) for folder in folders)
    return out
