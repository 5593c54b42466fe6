"""Fetching abstraction for the crawler.

Everything that touches the network goes through a ``Fetcher`` so tests can
substitute a canned-response fake; the default implementation wraps
``requests``.  The rate limiter is deliberately tiny: one next-allowed
timestamp per host, shared by whoever holds the limiter instance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Protocol
from urllib.parse import urlsplit

import requests

DEFAULT_PAGE_CAP = 8 * 1024 * 1024


class FetchError(Exception):
    """Network-level failure: DNS, refused connection, timeout, TLS."""


@dataclass
class FetchResponse:
    url: str
    status: int
    headers: dict[str, str]
    body: bytes
    elapsed_ms: float

    @property
    def content_type(self) -> str:
        return self.headers.get("content-type", "").split(";")[0].strip().lower()


class Fetcher(Protocol):
    def fetch(self, url: str, timeout_s: float = 30.0) -> FetchResponse: ...


class RequestsFetcher:
    """requests-backed fetcher with a response size cap."""

    def __init__(self, size_cap: int = DEFAULT_PAGE_CAP,
                 user_agent: str = "wmswatch/0.1"):
        self.size_cap = size_cap
        self.session = requests.Session()
        self.session.headers["User-Agent"] = user_agent

    def fetch(self, url: str, timeout_s: float = 30.0) -> FetchResponse:
        start = time.monotonic()
        try:
            resp = self.session.get(url, timeout=timeout_s, stream=True)
            body = b""
            for chunk in resp.iter_content(chunk_size=65536):
                body += chunk
                if len(body) > self.size_cap:
                    break
            resp.close()
        except requests.RequestException as exc:
            raise FetchError(str(exc)) from exc
        elapsed = (time.monotonic() - start) * 1000.0
        headers = {k.lower(): v for k, v in resp.headers.items()}
        return FetchResponse(url=str(resp.url), status=resp.status_code,
                             headers=headers, body=body, elapsed_ms=elapsed)


class RateLimiter:
    """Per-host politeness: at most one request per ``min_interval_s`` per
    host.  Clock and sleep are injectable so schedule tests run instantly."""

    def __init__(self, min_interval_s: float = 1.0,
                 clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        self.min_interval_s = min_interval_s
        self._clock = clock
        self._sleep = sleep
        self._next_allowed: dict[str, float] = {}

    def wait(self, url: str) -> None:
        if self.min_interval_s <= 0:
            return
        host = (urlsplit(url).hostname or "").lower()
        now = self._clock()
        allowed = self._next_allowed.get(host, now)
        if allowed > now:
            self._sleep(allowed - now)
            now = allowed
        self._next_allowed[host] = now + self.min_interval_s


@dataclass
class FakeFetcher:
    """Canned-response fetcher for tests and offline fixtures.

    ``responses`` maps exact URLs to (status, content_type, body) triples;
    URLs absent from the map raise FetchError like a dead host would.
    """

    responses: dict[str, tuple[int, str, bytes]] = field(default_factory=dict)
    calls: list[str] = field(default_factory=list)
    latency_ms: float = 1.0

    def add_page(self, url: str, html: str, status: int = 200,
                 content_type: str = "text/html") -> None:
        self.responses[url] = (status, content_type, html.encode())

    def add_bytes(self, url: str, body: bytes, status: int = 200,
                  content_type: str = "application/xml") -> None:
        self.responses[url] = (status, content_type, body)

    def fetch(self, url: str, timeout_s: float = 30.0) -> FetchResponse:
        self.calls.append(url)
        if url not in self.responses:
            raise FetchError(f"connection refused: {url}")
        status, ctype, body = self.responses[url]
        return FetchResponse(url=url, status=status,
                             headers={"content-type": ctype}, body=body,
                             elapsed_ms=self.latency_ms)
