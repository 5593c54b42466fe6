"""HTTP transport with per-phase timing.

The real transport drives ``http.client`` over a hand-made socket so the
four phases can be stamped individually: DNS resolution, TCP/TLS connect,
request-to-first-byte (send plus server processing), and body transfer.
The first-byte convention: request_processing ends when the status line has
been parsed, everything after accrues to transfer.

One timeout budget covers the whole exchange.  On expiry the recorded total
is clamped to the budget and the in-flight phase absorbs the remainder so
the phase-sum invariant still holds.
"""

from __future__ import annotations

import socket
import ssl
import time
from dataclasses import dataclass, field
from http.client import HTTPConnection, HTTPResponse
from typing import Protocol
from urllib.parse import urlsplit, urljoin

from .types import RawOutcome, TimingBreakdown

DEFAULT_BODY_CAP = 32 * 1024 * 1024
MAX_REDIRECTS = 5

_REDIRECT_STATUSES = (301, 302, 303, 307, 308)


@dataclass
class Exchange:
    """A completed HTTP exchange (any status code)."""

    status: int
    content_type: str
    body: bytes
    timing: TimingBreakdown
    url: str


@dataclass
class TransportFailure:
    """A network-level failure before a complete response was read."""

    kind: RawOutcome  # DNS_FAIL, CONNECT_FAIL or TIMEOUT
    detail: str
    timing: TimingBreakdown | None = None


TransportResult = Exchange | TransportFailure


class Transport(Protocol):
    def perform(self, url: str, timeout_s: float = 60.0) -> TransportResult: ...


class _Phases:
    """Contiguous phase stopwatch; reconciles rounding so sum == total."""

    def __init__(self):
        self.start = time.monotonic()
        self.acc = {"dns": 0.0, "connect": 0.0, "request": 0.0, "transfer": 0.0}
        self._mark = self.start

    def lap(self, phase: str) -> None:
        now = time.monotonic()
        self.acc[phase] += now - self._mark
        self._mark = now

    def skip(self) -> None:
        self._mark = time.monotonic()

    def freeze(self, clamp_s: float | None = None) -> TimingBreakdown:
        total_s = time.monotonic() - self.start
        acc = dict(self.acc)
        if clamp_s is not None and total_s > clamp_s:
            overshoot = total_s - clamp_s
            # shave the overshoot off the largest (in-flight) phase
            biggest = max(acc, key=acc.get)
            acc[biggest] = max(acc[biggest] - overshoot, 0.0)
            total_s = clamp_s
        parts = {k: round(v * 1000) for k, v in acc.items()}
        total = sum(parts.values())
        return TimingBreakdown(
            dns_ms=parts["dns"], connect_ms=parts["connect"],
            request_processing_ms=parts["request"], transfer_ms=parts["transfer"],
            total_ms=total)


class HttpTransport:
    """Real network transport.  Follows up to five redirects; redirect hops
    accrue to the dns/connect/request phases, only the final body read
    counts as transfer."""

    def __init__(self, body_cap: int = DEFAULT_BODY_CAP,
                 user_agent: str = "wmswatch/0.1"):
        self.body_cap = body_cap
        self.user_agent = user_agent

    def perform(self, url: str, timeout_s: float = 60.0) -> TransportResult:
        phases = _Phases()
        deadline = phases.start + timeout_s

        def remaining() -> float:
            return deadline - time.monotonic()

        current = url
        for _hop in range(MAX_REDIRECTS + 1):
            parts = urlsplit(current)
            host = parts.hostname or ""
            port = parts.port or (443 if parts.scheme == "https" else 80)
            if remaining() <= 0:
                return TransportFailure(RawOutcome.TIMEOUT, "budget exhausted",
                                        phases.freeze(clamp_s=timeout_s))
            phases.skip()
            try:
                infos = socket.getaddrinfo(host, port, type=socket.SOCK_STREAM)
                addr = infos[0][4]
            except socket.gaierror as exc:
                phases.lap("dns")
                return TransportFailure(RawOutcome.DNS_FAIL, str(exc),
                                        phases.freeze(clamp_s=timeout_s))
            phases.lap("dns")

            try:
                sock = socket.create_connection(addr, timeout=max(remaining(), 0.001))
                if parts.scheme == "https":
                    ctx = ssl.create_default_context()
                    ctx.check_hostname = False
                    ctx.verify_mode = ssl.CERT_NONE
                    sock = ctx.wrap_socket(sock, server_hostname=host)
            except socket.timeout:
                phases.lap("connect")
                return TransportFailure(RawOutcome.TIMEOUT, "connect timeout",
                                        phases.freeze(clamp_s=timeout_s))
            except OSError as exc:
                phases.lap("connect")
                return TransportFailure(RawOutcome.CONNECT_FAIL, str(exc),
                                        phases.freeze(clamp_s=timeout_s))
            phases.lap("connect")

            try:
                sock.settimeout(max(remaining(), 0.001))
                conn = HTTPConnection(host, port)
                conn.sock = sock
                path = parts.path or "/"
                if parts.query:
                    path += "?" + parts.query
                conn.putrequest("GET", path, skip_host=True)
                conn.putheader("Host", parts.netloc)
                conn.putheader("User-Agent", self.user_agent)
                conn.putheader("Accept", "*/*")
                conn.putheader("Connection", "close")
                conn.endheaders()
                resp: HTTPResponse = conn.getresponse()
                phases.lap("request")

                if resp.status in _REDIRECT_STATUSES and resp.getheader("Location"):
                    location = urljoin(current, resp.getheader("Location"))
                    resp.read()  # drain the hop; counts toward request phase
                    conn.close()
                    phases.lap("request")
                    current = location
                    continue

                body = b""
                while len(body) <= self.body_cap:
                    chunk = resp.read(65536)
                    if not chunk:
                        break
                    body += chunk
                conn.close()
                phases.lap("transfer")
            except socket.timeout:
                return TransportFailure(RawOutcome.TIMEOUT, "exchange timeout",
                                        phases.freeze(clamp_s=timeout_s))
            except (OSError, ssl.SSLError) as exc:
                # connection reset mid-exchange: the server went away
                return TransportFailure(RawOutcome.CONNECT_FAIL, str(exc),
                                        phases.freeze(clamp_s=timeout_s))

            ctype = (resp.getheader("Content-Type") or "").split(";")[0].strip().lower()
            return Exchange(status=resp.status, content_type=ctype, body=body,
                            timing=phases.freeze(clamp_s=timeout_s), url=current)

        return TransportFailure(RawOutcome.CONNECT_FAIL, "too many redirects",
                                phases.freeze(clamp_s=timeout_s))


def synthetic_timing(dns_ms: int, connect_ms: int, request_ms: int,
                     transfer_ms: int, jitter_ms: int = 0) -> TimingBreakdown:
    """Build a consistent TimingBreakdown for mocks; ``jitter_ms`` shifts the
    total away from the exact phase sum within the allowed slack."""
    total = dns_ms + connect_ms + request_ms + transfer_ms + jitter_ms
    return TimingBreakdown(dns_ms=dns_ms, connect_ms=connect_ms,
                           request_processing_ms=request_ms,
                           transfer_ms=transfer_ms, total_ms=total)


@dataclass
class MockTransport:
    """Scripted transport for tests.

    ``script`` maps a URL predicate (substring) to a result factory; the
    first match wins.  Every perform() is recorded so tests can assert the
    one-request-per-probe discipline.
    """

    rules: list[tuple[str, object]] = field(default_factory=list)
    calls: list[str] = field(default_factory=list)

    def add(self, substring: str, result) -> "MockTransport":
        self.rules.append((substring, result))
        return self

    def perform(self, url: str, timeout_s: float = 60.0) -> TransportResult:
        self.calls.append(url)
        for substring, result in self.rules:
            if substring in url:
                return result(url) if callable(result) else result
        return TransportFailure(RawOutcome.CONNECT_FAIL, f"no rule for {url}")
