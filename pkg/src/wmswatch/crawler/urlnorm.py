"""URL formation and dedup normalization for WMS endpoints.

``form_getcapabilities_url`` turns a URL prefix into a capabilities request
while leaving every unrelated query parameter byte-for-byte intact.
``dedup_key`` is the canonical identity of a service endpoint: the store
keys services by it, and a ``canonical_url`` is always one of its fixed
points.
"""

from __future__ import annotations

from urllib.parse import parse_qsl, quote, unquote_plus, urlsplit, urlunsplit

from ..errors import MalformedUrl

# capability-request parameters, not part of a service's identity
_NON_IDENTITY_KEYS = frozenset({"request", "version"})

_UNRESERVED = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-._~"
)


def _split_http_url(url: str):
    try:
        parts = urlsplit(url)
        parts.port  # may raise on junk like :80x
    except ValueError as exc:
        raise MalformedUrl(str(exc)) from exc
    if parts.scheme.lower() not in ("http", "https") or not parts.netloc:
        raise MalformedUrl(f"not an absolute http(s) URL: {url!r}")
    return parts


def _norm_percent(s: str) -> str:
    """RFC 3986 percent-encoding normalization: decode unreserved octets,
    uppercase the hex digits of everything else.  Idempotent."""
    out = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == "%":
            hexpair = s[i + 1:i + 3]
            if len(hexpair) == 2 and all(c in "0123456789abcdefABCDEF" for c in hexpair):
                decoded = chr(int(hexpair, 16))
                if decoded in _UNRESERVED:
                    out.append(decoded)
                else:
                    out.append("%" + hexpair.upper())
                i += 3
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def _token_key(token: str) -> str:
    return unquote_plus(token.split("=", 1)[0]).strip().lower()


def _token_value(token: str) -> str:
    if "=" not in token:
        return ""
    return unquote_plus(token.split("=", 1)[1]).strip().lower()


def _ensure_kvp(tokens: list[str], key: str, value: str) -> list[str]:
    """Make ``tokens`` contain exactly one ``key=value`` pair (matched
    case-insensitively), preserving an already-correct pair verbatim and
    replacing or appending otherwise."""
    hits = [i for i, t in enumerate(tokens) if _token_key(t) == key]
    good = [i for i in hits if _token_value(tokens[i]) == value.lower()]
    if good:
        keep = good[0]
    elif hits:
        keep = hits[0]
        tokens = list(tokens)
        tokens[keep] = f"{key}={value}"
    else:
        return tokens + [f"{key}={value}"]
    return [t for i, t in enumerate(tokens) if i == keep or i not in hits]


def form_getcapabilities_url(prefix: str) -> str:
    """Append (or repair) the mandatory service/request KVPs on a URL prefix.

    Pre-existing correct pairs are preserved exactly as written, including
    their key/value casing; duplicates and wrong-valued mandatory keys are
    collapsed to a single canonical pair.  All other parameters pass through
    untouched.  Idempotent.
    """
    parts = _split_http_url(prefix)
    tokens = [t for t in parts.query.split("&") if t] if parts.query else []
    tokens = _ensure_kvp(tokens, "service", "WMS")
    tokens = _ensure_kvp(tokens, "request", "GetCapabilities")
    return urlunsplit((parts.scheme, parts.netloc, parts.path,
                       "&".join(tokens), parts.fragment))


def dedup_key(url: str) -> str:
    """Normalize a URL into the service-identity key used for deduplication.

    Lowercases scheme/host, drops default ports and fragments, normalizes
    percent-encoding in the path, sorts query pairs by key then value with
    lowercased keys, and drops the request/version parameters (those select
    an operation, they do not identify a service).  Idempotent.
    """
    parts = _split_http_url(url)
    scheme = parts.scheme.lower()
    host = (parts.hostname or "").lower()
    port = parts.port
    default = {"http": 80, "https": 443}[scheme]
    netloc = host if port in (None, default) else f"{host}:{port}"
    if parts.username:
        cred = parts.username + (f":{parts.password}" if parts.password else "")
        netloc = f"{cred}@{netloc}"

    path = _norm_percent(parts.path) or "/"

    pairs = [
        (k.lower(), v)
        for k, v in parse_qsl(parts.query, keep_blank_values=True)
        if k.lower() not in _NON_IDENTITY_KEYS
    ]
    pairs.sort()
    query = "&".join(
        f"{quote(k, safe='')}={quote(v, safe='')}" if v else f"{quote(k, safe='')}="
        for k, v in pairs
    )
    return urlunsplit((scheme, netloc, path, query, ""))
