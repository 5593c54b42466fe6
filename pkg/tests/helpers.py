"""Independent oracles shared by the test suite.

Everything here is deliberately written without the library under test:
the named-layer counter scans raw tag soup instead of using any XML
parser, so it cross-checks the real parser rather than echoing it.
"""

from __future__ import annotations

import re

_TAG = re.compile(r"<(/?)([A-Za-z_][\w.:-]*)((?:\"[^\"]*\"|'[^']*'|[^>\"'])*)>")


def random_url_prefix(rng) -> str:
    """Random absolute URL with a random pre-existing query, exercising the
    KVP-formation contract: may already carry service/request keys in any
    casing, duplicates included."""
    scheme = rng.choice(["http", "https", "HTTP"])
    host = rng.choice(["h.example", "Maps.Example.ORG", "10.0.0.9"])
    port = rng.choice(["", ":80", ":443", ":8080"])
    depth = rng.randint(0, 3)
    path = "".join("/" + rng.choice(["wms", "ows", "geo", "api", "a%20b", "x"])
                   for _ in range(depth))
    n_params = rng.randint(0, 5)
    keys = ["service", "SERVICE", "Request", "request", "map", "layers",
            "version", "token", "q"]
    vals = ["WMS", "wms", "WFS", "GetCapabilities", "getcapabilities",
            "GetMap", "a.map", "1.3.0", "x%2Fy", "hello world", ""]
    params = []
    for _ in range(n_params):
        k = rng.choice(keys)
        v = rng.choice(vals)
        params.append(f"{k}={v}" if rng.random() < 0.9 else k)
    query = "&".join(params)
    return f"{scheme}://{host}{port}{path}" + (f"?{query}" if query else "")


def count_kvp(url: str, key: str, value: str) -> int:
    """How many query pairs decode to key=value, case-insensitively."""
    from urllib.parse import parse_qsl, urlsplit
    return sum(
        1 for k, v in parse_qsl(urlsplit(url).query, keep_blank_values=True)
        if k.lower() == key and v.lower() == value
    )


def other_params(url: str) -> list:
    """Multiset (sorted list) of decoded query pairs other than the two
    mandatory WMS keys."""
    from urllib.parse import parse_qsl, urlsplit
    return sorted(
        (k, v) for k, v in parse_qsl(urlsplit(url).query, keep_blank_values=True)
        if k.lower() not in ("service", "request")
    )


def probe_rec(accessible=True, success=True, *, op=None, total_ms=100,
              started_at=None, service_id="svc", site_id="site",
              error_class=None, response_bytes=1024):
    """Shorthand ProbeRecord with a consistent flag/error combination."""
    import datetime as dt

    from wmswatch.probe import (
        ErrorClass,
        Operation,
        ProbeRecord,
        synthetic_timing,
    )

    if error_class is None and not success:
        error_class = (ErrorClass.REQUEST_PROCESSING if accessible
                       else ErrorClass.SERVER_ACCESS)
    quarter = total_ms // 4
    timing = synthetic_timing(quarter, quarter, quarter, total_ms - 3 * quarter)
    return ProbeRecord(
        service_id=service_id, site_id=site_id,
        operation=op or Operation.GET_CAPABILITIES,
        started_at=started_at or dt.datetime(2015, 9, 1, tzinfo=dt.timezone.utc),
        accessible=accessible, success=success, error_class=error_class,
        timing=timing, response_bytes=response_bytes)


class SimProbeEngine:
    """In-process probe engine for campaign simulations: always succeeds,
    consumes ``latency_s`` of simulated time per probe."""

    def __init__(self, clock, latency_s: float = 0.05, response_bytes: int = 4096):
        self.clock = clock
        self.latency_s = latency_s
        self.response_bytes = response_bytes
        self.calls = []

    def __call__(self, fire):
        from wmswatch.probe import ProbeRecord, synthetic_timing

        started = self.clock.now()
        self.clock.sleep(self.latency_s)
        ms = max(int(self.latency_s * 1000), 1)
        quarter = ms // 4
        timing = synthetic_timing(quarter, quarter, quarter,
                                  ms - 3 * quarter)
        self.calls.append(fire)
        return ProbeRecord(
            service_id=fire.service_id, site_id=fire.site_id,
            operation=fire.operation, started_at=started,
            accessible=True, success=True, timing=timing,
            response_bytes=self.response_bytes)


def make_caps_xml(version: str, layer_names=("alpha",), formats=("image/png",)) -> bytes:
    """Minimal capabilities document for a given version, built by string
    templating (independent of the package's parser)."""
    if version == "1.3.0":
        open_tag = '<WMS_Capabilities version="1.3.0" xmlns="http://www.opengis.net/wms">'
        close = "</WMS_Capabilities>"
    else:
        open_tag = f'<WMT_MS_Capabilities version="{version}">'
        close = "</WMT_MS_Capabilities>"
    layers = "\n".join(
        f"<Layer><Name>{n}</Name><Title>{n}</Title><SRS>EPSG:4326</SRS></Layer>"
        for n in layer_names)
    fmts = "\n".join(f"<Format>{f}</Format>" for f in formats)
    doc = f"""<?xml version="1.0" encoding="UTF-8"?>
{open_tag}
  <Service><Name>WMS</Name><Title>mock {version}</Title></Service>
  <Capability>
    <Request><GetMap>{fmts}</GetMap></Request>
    {layers}
  </Capability>
{close}"""
    return doc.encode()


def negotiating_mock_transport(supported: list[str]):
    """MockTransport emulating WMS version negotiation for a server that
    implements exactly ``supported`` (sorted ascending).  The negotiation
    rule table, written from the standard before the implementation:

      requested == some supported version -> reply with it
      requested above lowest supported    -> reply with the highest
                                             supported version below it
      requested below lowest supported    -> reply with the lowest
      no version parameter                -> reply with the default (highest)
    """
    from urllib.parse import parse_qsl, urlsplit

    from wmswatch.probe import Exchange, MockTransport, synthetic_timing

    order = ["1.0.0", "1.1.0", "1.1.1", "1.3.0"]
    supported = sorted(supported, key=order.index)

    def reply(url: str):
        q = {k.lower(): v for k, v in parse_qsl(urlsplit(url).query)}
        requested = q.get("version")
        if requested is None or requested not in order:
            version = supported[-1]
        elif requested in supported:
            version = requested
        else:
            below = [v for v in supported if order.index(v) < order.index(requested)]
            version = below[-1] if below else supported[0]
        return Exchange(status=200, content_type="application/xml",
                        body=make_caps_xml(version),
                        timing=synthetic_timing(1, 2, 5, 2), url=url)

    return MockTransport().add("http", reply)


def build_planted_corpus(fixture_dir):
    """A fully offline crawl corpus: >=20 pages, 7 planted WMS endpoints
    (2 behind an ArcGIS-style directory), and a pile of decoys.

    Returns (fetcher, seeds, expected_dedup_keys, page_count).
    """
    import json as _json

    from wmswatch.crawler import (
        CrawlSeed,
        FakeFetcher,
        SeedKind,
        dedup_key,
        form_getcapabilities_url,
    )

    f = FakeFetcher()
    caps = {name: (fixture_dir / name).read_bytes() for name in (
        "caps_130_basic.xml", "caps_111_basic.xml", "caps_110_basic.xml",
        "caps_100_minimal.xml", "caps_130_nested.xml", "caps_111_noversion.xml",
        "caps_100_basic.xml",
    )}

    # --- planted real services (validated via their formed GetCapabilities URL)
    wms1 = "http://wms1.test/wms?service=WMS&request=GetCapabilities"
    wms2 = "http://wms2.test/service?foo=1&service=WMS&request=GetCapabilities"
    alpha_prefix = "http://geo.alpha.test/geoserver/wms"
    beta_prefix = "http://geo.beta.test/ows"
    wms4_prefix = "http://wms4.test/cgi?service=WMS"
    f.add_bytes(wms1, caps["caps_130_basic.xml"])
    f.add_bytes(wms2, caps["caps_111_basic.xml"])
    f.add_bytes(form_getcapabilities_url(alpha_prefix), caps["caps_110_basic.xml"])
    f.add_bytes(form_getcapabilities_url(beta_prefix), caps["caps_100_minimal.xml"])
    f.add_bytes(form_getcapabilities_url(wms4_prefix), caps["caps_100_basic.xml"])

    # --- ArcGIS directory with two MapServer services in two folders
    arc = "http://arc.test/arcgis/rest/services"
    f.add_bytes(arc + "?f=json",
                _json.dumps({"currentVersion": 10.3,
                             "folders": ["Base", "Hydro"], "services": []}).encode(),
                content_type="application/json")
    f.add_bytes(arc + "/Base?f=json",
                _json.dumps({"folders": [], "services": [
                    {"name": "Base/Streets", "type": "MapServer"},
                    {"name": "Base/Admin", "type": "FeatureServer"},
                ]}).encode(), content_type="application/json")
    f.add_bytes(arc + "/Hydro?f=json",
                _json.dumps({"folders": [], "services": [
                    {"name": "Hydro/Rivers", "type": "MapServer"},
                ]}).encode(), content_type="application/json")
    streets = form_getcapabilities_url(arc + "/Base/Streets/MapServer/WMSServer")
    rivers = form_getcapabilities_url(arc + "/Hydro/Rivers/MapServer/WMSServer")
    f.add_bytes(streets, caps["caps_130_nested.xml"])
    f.add_bytes(rivers, caps["caps_111_noversion.xml"])

    # --- decoys: page-level and validation-level
    html_404 = (fixture_dir / "decoy_html_404.html").read_text()
    f.add_page("http://decoy1.test/wms", html_404, status=404)
    f.add_bytes(form_getcapabilities_url("http://decoy1.test/wms"),
                html_404.encode(), status=404, content_type="text/html")
    f.add_bytes(form_getcapabilities_url("http://decoy2.test/wms"),
                (fixture_dir / "exception_report.xml").read_bytes())
    f.add_bytes(form_getcapabilities_url("http://decoy3.test/wms"),
                (fixture_dir / "decoy_wmts.xml").read_bytes())
    f.add_bytes(form_getcapabilities_url("http://fake.test/ows?service=WMS"),
                b"\x00\x01 certainly not xml", content_type="application/octet-stream")
    # http://dead.test/wms is never registered: validation sees a dead host

    # --- pages
    hub = "http://hub.test/"
    f.add_page(hub, f"""
      <html><body>
        <a href="catalog1.html">catalog 1</a>
        <a href="catalog2.html">catalog 2</a>
        <a href="blog.html">industry news</a>
        <a href="deep/page1.html">regional data</a>
        <a href="http://data.test/portal.html">partner portal</a>
        <a href="filler1.html">about</a> <a href="filler2.html">contact</a>
        <a href="filler3.html">faq</a> <a href="filler4.html">terms</a>
        <a href="mailto:gis@hub.test">mail us</a>
        <img src="http://hub.test/logo.png"/>
      </body></html>""")
    f.add_page(hub + "catalog1.html", f"""
      <html><body>
        <p>Direct capability link: <a href="{wms1}">capabilities</a></p>
        <p><a href="http://decoy1.test/wms">City WMS</a> (stale)</p>
        <p><a href="http://dead.test/wms">Legacy WMS mirror</a></p>
        <a href="filler5.html">more</a>
      </body></html>""")
    f.add_page(hub + "catalog2.html", f"""
      <html><body>
        <p><a href="{alpha_prefix}">Alpha GeoServer WMS</a></p>
        <p>Raw link in text: {wms2}</p>
        <p><a href="http://decoy2.test/wms">Historic WMS</a></p>
        <a href="filler6.html">archive</a>
      </body></html>""")
    f.add_page(hub + "blog.html", """
      <html><head><title>ArcGIS REST Service Directory explained</title></head>
      <body><p>What is an ArcGIS REST Service Directory? A directory lists
      folders of map services...</p>
      <a href="filler7.html">read more</a></body></html>""")
    f.add_page(hub + "deep/page1.html", """
      <html><body>
        <a href="page2.html">hydrology services</a>
        <a href="../filler8.html">glossary</a>
      </body></html>""")
    f.add_page(hub + "deep/page2.html", f"""
      <html><body>
        <p><a href="{beta_prefix}">Beta OWS endpoint</a></p>
        <p><a href="http://decoy3.test/wms">Tile WMS</a></p>
      </body></html>""")
    f.add_page("http://data.test/portal.html", f"""
      <html><body>
        <p><a href="{wms4_prefix}">survey maps</a></p>
        <p><a href="http://fake.test/ows?service=WMS">mystery service</a></p>
        <p><a href="{wms1.replace('service=WMS&request=GetCapabilities',
                                  'request=GetCapabilities&service=WMS')}">
           duplicate capability link, shuffled params</a></p>
      </body></html>""")
    for i in range(1, 11):
        f.add_page(hub + f"filler{i}.html",
                   f"<html><body><p>filler page {i}; nothing to see.</p></body></html>")

    seeds = [
        CrawlSeed(url=hub, kind=SeedKind.GENERIC_PAGE, max_depth=2),
        CrawlSeed(url=arc, kind=SeedKind.ARCGIS_DIRECTORY, max_depth=2),
    ]
    expected = {
        dedup_key(wms1),
        dedup_key(wms2),
        dedup_key(form_getcapabilities_url(alpha_prefix)),
        dedup_key(form_getcapabilities_url(beta_prefix)),
        dedup_key(form_getcapabilities_url(wms4_prefix)),
        dedup_key(streets),
        dedup_key(rivers),
    }
    page_count = 7 + 10 + 3  # html pages + fillers + directory json views
    return f, seeds, expected, page_count


def _strip_noise(text: str) -> str:
    text = re.sub(r"<!--.*?-->", "", text, flags=re.S)
    text = re.sub(r"<!\[CDATA\[.*?\]\]>", "", text, flags=re.S)
    text = re.sub(r"<\?.*?\?>", "", text, flags=re.S)
    text = re.sub(r"<!DOCTYPE[^>]*>", "", text, flags=re.S)
    return text


def naive_named_layer_count(raw: bytes) -> int:
    """Count Layer elements that carry a non-empty Name child, by a dumb
    linear scan over the raw markup with a manual tag stack."""
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        text = raw.decode("latin-1")
    text = _strip_noise(text)

    stack: list[dict] = []
    count = 0
    for m in _TAG.finditer(text):
        closing, qname, attrs = m.groups()
        selfclose = attrs.rstrip().endswith("/")
        local = qname.rsplit(":", 1)[-1]
        if closing:
            if stack and stack[-1]["tag"] == local:
                frame = stack.pop()
                if frame["tag"] == "Layer" and frame["named"]:
                    count += 1
            continue
        if selfclose:
            continue
        if local == "Name" and stack and stack[-1]["tag"] == "Layer":
            tail = text[m.end():]
            content = tail.split("<", 1)[0]
            if content.strip():
                stack[-1]["named"] = True
            # Name has no children we care about; skip pushing it
            continue
        stack.append({"tag": local, "named": False})
    return count
