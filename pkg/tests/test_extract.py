from wmswatch.crawler import MatchRule, extract_candidate_urls


def _page(html: str, base="http://pages.test/index.html"):
    return extract_candidate_urls(html.encode(), base)


def test_explicit_kvp_link():
    out = _page('<a href="http://h/ows?service=WMS&request=GetCapabilities">caps</a>')
    assert len(out) == 1
    assert out[0].match_rule is MatchRule.EXPLICIT_KVP
    assert out[0].url == "http://h/ows?service=WMS&request=GetCapabilities"


def test_anchor_text_rule():
    out = _page('<a href="http://h/geo/endpoint">City WMS</a>')
    assert len(out) == 1
    assert out[0].match_rule is MatchRule.PREFIX_FORMED
    assert out[0].anchor_text == "City WMS"


def test_path_suffix_rules():
    out = _page("""
      <a href="http://a/geo/wms">one</a>
      <a href="http://b/services/ows">two</a>
      <a href="http://c/x/WMSServer">three</a>
    """)
    assert {c.url for c in out} == {"http://a/geo/wms", "http://b/services/ows",
                                    "http://c/x/WMSServer"}
    assert all(c.match_rule is MatchRule.PREFIX_FORMED for c in out)


def test_service_kvp_without_request():
    out = _page('<a href="http://h/cgi?service=wms&map=a">maps</a>')
    assert len(out) == 1
    assert out[0].match_rule is MatchRule.PREFIX_FORMED


def test_nothing_matches():
    assert _page("""
      <a href="mailto:x@y.z">mail</a>
      <a href="http://h/about.html">about</a>
      <img src="http://h/logo.png"/>
    """) == []


def test_relative_links_resolved():
    out = _page('<a href="../ows">endpoint wms</a>', base="http://h/a/b/page.html")
    assert out[0].url == "http://h/a/ows"


def test_bare_text_urls_found():
    out = _page("<p>try http://h/wms?service=WMS&request=GetCapabilities today</p>")
    assert len(out) == 1
    assert out[0].match_rule is MatchRule.EXPLICIT_KVP


def test_duplicates_within_page_removed():
    out = _page("""
      <a href="http://h/wms">WMS here</a>
      <a href="http://h/wms">same WMS again</a>
    """)
    assert len(out) == 1


def test_unparseable_page_yields_empty():
    assert extract_candidate_urls(b"\xff\xfe\x00garbage", "http://x/") == []
