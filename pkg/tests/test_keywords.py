from wmswatch.analytics import keyword_frequency, layer_keywords
from wmswatch.model import LayerRecord


def _layer(title="", abstract=None, keywords=()):
    return LayerRecord(name="x", title=title, abstract=abstract,
                       keywords=list(keywords))


def test_two_layers_same_title():
    layers = [_layer("Geology Map of Region"), _layer("Geology Map of Region")]
    ranked = keyword_frequency(layers)
    assert ranked == [("geology", 2), ("map", 2), ("region", 2)]  # "of" stops


def test_replicated_words_count_once_per_layer():
    ranked = keyword_frequency([_layer("geology geology")])
    assert ranked == [("geology", 1)]


def test_non_nouns_dropped():
    assert keyword_frequency([_layer("running fast")]) == []


def test_counts_are_layer_counts_not_occurrences():
    layers = [
        _layer("Water water water"),
        _layer("Water quality"),
        _layer("Roads"),
    ]
    ranked = dict(keyword_frequency(layers))
    assert ranked["water"] == 2
    assert ranked["quality"] == 1
    assert ranked["roads"] == 1  # plural resolved against the lexicon


def test_ties_break_lexicographically():
    layers = [_layer("climate energy")]
    assert keyword_frequency(layers) == [("climate", 1), ("energy", 1)]


def test_abstract_and_keyword_fields_contribute():
    layer = _layer(title="Overview", abstract="Soil moisture anomalies",
                   keywords=["biodiversity"])
    found = layer_keywords(layer)
    assert {"soil", "moisture", "biodiversity"} <= found


def test_empty_input():
    assert keyword_frequency([]) == []


def test_custom_lexicon_swappable():
    lexicon = frozenset({"zorbs"})
    stops = frozenset()
    ranked = keyword_frequency([_layer("zorbs everywhere")],
                               stops=stops, lexicon=lexicon)
    assert ranked == [("zorbs", 1)]
