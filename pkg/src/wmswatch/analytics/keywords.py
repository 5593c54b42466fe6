"""Layer-subject keyword extraction and ranking.

English-only by design.  Tokens pass three gates per layer: not a stop
word, present in the shipped noun lexicon (a deliberate approximation of
part-of-speech tagging; both word lists are plain text files an operator
can swap), and counted at most once per layer so a repetitive title does
not inflate its own subject.  The global count of a keyword is therefore
the number of layers mentioning it.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

from ..model.types import LayerRecord

_TOKEN = re.compile(r"[a-z][a-z'-]+")


def _load_wordfile(name: str) -> frozenset[str]:
    text = resources.files("wmswatch.analytics").joinpath(f"data/{name}").read_text()
    return frozenset(
        line.strip().lower() for line in text.splitlines()
        if line.strip() and not line.startswith("#"))


@lru_cache(maxsize=None)
def stop_words() -> frozenset[str]:
    return _load_wordfile("stopwords.txt")


@lru_cache(maxsize=None)
def noun_lexicon() -> frozenset[str]:
    return _load_wordfile("nouns.txt")


def _singular(token: str) -> str:
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("es") and len(token) > 3:
        return token[:-2]
    if token.endswith("s") and len(token) > 3:
        return token[:-1]
    return token


def _is_noun(token: str, lexicon: frozenset[str]) -> bool:
    return token in lexicon or _singular(token) in lexicon


def layer_keywords(layer: LayerRecord,
                   stops: frozenset[str] | None = None,
                   lexicon: frozenset[str] | None = None) -> set[str]:
    """The deduplicated keyword set of one layer's description fields."""
    stops = stops if stops is not None else stop_words()
    lexicon = lexicon if lexicon is not None else noun_lexicon()
    text = " ".join(filter(None, [layer.title, layer.abstract or "",
                                  " ".join(layer.keywords)]))
    out: set[str] = set()
    for token in _TOKEN.findall(text.lower()):
        if token in stops:
            continue
        if not _is_noun(token, lexicon):
            continue
        out.add(token)
    return out


def keyword_frequency(layers: Iterable[LayerRecord],
                      stops: frozenset[str] | None = None,
                      lexicon: frozenset[str] | None = None
                      ) -> list[tuple[str, int]]:
    """Ranked (keyword, layer_count) list over all layers.

    Sorted by count descending, ties broken lexicographically; empty input
    yields an empty list.
    """
    counts: dict[str, int] = {}
    for layer in layers:
        for keyword in layer_keywords(layer, stops, lexicon):
            counts[keyword] = counts.get(keyword, 0) + 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
