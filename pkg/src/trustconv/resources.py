"""Access to the bundled data files (stoplist, lexicons, templates, corpus)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path


def _data_text(name: str) -> str:
    return resources.files("trustconv.data").joinpath(name).read_text(encoding="utf-8")


def data_path(name: str) -> Path:
    """Filesystem path of a bundled data file."""
    return Path(str(resources.files("trustconv.data").joinpath(name)))


def read_wordlist(path_or_text: str, *, is_text: bool = False) -> set[str]:
    """One word per line; blank lines and ``#`` comments ignored."""
    text = path_or_text if is_text else Path(path_or_text).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        word = line.split("#", 1)[0].strip().lower()
        if word:
            words.add(word)
    return words


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    return frozenset(read_wordlist(_data_text("stopwords.txt"), is_text=True))


@lru_cache(maxsize=None)
def positive_stems() -> frozenset[str]:
    return frozenset(read_wordlist(_data_text("valence_positive.txt"), is_text=True))


@lru_cache(maxsize=None)
def negative_stems() -> frozenset[str]:
    return frozenset(read_wordlist(_data_text("valence_negative.txt"), is_text=True))


@lru_cache(maxsize=None)
def negation_words() -> frozenset[str]:
    return frozenset(read_wordlist(_data_text("negation.txt"), is_text=True))


@lru_cache(maxsize=None)
def domain_lexicon_terms(domain: str) -> frozenset[str]:
    """Bundled stemmed lexicon for one of the three scale domains."""
    fname = {"automation": "automation.txt", "e-commerce": "ecommerce.txt", "human": "human.txt"}[domain]
    text = resources.files("trustconv.data").joinpath("lexicons").joinpath(fname).read_text(encoding="utf-8")
    return frozenset(read_wordlist(text, is_text=True))


@lru_cache(maxsize=None)
def concept_display_table() -> dict[str, str]:
    """Stem -> human-readable concept phrase used for conceptual prompt slots."""
    return dict(json.loads(_data_text("concepts.json")))


def default_corpus_path() -> Path:
    return data_path("mini_corpus.json")


def default_templates_path() -> Path:
    return data_path("templates.json")


def default_prompt_set_path() -> Path:
    return data_path("default_prompt_set.json")
