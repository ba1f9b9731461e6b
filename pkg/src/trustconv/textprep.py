"""Deterministic text preprocessing: lowercase, tokenize, stopwords, stemming.

The same tokenizer feeds the bag-of-words pipeline and the dialog intent
classifier, so the contraction table below must keep negators ("don't" ->
"dont") intact as single tokens.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

from .errors import EmptyAfterPreprocessing
from .porter import porter_stem
from .resources import default_stopwords

# Apostrophe forms are merged before the non-alphabetic split so that
# negation survives tokenization. Keys are matched case-insensitively
# against both ' and the typographic apostrophe.
CONTRACTIONS = {
    "ain't": "aint",
    "aren't": "arent",
    "can't": "cant",
    "couldn't": "couldnt",
    "didn't": "didnt",
    "doesn't": "doesnt",
    "don't": "dont",
    "hadn't": "hadnt",
    "hasn't": "hasnt",
    "haven't": "havent",
    "isn't": "isnt",
    "mustn't": "mustnt",
    "needn't": "neednt",
    "shan't": "shant",
    "shouldn't": "shouldnt",
    "wasn't": "wasnt",
    "weren't": "werent",
    "won't": "wont",
    "wouldn't": "wouldnt",
    "he's": "hes",
    "she's": "shes",
    "it's": "its",
    "that's": "thats",
    "there's": "theres",
    "what's": "whats",
    "let's": "lets",
    "i'm": "im",
    "i've": "ive",
    "i'd": "id",
    "i'll": "ill",
    "you're": "youre",
    "you've": "youve",
    "we're": "were",
    "they're": "theyre",
}

_SPLIT_RE = re.compile(r"[^a-z]+")


@dataclass(frozen=True)
class Token:
    """One tokenized word with its stem and position in the source text."""

    surface: str
    stem: str
    position: int


@dataclass
class BagOfWords:
    """Stem counts over a token collection; ``total`` is the sum of counts."""

    counts: dict[str, int] = field(default_factory=dict)
    total: int = 0

    def add(self, stem: str, n: int = 1) -> None:
        self.counts[stem] = self.counts.get(stem, 0) + n
        self.total += n


def _fold_ascii(text: str) -> str:
    """Strip diacritics via NFKD and drop anything non-ASCII."""
    return unicodedata.normalize("NFKD", text).encode("ascii", "ignore").decode("ascii")


def _merge_contractions(text: str) -> str:
    for full, merged in CONTRACTIONS.items():
        if "'" in text:
            text = text.replace(full, merged)
        if "’" in text:
            text = text.replace(full.replace("'", "’"), merged)
    return text


def tokenize(text: str) -> list[Token]:
    """Lowercase, merge contractions, split on non-alphabetic runs, stem.

    Positions are assigned left to right over the surviving fragments.
    """
    lowered = _merge_contractions(text.lower())
    lowered = _fold_ascii(lowered)
    surfaces = [frag for frag in _SPLIT_RE.split(lowered) if frag]
    return [Token(surface=s, stem=porter_stem(s), position=i) for i, s in enumerate(surfaces)]


def remove_stopwords(tokens: list[Token], stoplist: set[str]) -> list[Token]:
    """Drop tokens whose surface form is in the (lowercase) stoplist."""
    return [t for t in tokens if t.surface not in stoplist]


def preprocess_text(text: str, stoplist: set[str] | None = None) -> list[str]:
    """Full pipeline for one string: stems of non-stopword tokens, in order."""
    if stoplist is None:
        stoplist = default_stopwords()
    return [t.stem for t in remove_stopwords(tokenize(text), stoplist)]


def preprocess_corpus(db, stoplist: set[str] | None = None) -> tuple[BagOfWords, list[list[str]]]:
    """Preprocess every item of a prompt database.

    Returns the combined bag of words and one stem sequence per item, so
    that windowed co-occurrence counting never crosses an item boundary.
    Raises EmptyAfterPreprocessing if nothing survives.
    """
    if stoplist is None:
        stoplist = default_stopwords()
    if not db.items:
        raise EmptyAfterPreprocessing("prompt database has no items")
    bag = BagOfWords()
    streams: list[list[str]] = []
    for item in db.items:
        stems = preprocess_text(item.text, stoplist)
        streams.append(stems)
        for stem in stems:
            bag.add(stem)
    if bag.total == 0:
        raise EmptyAfterPreprocessing("no tokens survive preprocessing")
    return bag, streams
