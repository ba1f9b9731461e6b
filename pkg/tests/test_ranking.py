import math
import re

import pytest

from trustconv.corpus import Construct, Domain, Scale, ScaleItem, Valence, filter_scales, load_corpus
from trustconv.errors import EmptyScaleText, UnknownScaleId
from trustconv.porter import porter_stem
from trustconv.ranking import (
    DomainLexicon,
    bundled_lexicon,
    build_prompt_database,
    domain_log_odds,
    rank_scales,
)
from trustconv.resources import default_stopwords


def _scale(scale_id, texts, citations=10, domain=Domain.AUTOMATION,
           construct=Construct.SITUATIONAL):
    items = tuple(ScaleItem(f"i{n}", t, Valence.NEUTRAL) for n, t in enumerate(texts))
    return Scale(scale_id=scale_id, name=scale_id, year=2020, citations=citations,
                 domain=domain, construct=construct, items=items)


LEX = DomainLexicon(domain=Domain.AUTOMATION, terms=frozenset({"system", "machin", "robot", "autom"}))


def test_log_odds_all_domain_tokens():
    # 4 tokens, all in the lexicon: ln(4.5 / 0.5)
    scale = _scale("s", ["system machine robot automation"])
    assert domain_log_odds(scale, LEX, stoplist=set()) == pytest.approx(math.log(4.5 / 0.5))
    assert domain_log_odds(scale, LEX, stoplist=set()) == pytest.approx(2.1972, abs=1e-4)


def test_log_odds_no_domain_tokens_antisymmetric():
    scale = _scale("s", ["person friend colleague stranger"])
    assert domain_log_odds(scale, LEX, stoplist=set()) == pytest.approx(-math.log(4.5 / 0.5))


def test_log_odds_balanced_is_exactly_zero():
    scale = _scale("s", ["system machine friend stranger"])
    assert domain_log_odds(scale, LEX, stoplist=set()) == 0.0


def test_log_odds_empty_scale_raises():
    scale = _scale("s", ["the is it"])  # everything stopworded away
    with pytest.raises(EmptyScaleText):
        domain_log_odds(scale, LEX, stoplist={"the", "is", "it"})


def test_log_odds_strictly_increasing_in_k():
    # same n, increasing lexicon hits
    texts = {
        0: "friend person colleague stranger",
        1: "system person colleague stranger",
        2: "system machine colleague stranger",
        3: "system machine robot stranger",
        4: "system machine robot automation",
    }
    scores = [domain_log_odds(_scale("s", [texts[k]]), LEX, stoplist=set()) for k in range(5)]
    assert all(a < b for a, b in zip(scores, scores[1:]))


def brute_force_log_odds(scale, lexicon_terms, stoplist):
    """Independent recomputation: regex tokenizer + direct formula."""
    tokens = []
    for item in scale.items:
        for raw in re.split(r"[^a-zA-Z']+", item.text.lower()):
            raw = raw.replace("'", "")
            if raw and raw not in stoplist:
                tokens.append(porter_stem(raw))
    n = len(tokens)
    k = sum(1 for t in tokens if t in lexicon_terms)
    return math.log((k + 0.5) / (n - k + 0.5))


def test_log_odds_matches_brute_force_on_bundled_corpus(mini_corpus_path):
    corpus = load_corpus(mini_corpus_path)
    lexicon = bundled_lexicon(Domain.AUTOMATION)
    stoplist = set(default_stopwords())
    for scale in filter_scales(corpus, domain=Domain.AUTOMATION).scales:
        expected = brute_force_log_odds(scale, lexicon.terms, stoplist)
        assert domain_log_odds(scale, lexicon, stoplist) == pytest.approx(expected, rel=1e-12)


def test_rank_by_citations_on_equal_scores():
    scales = [_scale("x", ["system"], citations=120),
              _scale("y", ["system"], citations=80),
              _scale("z", ["system"], citations=300)]
    ranked = rank_scales(scales, {"x": 1.0, "y": 1.0, "z": 1.0}, top_n=3)
    assert [r.scale_id for r in ranked] == ["z", "x", "y"]
    assert [r.rank for r in ranked] == [1, 2, 3]


def test_rank_top_n_clamps():
    scales = [_scale(f"s{i}", ["system"], citations=i) for i in range(5)]
    ranked = rank_scales(scales, {s.scale_id: 0.0 for s in scales}, top_n=9)
    assert len(ranked) == 5


def test_rank_tie_breaks_on_scale_id():
    scales = [_scale("b", ["system"], citations=10), _scale("a", ["system"], citations=10)]
    ranked = rank_scales(scales, {"a": 0.0, "b": 0.0}, top_n=2)
    assert [r.scale_id for r in ranked] == ["a", "b"]


def test_rank_deterministic_across_runs():
    scales = [_scale(f"s{i}", ["system machine"], citations=(i * 37) % 11) for i in range(8)]
    scores = {s.scale_id: float((i * 13) % 5) for i, s in enumerate(scales)}
    first = rank_scales(scales, scores, top_n=8)
    second = rank_scales(list(scales), dict(scores), top_n=8)
    assert first == second


def _ranked(ids):
    from trustconv.ranking import RankedScale

    return [RankedScale(scale_id=s, log_odds_score=0.0, citations=0, rank=i + 1)
            for i, s in enumerate(ids)]


def _corpus_of(*scales):
    from trustconv.corpus import ScaleCorpus

    return ScaleCorpus(scales=tuple(scales))


def test_database_union():
    s1, s2, s3 = (_scale(x, ["system"]) for x in ("s1", "s2", "s3"))
    corpus = _corpus_of(s1, s2, s3)
    db = build_prompt_database(_ranked(["s1", "s2"]), _ranked(["s2", "s3"]), corpus)
    assert [s.scale_id for s in db.scales] == ["s1", "s2", "s3"]
    assert len(db.items) == 3
    assert db.provenance.domain_track == ("s1", "s2")


def test_database_extra_only():
    s4 = _scale("s4", ["system"])
    db = build_prompt_database([], [], _corpus_of(), extra=[s4])
    assert [s.scale_id for s in db.scales] == ["s4"]


def test_database_unknown_id_raises():
    with pytest.raises(UnknownScaleId):
        build_prompt_database(_ranked(["ghost"]), [], _corpus_of())


def test_database_items_trace_to_unique_ids(mini_corpus_path):
    corpus = load_corpus(mini_corpus_path)
    ids = [s.scale_id for s in corpus.scales]
    db = build_prompt_database(_ranked(ids[:4]), _ranked(ids[2:6]), corpus)
    keys = [(it.scale_id, it.item_id) for it in db.items]
    assert len(keys) == len(set(keys))
    flattened = [(s.scale_id, it.item_id) for s in db.scales for it in s.items]
    assert keys == flattened
