"""End-to-end prompt generation: filter, rank, embed, cluster, summarize,
formulate. With a fixed seed the whole run is deterministic and the output
files are byte-identical across runs.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .clustering import Linkage, Metric, agglomerate, cut_tree, distance_matrix
from .corpus import Construct, Domain, ScaleCorpus, filter_scales, load_corpus
from .embedding import (
    EmbeddingTable,
    GloveConfig,
    Weighting,
    build_cooccurrence,
    load_vectors,
    train_glove,
)
from .errors import EmptySelection, StageError
from .prompts import (
    PromptSetBuild,
    build_prompt_set,
    load_templates,
    prompt_set_to_dict,
)
from .ranking import (
    DomainLexicon,
    PromptDatabase,
    RankedScale,
    build_prompt_database,
    bundled_lexicon,
    domain_log_odds,
    load_lexicon,
    rank_scales,
)
from .resources import (
    concept_display_table,
    default_stopwords,
    default_templates_path,
    read_wordlist,
)
from .summarization import summarize_cut
from .textprep import preprocess_corpus, remove_stopwords, tokenize


@dataclass
class PipelineConfig:
    corpus_path: str
    domain: Domain = Domain.AUTOMATION
    construct: Construct = Construct.SITUATIONAL
    top_n_domain: int = 9
    top_n_construct: int = 3
    pretrained: str | None = None  # path to a word-vector file; None trains in-corpus
    dim: int = 50
    window: int = 5
    weighting: Weighting = Weighting.INVERSE_DISTANCE
    x_max: float = 100.0
    alpha: float = 0.75
    learning_rate: float = 0.05
    epochs: int = 50
    seed: int = 0
    metric: Metric = Metric.COSINE
    linkage: Linkage = Linkage.AVERAGE
    k: int | None = 6
    height: float | None = None
    templates_path: str | None = None
    stoplist_path: str | None = None
    lexicon_path: str | None = None
    out_dir: str | None = None


@dataclass
class PipelineResult:
    prompt_set_build: PromptSetBuild
    ranking_report: dict
    summary_report: list[dict]
    dendrogram_lines: list[str]
    cluster_lines: list[str]
    written: dict[str, Path] = field(default_factory=dict)

    @property
    def prompt_set(self):
        return self.prompt_set_build.prompt_set


def _ranked_to_dicts(ranked: list[RankedScale]) -> list[dict]:
    return [
        {"scale_id": r.scale_id, "score": r.log_odds_score,
         "citations": r.citations, "rank": r.rank}
        for r in ranked
    ]


def _surface_forms(db: PromptDatabase, stoplist) -> dict[str, str]:
    """Most frequent corpus surface per stem, for readable slot labels."""
    counts: Counter[tuple[str, str]] = Counter()
    for item in db.items:
        for token in remove_stopwords(tokenize(item.text), stoplist):
            counts[(token.stem, token.surface)] += 1
    best: dict[str, tuple[int, str]] = {}
    for (stem, surface), n in sorted(counts.items()):
        if stem not in best or (-n, surface) < (-best[stem][0], best[stem][1]):
            best[stem] = (n, surface)
    return {stem: surface for stem, (n, surface) in best.items()}


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    """Execute all stages in order; failures carry the stage name."""

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except StageError:
            raise
        except Exception as exc:
            raise StageError(name, exc) from exc

    corpus: ScaleCorpus = stage("ingest", load_corpus, config.corpus_path)
    stoplist = (set(read_wordlist(config.stoplist_path)) if config.stoplist_path
                else set(default_stopwords()))

    # step 1: domain filter
    domain_scales = filter_scales(corpus, domain=config.domain)
    if not domain_scales.scales:
        raise StageError("filter", EmptySelection(f"no scales in domain {config.domain.value!r}"))

    # step 2: log-odds ranking of the domain track (reported in full)
    lexicon: DomainLexicon = (load_lexicon(config.lexicon_path, config.domain)
                              if config.lexicon_path else bundled_lexicon(config.domain))
    scores = {
        s.scale_id: stage("log-odds", domain_log_odds, s, lexicon, stoplist)
        for s in domain_scales.scales
    }
    log_odds_track = stage("log-odds", rank_scales, list(domain_scales.scales),
                           scores, len(domain_scales.scales))

    # step 3: citation ranking selects the domain track
    citation_scores = {s.scale_id: float(s.citations) for s in domain_scales.scales}
    domain_track = stage("citation-rank", rank_scales, list(domain_scales.scales),
                         citation_scores, config.top_n_domain)

    # steps 4-5: construct track, citation-ranked
    construct_scales = filter_scales(corpus, construct=config.construct)
    construct_track: list[RankedScale] = []
    if construct_scales.scales:
        construct_citations = {s.scale_id: float(s.citations) for s in construct_scales.scales}
        construct_track = stage("construct-rank", rank_scales, list(construct_scales.scales),
                                construct_citations, config.top_n_construct)

    # step 6: union database
    db = stage("union", build_prompt_database, domain_track, construct_track, corpus)

    # step 7: preprocess and embed
    bag, streams = stage("preprocess", preprocess_corpus, db, stoplist)
    if config.pretrained:
        table: EmbeddingTable = stage("embed", load_vectors, config.pretrained)
    else:
        matrix = stage("embed", build_cooccurrence, streams, config.window, config.weighting)
        glove_config = GloveConfig(dim=config.dim, x_max=config.x_max, alpha=config.alpha,
                                   learning_rate=config.learning_rate,
                                   epochs=config.epochs, seed=config.seed)
        table = stage("embed", train_glove, matrix, glove_config)

    words = sorted(w for w in bag.counts if w in table)
    if len(words) < 2:
        raise StageError("cluster", EmptySelection("fewer than 2 corpus stems have vectors"))

    # step 8: dendrogram
    dist = stage("cluster", distance_matrix, table, words, config.metric)
    dgm = stage("cluster", agglomerate, dist, config.linkage)

    # step 9: cut + summarize
    if config.height is not None:
        flat = stage("cut", cut_tree, dgm, height=config.height)
    else:
        k = min(config.k or 6, len(words))
        flat = stage("cut", cut_tree, dgm, k=k)
    concepts = set(concept_display_table())
    summaries = stage("summarize", summarize_cut, flat, table,
                      extra_candidates=concepts,
                      weights={w: float(n) for w, n in bag.counts.items()})

    # step 10: formulate prompts
    templates = stage("prompts", load_templates,
                      config.templates_path or default_templates_path())
    surface_forms = _surface_forms(db, stoplist)
    build = stage("prompts", build_prompt_set, summaries, templates,
                  items=db.items, surface_forms=surface_forms)

    ranking_report = {
        "domain": config.domain.value,
        "construct": config.construct.value,
        "log_odds_track": _ranked_to_dicts(log_odds_track),
        "domain_track": _ranked_to_dicts(domain_track),
        "construct_track": _ranked_to_dicts(construct_track),
        "database_scales": [s.scale_id for s in db.scales],
    }
    summary_report = [
        {
            "cluster_id": s.cluster_id,
            "members": sorted(flat.members()[s.cluster_id]),
            "centroid_norm": float(np.linalg.norm(s.centroid)),
            "ranked_terms": [[t, score] for t, score in s.ranked_terms],
            "selected_term": s.selected_term,
        }
        for s in summaries
    ]

    result = PipelineResult(
        prompt_set_build=build,
        ranking_report=ranking_report,
        summary_report=summary_report,
        dendrogram_lines=dgm.to_lines(),
        cluster_lines=flat.to_lines(),
    )
    if config.out_dir:
        result.written = _write_outputs(result, Path(config.out_dir))
    return result


def _write_outputs(result: PipelineResult, out_dir: Path) -> dict[str, Path]:
    out_dir.mkdir(parents=True, exist_ok=True)

    def dump_json(name: str, data) -> Path:
        path = out_dir / name
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path

    def dump_lines(name: str, lines: list[str]) -> Path:
        path = out_dir / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    written = {
        "ranking_report": dump_json("ranking_report.json", result.ranking_report),
        "summary_report": dump_json("summary_report.json", result.summary_report),
        "prompt_set": dump_json("prompt_set.json", prompt_set_to_dict(result.prompt_set)),
        "lint_report": dump_json("lint_report.json", [
            {"level": d.level, "text": d.text, "provenance": d.provenance,
             "violations": d.violations}
            for d in result.prompt_set_build.dropped
        ]),
        "dendrogram": dump_lines("dendrogram.txt", result.dendrogram_lines),
        "clusters": dump_lines("clusters.txt", result.cluster_lines),
    }
    return written
