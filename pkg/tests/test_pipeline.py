import json

import pytest

from trustconv import cli
from trustconv.corpus import Domain
from trustconv.errors import StageError
from trustconv.pipeline import PipelineConfig, run_pipeline
from trustconv.prompts import lint_nondirective, load_prompt_set


def _config(mini_corpus_path, **overrides):
    defaults = dict(corpus_path=mini_corpus_path, epochs=8, dim=16, seed=3)
    defaults.update(overrides)
    return PipelineConfig(**defaults)


def test_pipeline_produces_conceptual_prompts(mini_corpus_path, tmp_path):
    result = run_pipeline(_config(mini_corpus_path, out_dir=str(tmp_path / "out")))
    ps = result.prompt_set
    assert len(ps.conceptual) >= 3
    for prompt in ps.conceptual + ps.interpretive + ps.declarative:
        assert lint_nondirective(prompt) == []
    for name in ("ranking_report", "summary_report", "prompt_set", "dendrogram",
                 "clusters", "lint_report"):
        assert result.written[name].exists()


def test_pipeline_empty_domain_selection(tmp_path, corpus_file):
    doc = {
        "scales": [{
            "scale_id": "h1", "name": "x", "year": 2000, "citations": 1,
            "domain": "human", "construct": "situational",
            "items": [{"item_id": "i", "text": "my colleague helps", "valence": "neutral"}],
        }]
    }
    config = _config(corpus_file(doc), domain=Domain.AUTOMATION)
    with pytest.raises(StageError) as exc:
        run_pipeline(config)
    assert exc.value.stage == "filter"


def test_pipeline_deterministic_outputs(mini_corpus_path, tmp_path):
    run_pipeline(_config(mini_corpus_path, out_dir=str(tmp_path / "a")))
    run_pipeline(_config(mini_corpus_path, out_dir=str(tmp_path / "b")))
    for name in ("prompt_set.json", "ranking_report.json", "summary_report.json",
                 "dendrogram.txt", "clusters.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_pipeline_seed_changes_embeddings(mini_corpus_path, tmp_path):
    run_pipeline(_config(mini_corpus_path, seed=1, out_dir=str(tmp_path / "a")))
    run_pipeline(_config(mini_corpus_path, seed=2, out_dir=str(tmp_path / "b")))
    assert (tmp_path / "a" / "dendrogram.txt").read_bytes() != \
        (tmp_path / "b" / "dendrogram.txt").read_bytes()


def test_pipeline_ranking_report_contents(mini_corpus_path, tmp_path):
    result = run_pipeline(_config(mini_corpus_path, out_dir=str(tmp_path / "out")))
    report = json.loads(result.written["ranking_report"].read_text())
    assert report["domain"] == "automation"
    assert len(report["domain_track"]) == 9
    assert len(report["construct_track"]) == 3
    assert [r["rank"] for r in report["domain_track"]] == list(range(1, 10))
    # situational track is citation-ordered
    citations = [r["citations"] for r in report["construct_track"]]
    assert citations == sorted(citations, reverse=True)


def test_pipeline_pretrained_mode(mini_corpus_path, tmp_path):
    trained = run_pipeline(_config(mini_corpus_path))
    # write vectors covering the corpus stems, then rerun in pretrained mode
    from trustconv.corpus import load_corpus
    from trustconv.embedding import EmbeddingTable
    import numpy as np

    rng = np.random.default_rng(0)
    stems = set()
    from trustconv.textprep import preprocess_text
    for scale in load_corpus(mini_corpus_path).scales:
        for item in scale.items:
            stems.update(preprocess_text(item.text))
    table = EmbeddingTable({s: rng.normal(size=12) for s in sorted(stems)})
    vec_path = tmp_path / "vectors.txt"
    table.save(vec_path)

    result = run_pipeline(_config(mini_corpus_path, pretrained=str(vec_path)))
    assert len(result.prompt_set.conceptual) >= 1
    assert trained.ranking_report == result.ranking_report


def test_cli_ingest_ok(mini_corpus_path, capsys):
    assert cli.main(["ingest", "--corpus", mini_corpus_path]) == 0
    out = capsys.readouterr().out
    assert "12 scales" in out


def test_cli_ingest_reports_violations(corpus_file, capsys):
    doc = {
        "scales": [{
            "scale_id": "bad", "name": "x", "year": 2000, "citations": -2,
            "domain": "automation", "construct": "situational",
            "items": [{"item_id": "i", "text": "the system works", "valence": "neutral"}],
        }]
    }
    assert cli.main(["ingest", "--corpus", corpus_file(doc)]) == 1
    assert "citations" in capsys.readouterr().out


def test_cli_rank_writes_report(mini_corpus_path, tmp_path):
    out = tmp_path / "rank.json"
    assert cli.main(["rank", "--corpus", mini_corpus_path, "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert len(report["domain_track"]) == 9


def test_cli_pipeline_writes_all_artifacts(mini_corpus_path, tmp_path):
    out = tmp_path / "out"
    code = cli.main(["pipeline", "--corpus", mini_corpus_path, "--out", str(out),
                     "--epochs", "5", "--dim", "12", "--seed", "1"])
    assert code == 0
    prompt_set = load_prompt_set(out / "prompt_set.json")
    assert prompt_set.concept_slots


def test_cli_stage_error_exit_code(corpus_file, tmp_path):
    doc = {
        "scales": [{
            "scale_id": "h1", "name": "x", "year": 2000, "citations": 1,
            "domain": "human", "construct": "situational",
            "items": [{"item_id": "i", "text": "my colleague helps", "valence": "neutral"}],
        }]
    }
    code = cli.main(["pipeline", "--corpus", corpus_file(doc), "--out", str(tmp_path / "o"),
                     "--epochs", "2"])
    assert code == 1


def test_cli_bad_subcommand_exit_code():
    assert cli.main(["definitely-not-a-command"]) == 2


def test_cli_embed_and_cluster(mini_corpus_path, tmp_path):
    vectors = tmp_path / "vectors.txt"
    cooc = tmp_path / "cooc.txt"
    assert cli.main(["embed", "--corpus", mini_corpus_path, "--out", str(vectors),
                     "--cooc", str(cooc), "--epochs", "3", "--dim", "8"]) == 0
    assert vectors.exists()
    assert all(len(line.split()) == 3 for line in cooc.read_text().splitlines())

    dgm = tmp_path / "dendrogram.txt"
    clusters = tmp_path / "clusters.txt"
    assert cli.main(["cluster", "--corpus", mini_corpus_path, "--out", str(dgm),
                     "--clusters", str(clusters), "--epochs", "3", "--dim", "8",
                     "--k", "4"]) == 0
    lines = clusters.read_text().splitlines()
    assert len({line.split()[1] for line in lines}) == 4
