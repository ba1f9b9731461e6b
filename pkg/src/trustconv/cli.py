"""Command-line interface.

Batch subcommands run the generation pipeline (or a prefix of it) in
process; ``serve`` hosts the survey API; ``chat`` is a terminal REPL that
runs in process by default or acts as a thin client against a running
service via --url. Exit codes: 0 success, 1 stage/domain error, 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
import tempfile
from pathlib import Path

from .clustering import Linkage, Metric, agglomerate, cut_tree, distance_matrix
from .corpus import Construct, Domain, load_corpus, validate_corpus
from .embedding import GloveConfig, Weighting, build_cooccurrence, train_glove
from .errors import BadConfig, TrustconvError
from .pipeline import PipelineConfig, run_pipeline
from .resources import default_corpus_path, default_stopwords, read_wordlist
from .store import SessionStore, default_data_dir
from .textprep import preprocess_corpus


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", default=str(default_corpus_path()),
                   help="corpus file (default: bundled mini corpus)")
    p.add_argument("--domain", default="automation",
                   choices=[d.value for d in Domain])
    p.add_argument("--construct", default="situational",
                   choices=[c.value for c in Construct])
    p.add_argument("--top-domain", type=int, default=9, dest="top_domain")
    p.add_argument("--top-construct", type=int, default=3, dest="top_construct")
    p.add_argument("--lexicon", default=None, help="domain lexicon file override")
    p.add_argument("--stoplist", default=None, help="stopword file override")


def _add_embedding_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=50)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--xmax", type=float, default=100.0)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--lr", type=float, default=0.05)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pretrained", default=None,
                   help="word-vector file; skips in-corpus training")


def _add_clustering_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--metric", default="cosine", choices=[m.value for m in Metric])
    p.add_argument("--linkage", default="average", choices=[l.value for l in Linkage])
    p.add_argument("--k", type=int, default=6)
    p.add_argument("--height", type=float, default=None)


def _config_from_args(args) -> PipelineConfig:
    return PipelineConfig(
        corpus_path=args.corpus,
        domain=Domain(args.domain),
        construct=Construct(args.construct),
        top_n_domain=args.top_domain,
        top_n_construct=args.top_construct,
        lexicon_path=args.lexicon,
        stoplist_path=args.stoplist,
        pretrained=getattr(args, "pretrained", None),
        dim=getattr(args, "dim", 50),
        window=getattr(args, "window", 5),
        x_max=getattr(args, "xmax", 100.0),
        alpha=getattr(args, "alpha", 0.75),
        learning_rate=getattr(args, "lr", 0.05),
        epochs=getattr(args, "epochs", 50),
        seed=getattr(args, "seed", 0),
        metric=Metric(getattr(args, "metric", "cosine")),
        linkage=Linkage(getattr(args, "linkage", "average")),
        k=getattr(args, "k", 6),
        height=getattr(args, "height", None),
        templates_path=getattr(args, "templates", None),
        out_dir=getattr(args, "out", None),
    )


def cmd_ingest(args) -> int:
    corpus = load_corpus(args.corpus)
    violations = validate_corpus(corpus)
    print(f"loaded {len(corpus)} scales, "
          f"{sum(len(s.items) for s in corpus.scales)} items")
    for v in violations:
        print(f"violation: scale={v.scale_id} field={v.field} rule={v.rule}")
    return 1 if violations else 0


def _stage_prefix(args):
    """Steps 1-6 shared by the stage subcommands: the prompt database."""
    from .ranking import build_prompt_database, bundled_lexicon, domain_log_odds, load_lexicon, rank_scales
    from .corpus import filter_scales
    from .errors import EmptySelection

    corpus = load_corpus(args.corpus)
    stoplist = set(read_wordlist(args.stoplist)) if args.stoplist else set(default_stopwords())
    domain = Domain(args.domain)
    construct = Construct(args.construct)
    domain_scales = filter_scales(corpus, domain=domain)
    if not domain_scales.scales:
        raise EmptySelection(f"no scales in domain {domain.value!r}")
    lexicon = load_lexicon(args.lexicon, domain) if args.lexicon else bundled_lexicon(domain)
    scores = {s.scale_id: domain_log_odds(s, lexicon, stoplist) for s in domain_scales.scales}
    log_odds_track = rank_scales(list(domain_scales.scales), scores, len(domain_scales.scales))
    citations = {s.scale_id: float(s.citations) for s in domain_scales.scales}
    domain_track = rank_scales(list(domain_scales.scales), citations, args.top_domain)
    construct_scales = filter_scales(corpus, construct=construct)
    construct_track = []
    if construct_scales.scales:
        ccit = {s.scale_id: float(s.citations) for s in construct_scales.scales}
        construct_track = rank_scales(list(construct_scales.scales), ccit, args.top_construct)
    db = build_prompt_database(domain_track, construct_track, corpus)
    return db, stoplist, log_odds_track, domain_track, construct_track


def cmd_rank(args) -> int:
    _, _, log_odds_track, domain_track, construct_track = _stage_prefix(args)
    report = {
        "log_odds_track": [vars(r) for r in log_odds_track],
        "domain_track": [vars(r) for r in domain_track],
        "construct_track": [vars(r) for r in construct_track],
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_embed(args) -> int:
    db, stoplist, *_ = _stage_prefix(args)
    _, streams = preprocess_corpus(db, stoplist)
    matrix = build_cooccurrence(streams, args.window, Weighting.INVERSE_DISTANCE)
    if args.cooc:
        Path(args.cooc).write_text("\n".join(matrix.to_lines()) + "\n", encoding="utf-8")
    config = GloveConfig(dim=args.dim, x_max=args.xmax, alpha=args.alpha,
                         learning_rate=args.lr, epochs=args.epochs, seed=args.seed)
    table = train_glove(matrix, config)
    table.save(args.out)
    print(f"trained {len(table)} vectors (dim {table.dim}) -> {args.out}")
    return 0


def cmd_cluster(args) -> int:
    from .embedding import load_vectors

    db, stoplist, *_ = _stage_prefix(args)
    bag, streams = preprocess_corpus(db, stoplist)
    if args.pretrained:
        table = load_vectors(args.pretrained)
    else:
        matrix = build_cooccurrence(streams, args.window, Weighting.INVERSE_DISTANCE)
        table = train_glove(matrix, GloveConfig(dim=args.dim, x_max=args.xmax,
                                                alpha=args.alpha, learning_rate=args.lr,
                                                epochs=args.epochs, seed=args.seed))
    words = sorted(w for w in bag.counts if w in table)
    dist = distance_matrix(table, words, Metric(args.metric))
    dgm = agglomerate(dist, Linkage(args.linkage))
    Path(args.out).write_text("\n".join(dgm.to_lines()) + "\n", encoding="utf-8")
    if args.height is not None:
        flat = cut_tree(dgm, height=args.height)
    else:
        flat = cut_tree(dgm, k=min(args.k, len(words)))
    if args.clusters:
        Path(args.clusters).write_text("\n".join(flat.to_lines()) + "\n", encoding="utf-8")
    print(f"{len(words)} words, {flat.k} clusters -> {args.out}")
    return 0


def _run_full(args, keys: list[str]) -> int:
    config = _config_from_args(args)
    if not config.out_dir:
        config.out_dir = tempfile.mkdtemp(prefix="trustconv_")
    result = run_pipeline(config)
    for key in keys:
        print(f"{key}: {result.written[key]}")
    dropped = result.prompt_set_build.dropped
    if dropped:
        print(f"{len(dropped)} prompt(s) dropped by lint/balance (see lint_report)")
    return 0


def cmd_summarize(args) -> int:
    return _run_full(args, ["summary_report"])


def cmd_prompts(args) -> int:
    return _run_full(args, ["prompt_set", "lint_report"])


def cmd_pipeline(args) -> int:
    return _run_full(args, ["ranking_report", "dendrogram", "clusters",
                            "summary_report", "prompt_set", "lint_report"])


def _print_turn(text: str) -> None:
    print(f"agent> {text}")


def cmd_chat(args) -> int:
    if args.url:
        return _chat_remote(args.url)
    from .server import load_prompt_sets

    prompt_sets = load_prompt_sets([args.prompt_set] if args.prompt_set else None)
    data_dir = args.data_dir or tempfile.mkdtemp(prefix="trustconv_chat_")
    store = SessionStore(data_dir, prompt_sets)
    session, opening = store.create_session("default")
    print(f"session {session.session_id} (transcripts in {data_dir})")
    _print_turn(opening.text)
    while not session.is_closed():
        try:
            text = input("you> ").strip()
        except EOFError:
            print()
            break
        if not text:
            continue
        result = store.post_message(session.session_id, text)
        _print_turn(result.agent_text)
        if result.session_complete:
            break
    return 0


def _chat_remote(base_url: str) -> int:
    import httpx

    with httpx.Client(base_url=base_url, timeout=30.0) as client:
        created = client.post("/sessions", json={"prompt_set_id": "default"})
        created.raise_for_status()
        doc = created.json()
        print(f"session {doc['session_id']} @ {base_url}")
        _print_turn(doc["agent_text"])
        while True:
            try:
                text = input("you> ").strip()
            except EOFError:
                print()
                return 0
            if not text:
                continue
            reply = client.post(f"/sessions/{doc['session_id']}/messages", json={"text": text})
            if reply.status_code == 409:
                print("(session closed)")
                return 0
            reply.raise_for_status()
            body = reply.json()
            _print_turn(body["agent_reply"])
            if body["session_complete"]:
                return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app, load_prompt_sets

    prompt_sets = load_prompt_sets(args.prompt_set or None)
    data_dir = args.data_dir or str(default_data_dir())
    store = SessionStore(data_dir, prompt_sets)
    app = create_app(store, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trustconv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load and validate a corpus file")
    p.add_argument("--corpus", default=str(default_corpus_path()))
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("rank", help="rank scales and print/write the ranking report")
    _add_corpus_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_rank)

    p = sub.add_parser("embed", help="train word vectors on the prompt database")
    _add_corpus_args(p)
    _add_embedding_args(p)
    p.add_argument("--out", default="vectors.txt")
    p.add_argument("--cooc", default=None, help="also dump 'i j x' co-occurrence triplets")
    p.set_defaults(fn=cmd_embed)

    p = sub.add_parser("cluster", help="build and cut the dendrogram")
    _add_corpus_args(p)
    _add_embedding_args(p)
    _add_clustering_args(p)
    p.add_argument("--out", default="dendrogram.txt")
    p.add_argument("--clusters", default=None, help="write 'word cluster_id' lines")
    p.set_defaults(fn=cmd_cluster)

    for name, fn in (("summarize", cmd_summarize), ("prompts", cmd_prompts),
                     ("pipeline", cmd_pipeline)):
        p = sub.add_parser(name, help=f"run the pipeline and write {name} outputs")
        _add_corpus_args(p)
        _add_embedding_args(p)
        _add_clustering_args(p)
        p.add_argument("--templates", default=None)
        p.add_argument("--out", default=None, help="output directory")
        p.set_defaults(fn=fn)

    p = sub.add_parser("chat", help="terminal survey REPL")
    p.add_argument("--prompt-set", default=None, help="prompt set file")
    p.add_argument("--data-dir", default=None)
    p.add_argument("--url", default=None, help="talk to a running service instead")
    p.set_defaults(fn=cmd_chat)

    p = sub.add_parser("serve", help="run the survey HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--data-dir", default=None)
    p.add_argument("--prompt-set", action="append", default=None,
                   help="prompt set file (repeatable; first is 'default')")
    p.add_argument("--static", default=None, help="serve a built webchat from this dir")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except BadConfig as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TrustconvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
