"""Command-line front end.

    pubmine ingest  --input metadata.csv --out work/
    pubmine stats   --input metadata.csv [--top venue --min-count 10]
    pubmine focus   --input work/index.json --pattern ORIGIN --exclusions excl.txt --out origin/
    pubmine latest  --input work/index.json --out latest/
    pubmine communities --input work/index.json --terms anti_terms.txt --out anti/
    pubmine export  --input origin/term_pub.json --format graphml --out term_pub.graphml

``ingest`` writes ``index.json``, ``stats.json`` and ``corpus.json``; the
other commands read the index (and ``corpus.json`` next to it, for author
graphs) so extraction runs once.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import corpus as corpus_mod
from .errors import PubmineError
from .graph import detect_communities, export_graph, build_cooccurrence, from_json
from .keyphrase import ExtractionConfig, KeyphraseIndex, build_index, load_stopwords
from .latest import (LatestConfig, communities_json, community_publication_graph,
                     latest_terms, latest_terms_json, latest_topic_graph)
from .topic_focus import (multi_term_publications, read_phrase_list, select_topic_terms,
                          term_author_graph, term_publication_graph)

log = logging.getLogger("pubmine")


def _ratio(value: str) -> float:
    r = float(value)
    if not 0 < r <= 1:
        raise argparse.ArgumentTypeError(f"ratio must be in (0, 1], got {value}")
    return r


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return n


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    log.info("wrote %s", path)


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def _load_index(path) -> KeyphraseIndex:
    return KeyphraseIndex.from_json(Path(path).read_text(encoding="utf-8"))


def _csv_config(args) -> corpus_mod.CsvConfig:
    return corpus_mod.CsvConfig(
        id=args.id_column, title=args.title_column, abstract=args.abstract_column,
        authors=args.authors_column, venue=args.venue_column, date=args.date_column,
        author_separator=args.author_sep, skip_invalid=args.skip_invalid)


def _read_csv(args) -> corpus_mod.Corpus:
    try:
        return corpus_mod.read_corpus(args.input, _csv_config(args))
    except PubmineError as exc:
        raise PubmineError(f"{args.input}: {exc}") from exc


def cmd_ingest(args) -> None:
    corpus = _read_csv(args)
    stopwords = load_stopwords(args.stopwords)
    config = ExtractionConfig(args.ngram_min, args.ngram_max, args.min_df, stopwords)
    index = build_index(corpus, config)
    out = Path(args.out)
    _write(out / "index.json", index.to_json())
    _write(out / "stats.json", _dump(corpus_mod.corpus_stats(corpus).to_dict()))
    _write(out / "corpus.json", _dump(corpus.to_records()))
    log.info("%d publications, %d keyphrases", len(corpus), len(index))


def cmd_stats(args) -> None:
    corpus = _read_csv(args)
    if args.top:
        ranked = corpus_mod.top_entities(corpus, args.top, args.min_count)
        text = _dump([{"entity": e, "publications": c} for e, c in ranked])
    else:
        text = _dump(corpus_mod.corpus_stats(corpus).to_dict())
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)


def cmd_focus(args) -> None:
    index = _load_index(args.input)
    exclusions = read_phrase_list(args.exclusions) if args.exclusions else set()
    selection = select_topic_terms(index, args.pattern, exclusions)
    term_pub = term_publication_graph(index, selection)
    corpus_path = Path(args.corpus) if args.corpus else Path(args.input).parent / "corpus.json"
    records = json.loads(corpus_path.read_text(encoding="utf-8"))
    term_author = term_author_graph(corpus_mod.Corpus.from_records(records), index, selection)
    multi = multi_term_publications(index, selection, args.k)
    out, ext = Path(args.out), args.format
    _write(out / "selection.json", selection.to_json())
    _write(out / f"term_pub.{ext}", export_graph(term_pub, ext))
    _write(out / f"term_author.{ext}", export_graph(term_author, ext))
    _write(out / "multi_term.json", _dump([{"publication": d, "terms": c} for d, c in multi]))


def _write_communities(out: Path, index, graph, ext: str, min_edge_weight: int = 1):
    communities = detect_communities(graph, min_edge_weight)
    _write(out / f"cooccurrence.{ext}", export_graph(graph, ext))
    _write(out / "communities.json", communities_json(communities))
    for c in communities:
        _write(out / f"community_pubs_{c.id}.{ext}",
               export_graph(community_publication_graph(index, c), ext))


def cmd_latest(args) -> None:
    index = _load_index(args.input)
    config = LatestConfig(args.window, args.latest_year, args.ratio, args.min_count,
                          args.count_mode)
    terms = latest_terms(index, config)
    graph = latest_topic_graph(index, config, args.min_edge_weight)
    out = Path(args.out)
    _write(out / "latest_terms.json", latest_terms_json(terms))
    _write_communities(out, index, graph, args.format)
    log.info("%d latest terms", len(terms))


def cmd_communities(args) -> None:
    index = _load_index(args.input)
    terms = sorted(read_phrase_list(args.terms))
    graph = build_cooccurrence(index, terms)
    _write_communities(Path(args.out), index, graph, args.format, args.min_edge_weight)


def cmd_export(args) -> None:
    graph = from_json(Path(args.input).read_text(encoding="utf-8"))
    text = export_graph(graph, args.format)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pubmine", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log written files")
    sub = parser.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    def csv_flags(p):
        p.add_argument("--input", required=True, help="metadata CSV (UTF-8)")
        p.add_argument("--id-column", default="pubmed_id")
        p.add_argument("--title-column", default="title")
        p.add_argument("--abstract-column", default="abstract")
        p.add_argument("--authors-column", default="authors")
        p.add_argument("--venue-column", default="journal")
        p.add_argument("--date-column", default="publish_time")
        p.add_argument("--author-sep", default=";")
        p.add_argument("--skip-invalid", action="store_true",
                       help="drop rows with empty ids/titles or duplicate ids instead of failing")

    def format_flag(p):
        p.add_argument("--format", choices=["dot", "graphml", "json"], default="dot")

    p = add_parser("ingest", help="parse a CSV and build the keyphrase index")
    csv_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--stopwords", help="stopword file, one word per line")
    p.add_argument("--ngram-min", type=_positive, default=1)
    p.add_argument("--ngram-max", type=_positive, default=3)
    p.add_argument("--min-df", type=_positive, default=2)
    p.set_defaults(func=cmd_ingest)

    p = add_parser("stats", help="corpus statistics or an entity ranking")
    csv_flags(p)
    p.add_argument("--out")
    p.add_argument("--top", choices=["author", "venue", "year"])
    p.add_argument("--min-count", type=_positive, default=1)
    p.set_defaults(func=cmd_stats)

    p = add_parser("focus", help="topic-focused term/publication/author graphs")
    p.add_argument("--input", required=True, help="index.json written by ingest")
    p.add_argument("--corpus", help="corpus.json (default: next to the index)")
    p.add_argument("--pattern", required=True)
    p.add_argument("--exclusions", help="phrases to drop, one per line")
    p.add_argument("--k", type=int, default=2, help="min terms for multi_term.json")
    p.add_argument("--out", required=True)
    format_flag(p)
    p.set_defaults(func=cmd_focus)

    p = add_parser("latest", help="latest terminology, co-occurrence and communities")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ratio", type=_ratio, default=0.8)
    p.add_argument("--window", type=_positive, default=30)
    p.add_argument("--latest-year", type=int)
    p.add_argument("--min-count", type=_positive, default=3)
    p.add_argument("--min-edge-weight", type=_positive, default=1)
    p.add_argument("--count-mode", choices=["occurrences", "documents"], default="occurrences")
    format_flag(p)
    p.set_defaults(func=cmd_latest)

    p = add_parser("communities", help="communities over a given term list")
    p.add_argument("--input", required=True)
    p.add_argument("--terms", required=True, help="phrases, one per line")
    p.add_argument("--out", required=True)
    p.add_argument("--min-edge-weight", type=_positive, default=1)
    format_flag(p)
    p.set_defaults(func=cmd_communities)

    p = add_parser("export", help="convert a JSON graph to another format")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    format_flag(p)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (PubmineError, OSError, ValueError, KeyError) as exc:
        if getattr(args, "pattern", None) and "pattern" not in str(exc):
            print(f"pubmine {args.command}: {exc} (pattern {args.pattern!r})", file=sys.stderr)
        else:
            print(f"pubmine {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
