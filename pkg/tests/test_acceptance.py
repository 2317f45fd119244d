"""Exit criteria for the package.

Each test carries an ``acceptance`` marker; the terminal summary prints one
PASS/FAIL/SKIP line per criterion after the run.
"""
import json
import os
import random
import time
from pathlib import Path

import pytest

from conftest import DATA
from oracles import (PLANTED_ANTI, PLANTED_ANTI_MULTI, PLANTED_ORIGIN, PLANTED_ORIGIN_MULTI,
                     SYNTH_STOP, brute_ngrams, exhaustive_best, matrix_modularity,
                     naive_cooccurrence, planted_rows, random_graph, rescan_index, rows_to_csv,
                     synthetic_docs)
from pubmine.cli import main
from pubmine.corpus import Corpus, Publication, corpus_stats
from pubmine.graph import (BipartiteGraph, CooccurrenceGraph, build_cooccurrence,
                           detect_communities, from_json, to_json)
from pubmine.keyphrase import ExtractionConfig, KeyphraseIndex, Posting, build_index, extract_ngrams
from pubmine.latest import LatestConfig, latest_terms

acceptance = pytest.mark.acceptance


def _synthetic_index():
    docs = synthetic_docs(2024, n_docs=50)
    stop = frozenset(w.lower() for w in SYNTH_STOP)
    corpus = Corpus(tuple(Publication(i, t, abstract=a, year=y) for i, y, t, a in docs))
    config = ExtractionConfig(1, 3, 1, stop)
    return docs, stop, build_index(corpus, config)


@acceptance("AC1 n-gram oracle, 200 sequences, exact, < 1 s")
def test_ac1_ngram_oracle():
    rng = random.Random(1)
    alphabet = ["VIRUS", "BAT-ORIGIN", "HOST", "SPIKE", "CELL", "ANTI-VIRAL", "RNA",
                "GENE", "SARS-COV-2", "OF", "THE", "AND"]
    stop = frozenset({"of", "the", "and"})
    start = time.perf_counter()
    for _ in range(200):
        tokens = [rng.choice(alphabet) for _ in range(rng.randint(0, 40))]
        n_min = rng.randint(1, 3)
        n_max = n_min + rng.randint(0, 2)
        got = extract_ngrams(tokens, ExtractionConfig(n_min, n_max, 1, stop))
        assert got == brute_ngrams(tokens, stop, n_min, n_max)
    assert time.perf_counter() - start < 1.0


@acceptance("AC2 index oracle, 50 documents, exact, < 5 s")
def test_ac2_index_oracle():
    start = time.perf_counter()
    docs, stop, index = _synthetic_index()
    expected = rescan_index([(i, y, [t] + ([a] if a else [])) for i, y, t, a in docs],
                            stop, 1, 3, 1)
    got = {p: (set(post.doc_ids), dict(post.count_by_year)) for p, post in index.entries.items()}
    assert got == expected
    assert time.perf_counter() - start < 5.0


@acceptance("AC3 co-occurrence oracle, 20 terms, exact")
def test_ac3_cooccurrence_oracle():
    _, _, index = _synthetic_index()
    terms = sorted(index.entries, key=lambda t: (-index[t].doc_frequency, t))[:20]
    assert len(terms) == 20
    graph = build_cooccurrence(index, terms)
    assert graph.edges == naive_cooccurrence({t: set(index[t].doc_ids) for t in terms})
    assert graph.nodes == set(terms)


@acceptance("AC4 community oracle, <= 8 nodes exhaustive plus two cliques")
def test_ac4_community_oracle():
    rng = random.Random(4)
    for _ in range(300):
        labels, edges = random_graph(rng, n_max=8)
        best, optimal = exhaustive_best(labels, edges)
        found = detect_communities(CooccurrenceGraph(frozenset(labels), edges))
        parts = frozenset(frozenset(c.members) for c in found)
        assert matrix_modularity(labels, edges, [c.members for c in found]) == \
            pytest.approx(best, abs=1e-9)
        assert parts in optimal

    left, right = [f"L{i}" for i in range(4)], [f"R{i}" for i in range(4)]
    edges = {(a, b): 1 for side in (left, right) for i, a in enumerate(side) for b in side[i + 1:]}
    edges[("L0", "R0")] = 1
    found = detect_communities(CooccurrenceGraph(frozenset(left + right), edges))
    assert {frozenset(c.members) for c in found} == {frozenset(left), frozenset(right)}


@acceptance("AC5 latest-year boundary at 0.8, exact")
def test_ac5_temporal_boundary():
    index = KeyphraseIndex({
        "KEPT": Posting(frozenset({"a", "b"}), {2019: 1, 2020: 4}),
        "REJECTED": Posting(frozenset({"c", "d"}), {2019: 2, 2020: 3}),
    })
    got = latest_terms(index, LatestConfig(ratio_threshold=0.8, min_total_count=1))
    assert [(t.term, t.ratio) for t in got] == [("KEPT", 0.8)]


@acceptance("AC6 stats fixture, hand-computed fields, mean to 1e-12")
def test_ac6_stats_fixture(fixture_corpus):
    s = corpus_stats(fixture_corpus)
    assert (s.publication_count, s.abstract_count, s.author_count, s.authors_at_least_2,
            s.authors_at_least_10, s.venue_count, s.venues_at_least_2, s.venues_at_least_10,
            s.year_count) == (20, 17, 31, 5, 0, 10, 3, 0, 8)
    assert abs(s.abstract_fraction - 0.85) < 1e-12
    assert abs(s.mean_authors_per_publication - 37 / 20) < 1e-12


def _pipeline(csv_path: Path, out: Path):
    excl = out / "exclusions.txt"
    out.mkdir(parents=True, exist_ok=True)
    excl.write_text("ORIGINALITY\n")
    assert main(["ingest", "--input", str(csv_path), "--out", str(out / "work")]) == 0
    assert main(["focus", "--input", str(out / "work" / "index.json"), "--pattern", "ORIGIN",
                 "--exclusions", str(excl), "--out", str(out / "focus")]) == 0
    assert main(["latest", "--input", str(out / "work" / "index.json"),
                 "--out", str(out / "latest"), "--min-count", "2"]) == 0


def _tree(root: Path):
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


@acceptance("AC7 determinism, byte-identical reruns and row permutation")
def test_ac7_determinism(tmp_path):
    _pipeline(DATA / "fixture.csv", tmp_path / "a")
    _pipeline(DATA / "fixture.csv", tmp_path / "b")
    first, second = _tree(tmp_path / "a"), _tree(tmp_path / "b")
    assert len(first) >= 10 and first == second

    header, *body = (DATA / "fixture.csv").read_text().splitlines(keepends=True)
    random.Random(7).shuffle(body)
    permuted = tmp_path / "permuted.csv"
    permuted.write_text(header + "".join(body))
    _pipeline(permuted, tmp_path / "c")
    assert (tmp_path / "c" / "work" / "index.json").read_bytes() == \
        (tmp_path / "a" / "work" / "index.json").read_bytes()


def _random_bipartite(rng):
    left = {f"T{i}" for i in range(rng.randint(0, 6))}
    right = {str(rng.randint(10**6, 10**8)) for _ in range(rng.randint(0, 6))}
    edges = {(a, b): rng.randint(1, 5) for a in left for b in right if rng.random() < 0.4}
    return BipartiteGraph(left, right, edges, right_kind=rng.choice(["publication", "author"]))


@acceptance("AC8 JSON round-trip on 100 random graphs")
def test_ac8_json_round_trip():
    rng = random.Random(8)
    for k in range(100):
        if k % 2:
            labels, edges = random_graph(rng, n_max=12)
            graph = CooccurrenceGraph(frozenset(labels), edges)
        else:
            graph = _random_bipartite(rng)
        back = from_json(to_json(graph))
        assert type(back) is type(graph)
        assert back == graph


@acceptance("AC9 planted mini-corpus, frequencies and multi-term docs, < 10 s")
def test_ac9_planted_corpus(tmp_path):
    start = time.perf_counter()
    csv_path = tmp_path / "planted.csv"
    csv_path.write_text(rows_to_csv(planted_rows()))
    excl = tmp_path / "excl.txt"
    excl.write_text("ORIGINALITY\n")
    assert main(["ingest", "--input", str(csv_path), "--out", str(tmp_path / "work"),
                 "--min-df", "1"]) == 0
    index = str(tmp_path / "work" / "index.json")
    for pattern, extra, terms, multi in (
            ("ORIGIN", ["--exclusions", str(excl)], PLANTED_ORIGIN, PLANTED_ORIGIN_MULTI),
            ("ANTI", [], PLANTED_ANTI, PLANTED_ANTI_MULTI)):
        out = tmp_path / pattern
        assert main(["focus", "--input", index, "--pattern", pattern, "--k", "2",
                     "--out", str(out), *extra]) == 0
        selection = json.loads((out / "selection.json").read_text())
        assert [(s["term"], s["doc_frequency"]) for s in selection] == terms
        found = json.loads((out / "multi_term.json").read_text())
        assert [(m["publication"], m["terms"]) for m in found] == multi
    assert main(["latest", "--input", index, "--out", str(tmp_path / "latest")]) == 0
    assert time.perf_counter() - start < 10.0


CORD19 = os.environ.get("PUBMINE_CORD19")


@acceptance("AC10 CORD-19 metadata, informative (set PUBMINE_CORD19)")
@pytest.mark.skipif(not CORD19, reason="PUBMINE_CORD19 not set")
def test_ac10_cord19(tmp_path):
    work = tmp_path / "work"
    assert main(["ingest", "--input", CORD19, "--out", str(work), "--skip-invalid",
                 "--id-column", os.environ.get("PUBMINE_CORD19_ID", "cord_uid")]) == 0
    assert main(["focus", "--input", str(work / "index.json"), "--pattern", "ORIGIN",
                 "--out", str(tmp_path / "focus")]) == 0
    top = [s["term"] for s in json.loads((tmp_path / "focus" / "selection.json").read_text())]
    assert "BAT-ORIGIN" in top[:10]
    assert main(["latest", "--input", str(work / "index.json"),
                 "--out", str(tmp_path / "latest")]) == 0
    assert len(json.loads((tmp_path / "latest" / "latest_terms.json").read_text())) > 500
