"""Topic-focused analysis: pick the keyphrases of one topic and relate them
to the publications and authors that use them.

A typical session::

    sel = select_topic_terms(index, "ORIGIN", exclusions={"ORIGINALITY"})
    pubs = term_publication_graph(index, sel)
    authors = term_author_graph(corpus, index, sel)
    multi_term_publications(index, sel, k=2)
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .corpus import Corpus
from .errors import EmptySelectionError, UnknownTermError
from .graph import AUTHOR, PUBLICATION, BipartiteGraph
from .keyphrase import KeyphraseIndex


@dataclass(frozen=True)
class TopicSelection:
    pattern: str
    exclusions: frozenset[str] = field(default_factory=frozenset)
    matched: tuple[tuple[str, int], ...] = ()

    @property
    def terms(self) -> list[str]:
        return [t for t, _ in self.matched]

    def to_json(self) -> str:
        rows = [{"term": t, "doc_frequency": df} for t, df in self.matched]
        return json.dumps(rows, indent=1, ensure_ascii=False) + "\n"


def read_phrase_list(path) -> set[str]:
    """One phrase per line; blank lines and ``#`` comments are ignored."""
    with open(path, encoding="utf-8") as fh:
        lines = (line.strip() for line in fh)
        return {line.upper() for line in lines if line and not line.startswith("#")}


def select_topic_terms(index: KeyphraseIndex, pattern: str,
                       exclusions: Iterable[str] = ()) -> TopicSelection:
    """Indexed phrases containing ``pattern`` (case-insensitive substring).

    Results are ordered by document frequency, most frequent first, then
    alphabetically. Excluded phrases are dropped; this is where manually
    rejected matches ("ORIGINALITY" for "ORIGIN") go.
    """
    if not pattern:
        raise ValueError("pattern must be non-empty")
    needle = pattern.upper()
    excluded = frozenset(e.upper() for e in exclusions)
    matched = [(p, index[p].doc_frequency) for p in index.entries
               if needle in p.upper() and p.upper() not in excluded]
    matched.sort(key=lambda pd: (-pd[1], pd[0]))
    return TopicSelection(pattern, excluded, tuple(matched))


def _require(selection: TopicSelection):
    if not selection.matched:
        raise EmptySelectionError(selection.pattern)


def terms_publication_graph(index: KeyphraseIndex, terms: Iterable[str]) -> BipartiteGraph:
    terms = list(terms)
    edges = {}
    for t in terms:
        if t not in index:
            raise UnknownTermError(t)
        for d in index[t].doc_ids:
            edges[(t, d)] = 1
    right = frozenset(d for _, d in edges)
    return BipartiteGraph(frozenset(terms), right, edges, right_kind=PUBLICATION)


def term_publication_graph(index: KeyphraseIndex, selection: TopicSelection) -> BipartiteGraph:
    """Selected terms on one side, the publications mentioning them on the other."""
    _require(selection)
    return terms_publication_graph(index, selection.terms)


def term_author_graph(corpus: Corpus, index: KeyphraseIndex,
                      selection: TopicSelection) -> BipartiteGraph:
    """Terms linked to authors, weighted by the author's publications using the term.

    An author listed twice on one paper still counts that paper once.
    """
    _require(selection)
    pubs = corpus.by_id
    edges: Counter = Counter()
    for t in selection.terms:
        for d in index[t].doc_ids:
            try:
                authors = pubs[d].authors
            except KeyError:
                raise KeyError(f"publication {d!r} is indexed but missing from the corpus") from None
            for a in set(authors):
                edges[(t, a)] += 1
    right = frozenset(a for _, a in edges)
    return BipartiteGraph(frozenset(selection.terms), right, dict(edges), right_kind=AUTHOR)


def multi_term_publications(index: KeyphraseIndex, selection: TopicSelection,
                            k: int = 2) -> list[tuple[str, int]]:
    """Publications mentioning at least ``k`` of the selected terms."""
    if k < 2:
        raise ValueError("k must be >= 2")
    hits: Counter = Counter()
    for t in selection.terms:
        hits.update(index[t].doc_ids)
    out = [(d, c) for d, c in hits.items() if c >= k]
    out.sort(key=lambda dc: (-dc[1], dc[0]))
    return out
