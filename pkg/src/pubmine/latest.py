"""Latest-terminology analysis.

A keyphrase is "latest" when, within a window of recent years, at least a
given fraction of its occurrences falls in the most recent year. Those
phrases are linked by co-occurrence, grouped into communities, and each
community is traced back to the publications that mention it.

Occurrences in publications without a year are left out of the ratio (they
cannot be placed in time) but still count for co-occurrence edges.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .errors import NoYearDataError, UnknownTermError
from .graph import (BipartiteGraph, Community, CooccurrenceGraph,
                    build_cooccurrence)
from .keyphrase import KeyphraseIndex
from .topic_focus import terms_publication_graph

OCCURRENCES = "occurrences"
DOCUMENTS = "documents"


@dataclass(frozen=True)
class LatestConfig:
    window_years: int = 30
    latest_year: Optional[int] = None
    ratio_threshold: float = 0.8
    min_total_count: int = 3
    count_mode: str = OCCURRENCES

    def __post_init__(self):
        if not 0 < self.ratio_threshold <= 1:
            raise ValueError("ratio_threshold must lie in (0, 1]")
        if self.window_years < 1:
            raise ValueError("window_years must be >= 1")
        if self.min_total_count < 1:
            raise ValueError("min_total_count must be >= 1")
        if self.count_mode not in (OCCURRENCES, DOCUMENTS):
            raise ValueError(f"count_mode must be {OCCURRENCES!r} or {DOCUMENTS!r}")


@dataclass(frozen=True)
class LatestTerm:
    term: str
    ratio: float
    total: int
    by_year: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"term": self.term, "ratio": self.ratio, "total": self.total,
                "by_year": {str(y): c for y, c in self.by_year.items()}}


def _year_counts(index: KeyphraseIndex, phrase: str, mode: str) -> dict:
    posting = index[phrase]
    if mode == OCCURRENCES:
        return dict(posting.count_by_year)
    return Counter(index.doc_years.get(d) for d in posting.doc_ids)


def resolve_latest_year(index: KeyphraseIndex, config: LatestConfig) -> int:
    if config.count_mode == DOCUMENTS:
        years = {y for y in index.doc_years.values() if y is not None}
    else:
        years = set(index.years)
    if not years:
        raise NoYearDataError()
    return config.latest_year if config.latest_year is not None else max(years)


def latest_terms(index: KeyphraseIndex, config: LatestConfig = LatestConfig()) -> list[LatestTerm]:
    """Phrases concentrated in the latest year of the analysis window.

    Sorted by windowed total, largest first, then alphabetically. The ratio
    comparison is inclusive: exactly 80% passes a 0.8 threshold.
    """
    latest = resolve_latest_year(index, config)
    first = latest - config.window_years + 1
    out = []
    for phrase in index.entries:
        counts = _year_counts(index, phrase, config.count_mode)
        windowed = {y: c for y, c in sorted(counts.items(), key=lambda yc: (yc[0] is None, yc[0] or 0))
                    if y is not None and first <= y <= latest}
        total = sum(windowed.values())
        if total == 0 or total < config.min_total_count:
            continue
        ratio = windowed.get(latest, 0) / total
        if ratio >= config.ratio_threshold:
            out.append(LatestTerm(phrase, ratio, total, windowed))
    out.sort(key=lambda t: (-t.total, t.term))
    return out


def latest_terms_json(terms: list[LatestTerm]) -> str:
    return json.dumps([t.to_dict() for t in terms], indent=1, ensure_ascii=False) + "\n"


def latest_topic_graph(index: KeyphraseIndex, config: LatestConfig = LatestConfig(),
                       min_edge_weight: int = 1) -> CooccurrenceGraph:
    terms = [t.term for t in latest_terms(index, config)]
    graph = build_cooccurrence(index, terms)
    return graph.filter_edges(min_edge_weight) if min_edge_weight > 1 else graph


def community_publication_graph(index: KeyphraseIndex, community: Community) -> BipartiteGraph:
    """Members of one community against every publication mentioning any of them."""
    for t in community.members:
        if t not in index:
            raise UnknownTermError(t)
    return terms_publication_graph(index, sorted(community.members))


def communities_json(communities: list[Community]) -> str:
    rows = [{"id": c.id, "members": sorted(c.members)} for c in communities]
    return json.dumps(rows, indent=1, ensure_ascii=False) + "\n"
