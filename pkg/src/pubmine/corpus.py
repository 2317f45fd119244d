"""Publication metadata records, CSV ingestion and descriptive statistics.

The CSV layout follows the CORD-19 ``metadata.csv`` conventions by default
(``pubmed_id``, ``title``, ``abstract``, ``authors``, ``journal``,
``publish_time``), but every column name is configurable through
:class:`CsvConfig`.

Author and venue strings are normalized by trimming and uppercasing only.
Spelling variants of the same person ("BARIC, RALPH S." vs "BARIC, R S")
stay distinct entities, so counts are over exact normalized strings.
"""
from __future__ import annotations

import csv
import io
import logging
import re
from collections import Counter
from dataclasses import asdict, dataclass
from functools import cached_property
from typing import Iterable, Optional, TextIO

from .errors import DuplicateIdError, MalformedRowError, MissingColumnError

log = logging.getLogger(__name__)

YEAR_MIN = 1800
YEAR_MAX = 2100

_YEAR_TOKEN = re.compile(r"(?<!\d)(\d{4})(?!\d)")
_SPACES = re.compile(r"\s+")


def _clean(value: Optional[str]) -> Optional[str]:
    if value is None:
        return None
    value = _SPACES.sub(" ", value).strip()
    return value or None


def normalize_name(value: str) -> str:
    """Uppercase and collapse whitespace; no variant merging."""
    return _SPACES.sub(" ", value).strip().upper()


@dataclass(frozen=True)
class Publication:
    id: str
    title: str
    abstract: Optional[str] = None
    authors: tuple[str, ...] = ()
    venue: Optional[str] = None
    year: Optional[int] = None
    doi: Optional[str] = None

    def __post_init__(self):
        if not self.id or not self.id.strip():
            raise ValueError("publication id must be non-empty")
        if not self.title or not self.title.strip():
            raise ValueError(f"publication {self.id!r} has an empty title")
        if self.year is not None and not YEAR_MIN <= self.year <= YEAR_MAX:
            raise ValueError(f"publication {self.id!r}: year {self.year} out of range")
        if isinstance(self.authors, list):
            object.__setattr__(self, "authors", tuple(self.authors))
        for name in self.authors:
            if name != name.strip() or not name:
                raise ValueError(f"publication {self.id!r}: bad author name {name!r}")

    def text_fields(self) -> list[str]:
        """Title, then abstract when present."""
        return [self.title] if self.abstract is None else [self.title, self.abstract]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["authors"] = list(self.authors)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Publication":
        return cls(
            id=d["id"],
            title=d["title"],
            abstract=d.get("abstract"),
            authors=tuple(d.get("authors") or ()),
            venue=d.get("venue"),
            year=d.get("year"),
            doi=d.get("doi"),
        )


@dataclass(frozen=True)
class Corpus:
    publications: tuple[Publication, ...] = ()

    def __post_init__(self):
        if isinstance(self.publications, list):
            object.__setattr__(self, "publications", tuple(self.publications))
        seen = set()
        for pub in self.publications:
            if pub.id in seen:
                raise DuplicateIdError(pub.id)
            seen.add(pub.id)

    def __len__(self):
        return len(self.publications)

    def __iter__(self):
        return iter(self.publications)

    @cached_property
    def by_id(self) -> dict[str, Publication]:
        return {p.id: p for p in self.publications}

    def to_records(self) -> list[dict]:
        return [p.to_dict() for p in self.publications]

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "Corpus":
        return cls(tuple(Publication.from_dict(r) for r in records))


@dataclass(frozen=True)
class CsvConfig:
    """Column mapping for :func:`parse_corpus`.

    Optional columns (abstract, authors, venue, date, doi) may be missing
    from the header; the corresponding fields are then left empty.
    ``skip_invalid`` drops offending rows with a warning instead of aborting,
    which real-world dumps with missing ids usually need.
    """

    id: str = "pubmed_id"
    title: str = "title"
    abstract: Optional[str] = "abstract"
    authors: Optional[str] = "authors"
    venue: Optional[str] = "journal"
    date: Optional[str] = "publish_time"
    doi: Optional[str] = "doi"
    author_separator: str = ";"
    skip_invalid: bool = False


def extract_year(value: Optional[str]) -> Optional[int]:
    """First standalone 4-digit token of a date string, or None."""
    if not value:
        return None
    m = _YEAR_TOKEN.search(value)
    return int(m.group(1)) if m else None


def split_authors(value: Optional[str], separator: str = ";") -> tuple[str, ...]:
    if not value:
        return ()
    names = (normalize_name(part) for part in value.split(separator))
    return tuple(n for n in names if n)


def parse_corpus(source: TextIO | str, config: CsvConfig = CsvConfig()) -> Corpus:
    """Parse a metadata CSV stream into a :class:`Corpus`.

    Raises MissingColumnError if the id or title column is absent from the
    header, MalformedRowError (with the 1-based line number) for rows with
    the wrong field count, an empty id/title or an implausible year, and
    DuplicateIdError when an id repeats.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumnError(config.id) from None
    header = [h.strip().lstrip("﻿") for h in header]
    position = {name: i for i, name in enumerate(header)}
    for required in (config.id, config.title):
        if required not in position:
            raise MissingColumnError(required)

    def col(row, name):
        if name is None or name not in position:
            return None
        return row[position[name]]

    pubs: list[Publication] = []
    seen: dict[str, int] = {}
    skipped = 0
    last_line = reader.line_num
    while True:
        line = last_line + 1
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise MalformedRowError(line, str(exc)) from None
        last_line = reader.line_num
        if not row:
            continue
        try:
            if len(row) != len(header):
                raise MalformedRowError(
                    line, f"expected {len(header)} fields, got {len(row)}")
            pub_id = _clean(col(row, config.id))
            title = _clean(col(row, config.title))
            if pub_id is None:
                raise MalformedRowError(line, "empty id")
            if title is None:
                raise MalformedRowError(line, "empty title")
            year = extract_year(col(row, config.date))
            if year is not None and not YEAR_MIN <= year <= YEAR_MAX:
                raise MalformedRowError(line, f"year {year} out of range")
            if pub_id in seen:
                raise DuplicateIdError(pub_id, line)
        except (MalformedRowError, DuplicateIdError):
            if not config.skip_invalid:
                raise
            skipped += 1
            continue
        venue = _clean(col(row, config.venue))
        seen[pub_id] = line
        pubs.append(Publication(
            id=pub_id,
            title=title,
            abstract=_clean(col(row, config.abstract)),
            authors=split_authors(col(row, config.authors), config.author_separator),
            venue=normalize_name(venue) if venue else None,
            year=year,
            doi=_clean(col(row, config.doi)),
        ))
    if skipped:
        log.warning("skipped %d invalid rows", skipped)
    return Corpus(tuple(pubs))


def read_corpus(path, config: CsvConfig = CsvConfig()) -> Corpus:
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_corpus(fh, config)


@dataclass(frozen=True)
class StatsReport:
    publication_count: int = 0
    abstract_count: int = 0
    abstract_fraction: float = 0.0
    author_count: int = 0
    authors_at_least_2: int = 0
    authors_at_least_10: int = 0
    venue_count: int = 0
    venues_at_least_2: int = 0
    venues_at_least_10: int = 0
    year_count: int = 0
    mean_authors_per_publication: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def _entity_keys(pub: Publication, field_name: str) -> set:
    if field_name == "author":
        return set(pub.authors)
    if field_name == "venue":
        return {pub.venue} if pub.venue else set()
    if field_name == "year":
        return {pub.year} if pub.year is not None else set()
    raise ValueError(f"unknown entity field {field_name!r}")


def entity_counts(corpus: Corpus, field_name: str) -> Counter:
    """Number of publications each author/venue/year appears in."""
    counts: Counter = Counter()
    for pub in corpus:
        counts.update(_entity_keys(pub, field_name))
    return counts


def corpus_stats(corpus: Corpus) -> StatsReport:
    n = len(corpus)
    if n == 0:
        return StatsReport()
    authors = entity_counts(corpus, "author")
    venues = entity_counts(corpus, "venue")
    years = entity_counts(corpus, "year")
    abstracts = sum(1 for p in corpus if p.abstract is not None)
    slots = sum(len(p.authors) for p in corpus)
    return StatsReport(
        publication_count=n,
        abstract_count=abstracts,
        abstract_fraction=abstracts / n,
        author_count=len(authors),
        authors_at_least_2=sum(1 for c in authors.values() if c >= 2),
        authors_at_least_10=sum(1 for c in authors.values() if c >= 10),
        venue_count=len(venues),
        venues_at_least_2=sum(1 for c in venues.values() if c >= 2),
        venues_at_least_10=sum(1 for c in venues.values() if c >= 10),
        year_count=len(years),
        mean_authors_per_publication=slots / n,
    )


def top_entities(corpus: Corpus, field: str, min_count: int = 1) -> list[tuple]:
    """Rank authors, venues or years by publication count.

    Sorted by count descending, then by entity ascending.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    counts = entity_counts(corpus, field)
    ranked = [(e, c) for e, c in counts.items() if c >= min_count]
    ranked.sort(key=lambda ec: (-ec[1], ec[0]))
    return ranked
