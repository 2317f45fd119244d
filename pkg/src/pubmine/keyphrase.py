"""Keyphrase extraction and the keyphrase -> publication index.

Keyphrases are contiguous n-grams taken from stopword-free runs of tokens,
left unstemmed. Hyphenated tokens written by authors ("BAT-ORIGIN",
"ANTI-MALARIA") are kept whole by the tokenizer and always indexed as
unigram candidates, whatever the n-gram range.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Mapping, Optional

from .corpus import Corpus
from .errors import UnknownTermError

UNKNOWN_YEAR = "unknown"

# hyphen, non-breaking hyphen, figure dash, en dash
_HYPHEN_FOLD = str.maketrans({"‐": "-", "‑": "-", "‒": "-", "–": "-"})
_TOKEN = re.compile(r"[^\W_]+(?:-[^\W_]+)*")
_NUMERIC = re.compile(r"[\d-]+")


def load_stopwords(path=None) -> frozenset[str]:
    """Read a one-word-per-line stopword file; the bundled SMART list by default."""
    if path is None:
        text = resources.files("pubmine").joinpath("data/stopwords_smart.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = (line.strip().lower() for line in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))


@dataclass(frozen=True)
class ExtractionConfig:
    ngram_min: int = 1
    ngram_max: int = 3
    min_doc_frequency: int = 2
    stopwords: frozenset[str] = field(default_factory=load_stopwords)

    def __post_init__(self):
        if self.ngram_min < 1:
            raise ValueError("ngram_min must be >= 1")
        if self.ngram_max < self.ngram_min:
            raise ValueError("ngram_max must be >= ngram_min")
        if self.min_doc_frequency < 1:
            raise ValueError("min_doc_frequency must be >= 1")
        if not isinstance(self.stopwords, frozenset):
            object.__setattr__(self, "stopwords", frozenset(w.lower() for w in self.stopwords))

    def is_stopword(self, token: str) -> bool:
        return token.lower() in self.stopwords

    def to_dict(self) -> dict:
        return {
            "ngram_min": self.ngram_min,
            "ngram_max": self.ngram_max,
            "min_doc_frequency": self.min_doc_frequency,
            "stopwords": sorted(self.stopwords),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExtractionConfig":
        return cls(d["ngram_min"], d["ngram_max"], d["min_doc_frequency"],
                   frozenset(d["stopwords"]))


@dataclass(frozen=True)
class Keyphrase:
    text: str

    @property
    def token_count(self) -> int:
        return len(self.text.split(" "))


def tokenize(text: str) -> list[str]:
    """Uppercase word tokens, keeping internal hyphens, dropping numbers.

    >>> tokenize("Bat-origin CoV causing pneumonia.")
    ['BAT-ORIGIN', 'COV', 'CAUSING', 'PNEUMONIA']
    """
    text = text.translate(_HYPHEN_FOLD).upper()
    return [t for t in _TOKEN.findall(text) if not _NUMERIC.fullmatch(t)]


def normalized_text(text: str) -> str:
    return " ".join(tokenize(text))


def seed_lexicon(corpus: Corpus) -> set[str]:
    """Every hyphenated (composed) token found in titles and abstracts."""
    lexicon = set()
    for pub in corpus:
        for text in pub.text_fields():
            lexicon.update(t for t in tokenize(text) if "-" in t)
    return lexicon


def _runs(tokens: list[str], config: ExtractionConfig) -> Iterable[list[str]]:
    run: list[str] = []
    for tok in tokens:
        if config.is_stopword(tok):
            if run:
                yield run
            run = []
        else:
            run.append(tok)
    if run:
        yield run


def extract_ngrams(tokens: list[str], config: ExtractionConfig) -> Counter:
    """Multiset of n-grams (ngram_min..ngram_max) that never span a stopword."""
    grams: Counter = Counter()
    for run in _runs(tokens, config):
        for n in range(config.ngram_min, min(config.ngram_max, len(run)) + 1):
            for i in range(len(run) - n + 1):
                grams[" ".join(run[i:i + n])] += 1
    return grams


@dataclass(frozen=True)
class Posting:
    doc_ids: frozenset[str]
    count_by_year: Mapping[Optional[int], int]

    @property
    def total_count(self) -> int:
        return sum(self.count_by_year.values())

    @property
    def doc_frequency(self) -> int:
        return len(self.doc_ids)

    def to_dict(self) -> dict:
        years = {(UNKNOWN_YEAR if y is None else str(y)): c
                 for y, c in self.count_by_year.items()}
        return {"docs": sorted(self.doc_ids), "years": years, "total": self.total_count}

    @classmethod
    def from_dict(cls, d: dict) -> "Posting":
        years = {(None if y == UNKNOWN_YEAR else int(y)): c for y, c in d["years"].items()}
        posting = cls(frozenset(d["docs"]), years)
        if "total" in d and d["total"] != posting.total_count:
            raise ValueError("posting total does not match its per-year counts")
        return posting


def _year_key(y):
    return (y is None, y or 0)


@dataclass(frozen=True)
class KeyphraseIndex:
    """Keyphrase text -> :class:`Posting`, plus the year of every indexed document.

    ``doc_years`` covers all documents of the source corpus (phrases or not),
    which lets temporal filters count documents as well as occurrences.
    """

    entries: Mapping[str, Posting]
    config: ExtractionConfig = field(default_factory=ExtractionConfig)
    doc_years: Mapping[str, Optional[int]] = field(default_factory=dict)

    def __contains__(self, phrase) -> bool:
        return phrase in self.entries

    def __getitem__(self, phrase) -> Posting:
        try:
            return self.entries[phrase]
        except KeyError:
            raise UnknownTermError(phrase) from None

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def doc_frequency(self, phrase) -> int:
        return self[phrase].doc_frequency

    @cached_property
    def years(self) -> list[int]:
        ys = set()
        for posting in self.entries.values():
            ys.update(y for y in posting.count_by_year if y is not None)
        return sorted(ys)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "entries": {p: self.entries[p].to_dict() for p in sorted(self.entries)},
            "doc_years": {d: self.doc_years[d] for d in sorted(self.doc_years)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "KeyphraseIndex":
        return cls(
            entries={p: Posting.from_dict(v) for p, v in d["entries"].items()},
            config=ExtractionConfig.from_dict(d["config"]),
            doc_years=dict(d.get("doc_years", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "KeyphraseIndex":
        return cls.from_dict(json.loads(text))


def document_phrases(texts: Iterable[str], config: ExtractionConfig,
                     lexicon: Optional[set[str]] = None) -> Counter:
    """Phrase occurrences for one document.

    Each text field is scanned on its own so no n-gram straddles the
    title/abstract boundary.
    """
    grams: Counter = Counter()
    for text in texts:
        tokens = tokenize(text)
        grams += extract_ngrams(tokens, config)
        if config.ngram_min > 1:
            grams.update(t for t in tokens
                         if "-" in t and not config.is_stopword(t)
                         and (lexicon is None or t in lexicon))
    return grams


def build_index(corpus: Corpus, config: ExtractionConfig = None) -> KeyphraseIndex:
    config = config or ExtractionConfig()
    lexicon = seed_lexicon(corpus)
    docs: dict[str, set[str]] = {}
    counts: dict[str, Counter] = {}
    for pub in corpus:
        for phrase, n in document_phrases(pub.text_fields(), config, lexicon).items():
            docs.setdefault(phrase, set()).add(pub.id)
            counts.setdefault(phrase, Counter())[pub.year] += n
    entries = {}
    for phrase in sorted(docs):
        if len(docs[phrase]) < config.min_doc_frequency:
            continue
        by_year = counts[phrase]
        entries[phrase] = Posting(
            frozenset(docs[phrase]),
            {y: by_year[y] for y in sorted(by_year, key=_year_key)},
        )
    doc_years = {p.id: p.year for p in sorted(corpus, key=lambda p: p.id)}
    return KeyphraseIndex(entries, config, doc_years)


def prune(index: KeyphraseIndex, min_doc_frequency: int) -> KeyphraseIndex:
    """Drop entries below a (higher) document-frequency floor."""
    entries = {p: v for p, v in index.entries.items() if v.doc_frequency >= min_doc_frequency}
    return KeyphraseIndex(entries, index.config, index.doc_years)
