"""Keyphrase mining and graph analysis over publication metadata."""
from .corpus import (Corpus, CsvConfig, Publication, StatsReport, corpus_stats,
                     parse_corpus, read_corpus, top_entities)
from .errors import (DuplicateIdError, EmptySelectionError, MalformedRowError,
                     MissingColumnError, NoYearDataError, PubmineError, UnknownTermError)
from .graph import (BipartiteGraph, Community, CooccurrenceGraph, build_cooccurrence,
                    detect_communities, export_graph, from_json, modularity)
from .keyphrase import (ExtractionConfig, KeyphraseIndex, Posting, build_index,
                        extract_ngrams, seed_lexicon, tokenize)
from .latest import (LatestConfig, LatestTerm, community_publication_graph, latest_terms,
                     latest_topic_graph)
from .topic_focus import (TopicSelection, multi_term_publications, select_topic_terms,
                          term_author_graph, term_publication_graph)

__version__ = "0.1.0"
