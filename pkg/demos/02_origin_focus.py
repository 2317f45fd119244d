"""
Following one topic: the ORIGIN family
======================================

Pick every indexed phrase containing a pattern, then see which papers and
which authors use them.
"""
from pathlib import Path

from pubmine import (build_index, export_graph, multi_term_publications, read_corpus,
                     select_topic_terms, term_author_graph, term_publication_graph)

CSV = Path(__file__).resolve().parents[1] / "tests" / "data" / "fixture.csv"
corpus = read_corpus(CSV)
index = build_index(corpus)

# %%
# Matching is a case-insensitive substring test, so "origin" also catches
# ORIGINALITY. Exclusions take care of such false friends.
selection = select_topic_terms(index, "origin", exclusions={"ORIGINALITY"})
for term, df in selection.matched:
    print(f"{df:3d}  {term}")

# %%
# Terms on one side, papers on the other. Papers linked to two or more
# terms are usually the ones comparing hypotheses.
papers = term_publication_graph(index, selection)
print(f"{len(papers.left)} terms, {len(papers.right)} papers, {len(papers.edges)} links")
print("papers with >= 2 terms:", multi_term_publications(index, selection, k=2))

# %%
# The author view weights each link by the number of papers an author
# wrote using that term.
authors = term_author_graph(corpus, index, selection)
heavy = sorted(((w, t, a) for (t, a), w in authors.edges.items()), reverse=True)[:5]
for w, t, a in heavy:
    print(f"{w}  {a} -- {t}")

# %%
# Any graph exports to DOT, GraphML or JSON. Render the DOT text with
# ``dot -Tsvg`` or open the GraphML file in Gephi.
print(export_graph(papers, "dot")[:300])
