"""Term extraction, characteristic terms per cluster, and term maps.

Terms are lowercased 1-3 token n-grams over title (and optionally abstract)
text, bounded away from stopwords at both ends. Occurrence is binary per
publication. A term equal to another term plus a trailing "s" is folded
into the shorter form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from . import layout
from .corpus import Corpus
from .errors import EmptyTermMapError, InputError
from .stopwords import STOPWORDS

TermFields = Literal["title", "title_and_abstract"]

_TOKEN_RE = re.compile(r"[a-z0-9]+")


@dataclass(frozen=True)
class TermOccurrences:
    vocabulary: tuple[str, ...]
    doc_ids: tuple[int, ...]
    doc_terms: tuple[frozenset[int], ...]
    term_doc_count: tuple[int, ...]

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def doc_index(self) -> dict[int, int]:
        return {doc: i for i, doc in enumerate(self.doc_ids)}


@dataclass(frozen=True)
class TermMap:
    terms: tuple[str, ...]
    occurrences: tuple[int, ...]
    relevance: tuple[float, ...]
    term_clusters: tuple[int, ...]
    coordinates: tuple[tuple[float, float], ...]
    links: dict[tuple[int, int], int]  # keys (i, j) with i < j, count > 0

    def cooccurrence(self, i: int, j: int) -> int:
        if i == j:
            return self.occurrences[i]
        key = (i, j) if i < j else (j, i)
        return self.links.get(key, 0)


def _tokens(text: str) -> list[str]:
    """Alphanumeric tokens, dropping single characters and pure numbers."""
    return [
        t for t in _TOKEN_RE.findall(text.lower())
        if len(t) > 1 and not t.isdigit()
    ]


def _ngrams(tokens: Sequence[str]) -> Iterable[str]:
    for i in range(len(tokens)):
        if tokens[i] in STOPWORDS:
            continue
        for length in range(1, 4):
            if i + length > len(tokens):
                break
            if tokens[i + length - 1] in STOPWORDS:
                continue
            yield " ".join(tokens[i:i + length])


def _fold_plural(term: str, vocabulary: set[str]) -> str:
    while term.endswith("s") and term[:-1] in vocabulary:
        term = term[:-1]
    return term


def extract_terms(corpus: Corpus, subset: Iterable[int],
                  fields: TermFields = "title") -> TermOccurrences:
    """Binary per-publication term occurrences over the given publications."""
    doc_ids = sorted(set(subset))
    if not doc_ids:
        raise InputError("term extraction needs a nonempty publication subset")
    if fields not in ("title", "title_and_abstract"):
        raise InputError(f"unknown fields selector {fields!r}")
    raw_doc_terms: list[set[str]] = []
    for handle in doc_ids:
        pub = corpus.publications[handle]
        texts = [pub.title]
        if fields == "title_and_abstract" and pub.abstract:
            texts.append(pub.abstract)
        terms: set[str] = set()
        for text in texts:
            terms.update(_ngrams(_tokens(text)))
        raw_doc_terms.append(terms)

    seen = set()
    for terms in raw_doc_terms:
        seen.update(terms)
    folded_doc_terms = [{_fold_plural(t, seen) for t in terms} for terms in raw_doc_terms]

    vocabulary = tuple(sorted(set().union(*folded_doc_terms) if folded_doc_terms else set()))
    index = {t: i for i, t in enumerate(vocabulary)}
    doc_term_ids = tuple(frozenset(index[t] for t in terms) for terms in folded_doc_terms)
    counts = [0] * len(vocabulary)
    for term_ids in doc_term_ids:
        for t in term_ids:
            counts[t] += 1
    return TermOccurrences(vocabulary, tuple(doc_ids), doc_term_ids, tuple(counts))


def characteristic_terms(occ: TermOccurrences, cluster_docs: Iterable[int],
                         k: int = 5) -> list[tuple[str, float]]:
    """Top-k terms over-represented in the cluster relative to the corpus.

    score(t) = (df_cluster / cluster size) / (df_corpus / corpus size),
    restricted to terms found in at least 3 cluster publications. Clusters
    with fewer than 3 publications yield an empty list.
    """
    index = occ.doc_index()
    docs = sorted(set(cluster_docs))
    for doc in docs:
        if doc not in index:
            raise InputError(f"publication handle {doc} not covered by the term index")
    if len(docs) < 3:
        return []
    df_cluster: dict[int, int] = {}
    for doc in docs:
        for t in occ.doc_terms[index[doc]]:
            df_cluster[t] = df_cluster.get(t, 0) + 1
    n_all = occ.n_docs
    n_cluster = len(docs)
    scored = []
    for t, dfc in df_cluster.items():
        if dfc < 3:
            continue
        score = (dfc / n_cluster) / (occ.term_doc_count[t] / n_all)
        scored.append((occ.vocabulary[t], score, dfc))
    scored.sort(key=lambda item: (-item[1], -item[2], item[0]))
    return [(term, score) for term, score, _ in scored[:k]]


def build_term_map(occ: TermOccurrences, min_occurrences: int = 15,
                   relevance_fraction: float = 0.6, *,
                   gamma: float = 1.0, seed: int = 0) -> TermMap:
    """Select, score, cluster, and lay out the terms of one publication set.

    Terms below min_occurrences are dropped. Survivors are scored by how far
    their normalized co-occurrence profile sits from the mean profile (cosine
    distance); the top relevance_fraction stay. Term groups come from the
    clustering machinery on association-strength weights; coordinates from
    the map embedding.
    """
    if not 0 < relevance_fraction <= 1:
        raise InputError("relevance_fraction must be in (0, 1]")
    survivors = [t for t, c in enumerate(occ.term_doc_count) if c >= min_occurrences]
    if not survivors:
        raise EmptyTermMapError(
            f"no term occurs in at least {min_occurrences} publications"
        )
    pos = {t: i for i, t in enumerate(survivors)}
    m = len(survivors)
    cooc: dict[tuple[int, int], int] = {}
    for term_ids in occ.doc_terms:
        present = sorted(pos[t] for t in term_ids if t in pos)
        for a_i, a in enumerate(present):
            for b in present[a_i + 1:]:
                cooc[(a, b)] = cooc.get((a, b), 0) + 1

    relevance = _relevance_scores(m, cooc)
    keep_count = max(1, int(m * relevance_fraction + 0.5))
    order = sorted(range(m), key=lambda i: (-relevance[i], occ.vocabulary[survivors[i]]))
    kept = sorted(order[:keep_count])
    remap = {old: new for new, old in enumerate(kept)}

    terms = tuple(occ.vocabulary[survivors[i]] for i in kept)
    occurrences = tuple(occ.term_doc_count[survivors[i]] for i in kept)
    scores = tuple(relevance[i] for i in kept)
    links = {
        (remap[a], remap[b]): c
        for (a, b), c in cooc.items()
        if a in remap and b in remap
    }

    graph = layout.WeightedGraph(
        n=len(kept),
        weights={key: float(c) for key, c in links.items()},
        labels=terms,
        sizes=tuple(float(o) for o in occurrences),
    )
    groups = layout.meta_cluster(graph, gamma=gamma, seed=seed)
    embedding = layout.vos_embed(graph, seed=seed)
    coordinates = tuple((p[0], p[1]) for p in embedding.coordinates)
    return TermMap(
        terms=terms,
        occurrences=occurrences,
        relevance=scores,
        term_clusters=tuple(groups.x),
        coordinates=coordinates,
        links=links,
    )


def _relevance_scores(m: int, cooc: dict[tuple[int, int], int]) -> list[float]:
    """Cosine distance of each term's normalized co-occurrence profile from
    the mean profile. Terms that co-occur with nothing score 0."""
    profiles = [[0.0] * m for _ in range(m)]
    for (a, b), c in cooc.items():
        profiles[a][b] = float(c)
        profiles[b][a] = float(c)
    norm_profiles = []
    for row in profiles:
        total = math.fsum(row)
        norm_profiles.append([v / total for v in row] if total > 0 else row)
    mean = [math.fsum(col) / m for col in zip(*norm_profiles)] if m else []
    mean_norm = math.sqrt(math.fsum(v * v for v in mean))
    scores = []
    for row in norm_profiles:
        row_norm = math.sqrt(math.fsum(v * v for v in row))
        if row_norm == 0 or mean_norm == 0:
            scores.append(0.0)
            continue
        cos = math.fsum(a * b for a, b in zip(row, mean)) / (row_norm * mean_norm)
        scores.append(1.0 - cos)
    return scores


def term_map_json(tm: TermMap) -> dict:
    return {
        "schema_version": "1",
        "terms": [
            {
                "label": tm.terms[i],
                "occurrences": tm.occurrences[i],
                "relevance": tm.relevance[i],
                "cluster": tm.term_clusters[i] + 1,
                "x": tm.coordinates[i][0],
                "y": tm.coordinates[i][1],
            }
            for i in range(len(tm.terms))
        ],
        "links": [
            {"a": a, "b": b, "cooccurrences": c}
            for (a, b), c in sorted(tm.links.items())
        ],
    }
