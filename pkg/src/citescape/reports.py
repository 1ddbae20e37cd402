"""Per-cluster summary reports shared by the CLI and the HTTP service."""

from __future__ import annotations

from . import explore
from .citnet import CitationNetwork
from .cluster import ClusteringSolution
from .corpus import Corpus
from .terms import TermOccurrences, characteristic_terms


def publication_brief(corpus: Corpus, handle: int, citations: int | None = None) -> dict:
    pub = corpus.publications[handle]
    return {
        "id": pub.id,
        "title": pub.title,
        "authors": list(pub.authors),
        "journal": pub.journal,
        "year": pub.year,
        "citations": citations,
    }


def top_journals(corpus: Corpus, members: list[int], k: int = 3) -> list[dict]:
    counts: dict[str, list] = {}
    for handle in members:
        journal = corpus.publications[handle].journal
        key = journal.strip().casefold()
        entry = counts.setdefault(key, [journal, 0])
        entry[1] += 1
    ranked = sorted(counts.values(), key=lambda e: (-e[1], e[0]))
    return [{"journal": j, "count": c} for j, c in ranked[:k]]


def most_cited(corpus: Corpus, network: CitationNetwork, members: list[int]) -> dict | None:
    """The member receiving the most citations from inside the member set."""
    if not members:
        return None
    member_set = set(members)
    top = explore.top_cited(network, member_set, limit=1)[0]
    citations = sum(1 for citing in network.in_neighbors[top] if citing in member_set)
    return publication_brief(corpus, top, citations)


def cluster_summary(corpus: Corpus, network: CitationNetwork,
                    solution: ClusteringSolution, cluster_id: int,
                    occ: TermOccurrences, top_k: int = 5) -> dict:
    """Summary of one cluster; cluster_id is 1-based as in exports."""
    members = [
        h for h, label in enumerate(solution.assignment.x) if label == cluster_id - 1
    ]
    ranked = characteristic_terms(occ, members, k=top_k)
    return {
        "id": cluster_id,
        "size": len(members),
        "terms": [{"term": t, "score": s} for t, s in ranked],
        "journals": top_journals(corpus, members),
        "most_cited": most_cited(corpus, network, members),
    }


def level_summary(corpus: Corpus, network: CitationNetwork,
                  solution: ClusteringSolution, occ: TermOccurrences,
                  top_k: int = 5) -> dict:
    return {
        "schema_version": "1",
        "level": solution.level,
        "clusters": [
            cluster_summary(corpus, network, solution, cid, occ, top_k)
            for cid in range(1, solution.assignment.k + 1)
        ],
    }
