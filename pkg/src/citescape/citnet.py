"""Acyclic citation network construction and component structure.

Cleaning happens in three deterministic phases: self citations and duplicate
pairs go first, then edges whose citing publication is older than the cited
one, and finally a cycle-breaking pass over the survivors. Every removal is
logged with its reason so kept + removed always equals the input pair count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Corpus
from .errors import CitescapeError

REASON_SELF_CITATION = "self_citation"
REASON_DUPLICATE = "duplicate"
REASON_YEAR = "year_inconsistent"
REASON_CYCLE = "cycle_breaking"

REMOVAL_REASONS = (REASON_SELF_CITATION, REASON_DUPLICATE, REASON_YEAR, REASON_CYCLE)


@dataclass(frozen=True)
class NetworkStats:
    n_nodes: int
    n_edges: int
    n_removed_by_reason: dict[str, int]


@dataclass(frozen=True)
class ComponentLabeling:
    component_of: tuple[int, ...]
    sizes: tuple[int, ...]
    largest: int | None

    def members(self, component: int) -> list[int]:
        return [v for v, c in enumerate(self.component_of) if c == component]


@dataclass(frozen=True)
class CitationNetwork:
    """Acyclic directed citation graph over publication handles."""

    n: int
    years: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]  # (citing, cited), sorted ascending
    removed_log: tuple[tuple[tuple[int, int], str], ...]
    neighbors: tuple[tuple[int, ...], ...]  # undirected view, sorted
    out_neighbors: tuple[tuple[int, ...], ...]
    in_neighbors: tuple[tuple[int, ...], ...]
    edge_set: frozenset[tuple[int, int]] = field(repr=False)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def has_edge(self, citing: int, cited: int) -> bool:
        return (citing, cited) in self.edge_set


def _assemble(n: int, years: Sequence[int], kept: list[tuple[int, int]],
              removed: list[tuple[tuple[int, int], str]]) -> CitationNetwork:
    kept_sorted = sorted(kept)
    und: list[set[int]] = [set() for _ in range(n)]
    outs: list[list[int]] = [[] for _ in range(n)]
    ins: list[list[int]] = [[] for _ in range(n)]
    for u, v in kept_sorted:
        und[u].add(v)
        und[v].add(u)
        outs[u].append(v)
        ins[v].append(u)
    return CitationNetwork(
        n=n,
        years=tuple(years),
        edges=tuple(kept_sorted),
        removed_log=tuple(removed),
        neighbors=tuple(tuple(sorted(s)) for s in und),
        out_neighbors=tuple(tuple(sorted(o)) for o in outs),
        in_neighbors=tuple(tuple(sorted(i)) for i in ins),
        edge_set=frozenset(kept_sorted),
    )


def build_network(corpus: Corpus) -> CitationNetwork:
    """Build the acyclic, year-consistent citation network of a corpus."""
    n = corpus.n
    years = [p.year for p in corpus.publications]
    removed: list[tuple[tuple[int, int], str]] = []

    # Phase 1: self citations and duplicate ordered pairs, in input order.
    seen: set[tuple[int, int]] = set()
    deduped: list[tuple[int, int]] = []
    for pair in corpus.citation_pairs:
        citing, cited = pair
        if citing == cited:
            removed.append((pair, REASON_SELF_CITATION))
        elif pair in seen:
            removed.append((pair, REASON_DUPLICATE))
        else:
            seen.add(pair)
            deduped.append(pair)

    # Phase 2: a citing publication must not be older than the cited one.
    aligned: list[tuple[int, int]] = []
    for pair in deduped:
        citing, cited = pair
        if years[citing] < years[cited]:
            removed.append((pair, REASON_YEAR))
        else:
            aligned.append(pair)

    # Phase 3: cycle breaking. Remaining cycles can only run through
    # same-year publications, so candidate edges are added in ascending
    # (citing, cited) order and an edge is discarded when the cited node
    # already reaches the citing node through same-year edges.
    kept: list[tuple[int, int]] = []
    out_adj: list[list[int]] = [[] for _ in range(n)]
    for pair in sorted(aligned):
        citing, cited = pair
        if years[citing] == years[cited] and _reaches_same_year(
            out_adj, years, start=cited, target=citing
        ):
            removed.append((pair, REASON_CYCLE))
        else:
            kept.append(pair)
            out_adj[citing].append(cited)

    return _assemble(n, years, kept, removed)


def _reaches_same_year(out_adj: list[list[int]], years: list[int], start: int, target: int) -> bool:
    year = years[start]
    stack = [start]
    visited = {start}
    while stack:
        node = stack.pop()
        if node == target:
            return True
        for nxt in out_adj[node]:
            if years[nxt] == year and nxt not in visited:
                visited.add(nxt)
                stack.append(nxt)
    return False


def components(network: CitationNetwork) -> ComponentLabeling:
    """Weakly connected components; largest ties break on smallest member handle."""
    comp = [-1] * network.n
    sizes: list[int] = []
    for start in range(network.n):
        if comp[start] != -1:
            continue
        cid = len(sizes)
        comp[start] = cid
        stack = [start]
        size = 0
        while stack:
            node = stack.pop()
            size += 1
            for nxt in network.neighbors[node]:
                if comp[nxt] == -1:
                    comp[nxt] = cid
                    stack.append(nxt)
        sizes.append(size)
    largest: int | None = None
    if sizes:
        best = max(sizes)
        largest = sizes.index(best)  # first occurrence has the smallest min handle
    return ComponentLabeling(tuple(comp), tuple(sizes), largest)


def network_stats(network: CitationNetwork) -> NetworkStats:
    counts = {reason: 0 for reason in REMOVAL_REASONS}
    for _, reason in network.removed_log:
        counts[reason] += 1
    return NetworkStats(
        n_nodes=network.n,
        n_edges=len(network.edges),
        n_removed_by_reason=counts,
    )


def topological_order(network: CitationNetwork) -> list[int]:
    """Kahn's algorithm over the directed edges. Raises if a cycle remains."""
    indeg = [len(network.in_neighbors[v]) for v in range(network.n)]
    queue = [v for v in range(network.n) if indeg[v] == 0]
    order: list[int] = []
    while queue:
        node = queue.pop()
        order.append(node)
        for nxt in network.out_neighbors[node]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                queue.append(nxt)
    if len(order) != network.n:
        raise CitescapeError("citation network contains a directed cycle")
    return order


def induced_subnetwork(
    network: CitationNetwork, nodes: Iterable[int]
) -> tuple[CitationNetwork, list[int]]:
    """Subnetwork on the given nodes. Returns (subnetwork, handles) where
    handles[i] is the original handle of subnetwork node i."""
    handles = sorted(set(nodes))
    local = {h: i for i, h in enumerate(handles)}
    years = [network.years[h] for h in handles]
    kept = [
        (local[u], local[v])
        for u, v in network.edges
        if u in local and v in local
    ]
    sub = _assemble(len(handles), years, kept, [])
    return sub, handles


def export_edges_tsv(network: CitationNetwork, corpus: Corpus, path: str | Path) -> None:
    pubs = corpus.publications
    with open(path, "w", encoding="utf-8") as out:
        for citing, cited in network.edges:
            out.write(f"{pubs[citing].id}\t{pubs[cited].id}\n")


def export_removed_tsv(network: CitationNetwork, corpus: Corpus, path: str | Path) -> None:
    pubs = corpus.publications
    with open(path, "w", encoding="utf-8") as out:
        for (citing, cited), reason in network.removed_log:
            out.write(f"{pubs[citing].id}\t{pubs[cited].id}\t{reason}\n")
