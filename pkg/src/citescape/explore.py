"""Publication-level exploration: top-cited slices, drill-down, search,
indirect citation relations, and timeline coordinates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import layout
from .citnet import CitationNetwork, ComponentLabeling
from .cluster import UNASSIGNED, ClusteringSolution
from .corpus import Corpus
from .errors import EmptyDrillError, InputError

INDIRECT_WEIGHT = 0.5


@dataclass(frozen=True)
class DrillContext:
    """Immutable snapshot of a drill-down state."""

    path: tuple[tuple[int, frozenset[int]], ...]  # (level, cluster ids)
    active_set: frozenset[int]


@dataclass(frozen=True)
class NetworkSlice:
    members: tuple[int, ...]
    direct_edges: tuple[tuple[int, int], ...]  # (citing, cited)
    indirect_edges: tuple[tuple[int, int], ...]  # oriented along the hidden path
    timeline: tuple[tuple[float, int], ...]  # (x, year) per member


def initial_context(comp: ComponentLabeling) -> DrillContext:
    """The undrilled scope: every member of the largest component."""
    if comp.largest is None:
        return DrillContext((), frozenset())
    return DrillContext((), frozenset(comp.members(comp.largest)))


def drill_down(context: DrillContext, solution: ClusteringSolution,
               cluster_ids: Iterable[int]) -> DrillContext:
    """Intersect the active set with the union of the chosen clusters."""
    ids = set(cluster_ids)
    if not ids:
        raise InputError("drill-down needs at least one cluster id")
    for cid in ids:
        if not 0 <= cid < solution.assignment.k:
            raise InputError(f"cluster id {cid} not in solution level {solution.level}")
    chosen = {
        node for node, label in enumerate(solution.assignment.x) if label in ids
    }
    active = context.active_set & chosen
    if not active:
        raise EmptyDrillError("selected clusters share no publications with the current scope")
    step = (solution.level, frozenset(ids))
    return DrillContext(context.path + (step,), frozenset(active))


def top_cited(network: CitationNetwork, scope: Iterable[int], limit: int = 100) -> list[int]:
    """Members of scope ranked by citations received from inside scope.

    Ties go to the older publication, then the lower handle.
    """
    members = set(scope)
    if not members:
        raise InputError("top_cited needs a nonempty scope")
    counts = {node: 0 for node in members}
    for citing, cited in network.edges:
        if citing in members and cited in members:
            counts[cited] += 1
    ranked = sorted(members, key=lambda v: (-counts[v], network.years[v], v))
    return ranked[:limit]


def search(corpus: Corpus, *, title_substring: str | None = None,
           year_range: tuple[int | None, int | None] | None = None,
           author_substring: str | None = None,
           journal_substring: str | None = None) -> list[int]:
    """Conjunctive case-insensitive substring search, sorted by year then handle."""
    if (title_substring is None and year_range is None
            and author_substring is None and journal_substring is None):
        raise InputError("search needs at least one criterion")
    title_q = title_substring.casefold() if title_substring is not None else None
    author_q = author_substring.casefold() if author_substring is not None else None
    journal_q = journal_substring.casefold() if journal_substring is not None else None
    hits = []
    for handle, pub in enumerate(corpus.publications):
        if title_q is not None and title_q not in pub.title.casefold():
            continue
        if journal_q is not None and journal_q not in pub.journal.casefold():
            continue
        if author_q is not None and not any(
            author_q in a.casefold() for a in pub.authors
        ):
            continue
        if year_range is not None:
            lo, hi = year_range
            if lo is not None and pub.year < lo:
                continue
            if hi is not None and pub.year > hi:
                continue
        hits.append(handle)
    hits.sort(key=lambda h: (corpus.publications[h].year, h))
    return hits


def indirect_relations(network: CitationNetwork, members: Iterable[int],
                       max_hops: int = 2) -> list[tuple[int, int]]:
    """Member pairs (a, b) with no direct edge but a directed path a -> b of
    at most max_hops whose intermediate nodes all lie outside members."""
    member_set = set(members)
    for node in member_set:
        if not 0 <= node < network.n:
            raise InputError(f"handle {node} outside the network")
    pairs = []
    for start in sorted(member_set):
        frontier = [start]
        seen = {start}
        for _ in range(max_hops):
            nxt = []
            for node in frontier:
                for succ in network.out_neighbors[node]:
                    if succ in seen:
                        continue
                    seen.add(succ)
                    if succ in member_set:
                        if (
                            not network.has_edge(start, succ)
                            and not network.has_edge(succ, start)
                        ):
                            pairs.append((start, succ))
                        # members never serve as intermediate nodes
                        continue
                    nxt.append(succ)
            frontier = nxt
    return pairs


def timeline_layout(network: CitationNetwork, slice_members: Sequence[int], *,
                    max_hops: int = 2, indirect_weight: float = INDIRECT_WEIGHT,
                    seed: int = 0) -> NetworkSlice:
    """Timeline coordinates: y is the year, x a 1D embedding of the slice's
    direct (weight 1.0) plus indirect (weight 0.5) relation graph."""
    members = tuple(slice_members)
    member_set = set(members)
    if len(member_set) != len(members):
        raise InputError("slice members must be unique")
    index = {node: i for i, node in enumerate(members)}
    direct = tuple(
        (citing, cited) for citing, cited in network.edges
        if citing in member_set and cited in member_set
    )
    indirect = tuple(indirect_relations(network, member_set, max_hops))
    weights: dict[tuple[int, int], float] = {}
    for citing, cited in direct:
        a, b = index[citing], index[cited]
        key = (a, b) if a < b else (b, a)
        weights[key] = weights.get(key, 0.0) + 1.0
    for src, dst in indirect:
        a, b = index[src], index[dst]
        key = (a, b) if a < b else (b, a)
        weights[key] = weights.get(key, 0.0) + indirect_weight
    in_degree = [0.0] * len(members)
    for _, cited in direct:
        in_degree[index[cited]] += 1.0
    graph = layout.WeightedGraph(
        n=len(members),
        weights=weights,
        labels=tuple(str(node) for node in members),
        sizes=tuple(in_degree),
    )
    embedding = layout.vos_embed(graph, seed=seed, dim=1)
    timeline = tuple(
        (embedding.coordinates[i][0], network.years[node])
        for i, node in enumerate(members)
    )
    return NetworkSlice(members, direct, indirect, timeline)


def first_author_surname(pub) -> str:
    """Display label: surname of the first author, falling back to the id."""
    if not pub.authors:
        return pub.id
    name = pub.authors[0]
    if "," in name:
        return name.split(",", 1)[0].strip() or pub.id
    parts = name.strip().split()
    return parts[-1] if parts else pub.id


def slice_json(network_slice: NetworkSlice, corpus: Corpus,
               solution: ClusteringSolution | None = None) -> dict:
    pubs = corpus.publications
    members = []
    for i, node in enumerate(network_slice.members):
        pub = pubs[node]
        cluster = None
        if solution is not None and solution.assignment.x[node] != UNASSIGNED:
            cluster = solution.assignment.x[node] + 1
        members.append({
            "id": pub.id,
            "label": first_author_surname(pub),
            "year": pub.year,
            "x": network_slice.timeline[i][0],
            "cluster": cluster,
            "title": pub.title,
            "authors": list(pub.authors),
            "journal": pub.journal,
        })
    return {
        "schema_version": "1",
        "members": members,
        "direct": [[pubs[a].id, pubs[b].id] for a, b in network_slice.direct_edges],
        "indirect": [[pubs[a].id, pubs[b].id] for a, b in network_slice.indirect_edges],
    }
