"""Shared builders and independent oracles for the test suite."""

from __future__ import annotations

import random

import pytest

from citescape.citnet import CitationNetwork, build_network, topological_order
from citescape.cluster import UNASSIGNED, RelatednessMatrix
from citescape.corpus import Corpus, LoadReport, Publication


def make_corpus(records, pairs):
    """records: (id, year) or (id, year, title) or full publication dicts."""
    publications = []
    for rec in records:
        if isinstance(rec, dict):
            publications.append(Publication(
                id=rec["id"],
                title=rec.get("title", rec["id"]),
                authors=tuple(rec.get("authors", ("Doe, J.",))),
                journal=rec.get("journal", "journal"),
                year=rec["year"],
                abstract=rec.get("abstract"),
            ))
        else:
            pub_id, year = rec[0], rec[1]
            title = rec[2] if len(rec) > 2 else pub_id
            publications.append(Publication(
                id=pub_id, title=title, authors=("Doe, J.",),
                journal="journal", year=year,
            ))
    id_index = {p.id: i for i, p in enumerate(publications)}
    handle_pairs = [(id_index[a], id_index[b]) for a, b in pairs]
    return Corpus(publications, handle_pairs, id_index,
                  LoadReport(len(publications), len(handle_pairs), 0))


def network_from_pairs(n, undirected_pairs, years=None) -> CitationNetwork:
    """A clean acyclic network: the newer node cites the older, handle breaks ties."""
    if years is None:
        years = [2000 + min(i, 99) for i in range(n)]
    records = [(f"P{i:05d}", years[i]) for i in range(n)]
    pairs = []
    for a, b in undirected_pairs:
        citing, cited = (a, b) if (years[a], a) >= (years[b], b) else (b, a)
        pairs.append((records[citing][0], records[cited][0]))
    corpus = make_corpus(records, pairs)
    network = build_network(corpus)
    assert not network.removed_log
    return network


def random_network(rng: random.Random, n: int, p: float) -> CitationNetwork:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return network_from_pairs(n, edges)


def assert_acyclic(network: CitationNetwork):
    order = topological_order(network)
    assert sorted(order) == list(range(network.n))


# --- independent oracles -----------------------------------------------------

def naive_quality(labels, rel: RelatednessMatrix, gamma: float, *, with_diagonal=False):
    """Dense double loop over all ordered pairs, straight off the definition."""
    n = rel.n
    dense = [[0.0] * n for _ in range(n)]
    for i, j, a in rel.entries():
        dense[i][j] = a
    q = 0.0
    for i in range(n):
        for j in range(n):
            if i == j and not with_diagonal:
                continue
            if labels[i] != UNASSIGNED and labels[i] == labels[j]:
                q += dense[i][j] - gamma / (2.0 * n)
    return q


def iter_partitions(n):
    """All set partitions of range(n) as label vectors, lex order."""
    labels = [0] * n

    def rec(i, used):
        if i == n:
            yield labels.copy()
            return
        for c in range(used + 1):
            labels[i] = c
            yield from rec(i + 1, used + (1 if c == used else 0))

    if n == 0:
        yield []
    else:
        yield from rec(1, 1)


def brute_force_best(rel: RelatednessMatrix, gamma: float):
    """Independent exhaustive maximizer; returns (labels, quality)."""
    best_q = None
    best = None
    for labels in iter_partitions(rel.n):
        q = naive_quality(labels, rel, gamma)
        if best_q is None or q > best_q:
            best_q = q
            best = labels
    return best, best_q


TOPIC_VOCAB = {
    0: ["galaxy", "cluster", "redshift", "survey", "lensing", "halo", "quasar",
        "starburst", "merger", "luminosity"],
    1: ["solar", "flare", "corona", "sunspot", "plasma", "wind", "heliosphere",
        "magnetograph", "prominence", "chromosphere"],
    2: ["pulsar", "magnetar", "neutron", "binary", "timing", "glitch",
        "supernova", "remnant", "accretion", "xray"],
}


def write_demo_corpus(dirpath, seed=0, n_per_topic=40):
    """Three-topic synthetic corpus files; returns (pubs_path, cits_path)."""
    import json as _json

    rng = random.Random(seed)
    records = []
    for topic, vocab in TOPIC_VOCAB.items():
        for i in range(n_per_topic):
            idx = topic * n_per_topic + i
            words = rng.sample(vocab, 4)
            abstract_words = [rng.choice(vocab) for _ in range(25)]
            records.append({
                "id": f"T{topic}P{i:03d}",
                "title": " ".join(words).capitalize(),
                "abstract": "We study the " + " ".join(abstract_words) + ".",
                "authors": [f"Author{idx % 17}, {chr(65 + idx % 26)}."],
                "journal": f"Journal of Topic {topic}",
                "year": 2003 + (i * 8) // n_per_topic,
            })
    pairs = []
    for topic in TOPIC_VOCAB:
        base = topic * n_per_topic
        for i in range(1, n_per_topic):
            citing = records[base + i]["id"]
            n_refs = 1 + rng.randrange(3)
            for _ in range(n_refs):
                cited = records[base + rng.randrange(i)]["id"]
                pairs.append((citing, cited))
        # a couple of weak cross-topic links keep the network connected
        other = (topic + 1) % len(TOPIC_VOCAB)
        pairs.append((records[base + n_per_topic - 1]["id"],
                      records[other * n_per_topic]["id"]))
    # noise the network build must clean up
    pairs.append((records[0]["id"], records[0]["id"]))
    pairs.append(pairs[0])
    pairs.append((records[0]["id"], records[n_per_topic - 1]["id"]))

    pubs_path = dirpath / "input_publications.jsonl"
    cits_path = dirpath / "input_citations.tsv"
    with open(pubs_path, "w", encoding="utf-8") as out:
        for rec in records:
            out.write(_json.dumps(rec) + "\n")
    with open(cits_path, "w", encoding="utf-8") as out:
        for citing, cited in pairs:
            out.write(f"{citing}\t{cited}\n")
    return pubs_path, cits_path


@pytest.fixture(scope="session")
def demo_data_dir(tmp_path_factory):
    """A fully built artifact directory over the demo corpus."""
    from citescape.cli import cli_run

    workdir = tmp_path_factory.mktemp("demo")
    pubs, cits = write_demo_corpus(workdir)
    data_dir = workdir / "data"
    base = ["--data-dir", str(data_dir)]
    assert cli_run(base + ["ingest", "--publications", str(pubs),
                           "--citations", str(cits)]) == 0
    assert cli_run(base + ["network"]) == 0
    assert cli_run(base + ["cluster", "--gamma", "1.0", "--gamma", "4.0",
                           "--min-size", "5", "--min-size", "3",
                           "--seed", "11", "--restarts", "5"]) == 0
    return data_dir


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def adjusted_rand_index(labels_a, labels_b):
    assert len(labels_a) == len(labels_b)
    pairs = list(zip(labels_a, labels_b))
    n = len(pairs)

    def comb2(x):
        return x * (x - 1) // 2

    from collections import Counter
    contingency = Counter(pairs)
    a_counts = Counter(labels_a)
    b_counts = Counter(labels_b)
    sum_ij = sum(comb2(c) for c in contingency.values())
    sum_a = sum(comb2(c) for c in a_counts.values())
    sum_b = sum(comb2(c) for c in b_counts.values())
    expected = sum_a * sum_b / comb2(n)
    max_index = (sum_a + sum_b) / 2.0
    if max_index == expected:
        return 1.0
    return (sum_ij - expected) / (max_index - expected)


def planted_partition_network(rng: random.Random, n_blocks: int, block_size: int,
                              within_edges_per_block: int, cross_edges: int):
    """Random blocks with planted labels; returns (network, labels)."""
    n = n_blocks * block_size
    edges = set()
    for b in range(n_blocks):
        lo = b * block_size
        block_edges = set()
        while len(block_edges) < within_edges_per_block:
            u = rng.randrange(lo, lo + block_size)
            v = rng.randrange(lo, lo + block_size)
            if u != v:
                block_edges.add((min(u, v), max(u, v)))
        edges.update(block_edges)
    crossed = 0
    while crossed < cross_edges:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v and u // block_size != v // block_size:
            key = (min(u, v), max(u, v))
            if key not in edges:
                edges.add(key)
                crossed += 1
    labels = [i // block_size for i in range(n)]
    return network_from_pairs(n, sorted(edges)), labels
