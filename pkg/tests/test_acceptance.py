"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s`.
"""

import math
import random
import time
from contextlib import contextmanager

from fastapi.testclient import TestClient

from conftest import (
    adjusted_rand_index,
    assert_acyclic,
    make_corpus,
    network_from_pairs,
    planted_partition_network,
    random_network,
    write_demo_corpus,
)

from citescape.artifacts import load_artifacts
from citescape.cli import cli_run
from citescape.cluster import (
    UNASSIGNED,
    Assignment,
    ClusteringParams,
    ClusteringSolution,
    canonical_assignment,
    compute_relatedness,
    evaluate_quality,
    exact_optimize,
    merge_small_clusters,
    multilevel,
    optimize,
)
from citescape.citnet import build_network
from citescape.layout import WeightedGraph, vos_embed
from citescape.service import create_app
from citescape.terms import build_term_map, extract_terms


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\nACCEPTANCE {name}: FAIL")
        raise
    print(f"\nACCEPTANCE {name}: PASS")


def test_oracle_equivalence():
    with criterion("oracle equivalence (200 graphs x 4 gammas, >=95%, never exceeds)"):
        started = time.monotonic()
        rng = random.Random(2024)
        gammas = (0.5, 1.0, 2.0, 5.0)
        runs = 0
        attained = 0
        for _ in range(200):
            n = rng.randrange(3, 9)  # n <= 8
            rel = compute_relatedness(random_network(rng, n, 0.4))
            for gamma in gammas:
                exact = exact_optimize(rel, gamma)
                sol = optimize(rel, ClusteringParams(
                    gamma=gamma, seed=rng.randrange(1 << 30), restarts=10,
                ))
                assert sol.quality <= exact.quality + 1e-9, "optimizer beat the oracle"
                runs += 1
                if sol.quality >= exact.quality - 1e-9:
                    attained += 1
        elapsed = time.monotonic() - started
        assert attained / runs >= 0.95, f"attained only {attained}/{runs}"
        assert elapsed < 60.0, f"took {elapsed:.1f}s"


def test_hand_derived_quality_values():
    with criterion("hand-derived quality values (1e-12)"):
        pair = compute_relatedness(network_from_pairs(2, [(0, 1)]))
        q_pair = evaluate_quality(Assignment((0, 0), 1), pair, 1.0)
        assert abs(q_pair - 1.5) <= 1e-12

        path = compute_relatedness(network_from_pairs(3, [(0, 1), (1, 2)]))
        sol = optimize(path, ClusteringParams(gamma=1.0, seed=5))
        assert sol.assignment.x == (0, 0, 0)
        assert abs(sol.quality - 2.0) <= 1e-12

        split = optimize(pair, ClusteringParams(gamma=5.0, seed=5))
        assert split.assignment.k == 2
        assert abs(split.quality - 0.0) <= 1e-12


def test_relatedness_rows_stochastic():
    with criterion("relatedness rows sum to 1 (100 networks, 1e-12)"):
        rng = random.Random(77)
        for _ in range(100):
            n = rng.randrange(2, 40)
            rel = compute_relatedness(random_network(rng, n, 0.15))
            for i in range(n):
                _, vals = rel.row(i)
                if rel.degree[i] > 0:
                    assert abs(math.fsum(vals) - 1.0) <= 1e-12


def test_monotone_optimizer_traces():
    with criterion("per-pass quality non-decreasing in every logged run"):
        rng = random.Random(88)
        checked = 0
        for _ in range(40):
            n = rng.randrange(4, 30)
            rel = compute_relatedness(random_network(rng, n, 0.2))
            sol = optimize(rel, ClusteringParams(
                gamma=rng.choice([0.5, 1.0, 2.0]),
                seed=rng.randrange(1 << 30), restarts=4,
            ))
            for trace in sol.q_traces:
                for earlier, later in zip(trace, trace[1:]):
                    assert later >= earlier, f"trace dipped: {earlier} -> {later}"
                checked += 1
        assert checked > 0


def test_planted_partition_recovery():
    with criterion("planted 4-block partition, n=5000, ARI >= 0.9, < 120 s"):
        started = time.monotonic()
        rng = random.Random(1234)
        net, truth = planted_partition_network(
            rng, n_blocks=4, block_size=1250,
            within_edges_per_block=5000,  # within-block degree 8
            cross_edges=2500,             # cross-block degree 1
        )
        sols = multilevel(net, [ClusteringParams(
            gamma=1.0, min_cluster_size=5, seed=9, restarts=10,
        )])
        x = sols[0].assignment.x
        labels = [x[i] if x[i] != UNASSIGNED else -(i + 2) for i in range(net.n)]
        ari = adjusted_rand_index(labels, truth)
        elapsed = time.monotonic() - started
        assert ari >= 0.9, f"ARI {ari:.3f}"
        assert elapsed < 120.0, f"took {elapsed:.1f}s"


def test_acyclicity_and_conservation():
    with criterion("acyclic after build, kept + removed = input pairs (100 corpora)"):
        rng = random.Random(99)
        for _ in range(100):
            n = rng.randrange(2, 30)
            records = [(f"P{i}", 2003 + rng.randrange(3)) for i in range(n)]
            pairs = []
            for _ in range(rng.randrange(0, 80)):
                a, b = rng.randrange(n), rng.randrange(n)
                pairs.append((f"P{a}", f"P{b}"))
            # force same-year mutual citations
            if n >= 2:
                pairs.append(("P0", "P1"))
                pairs.append(("P1", "P0"))
            corpus = make_corpus(
                [(pid, 2003) if pid in ("P0", "P1") else (pid, year)
                 for pid, year in records],
                pairs,
            )
            net = build_network(corpus)
            assert_acyclic(net)
            assert len(net.edges) + len(net.removed_log) == len(pairs)


def test_min_size_enforcement():
    with criterion("min cluster size enforced after merging (100 fuzzed solutions)"):
        rng = random.Random(111)
        for _ in range(100):
            n = rng.randrange(4, 40)
            rel = compute_relatedness(random_network(rng, n, 0.12))
            labels = [rng.randrange(rng.randrange(2, 7)) for _ in range(n)]
            assignment = canonical_assignment(labels)
            min_size = rng.randrange(1, 6)
            sol = ClusteringSolution(
                params=ClusteringParams(min_cluster_size=min_size, seed=1),
                assignment=assignment,
                quality=evaluate_quality(assignment, rel, 1.0),
                cluster_sizes=assignment.sizes(),
                penalty_n=n,
            )
            merged = merge_small_clusters(sol, rel)
            assert all(s >= min_size for s in merged.assignment.sizes())


def test_layout_contract():
    with criterion("layout: unit mean distance, exact 2-node, equilateral, descent"):
        # 2-node: distance exactly 1
        two = vos_embed(WeightedGraph(2, {(0, 1): 1.0}, ("a", "b"), (1.0, 2.0)), seed=0)
        assert math.dist(two.coordinates[0], two.coordinates[1]) == 1.0

        # symmetric triangle: equilateral within 1e-3
        tri = vos_embed(WeightedGraph(
            3, {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0}, ("a", "b", "c"),
            (3.0, 2.0, 1.0)), seed=1)
        dists = [
            math.dist(tri.coordinates[i], tri.coordinates[j])
            for i, j in ((0, 1), (0, 2), (1, 2))
        ]
        for d in dists:
            assert abs(d - 1.0) <= 1e-3

        # random graphs: constraint within 1e-6 and objective <= initial
        rng = random.Random(5)
        for trial in range(20):
            n = rng.randrange(2, 15)
            weights = {}
            for i in range(n):
                for j in range(i + 1, n):
                    if rng.random() < 0.5:
                        weights[(i, j)] = rng.uniform(0.1, 4.0)
            if not weights:
                continue
            g = WeightedGraph(n, weights, tuple(str(i) for i in range(n)),
                              tuple(float(n - i) for i in range(n)))
            emb = vos_embed(g, seed=trial)
            total = 0.0
            count = 0
            for i in range(n):
                for j in range(i + 1, n):
                    total += math.dist(emb.coordinates[i], emb.coordinates[j])
                    count += 1
            assert abs(total / count - 1.0) <= 1e-6
            assert emb.objective <= emb.initial_objective + 1e-12


def test_term_threshold_and_symmetry():
    with criterion("term threshold respected, co-occurrence symmetric (100 docs)"):
        rng = random.Random(6)
        vocab = ["galaxy", "cluster", "survey", "solar", "flare", "corona",
                 "pulsar", "binary", "plasma", "quasar", "redshift", "timing"]
        titles = [
            " ".join(rng.sample(vocab, rng.randrange(3, 7))) for _ in range(100)
        ]
        corpus = make_corpus(
            [{"id": f"D{i}", "year": 2004, "title": t} for i, t in enumerate(titles)],
            [],
        )
        occ = extract_terms(corpus, range(100))
        threshold = 15
        tm = build_term_map(occ, min_occurrences=threshold, relevance_fraction=1.0)
        assert all(o >= threshold for o in tm.occurrences)

        # independent brute-force recount of occurrences and co-occurrences
        def grams(title):
            toks = title.split()
            out = set()
            for i in range(len(toks)):
                for ln in range(1, 4):
                    if i + ln <= len(toks):
                        out.add(" ".join(toks[i:i + ln]))
            return out

        per_doc = [grams(t) for t in titles]
        for i, term_i in enumerate(tm.terms):
            count = sum(1 for g in per_doc if term_i in g)
            assert count == tm.occurrences[i] == tm.cooccurrence(i, i)
            for j, term_j in enumerate(tm.terms):
                assert tm.cooccurrence(i, j) == tm.cooccurrence(j, i)
                if i != j:
                    both = sum(1 for g in per_doc if term_i in g and term_j in g)
                    assert tm.cooccurrence(i, j) == both


def _run_pipeline(workdir, pubs, cits):
    data_dir = workdir / "data"
    base = ["--data-dir", str(data_dir)]
    assert cli_run(base + ["ingest", "--publications", str(pubs),
                           "--citations", str(cits)]) == 0
    assert cli_run(base + ["network"]) == 0
    assert cli_run(base + ["cluster", "--gamma", "1.0", "--gamma", "4.0",
                           "--min-size", "5", "--min-size", "3",
                           "--seed", "11", "--restarts", "5"]) == 0
    assert cli_run(base + ["summarize"]) == 0
    assert cli_run(base + ["map", "--level", "1", "--seed", "7"]) == 0
    assert cli_run(base + ["termmap", "--level", "1", "--cluster", "1",
                           "--min-occurrences", "8", "--seed", "7"]) == 0
    return data_dir


def test_pipeline_determinism(tmp_path, capsys):
    with criterion("full CLI pipeline is byte-identical across runs"):
        pubs, cits = write_demo_corpus(tmp_path, seed=5)
        dir_a = _run_pipeline(tmp_path / "a", pubs, cits)
        dir_b = _run_pipeline(tmp_path / "b", pubs, cits)
        capsys.readouterr()
        files_a = sorted(p.name for p in dir_a.iterdir())
        files_b = sorted(p.name for p in dir_b.iterdir())
        assert files_a == files_b and files_a
        for name in files_a:
            assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes(), name


def test_api_purity_and_drill_roundtrip(demo_data_dir):
    with criterion("50 GET replays byte-identical; drill/up restores the slice"):
        art = load_artifacts(demo_data_dir)
        app = create_app(art, seed=7)
        with TestClient(app) as client:
            urls = ["/stats", "/levels"]
            for level in (1, 2):
                urls.append(f"/clusters/{level}")
                k = len(client.get(f"/clusters/{level}").json()["clusters"])
                urls.extend(
                    f"/clusters/{level}/{cid}/summary" for cid in range(1, min(k, 8) + 1)
                )
                urls.append(f"/map/{level}")
            urls.append("/termmap/1/1?min_occurrences=8")
            urls.append("/termmap/1/2?min_occurrences=8")
            for word in ("galaxy", "solar", "pulsar", "plasma"):
                urls.append(f"/search?title={word}")
            urls.extend([
                "/search?journal=topic",
                "/search?year_from=2004&year_to=2006",
                "/search?author=Author1",
            ])
            token = client.post("/session").json()["token"]
            urls.append(f"/session/{token}/slice?limit=30")
            while len(urls) < 50:
                urls.append(urls[len(urls) % 10])
            urls = urls[:50]
            assert len(urls) == 50

            first = [client.get(u).content for u in urls]
            second = [client.get(u).content for u in urls]
            assert first == second

            # drill then up restores the previous slice exactly
            token = client.post("/session").json()["token"]
            before = client.get(f"/session/{token}/slice").content
            assert client.post(f"/session/{token}/drill",
                               json={"level": 1, "cluster_ids": [1]}).status_code == 200
            assert client.post(f"/session/{token}/up").json()["depth"] == 0
            after = client.get(f"/session/{token}/slice").content
            assert before == after
