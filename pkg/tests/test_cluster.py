import math
import random

import pytest

from conftest import (
    adjusted_rand_index,
    brute_force_best,
    iter_partitions,
    naive_quality,
    network_from_pairs,
    planted_partition_network,
    random_network,
)

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
from citescape.errors import InputError

PATH3 = network_from_pairs(3, [(0, 1), (1, 2)])
TRIANGLES = network_from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])


def test_relatedness_single_edge():
    rel = compute_relatedness(network_from_pairs(2, [(0, 1)]))
    assert rel.row(0) == ((1,), (1.0,))
    assert rel.row(1) == ((0,), (1.0,))


def test_relatedness_path_hand_values():
    rel = compute_relatedness(PATH3)
    assert rel.row(1) == ((0, 2), (0.5, 0.5))
    assert rel.row(0) == ((1,), (1.0,))
    assert rel.row(2) == ((1,), (1.0,))


def test_relatedness_isolated_node():
    rel = compute_relatedness(network_from_pairs(3, [(0, 1)]))
    assert rel.row(2) == ((), ())
    assert rel.degree[2] == 0.0


def test_rows_sum_to_one():
    rng = random.Random(3)
    for _ in range(30):
        rel = compute_relatedness(random_network(rng, rng.randrange(2, 30), 0.2))
        for i in range(rel.n):
            _, vals = rel.row(i)
            if rel.degree[i] > 0:
                assert abs(math.fsum(vals) - 1.0) <= 1e-12
            else:
                assert vals == ()


def test_quality_two_nodes_together():
    rel = compute_relatedness(network_from_pairs(2, [(0, 1)]))
    q = evaluate_quality(Assignment((0, 0), 1), rel, 1.0)
    assert abs(q - 1.5) <= 1e-12


def test_quality_singletons_zero():
    rng = random.Random(5)
    for _ in range(10):
        net = random_network(rng, rng.randrange(2, 10), 0.4)
        rel = compute_relatedness(net)
        q = evaluate_quality(Assignment(tuple(range(net.n)), net.n), rel, 1.0)
        assert q == 0.0


def test_quality_path_single_cluster_is_maximum():
    rel = compute_relatedness(PATH3)
    q = evaluate_quality(Assignment((0, 0, 0), 1), rel, 1.0)
    assert abs(q - 2.0) <= 1e-12
    # enumeration of all 5 partitions confirms 2.0 is the maximum
    qs = [naive_quality(labels, rel, 1.0) for labels in iter_partitions(3)]
    assert len(qs) == 5
    assert abs(max(qs) - 2.0) <= 1e-12


def test_quality_rejects_bad_gamma():
    rel = compute_relatedness(PATH3)
    with pytest.raises(InputError):
        evaluate_quality(Assignment((0, 0, 0), 1), rel, 0.0)


def test_quality_matches_naive_on_random_instances():
    rng = random.Random(11)
    for _ in range(40):
        net = random_network(rng, rng.randrange(2, 12), 0.35)
        rel = compute_relatedness(net)
        labels = [rng.randrange(3) for _ in range(net.n)]
        assignment = canonical_assignment(labels)
        gamma = rng.choice([0.5, 1.0, 2.0])
        q = evaluate_quality(assignment, rel, gamma)
        assert abs(q - naive_quality(assignment.x, rel, gamma)) <= 1e-9


def test_diagonal_convention_shifts_by_half_gamma_and_keeps_ranking():
    rng = random.Random(13)
    for _ in range(10):
        n = rng.randrange(2, 7)
        net = random_network(rng, n, 0.5)
        rel = compute_relatedness(net)
        gamma = rng.choice([0.5, 1.0, 2.0, 5.0])
        scored = []
        for labels in iter_partitions(n):
            q = naive_quality(labels, rel, gamma)
            q_diag = naive_quality(labels, rel, gamma, with_diagonal=True)
            assert abs((q_diag - q) - (-gamma / 2.0)) <= 1e-12
            scored.append((q, q_diag))
        # the constant shift preserves which partitions are optimal
        best = max(s[0] for s in scored)
        best_diag = max(s[1] for s in scored)
        argmax = {i for i, s in enumerate(scored) if s[0] >= best - 1e-9}
        argmax_diag = {i for i, s in enumerate(scored) if s[1] >= best_diag - 1e-9}
        assert argmax == argmax_diag


def test_exact_single_node():
    sol = exact_optimize(compute_relatedness(network_from_pairs(1, [])), 1.0)
    assert sol.assignment.x == (0,)
    assert sol.quality == 0.0


def test_exact_two_nodes():
    rel = compute_relatedness(network_from_pairs(2, [(0, 1)]))
    sol = exact_optimize(rel, 1.0)
    assert sol.assignment.x == (0, 0)
    assert abs(sol.quality - 1.5) <= 1e-12


def test_exact_path():
    sol = exact_optimize(compute_relatedness(PATH3), 1.0)
    assert sol.assignment.x == (0, 0, 0)
    assert abs(sol.quality - 2.0) <= 1e-12


def test_exact_rejects_large_n():
    rel = compute_relatedness(random_network(random.Random(0), 13, 0.2))
    with pytest.raises(InputError):
        exact_optimize(rel, 1.0, max_n=12)


def test_exact_matches_independent_enumerator():
    rng = random.Random(17)
    for _ in range(25):
        n = rng.randrange(2, 7)
        rel = compute_relatedness(random_network(rng, n, 0.45))
        gamma = rng.choice([0.5, 1.0, 2.0, 5.0])
        _, best_q = brute_force_best(rel, gamma)
        sol = exact_optimize(rel, gamma)
        assert abs(sol.quality - best_q) <= 1e-9


def test_exact_cluster_count_monotone_in_gamma():
    rng = random.Random(19)
    for _ in range(25):
        n = rng.randrange(3, 8)
        rel = compute_relatedness(random_network(rng, n, 0.4))
        ks = [exact_optimize(rel, g).assignment.k for g in (0.5, 1.0, 2.0, 5.0)]
        assert all(a <= b for a, b in zip(ks, ks[1:]))


def test_optimize_path_single_cluster():
    rel = compute_relatedness(PATH3)
    sol = optimize(rel, ClusteringParams(gamma=1.0, seed=1))
    assert sol.assignment.x == (0, 0, 0)
    assert abs(sol.quality - 2.0) <= 1e-12


def test_optimize_two_triangles():
    rel = compute_relatedness(TRIANGLES)
    sol = optimize(rel, ClusteringParams(gamma=1.0, seed=1))
    assert sol.assignment.k == 2
    assert sol.assignment.x[0] == sol.assignment.x[1] == sol.assignment.x[2]
    assert sol.assignment.x[3] == sol.assignment.x[4] == sol.assignment.x[5]
    exact = exact_optimize(rel, 1.0)
    assert abs(sol.quality - exact.quality) <= 1e-9


def test_optimize_high_gamma_prefers_singletons():
    rel = compute_relatedness(network_from_pairs(2, [(0, 1)]))
    sol = optimize(rel, ClusteringParams(gamma=5.0, seed=1))
    assert sol.assignment.k == 2
    assert abs(sol.quality) <= 1e-12


def test_optimize_unassigns_isolated_nodes():
    rel = compute_relatedness(network_from_pairs(4, [(0, 1)]))
    sol = optimize(rel, ClusteringParams(gamma=1.0, seed=1))
    assert sol.assignment.x[2] == UNASSIGNED
    assert sol.assignment.x[3] == UNASSIGNED


def test_optimize_deterministic_for_fixed_seed():
    rel = compute_relatedness(random_network(random.Random(23), 40, 0.1))
    a = optimize(rel, ClusteringParams(seed=9, restarts=4))
    b = optimize(rel, ClusteringParams(seed=9, restarts=4))
    assert a.assignment == b.assignment
    assert a.quality == b.quality
    assert a.q_traces == b.q_traces


def test_optimize_quality_matches_invariant():
    rng = random.Random(29)
    for _ in range(10):
        rel = compute_relatedness(random_network(rng, rng.randrange(4, 20), 0.25))
        sol = optimize(rel, ClusteringParams(seed=rng.randrange(100), restarts=3))
        recomputed = evaluate_quality(sol.assignment, rel, sol.params.gamma)
        assert abs(sol.quality - recomputed) <= 1e-9
        assert sol.cluster_sizes == sol.assignment.sizes()
        assert sorted(sol.cluster_sizes, reverse=True) == list(sol.cluster_sizes)


def test_optimize_traces_monotone():
    rng = random.Random(31)
    for _ in range(15):
        rel = compute_relatedness(random_network(rng, rng.randrange(4, 25), 0.2))
        sol = optimize(rel, ClusteringParams(seed=rng.randrange(1000), restarts=3))
        for trace in sol.q_traces:
            for earlier, later in zip(trace, trace[1:]):
                assert later >= earlier


def test_merge_identity_when_compliant():
    rel = compute_relatedness(TRIANGLES)
    sol = optimize(rel, ClusteringParams(gamma=1.0, min_cluster_size=3, seed=1))
    merged = merge_small_clusters(sol, rel)
    assert merged is sol


def test_merge_small_into_related_neighbor():
    rel = compute_relatedness(PATH3)
    params = ClusteringParams(gamma=1.0, min_cluster_size=2, seed=1)
    forced = ClusteringSolution(
        params=params,
        assignment=Assignment((0, 0, 1), 2),
        quality=evaluate_quality(Assignment((0, 0, 1), 2), rel, 1.0),
        cluster_sizes=(2, 1),
        penalty_n=3,
    )
    merged = merge_small_clusters(forced, rel)
    assert merged.assignment.x == (0, 0, 0)
    assert abs(merged.quality - 2.0) <= 1e-12


def test_merge_zero_relatedness_becomes_unassigned():
    # nodes 8, 9 form an isolated pair in a 10-node network
    net = network_from_pairs(10, [(i, i + 1) for i in range(7)] + [(8, 9)])
    rel = compute_relatedness(net)
    params = ClusteringParams(gamma=1.0, min_cluster_size=3, seed=1)
    labels = [0] * 8 + [1, 1]
    assignment = Assignment(tuple(labels), 2)
    forced = ClusteringSolution(
        params=params,
        assignment=assignment,
        quality=evaluate_quality(assignment, rel, 1.0),
        cluster_sizes=(8, 2),
        penalty_n=10,
    )
    merged = merge_small_clusters(forced, rel)
    assert merged.assignment.x[8] == UNASSIGNED
    assert merged.assignment.x[9] == UNASSIGNED
    assert merged.assignment.k == 1


def test_merge_enforces_min_size_fuzz():
    rng = random.Random(37)
    for _ in range(40):
        n = rng.randrange(4, 30)
        net = random_network(rng, n, 0.15)
        rel = compute_relatedness(net)
        k = rng.randrange(2, 6)
        labels = [rng.randrange(k) for _ in range(n)]
        assignment = canonical_assignment(labels)
        min_size = rng.randrange(1, 5)
        params = ClusteringParams(min_cluster_size=min_size, seed=1)
        sol = ClusteringSolution(
            params=params,
            assignment=assignment,
            quality=evaluate_quality(assignment, rel, 1.0),
            cluster_sizes=assignment.sizes(),
            penalty_n=n,
        )
        merged = merge_small_clusters(sol, rel)
        for size in merged.assignment.sizes():
            assert size >= min_size
        # compliant clusters only grow, never lose members
        before = sol.assignment.members_by_cluster()
        after_sets = [set(m) for m in merged.assignment.members_by_cluster()]
        for members in before:
            if len(members) >= min_size:
                assert any(set(members) <= s for s in after_sets)


def test_multilevel_bridged_triangles():
    # connected 6-node graph: two triangles joined by one edge
    net = network_from_pairs(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]
    )
    rel = compute_relatedness(net)
    best_labels, best_q = brute_force_best(rel, 1.0)
    assert len(set(best_labels)) == 2
    sols = multilevel(net, [ClusteringParams(gamma=1.0, seed=1)])
    assert len(sols) == 1
    assert sols[0].assignment.k == 2
    assert sols[0].level == 1
    assert abs(sols[0].quality - best_q) <= 1e-9


def test_multilevel_disjoint_triangles_clusters_largest_component_only():
    # components tie at size 3; the one with the smallest handle wins,
    # everything else stays unassigned
    sols = multilevel(TRIANGLES, [ClusteringParams(gamma=1.0, seed=1)])
    x = sols[0].assignment.x
    assert sols[0].assignment.k == 1
    assert x[0] == x[1] == x[2] == 0
    assert x[3] == x[4] == x[5] == UNASSIGNED


def test_multilevel_restricts_to_largest_component():
    # component {0,1,2} is the largest; 3-4 is a separate pair
    net = network_from_pairs(5, [(0, 1), (1, 2), (3, 4)])
    sols = multilevel(net, [ClusteringParams(gamma=1.0, seed=1)])
    x = sols[0].assignment.x
    assert x[3] == UNASSIGNED and x[4] == UNASSIGNED
    assert x[0] != UNASSIGNED
    assert sols[0].penalty_n == 3


def test_multilevel_requires_levels():
    with pytest.raises(InputError):
        multilevel(TRIANGLES, [])


def test_multilevel_planted_blocks_recovered():
    rng = random.Random(41)
    net, truth = planted_partition_network(
        rng, n_blocks=4, block_size=50, within_edges_per_block=200, cross_edges=25
    )
    sols = multilevel(net, [ClusteringParams(gamma=1.0, min_cluster_size=5, seed=3, restarts=4)])
    x = sols[0].assignment.x
    labels = [x[i] if x[i] != UNASSIGNED else -(i + 2) for i in range(net.n)]
    assert adjusted_rand_index(labels, truth) >= 0.9


def test_optimize_never_beats_exact_small_sample():
    rng = random.Random(43)
    hits = 0
    runs = 0
    for _ in range(30):
        n = rng.randrange(3, 9)
        rel = compute_relatedness(random_network(rng, n, 0.4))
        for gamma in (0.5, 1.0, 2.0, 5.0):
            exact = exact_optimize(rel, gamma)
            sol = optimize(rel, ClusteringParams(gamma=gamma, seed=rng.randrange(10_000)))
            assert sol.quality <= exact.quality + 1e-9
            runs += 1
            if sol.quality >= exact.quality - 1e-9:
                hits += 1
    assert hits / runs >= 0.95
