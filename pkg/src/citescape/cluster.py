"""Relatedness, the clustering quality function, and its optimizers.

The quality of an assignment x is the sum over ordered pairs i != j with
x_i == x_j of (a_ij - gamma / (2n)), where a_ij is the row-normalized
relatedness of i with j and gamma is the resolution parameter. The formal
double sum over all pairs would also include the i == j diagonal; since
a_ii == 0 that only shifts every Q by the constant -gamma/2, so the
diagonal is excluded here and the argmax is unchanged.

Publications without any citation relation cannot be meaningfully placed
and are reported with the UNASSIGNED sentinel; they contribute to no pair.

The optimizer follows the smart local moving scheme: randomized sequential
single-node moves (including moves to a new empty cluster), a refinement
step that re-clusters each cluster's own subnetwork from singletons, and
aggregation of the refined groups into a smaller weighted instance, cycled
until a full cycle improves Q by no more than 1e-12. An exhaustive
enumeration optimizer doubles as the test oracle for small instances.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .citnet import CitationNetwork, components, induced_subnetwork
from .corpus import Corpus
from .errors import InputError

UNASSIGNED = -1

# Improvement below this is treated as noise by the optimizer.
_TOL = 1e-12


@dataclass(frozen=True)
class ClusteringParams:
    gamma: float = 1.0
    min_cluster_size: int = 1
    seed: int = 0
    restarts: int = 10
    max_iterations: int = 100

    def __post_init__(self):
        if not self.gamma > 0:
            raise InputError(f"gamma must be > 0, got {self.gamma}")
        if self.min_cluster_size < 1:
            raise InputError("min_cluster_size must be >= 1")
        if self.restarts < 1:
            raise InputError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise InputError("max_iterations must be >= 1")


class RelatednessMatrix:
    """Sparse row-stochastic relatedness: entry (i, j) = w_ij / strength(i).

    For a citation network w_ij is 1 when i and j share a citation relation
    in either direction, so each row value is 1 / degree(i). Rows of nodes
    with degree 0 are empty.
    """

    __slots__ = ("n", "degree", "_nbr", "_val")

    def __init__(self, n: int, degree: Sequence[float],
                 nbr: Sequence[Sequence[int]], val: Sequence[Sequence[float]]):
        self.n = n
        self.degree = tuple(degree)
        self._nbr = tuple(tuple(r) for r in nbr)
        self._val = tuple(tuple(r) for r in val)

    def row(self, i: int) -> tuple[tuple[int, ...], tuple[float, ...]]:
        return self._nbr[i], self._val[i]

    def entries(self) -> Iterable[tuple[int, int, float]]:
        for i in range(self.n):
            for j, a in zip(self._nbr[i], self._val[i]):
                yield i, j, a

    @classmethod
    def from_network(cls, network: CitationNetwork) -> "RelatednessMatrix":
        n = network.n
        degree = [float(len(network.neighbors[i])) for i in range(n)]
        nbr = [network.neighbors[i] for i in range(n)]
        val = [
            tuple(1.0 / degree[i] for _ in network.neighbors[i]) if degree[i] else ()
            for i in range(n)
        ]
        return cls(n, degree, nbr, val)

    @classmethod
    def from_symmetric_weights(
        cls, n: int, pairs: Iterable[tuple[int, int, float]]
    ) -> "RelatednessMatrix":
        """Rows normalized from symmetric weights given once per unordered pair."""
        strength = [0.0] * n
        adj: list[dict[int, float]] = [dict() for _ in range(n)]
        for i, j, w in pairs:
            if i == j or w <= 0:
                continue
            adj[i][j] = adj[i].get(j, 0.0) + w
            adj[j][i] = adj[j].get(i, 0.0) + w
            strength[i] += w
            strength[j] += w
        nbr = []
        val = []
        for i in range(n):
            keys = sorted(adj[i])
            nbr.append(tuple(keys))
            val.append(tuple(adj[i][j] / strength[i] for j in keys))
        return cls(n, strength, nbr, val)


def compute_relatedness(network: CitationNetwork) -> RelatednessMatrix:
    return RelatednessMatrix.from_network(network)


@dataclass(frozen=True)
class Assignment:
    """Per-node cluster labels, dense 0..k-1, or UNASSIGNED."""

    x: tuple[int, ...]
    k: int

    def __post_init__(self):
        seen = [False] * self.k
        for label in self.x:
            if label == UNASSIGNED:
                continue
            if not 0 <= label < self.k:
                raise InputError(f"cluster label {label} outside 0..{self.k - 1}")
            seen[label] = True
        if not all(seen):
            raise InputError("cluster labels must be dense, every label needs a member")

    def members_by_cluster(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for node, label in enumerate(self.x):
            if label != UNASSIGNED:
                out[label].append(node)
        return out

    def sizes(self) -> tuple[int, ...]:
        counts = [0] * self.k
        for label in self.x:
            if label != UNASSIGNED:
                counts[label] += 1
        return tuple(counts)


@dataclass(frozen=True)
class ClusteringSolution:
    params: ClusteringParams
    assignment: Assignment
    quality: float
    cluster_sizes: tuple[int, ...]
    penalty_n: int
    level: int = 0
    q_traces: tuple[tuple[float, ...], ...] = field(default=(), compare=False)


def canonical_assignment(labels: Sequence[int]) -> Assignment:
    """Relabel clusters densely by descending size, ties by smallest member."""
    members: dict[int, list[int]] = {}
    for node, label in enumerate(labels):
        if label != UNASSIGNED:
            members.setdefault(label, []).append(node)
    order = sorted(members, key=lambda c: (-len(members[c]), members[c][0]))
    remap = {old: new for new, old in enumerate(order)}
    x = tuple(remap[label] if label != UNASSIGNED else UNASSIGNED for label in labels)
    return Assignment(x, len(order))


def evaluate_quality(
    assignment: Assignment,
    rel: RelatednessMatrix,
    gamma: float,
    *,
    penalty_n: int | None = None,
) -> float:
    """Sum over same-cluster ordered pairs i != j of (a_ij - gamma/(2n)).

    UNASSIGNED nodes contribute to no pair. penalty_n overrides the n of
    the gamma/(2n) penalty when the assignment was optimized on a
    restriction of rel (the multilevel largest-component case).
    """
    if not gamma > 0:
        raise InputError(f"gamma must be > 0, got {gamma}")
    x = assignment.x
    if len(x) != rel.n:
        raise InputError(f"assignment covers {len(x)} nodes, relatedness has {rel.n}")
    n = rel.n if penalty_n is None else penalty_n
    terms: list[float] = []
    for i in range(rel.n):
        xi = x[i]
        if xi == UNASSIGNED:
            continue
        nbr, val = rel.row(i)
        for j, a in zip(nbr, val):
            if x[j] == xi:
                terms.append(a)
    coef = gamma / (2.0 * n)
    for s in assignment.sizes():
        terms.append(-coef * s * (s - 1))
    return math.fsum(terms)


# ---------------------------------------------------------------------------
# Smart local moving internals. The optimizer works on a generalized
# instance whose nodes may stand for groups of original nodes: `sizes`
# counts original nodes per supernode, `self_w` carries the relatedness of
# ordered pairs inside a supernode, and `adj` holds, once per direction,
# the combined symmetric weight a_uv + a_vu between supernodes.
# ---------------------------------------------------------------------------


class _Instance:
    __slots__ = ("gamma", "n_pen", "sizes", "self_w", "adj")

    def __init__(self, gamma: float, n_pen: int, sizes: list[int],
                 self_w: list[float], adj: list[list[tuple[int, float]]]):
        self.gamma = gamma
        self.n_pen = n_pen
        self.sizes = sizes
        self.self_w = self_w
        self.adj = adj

    @property
    def m(self) -> int:
        return len(self.sizes)


def _sym_adjacency(rel: RelatednessMatrix) -> list[dict[int, float]]:
    """Combined weights a_uv + a_vu per unordered pair, keyed both ways."""
    adj: list[dict[int, float]] = [dict() for _ in range(rel.n)]
    for i, j, a in rel.entries():
        adj[i][j] = adj[i].get(j, 0.0) + a
        adj[j][i] = adj[j].get(i, 0.0) + a
    return adj


def _build_instance(rel: RelatednessMatrix, active: list[int], gamma: float) -> _Instance:
    local = {node: i for i, node in enumerate(active)}
    sym = _sym_adjacency(rel)
    adj: list[list[tuple[int, float]]] = []
    for node in active:
        row = [(local[j], w) for j, w in sorted(sym[node].items()) if j in local]
        adj.append(row)
    m = len(active)
    return _Instance(gamma, rel.n, [1] * m, [0.0] * m, adj)


def _instance_quality(inst: _Instance, x: list[int]) -> float:
    terms = list(inst.self_w)
    adj = inst.adj
    for u in range(inst.m):
        xu = x[u]
        for v, w in adj[u]:
            if v > u and x[v] == xu:
                terms.append(w)
    csize: dict[int, int] = {}
    for v in range(inst.m):
        csize[x[v]] = csize.get(x[v], 0) + inst.sizes[v]
    coef = inst.gamma / (2.0 * inst.n_pen)
    for s in csize.values():
        terms.append(-coef * s * (s - 1))
    return math.fsum(terms)


def _local_moving(inst: _Instance, labels: list[int], rng: random.Random,
                  trace: list[float] | None) -> list[int]:
    """Randomized sequential single-node moves until a full pass stands still.

    Move gain for node v from cluster g to cluster h with v excluded from g:
        links(v, h) - links(v, g) - gamma * s_v * (S_h - S_g_without_v) / n
    The empty cluster is always a candidate; equal-gain targets resolve to
    the lowest cluster label, with the empty cluster considered last.
    """
    m = inst.m
    x = list(labels)
    csize = [0] * (max(x) + 1 if x else 0)
    for v in range(m):
        csize[x[v]] += inst.sizes[v]
    coef = inst.gamma / inst.n_pen
    sizes = inst.sizes
    adj = inst.adj
    order = list(range(m))
    while True:
        rng.shuffle(order)
        moved = 0
        for v in order:
            g = x[v]
            sv = sizes[v]
            links: dict[int, float] = {}
            for u, w in adj[v]:
                cu = x[u]
                links[cu] = links.get(cu, 0.0) + w
            link_g = links.get(g, 0.0)
            size_g_ex = csize[g] - sv
            best_c = g
            best_gain = 0.0
            for h in sorted(links):
                if h == g:
                    continue
                gain = links[h] - link_g - coef * sv * (csize[h] - size_g_ex)
                if gain > best_gain + _TOL:
                    best_gain = gain
                    best_c = h
            if size_g_ex > 0:
                gain = -link_g + coef * sv * size_g_ex
                if gain > best_gain + _TOL:
                    best_gain = gain
                    best_c = len(csize)
                    csize.append(0)
            if best_c != g:
                csize[g] -= sv
                csize[best_c] += sv
                x[v] = best_c
                moved += 1
        if trace is not None:
            # A pass without moves leaves Q mathematically unchanged; reuse
            # the logged value instead of re-summing it on this instance,
            # which could differ in the last ulp.
            if moved == 0 and trace:
                trace.append(trace[-1])
            else:
                trace.append(_instance_quality(inst, x))
        if moved == 0:
            break
    # dense relabel in first-occurrence order
    remap: dict[int, int] = {}
    for v in range(m):
        if x[v] not in remap:
            remap[x[v]] = len(remap)
        x[v] = remap[x[v]]
    return x


def _sub_instance(inst: _Instance, members: list[int]) -> _Instance:
    local = {v: i for i, v in enumerate(members)}
    adj = []
    for v in members:
        adj.append([(local[u], w) for u, w in inst.adj[v] if u in local])
    return _Instance(
        inst.gamma,
        inst.n_pen,
        [inst.sizes[v] for v in members],
        [inst.self_w[v] for v in members],
        adj,
    )


def _refine(inst: _Instance, x: list[int], rng: random.Random) -> tuple[list[int], int]:
    """Split each cluster by local moving from singletons on its subnetwork."""
    by_cluster: dict[int, list[int]] = {}
    for v in range(inst.m):
        by_cluster.setdefault(x[v], []).append(v)
    out = [0] * inst.m
    next_label = 0
    for c in sorted(by_cluster):
        members = by_cluster[c]
        if len(members) == 1:
            out[members[0]] = next_label
            next_label += 1
            continue
        sub = _sub_instance(inst, members)
        sub_x = _local_moving(sub, list(range(len(members))), rng, None)
        for i, v in enumerate(members):
            out[v] = next_label + sub_x[i]
        next_label += max(sub_x) + 1
    return out, next_label


def _aggregate(inst: _Instance, refined: list[int], k_ref: int,
               x: list[int]) -> tuple[_Instance, list[int]]:
    sizes = [0] * k_ref
    self_w = [0.0] * k_ref
    agg_x = [0] * k_ref
    for v in range(inst.m):
        g = refined[v]
        sizes[g] += inst.sizes[v]
        self_w[g] += inst.self_w[v]
        agg_x[g] = x[v]
    cross: dict[tuple[int, int], float] = {}
    for u in range(inst.m):
        gu = refined[u]
        for v, w in inst.adj[u]:
            if v <= u:
                continue
            gv = refined[v]
            if gu == gv:
                self_w[gu] += w
            else:
                key = (gu, gv) if gu < gv else (gv, gu)
                cross[key] = cross.get(key, 0.0) + w
    adj: list[list[tuple[int, float]]] = [[] for _ in range(k_ref)]
    for (a, b), w in sorted(cross.items()):
        adj[a].append((b, w))
        adj[b].append((a, w))
    return _Instance(inst.gamma, inst.n_pen, sizes, self_w, adj), agg_x


def _slm_pass(inst: _Instance, labels: list[int], rng: random.Random,
              trace: list[float] | None) -> list[int]:
    """One full sweep: local moving at the given granularity, then repeated
    refine/aggregate coarsening with local moving on each reduced instance.

    Coarsening freezes node groups for the rest of the sweep; the caller
    restarts sweeps from base granularity so frozen mistakes stay fixable.
    """
    cur_inst = inst
    cur_x = _local_moving(inst, labels, rng, trace)
    node_map = list(range(inst.m))
    q_prev = _instance_quality(cur_inst, cur_x)
    while max(cur_x) + 1 < cur_inst.m:
        refined, k_ref = _refine(cur_inst, cur_x, rng)
        if k_ref == cur_inst.m:
            break  # reduction would be the identity
        nxt_inst, nxt_x = _aggregate(cur_inst, refined, k_ref, cur_x)
        nxt_x = _local_moving(nxt_inst, nxt_x, rng, trace)
        node_map = [refined[g] for g in node_map]
        cur_inst, cur_x = nxt_inst, nxt_x
        q = _instance_quality(cur_inst, cur_x)
        if q <= q_prev + _TOL:
            break
        q_prev = q
    return [cur_x[g] for g in node_map]


def _slm_run(inst: _Instance, rng: random.Random, max_passes: int) -> tuple[list[int], list[float]]:
    trace: list[float] = []
    if inst.m == 0:
        return [], trace
    labels = list(range(inst.m))
    q_prev = -math.inf
    for _ in range(max_passes):
        labels = _slm_pass(inst, labels, rng, trace)
        q = _instance_quality(inst, labels)
        if q <= q_prev + _TOL:
            break
        q_prev = q
    return labels, trace


def optimize(rel: RelatednessMatrix, params: ClusteringParams) -> ClusteringSolution:
    """Best-of-restarts smart local moving maximization of the quality function.

    Nodes with degree 0 become UNASSIGNED. Deterministic for a fixed
    (seed, restarts); restarts run sequentially, ties keep the earliest.
    """
    n = rel.n
    active = [i for i in range(n) if rel.degree[i] > 0]
    labels_full = [UNASSIGNED] * n
    traces: list[tuple[float, ...]] = []
    if active:
        inst = _build_instance(rel, active, params.gamma)
        master = random.Random(params.seed)
        seeds = [master.getrandbits(64) for _ in range(params.restarts)]
        best_labels: list[int] | None = None
        best_q = -math.inf
        for seed in seeds:
            labels, trace = _slm_run(inst, random.Random(seed), params.max_iterations)
            traces.append(tuple(trace))
            q = _instance_quality(inst, labels)
            if best_labels is None or q > best_q:
                best_q = q
                best_labels = labels
        for idx, node in enumerate(active):
            labels_full[node] = best_labels[idx]
    assignment = canonical_assignment(labels_full)
    quality = evaluate_quality(assignment, rel, params.gamma)
    sizes = assignment.sizes()
    return ClusteringSolution(
        params=params,
        assignment=assignment,
        quality=quality,
        cluster_sizes=sizes,
        penalty_n=n,
        q_traces=tuple(traces),
    )


# ---------------------------------------------------------------------------
# Exhaustive optimizer. Set partitions are enumerated as restricted growth
# strings in lexicographic order; the whole enumeration for a given n is
# cached as an int8 matrix and instances are scored with vectorized pair
# masks, so repeated oracle calls stay cheap.
# ---------------------------------------------------------------------------

_RGS_CACHE: dict[int, np.ndarray] = {}


def _rgs_matrix(n: int) -> np.ndarray:
    cached = _RGS_CACHE.get(n)
    if cached is not None:
        return cached
    rows: list[list[int]] = []
    labels = [0] * n

    def extend(i: int, used: int):
        if i == n:
            rows.append(labels.copy())
            return
        for c in range(used + 1):
            labels[i] = c
            extend(i + 1, used + (1 if c == used else 0))

    extend(1 if n > 0 else 0, 1 if n > 0 else 0)
    matrix = np.array(rows, dtype=np.int8)
    _RGS_CACHE[n] = matrix
    return matrix


def exact_optimize(rel: RelatednessMatrix, gamma: float, max_n: int = 12) -> ClusteringSolution:
    """Globally optimal assignment by enumeration of all set partitions.

    Ties resolve to the lexicographically smallest canonical label vector.
    """
    if not gamma > 0:
        raise InputError(f"gamma must be > 0, got {gamma}")
    n = rel.n
    if n > max_n:
        raise InputError(f"exact optimization limited to n <= {max_n}, got {n}")
    params = ClusteringParams(gamma=gamma, min_cluster_size=1, seed=0,
                              restarts=1, max_iterations=1)
    if n == 0:
        return ClusteringSolution(params, Assignment((), 0), 0.0, (), 0)
    matrix = _rgs_matrix(n)
    sym = _sym_adjacency(rel)
    link = np.zeros(len(matrix))
    pairs = np.zeros(len(matrix))
    for i in range(n):
        col_i = matrix[:, i]
        for j in range(i + 1, n):
            mask = col_i == matrix[:, j]
            pairs += 2.0 * mask
            w = sym[i].get(j, 0.0)
            if w:
                link += w * mask
    scores = link - (gamma / (2.0 * n)) * pairs
    best = int(np.argmax(scores))  # first maximum = lexicographically smallest
    assignment = canonical_assignment([int(c) for c in matrix[best]])
    quality = evaluate_quality(assignment, rel, gamma)
    return ClusteringSolution(
        params=params,
        assignment=assignment,
        quality=quality,
        cluster_sizes=assignment.sizes(),
        penalty_n=n,
    )


def merge_small_clusters(solution: ClusteringSolution, rel: RelatednessMatrix) -> ClusteringSolution:
    """Fold clusters below params.min_cluster_size into their closest neighbor.

    Repeatedly takes the smallest undersized cluster (ties by lowest minimum
    member handle) and merges it into the cluster sharing the greatest summed
    relatedness with it (sum of a_ij + a_ji over cross pairs; ties by lowest
    cluster label). A cluster with zero relatedness to every other cluster
    has its members set UNASSIGNED instead.
    """
    min_size = solution.params.min_cluster_size
    x = list(solution.assignment.x)
    if len(x) != rel.n:
        raise InputError("solution does not match the relatedness matrix")
    sym = _sym_adjacency(rel)
    changed = False
    while True:
        members: dict[int, list[int]] = {}
        for node, label in enumerate(x):
            if label != UNASSIGNED:
                members.setdefault(label, []).append(node)
        undersized = [c for c, mem in members.items() if len(mem) < min_size]
        if not undersized:
            break
        changed = True
        small = min(undersized, key=lambda c: (len(members[c]), members[c][0]))
        weight_to: dict[int, float] = {}
        for node in members[small]:
            for j, w in sym[node].items():
                cj = x[j]
                if cj != UNASSIGNED and cj != small:
                    weight_to[cj] = weight_to.get(cj, 0.0) + w
        target = None
        best_w = 0.0
        for c in sorted(weight_to):
            if weight_to[c] > best_w:
                best_w = weight_to[c]
                target = c
        new_label = UNASSIGNED if target is None else target
        for node in members[small]:
            x[node] = new_label
    if not changed:
        return solution
    assignment = canonical_assignment(x)
    quality = evaluate_quality(assignment, rel, solution.params.gamma,
                               penalty_n=solution.penalty_n)
    return replace(
        solution,
        assignment=assignment,
        quality=quality,
        cluster_sizes=assignment.sizes(),
    )


def multilevel(network: CitationNetwork, levels: Sequence[ClusteringParams]) -> list[ClusteringSolution]:
    """One independent solution per parameter set, over the largest component.

    Nodes outside the largest component are UNASSIGNED. Levels are numbered
    from 1 in the given order; solutions are not forced to nest.
    """
    if not levels:
        raise InputError("at least one level of parameters is required")
    comp = components(network)
    if comp.largest is None:
        lc_nodes: list[int] = []
    else:
        lc_nodes = comp.members(comp.largest)
    sub, handles = induced_subnetwork(network, lc_nodes)
    rel = compute_relatedness(sub)
    out: list[ClusteringSolution] = []
    for index, params in enumerate(levels, start=1):
        sol = merge_small_clusters(optimize(rel, params), rel)
        x_full = [UNASSIGNED] * network.n
        for sub_i, handle in enumerate(handles):
            x_full[handle] = sol.assignment.x[sub_i]
        out.append(
            ClusteringSolution(
                params=params,
                assignment=Assignment(tuple(x_full), sol.assignment.k),
                quality=sol.quality,
                cluster_sizes=sol.cluster_sizes,
                penalty_n=sol.penalty_n,
                level=index,
                q_traces=sol.q_traces,
            )
        )
    return out


def export_clusters_tsv(solutions: Sequence[ClusteringSolution], corpus: Corpus,
                        path: str | Path) -> None:
    """clusters.tsv: publication_id, level, cluster (1-based; empty if unassigned)."""
    with open(path, "w", encoding="utf-8") as out:
        out.write("publication_id\tlevel\tcluster\n")
        for sol in solutions:
            for handle, label in enumerate(sol.assignment.x):
                cluster = "" if label == UNASSIGNED else str(label + 1)
                out.write(f"{corpus.publications[handle].id}\t{sol.level}\t{cluster}\n")


def run_report(solutions: Sequence[ClusteringSolution]) -> dict:
    return {
        "schema_version": "1",
        "levels": [
            {
                "level": sol.level,
                "gamma": sol.params.gamma,
                "min_cluster_size": sol.params.min_cluster_size,
                "seed": sol.params.seed,
                "restarts": sol.params.restarts,
                "max_iterations": sol.params.max_iterations,
                "quality": sol.quality,
                "n_clusters": sol.assignment.k,
                "penalty_n": sol.penalty_n,
                "cluster_sizes": list(sol.cluster_sizes),
            }
            for sol in solutions
        ],
    }


def write_run_report(solutions: Sequence[ClusteringSolution], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as out:
        json.dump(run_report(solutions), out, indent=2)
        out.write("\n")
