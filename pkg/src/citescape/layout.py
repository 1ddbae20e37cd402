"""Aggregate cluster graphs, map embeddings, and meta-clustering.

The embedding minimizes sum_{i<j} w_ij * ||p_i - p_j||^2 subject to a unit
mean pairwise distance, by projected gradient descent with step halving:
each step renormalizes to the constraint and is accepted only if it lowers
the objective. Output is canonicalized (centroid at the origin, principal
axis along x, axis signs fixed by the largest item) so runs are comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .citnet import CitationNetwork
from .cluster import (
    UNASSIGNED,
    Assignment,
    ClusteringParams,
    RelatednessMatrix,
    canonical_assignment,
    optimize,
)
from .errors import InputError

# Disconnected graphs get virtual links of this fraction of the top weight.
_VIRTUAL_LINK_FRACTION = 1e-4


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric nonnegative weights, stored once per pair with i < j."""

    n: int
    weights: dict[tuple[int, int], float]
    labels: tuple[str, ...]
    sizes: tuple[float, ...]

    def __post_init__(self):
        if len(self.labels) != self.n or len(self.sizes) != self.n:
            raise InputError("labels and sizes must cover all items")
        for (i, j), w in self.weights.items():
            if not (0 <= i < j < self.n):
                raise InputError(f"bad weight key ({i}, {j})")
            if w < 0:
                raise InputError("weights must be nonnegative")


@dataclass(frozen=True)
class Embedding:
    coordinates: tuple[tuple[float, ...], ...]
    objective: float
    initial_objective: float


def aggregate_clusters(network: CitationNetwork, assignment: Assignment) -> WeightedGraph:
    """One item per cluster; link weights count citation edges between
    clusters in either direction. Edges touching UNASSIGNED nodes and
    within-cluster edges carry no link weight."""
    if len(assignment.x) != network.n:
        raise InputError("assignment does not cover the network")
    weights: dict[tuple[int, int], float] = {}
    for citing, cited in network.edges:
        a, b = assignment.x[citing], assignment.x[cited]
        if a == UNASSIGNED or b == UNASSIGNED or a == b:
            continue
        key = (a, b) if a < b else (b, a)
        weights[key] = weights.get(key, 0.0) + 1.0
    sizes = tuple(float(s) for s in assignment.sizes())
    labels = tuple(str(c + 1) for c in range(assignment.k))
    return WeightedGraph(assignment.k, weights, labels, sizes)


def _dense_weights(graph: WeightedGraph) -> np.ndarray:
    W = np.zeros((graph.n, graph.n))
    for (i, j), w in graph.weights.items():
        W[i, j] = w
        W[j, i] = w
    return W


def _positive_components(W: np.ndarray) -> np.ndarray:
    n = W.shape[0]
    comp = np.full(n, -1, dtype=int)
    next_id = 0
    for start in range(n):
        if comp[start] != -1:
            continue
        stack = [start]
        comp[start] = next_id
        while stack:
            node = stack.pop()
            for other in np.nonzero(W[node] > 0)[0]:
                if comp[other] == -1:
                    comp[other] = next_id
                    stack.append(int(other))
        next_id += 1
    return comp


def _mean_pairwise_distance(P: np.ndarray) -> float:
    n = len(P)
    diff = P[:, None, :] - P[None, :, :]
    dist = np.sqrt((diff * diff).sum(-1))
    return float(dist.sum() / (n * (n - 1)))


def _normalize(P: np.ndarray) -> np.ndarray:
    P = P - P.mean(axis=0)
    md = _mean_pairwise_distance(P)
    if md <= 0:
        return P
    return P / md


def _objective(W: np.ndarray, P: np.ndarray) -> float:
    diff = P[:, None, :] - P[None, :, :]
    d2 = (diff * diff).sum(-1)
    return float((W * d2).sum() / 2.0)


def _constraint_gradient(P: np.ndarray) -> np.ndarray:
    """Gradient of the mean pairwise distance at P."""
    n = len(P)
    diff = P[:, None, :] - P[None, :, :]
    dist = np.sqrt((diff * diff).sum(-1))
    safe = np.where(dist > 0, dist, 1.0)
    unit = diff / safe[:, :, None]
    return (2.0 / (n * (n - 1))) * unit.sum(axis=1)


def _descend(W: np.ndarray, P0: np.ndarray, max_iter: int = 500) -> tuple[np.ndarray, float, float]:
    deg = W.sum(axis=1)
    P = _normalize(P0)
    f = _objective(W, P)
    f_init = f
    step = 1.0 / max(1e-12, 2.0 * float(deg.max()))
    for _ in range(max_iter):
        grad = 2.0 * (deg[:, None] * P - W @ P)
        # project onto the tangent space of the unit mean-distance
        # constraint; the normal component is undone by renormalization
        normal = _constraint_gradient(P)
        nn = float((normal * normal).sum())
        if nn > 0:
            grad = grad - (float((grad * normal).sum()) / nn) * normal
        s = step
        accepted = False
        for _ in range(50):
            cand = _normalize(P - s * grad)
            fc = _objective(W, cand)
            if fc < f - 1e-14 * max(1.0, abs(f)):
                accepted = True
                break
            s *= 0.5
        if not accepted:
            break
        P, f = cand, fc
        step = min(s * 2.0, 1e6)
    return P, f, f_init


def _canonicalize(P: np.ndarray, sizes: Sequence[float]) -> np.ndarray:
    P = P - P.mean(axis=0)
    n, dim = P.shape
    if n >= 2 and dim >= 2 and float(np.abs(P).max()) > 0:
        _, _, vt = np.linalg.svd(P, full_matrices=False)
        P = P @ vt.T
    order = sorted(range(n), key=lambda i: (-sizes[i], i))
    for axis in range(dim):
        for i in order:
            value = P[i, axis]
            if abs(value) > 1e-12:
                if value < 0:
                    P[:, axis] = -P[:, axis]
                break
    return P


def vos_embed(graph: WeightedGraph, seed: int, dim: int = 2) -> Embedding:
    """Seeded constrained embedding of a weighted graph into `dim` coordinates."""
    n = graph.n
    if n < 1:
        raise InputError("cannot embed an empty graph")
    if dim not in (1, 2):
        raise InputError("dim must be 1 or 2")
    if n == 1:
        return Embedding(((0.0,) * dim,), 0.0, 0.0)
    W = _dense_weights(graph)
    max_w = float(W.max())
    if max_w <= 0:
        # nothing relates anything: every item sits at the origin
        return Embedding(tuple((0.0,) * dim for _ in range(n)), 0.0, 0.0)
    comp = _positive_components(W)
    if comp.max() > 0:
        eps = _VIRTUAL_LINK_FRACTION * max_w
        cross = comp[:, None] != comp[None, :]
        W = W + eps * cross
    if n == 2:
        # the constraint fixes the solution; place it exactly
        heavy = 0 if graph.sizes[0] >= graph.sizes[1] else 1
        coords = [[-0.5] + [0.0] * (dim - 1), [-0.5] + [0.0] * (dim - 1)]
        coords[heavy][0] = 0.5
        f = float(W[0, 1])
        return Embedding(tuple(tuple(c) for c in coords), f, f)
    rng = np.random.default_rng(seed)
    restarts = 50 if n <= 50 else 1
    best = None
    for _ in range(restarts):
        P0 = rng.standard_normal((n, dim))
        P, f, f_init = _descend(W, P0)
        if best is None or f < best[1]:
            best = (P, f, f_init)
    P, f, f_init = best
    P = _canonicalize(P, graph.sizes)
    return Embedding(tuple(tuple(float(v) for v in row) for row in P), f, f_init)


def meta_cluster(graph: WeightedGraph, gamma: float = 1.0, *,
                 seed: int = 0, restarts: int = 10) -> Assignment:
    """Group items by clustering association-strength-normalized weights.

    s_ij = 2 * W_total * w_ij / (w_i * w_j); rows of s feed the standard
    quality-function optimizer. Items without any link become their own
    singleton groups.
    """
    if graph.n == 0:
        return Assignment((), 0)
    strength = [0.0] * graph.n
    for (i, j), w in graph.weights.items():
        strength[i] += w
        strength[j] += w
    total = sum(graph.weights.values())
    pairs = []
    for (i, j), w in sorted(graph.weights.items()):
        if w > 0:
            pairs.append((i, j, 2.0 * total * w / (strength[i] * strength[j])))
    rel = RelatednessMatrix.from_symmetric_weights(graph.n, pairs)
    params = ClusteringParams(gamma=gamma, min_cluster_size=1, seed=seed, restarts=restarts)
    solution = optimize(rel, params)
    labels = list(solution.assignment.x)
    next_label = solution.assignment.k
    for i, label in enumerate(labels):
        if label == UNASSIGNED:
            labels[i] = next_label
            next_label += 1
    return canonical_assignment(labels)


def map_json(graph: WeightedGraph, embedding: Embedding, groups: Assignment) -> dict:
    """Map export consumed by the web UI; ids are 1-based item numbers."""
    items = []
    for i in range(graph.n):
        coords = embedding.coordinates[i]
        items.append({
            "id": i + 1,
            "label": graph.labels[i],
            "size": graph.sizes[i],
            "x": coords[0],
            "y": coords[1] if len(coords) > 1 else 0.0,
            "group": groups.x[i] + 1,
        })
    links = [
        {"a": i + 1, "b": j + 1, "weight": w}
        for (i, j), w in sorted(graph.weights.items())
        if w > 0
    ]
    return {"schema_version": "1", "items": items, "links": links}
