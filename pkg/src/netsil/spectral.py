"""Normalized-Laplacian spectral clustering with silhouette-selected K.

Pipeline: build L = S^{-1/2} (S - W) S^{-1/2} from the weighted adjacency,
take the eigenvectors of the K smallest eigenvalues as an embedding,
row-normalize, run seeded k-means, and score the partition with the global
silhouette under d = 1 - w. The number of clusters is the K in
{2, ..., K_max} that maximizes the score, ties broken to the smallest K.

The eigendecomposition is computed once at K_max and sliced per K: with
eigenvectors ordered by ascending eigenvalue, the K-dimensional embedding is
a prefix of the K_max-dimensional one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, EigensolverError
from .graph import ClusterAssignment, DistanceMatrix, WeightedGraph, distance_from_adjacency
from .metrics import silhouette
from .seeding import derive_seed, make_rng

KMEANS_RESTARTS = 25
KMEANS_MAX_ITER = 300
KMEANS_REL_TOL = 1e-8
KMEANS_INIT = "kmeanspp"  # or "random": K distinct rows sampled uniformly
_EIG_SLACK = 1e-8


def normalized_laplacian(g: WeightedGraph) -> np.ndarray:
    """Symmetric normalized Laplacian of a weighted graph.

    Zero-strength (isolated) nodes get a zero scaling factor, which leaves
    their row and column all zero except for the conventional diagonal 1.
    The diagonal is 1 for every node.
    """
    strengths = g.weights.sum(axis=1)
    inv_sqrt = np.zeros_like(strengths)
    positive = strengths > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(strengths[positive])
    lap = -(g.weights * np.outer(inv_sqrt, inv_sqrt))
    np.fill_diagonal(lap, 1.0)
    return lap


@dataclass(frozen=True)
class SpectralEmbedding:
    """Bottom eigenpairs of the normalized Laplacian, eigenvalues ascending."""

    vectors: np.ndarray
    eigenvalues: np.ndarray

    def __post_init__(self):
        vecs = np.asarray(self.vectors, dtype=np.float64)
        vals = np.asarray(self.eigenvalues, dtype=np.float64)
        if vecs.shape[1] != vals.shape[0]:
            raise ConfigurationError("one eigenvalue per eigenvector column required")
        if np.any(np.diff(vals) < 0):
            raise ConfigurationError("eigenvalues must be ascending")
        if vals[0] < -_EIG_SLACK or vals[-1] > 2.0 + _EIG_SLACK:
            raise ConfigurationError(
                f"normalized-Laplacian eigenvalues must lie in [0, 2], got "
                f"[{vals[0]}, {vals[-1]}]"
            )
        gram = vecs.T @ vecs
        if not np.allclose(gram, np.eye(vecs.shape[1]), atol=_EIG_SLACK):
            raise ConfigurationError("eigenvector columns must be orthonormal")
        vecs.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def k_max(self) -> int:
        return self.vectors.shape[1]


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: each column's largest-magnitude entry
    is positive (ties resolved to the lowest row index)."""
    vecs = vecs.copy()
    for j in range(vecs.shape[1]):
        lead = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[lead, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return vecs


def spectral_embedding(g: WeightedGraph, k_max: int) -> SpectralEmbedding:
    """Embedding from the k_max smallest eigenpairs of the normalized Laplacian."""
    if not 1 <= k_max <= g.n:
        raise ConfigurationError(f"k_max must be in [1, {g.n}], got {k_max}")
    lap = normalized_laplacian(g)
    try:
        vals, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"eigendecomposition of the {g.n}x{g.n} normalized Laplacian failed: {exc}"
        ) from exc
    return SpectralEmbedding(_fix_signs(vecs[:, :k_max]), vals[:k_max])


def row_normalize(emb: np.ndarray) -> np.ndarray:
    """Scale each row to unit Euclidean norm; zero rows are left as zeros."""
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    return np.divide(emb, norms, out=np.zeros_like(emb), where=norms > 0)


def _squared_distances(x: np.ndarray, centers: np.ndarray) -> np.ndarray:
    d2 = (
        (x**2).sum(axis=1)[:, None]
        + (centers**2).sum(axis=1)[None, :]
        - 2.0 * (x @ centers.T)
    )
    return np.maximum(d2, 0.0)


def _kmeanspp_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    closest = _squared_distances(x, centers[:1])[:, 0]
    for j in range(1, k):
        total = closest.sum()
        if total > 0:
            pick = rng.choice(n, p=closest / total)
        else:
            pick = int(np.argmin(closest))  # all points coincide with centers
        centers[j] = x[pick]
        closest = np.minimum(closest, _squared_distances(x, centers[j : j + 1])[:, 0])
    return centers


def _repair_empty(labels: np.ndarray, d2: np.ndarray, k: int) -> np.ndarray:
    """Reassign one point per empty cluster: reseed it at the point currently
    farthest from its own centroid, never stealing a cluster's last member."""
    counts = np.bincount(labels, minlength=k)
    empties = np.flatnonzero(counts == 0)
    if empties.size == 0:
        return labels
    own = d2[np.arange(labels.size), labels].copy()
    for empty in empties:
        candidates = np.where(counts[labels] > 1, own, -np.inf)
        far = int(np.argmax(candidates))
        if candidates[far] == -np.inf:
            break  # unreachable for k <= n, kept as a safety valve
        counts[labels[far]] -= 1
        counts[empty] += 1
        labels[far] = empty
        own[far] = -np.inf
    return labels


def _random_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    return x[rng.choice(x.shape[0], size=k, replace=False)]


def _lloyd(x: np.ndarray, k: int, rng: np.random.Generator) -> tuple[np.ndarray, float]:
    n = x.shape[0]
    init = _kmeanspp_init if KMEANS_INIT == "kmeanspp" else _random_init
    centers = init(x, k, rng)
    labels = np.full(n, -1, dtype=np.int64)
    objective = np.inf
    for _ in range(KMEANS_MAX_ITER):
        d2 = _squared_distances(x, centers)
        new_labels = _repair_empty(d2.argmin(axis=1), d2, k)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            centers[c] = x[labels == c].mean(axis=0)
        new_objective = float(((x - centers[labels]) ** 2).sum())
        if objective - new_objective < KMEANS_REL_TOL * objective:
            break
        objective = new_objective
    d2 = _squared_distances(x, centers)
    return labels, float(d2[np.arange(n), labels].sum())


def kmeans(
    points: np.ndarray,
    k: int,
    seed: int,
    restarts: int | None = None,
) -> ClusterAssignment:
    """Seeded k-means: kmeans++ initialization (see KMEANS_INIT), Lloyd
    iterations, best of ``restarts`` independent restarts by within-cluster
    sum of squares (default: module-level KMEANS_RESTARTS).

    Each restart draws from a stream derived from (seed, restart index), so
    results do not depend on execution order. Empty clusters are repaired by
    reseeding at the point farthest from its assigned centroid.
    """
    if restarts is None:
        restarts = KMEANS_RESTARTS
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if k > n:
        raise ConfigurationError(f"cannot form {k} clusters from {n} points")
    if k < 1:
        raise ConfigurationError(f"cluster count must be positive, got {k}")
    if restarts < 1:
        raise ConfigurationError(f"need at least one restart, got {restarts}")
    best_labels = None
    best_objective = np.inf
    for r in range(restarts):
        labels, objective = _lloyd(points, k, make_rng(seed, "restart", r))
        if objective < best_objective:
            best_labels, best_objective = labels, objective
    return ClusterAssignment(best_labels, k=k)


@dataclass(frozen=True)
class KSelectionResult:
    """Outcome of the silhouette sweep over candidate cluster counts."""

    best_k: int
    assignment: ClusterAssignment
    curve: dict[int, float]
    per_k_assignments: dict[int, ClusterAssignment] | None = None


def cluster_with_k(
    g: WeightedGraph,
    emb: SpectralEmbedding,
    k: int,
    seed: int,
    dist: DistanceMatrix | None = None,
) -> tuple[ClusterAssignment, float]:
    """Cluster at a fixed K and score it.

    Slices the first K embedding columns, row-normalizes, runs k-means on a
    stream derived from (seed, K), and evaluates the global silhouette on
    the graph-induced distances (d = 1 - w).
    """
    if not 2 <= k <= emb.k_max:
        raise ConfigurationError(f"K must be in [2, {emb.k_max}], got {k}")
    x = row_normalize(emb.vectors[:, :k])
    z = kmeans(x, k, derive_seed(seed, "kmeans-k", k))
    if dist is None:
        dist = distance_from_adjacency(g)
    return z, silhouette(dist, z).global_score


def select_k(
    g: WeightedGraph,
    k_max: int = 20,
    seed: int = 0,
    keep_assignments: bool = False,
) -> KSelectionResult:
    """Select the number of clusters by maximizing the global silhouette
    over K in {2, ..., k_max}; exact ties go to the smallest K.

    The spectral embedding is computed once at k_max and sliced per K.
    k_max is capped at the node count for small graphs.
    """
    if k_max < 2:
        raise ConfigurationError(f"k_max must be at least 2, got {k_max}")
    if g.n < 2:
        raise ConfigurationError("cannot select a cluster count on fewer than 2 nodes")
    emb = spectral_embedding(g, min(k_max, g.n))
    dist = distance_from_adjacency(g)
    curve: dict[int, float] = {}
    assignments: dict[int, ClusterAssignment] = {}
    best_k = None
    best_score = -np.inf
    for k in range(2, min(k_max, g.n) + 1):
        z, score = cluster_with_k(g, emb, k, seed, dist=dist)
        curve[k] = score
        if keep_assignments:
            assignments[k] = z
        if score > best_score:
            best_k, best_score, best_z = k, score, z
    return KSelectionResult(
        best_k=best_k,
        assignment=best_z,
        curve=curve,
        per_k_assignments=assignments if keep_assignments else None,
    )
