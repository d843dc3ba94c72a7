"""Core graph data types, distance construction, and the concentric-ring generator.

Weights are similarities in [0, 1]; the induced dissimilarity is d_ij = 1 - w_ij.
All matrices are dense: every network handled here has at most ~1000 nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, DimensionMismatchError


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected weighted graph as a dense symmetric adjacency matrix.

    Invariants: zero diagonal (no self-loops), exact symmetry, and every
    weight in [0, 1]. A weight of 0 means "no edge".
    """

    weights: np.ndarray
    node_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise DimensionMismatchError(f"adjacency must be square, got {w.shape}")
        if not np.array_equal(w, w.T):
            raise ConfigurationError("adjacency must be exactly symmetric")
        if np.any(np.diag(w) != 0.0):
            raise ConfigurationError("self-loops are excluded: diagonal must be zero")
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise ConfigurationError("weights must lie in [0, 1]")
        if self.node_ids is not None and len(self.node_ids) != w.shape[0]:
            raise DimensionMismatchError(
                f"{len(self.node_ids)} node ids for {w.shape[0]} nodes"
            )
        object.__setattr__(self, "weights", _freeze(w))

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def edge_count(self) -> int:
        """Number of unordered pairs with nonzero weight."""
        return int(np.count_nonzero(np.triu(self.weights, k=1)))

    def strengths(self) -> np.ndarray:
        """Per-node strength: sum of incident edge weights."""
        return self.weights.sum(axis=1)


@dataclass(frozen=True)
class DistanceMatrix:
    """Dense symmetric dissimilarity matrix with zero diagonal, entries in [0, 1]."""

    dist: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise DimensionMismatchError(f"distance matrix must be square, got {d.shape}")
        if not np.array_equal(d, d.T):
            raise ConfigurationError("distance matrix must be exactly symmetric")
        if np.any(np.diag(d) != 0.0):
            raise ConfigurationError("distance matrix must have zero diagonal")
        if np.any(d < 0.0) or np.any(d > 1.0):
            raise ConfigurationError("distances must lie in [0, 1]")
        object.__setattr__(self, "dist", _freeze(d))

    @property
    def n(self) -> int:
        return self.dist.shape[0]


@dataclass(frozen=True)
class ClusterAssignment:
    """Hard partition of n nodes into clusters 0..K-1, every cluster nonempty."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        lab = np.asarray(self.labels, dtype=np.int64)
        if lab.ndim != 1:
            raise DimensionMismatchError("labels must be a 1-D vector")
        if self.k < 1:
            raise ConfigurationError(f"cluster count must be >= 1, got {self.k}")
        present = np.unique(lab)
        if present.size != self.k or present[0] != 0 or present[-1] != self.k - 1:
            raise ConfigurationError(
                f"labels must use every index in 0..{self.k - 1} at least once"
            )
        object.__setattr__(self, "labels", _freeze(lab))

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    def sizes(self) -> np.ndarray:
        """Cluster sizes n_k, indexed by cluster."""
        return np.bincount(self.labels, minlength=self.k)


@dataclass(frozen=True)
class PointCloud:
    """2-D points with ground-truth ring labels."""

    points: np.ndarray
    labels: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        lab = np.asarray(self.labels, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DimensionMismatchError(f"points must be n x 2, got {pts.shape}")
        if lab.shape != (pts.shape[0],):
            raise DimensionMismatchError("one label per point required")
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "labels", _freeze(lab))

    @property
    def n(self) -> int:
        return self.points.shape[0]


def distance_from_adjacency(g: WeightedGraph) -> DistanceMatrix:
    """Dissimilarity induced by the adjacency: d_ij = 1 - w_ij off the diagonal.

    Absent edges (weight 0) are at maximal distance 1; the diagonal stays 0.
    """
    d = 1.0 - g.weights
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(d)


def generate_rings(
    counts: tuple[int, ...],
    radii: tuple[float, ...],
    seed: int,
) -> PointCloud:
    """Sample concentric rings: counts[r] points at exact radius radii[r].

    Angles are drawn uniformly on [0, 2*pi) from a generator seeded with
    ``seed``, ring by ring; no radial noise is added. Labels record the
    ring index.
    """
    if len(counts) != len(radii):
        raise ConfigurationError(
            f"{len(counts)} ring counts but {len(radii)} radii"
        )
    if len(counts) == 0:
        raise ConfigurationError("at least one ring required")
    if any(c <= 0 for c in counts):
        raise ConfigurationError("ring counts must be positive")
    if any(r < 0 for r in radii):
        raise ConfigurationError("radii must be nonnegative")
    rng = np.random.Generator(np.random.PCG64(seed))
    chunks = []
    labels = []
    for ring, (count, radius) in enumerate(zip(counts, radii)):
        theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
        chunks.append(np.column_stack([radius * np.cos(theta), radius * np.sin(theta)]))
        labels.append(np.full(count, ring, dtype=np.int64))
    return PointCloud(np.vstack(chunks), np.concatenate(labels))


def adjacency_from_points(pc: PointCloud) -> WeightedGraph:
    """Similarity graph from 2-D points: 1 minus min-max-rescaled Euclidean distance.

    The rescale runs over all off-diagonal pairs, so the closest pair gets
    weight 1 and the farthest weight 0. A point set whose pairwise distances
    are all equal (e.g. exactly two points) has zero range and is rejected.
    """
    pts = pc.points
    n = pts.shape[0]
    if n < 2:
        raise DegenerateInputError("need at least two points")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    iu = np.triu_indices(n, k=1)
    lo, hi = dist[iu].min(), dist[iu].max()
    if hi == lo:
        raise DegenerateInputError(
            "all pairwise distances identical: min-max rescale has zero range"
        )
    w = 1.0 - (dist - lo) / (hi - lo)
    np.fill_diagonal(w, 0.0)
    return WeightedGraph(np.clip(w, 0.0, 1.0))


def read_edge_list(path) -> WeightedGraph:
    """Read an undirected weighted edge list.

    Format: UTF-8 text, one edge per line as ``src<TAB>dst<TAB>weight``,
    ``#``-prefixed comment lines ignored. Each undirected edge appears once.
    Nodes are ordered lexicographically by id in the returned graph.
    """
    edges: dict[tuple[str, str], float] = {}
    nodes: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ConfigurationError(
                    f"{path}:{lineno}: expected 'src<TAB>dst<TAB>weight', got {line!r}"
                )
            src, dst, raw_w = parts
            if src == dst:
                raise ConfigurationError(f"{path}:{lineno}: self-loop on {src!r}")
            try:
                weight = float(raw_w)
            except ValueError:
                raise ConfigurationError(
                    f"{path}:{lineno}: weight {raw_w!r} is not a number"
                ) from None
            if not 0.0 <= weight <= 1.0:
                raise ConfigurationError(
                    f"{path}:{lineno}: weight {weight} outside [0, 1]"
                )
            key = (src, dst) if src < dst else (dst, src)
            if key in edges:
                raise ConfigurationError(
                    f"{path}:{lineno}: duplicate edge {key[0]!r}-{key[1]!r}"
                )
            edges[key] = weight
            nodes.add(src)
            nodes.add(dst)
    if not nodes:
        raise ConfigurationError(f"{path}: no edges found")
    order = sorted(nodes)
    index = {node: i for i, node in enumerate(order)}
    w = np.zeros((len(order), len(order)))
    for (src, dst), weight in edges.items():
        i, j = index[src], index[dst]
        w[i, j] = w[j, i] = weight
    return WeightedGraph(w, node_ids=tuple(order))


def write_edge_list(g: WeightedGraph, path) -> None:
    """Write nonzero edges once each, src < dst lexicographically."""
    ids = g.node_ids or tuple(str(i) for i in range(g.n))
    lines = []
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if g.weights[i, j] != 0.0:
                a, b = sorted((ids[i], ids[j]))
                lines.append(f"{a}\t{b}\t{float(g.weights[i, j])!r}\n")
    lines.sort()
    with open(path, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
