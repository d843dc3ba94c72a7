"""Cluster validity metrics: silhouette widths and the adjusted Rand index.

The silhouette of node i contrasts cohesion a_i (mean dissimilarity to the
rest of its own cluster, divisor n_k - 1) with separation b_i (the smallest
mean dissimilarity to any other cluster):

    s_i = (b_i - a_i) / max(a_i, b_i)

Nodes in singleton clusters get s_i = 0 by convention, as does the 0/0 case
of exactly duplicated points. The global score is the plain mean of s_i over
all nodes, singletons included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionMismatchError
from .graph import ClusterAssignment, DistanceMatrix


@dataclass(frozen=True)
class SilhouetteReport:
    """Per-node silhouette widths plus the a_i / b_i terms behind them."""

    per_node: np.ndarray
    per_node_a: np.ndarray
    per_node_b: np.ndarray
    global_score: float

    def to_dict(self) -> dict:
        return {
            "global": self.global_score,
            "per_node": self.per_node.tolist(),
            "a": self.per_node_a.tolist(),
            "b": self.per_node_b.tolist(),
        }


def silhouette(d: DistanceMatrix, z: ClusterAssignment) -> SilhouetteReport:
    """Silhouette widths of a partition under a precomputed distance matrix.

    Args:
        d: symmetric dissimilarity matrix.
        z: partition with at least two clusters, same node count as ``d``.

    Returns:
        SilhouetteReport with s_i in [-1, 1] per node and their mean. The
        final mean uses exactly-rounded summation (``math.fsum``) so the
        result is independent of node evaluation order.
    """
    if z.k < 2:
        raise ConfigurationError(
            f"silhouette needs at least 2 clusters, got {z.k}"
        )
    if d.n != z.n:
        raise DimensionMismatchError(
            f"distance matrix has {d.n} nodes, assignment has {z.n}"
        )
    n, k = d.n, z.k
    labels = z.labels
    sizes = z.sizes()

    onehot = np.zeros((n, k))
    onehot[np.arange(n), labels] = 1.0
    cluster_sums = d.dist @ onehot  # [i, c] = sum of d(i, j) over j in cluster c

    own_size = sizes[labels].astype(np.float64)
    own_sum = cluster_sums[np.arange(n), labels]
    singleton = own_size == 1
    a = np.zeros(n)
    np.divide(own_sum, own_size - 1.0, out=a, where=~singleton)

    other_means = cluster_sums / sizes[None, :].astype(np.float64)
    other_means[np.arange(n), labels] = np.inf
    b = other_means.min(axis=1)

    denom = np.maximum(a, b)
    s = np.zeros(n)
    np.divide(b - a, denom, out=s, where=denom > 0)  # 0/0 (duplicates) stays 0
    s[singleton] = 0.0

    return SilhouetteReport(
        per_node=s,
        per_node_a=a,
        per_node_b=b,
        global_score=math.fsum(s) / n,
    )


def _pair_count_terms(z1: ClusterAssignment, z2: ClusterAssignment) -> tuple[int, int, int, int]:
    """Integer contingency-table terms for the adjusted Rand index.

    Returns (sum_ij, sum_rows, sum_cols, total) where each term counts
    pairs: together in both partitions / in the first / in the second /
    all unordered pairs.
    """
    n = z1.n
    table = np.zeros((z1.k, z2.k), dtype=np.int64)
    np.add.at(table, (z1.labels, z2.labels), 1)

    def comb2(x: np.ndarray) -> int:
        x = x.astype(object)  # exact integer arithmetic, no overflow
        return int(sum(v * (v - 1) // 2 for v in x.ravel()))

    sum_ij = comb2(table)
    sum_rows = comb2(table.sum(axis=1))
    sum_cols = comb2(table.sum(axis=0))
    total = n * (n - 1) // 2
    return sum_ij, sum_rows, sum_cols, total


def ari_from_pair_terms(sum_ij: int, sum_rows: int, sum_cols: int, total: int,
                        *, partitions_equal: bool) -> float:
    """Hubert-Arabie ARI from exact integer pair counts.

    The index is (sum_ij - E) / (max - E) with E = sum_rows * sum_cols / total
    and max = (sum_rows + sum_cols) / 2. Both sides are scaled by 2 * total so
    the only floating-point operation is one final division of exact integers.
    """
    numerator = 2 * total * sum_ij - 2 * sum_rows * sum_cols
    denominator = total * (sum_rows + sum_cols) - 2 * sum_rows * sum_cols
    if denominator == 0:
        # both partitions all singletons, or both a single cluster
        return 1.0 if partitions_equal else 0.0
    return numerator / denominator


def adjusted_rand_index(z1: ClusterAssignment, z2: ClusterAssignment) -> float:
    """Chance-corrected agreement between two partitions of the same nodes.

    Returns 1 for identical partitions up to relabeling; values near 0 for
    independent partitions; can be negative. For the degenerate denominator
    (both partitions all-singletons or both one cluster) returns 1 if the
    partitions are equal and 0 otherwise.
    """
    if z1.n != z2.n:
        raise DimensionMismatchError(
            f"partitions cover {z1.n} and {z2.n} nodes"
        )
    terms = _pair_count_terms(z1, z2)
    return ari_from_pair_terms(*terms, partitions_equal=_partitions_equal(z1, z2))


def _partitions_equal(z1: ClusterAssignment, z2: ClusterAssignment) -> bool:
    """True when the two labelings induce the same set partition."""
    if z1.k != z2.k:
        return False
    mapping: dict[int, int] = {}
    for l1, l2 in zip(z1.labels.tolist(), z2.labels.tolist()):
        if mapping.setdefault(l1, l2) != l2:
            return False
    return len(set(mapping.values())) == z1.k
