"""Shared test utilities: brute-force oracles and random-instance builders.

The oracles here are deliberately naive (explicit pair/node loops) and stay
independent of the vectorized implementations they check.
"""

from __future__ import annotations

import numpy as np

from netsil.graph import ClusterAssignment, DistanceMatrix


def random_partition(rng: np.random.Generator, n: int, k: int) -> ClusterAssignment:
    """Uniformly random labeling with every cluster index used at least once."""
    labels = np.empty(n, dtype=np.int64)
    labels[:k] = np.arange(k)
    labels[k:] = rng.integers(0, k, size=n - k)
    rng.shuffle(labels)
    return ClusterAssignment(labels, k=k)


def random_distance_matrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> DistanceMatrix:
    d = rng.uniform(0.0, scale, size=(n, n))
    d = np.triu(d, k=1)
    return DistanceMatrix(d + d.T)


def ari_bruteforce(labels1, labels2) -> float:
    """Adjusted Rand index by explicit O(n^2) pair counting."""
    labels1 = list(labels1)
    labels2 = list(labels2)
    n = len(labels1)
    together_both = together_first = together_second = 0
    for i in range(n):
        for j in range(i + 1, n):
            same1 = labels1[i] == labels1[j]
            same2 = labels2[i] == labels2[j]
            together_both += same1 and same2
            together_first += same1
            together_second += same2
    total = n * (n - 1) // 2
    numerator = 2 * total * together_both - 2 * together_first * together_second
    denominator = total * (together_first + together_second) - 2 * together_first * together_second
    if denominator == 0:
        groups1 = {l: {i for i, v in enumerate(labels1) if v == l} for l in set(labels1)}
        groups2 = {l: {i for i, v in enumerate(labels2) if v == l} for l in set(labels2)}
        return 1.0 if set(map(frozenset, groups1.values())) == set(map(frozenset, groups2.values())) else 0.0
    return numerator / denominator


def silhouette_bruteforce(dist: np.ndarray, labels) -> list[float]:
    """Per-node silhouette widths by explicit loops over nodes and clusters."""
    labels = list(labels)
    n = len(labels)
    clusters = sorted(set(labels))
    widths = []
    for i in range(n):
        own = [j for j in range(n) if labels[j] == labels[i] and j != i]
        if not own:
            widths.append(0.0)
            continue
        a = sum(dist[i, j] for j in own) / len(own)
        b = min(
            sum(dist[i, j] for j in range(n) if labels[j] == c) / labels.count(c)
            for c in clusters
            if c != labels[i]
        )
        top = max(a, b)
        widths.append(0.0 if top == 0 else (b - a) / top)
    return widths
