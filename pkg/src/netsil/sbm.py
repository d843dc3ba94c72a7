"""Stochastic block model samplers for every benchmark regime.

Covers unweighted SBMs, weighted SBMs with uniform edge-weight distributions,
fully connected weighted networks, one-weak-pair designs, and the EQ/NE
cluster-size profiles.

Stream consumption contract (pinned for cross-run reproducibility): each
sampler takes one generator and consumes it in two passes over the unordered
node pairs in row-major (i < j) order - first one uniform per pair for edge
presence, then one uniform per pair for the edge weight. Weight draws are
made for every pair and discarded for absent edges, so the presence pattern
for a given seed is identical across the unweighted and weighted samplers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionMismatchError
from .graph import ClusterAssignment, WeightedGraph

# Dominant-cluster share of the imbalanced (NE) profile; the remainder is
# split evenly over the other clusters.
_NE_DOMINANT_DEFAULTS = {3: 0.80, 8: 0.65}


@dataclass(frozen=True)
class WeightDistribution:
    """Uniform edge-weight distribution on [lo, hi] within [0, 1]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not 0.0 <= self.lo <= self.hi <= 1.0:
            raise ConfigurationError(
                f"weight distribution needs 0 <= lo <= hi <= 1, got [{self.lo}, {self.hi}]"
            )

    def sample_from(self, u: np.ndarray) -> np.ndarray:
        """Map uniform-[0,1) draws onto [lo, hi]."""
        return self.lo + (self.hi - self.lo) * u

    @property
    def mean(self) -> float:
        return (self.lo + self.hi) / 2.0

    def __str__(self) -> str:
        return f"{self.lo:g}~{self.hi:g}"


@dataclass(frozen=True)
class SizeProfile:
    """Cluster-size profile: EQ (balanced) or NE (one dominant cluster).

    For NE the dominant fraction defaults to 0.80 at K=3 and 0.65 at K=8;
    other cluster counts require an explicit fraction.
    """

    kind: str
    dominant: float | None = None

    def __post_init__(self):
        if self.kind not in ("EQ", "NE"):
            raise ConfigurationError(f"profile kind must be EQ or NE, got {self.kind!r}")
        if self.dominant is not None and not 0.0 < self.dominant < 1.0:
            raise ConfigurationError(f"dominant fraction must be in (0, 1), got {self.dominant}")

    def dominant_for(self, k: int) -> float:
        if self.dominant is not None:
            return self.dominant
        try:
            return _NE_DOMINANT_DEFAULTS[k]
        except KeyError:
            raise ConfigurationError(
                f"NE profile has no default dominant fraction for K={k}; set one explicitly"
            ) from None


EQ = SizeProfile("EQ")
NE = SizeProfile("NE")


@dataclass(frozen=True)
class BlockProbMatrix:
    """Symmetric K x K matrix of block-pair link probabilities."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise DimensionMismatchError(f"probability matrix must be square, got {p.shape}")
        if not np.array_equal(p, p.T):
            raise ConfigurationError("probability matrix must be symmetric")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ConfigurationError("link probabilities must lie in [0, 1]")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @property
    def k(self) -> int:
        return self.probs.shape[0]


def _largest_remainder(quotas: list[float], n: int) -> list[int]:
    floors = [int(q) for q in quotas]
    leftover = n - sum(floors)
    order = sorted(range(len(quotas)), key=lambda i: (quotas[i] - floors[i], quotas[i]), reverse=True)
    for i in order[:leftover]:
        floors[i] += 1
    return floors


def allocate_sizes(n: int, k: int, profile: SizeProfile) -> list[int]:
    """Cluster sizes for n nodes and K clusters, returned descending.

    EQ splits as evenly as possible (sizes differ by at most 1). NE gives
    one cluster the dominant fraction and splits the remainder evenly.
    Largest-remainder rounding keeps the total exactly n.
    """
    if k < 2:
        raise ConfigurationError(f"need at least 2 clusters, got {k}")
    if n < k:
        raise ConfigurationError(f"cannot place {k} clusters on {n} nodes")
    if profile.kind == "EQ":
        quotas = [n / k] * k
    else:
        dom = profile.dominant_for(k)
        rest = n * (1.0 - dom) / (k - 1)
        quotas = [n * dom] + [rest] * (k - 1)
    sizes = _largest_remainder(quotas, n)
    if any(s < 1 for s in sizes):
        raise ConfigurationError(
            f"profile {profile.kind} rounds a cluster to zero size at n={n}, K={k}"
        )
    return sorted(sizes, reverse=True)


def build_prob_matrix(
    k: int,
    p_win: float,
    p_btw: float,
    weak_pair: tuple[int, int, float] | None = None,
) -> BlockProbMatrix:
    """Link-probability matrix: p_win on the diagonal, p_btw elsewhere.

    ``weak_pair=(a, b, p)`` overrides the single symmetric off-diagonal
    entry (a, b) - the designated weakly separated cluster pair.
    """
    for name, p in (("p_win", p_win), ("p_btw", p_btw)):
        if not 0.0 <= p <= 1.0:
            raise ConfigurationError(f"{name}={p} outside [0, 1]")
    probs = np.full((k, k), p_btw)
    np.fill_diagonal(probs, p_win)
    if weak_pair is not None:
        a, b, p = weak_pair
        if a == b or not (0 <= a < k and 0 <= b < k):
            raise ConfigurationError(f"weak pair ({a}, {b}) must name two distinct blocks < {k}")
        if not 0.0 <= p <= 1.0:
            raise ConfigurationError(f"weak-pair probability {p} outside [0, 1]")
        probs[a, b] = probs[b, a] = p
    return BlockProbMatrix(probs)


def block_labels(sizes: list[int]) -> ClusterAssignment:
    """Block-contiguous ground-truth labels for the given sizes."""
    labels = np.repeat(np.arange(len(sizes)), sizes)
    return ClusterAssignment(labels, k=len(sizes))


def _pair_streams(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Row-major (i < j) pair indices plus presence and weight draws."""
    iu, ju = np.triu_indices(n, k=1)
    presence = rng.random(iu.size)
    weight = rng.random(iu.size)
    return iu, ju, presence, weight


def _assemble(n: int, iu: np.ndarray, ju: np.ndarray, values: np.ndarray,
              sizes: list[int]) -> tuple[WeightedGraph, ClusterAssignment]:
    w = np.zeros((n, n))
    w[iu, ju] = values
    w[ju, iu] = values
    return WeightedGraph(w), block_labels(sizes)


def _check_sampler_args(sizes: list[int], k: int) -> int:
    if len(sizes) != k:
        raise DimensionMismatchError(f"{len(sizes)} sizes for {k} blocks")
    if any(s < 1 for s in sizes):
        raise ConfigurationError("every block needs at least one node")
    return int(sum(sizes))


def sample_unweighted(
    sizes: list[int],
    p: BlockProbMatrix,
    seed: int | np.random.Generator,
) -> tuple[WeightedGraph, ClusterAssignment]:
    """Sample an unweighted SBM; present edges have weight 1.

    Nodes are labeled block-contiguously; each unordered pair (i, j) is an
    edge independently with probability ``p[block(i), block(j)]``.
    """
    n = _check_sampler_args(sizes, p.k)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.PCG64(seed))
    labels = np.repeat(np.arange(len(sizes)), sizes)
    iu, ju, presence, _ = _pair_streams(rng, n)
    edge = presence < p.probs[labels[iu], labels[ju]]
    return _assemble(n, iu, ju, edge.astype(np.float64), sizes)


def sample_weighted(
    sizes: list[int],
    p: BlockProbMatrix,
    w_win: WeightDistribution,
    w_btw: WeightDistribution,
    seed: int | np.random.Generator,
) -> tuple[WeightedGraph, ClusterAssignment]:
    """Sample a weighted SBM.

    Edge presence follows ``sample_unweighted`` with the same seed policy;
    each present within-block edge draws its weight from ``w_win``, each
    present between-block edge from ``w_btw``.
    """
    n = _check_sampler_args(sizes, p.k)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.PCG64(seed))
    labels = np.repeat(np.arange(len(sizes)), sizes)
    iu, ju, presence, wdraw = _pair_streams(rng, n)
    edge = presence < p.probs[labels[iu], labels[ju]]
    within = labels[iu] == labels[ju]
    values = np.where(within, w_win.sample_from(wdraw), w_btw.sample_from(wdraw))
    return _assemble(n, iu, ju, np.where(edge, values, 0.0), sizes)


def sample_fully_connected(
    sizes: list[int],
    w_win: WeightDistribution,
    w_btw: WeightDistribution,
    seed: int | np.random.Generator,
) -> tuple[WeightedGraph, ClusterAssignment]:
    """Sample a fully connected weighted network: every pair is an edge."""
    k = len(sizes)
    n = _check_sampler_args(sizes, k)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(np.random.PCG64(seed))
    labels = np.repeat(np.arange(k), sizes)
    iu, ju, _, wdraw = _pair_streams(rng, n)
    within = labels[iu] == labels[ju]
    values = np.where(within, w_win.sample_from(wdraw), w_btw.sample_from(wdraw))
    return _assemble(n, iu, ju, values, sizes)
