"""netsil: silhouette-guided community detection for weighted networks.

Spectral clustering on the normalized Laplacian with the number of
communities chosen by maximizing the global silhouette width, plus the
stochastic block model benchmark harness and the airline reachability
case study built on top of it.
"""

__version__ = "0.1.0"

from .graph import (
    ClusterAssignment,
    DistanceMatrix,
    PointCloud,
    WeightedGraph,
    adjacency_from_points,
    distance_from_adjacency,
    generate_rings,
)
from .metrics import SilhouetteReport, adjusted_rand_index, silhouette
from .sbm import (
    EQ,
    NE,
    BlockProbMatrix,
    SizeProfile,
    WeightDistribution,
    allocate_sizes,
    build_prob_matrix,
    sample_fully_connected,
    sample_unweighted,
    sample_weighted,
)
from .spectral import (
    KSelectionResult,
    SpectralEmbedding,
    cluster_with_k,
    kmeans,
    normalized_laplacian,
    row_normalize,
    select_k,
    spectral_embedding,
)

__all__ = [
    "ClusterAssignment",
    "DistanceMatrix",
    "PointCloud",
    "WeightedGraph",
    "adjacency_from_points",
    "distance_from_adjacency",
    "generate_rings",
    "SilhouetteReport",
    "adjusted_rand_index",
    "silhouette",
    "EQ",
    "NE",
    "BlockProbMatrix",
    "SizeProfile",
    "WeightDistribution",
    "allocate_sizes",
    "build_prob_matrix",
    "sample_fully_connected",
    "sample_unweighted",
    "sample_weighted",
    "KSelectionResult",
    "SpectralEmbedding",
    "cluster_with_k",
    "kmeans",
    "normalized_laplacian",
    "row_normalize",
    "select_k",
    "spectral_embedding",
    "__version__",
]
