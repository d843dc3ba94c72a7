"""Airline reachability case study: ingest, preprocess, cluster, export.

The raw network is directed with negative weights (minus the estimated
travel time in minutes between cities). Preprocessing follows two steps:
min-max rescale all arc weights to [0, 1], then symmetrize by averaging the
two rescaled weights of each mutually reachable pair. Pairs reachable in
only one direction are dropped. The resulting undirected weighted graph is
clustered with the silhouette-selected K, and the block structure is
reported as within/between connection densities.
"""

from __future__ import annotations

import csv
import json
import logging
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegenerateInputError, DimensionMismatchError
from .graph import ClusterAssignment, WeightedGraph
from .spectral import KSelectionResult, select_k

log = logging.getLogger(__name__)

EXPECTED_CITY_COUNT = 456
DEFAULT_AIRLINE_SEED = 20240

_DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
BUNDLED_EDGES = os.path.join(_DATA_DIR, "airline_edges.txt")
BUNDLED_META = os.path.join(_DATA_DIR, "airline_meta.csv")


@dataclass(frozen=True)
class CityMetadata:
    """Location and population of one city; coordinates may be absent."""

    id: str
    name: str
    lat: float | None
    lon: float | None
    population: float

    def __post_init__(self):
        if self.lat is not None and not -90.0 <= self.lat <= 90.0:
            raise ConfigurationError(f"city {self.id}: latitude {self.lat} out of range")
        if self.lon is not None and not -180.0 <= self.lon <= 180.0:
            raise ConfigurationError(f"city {self.id}: longitude {self.lon} out of range")
        if self.population < 0:
            raise ConfigurationError(f"city {self.id}: negative population")

    @property
    def has_coordinates(self) -> bool:
        return self.lat is not None and self.lon is not None


@dataclass(frozen=True)
class DirectedWeightedNetwork:
    """Directed arcs weighted by negative estimated travel time."""

    nodes: tuple[str, ...]
    arcs: dict[tuple[str, str], float]

    def __post_init__(self):
        for (src, dst) in self.arcs:
            if src == dst:
                raise ConfigurationError(f"self-arc on node {src!r}")

    @property
    def n(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class BlockDensityTable:
    """Cluster sizes and percent connection densities, upper triangle."""

    sizes: list[int]
    densities: np.ndarray  # K x K, symmetric, percent

    @property
    def k(self) -> int:
        return len(self.sizes)

    def diagonal(self) -> list[float]:
        return [float(self.densities[i, i]) for i in range(self.k)]


def load_airline(edge_path, meta_path) -> tuple[DirectedWeightedNetwork, list[CityMetadata]]:
    """Load the raw directed network and the city metadata.

    Edge file: whitespace-separated ``src dst weight`` lines, ``#`` comments,
    weights strictly negative (minus travel time in minutes). Metadata file:
    CSV with header ``id,name,lat,lon,population``; cities missing from it
    are retained without coordinates (warning).
    """
    arcs: dict[tuple[str, str], float] = {}
    nodes: set[str] = set()
    with open(edge_path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ConfigurationError(
                    f"{edge_path}:{lineno}: expected 'src dst weight', got {line.rstrip()!r}"
                )
            src, dst, raw_w = parts
            if src == dst:
                raise ConfigurationError(f"{edge_path}:{lineno}: self-arc on {src!r}")
            try:
                weight = float(raw_w)
            except ValueError:
                raise ConfigurationError(
                    f"{edge_path}:{lineno}: weight {raw_w!r} is not a number"
                ) from None
            if weight >= 0:
                raise ConfigurationError(
                    f"{edge_path}:{lineno}: weights are negative travel times, got {weight}"
                )
            if (src, dst) in arcs:
                raise ConfigurationError(f"{edge_path}:{lineno}: duplicate arc {src}->{dst}")
            arcs[(src, dst)] = weight
            nodes.add(src)
            nodes.add(dst)

    if len(nodes) != EXPECTED_CITY_COUNT:
        log.warning(
            "airline network has %d cities, expected %d", len(nodes), EXPECTED_CITY_COUNT
        )
    net = DirectedWeightedNetwork(nodes=tuple(sorted(nodes)), arcs=arcs)

    meta: list[CityMetadata] = []
    seen: set[str] = set()
    with open(meta_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"id", "name", "lat", "lon", "population"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ConfigurationError(
                f"{meta_path}: metadata needs columns {sorted(required)}"
            )
        for rownum, row in enumerate(reader, start=2):
            try:
                meta.append(CityMetadata(
                    id=row["id"],
                    name=row["name"],
                    lat=float(row["lat"]),
                    lon=float(row["lon"]),
                    population=float(row["population"]),
                ))
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"{meta_path}:{rownum}: {exc}") from None
            seen.add(row["id"])
    missing = [node for node in net.nodes if node not in seen]
    if missing:
        log.warning("%d cities have no metadata row; kept without coordinates", len(missing))
        meta.extend(
            CityMetadata(id=node, name=node, lat=None, lon=None, population=0.0)
            for node in missing
        )
    return net, meta


def preprocess(net: DirectedWeightedNetwork) -> WeightedGraph:
    """Rescale arc weights to [0, 1], then average mutually reachable pairs.

    The rescale is min-max over all existing arcs, applied before
    symmetrization, so the most negative raw weight maps to 0. Pairs with an
    arc in only one direction are dropped. If both arcs of a pair rescale to
    0 the averaged weight is 0 and the edge vanishes; such collisions are
    counted and logged (none occur in the bundled data).
    """
    if len(net.arcs) < 2:
        raise DegenerateInputError("need at least two arcs to rescale")
    values = np.array(list(net.arcs.values()))
    lo, hi = values.min(), values.max()
    if hi == lo:
        raise DegenerateInputError("all arc weights identical: rescale has zero range")

    index = {node: i for i, node in enumerate(net.nodes)}
    w = np.zeros((net.n, net.n))
    mutual = 0
    collisions = 0
    for (src, dst), weight in net.arcs.items():
        if src < dst and (dst, src) in net.arcs:
            r_fwd = (weight - lo) / (hi - lo)
            r_bwd = (net.arcs[(dst, src)] - lo) / (hi - lo)
            avg = (r_fwd + r_bwd) / 2.0
            mutual += 1
            if avg == 0.0:
                collisions += 1
                continue
            i, j = index[src], index[dst]
            w[i, j] = w[j, i] = avg
    log.info(
        "preprocess: %d mutually reachable pairs, %d zero-weight collisions, %d edges kept",
        mutual, collisions, mutual - collisions,
    )
    return WeightedGraph(w, node_ids=net.nodes)


def relabel_by_size(z: ClusterAssignment) -> ClusterAssignment:
    """Relabel clusters so that cluster 0 is the largest (ties by old label)."""
    order = sorted(range(z.k), key=lambda c: (-z.sizes()[c], c))
    mapping = np.empty(z.k, dtype=np.int64)
    for new, old in enumerate(order):
        mapping[old] = new
    return ClusterAssignment(mapping[z.labels], k=z.k)


def block_densities(g: WeightedGraph, z: ClusterAssignment) -> BlockDensityTable:
    """Percent of node pairs connected (nonzero weight) within and between clusters."""
    if g.n != z.n:
        raise DimensionMismatchError(f"graph has {g.n} nodes, assignment has {z.n}")
    sizes = z.sizes()
    present = g.weights > 0
    dens = np.zeros((z.k, z.k))
    for a in range(z.k):
        in_a = z.labels == a
        for b in range(a, z.k):
            in_b = z.labels == b
            if a == b:
                possible = sizes[a] * (sizes[a] - 1) / 2
                connected = present[np.ix_(in_a, in_a)].sum() / 2
            else:
                possible = sizes[a] * sizes[b]
                connected = present[np.ix_(in_a, in_b)].sum()
            dens[a, b] = dens[b, a] = 100.0 * connected / possible if possible else 0.0
    return BlockDensityTable(sizes=sizes.tolist(), densities=dens)


def analyze(
    g: WeightedGraph,
    k_max: int = 20,
    seed: int = DEFAULT_AIRLINE_SEED,
) -> tuple[KSelectionResult, BlockDensityTable]:
    """Silhouette-selected clustering plus the block density table.

    The returned assignment is relabeled so cluster indices run in
    descending size order, matching how the density table is reported.
    """
    result = select_k(g, k_max=k_max, seed=seed)
    z = relabel_by_size(result.assignment)
    result = KSelectionResult(best_k=result.best_k, assignment=z, curve=result.curve)
    return result, block_densities(g, z)


def export_geojson(
    g: WeightedGraph,
    z: ClusterAssignment,
    meta: list[CityMetadata],
    path,
) -> int:
    """Write cluster results as a GeoJSON FeatureCollection of points.

    Each feature carries ``cluster``, ``strength`` (sum of incident
    weights), ``name`` and ``population``. Cities without coordinates are
    omitted; returns the number of features written.
    """
    by_id = {m.id: m for m in meta}
    ids = g.node_ids or tuple(str(i) for i in range(g.n))
    strengths = g.strengths()
    features = []
    skipped = 0
    for i, node in enumerate(ids):
        m = by_id.get(node)
        if m is None or not m.has_coordinates:
            skipped += 1
            continue
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [m.lon, m.lat]},
            "properties": {
                "city_id": node,
                "name": m.name,
                "cluster": int(z.labels[i]),
                "strength": float(strengths[i]),
                "population": m.population,
            },
        })
    if skipped:
        log.warning("%d cities lack coordinates and were omitted from the map", skipped)
    collection = {"type": "FeatureCollection", "features": features}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(collection, fh, indent=2)
        fh.write("\n")
    return len(features)


def write_clusters_csv(g: WeightedGraph, z: ClusterAssignment, meta: list[CityMetadata], path) -> None:
    by_id = {m.id: m for m in meta}
    ids = g.node_ids or tuple(str(i) for i in range(g.n))
    strengths = g.strengths()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["city_id", "name", "cluster", "strength"])
        for i, node in enumerate(ids):
            name = by_id[node].name if node in by_id else node
            writer.writerow([node, name, int(z.labels[i]), repr(float(strengths[i]))])


def write_density_csv(table: BlockDensityTable, path) -> None:
    """Upper-triangular density table with cluster sizes, percent values."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cluster", "size"] + [str(c + 1) for c in range(table.k)])
        for a in range(table.k):
            row = [str(a + 1), str(table.sizes[a])]
            row += [""] * a
            row += [f"{table.densities[a, b]:.2f}" for b in range(a, table.k)]
            writer.writerow(row)


def run_case_study(
    edge_path=None,
    meta_path=None,
    out_dir=".",
    k_max: int = 20,
    seed: int = DEFAULT_AIRLINE_SEED,
) -> tuple[KSelectionResult, BlockDensityTable]:
    """End-to-end case study; writes the three output files into ``out_dir``."""
    edge_path = BUNDLED_EDGES if edge_path is None else edge_path
    meta_path = BUNDLED_META if meta_path is None else meta_path
    net, meta = load_airline(edge_path, meta_path)
    g = preprocess(net)
    log.info("preprocessed graph: %d nodes, %d edges", g.n, g.edge_count())
    result, table = analyze(g, k_max=k_max, seed=seed)
    os.makedirs(out_dir, exist_ok=True)
    write_clusters_csv(g, result.assignment, meta, os.path.join(out_dir, "airline_clusters.csv"))
    write_density_csv(table, os.path.join(out_dir, "airline_density.csv"))
    export_geojson(g, result.assignment, meta, os.path.join(out_dir, "airline_map.geojson"))
    return result, table
