#!/usr/bin/env python3
"""Generate the bundled airline-reachability-style dataset.

The original airline reachability network (Frey & Dueck 2007; city metadata
via Benson et al. 2016) is not redistributable inside this repository, so the
bundled dataset is a deterministic synthetic reconstruction calibrated to the
published aggregate statistics of that network:

* 456 cities, 71,959 directed arcs weighted by minus the estimated travel
  time in minutes;
* exactly 34,011 mutually reachable city pairs after preprocessing;
* five planted clusters with sizes (141, 103, 96, 76, 40) whose pairwise
  connection densities match the published density table cell by cell
  (within integer-percent rounding);
* within-cluster travel times shorter than between-cluster ones, so the
  rescaled weights carry the same cluster signal as the real network.

Run from the repo root:  python3 tools/make_airline_data.py
"""

from __future__ import annotations

import os

import numpy as np

SEED = 41
N = 456
SIZES = [141, 103, 96, 76, 40]
TARGET_MUTUAL_PAIRS = 34_011
TARGET_TOTAL_ARCS = 71_959

# percent connection densities of the published case-study block structure
DENSITY_PCT = {
    (0, 0): 60, (0, 1): 29, (0, 2): 34, (0, 3): 23, (0, 4): 14,
    (1, 1): 60, (1, 2): 30, (1, 3): 21, (1, 4): 27,
    (2, 2): 45, (2, 3): 26, (2, 4): 19,
    (3, 3): 51, (3, 4): 19,
    (4, 4): 52,
}

WITHIN_TIME = (60, 480)     # minutes, uniform
BETWEEN_TIME = (360, 1440)  # minutes, uniform
ASYMMETRY = 30              # per-direction additive jitter, minutes

# rough geographic anchors per cluster: (lon, lat, lon_spread, lat_spread)
ANCHORS = [
    (-88.0, 39.5, 8.0, 3.5),    # midwest / eastern regional cities
    (-114.0, 36.5, 7.0, 5.0),   # west coast and mountain region
    (-79.0, 40.0, 6.0, 3.5),    # eastern metro corridor
    (-96.0, 38.0, 14.0, 6.0),   # national hubs, spread coast to coast
    (-122.5, 46.0, 4.0, 3.0),   # pacific northwest (plus alaska below)
]
ALASKA = (-149.0, 61.5, 3.0, 1.5)
ALASKA_CITIES = 6  # members of the last cluster placed in alaska

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "netsil", "data")


def pair_cell_counts() -> dict[tuple[int, int], int]:
    """Mutual-pair count per block cell, summing exactly to the target."""
    counts: dict[tuple[int, int], int] = {}
    for (a, b), pct in DENSITY_PCT.items():
        pairs = SIZES[a] * (SIZES[a] - 1) // 2 if a == b else SIZES[a] * SIZES[b]
        counts[(a, b)] = round(pct / 100.0 * pairs)
    deficit = TARGET_MUTUAL_PAIRS - sum(counts.values())
    # absorb the rounding deficit in the largest between-block cells; the
    # shift is far below the 0.5 percentage-point rounding granularity
    spread_cells = [(0, 1), (0, 2), (1, 2)]
    base, extra = divmod(deficit, len(spread_cells)) if deficit >= 0 else (0, 0)
    for idx, cell in enumerate(spread_cells):
        counts[cell] += base + (1 if idx < extra else 0)
    assert sum(counts.values()) == TARGET_MUTUAL_PAIRS
    return counts


def plant_clusters(rng: np.random.Generator) -> np.ndarray:
    """Random assignment of the 456 city ids to the five clusters."""
    labels = np.repeat(np.arange(len(SIZES)), SIZES)
    rng.shuffle(labels)
    return labels


def sample_mutual_pairs(rng: np.random.Generator, labels: np.ndarray) -> list[tuple[int, int]]:
    members = [np.flatnonzero(labels == c) for c in range(len(SIZES))]
    pairs: list[tuple[int, int]] = []
    for (a, b), count in sorted(pair_cell_counts().items()):
        if a == b:
            nodes = members[a]
            cell = [(int(nodes[i]), int(nodes[j]))
                    for i in range(len(nodes)) for j in range(i + 1, len(nodes))]
        else:
            cell = [(int(i), int(j)) for i in members[a] for j in members[b]]
        chosen = rng.choice(len(cell), size=count, replace=False)
        pairs.extend(cell[idx] for idx in chosen)
    return pairs


def travel_time(rng: np.random.Generator, within: bool) -> int:
    lo, hi = WITHIN_TIME if within else BETWEEN_TIME
    return int(rng.integers(lo, hi + 1))


def build_arcs(rng: np.random.Generator, labels: np.ndarray) -> dict[tuple[int, int], int]:
    arcs: dict[tuple[int, int], int] = {}
    mutual = sample_mutual_pairs(rng, labels)
    mutual_set = set()
    for i, j in mutual:
        base = travel_time(rng, labels[i] == labels[j])
        arcs[(i, j)] = base + int(rng.integers(0, ASYMMETRY + 1))
        arcs[(j, i)] = base + int(rng.integers(0, ASYMMETRY + 1))
        mutual_set.add((min(i, j), max(i, j)))

    one_directional = TARGET_TOTAL_ARCS - 2 * len(mutual)
    used_pairs = set(mutual_set)
    added = 0
    while added < one_directional:
        i = int(rng.integers(N))
        j = int(rng.integers(N))
        if i == j or (min(i, j), max(i, j)) in used_pairs:
            continue
        arcs[(i, j)] = travel_time(rng, labels[i] == labels[j])
        used_pairs.add((min(i, j), max(i, j)))
        added += 1
    assert len(arcs) == TARGET_TOTAL_ARCS
    return arcs


def make_metadata(rng: np.random.Generator, labels: np.ndarray) -> list[tuple[str, str, float, float, int]]:
    rows = []
    alaska_assigned = 0
    for i in range(N):
        c = int(labels[i])
        if c == 4 and alaska_assigned < ALASKA_CITIES:
            lon0, lat0, slon, slat = ALASKA
            alaska_assigned += 1
        else:
            lon0, lat0, slon, slat = ANCHORS[c]
        lon = float(np.clip(rng.normal(lon0, slon), -165.0, -60.0))
        lat = float(np.clip(rng.normal(lat0, slat), 18.0, 65.0))
        mu = 13.2 if c == 3 else 11.6  # hub cluster gets the larger metros
        population = int(np.exp(rng.normal(mu, 0.8)))
        rows.append((f"{i:03d}", f"City {i:03d}", lat, lon, population))
    return rows


def write_files(arcs: dict[tuple[int, int], int], meta_rows, labels: np.ndarray) -> None:
    os.makedirs(OUT_DIR, exist_ok=True)
    edge_path = os.path.join(OUT_DIR, "airline_edges.txt")
    with open(edge_path, "w", encoding="utf-8") as fh:
        fh.write("# synthetic airline reachability network: src dst -travel_minutes\n")
        for (i, j) in sorted(arcs):
            fh.write(f"{i:03d} {j:03d} {-arcs[(i, j)]}\n")
    meta_path = os.path.join(OUT_DIR, "airline_meta.csv")
    with open(meta_path, "w", encoding="utf-8") as fh:
        fh.write("id,name,lat,lon,population\n")
        for city_id, name, lat, lon, population in meta_rows:
            fh.write(f"{city_id},{name},{lat:.4f},{lon:.4f},{population}\n")
    labels_path = os.path.join(OUT_DIR, "airline_truth.csv")
    with open(labels_path, "w", encoding="utf-8") as fh:
        fh.write("id,cluster\n")
        for i in range(N):
            fh.write(f"{i:03d},{labels[i]}\n")
    print(f"wrote {edge_path}, {meta_path}, {labels_path}")


def verify() -> None:
    from netsil.airline import analyze, load_airline, preprocess

    net, _ = load_airline(
        os.path.join(OUT_DIR, "airline_edges.txt"),
        os.path.join(OUT_DIR, "airline_meta.csv"),
    )
    g = preprocess(net)
    print(f"nodes={g.n} edges={g.edge_count()}")
    assert g.n == N
    assert g.edge_count() == TARGET_MUTUAL_PAIRS, g.edge_count()
    for seed in (0, 1, 2, 20240):
        result, table = analyze(g, k_max=20, seed=seed)
        print(
            f"seed={seed}: best_k={result.best_k} sizes={table.sizes} "
            f"diag={[round(d, 1) for d in table.diagonal()]}"
        )
        curve = {k: round(v, 4) for k, v in sorted(result.curve.items())}
        print(f"  curve={curve}")


def main() -> None:
    rng = np.random.default_rng(SEED)
    labels = plant_clusters(rng)
    arcs = build_arcs(rng, labels)
    meta_rows = make_metadata(rng, labels)
    write_files(arcs, meta_rows, labels)
    verify()


if __name__ == "__main__":
    main()
