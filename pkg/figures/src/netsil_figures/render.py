"""Deterministic figure rendering from benchmark result files.

Five figure kinds: ``k_histogram`` (distribution of selected K for one
scenario), ``ari_boxplot`` (ARI spread per scenario, quartiles by linear
interpolation to match summary.csv), ``k_curve`` (silhouette vs K),
``map`` (geographic cluster map from GeoJSON), and ``rings`` (true rings
next to the selected clustering).

Every render reads its input fresh, validates the schema, and writes one
SVG and one PNG with identical bytes across reruns (fixed style, stripped
timestamps).
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("k_histogram", "ari_boxplot", "k_curve", "map", "rings")

_STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "netsil-figures",
}

_COLORS = plt.cm.tab10.colors + plt.cm.tab20b.colors  # 30 stable cluster colors


class SchemaError(Exception):
    """Input file does not match the expected column/property schema."""


@dataclass(frozen=True)
class FigureSpec:
    """One figure to render: kind, input file, optional scenario filter."""

    kind: str
    input_path: str
    output_stem: str
    scenario: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")


@dataclass(frozen=True)
class RenderResult:
    spec: FigureSpec
    svg_path: str
    png_path: str
    details: dict = field(default_factory=dict)


def _read_csv(path: str, required: tuple[str, ...]) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        columns = reader.fieldnames or []
        missing = [c for c in required if c not in columns]
        if missing:
            raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")
        return list(reader)


def _save(fig, stem: str) -> tuple[str, str]:
    svg_path, png_path = f"{stem}.svg", f"{stem}.png"
    fig.savefig(svg_path, metadata={"Date": None})
    fig.savefig(png_path, metadata={"Software": None})
    plt.close(fig)
    return svg_path, png_path


def _cluster_color(cluster: int):
    return _COLORS[cluster % len(_COLORS)]


def _render_k_histogram(spec: FigureSpec):
    rows = _read_csv(spec.input_path, ("scenario_id", "selected_k", "k_true"))
    if spec.scenario is not None:
        rows = [r for r in rows if r["scenario_id"] == spec.scenario]
        if not rows:
            raise SchemaError(f"{spec.input_path}: no rows for scenario {spec.scenario!r}")
    ks = [int(r["selected_k"]) for r in rows if r["selected_k"] != ""]
    if not ks:
        raise SchemaError(f"{spec.input_path}: no successful replicates to plot")
    k_true = int(rows[0]["k_true"])
    hi = max(max(ks), k_true)
    bins = np.arange(2, hi + 1)
    counts = {int(k): ks.count(k) for k in bins}

    fig, ax = plt.subplots()
    ax.bar(bins, [counts[int(k)] for k in bins], color="#4878a8", edgecolor="black", linewidth=0.4)
    ax.axvline(k_true, color="#c44e52", linestyle="--", linewidth=1.2, label=f"true K = {k_true}")
    ax.set_xlabel("selected K")
    ax.set_ylabel("replicates")
    ax.set_xticks(bins)
    ax.set_title(spec.scenario or os.path.basename(spec.input_path))
    ax.legend(frameon=False)
    return fig, {"counts": counts, "replicates": len(ks), "k_true": k_true}


def _linear_quartiles(values: np.ndarray) -> tuple[float, float, float]:
    q1, med, q3 = np.quantile(values, [0.25, 0.5, 0.75])  # linear interpolation
    return float(q1), float(med), float(q3)


def _render_ari_boxplot(spec: FigureSpec):
    rows = _read_csv(spec.input_path, ("scenario_id", "ari"))
    groups: dict[str, list[float]] = {}
    for r in rows:
        if r["ari"] == "":
            continue
        groups.setdefault(r["scenario_id"], []).append(float(r["ari"]))
    if spec.scenario is not None:
        if spec.scenario not in groups:
            raise SchemaError(f"{spec.input_path}: no rows for scenario {spec.scenario!r}")
        groups = {spec.scenario: groups[spec.scenario]}
    if not groups:
        raise SchemaError(f"{spec.input_path}: no successful replicates to plot")

    stats = []
    quartiles = {}
    for scenario_id in sorted(groups):
        values = np.array(groups[scenario_id])
        q1, med, q3 = _linear_quartiles(values)
        iqr = q3 - q1
        lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
        inside = values[(values >= lo_fence) & (values <= hi_fence)]
        stats.append({
            "label": scenario_id,
            "med": med,
            "q1": q1,
            "q3": q3,
            "whislo": float(inside.min()) if inside.size else q1,
            "whishi": float(inside.max()) if inside.size else q3,
            "fliers": values[(values < lo_fence) | (values > hi_fence)],
        })
        quartiles[scenario_id] = (q1, med, q3)

    width = max(6.0, 0.9 * len(stats) + 2.0)
    fig, ax = plt.subplots(figsize=(width, 4.0))
    ax.bxp(stats, showfliers=True)
    ax.set_ylabel("adjusted Rand index")
    ax.set_ylim(-0.05, 1.05)
    ax.tick_params(axis="x", rotation=45)
    fig.tight_layout()
    return fig, {"quartiles": quartiles, "scenarios": len(stats)}


def _render_k_curve(spec: FigureSpec):
    rows = _read_csv(spec.input_path, ("k", "silhouette"))
    if not rows:
        raise SchemaError(f"{spec.input_path}: empty curve")
    ks = [int(r["k"]) for r in rows]
    scores = [float(r["silhouette"]) for r in rows]
    best = ks[int(np.argmax(scores))]

    fig, ax = plt.subplots()
    ax.plot(ks, scores, marker="o", color="#4878a8")
    ax.axvline(best, color="#c44e52", linestyle="--", linewidth=1.2, label=f"best K = {best}")
    ax.set_xlabel("K")
    ax.set_ylabel("global silhouette")
    ax.set_xticks(ks)
    ax.set_title(os.path.basename(spec.input_path))
    ax.legend(frameon=False)
    return fig, {"best_k": best, "points": len(ks)}


def _render_map(spec: FigureSpec):
    with open(spec.input_path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("type") != "FeatureCollection" or "features" not in doc:
        raise SchemaError(f"{spec.input_path}: not a GeoJSON FeatureCollection")
    lons, lats, clusters, strengths = [], [], [], []
    for feature in doc["features"]:
        props = feature.get("properties", {})
        for key in ("cluster", "strength"):
            if key not in props:
                raise SchemaError(f"{spec.input_path}: feature missing property {key!r}")
        lon, lat = feature["geometry"]["coordinates"]
        lons.append(lon)
        lats.append(lat)
        clusters.append(int(props["cluster"]))
        strengths.append(float(props["strength"]))
    if not lons:
        raise SchemaError(f"{spec.input_path}: no features to plot")

    strengths = np.array(strengths)
    top = strengths.max() if strengths.max() > 0 else 1.0
    sizes = 8.0 + 72.0 * strengths / top
    distinct = sorted(set(clusters))

    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for c in distinct:
        mask = [cl == c for cl in clusters]
        ax.scatter(
            np.array(lons)[mask], np.array(lats)[mask], s=sizes[mask],
            color=_cluster_color(c), alpha=0.75, edgecolors="black",
            linewidths=0.3, label=f"cluster {c}",
        )
    ax.set_xlabel("longitude")
    ax.set_ylabel("latitude")
    ax.set_aspect(1.3)
    ax.legend(frameon=False, fontsize=8, loc="lower left")
    fig.tight_layout()
    return fig, {
        "clusters": len(distinct),
        "features": len(lons),
        "colors": [matplotlib.colors.to_hex(_cluster_color(c)) for c in distinct],
    }


def _render_rings(spec: FigureSpec):
    rows = _read_csv(spec.input_path, ("x", "y", "ring", "cluster"))
    if not rows:
        raise SchemaError(f"{spec.input_path}: no points to plot")
    x = np.array([float(r["x"]) for r in rows])
    y = np.array([float(r["y"]) for r in rows])
    ring = np.array([int(r["ring"]) for r in rows])
    cluster = np.array([int(r["cluster"]) for r in rows])

    fig, (ax_truth, ax_found) = plt.subplots(1, 2, figsize=(8.5, 4.2))
    for label, ax, values in (("true rings", ax_truth, ring), ("selected clustering", ax_found, cluster)):
        for c in sorted(set(values.tolist())):
            mask = values == c
            ax.scatter(x[mask], y[mask], s=6, color=_cluster_color(int(c)))
        ax.set_title(f"{label} ({len(set(values.tolist()))})")
        ax.set_aspect("equal")
    fig.tight_layout()
    return fig, {"rings": len(set(ring.tolist())), "clusters": len(set(cluster.tolist()))}


_RENDERERS = {
    "k_histogram": _render_k_histogram,
    "ari_boxplot": _render_ari_boxplot,
    "k_curve": _render_k_curve,
    "map": _render_map,
    "rings": _render_rings,
}


def render(spec: FigureSpec) -> RenderResult:
    """Render one figure; returns the written paths plus cross-checkable
    details (histogram counts, quartiles, cluster/color counts)."""
    if not os.path.isfile(spec.input_path):
        raise SchemaError(f"input file does not exist: {spec.input_path}")
    with plt.rc_context(_STYLE):
        fig, details = _RENDERERS[spec.kind](spec)
        svg_path, png_path = _save(fig, spec.output_stem)
    return RenderResult(spec=spec, svg_path=svg_path, png_path=png_path, details=details)


def _sanitize(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name)


def discover_specs(in_dir: str, out_dir: str, kinds: tuple[str, ...] = KINDS) -> list[FigureSpec]:
    """Standard figure set for a results directory.

    One k_histogram per scenario found in replicates.csv, one ari_boxplot
    over all scenarios, one k_curve per ``*curve*.csv``, a map for
    ``airline_map.geojson``, and a rings panel for ``rings_points.csv``.
    """
    specs: list[FigureSpec] = []
    replicates = os.path.join(in_dir, "replicates.csv")
    if os.path.isfile(replicates):
        if "k_histogram" in kinds:
            scenario_ids = sorted({r["scenario_id"] for r in _read_csv(replicates, ("scenario_id",))})
            specs.extend(
                FigureSpec(
                    kind="k_histogram",
                    input_path=replicates,
                    output_stem=os.path.join(out_dir, f"k_histogram__{_sanitize(sid)}"),
                    scenario=sid,
                )
                for sid in scenario_ids
            )
        if "ari_boxplot" in kinds:
            specs.append(FigureSpec(
                kind="ari_boxplot",
                input_path=replicates,
                output_stem=os.path.join(out_dir, "ari_boxplot"),
            ))
    if "k_curve" in kinds:
        for name in sorted(os.listdir(in_dir)):
            if name.endswith(".csv") and "curve" in name:
                specs.append(FigureSpec(
                    kind="k_curve",
                    input_path=os.path.join(in_dir, name),
                    output_stem=os.path.join(out_dir, f"k_curve__{_sanitize(name[:-4])}"),
                ))
    geojson = os.path.join(in_dir, "airline_map.geojson")
    if "map" in kinds and os.path.isfile(geojson):
        specs.append(FigureSpec(kind="map", input_path=geojson,
                                output_stem=os.path.join(out_dir, "airline_map")))
    rings = os.path.join(in_dir, "rings_points.csv")
    if "rings" in kinds and os.path.isfile(rings):
        specs.append(FigureSpec(kind="rings", input_path=rings,
                                output_stem=os.path.join(out_dir, "rings")))
    return specs
