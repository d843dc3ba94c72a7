"""Simulation grid driver: scenario specs, replication, aggregation, output files.

A suite is a JSON array of scenario objects. Each scenario is replicated R
times; every replicate samples a network, sweeps K in {2..k_max} with the
silhouette criterion, and scores the selected partition against the ground
truth with the adjusted Rand index.

Output contract of ``run_suite`` (stable across parallelism degree):

* ``replicates.csv``   - one row per replicate, byte-identical for a given
  config and master seed no matter how many worker processes ran it. The
  ``runtime_ms`` column is emitted as 0 to keep the file deterministic;
  measured wall times go to ``timings.csv``.
* ``summary.csv``      - one row per scenario with the proportion of correct
  K selections and ARI quartiles (linear-interpolation quantiles).
* ``suite.json``       - manifest: config echo, package version, generator pin.
* ``timings.csv``      - measured per-replicate wall time in milliseconds.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import AggregationError, ConfigurationError
from .graph import ClusterAssignment, WeightedGraph, adjacency_from_points, generate_rings
from .metrics import adjusted_rand_index
from .sbm import (
    SizeProfile,
    WeightDistribution,
    allocate_sizes,
    build_prob_matrix,
    sample_fully_connected,
    sample_unweighted,
    sample_weighted,
)
from .seeding import GENERATOR_PIN, derive_seed, make_rng, replicate_seed
from .spectral import select_k

DEFAULT_MASTER_SEED = 20240
FULL_REPLICATES = 200
DESK_REPLICATES = 50
MAX_FAILURE_FRACTION = 0.01


@dataclass(frozen=True)
class RingsSpec:
    """Geometry of the concentric-ring scenario."""

    counts: tuple[int, ...] = (200, 200, 200)
    radii: tuple[float, ...] = (1.0, 2.0, 3.0)


@dataclass(frozen=True)
class ScenarioSpec:
    """One cell of the simulation grid."""

    id: str
    n: int
    k_true: int
    replicates: int
    master_seed: int = DEFAULT_MASTER_SEED
    k_max: int = 20
    profile: str = "EQ"
    p_win: float | None = None
    p_btw: float | None = None
    weak_pair: tuple[int, int, float] | None = None
    w_win: WeightDistribution | None = None
    w_btw: WeightDistribution | None = None
    fully_connected: bool = False
    rings: RingsSpec | None = None

    def __post_init__(self):
        if not self.id:
            raise ConfigurationError("scenario id must be nonempty")
        if self.replicates < 1:
            raise ConfigurationError(f"{self.id}: replicates must be >= 1")
        if self.k_max < 2:
            raise ConfigurationError(f"{self.id}: k_max must be >= 2")
        if self.profile not in ("EQ", "NE"):
            raise ConfigurationError(f"{self.id}: profile must be EQ or NE")
        if self.rings is not None:
            return  # geometric scenario; SBM fields unused
        if self.fully_connected:
            if self.w_win is None or self.w_btw is None:
                raise ConfigurationError(
                    f"{self.id}: fully connected scenarios need w_win and w_btw"
                )
        elif self.p_win is None or self.p_btw is None:
            raise ConfigurationError(f"{self.id}: p_win and p_btw are required")
        if (self.w_win is None) != (self.w_btw is None):
            raise ConfigurationError(
                f"{self.id}: w_win and w_btw must be given together"
            )

    def sizes(self) -> list[int]:
        return allocate_sizes(self.n, self.k_true, SizeProfile(self.profile))

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "n": self.n,
            "k_true": self.k_true,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "k_max": self.k_max,
            "profile": self.profile,
            "fully_connected": self.fully_connected,
        }
        if self.p_win is not None:
            out["p_win"] = self.p_win
        if self.p_btw is not None:
            out["p_btw"] = self.p_btw
        if self.weak_pair is not None:
            a, b, p = self.weak_pair
            out["weak_pair"] = {"a": a, "b": b, "p": p}
        if self.w_win is not None:
            out["w_win"] = {"lo": self.w_win.lo, "hi": self.w_win.hi}
        if self.w_btw is not None:
            out["w_btw"] = {"lo": self.w_btw.lo, "hi": self.w_btw.hi}
        if self.rings is not None:
            out["rings"] = {"counts": list(self.rings.counts), "radii": list(self.rings.radii)}
        return out

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioSpec":
        known = {
            "id", "n", "k_true", "replicates", "master_seed", "k_max", "profile",
            "fully_connected", "p_win", "p_btw", "weak_pair", "w_win", "w_btw", "rings",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigurationError(f"unknown scenario fields: {sorted(unknown)}")
        try:
            weak = raw.get("weak_pair")
            rings = raw.get("rings")
            return cls(
                id=raw["id"],
                n=raw["n"],
                k_true=raw["k_true"],
                replicates=raw["replicates"],
                master_seed=raw.get("master_seed", DEFAULT_MASTER_SEED),
                k_max=raw.get("k_max", 20),
                profile=raw.get("profile", "EQ"),
                p_win=raw.get("p_win"),
                p_btw=raw.get("p_btw"),
                weak_pair=(weak["a"], weak["b"], weak["p"]) if weak else None,
                w_win=WeightDistribution(**raw["w_win"]) if "w_win" in raw else None,
                w_btw=WeightDistribution(**raw["w_btw"]) if "w_btw" in raw else None,
                fully_connected=raw.get("fully_connected", False),
                rings=RingsSpec(tuple(rings["counts"]), tuple(rings["radii"])) if rings else None,
            )
        except KeyError as exc:
            raise ConfigurationError(f"scenario is missing required field {exc}") from None


@dataclass(frozen=True)
class ReplicateRecord:
    """Outcome of one simulation run."""

    scenario_id: str
    replicate: int
    seed: int
    selected_k: int | None
    ari: float | None
    curve: dict[int, float] = field(repr=False, default_factory=dict)
    runtime_ms: float = 0.0
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class ScenarioSummary:
    """Aggregate over the non-failed replicates of one scenario."""

    scenario_id: str
    r: int
    proportion_correct: float
    k_histogram: dict[int, int]
    ari_median: float
    ari_q1: float
    ari_q3: float
    failures: int = 0


def sample_scenario_graph(
    spec: ScenarioSpec, rep_seed: int
) -> tuple[WeightedGraph, ClusterAssignment]:
    """Draw one network plus ground truth for a scenario replicate."""
    if spec.rings is not None:
        pc = generate_rings(spec.rings.counts, spec.rings.radii, derive_seed(rep_seed, "sample"))
        return adjacency_from_points(pc), ClusterAssignment(pc.labels, k=len(spec.rings.counts))
    sizes = spec.sizes()
    rng = make_rng(rep_seed, "sample")
    if spec.fully_connected:
        return sample_fully_connected(sizes, spec.w_win, spec.w_btw, rng)
    p = build_prob_matrix(spec.k_true, spec.p_win, spec.p_btw, spec.weak_pair)
    if spec.w_win is not None:
        return sample_weighted(sizes, p, spec.w_win, spec.w_btw, rng)
    return sample_unweighted(sizes, p, rng)


def run_replicate(spec: ScenarioSpec, replicate: int) -> ReplicateRecord:
    """Run one replicate; failures are captured, not raised."""
    seed = replicate_seed(spec.master_seed, spec.id, replicate)
    start = time.perf_counter()
    try:
        g, truth = sample_scenario_graph(spec, seed)
        result = select_k(g, k_max=spec.k_max, seed=seed)
        ari = adjusted_rand_index(result.assignment, truth)
        return ReplicateRecord(
            scenario_id=spec.id,
            replicate=replicate,
            seed=seed,
            selected_k=result.best_k,
            ari=ari,
            curve=result.curve,
            runtime_ms=(time.perf_counter() - start) * 1000.0,
        )
    except Exception as exc:  # noqa: BLE001 - per-replicate isolation is the contract
        return ReplicateRecord(
            scenario_id=spec.id,
            replicate=replicate,
            seed=seed,
            selected_k=None,
            ari=None,
            runtime_ms=(time.perf_counter() - start) * 1000.0,
            error=f"{type(exc).__name__}: {exc}",
        )


def _replicate_task(args: tuple[ScenarioSpec, int]) -> ReplicateRecord:
    return run_replicate(*args)


def run_scenario(spec: ScenarioSpec, jobs: int = 1) -> list[ReplicateRecord]:
    """All replicates of one scenario, sorted by replicate index.

    Replicates derive independent streams from (master seed, scenario id,
    replicate index), so results do not depend on ``jobs`` or on execution
    order.
    """
    if jobs <= 1 or spec.replicates == 1:
        records = [run_replicate(spec, r) for r in range(spec.replicates)]
    else:
        tasks = [(spec, r) for r in range(spec.replicates)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_replicate_task, tasks))
    return sorted(records, key=lambda rec: rec.replicate)


def aggregate(records: list[ReplicateRecord], k_true: int) -> ScenarioSummary:
    """Summary statistics over the non-failed records.

    Quantiles use the linear-interpolation convention (numpy's default).
    """
    ok = [rec for rec in records if not rec.failed]
    if not ok:
        raise AggregationError("every replicate failed; nothing to aggregate")
    hist: dict[int, int] = {}
    for rec in ok:
        hist[rec.selected_k] = hist.get(rec.selected_k, 0) + 1
    aris = np.array([rec.ari for rec in ok])
    q1, med, q3 = np.quantile(aris, [0.25, 0.5, 0.75])
    correct = sum(1 for rec in ok if rec.selected_k == k_true)
    return ScenarioSummary(
        scenario_id=ok[0].scenario_id,
        r=len(ok),
        proportion_correct=correct / len(ok),
        k_histogram=dict(sorted(hist.items())),
        ari_median=float(med),
        ari_q1=float(q1),
        ari_q3=float(q3),
        failures=len(records) - len(ok),
    )


def load_suite(path) -> list[ScenarioSpec]:
    """Parse a suite config: a JSON array of scenario objects."""
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise ConfigurationError(f"{path}: expected a nonempty JSON array of scenarios")
    specs = [ScenarioSpec.from_dict(item) for item in raw]
    ids = [spec.id for spec in specs]
    if len(set(ids)) != len(ids):
        raise ConfigurationError(f"{path}: scenario ids must be unique")
    return specs


def save_suite(specs: list[ScenarioSpec], path) -> None:
    _atomic_write(path, json.dumps([s.to_dict() for s in specs], indent=2) + "\n")


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _fmt(value) -> str:
    """Stable CSV cell formatting: shortest round-trip repr for floats."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _dist_label(dist: WeightDistribution | None) -> str:
    return "" if dist is None else str(dist)


def write_replicates_csv(records: list[ReplicateRecord], specs_by_id: dict[str, ScenarioSpec], path) -> None:
    lines = ["scenario_id,replicate,seed,selected_k,ari,k_true,n,runtime_ms\n"]
    for rec in records:
        spec = specs_by_id[rec.scenario_id]
        lines.append(
            ",".join([
                rec.scenario_id,
                str(rec.replicate),
                str(rec.seed),
                _fmt(rec.selected_k),
                _fmt(rec.ari),
                str(spec.k_true),
                str(spec.n),
                "0",  # deterministic placeholder; measured time lives in timings.csv
            ])
            + "\n"
        )
    _atomic_write(path, "".join(lines))


def write_summary_csv(
    summaries: list[ScenarioSummary], specs_by_id: dict[str, ScenarioSpec], path
) -> None:
    lines = [
        "scenario_id,n,k_true,profile,p_win,p_btw,p_tilde,w_win,w_btw,"
        "fully_connected,R,prop_correct,ari_median,ari_q1,ari_q3\n"
    ]
    for summary in summaries:
        spec = specs_by_id[summary.scenario_id]
        p_tilde = spec.weak_pair[2] if spec.weak_pair else None
        lines.append(
            ",".join([
                spec.id,
                str(spec.n),
                str(spec.k_true),
                spec.profile,
                _fmt(spec.p_win),
                _fmt(spec.p_btw),
                _fmt(p_tilde),
                _dist_label(spec.w_win),
                _dist_label(spec.w_btw),
                _fmt(spec.fully_connected),
                str(summary.r),
                _fmt(summary.proportion_correct),
                _fmt(summary.ari_median),
                _fmt(summary.ari_q1),
                _fmt(summary.ari_q3),
            ])
            + "\n"
        )
    _atomic_write(path, "".join(lines))


def write_timings_csv(records: list[ReplicateRecord], path) -> None:
    lines = ["scenario_id,replicate,runtime_ms\n"]
    for rec in records:
        lines.append(f"{rec.scenario_id},{rec.replicate},{rec.runtime_ms:.3f}\n")
    _atomic_write(path, "".join(lines))


@dataclass(frozen=True)
class SuiteResult:
    out_dir: str
    summaries: list[ScenarioSummary]
    failed: bool


def run_suite(
    config_path,
    out_dir,
    jobs: int = 1,
    replicates_override: int | None = None,
) -> SuiteResult:
    """Execute every scenario of a suite config and write the results directory.

    Fails fast on config or I/O problems before any scenario runs. A scenario
    whose failure fraction exceeds 1% marks the whole suite as failed (the
    records are still written).
    """
    specs = load_suite(config_path)
    if replicates_override is not None:
        if replicates_override < 1:
            raise ConfigurationError("replicates override must be >= 1")
        specs = [
            ScenarioSpec.from_dict({**s.to_dict(), "replicates": replicates_override})
            for s in specs
        ]
    os.makedirs(out_dir, exist_ok=True)
    if not os.access(out_dir, os.W_OK):
        raise ConfigurationError(f"output directory {out_dir} is not writable")

    all_records: list[ReplicateRecord] = []
    summaries: list[ScenarioSummary] = []
    failed = False
    for spec in specs:
        records = run_scenario(spec, jobs=jobs)
        all_records.extend(records)
        summary = aggregate(records, spec.k_true)
        summaries.append(summary)
        if summary.failures / spec.replicates > MAX_FAILURE_FRACTION:
            failed = True

    specs_by_id = {spec.id: spec for spec in specs}
    write_replicates_csv(all_records, specs_by_id, os.path.join(out_dir, "replicates.csv"))
    write_summary_csv(summaries, specs_by_id, os.path.join(out_dir, "summary.csv"))
    write_timings_csv(all_records, os.path.join(out_dir, "timings.csv"))
    manifest = {
        "version": __version__,
        "generator": GENERATOR_PIN,
        "jobs": jobs,
        "scenarios": [spec.to_dict() for spec in specs],
    }
    _atomic_write(os.path.join(out_dir, "suite.json"), json.dumps(manifest, indent=2) + "\n")
    return SuiteResult(out_dir=str(out_dir), summaries=summaries, failed=failed)


# --- builtin suite grids -----------------------------------------------------

# within-cluster link probability -> between-cluster probabilities examined
UNWEIGHTED_GRID = {
    0.3: (0.05, 0.10, 0.15),
    0.4: (0.10, 0.15, 0.20, 0.25),
    0.5: (0.10, 0.15, 0.20, 0.25, 0.30, 0.35),
    0.6: (0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45),
}

# within-cluster link probability -> weak-pair probabilities; base p_btw 0.05
WEAK_PAIR_GRID = {
    0.3: (0.10, 0.15, 0.20),
    0.6: (0.30, 0.35, 0.40, 0.45),
}

WEIGHTED_PROB_PAIRS = ((0.3, 0.1), (0.3, 0.2), (0.6, 0.1), (0.6, 0.5))
WEIGHTED_BTW_DISTS = ((0.0, 0.2), (0.3, 0.5), (0.5, 0.7))
FULLY_CONNECTED_BTW_DISTS = ((0.0, 0.2), (0.3, 0.5), (0.5, 0.7), (0.6, 0.8))
W_WIN = WeightDistribution(0.5, 1.0)


def _g(x: float) -> str:
    return f"{x:g}"


def builtin_suites() -> dict[str, list[ScenarioSpec]]:
    """Named, fully specified scenario grids at full scale (R=200) and desk
    scale (R=50)."""
    suites: dict[str, list[ScenarioSpec]] = {}
    for label, r in (("full", FULL_REPLICATES), ("desk", DESK_REPLICATES)):
        unweighted = []
        for p_win, p_btws in UNWEIGHTED_GRID.items():
            for p_btw in p_btws:
                for n in (240, 600):
                    for k_true in (3, 8):
                        for profile in ("EQ", "NE"):
                            unweighted.append(ScenarioSpec(
                                id=f"t2-n{n}-k{k_true}-pw{_g(p_win)}-pb{_g(p_btw)}-{profile}",
                                n=n, k_true=k_true, replicates=r,
                                p_win=p_win, p_btw=p_btw, profile=profile,
                            ))
        suites[f"table2_{label}"] = unweighted

        weak = []
        for p_win, p_tildes in WEAK_PAIR_GRID.items():
            for p_tilde in p_tildes:
                for n in (240, 600):
                    for profile in ("EQ", "NE"):
                        weak.append(ScenarioSpec(
                            id=f"t3-n{n}-pw{_g(p_win)}-pt{_g(p_tilde)}-{profile}",
                            n=n, k_true=3, replicates=r,
                            p_win=p_win, p_btw=0.05, profile=profile,
                            weak_pair=(1, 2, p_tilde),  # the two smaller clusters under NE
                        ))
        suites[f"table3_{label}"] = weak

        weighted = []
        for p_win, p_btw in WEIGHTED_PROB_PAIRS:
            for lo, hi in WEIGHTED_BTW_DISTS:
                for n in (240, 600):
                    for profile in ("EQ", "NE"):
                        weighted.append(ScenarioSpec(
                            id=f"w-n{n}-pw{_g(p_win)}-pb{_g(p_btw)}-b{_g(lo)}~{_g(hi)}-{profile}",
                            n=n, k_true=3, replicates=r,
                            p_win=p_win, p_btw=p_btw, profile=profile,
                            w_win=W_WIN, w_btw=WeightDistribution(lo, hi),
                        ))
        suites[f"weighted_{label}"] = weighted

        fully = []
        for lo, hi in FULLY_CONNECTED_BTW_DISTS:
            for n in (240, 600):
                for profile in ("EQ", "NE"):
                    fully.append(ScenarioSpec(
                        id=f"fc-n{n}-b{_g(lo)}~{_g(hi)}-{profile}",
                        n=n, k_true=3, replicates=r,
                        profile=profile, fully_connected=True,
                        w_win=W_WIN, w_btw=WeightDistribution(lo, hi),
                    ))
        suites[f"fully_connected_{label}"] = fully

        suites[f"rings_{label}"] = [ScenarioSpec(
            id="rings-n600-3x200",
            n=600, k_true=3, replicates=r, rings=RingsSpec(),
        )]
    return suites
