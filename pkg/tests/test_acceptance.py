"""Acceptance gate: replays the headline benchmark results at desk scale.

One PASS/FAIL line per criterion (run with ``-s`` to see them live). Every
scenario here is fully seeded, so the observed proportions are exact
reproducible numbers, not samples.

Known state: the three knife-edge reference cells 3c, 3d and 4a do not
reproduce their pinned bounds under this pipeline and fail. Their reference
results depend on k-means implementation details that were never published:
at cell 3c the true K=3 partition outscores the merged K=2 partition by
under 0.002 silhouette, so selection hinges on whether k-means recovers the
planted partition exactly. A policy sweep (kmeans++ x25 / x1, random init
x1) moves 3c between 0.30 and 0.74 against a bound of 0.05, while weaker
policies break the strict bounds of 3a and 6 (fully connected must be
perfect) - no single policy satisfies all bounds at once. The shipped
policy (kmeans++, 25 restarts) maximizes the number of criteria met.
"""

import time

import numpy as np
import pytest

from helpers import ari_bruteforce, random_partition
from netsil.airline import BUNDLED_EDGES, BUNDLED_META, analyze, load_airline, preprocess
from netsil.graph import (
    ClusterAssignment,
    DistanceMatrix,
    WeightedGraph,
    adjacency_from_points,
    generate_rings,
)
from netsil.harness import ScenarioSpec, aggregate, run_scenario, run_suite, save_suite
from netsil.metrics import adjusted_rand_index, silhouette
from netsil.sbm import WeightDistribution
from netsil.spectral import normalized_laplacian, select_k

MASTER_SEED = 20240
JOBS = 2
_elapsed: dict[str, float] = {}


def report(criterion: str, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")


def run_cell(tag: str, replicates: int = 50, **kw):
    spec = ScenarioSpec(id=tag, replicates=replicates, master_seed=MASTER_SEED, **kw)
    start = time.perf_counter()
    records = run_scenario(spec, jobs=JOBS)
    _elapsed[tag] = time.perf_counter() - start
    return aggregate(records, spec.k_true), records


class TestCriterion1Metrics:
    def test_ari_matches_bruteforce_on_1000_pairs(self):
        start = time.perf_counter()
        rng = np.random.default_rng(77)
        mismatches = 0
        for _ in range(1000):
            n = int(rng.integers(2, 13))
            z1 = random_partition(rng, n, int(rng.integers(1, n + 1)))
            z2 = random_partition(rng, n, int(rng.integers(1, n + 1)))
            if adjusted_rand_index(z1, z2) != ari_bruteforce(z1.labels, z2.labels):
                mismatches += 1
        elapsed = time.perf_counter() - start
        ok = mismatches == 0 and elapsed < 5.0
        report("1-ari-oracle", ok, f"mismatches={mismatches}/1000, {elapsed:.2f}s")
        assert mismatches == 0
        assert elapsed < 5.0

    def test_silhouette_hand_fixture_to_1e12(self):
        d = np.zeros((4, 4))
        d[0, 1] = d[1, 0] = 0.2
        d[2, 3] = d[3, 2] = 0.4
        for i in (0, 1):
            for j in (2, 3):
                d[i, j] = d[j, i] = 0.6
        rep = silhouette(
            DistanceMatrix(d), ClusterAssignment(np.array([0, 0, 1, 1]), k=2)
        )
        err = abs(rep.global_score - 0.5)
        ok = err <= 1e-12
        report("1-silhouette-fixture", ok, f"|s_G - 0.5| = {err:.2e}")
        assert ok


class TestCriterion2Spectral:
    def test_complete_graph_spectrum_closed_form(self):
        w = np.ones((3, 3)) - np.eye(3)
        vals = np.linalg.eigvalsh(normalized_laplacian(WeightedGraph(w)))
        err = float(np.abs(vals - np.array([0.0, 1.5, 1.5])).max())
        ok = err <= 1e-8
        report("2-k3-spectrum", ok, f"max deviation {err:.2e}")
        assert ok

    def test_zero_eigenvalue_count_equals_components(self):
        rng = np.random.default_rng(88)
        bad = 0
        for _ in range(100):
            parts = int(rng.integers(1, 5))
            blocks = []
            for _ in range(parts):
                s = int(rng.integers(2, 8))
                w = np.zeros((s, s))
                order = rng.permutation(s)
                for a, b in zip(order[:-1], order[1:]):  # spanning tree keeps it connected
                    w[a, b] = w[b, a] = rng.uniform(0.1, 1.0)
                extra = rng.integers(0, s)
                for _ in range(int(extra)):
                    a, b = rng.integers(0, s, size=2)
                    if a != b:
                        w[a, b] = w[b, a] = rng.uniform(0.1, 1.0)
                blocks.append(w)
            n = sum(b.shape[0] for b in blocks)
            w = np.zeros((n, n))
            at = 0
            for b in blocks:
                s = b.shape[0]
                w[at : at + s, at : at + s] = b
                at += s
            vals = np.linalg.eigvalsh(normalized_laplacian(WeightedGraph(w)))
            if int((np.abs(vals) < 1e-8).sum()) != parts:
                bad += 1
        ok = bad == 0
        report("2-component-count", ok, f"mismatching graphs: {bad}/100")
        assert ok


class TestCriterion3Table2:
    def test_3a_n600_k3_strong_eq(self):
        summary, _ = run_cell("acc-3a", n=600, k_true=3, p_win=0.5, p_btw=0.1, profile="EQ")
        ok = summary.proportion_correct >= 0.95
        report("3a", ok, f"prop_correct={summary.proportion_correct:.3f}, need >= 0.95")
        assert ok

    def test_3b_n240_k3_sparse_eq(self):
        summary, _ = run_cell("acc-3b", n=240, k_true=3, p_win=0.3, p_btw=0.05, profile="EQ")
        ok = 0.80 <= summary.proportion_correct <= 1.0
        report("3b", ok, f"prop_correct={summary.proportion_correct:.3f}, need in [0.80, 1.0]")
        assert ok

    def test_3c_n240_k3_sparse_ne(self):
        summary, _ = run_cell("acc-3c", n=240, k_true=3, p_win=0.3, p_btw=0.05, profile="NE")
        ok = summary.proportion_correct <= 0.05
        report("3c", ok, f"prop_correct={summary.proportion_correct:.3f}, need <= 0.05")
        assert ok

    def test_3d_n240_k8_sparse_eq(self):
        summary, _ = run_cell("acc-3d", n=240, k_true=8, p_win=0.3, p_btw=0.05, profile="EQ")
        ok = summary.proportion_correct <= 0.15
        report("3d", ok, f"prop_correct={summary.proportion_correct:.3f}, need <= 0.15")
        total = sum(_elapsed[t] for t in ("acc-3a", "acc-3b", "acc-3c", "acc-3d"))
        report("3-runtime", total < 600, f"{total:.0f}s for the four cells, target < 600s")
        assert total < 600
        assert ok


class TestCriterion4WeakPair:
    def test_4a_weak_pair_p01(self):
        summary, _ = run_cell(
            "acc-4a", n=240, k_true=3, p_win=0.3, p_btw=0.05,
            weak_pair=(1, 2, 0.1), profile="EQ",
        )
        ok = 0.60 <= summary.proportion_correct <= 0.90
        report("4a", ok, f"prop_correct={summary.proportion_correct:.3f}, need in [0.60, 0.90]")
        assert ok

    def test_4b_weak_pair_p015(self):
        summary, _ = run_cell(
            "acc-4b", n=240, k_true=3, p_win=0.3, p_btw=0.05,
            weak_pair=(1, 2, 0.15), profile="EQ",
        )
        ok = summary.proportion_correct <= 0.10
        report("4b", ok, f"prop_correct={summary.proportion_correct:.3f}, need <= 0.10")
        assert ok


class TestCriterion5Weighted:
    def test_weighted_disjoint_supports(self):
        summary, _ = run_cell(
            "acc-5", n=240, k_true=3, p_win=0.6, p_btw=0.1, profile="EQ",
            w_win=WeightDistribution(0.5, 1.0), w_btw=WeightDistribution(0.0, 0.2),
        )
        ok = summary.proportion_correct >= 0.95 and summary.ari_median >= 0.99
        report("5", ok,
               f"prop_correct={summary.proportion_correct:.3f} (>= 0.95), "
               f"ari_median={summary.ari_median:.4f} (>= 0.99)")
        assert ok


class TestCriterion6FullyConnected:
    @pytest.mark.parametrize("profile", ["EQ", "NE"])
    def test_boundary_overlap_is_perfect(self, profile):
        summary, records = run_cell(
            f"acc-6-{profile}", n=240, k_true=3, profile=profile, fully_connected=True,
            w_win=WeightDistribution(0.5, 1.0), w_btw=WeightDistribution(0.3, 0.5),
        )
        min_ari = min(rec.ari for rec in records)
        ok = summary.proportion_correct == 1.0 and min_ari == 1.0
        report(f"6-{profile}", ok,
               f"prop_correct={summary.proportion_correct:.3f} (= 1.0), min ARI={min_ari}")
        assert ok


class TestCriterion7Airline:
    def test_case_study_end_to_end(self):
        start = time.perf_counter()
        net, _ = load_airline(BUNDLED_EDGES, BUNDLED_META)
        g = preprocess(net)
        nodes_ok = g.n == 456
        edges_ok = g.edge_count() == 34_011
        result, table = analyze(g, k_max=20)  # pinned default seed
        elapsed = time.perf_counter() - start

        k_ok = result.best_k == 5
        expected_sizes = [141, 103, 96, 76, 40]
        sizes = sorted(table.sizes, reverse=True)
        sizes_ok = k_ok and all(abs(s - e) <= 15 for s, e in zip(sizes, expected_sizes))
        expected_diag = [60.0, 60.0, 45.0, 51.0, 52.0]
        diag = table.diagonal()
        dens_ok = k_ok and all(abs(d - e) <= 5.0 for d, e in zip(diag, expected_diag))
        time_ok = elapsed < 120.0

        ok = nodes_ok and edges_ok and k_ok and sizes_ok and dens_ok and time_ok
        report(
            "7-airline", ok,
            f"nodes={g.n} edges={g.edge_count()} best_k={result.best_k} "
            f"sizes={sizes} diag={[round(d, 1) for d in diag]} {elapsed:.0f}s",
        )
        assert nodes_ok and edges_ok
        assert k_ok
        assert sizes_ok and dens_ok
        assert time_ok


class TestCriterion8Rings:
    def test_non_convex_overestimation(self):
        pc = generate_rings((200, 200, 200), (1.0, 2.0, 3.0), seed=7)
        g = adjacency_from_points(pc)
        result = select_k(g, k_max=20, seed=7)
        ok = result.best_k >= 10
        report("8-rings", ok, f"best_k={result.best_k}, need >= 10 (true ring count 3)")
        assert ok


class TestCriterion9Determinism:
    def test_byte_identical_across_parallelism(self, tmp_path):
        specs = [
            ScenarioSpec(id="det-a", n=60, k_true=3, replicates=8,
                         p_win=0.7, p_btw=0.1, k_max=6, master_seed=MASTER_SEED),
            ScenarioSpec(id="det-b", n=60, k_true=2, replicates=8,
                         p_win=0.8, p_btw=0.2, k_max=6, master_seed=MASTER_SEED,
                         w_win=WeightDistribution(0.5, 1.0), w_btw=WeightDistribution(0.0, 0.3)),
        ]
        config = tmp_path / "suite.json"
        save_suite(specs, config)
        run_suite(config, tmp_path / "serial", jobs=1)
        run_suite(config, tmp_path / "parallel", jobs=8)
        run_suite(config, tmp_path / "again", jobs=1)
        serial = (tmp_path / "serial" / "replicates.csv").read_bytes()
        parallel = (tmp_path / "parallel" / "replicates.csv").read_bytes()
        again = (tmp_path / "again" / "replicates.csv").read_bytes()
        ok = serial == parallel == again
        report("9-determinism", ok,
               f"jobs=1 vs jobs=8 identical: {serial == parallel}; rerun identical: {serial == again}")
        assert ok
