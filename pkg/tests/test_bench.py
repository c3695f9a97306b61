import math

import numpy as np
import pytest

from localcd import bench
from localcd.bench import (
    ExperimentRecord,
    aggregate_records,
    csv_to_records,
    json_to_records,
    load_bundle,
    preprocess_dataset,
    records_to_csv,
    results_to_json,
    run_augment_bench,
    run_detect_bench,
    run_extract_bench,
    sample_seeds,
)
from localcd.synth import path_of_cliques, planted_partition, ring_of_cliques, write_dataset


@pytest.fixture(scope="module")
def two_clique_bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("twoclique")
    edges, comms = path_of_cliques(2, 5, cliques_per_community=1)
    edge_path, cmty_path = write_dataset(out / "raw", edges, comms)
    return preprocess_dataset(edge_path, cmty_path, out / "bundle", name="twoclique", min_size=2)


@pytest.fixture(scope="module")
def ring_bundle(tmp_path_factory):
    out = tmp_path_factory.mktemp("ring")
    edges, comms = ring_of_cliques(12, 10)
    edge_path, cmty_path = write_dataset(out / "raw", edges, comms)
    return preprocess_dataset(edge_path, cmty_path, out / "bundle", name="ring12")


class TestAggregation:
    def test_hand_computed_means_and_semideviations(self):
        records = [
            ExperimentRecord("d", "a", "", 0, 1, recall=0.4),
            ExperimentRecord("d", "a", "", 0, 2, recall=0.6),  # community 0 mean 0.5
            ExperimentRecord("d", "a", "", 1, 3, recall=0.9),  # community 1 mean 0.9
            ExperimentRecord("d", "a", "", 2, 4, recall=0.1),  # community 2 mean 0.1
        ]
        aggs = {a.metric: a for a in aggregate_records(records, metrics=("recall",))}
        agg = aggs["recall"]
        assert agg.n_communities == 3
        assert agg.mean == pytest.approx(0.5)
        assert agg.upper_semideviation == pytest.approx(math.sqrt(0.4**2 / 3))
        assert agg.lower_semideviation == pytest.approx(math.sqrt(0.4**2 / 3))

    def test_missing_metrics_skipped(self):
        records = [
            ExperimentRecord("d", "a", "", 0, 1, recall=1.0),
            ExperimentRecord("d", "a", "", 0, 2),  # failed row
        ]
        aggs = aggregate_records(records, metrics=("recall", "f1"))
        assert len(aggs) == 1  # no f1 values anywhere
        assert aggs[0].mean == 1.0


class TestEmission:
    def _records(self):
        return [
            ExperimentRecord("d", "alg", "alpha=0.5", 0, 7, recall=0.25,
                             precision=1 / 3, f1=0.4, size=12,
                             conductance=0.125, seconds=0.002),
            ExperimentRecord("d", "alg", "alpha=0.5", 1, 8),
        ]

    def test_csv_roundtrip_lossless(self):
        records = self._records()
        back = csv_to_records(records_to_csv(records))
        assert back == records

    def test_json_roundtrip_lossless(self):
        records = self._records()
        text = results_to_json(records, aggregate_records(records))
        assert json_to_records(text) == records

    def test_csv_json_cross_roundtrip(self):
        records = self._records()
        via_csv = csv_to_records(records_to_csv(records))
        via_json = json_to_records(results_to_json(via_csv, []))
        assert via_json == records


class TestSampling:
    def test_sample_caps_and_is_deterministic(self):
        members = np.arange(100)
        a = sample_seeds(members, 5, rng_seed=1, community_id=3)
        b = sample_seeds(members, 5, rng_seed=1, community_id=3)
        c = sample_seeds(members, 5, rng_seed=1, community_id=4)
        assert len(a) == 5
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)
        assert np.array_equal(sample_seeds(members, None, 0, 0), members)


class TestExtractBench:
    def test_sample_one_record_per_community(self, ring_bundle):
        records = run_extract_bench(ring_bundle, methods=("kwalk2",), sample=1)
        assert len(records) == len(ring_bundle.communities)
        assert all(r.recall is not None for r in records)

    def test_kwalk2_perfect_recall_on_cliques(self, ring_bundle):
        records = run_extract_bench(ring_bundle, methods=("kwalk2",), sample=2)
        assert all(r.recall == 1.0 for r in records)

    def test_determinism_modulo_seconds(self, ring_bundle):
        a = run_extract_bench(ring_bundle, methods=("ppr-d",), sample=2)
        b = run_extract_bench(ring_bundle, methods=("ppr-d",), sample=2)
        strip = lambda recs: [
            (r.dataset, r.algorithm, r.params, r.community_id, r.seed_raw_id,
             r.recall, r.size)
            for r in recs
        ]
        assert strip(a) == strip(b)

    def test_threads_match_serial(self, ring_bundle):
        serial = run_extract_bench(ring_bundle, methods=("kwalk3",), sample=2, threads=1)
        threaded = run_extract_bench(ring_bundle, methods=("kwalk3",), sample=2, threads=4)
        assert [r.recall for r in serial] == [r.recall for r in threaded]


class TestAugmentBench:
    def test_clique_precision_is_one(self, ring_bundle):
        records = run_augment_bench(ring_bundle, methods=("ppr", "hk", "kwalk2"), sample=2)
        for rec in records:
            assert rec.precision == 1.0
            assert rec.size == 3

    def test_tau_larger_than_support(self, two_clique_bundle):
        # kwalk1 from a clique node reaches only the clique (plus bridge);
        # tau exceeding the candidate pool yields a shorter list.
        records = run_augment_bench(
            two_clique_bundle, methods=("kwalk1",), tau=50, sample=1
        )
        for rec in records:
            assert rec.size < 50
            assert rec.precision is not None


class TestDetectBench:
    def test_two_clique_all_algorithms_perfect(self, two_clique_bundle):
        records = run_detect_bench(two_clique_bundle, sample=None)
        assert len(records) == 6 * 10  # 6 algorithms x 10 seeds
        for rec in records:
            assert rec.f1 == 1.0, (rec.algorithm, rec.seed_raw_id)
            assert rec.size == 5
            assert rec.conductance == pytest.approx(1 / 21)

    def test_row_sorted_and_complete(self, two_clique_bundle):
        records = run_detect_bench(two_clique_bundle, algorithms=("hk", "ppr"))
        keys = [(r.dataset, r.algorithm, r.community_id, r.seed_raw_id) for r in records]
        assert keys == sorted(keys)

    def test_subgraph_modes_report_full_graph_conductance(self, two_clique_bundle):
        records = run_detect_bench(two_clique_bundle, algorithms=("pprs",), sample=1)
        for rec in records:
            assert rec.conductance == pytest.approx(1 / 21)


class TestPreprocessBundle:
    def test_roundtrip(self, tmp_path):
        edges, comms = planted_partition(4, 25, 0.6, 0.06, seed=7)
        edge_path, cmty_path = write_dataset(tmp_path / "raw", edges, comms)
        bundle = preprocess_dataset(edge_path, cmty_path, tmp_path / "b", name="pp")
        loaded = load_bundle(tmp_path / "b")
        assert loaded.name == "pp"
        assert loaded.graph.n == bundle.graph.n
        assert loaded.graph.m == bundle.graph.m
        assert len(loaded.communities) == len(bundle.communities)
        assert np.array_equal(
            loaded.communities.communities[0], bundle.communities.communities[0]
        )

    def test_small_communities_rejected_unless_overridden(self, tmp_path):
        edges, comms = path_of_cliques(2, 5, cliques_per_community=1)
        edge_path, cmty_path = write_dataset(tmp_path / "raw", edges, comms)
        strict = preprocess_dataset(edge_path, cmty_path, tmp_path / "s", min_size=10)
        assert len(strict.communities) == 0
        loose = preprocess_dataset(edge_path, cmty_path, tmp_path / "l", min_size=2)
        assert len(loose.communities) == 2
