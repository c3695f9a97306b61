import numpy as np
import pytest

from oracles import adjacency, bfs_diameter

from localcd import community_diameter, load_edge_list, process_communities
from localcd.synth import (
    edges_to_graph,
    path_of_cliques,
    planted_partition,
    ring_of_cliques,
    write_dataset,
)


class TestRingOfCliques:
    def test_closed_form_counts(self):
        edges, comms = ring_of_cliques(30, 10)
        g = edges_to_graph(edges)
        assert g.n == 300
        assert g.m == 30 * 45 + 30
        assert len(comms) == 30
        assert all(len(c) == 10 for c in comms)

    def test_connected(self):
        edges, _ = ring_of_cliques(5, 4)
        assert edges_to_graph(edges).is_connected()

    def test_degenerate_params(self):
        with pytest.raises(ValueError):
            ring_of_cliques(1, 5)
        with pytest.raises(ValueError):
            ring_of_cliques(5, 1)


class TestPathOfCliques:
    def test_counts_and_bridges(self):
        edges, comms = path_of_cliques(10, 10)
        g = edges_to_graph(edges)
        assert g.n == 100
        assert g.m == 10 * 45 + 9
        assert len(comms) == 1 and len(comms[0]) == 100

    def test_end_to_end_community_diameter(self):
        edges, comms = path_of_cliques(10, 10)
        g = edges_to_graph(edges)
        assert community_diameter(g, comms[0]) > 9

    def test_grouped_communities(self):
        edges, comms = path_of_cliques(12, 4, cliques_per_community=3)
        assert len(comms) == 4
        assert all(len(c) == 12 for c in comms)
        with pytest.raises(ValueError):
            path_of_cliques(10, 4, cliques_per_community=3)

    def test_two_clique_instance(self):
        edges, comms = path_of_cliques(2, 5, cliques_per_community=1)
        g = edges_to_graph(edges)
        assert g.n == 10 and g.m == 21
        assert bfs_diameter(adjacency(g)) == 3


class TestPlantedPartition:
    def test_deterministic_for_fixed_seed(self):
        a, _ = planted_partition(4, 25, 0.5, 0.01, seed=7)
        b, _ = planted_partition(4, 25, 0.5, 0.01, seed=7)
        assert np.array_equal(a, b)
        c, _ = planted_partition(4, 25, 0.5, 0.01, seed=8)
        assert not np.array_equal(a, c)

    def test_block_structure(self):
        edges, comms = planted_partition(3, 40, 1.0, 0.0, seed=1)
        g = edges_to_graph(edges, n=120)
        assert g.m == 3 * (40 * 39 // 2)
        assert len(comms) == 3

    def test_param_validation(self):
        with pytest.raises(ValueError):
            planted_partition(1, 25, 0.5, 0.01, seed=0)
        with pytest.raises(ValueError):
            planted_partition(4, 25, 0.1, 0.5, seed=0)


class TestWriteDataset:
    def test_standard_formats_roundtrip(self, tmp_path):
        edges, comms = ring_of_cliques(4, 10)
        edge_path, cmty_path = write_dataset(tmp_path / "ds", edges, comms)
        g, idmap = load_edge_list(edge_path)
        assert g.n == 40 and g.m == 4 * 45 + 4
        table = process_communities(g, idmap, cmty_path, min_size=10)
        assert len(table) == 4
        assert all(s.size == 10 for s in table.stats)
