import math

import numpy as np
import pytest

from conftest import barbell_graph, clique_edges, make_graph, random_connected_graph
from oracles import adjacency, brute_force_min_conductance, dense_mov

from localcd import conductance, mov_cluster, mov_seed_vector, mov_solve
from localcd.errors import AlgorithmError


def two_node():
    return make_graph([(0, 1)])


class TestMovSeedVector:
    def test_two_node_formula(self):
        s = mov_seed_vector(two_node(), [0]).values
        assert s == pytest.approx([1 / math.sqrt(2), -1 / math.sqrt(2)])

    def test_clique_symmetry(self):
        g = make_graph(clique_edges(range(4)))
        s = mov_seed_vector(g, [0]).values
        assert s[0] > 0
        assert s[1] == s[2] == s[3] < 0

    def test_d_orthogonality_and_normalization(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            g = random_connected_graph(rng, int(rng.integers(3, 30)))
            k = int(rng.integers(1, g.n))
            seeds = rng.choice(g.n, size=k, replace=False)
            s = mov_seed_vector(g, seeds).values
            d = g.degrees.astype(float)
            assert abs(float(d @ s)) < 1e-10 * g.total_volume
            assert float(s @ (d * s)) == pytest.approx(1.0, abs=1e-10)

    def test_degenerate_seed_sets_rejected(self):
        g = two_node()
        with pytest.raises(ValueError):
            mov_seed_vector(g, [])
        with pytest.raises(ValueError):
            mov_seed_vector(g, [0, 1])


class TestMovSolve:
    def test_two_node_gamma_zero(self):
        g = two_node()
        s = mov_seed_vector(g, [0])
        sol = mov_solve(g, s, 0.0)
        # The 1-dim D-orthogonal complement forces x = s.
        assert sol.x == pytest.approx(s.values, abs=1e-10)
        assert sol.kappa_achieved == pytest.approx(1.0, abs=1e-8)

    def test_invariants_and_residual(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            g = random_connected_graph(rng, int(rng.integers(3, 30)))
            seeds = rng.choice(g.n, size=int(rng.integers(1, g.n)), replace=False)
            sol = mov_solve(g, mov_seed_vector(g, seeds), 0.0)
            d = g.degrees.astype(float)
            assert float(sol.x @ (d * sol.x)) == pytest.approx(1.0, abs=1e-8)
            assert abs(float(d @ sol.x)) < 1e-8
            assert sol.residual_norm <= 1e-8
            assert sol.kappa_achieved >= 0

    @pytest.mark.parametrize("gamma", [0.0, 0.05])
    def test_matches_dense_projected_solve(self, gamma):
        rng = np.random.default_rng(37)
        for _ in range(15):
            g = random_connected_graph(rng, int(rng.integers(3, 30)))
            seeds = rng.choice(g.n, size=int(rng.integers(1, g.n)), replace=False)
            sol = mov_solve(g, mov_seed_vector(g, seeds), gamma)
            expected = dense_mov(adjacency(g), seeds, gamma)
            assert sol.x == pytest.approx(expected, abs=1e-6)

    def test_objective_no_worse_than_random_feasible_points(self):
        # Sampled optimality: any D-normalized vector, D-orthogonal to 1 and
        # meeting the achieved seed correlation, has an objective at least
        # as large.
        rng = np.random.default_rng(41)
        g = random_connected_graph(rng, 20)
        seeds = [0, 1, 2]
        s = mov_seed_vector(g, seeds)
        sol = mov_solve(g, s, 0.0)
        d = g.degrees.astype(float)
        L = np.diag(d) - adjacency(g)
        obj = float(sol.x @ (L @ sol.x))
        for _ in range(50):
            v = rng.standard_normal(g.n)
            v -= (d @ v) / d.sum()  # D-orthogonal to 1
            v /= math.sqrt(v @ (d * v))
            # Blend toward x until the correlation constraint is met.
            for theta in np.linspace(0.0, 0.9, 10):
                y = math.cos(theta) * sol.x + math.sin(theta) * v
                y /= math.sqrt(y @ (d * y))
                if (y @ (d * s.values)) ** 2 >= sol.kappa_achieved - 1e-12:
                    assert y @ (L @ y) >= obj - 1e-9
                    break

    def test_gamma_above_lambda2_raises(self):
        g = two_node()  # generalized eigenvalues are {0, 2}
        with pytest.raises(AlgorithmError):
            mov_solve(g, mov_seed_vector(g, [0]), 2.5)

    def test_disconnected_rejected(self):
        g = make_graph([(0, 1), (2, 3)])
        with pytest.raises(ValueError):
            mov_solve(g, mov_seed_vector(g, [0]), 0.0)


class TestMovCluster:
    def test_barbell_bridge_cut(self):
        g = barbell_graph(5)
        res = mov_cluster(g, list(range(5)), 0.0)
        assert sorted(res.best_prefix.tolist()) == [0, 1, 2, 3, 4]
        # Brute force over all subsets confirms this is the global optimum.
        best_set, best_phi = brute_force_min_conductance(adjacency(g))
        assert set(res.best_prefix.tolist()) == set(best_set)
        assert res.best_conductance == pytest.approx(best_phi)
        # phi of the returned side = 1 / vol(side).
        assert res.best_conductance == pytest.approx(1 / 21)

    def test_two_node_single_prefix(self):
        res = mov_cluster(two_node(), [0], 0.0)
        assert res.best_prefix.tolist() == [0]
        assert res.best_conductance == pytest.approx(1.0)

    def test_seed_side_ranks_first(self):
        g = barbell_graph(4)
        res = mov_cluster(g, [0, 1, 2, 3], 0.0)
        assert set(res.order[:4].tolist()) == {0, 1, 2, 3}
