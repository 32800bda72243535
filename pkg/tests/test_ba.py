"""Preferential-attachment generator."""

import numpy as np
import pytest

from linkclust.ba import BaParams, degree_exponent, generate_ba
from linkclust.graph import connected_component_sizes, graph_stats, triangle_count


class TestParams:
    def test_m_below_one_rejected(self):
        with pytest.raises(ValueError):
            BaParams(n=10, m=0, seed=1)

    def test_n_not_exceeding_m_rejected(self):
        with pytest.raises(ValueError):
            BaParams(n=5, m=5, seed=1)


class TestGenerate:
    @pytest.mark.parametrize("n,m", [(50, 1), (100, 3), (500, 5), (1000, 2)])
    def test_edge_count_closed_form(self, n, m):
        g = generate_ba(BaParams(n=n, m=m, seed=3))
        assert g.num_edges == m * (m + 1) // 2 + (n - m - 1) * m

    def test_every_node_has_degree_at_least_m(self):
        g = generate_ba(BaParams(n=200, m=4, seed=9))
        assert min(g.degrees()) >= 4

    def test_connected(self):
        g = generate_ba(BaParams(n=300, m=2, seed=5))
        assert connected_component_sizes(g) == [300]

    def test_m_one_gives_tree(self):
        g = generate_ba(BaParams(n=100, m=1, seed=2))
        assert g.num_edges == 99
        assert triangle_count(g) == 0
        assert connected_component_sizes(g) == [100]

    def test_same_seed_reproduces(self):
        a = generate_ba(BaParams(n=150, m=3, seed=11))
        b = generate_ba(BaParams(n=150, m=3, seed=11))
        assert a.edges == b.edges

    def test_different_seeds_differ(self):
        a = generate_ba(BaParams(n=150, m=3, seed=11))
        b = generate_ba(BaParams(n=150, m=3, seed=12))
        assert a.edges != b.edges

    def test_hubs_emerge(self):
        g = generate_ba(BaParams(n=2000, m=3, seed=4))
        assert max(g.degrees()) > 40


class TestDegreeExponent:
    def test_recovers_planted_exponent(self):
        ks = np.arange(5, 500)
        hist = {int(k): 1e6 * float(k) ** -3.0 for k in ks}
        gamma = degree_exponent(hist, k_min=5)
        assert gamma == pytest.approx(3.0, abs=0.15)

    def test_ba_exponent_near_three(self):
        g = generate_ba(BaParams(n=4000, m=5, seed=1))
        st = graph_stats(g)
        gamma = degree_exponent(st.degree_histogram, k_min=5)
        assert 2.4 < gamma < 3.4

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError):
            degree_exponent({5: 1.0, 6: 2.0}, k_min=5)
