"""Similarity indices and the score table."""

import math

import numpy as np
import pytest

from linkclust.graph import Graph, build_graph
from linkclust.predict import (
    PredictorSpec,
    ScoreTable,
    rooted_pagerank_columns,
    score_aa,
    score_all,
    score_cn,
    score_cn_all,
    score_katz_all,
    score_ra,
    score_ra_all,
    score_rooted_pr_all,
    score_srw_all,
    spectral_radius_estimate,
    walk_probability_columns,
)
from oracles import katz_by_walk_enumeration, mc_walk_occupation


@pytest.fixture
def wedge_pair():
    # 0 and 1 share neighbors 2 (degree 2) and 3 (degree 3)
    return Graph.from_edges(5, [(0, 2), (1, 2), (0, 3), (1, 3), (3, 4)])


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges) if edges else None


class TestSpec:
    def test_katz_requires_beta(self):
        with pytest.raises(ValueError):
            PredictorSpec(kind="katz")

    def test_pr_beta_range(self):
        with pytest.raises(ValueError):
            PredictorSpec(kind="pr", beta=1.0)

    def test_cn_takes_no_beta(self):
        with pytest.raises(ValueError):
            PredictorSpec(kind="cn", beta=0.1)

    def test_srw_steps_default(self):
        assert PredictorSpec(kind="srw").steps == 3

    def test_srw_steps_positive(self):
        with pytest.raises(ValueError):
            PredictorSpec(kind="srw", steps=0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown method"):
            PredictorSpec(kind="jaccard")

    def test_params_label(self):
        assert PredictorSpec(kind="katz", beta=0.005).params_label() == "beta=0.005"
        assert PredictorSpec(kind="srw", steps=4).params_label() == "steps=4"
        assert PredictorSpec(kind="cn").params_label() == ""


class TestLocalIndices:
    def test_cn_hand_value(self, wedge_pair):
        assert score_cn(wedge_pair, 0, 1) == 2.0

    def test_aa_hand_value(self, wedge_pair):
        expected = 1.0 / math.log(2) + 1.0 / math.log(3)
        assert score_aa(wedge_pair, 0, 1) == pytest.approx(expected)

    def test_ra_hand_value(self, wedge_pair):
        assert score_ra(wedge_pair, 0, 1) == pytest.approx(1 / 2 + 1 / 3)

    def test_no_common_neighbors_scores_zero(self, wedge_pair):
        assert score_cn(wedge_pair, 2, 4) == 0.0

    def test_same_node_rejected(self, wedge_pair):
        with pytest.raises(ValueError):
            score_cn(wedge_pair, 1, 1)

    def test_out_of_range_rejected(self, wedge_pair):
        with pytest.raises(ValueError):
            score_ra(wedge_pair, 0, 9)

    def test_bulk_tables_match_pairwise_calls(self):
        g = random_graph(40, 0.12, seed=5)
        for table, fn in (
            (score_cn_all(g), score_cn),
            (score_ra_all(g), score_ra),
        ):
            assert len(table) > 0
            for (a, b), s in table.entries()[:200]:
                assert not g.has_edge(a, b)
                assert s == pytest.approx(fn(g, a, b))

    def test_cn_matches_squared_adjacency(self):
        g = random_graph(35, 0.15, seed=8)
        a = np.zeros((g.num_nodes, g.num_nodes), dtype=np.int64)
        for u, v in g.edges:
            a[u, v] = a[v, u] = 1
        a2 = a @ a
        table = score_cn_all(g)
        for (u, v), s in table.entries():
            assert s == a2[u, v]
        # zero-scored candidates really have no common neighbors
        missing = {(u, v) for u in range(g.num_nodes) for v in range(u + 1, g.num_nodes)
                   if not g.has_edge(u, v)} - {pair for pair, _ in table.entries()}
        for u, v in missing:
            assert a2[u, v] == 0


class TestScoreTable:
    def test_sorted_descending_with_pair_tiebreak(self):
        g = Graph.from_edges(4, [(0, 1)])
        t = ScoreTable(
            g,
            np.array([2, 0, 1]),
            np.array([3, 2, 3]),
            np.array([1.0, 5.0, 1.0]),
        )
        assert t.entries() == [((0, 2), 5.0), ((1, 3), 1.0), ((2, 3), 1.0)]

    def test_zero_scores_dropped_but_counted_in_universe(self):
        g = Graph.from_edges(4, [(0, 1)])
        t = ScoreTable(g, np.array([0, 1]), np.array([2, 2]), np.array([0.0, 2.0]))
        assert len(t) == 1
        assert t.universe_size == 4 * 3 // 2 - 1

    def test_negative_score_rejected(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(ValueError):
            ScoreTable(g, np.array([0]), np.array([2]), np.array([-1.0]))

    def test_nan_rejected(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(ValueError):
            ScoreTable(g, np.array([0]), np.array([2]), np.array([np.nan]))

    def test_duplicate_pair_rejected(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(ValueError, match="duplicate"):
            ScoreTable(
                g, np.array([0, 2]), np.array([2, 0]), np.array([1.0, 2.0])
            )

    def test_scores_for_pairs_handles_misses_and_orientation(self):
        g = Graph.from_edges(4, [(0, 1)])
        t = ScoreTable(g, np.array([0]), np.array([2]), np.array([3.0]))
        got = t.scores_for_pairs(np.array([[2, 0], [1, 3], [0, 2]]))
        assert got.tolist() == [3.0, 0.0, 3.0]

    def test_top_k(self):
        g = Graph.from_edges(4, [(0, 1)])
        t = ScoreTable(
            g, np.array([0, 1, 2]), np.array([2, 3, 3]), np.array([1.0, 3.0, 2.0])
        )
        assert t.top(2) == [((1, 3), 3.0), ((2, 3), 2.0)]


class TestKatz:
    def test_matches_walk_enumeration_on_small_graphs(self):
        for seed in (1, 2, 3):
            g = random_graph(8, 0.35, seed=seed)
            if g is None:
                continue
            rho = spectral_radius_estimate(g)
            beta = 0.3 / rho
            table = score_katz_all(g, beta=beta)
            for (x, y), s in table.entries():
                assert s == pytest.approx(
                    katz_by_walk_enumeration(g, x, y, beta), abs=1e-9
                )

    def test_path_series_hand_check(self):
        # walks 0 -> 2 on a 3-path double every two steps: closed form
        # sum_l 2^(l/2-1) beta^l = beta^2 / (1 - 2 beta^2).  The series is
        # truncated once terms drop below 1e-9, so compare at that scale.
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        beta = 0.1
        table = score_katz_all(g, beta=beta)
        (pair, s), = table.entries()
        assert pair == (0, 2)
        assert s == pytest.approx(beta**2 / (1.0 - 2.0 * beta**2), abs=1e-9)
        assert s == pytest.approx(katz_by_walk_enumeration(g, 0, 2, beta), abs=1e-9)

    def test_divergent_beta_rejected_with_estimate(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(ValueError, match="spectral radius"):
            score_katz_all(g, beta=0.5)

    def test_nonpositive_beta_rejected(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            score_katz_all(g, beta=0.0)


class TestSpectralRadius:
    def test_triangle(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
        assert spectral_radius_estimate(g) == pytest.approx(2.0, abs=1e-6)

    def test_star(self):
        g = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
        assert spectral_radius_estimate(g) == pytest.approx(2.0, abs=1e-6)

    def test_single_edge(self):
        g = Graph.from_edges(2, [(0, 1)])
        assert spectral_radius_estimate(g) == pytest.approx(1.0, abs=1e-6)


class TestRootedPagerank:
    def test_single_edge_closed_form(self):
        g = Graph.from_edges(2, [(0, 1)])
        for beta in (0.1, 0.5, 0.9):
            cols = rooted_pagerank_columns(g, beta, [0])
            assert cols[1, 0] == pytest.approx(beta / (1 + beta), abs=1e-9)
            assert cols[0, 0] == pytest.approx(1 / (1 + beta), abs=1e-9)

    def test_columns_conserve_mass(self):
        g = random_graph(25, 0.2, seed=3)
        cols = rooted_pagerank_columns(g, 0.5, list(range(g.num_nodes)))
        assert np.allclose(cols.sum(axis=0), 1.0, atol=1e-8)

    def test_matches_linear_system(self):
        g = random_graph(20, 0.25, seed=4)
        n = g.num_nodes
        beta = 0.4
        p = np.zeros((n, n))
        for u, v in g.edges:
            p[u, v] = p[v, u] = 1.0
        p /= p.sum(axis=1, keepdims=True)
        roots = [0, 3, 7]
        exact = np.stack(
            [
                np.linalg.solve(
                    np.eye(n) - beta * p.T, (1 - beta) * np.eye(n)[:, r]
                )
                for r in roots
            ],
            axis=1,
        )
        cols = rooted_pagerank_columns(g, beta, roots)
        assert np.allclose(cols, exact, atol=1e-9)

    def test_table_combines_both_directions(self):
        g = random_graph(15, 0.25, seed=6)
        beta = 0.3
        cols = rooted_pagerank_columns(g, beta, list(range(g.num_nodes)))
        t_sum = score_rooted_pr_all(g, beta)
        t_max = score_rooted_pr_all(g, beta, combine="max")
        for (a, b), s in t_sum.entries()[:50]:
            assert s == pytest.approx(cols[b, a] + cols[a, b], abs=1e-9)
        for (a, b), s in t_max.entries()[:50]:
            assert s == pytest.approx(max(cols[b, a], cols[a, b]), abs=1e-9)

    def test_bad_combine_rejected(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            score_rooted_pr_all(g, 0.5, combine="mean")

    def test_nonconvergence_reported(self):
        g = random_graph(20, 0.3, seed=2)
        with pytest.raises(ValueError, match="converge"):
            rooted_pagerank_columns(g, 0.9, [0], max_iter=2)


class TestSrw:
    def test_path_two_steps_hand_value(self):
        # on 0-1-2 a walker from either end sits on the far end with
        # probability 1/2 after two moves; both directions weigh 1/4
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        t = score_srw_all(g, steps=2)
        (pair, s), = t.entries()
        assert pair == (0, 2)
        assert s == pytest.approx(0.25)

    def test_path_one_step_has_no_mass_on_candidates(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        t = score_srw_all(g, steps=1)
        assert len(t) == 0

    def test_walk_columns_conserve_mass(self):
        g = random_graph(20, 0.25, seed=9)
        cols = walk_probability_columns(g, list(range(g.num_nodes)), steps=4)
        for x in cols:
            assert np.allclose(x.sum(axis=0), 1.0)

    def test_matches_monte_carlo(self):
        g = random_graph(18, 0.3, seed=12)
        steps, root = 3, 0
        n_walks = 200_000
        freq = mc_walk_occupation(g, root, steps, n_walks, seed=99)
        cols = walk_probability_columns(g, [root], steps)
        for t in range(steps):
            exact = cols[t][:, 0]
            sigma = np.sqrt(np.maximum(exact * (1 - exact), 1e-12) / n_walks)
            assert np.all(np.abs(freq[t] - exact) < 4 * sigma + 1e-12)

    def test_scores_combine_weighted_directions(self):
        g = random_graph(15, 0.25, seed=13)
        two_e = 2 * g.num_edges
        steps = 3
        cols = walk_probability_columns(g, list(range(g.num_nodes)), steps)
        t = score_srw_all(g, steps=steps)
        for (a, b), s in t.entries()[:60]:
            expected = sum(
                g.degree(a) / two_e * cols[l][b, a]
                + g.degree(b) / two_e * cols[l][a, b]
                for l in range(steps)
            )
            assert s == pytest.approx(expected, abs=1e-12)


class TestScoreAll:
    def test_dispatch_matches_direct_calls(self):
        g = random_graph(20, 0.2, seed=20)
        cases = [
            (PredictorSpec(kind="cn"), score_cn_all(g)),
            (PredictorSpec(kind="srw", steps=2), score_srw_all(g, steps=2)),
            (PredictorSpec(kind="pr", beta=0.3), score_rooted_pr_all(g, 0.3)),
        ]
        for spec, direct in cases:
            via = score_all(g, spec)
            assert via.entries() == direct.entries()
