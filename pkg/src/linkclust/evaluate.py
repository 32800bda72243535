"""Train/test edge splits and ranking evaluation.

Precision at n ranks every candidate pair of the training graph (scored
or implicit-zero) and counts how many of the top n are held-out test
edges.  Ties straddling the cutoff are credited fractionally: when t tied
pairs compete for the last q slots and h of them are test edges, the
expected hit count under a random tie order is h * q / t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, Pair
from .predict import ScoreTable


@dataclass(frozen=True)
class Split:
    """A disjoint train/test partition of a graph's edges."""

    train_edges: tuple[Pair, ...]
    test_edges: tuple[Pair, ...]
    seed: int
    test_fraction: float


def split_edges(g: Graph, seed: int, test_fraction: float = 0.1) -> Split:
    """Uniformly sample ``round(test_fraction * |E|)`` edges as the test set.

    Deterministic for a given seed.  Raises when the fraction is outside
    (0, 1) or when rounding would leave the train or test side empty.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be in (0, 1)")
    n_edges = g.num_edges
    n_test = round(test_fraction * n_edges)
    if n_test == 0 or n_test == n_edges:
        raise ValueError(
            f"test fraction {test_fraction} leaves an empty side "
            f"({n_test} of {n_edges} edges drawn)"
        )
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n_edges)
    test_idx = set(int(i) for i in perm[:n_test])
    train = tuple(e for k, e in enumerate(g.edges) if k not in test_idx)
    test = tuple(e for k, e in enumerate(g.edges) if k in test_idx)
    return Split(train_edges=train, test_edges=test, seed=seed, test_fraction=test_fraction)


def training_graph(g: Graph, split: Split) -> Graph:
    """The graph restricted to training edges (same node set and labels)."""
    return Graph.from_edges(g.num_nodes, split.train_edges, labels=g.labels)


@dataclass(frozen=True)
class PrecisionResult:
    n: int
    hits: float
    precision: float


def _as_pair_array(pairs, n: int) -> np.ndarray:
    arr = np.asarray(list(pairs), dtype=np.int64).reshape(-1, 2)
    lo = np.minimum(arr[:, 0], arr[:, 1])
    hi = np.maximum(arr[:, 0], arr[:, 1])
    if np.any(lo == hi) or np.any(lo < 0) or np.any(hi >= n):
        raise ValueError("invalid node pair")
    return np.column_stack([lo, hi])


def precision_at_n(scores: ScoreTable, test_edges) -> PrecisionResult:
    """Fraction of the top-``len(test_edges)`` ranked candidates that are hits.

    Candidates not materialized in ``scores`` participate as exact zeros
    through the table's ``universe_size``.  Test pairs must be non-edges of
    the scored graph; a test pair present as a training edge means the
    protocol leaked and raises.
    """
    g = scores.graph
    test = _as_pair_array(test_edges, g.num_nodes)
    n = len(test)
    if n == 0:
        raise ValueError("empty test set")
    for a, b in test:
        if g.has_edge(int(a), int(b)):
            raise ValueError(f"leaked edge ({a}, {b}) present in training graph")
    n_scored = len(scores)
    universe = scores.universe_size
    if n > universe:
        raise ValueError("test set larger than candidate universe")
    if n <= n_scored:
        threshold = float(scores.score[n - 1])
    else:
        threshold = 0.0
    if threshold > 0.0:
        above = int(np.sum(scores.score > threshold))
        tied = int(np.sum(scores.score == threshold))
    else:
        above = n_scored
        tied = universe - n_scored
    slots = n - above
    test_scores = scores.scores_for_pairs(test)
    hits_above = int(np.sum(test_scores > threshold))
    tied_hits = int(np.sum(test_scores == threshold))
    hits = float(hits_above)
    if slots > 0:
        hits += tied_hits * slots / tied
    return PrecisionResult(n=n, hits=hits, precision=hits / n)


@dataclass(frozen=True)
class ScoreDistribution:
    """Histograms of test-edge scores versus true non-edge scores.

    Bin ``i`` covers scores in [i * bin_width, (i+1) * bin_width).  The
    negative class may be downsampled for histogramming; ``negative_total``
    is the true class size, ``negative_sampled`` the tallied count, and
    ``sample_seed`` the seed used when they differ (None otherwise).
    """

    positive_hist: dict[int, int]
    negative_hist: dict[int, int]
    bin_width: float
    positive_total: int
    negative_total: int
    negative_sampled: int
    sample_seed: int | None


def _histogram(values: np.ndarray, extra_zeros: int, bin_width: float) -> dict[int, int]:
    hist: dict[int, int] = {}
    if extra_zeros > 0:
        hist[0] = extra_zeros
    if values.size:
        bins = np.floor(values / bin_width).astype(np.int64)
        idx, counts = np.unique(bins, return_counts=True)
        for i, c in zip(idx, counts):
            hist[int(i)] = hist.get(int(i), 0) + int(c)
    return hist


def score_distributions(
    scores: ScoreTable,
    test_edges,
    bin_width: float,
    max_negative: int = 1_000_000,
    sample_seed: int = 0,
) -> ScoreDistribution:
    """Histogram the positive (test edge) and negative (true non-edge) classes.

    The negative class is every candidate pair that is neither a training
    nor a test edge.  When it exceeds ``max_negative`` pairs, a uniform
    subsample of that size is tallied instead and the seed is recorded.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    g = scores.graph
    test = _as_pair_array(test_edges, g.num_nodes)
    n_test = len(test)
    test_scores = scores.scores_for_pairs(test)
    test_keys = test[:, 0] * g.num_nodes + test[:, 1]
    entry_keys = scores.pair_a * g.num_nodes + scores.pair_b
    neg_scores = scores.score[~np.isin(entry_keys, test_keys)]
    negative_total = scores.universe_size - n_test
    zero_count = negative_total - len(neg_scores)
    if zero_count < 0:
        raise ValueError("test pairs outside the candidate universe")
    seed_used: int | None = None
    if negative_total > max_negative:
        seed_used = sample_seed
        rng = np.random.default_rng(sample_seed)
        picks = rng.choice(negative_total, size=max_negative, replace=False)
        explicit = picks[picks < len(neg_scores)]
        neg_scores = neg_scores[explicit]
        zero_count = max_negative - len(explicit)
        negative_sampled = max_negative
    else:
        negative_sampled = negative_total
    pos_hist = _histogram(test_scores[test_scores > 0], int(np.sum(test_scores == 0)), bin_width)
    neg_hist = _histogram(neg_scores, int(zero_count), bin_width)
    return ScoreDistribution(
        positive_hist=pos_hist,
        negative_hist=neg_hist,
        bin_width=bin_width,
        positive_total=n_test,
        negative_total=negative_total,
        negative_sampled=negative_sampled,
        sample_seed=seed_used,
    )


def distribution_rows(dist: ScoreDistribution) -> list[tuple[str, float, float, int]]:
    """Flatten a distribution into (class, bin_lo, bin_hi, count) rows."""
    rows: list[tuple[str, float, float, int]] = []
    for name, hist in (("positive", dist.positive_hist), ("negative", dist.negative_hist)):
        for idx in sorted(hist):
            rows.append(
                (name, idx * dist.bin_width, (idx + 1) * dist.bin_width, hist[idx])
            )
    return rows


def class_separation(scores: ScoreTable, test_edges) -> float:
    """Standardized mean difference between positive and negative scores.

    Computed exactly over the full classes (implicit zeros included), not
    from binned histograms: (mean_pos - mean_neg) / pooled standard
    deviation.  Returns 0 when both classes are constant.
    """
    g = scores.graph
    test = _as_pair_array(test_edges, g.num_nodes)
    n_pos = len(test)
    pos = scores.scores_for_pairs(test)
    test_keys = test[:, 0] * g.num_nodes + test[:, 1]
    entry_keys = scores.pair_a * g.num_nodes + scores.pair_b
    neg = scores.score[~np.isin(entry_keys, test_keys)]
    n_neg = scores.universe_size - n_pos
    if n_pos < 2 or n_neg < 2:
        raise ValueError("need at least two pairs per class")
    mean_pos = float(pos.mean())
    var_pos = float(pos.var(ddof=1))
    s1 = float(neg.sum())
    s2 = float((neg * neg).sum())
    mean_neg = s1 / n_neg
    var_neg = (s2 - n_neg * mean_neg * mean_neg) / (n_neg - 1)
    pooled = ((n_pos - 1) * var_pos + (n_neg - 1) * var_neg) / (n_pos + n_neg - 2)
    if pooled <= 0:
        return 0.0
    return (mean_pos - mean_neg) / pooled**0.5
