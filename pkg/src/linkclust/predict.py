"""Similarity indices for scoring non-adjacent node pairs.

Local indices (common neighbors, Adamic-Adar, resource allocation) only
touch pairs at graph distance two; every other candidate pair scores zero
and is represented implicitly.  Walk-based indices (Katz, rooted PageRank,
superposed random walk) are computed column-by-column over root chunks
with sparse matrix products.

All scorers return a :class:`ScoreTable`: the positively scored candidate
pairs sorted by descending score, plus the size of the full candidate
universe (every non-adjacent pair), which downstream ranking metrics need
to account for the implicit zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import Graph

_KINDS = ("cn", "aa", "ra", "katz", "pr", "srw")

DEFAULT_SRW_STEPS = 3
DEFAULT_KATZ_TOL = 1e-9
DEFAULT_KATZ_MAX_TERMS = 1000
DEFAULT_PR_TOL = 1e-10
DEFAULT_PR_MAX_ITER = 100_000
_CHUNK = 1024


@dataclass(frozen=True)
class PredictorSpec:
    """A similarity index choice plus its parameters.

    ``kind`` is one of cn, aa, ra, katz, pr, srw.  ``beta`` is required for
    katz (series damping, > 0) and pr (restart weight, in (0, 1)); ``steps``
    applies to srw only and defaults to 3.
    """

    kind: str
    beta: float | None = None
    steps: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown method {self.kind!r}; expected one of {_KINDS}")
        if self.kind == "katz":
            if self.beta is None or self.beta <= 0:
                raise ValueError("katz requires beta > 0")
        elif self.kind == "pr":
            if self.beta is None or not 0 < self.beta < 1:
                raise ValueError("pr requires beta in (0, 1)")
        elif self.beta is not None:
            raise ValueError(f"{self.kind} takes no beta")
        if self.kind == "srw":
            if self.steps is None:
                object.__setattr__(self, "steps", DEFAULT_SRW_STEPS)
            if self.steps < 1:
                raise ValueError("srw requires steps >= 1")
        elif self.steps is not None:
            raise ValueError(f"{self.kind} takes no steps")

    def params_label(self) -> str:
        if self.kind in ("katz", "pr"):
            return f"beta={self.beta:g}"
        if self.kind == "srw":
            return f"steps={self.steps}"
        return ""


class ScoreTable:
    """Scored candidate pairs, sorted by score descending.

    Only pairs with a strictly positive score are materialized; the
    remaining ``universe_size - len(table)`` candidate pairs all score
    exactly zero.  ``graph`` is the graph the scores were computed on
    (the training graph in evaluation settings).
    """

    def __init__(
        self,
        graph: Graph,
        pair_a: np.ndarray,
        pair_b: np.ndarray,
        score: np.ndarray,
    ):
        score = np.asarray(score, dtype=np.float64)
        if not np.all(np.isfinite(score)):
            raise ValueError("scores must be finite")
        if np.any(score < 0):
            raise ValueError("scores must be non-negative")
        keep = score > 0.0
        pair_a = np.asarray(pair_a, dtype=np.int64)[keep]
        pair_b = np.asarray(pair_b, dtype=np.int64)[keep]
        score = score[keep]
        lo = np.minimum(pair_a, pair_b)
        hi = np.maximum(pair_a, pair_b)
        order = np.lexsort((hi, lo, -score))
        self.graph = graph
        self.pair_a = lo[order]
        self.pair_b = hi[order]
        self.score = score[order]
        n = graph.num_nodes
        self.universe_size = n * (n - 1) // 2 - graph.num_edges
        key = self.pair_a * n + self.pair_b
        if len(np.unique(key)) != len(key):
            raise ValueError("duplicate pair in score table")
        self._key_order = np.argsort(key)
        self._key_sorted = key[self._key_order]

    def __len__(self) -> int:
        return len(self.score)

    def entries(self) -> list[tuple[tuple[int, int], float]]:
        return [
            ((int(a), int(b)), float(s))
            for a, b, s in zip(self.pair_a, self.pair_b, self.score)
        ]

    def top(self, k: int) -> list[tuple[tuple[int, int], float]]:
        return self.entries()[:k]

    def scores_for_pairs(self, pairs: np.ndarray) -> np.ndarray:
        """Scores for (m, 2) node pairs; pairs not in the table score 0."""
        pairs = np.asarray(pairs, dtype=np.int64)
        if pairs.size == 0:
            return np.zeros(0)
        lo = np.minimum(pairs[:, 0], pairs[:, 1])
        hi = np.maximum(pairs[:, 0], pairs[:, 1])
        key = lo * self.graph.num_nodes + hi
        idx = np.searchsorted(self._key_sorted, key)
        out = np.zeros(len(key))
        in_range = idx < len(self._key_sorted)
        hit = in_range.copy()
        hit[in_range] = self._key_sorted[idx[in_range]] == key[in_range]
        out[hit] = self.score[self._key_order[idx[hit]]]
        return out


def score_cn(g: Graph, x: int, y: int) -> float:
    """Common-neighbor count of a single pair."""
    _check_pair(g, x, y)
    return float(len(g.adjacency[x] & g.adjacency[y]))


def score_aa(g: Graph, x: int, y: int) -> float:
    """Adamic-Adar: sum of 1/ln(k_z) over common neighbors z."""
    _check_pair(g, x, y)
    return sum(1.0 / math.log(g.degree(z)) for z in g.adjacency[x] & g.adjacency[y])


def score_ra(g: Graph, x: int, y: int) -> float:
    """Resource allocation: sum of 1/k_z over common neighbors z."""
    _check_pair(g, x, y)
    return sum(1.0 / g.degree(z) for z in g.adjacency[x] & g.adjacency[y])


def _check_pair(g: Graph, x: int, y: int) -> None:
    if x == y:
        raise ValueError("pair endpoints must differ")
    if not (0 <= x < g.num_nodes and 0 <= y < g.num_nodes):
        raise ValueError(f"pair ({x}, {y}) outside node range")


def _local_index_table(g: Graph, kind: str) -> ScoreTable:
    """Accumulate wedge contributions for cn / aa / ra.

    Every candidate with a nonzero local score sits at distance exactly two
    from its partner, so enumerating neighbor pairs of every hub node z
    covers all of them.
    """
    acc: dict[tuple[int, int], float] = {}
    adj = g.adjacency
    for z in range(g.num_nodes):
        k = len(adj[z])
        if k < 2:
            continue
        if kind == "cn":
            w = 1.0
        elif kind == "aa":
            w = 1.0 / math.log(k)
        else:
            w = 1.0 / k
        nbrs = sorted(adj[z])
        for i, u in enumerate(nbrs):
            adj_u = adj[u]
            for v in nbrs[i + 1 :]:
                if v in adj_u:
                    continue
                pair = (u, v)
                acc[pair] = acc.get(pair, 0.0) + w
    if not acc:
        return ScoreTable(g, np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0))
    pair_arr = np.array(list(acc.keys()), dtype=np.int64)
    return ScoreTable(g, pair_arr[:, 0], pair_arr[:, 1], np.array(list(acc.values())))


def score_cn_all(g: Graph) -> ScoreTable:
    return _local_index_table(g, "cn")


def score_aa_all(g: Graph) -> ScoreTable:
    return _local_index_table(g, "aa")


def score_ra_all(g: Graph) -> ScoreTable:
    return _local_index_table(g, "ra")


class _NonEdgeIndex:
    """Flat arrays of all candidate (non-adjacent) pairs with per-node views.

    Pairs are stored with ``a < b`` sorted by ``(a, b)``; ``rows_for_a``
    returns the slice of row indices whose first node is ``x`` and
    ``rows_for_b`` the (gathered) indices whose second node is ``x``.
    """

    def __init__(self, g: Graph):
        n = g.num_nodes
        chunks_a: list[np.ndarray] = []
        chunks_b: list[np.ndarray] = []
        for a in range(n):
            tail = np.arange(a + 1, n, dtype=np.int64)
            if tail.size == 0:
                continue
            mask = np.ones(tail.size, dtype=bool)
            nbrs = np.fromiter(
                (v for v in g.adjacency[a] if v > a),
                dtype=np.int64,
                count=-1,
            )
            if nbrs.size:
                mask[nbrs - (a + 1)] = False
            chunks_a.append(np.full(int(mask.sum()), a, dtype=np.int64))
            chunks_b.append(tail[mask])
        if chunks_a:
            self.a = np.concatenate(chunks_a)
            self.b = np.concatenate(chunks_b)
        else:
            self.a = np.zeros(0, dtype=np.int64)
            self.b = np.zeros(0, dtype=np.int64)
        self._a_starts = np.searchsorted(self.a, np.arange(n + 1))
        self._b_order = np.argsort(self.b, kind="stable")
        self._b_starts = np.searchsorted(self.b[self._b_order], np.arange(n + 1))

    def __len__(self) -> int:
        return len(self.a)

    def rows_for_a(self, x: int) -> slice:
        return slice(int(self._a_starts[x]), int(self._a_starts[x + 1]))

    def rows_for_b(self, x: int) -> np.ndarray:
        return self._b_order[int(self._b_starts[x]) : int(self._b_starts[x + 1])]


def _adjacency_csr(g: Graph) -> sp.csr_matrix:
    m = len(g.edges)
    rows = np.empty(2 * m, dtype=np.int64)
    cols = np.empty(2 * m, dtype=np.int64)
    for k, (u, v) in enumerate(g.edges):
        rows[2 * k], cols[2 * k] = u, v
        rows[2 * k + 1], cols[2 * k + 1] = v, u
    data = np.ones(2 * m)
    return sp.csr_matrix((data, (rows, cols)), shape=(g.num_nodes, g.num_nodes))


def _walk_matrix_transposed(g: Graph) -> sp.csr_matrix:
    """Column-stochastic transition matrix P^T with P_xy = a_xy / k_x.

    Rows of P for isolated nodes are zero; such nodes receive and emit no
    probability mass.
    """
    a = _adjacency_csr(g)
    deg = np.asarray(a.sum(axis=1)).ravel()
    inv = np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0)
    return (sp.diags(inv) @ a).T.tocsr()


def spectral_radius_estimate(g: Graph, iters: int = 200) -> float:
    """Largest adjacency eigenvalue, estimated by power iteration."""
    if g.num_edges == 0:
        return 0.0
    a = _adjacency_csr(g)
    v = np.full(g.num_nodes, 1.0 / math.sqrt(g.num_nodes))
    lam = 0.0
    for _ in range(iters):
        w = a @ v
        nrm = float(np.linalg.norm(w))
        if nrm == 0.0:
            return 0.0
        v = w / nrm
        lam = nrm
    return lam


def score_katz_all(
    g: Graph,
    beta: float,
    tol: float = DEFAULT_KATZ_TOL,
    max_terms: int = DEFAULT_KATZ_MAX_TERMS,
    chunk: int = _CHUNK,
) -> ScoreTable:
    """Katz index: sum over l >= 1 of beta^l * (number of length-l walks).

    The series is summed term by term until the max-norm of the last added
    term falls below ``tol`` (or ``max_terms`` is hit).  Convergence demands
    ``beta`` below the reciprocal spectral radius; violations raise before
    any work is done.
    """
    if beta <= 0:
        raise ValueError("katz requires beta > 0")
    rho = spectral_radius_estimate(g)
    if beta * rho >= 1.0:
        raise ValueError(
            f"katz series diverges: beta={beta:g} with spectral radius "
            f"estimate {rho:.4f} (need beta < {1.0 / rho:.6g})"
        )
    a = _adjacency_csr(g)
    nonedges = _NonEdgeIndex(g)
    out = np.zeros(len(nonedges))
    n = g.num_nodes
    for s in range(0, n, chunk):
        e = min(s + chunk, n)
        x = np.zeros((n, e - s))
        x[np.arange(s, e), np.arange(e - s)] = 1.0
        total = np.zeros_like(x)
        for _ in range(max_terms):
            x = beta * (a @ x)
            total += x
            if np.abs(x).max() < tol:
                break
        for t, root in enumerate(range(s, e)):
            rows = nonedges.rows_for_a(root)
            out[rows] = total[nonedges.b[rows], t]
    return ScoreTable(g, nonedges.a, nonedges.b, out)


def rooted_pagerank_columns(
    g: Graph,
    beta: float,
    roots: np.ndarray | list[int],
    tol: float = DEFAULT_PR_TOL,
    max_iter: int = DEFAULT_PR_MAX_ITER,
) -> np.ndarray:
    """Stationary visit distributions of restarting random walks.

    Column ``t`` solves ``pi = (1 - beta) e_root + beta P^T pi`` for
    ``roots[t]`` by fixed-point iteration to an L1 residual below ``tol``.
    The walker restarts at the root with probability ``1 - beta`` and
    otherwise moves to a uniform neighbor.
    """
    if not 0 < beta < 1:
        raise ValueError("pr requires beta in (0, 1)")
    w = _walk_matrix_transposed(g)
    roots = np.asarray(roots, dtype=np.int64)
    base = np.zeros((g.num_nodes, len(roots)))
    base[roots, np.arange(len(roots))] = 1.0 - beta
    x = base.copy()
    for _ in range(max_iter):
        x_next = base + beta * (w @ x)
        resid = np.abs(x_next - x).sum(axis=0).max() if x.size else 0.0
        x = x_next
        if resid < tol:
            return x
    raise ValueError(
        f"rooted pagerank failed to converge within {max_iter} iterations"
    )


def score_rooted_pr_all(
    g: Graph,
    beta: float,
    tol: float = DEFAULT_PR_TOL,
    max_iter: int = DEFAULT_PR_MAX_ITER,
    chunk: int = _CHUNK,
    combine: str = "sum",
) -> ScoreTable:
    """Rooted PageRank score pi_x(y) + pi_y(x) for every candidate pair.

    ``combine="max"`` takes the larger of the two directions instead of
    their sum.  Isolated nodes are skipped as roots; pairs involving them
    keep score zero.
    """
    if combine not in ("sum", "max"):
        raise ValueError("combine must be 'sum' or 'max'")
    nonedges = _NonEdgeIndex(g)
    s_ab = np.zeros(len(nonedges))
    s_ba = np.zeros(len(nonedges))
    roots = np.array([v for v in range(g.num_nodes) if g.degree(v) > 0], dtype=np.int64)
    for s in range(0, len(roots), chunk):
        part = roots[s : s + chunk]
        cols = rooted_pagerank_columns(g, beta, part, tol=tol, max_iter=max_iter)
        for t, root in enumerate(part):
            rows = nonedges.rows_for_a(int(root))
            s_ab[rows] += cols[nonedges.b[rows], t]
            rows_b = nonedges.rows_for_b(int(root))
            s_ba[rows_b] += cols[nonedges.a[rows_b], t]
    score = s_ab + s_ba if combine == "sum" else np.maximum(s_ab, s_ba)
    return ScoreTable(g, nonedges.a, nonedges.b, score)


def walk_probability_columns(
    g: Graph, roots: np.ndarray | list[int], steps: int
) -> list[np.ndarray]:
    """Occupation probabilities of plain random walks from each root.

    Returns one (num_nodes, len(roots)) array per step 1..steps; column
    ``t`` of array ``l-1`` is the distribution after ``l`` moves of a
    walker started at ``roots[t]``.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    w = _walk_matrix_transposed(g)
    roots = np.asarray(roots, dtype=np.int64)
    x = np.zeros((g.num_nodes, len(roots)))
    x[roots, np.arange(len(roots))] = 1.0
    out: list[np.ndarray] = []
    for _ in range(steps):
        x = w @ x
        out.append(x.copy())
    return out


def score_srw_all(g: Graph, steps: int = DEFAULT_SRW_STEPS, chunk: int = _CHUNK) -> ScoreTable:
    """Superposed random walk over ``steps`` moves.

    Each step contributes (k_x / 2|E|) pi_xy(t) + (k_y / 2|E|) pi_yx(t) to
    the pair (x, y); the score sums these over t = 1..steps.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if g.num_edges == 0:
        raise ValueError("empty graph")
    nonedges = _NonEdgeIndex(g)
    score = np.zeros(len(nonedges))
    two_e = 2.0 * g.num_edges
    weight = np.array([g.degree(v) / two_e for v in range(g.num_nodes)])
    roots = np.array([v for v in range(g.num_nodes) if g.degree(v) > 0], dtype=np.int64)
    for s in range(0, len(roots), chunk):
        part = roots[s : s + chunk]
        per_step = walk_probability_columns(g, part, steps)
        for cols in per_step:
            for t, root in enumerate(part):
                r = int(root)
                rows = nonedges.rows_for_a(r)
                score[rows] += weight[r] * cols[nonedges.b[rows], t]
                rows_b = nonedges.rows_for_b(r)
                score[rows_b] += weight[r] * cols[nonedges.a[rows_b], t]
    return ScoreTable(g, nonedges.a, nonedges.b, score)


def score_all(g: Graph, spec: PredictorSpec) -> ScoreTable:
    """Score every candidate pair of ``g`` with the chosen index."""
    if g.num_nodes == 0:
        raise ValueError("empty graph")
    if spec.kind == "cn":
        return score_cn_all(g)
    if spec.kind == "aa":
        return score_aa_all(g)
    if spec.kind == "ra":
        return score_ra_all(g)
    if spec.kind == "katz":
        return score_katz_all(g, spec.beta)
    if spec.kind == "pr":
        return score_rooted_pr_all(g, spec.beta)
    return score_srw_all(g, spec.steps)
