"""Degree-preserving rewiring that raises the averaged clustering coefficient.

Every move picks two random edges <A,B> and <C,D> with four distinct
endpoints and exchanges endpoints, so degrees never change.  Two move
rules are provided:

``clustering`` (default for :func:`rewire_to_target`)
    One of the two exchange pairings {<A,C>, <B,D>} / {<A,D>, <B,C>} is
    proposed at random and installed exactly when the averaged clustering
    coefficient strictly increases.  Accepted moves concentrate closed
    wedges on low-degree nodes, whose coefficients respond most per
    triangle, so the average climbs quickly while hubs stay loose.

``triangles``
    All three pairings (keeping the current one) are compared by the
    number of triangles their two edges would close, and the best legal
    pairing is installed; ties keep the current configuration, then prefer
    the first exchange.  The global triangle count never decreases.  This
    is also the rule applied by the single-move helper :func:`rewire_step`,
    and it packs triangles around well-connected nodes far more densely
    than the acceptance rule does at the same coefficient.

Proposals that would duplicate an existing edge are discarded.  Long runs
are dominated by draws that change nothing, so both rules run on a packed
adjacency bit matrix through compiled batch kernels; a pure-set engine
computes identical chains (same accepts, same floats) for cross-checking
and for graphs too large for the bit matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .graph import Graph, Pair, _canon, _neighbor_edge_counts, average_clustering

_BITSET_NODE_LIMIT = 50_000  # bit matrix memory guard: ~390 MB at the limit
_CLUSTER_BATCH = 65_536  # draws consumed per clustering-rule kernel call
_TRIANGLE_BATCH = 262_144  # draws consumed per triangles-rule scan
_TRAJECTORY_CAP = 8_192  # recorded trajectory points are thinned beyond this

_RULES = ("clustering", "triangles")
_ENGINES = ("auto", "bitset", "python")

# De Bruijn index-of-lowest-set-bit table for 64-bit words.
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_CTZ_TABLE = np.zeros(64, dtype=np.int64)
for _i in range(64):
    _CTZ_TABLE[(((1 << _i) * 0x03F79D71B4CB0A89) & ((1 << 64) - 1)) >> 58] = _i
del _i


@dataclass(frozen=True)
class RewireConfig:
    """Move rule, target, and stopping rules for :func:`rewire_to_target`.

    The loop ends when the averaged clustering coefficient is within
    ``tolerance`` of ``target_c``, after ``max_steps`` draws, or after
    ``stall_limit`` consecutive draws that left the graph unchanged.
    ``None`` limits default to ``10_000 * |E|`` and ``50 * |E|``.
    """

    target_c: float
    seed: int
    tolerance: float = 0.01
    max_steps: int | None = None
    stall_limit: int | None = None
    rule: str = "clustering"

    def __post_init__(self) -> None:
        if not 0.0 < self.tolerance < self.target_c:
            raise ValueError("tolerance must satisfy 0 < tolerance < target_c")
        if self.target_c >= 1.0:
            raise ValueError("target clustering must be below 1")
        if self.rule not in _RULES:
            raise ValueError(f"rule must be one of {_RULES}")


@dataclass(frozen=True)
class RewireOutcome:
    graph: Graph
    achieved_c: float
    steps_taken: int
    reached_target: bool
    # Sampled (step, triangle count, averaged clustering) series: the start,
    # a bounded subsequence of the accepted moves, and the final state.
    trajectory: tuple[tuple[int, int, float], ...]


class _Trajectory:
    """Bounded (step, triangles, clustering) series.

    Records every ``stride``-th accepted move; when the buffer outgrows
    the cap it is thinned to every other point and the stride doubles, so
    the series stays uniform in accept count and memory stays bounded.
    """

    def __init__(self, tri: int, c: float):
        self.points: list[tuple[int, int, float]] = [(0, tri, c)]
        self.stride = 1
        self.seen = 0

    def add(self, step: int, tri: int, c: float) -> None:
        self.seen += 1
        if self.seen % self.stride:
            return
        self.points.append((step, tri, c))
        if len(self.points) > _TRAJECTORY_CAP:
            self.points = self.points[::2]
            self.stride *= 2

    def finish(
        self, step: int, tri: int, c: float
    ) -> tuple[tuple[int, int, float], ...]:
        if self.points[-1][0] != step:
            self.points.append((step, tri, c))
        return tuple(self.points)


def _clustering_weights(g: Graph) -> tuple[list[float], int, float, list[int], int]:
    """Per-node coefficient weights plus exact starting tallies.

    Returns (inv_denom, defined, c_sum, tri, triangles) where
    ``inv_denom[v]`` is 2 / (k (k - 1)) for nodes with k >= 2 and 0
    otherwise, and ``c_sum`` accumulates tri[v] * inv_denom[v] in ascending
    node order.  Both engines must start from these floats and update them
    with identically ordered arithmetic to stay bit-for-bit interchangeable.
    """
    tri, total = _neighbor_edge_counts(g)
    inv = [0.0] * g.num_nodes
    defined = 0
    c_sum = 0.0
    for v in range(g.num_nodes):
        k = len(g.adjacency[v])
        if k >= 2:
            inv[v] = 2.0 / (k * (k - 1))
            defined += 1
            c_sum += tri[v] * inv[v]
    return inv, defined, c_sum, tri, total


def _pack_bits(edges: list[Pair], num_nodes: int) -> np.ndarray:
    words = (num_nodes + 63) // 64
    bits = np.zeros((num_nodes, words), dtype=np.uint64)
    for u, v in edges:
        bits[u, v >> 6] |= np.uint64(1 << (v & 63))
        bits[v, u >> 6] |= np.uint64(1 << (u & 63))
    return bits


class _RewireState:
    """Mutable adjacency with incremental triangle and clustering tallies.

    Degrees are fixed under rewiring, so the per-node clustering denominator
    ``k (k - 1)`` is precomputed and the running sum of coefficients is
    updated from triangle deltas alone.  Nodes of degree <= 1 have no
    coefficient and are excluded, matching ``average_clustering``.

    With ``with_bits`` the state also maintains a packed adjacency bit
    matrix (one row per node) used by the batch screen.
    """

    def __init__(self, g: Graph, with_bits: bool = False):
        self.adj: list[set[int]] = [set(s) for s in g.adjacency]
        self.edges: list[Pair] = list(g.edges)
        inv, defined, c_sum, tri, total = _clustering_weights(g)
        self.tri = tri
        self.triangles = total
        self.inv_denom = inv
        self.defined = defined
        self.c_sum = c_sum
        self.bits: np.ndarray | None = None
        if with_bits:
            self.bits = _pack_bits(self.edges, g.num_nodes)

    def avg_clustering(self) -> float:
        if self.defined == 0:
            return 0.0
        return self.c_sum / self.defined

    def _remove(self, u: int, v: int) -> None:
        common = self.adj[u] & self.adj[v]
        c = len(common)
        self.triangles -= c
        self.tri[u] -= c
        self.tri[v] -= c
        self.c_sum -= c * (self.inv_denom[u] + self.inv_denom[v])
        for w in common:
            self.tri[w] -= 1
            self.c_sum -= self.inv_denom[w]
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        if self.bits is not None:
            self.bits[u, v >> 6] ^= np.uint64(1 << (v & 63))
            self.bits[v, u >> 6] ^= np.uint64(1 << (u & 63))

    def _add(self, u: int, v: int) -> None:
        common = self.adj[u] & self.adj[v]
        c = len(common)
        self.triangles += c
        self.tri[u] += c
        self.tri[v] += c
        self.c_sum += c * (self.inv_denom[u] + self.inv_denom[v])
        for w in common:
            self.tri[w] += 1
            self.c_sum += self.inv_denom[w]
        self.adj[u].add(v)
        self.adj[v].add(u)
        if self.bits is not None:
            self.bits[u, v >> 6] ^= np.uint64(1 << (v & 63))
            self.bits[v, u >> 6] ^= np.uint64(1 << (u & 63))

    def step(self, i: int, j: int) -> bool:
        """Attempt one triangles-rule move on edge slots ``i`` and ``j``.

        Returns True when the graph changed.  Draws whose four endpoints
        are not distinct are degenerate and leave the graph unchanged.
        """
        if i == j:
            return False
        a, b = self.edges[i]
        c, d = self.edges[j]
        if a == c or a == d or b == c or b == d:
            return False
        adj = self.adj
        # Evaluate candidate pairings on the graph minus both edges.
        adj[a].remove(b)
        adj[b].remove(a)
        adj[c].remove(d)
        adj[d].remove(c)
        t_keep = len(adj[a] & adj[b]) + len(adj[c] & adj[d])
        t1 = -1
        if c not in adj[a] and d not in adj[b]:
            t1 = len(adj[a] & adj[c]) + len(adj[b] & adj[d])
        t2 = -1
        if d not in adj[a] and c not in adj[b]:
            t2 = len(adj[a] & adj[d]) + len(adj[b] & adj[c])
        adj[a].add(b)
        adj[b].add(a)
        adj[c].add(d)
        adj[d].add(c)
        if t_keep >= t1 and t_keep >= t2:
            return False
        if t1 >= t2:
            new_i, new_j = _canon(a, c), _canon(b, d)
        else:
            new_i, new_j = _canon(a, d), _canon(b, c)
        self._remove(a, b)
        self._remove(c, d)
        self._add(*new_i)
        self._add(*new_j)
        self.edges[i] = new_i
        self.edges[j] = new_j
        return True

    def freeze(self, labels: tuple[int, ...]) -> Graph:
        return Graph.from_edges(len(self.adj), self.edges, labels=labels)


@njit(cache=True)
def _pop64(x: np.uint64) -> np.int64:
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + (
        (x >> np.uint64(2)) & np.uint64(0x3333333333333333)
    )
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _bit_at(bits: np.ndarray, u: np.int64, v: np.int64) -> np.int64:
    return np.int64((bits[u, v >> 6] >> np.uint64(v & 63)) & np.uint64(1))


@njit(cache=True)
def _flip_edge_bits(bits: np.ndarray, u: np.int64, v: np.int64) -> None:
    bits[u, v >> 6] ^= np.uint64(1) << np.uint64(v & 63)
    bits[v, u >> 6] ^= np.uint64(1) << np.uint64(u & 63)


@njit(cache=True)
def _inv_scan(
    bits: np.ndarray,
    inv: np.ndarray,
    u: np.int64,
    v: np.int64,
    skip1: np.int64,
    skip2: np.int64,
) -> tuple[np.float64, np.int64]:
    """Weight sum and count of the common neighbors of ``u`` and ``v``.

    Nodes ``skip1``/``skip2`` are excluded when >= 0.  Bits are visited in
    ascending node order so the float accumulation order is canonical and
    matches the set engine, which sums over sorted node ids.
    """
    words = bits.shape[1]
    w1 = np.int64(-1)
    m1 = np.uint64(0)
    if skip1 >= 0:
        w1 = skip1 >> 6
        m1 = ~(np.uint64(1) << np.uint64(skip1 & 63))
    w2 = np.int64(-1)
    m2 = np.uint64(0)
    if skip2 >= 0:
        w2 = skip2 >> 6
        m2 = ~(np.uint64(1) << np.uint64(skip2 & 63))
    total = 0.0
    cnt = np.int64(0)
    for w in range(words):
        x = bits[u, w] & bits[v, w]
        if w == w1:
            x &= m1
        if w == w2:
            x &= m2
        while x != np.uint64(0):
            lsb = x & (np.uint64(0) - x)
            z = (w << 6) + _CTZ_TABLE[(lsb * _DEBRUIJN) >> np.uint64(58)]
            total += inv[z]
            cnt += 1
            x ^= lsb
    return total, cnt


@njit(cache=True)
def _run_clustering_batch(
    bits: np.ndarray,
    edge_a: np.ndarray,
    edge_b: np.ndarray,
    inv: np.ndarray,
    ii: np.ndarray,
    jj: np.ndarray,
    uu: np.ndarray,
    budget: np.int64,
    c_sum: np.float64,
    tri_total: np.int64,
    lo_sum: np.float64,
    stall: np.int64,
    stall_limit: np.int64,
    acc_step: np.ndarray,
    acc_tri: np.ndarray,
    acc_csum: np.ndarray,
) -> tuple[np.int64, np.int64, np.float64, np.int64, np.int64, np.int64]:
    """Run clustering-rule draws until the batch, budget, stall, or target ends.

    Mutates ``bits`` and the edge arrays in place.  The coefficient-sum
    delta of a proposal is assembled exactly like the set engine does it:
    per removed or added edge, the ascending-order weight sum over its
    common neighbors, then the count times the endpoint weights.  The
    common neighbors of an added edge are taken on the graph without the
    two removed edges, which for four distinct endpoints means dropping
    the other two endpoints from the scan.  Accepted moves log
    (draw offset, triangles, c_sum) into the ``acc_*`` arrays.

    Returns (consumed, accepts, c_sum, triangles, stall, status) where
    status is 0 = batch or budget exhausted, 1 = target sum reached,
    2 = stalled.
    """
    n_draws = ii.shape[0]
    if budget < n_draws:
        n_draws = budget
    n_acc = np.int64(0)
    status = np.int64(0)
    consumed = np.int64(0)
    for idx in range(n_draws):
        consumed = idx + 1
        accepted = False
        i = ii[idx]
        j = jj[idx]
        if i != j:
            a = edge_a[i]
            b = edge_b[i]
            c = edge_a[j]
            d = edge_b[j]
            if a != c and a != d and b != c and b != d:
                if uu[idx] < 0.5:
                    p, q, r, s = a, c, b, d
                else:
                    p, q, r, s = a, d, b, c
                if _bit_at(bits, p, q) == 0 and _bit_at(bits, r, s) == 0:
                    rem1, c_ab = _inv_scan(bits, inv, a, b, np.int64(-1), np.int64(-1))
                    rem1 += c_ab * (inv[a] + inv[b])
                    rem2, c_cd = _inv_scan(bits, inv, c, d, np.int64(-1), np.int64(-1))
                    rem2 += c_cd * (inv[c] + inv[d])
                    add1, c_pq = _inv_scan(bits, inv, p, q, r, s)
                    add1 += c_pq * (inv[p] + inv[q])
                    add2, c_rs = _inv_scan(bits, inv, r, s, p, q)
                    add2 += c_rs * (inv[r] + inv[s])
                    delta = (add1 + add2) - (rem1 + rem2)
                    if delta > 0.0:
                        _flip_edge_bits(bits, a, b)
                        _flip_edge_bits(bits, c, d)
                        _flip_edge_bits(bits, p, q)
                        _flip_edge_bits(bits, r, s)
                        if p < q:
                            edge_a[i], edge_b[i] = p, q
                        else:
                            edge_a[i], edge_b[i] = q, p
                        if r < s:
                            edge_a[j], edge_b[j] = r, s
                        else:
                            edge_a[j], edge_b[j] = s, r
                        c_sum += delta
                        tri_total += (c_pq + c_rs) - (c_ab + c_cd)
                        acc_step[n_acc] = idx
                        acc_tri[n_acc] = tri_total
                        acc_csum[n_acc] = c_sum
                        n_acc += 1
                        accepted = True
                        stall = 0
                        if c_sum >= lo_sum:
                            status = 1
                            break
        if not accepted:
            stall += 1
            if stall >= stall_limit:
                status = 2
                break
    return consumed, n_acc, c_sum, tri_total, stall, status


def _clustering_delta_sets(
    adj: list[set[int]],
    inv: list[float],
    a: int,
    b: int,
    c: int,
    d: int,
    p: int,
    q: int,
    r: int,
    s: int,
) -> tuple[float, int]:
    """Set-engine twin of the kernel delta: same terms, same float order."""
    cn_ab = adj[a] & adj[b]
    rem1 = 0.0
    for z in sorted(cn_ab):
        rem1 += inv[z]
    rem1 += len(cn_ab) * (inv[a] + inv[b])
    cn_cd = adj[c] & adj[d]
    rem2 = 0.0
    for z in sorted(cn_cd):
        rem2 += inv[z]
    rem2 += len(cn_cd) * (inv[c] + inv[d])
    cn_pq = adj[p] & adj[q]
    cn_pq.discard(r)
    cn_pq.discard(s)
    add1 = 0.0
    for z in sorted(cn_pq):
        add1 += inv[z]
    add1 += len(cn_pq) * (inv[p] + inv[q])
    cn_rs = adj[r] & adj[s]
    cn_rs.discard(p)
    cn_rs.discard(q)
    add2 = 0.0
    for z in sorted(cn_rs):
        add2 += inv[z]
    add2 += len(cn_rs) * (inv[r] + inv[s])
    delta = (add1 + add2) - (rem1 + rem2)
    dtri = (len(cn_pq) + len(cn_rs)) - (len(cn_ab) + len(cn_cd))
    return delta, dtri


@njit(cache=True)
def _scan_first_accept(
    bits: np.ndarray,
    edge_a: np.ndarray,
    edge_b: np.ndarray,
    ii: np.ndarray,
    jj: np.ndarray,
    start: np.int64,
) -> np.int64:
    """Index of the first draw in ``ii/jj[start:]`` that would change the
    graph under the triangles rule.

    Replays the accept decision of ``_RewireState.step`` on the adjacency
    bit matrix.  Candidate counts refer to the graph minus the two drawn
    edges; rather than masking rows, the raw popcounts are fixed up with
    the four membership bits among the endpoints:

        t1 = |N(A) & N(C)| + |N(B) & N(D)| - 2 ([A~D] + [B~C])
        t2 = |N(A) & N(D)| + |N(B) & N(C)| - 2 ([A~C] + [B~D])

    while the keep count needs no correction.  Returns -1 when no draw in
    the batch changes the graph.
    """
    n = ii.shape[0]
    words = bits.shape[1]
    for idx in range(start, n):
        i = ii[idx]
        j = jj[idx]
        if i == j:
            continue
        a = edge_a[i]
        b = edge_b[i]
        c = edge_a[j]
        d = edge_b[j]
        if a == c or a == d or b == c or b == d:
            continue
        m_ac = _bit_at(bits, a, c)
        m_ad = _bit_at(bits, a, d)
        m_bc = _bit_at(bits, b, c)
        m_bd = _bit_at(bits, b, d)
        legal1 = m_ac == 0 and m_bd == 0
        legal2 = m_ad == 0 and m_bc == 0
        if not (legal1 or legal2):
            continue
        t_keep = np.int64(0)
        t1 = np.int64(0)
        t2 = np.int64(0)
        for w in range(words):
            wa = bits[a, w]
            wb = bits[b, w]
            wc = bits[c, w]
            wd = bits[d, w]
            t_keep += _pop64(wa & wb) + _pop64(wc & wd)
            if legal1:
                t1 += _pop64(wa & wc) + _pop64(wb & wd)
            if legal2:
                t2 += _pop64(wa & wd) + _pop64(wb & wc)
        if legal1 and t1 - 2 * (m_ad + m_bc) > t_keep:
            return idx
        if legal2 and t2 - 2 * (m_ac + m_bd) > t_keep:
            return idx
    return np.int64(-1)


def rewire_step(g: Graph, rng: np.random.Generator) -> tuple[Graph, bool]:
    """Apply a single triangles-rule move and return (new graph, changed).

    Intended for inspection and testing; batch work should go through
    :func:`rewire_to_target`, which avoids rebuilding the graph per move.
    """
    if g.num_edges < 2:
        raise ValueError("rewiring needs at least two edges")
    state = _RewireState(g)
    i, j = (int(x) for x in rng.integers(0, g.num_edges, size=2))
    changed = state.step(i, j)
    return (state.freeze(g.labels) if changed else g), changed


def _resolve_engine(engine: str, num_nodes: int) -> str:
    if engine not in _ENGINES:
        raise ValueError(f"engine must be one of {_ENGINES}")
    if engine == "auto":
        return "bitset" if num_nodes <= _BITSET_NODE_LIMIT else "python"
    return engine


def _climb_clustering(
    g: Graph,
    config: RewireConfig,
    max_steps: int,
    stall_limit: int,
    engine: str,
) -> tuple[list[Pair], int, _Trajectory, int]:
    """Drive the clustering rule; returns (edges, steps, trajectory, triangles).

    The draw stream is consumed in fixed batches (edge-slot pairs, then
    uniforms) so that chains depend only on the seed, never on the engine
    or on where stopping conditions land.
    """
    inv_list, defined, c_sum, _, tri_total = _clustering_weights(g)
    lo_sum = (config.target_c - config.tolerance) * defined
    rng = np.random.default_rng(config.seed)
    trajectory = _Trajectory(tri_total, c_sum / defined if defined else 0.0)
    steps = 0
    stall = 0
    n_edges = g.num_edges

    if engine == "bitset":
        bits = _pack_bits(g.edges, g.num_nodes)
        edge_a = np.array([e[0] for e in g.edges], dtype=np.int64)
        edge_b = np.array([e[1] for e in g.edges], dtype=np.int64)
        inv = np.array(inv_list)
        acc_step = np.empty(_CLUSTER_BATCH, dtype=np.int64)
        acc_tri = np.empty(_CLUSTER_BATCH, dtype=np.int64)
        acc_csum = np.empty(_CLUSTER_BATCH, dtype=np.float64)
        while c_sum < lo_sum and steps < max_steps and stall < stall_limit:
            draws = rng.integers(0, n_edges, size=(_CLUSTER_BATCH, 2))
            uu = rng.random(_CLUSTER_BATCH)
            consumed, n_acc, c_sum, tri_total, stall, status = _run_clustering_batch(
                bits,
                edge_a,
                edge_b,
                inv,
                np.ascontiguousarray(draws[:, 0]),
                np.ascontiguousarray(draws[:, 1]),
                uu,
                np.int64(max_steps - steps),
                np.float64(c_sum),
                np.int64(tri_total),
                np.float64(lo_sum),
                np.int64(stall),
                np.int64(stall_limit),
                acc_step,
                acc_tri,
                acc_csum,
            )
            for k in range(int(n_acc)):
                trajectory.add(
                    steps + int(acc_step[k]) + 1,
                    int(acc_tri[k]),
                    float(acc_csum[k]) / defined,
                )
            steps += int(consumed)
            c_sum = float(c_sum)
            tri_total = int(tri_total)
            stall = int(stall)
            if status:
                break
        edges = [(int(a), int(b)) for a, b in zip(edge_a, edge_b)]
        return edges, steps, trajectory, tri_total

    adj: list[set[int]] = [set(s) for s in g.adjacency]
    edges = list(g.edges)
    while c_sum < lo_sum and steps < max_steps and stall < stall_limit:
        draws = rng.integers(0, n_edges, size=(_CLUSTER_BATCH, 2))
        uu = rng.random(_CLUSTER_BATCH)
        budget = min(_CLUSTER_BATCH, max_steps - steps)
        base = steps
        for idx in range(budget):
            steps = base + idx + 1
            accepted = False
            i, j = int(draws[idx, 0]), int(draws[idx, 1])
            if i != j:
                a, b = edges[i]
                c, d = edges[j]
                if a != c and a != d and b != c and b != d:
                    if uu[idx] < 0.5:
                        p, q, r, s = a, c, b, d
                    else:
                        p, q, r, s = a, d, b, c
                    if q not in adj[p] and s not in adj[r]:
                        delta, dtri = _clustering_delta_sets(
                            adj, inv_list, a, b, c, d, p, q, r, s
                        )
                        if delta > 0.0:
                            adj[a].remove(b)
                            adj[b].remove(a)
                            adj[c].remove(d)
                            adj[d].remove(c)
                            adj[p].add(q)
                            adj[q].add(p)
                            adj[r].add(s)
                            adj[s].add(r)
                            edges[i] = _canon(p, q)
                            edges[j] = _canon(r, s)
                            c_sum += delta
                            tri_total += dtri
                            accepted = True
                            stall = 0
                            trajectory.add(steps, tri_total, c_sum / defined)
            if not accepted:
                stall += 1
                if stall >= stall_limit:
                    break
            elif c_sum >= lo_sum:
                break
        if stall >= stall_limit or c_sum >= lo_sum:
            break
    return edges, steps, trajectory, tri_total


def _climb_triangles(
    g: Graph,
    config: RewireConfig,
    max_steps: int,
    stall_limit: int,
    engine: str,
) -> tuple[_RewireState, int, _Trajectory]:
    """Drive the triangles rule; returns (state, steps, trajectory).

    The bitset engine scans each batch of draws for the next draw that
    would change the graph and replays only that draw through the exact
    scalar step, so the chain is identical to stepping one draw at a time.
    """
    rng = np.random.default_rng(config.seed)
    use_bits = engine == "bitset"
    state = _RewireState(g, with_bits=use_bits)
    trajectory = _Trajectory(state.triangles, state.avg_clustering())
    steps = 0
    stall = 0
    n_edges = g.num_edges
    target, tol = config.target_c, config.tolerance
    reached = abs(state.avg_clustering() - target) <= tol
    if use_bits:
        edge_a = np.array([e[0] for e in state.edges], dtype=np.int64)
        edge_b = np.array([e[1] for e in state.edges], dtype=np.int64)
    buf_i = buf_j = np.empty(0, dtype=np.int64)
    pos = 0
    while not reached and steps < max_steps and stall < stall_limit:
        if pos == len(buf_i):
            draws = rng.integers(0, n_edges, size=(_TRIANGLE_BATCH, 2))
            buf_i = np.ascontiguousarray(draws[:, 0])
            buf_j = np.ascontiguousarray(draws[:, 1])
            pos = 0
        if not use_bits:
            if state.step(int(buf_i[pos]), int(buf_j[pos])):
                stall = 0
                steps += 1
                cur = state.avg_clustering()
                trajectory.add(steps, state.triangles, cur)
                reached = abs(cur - target) <= tol
            else:
                stall += 1
                steps += 1
            pos += 1
            continue
        p = int(_scan_first_accept(state.bits, edge_a, edge_b, buf_i, buf_j, pos))
        n_reject = (p if p >= 0 else len(buf_i)) - pos
        take = min(n_reject, max_steps - steps, stall_limit - stall)
        steps += take
        stall += take
        pos += take
        if p < 0 or take < n_reject or steps >= max_steps or stall >= stall_limit:
            continue
        changed = state.step(int(buf_i[p]), int(buf_j[p]))
        if not changed:
            raise AssertionError("scan kernel disagrees with scalar step")
        i_slot, j_slot = int(buf_i[p]), int(buf_j[p])
        edge_a[i_slot], edge_b[i_slot] = state.edges[i_slot]
        edge_a[j_slot], edge_b[j_slot] = state.edges[j_slot]
        steps += 1
        stall = 0
        pos = p + 1
        cur = state.avg_clustering()
        trajectory.add(steps, state.triangles, cur)
        reached = abs(cur - target) <= tol
    return state, steps, trajectory


def rewire_to_target(
    g: Graph, config: RewireConfig, engine: str = "auto"
) -> RewireOutcome:
    """Rewire ``g`` until its averaged clustering reaches ``config.target_c``.

    Both move rules only raise clustering, so the target must lie above
    the current coefficient.  Stalls (long runs of draws that change
    nothing) and the step budget bound the search; the outcome reports
    whether the target band was actually reached.  ``engine`` selects the
    adjacency backend: "bitset" (compiled kernels over a packed bit
    matrix), "python" (plain sets), or "auto" to choose by graph size.
    Engines produce identical chains for identical configs.

    Raises
    ------
    ValueError
        If ``target_c`` is at or below the current averaged clustering.
    """
    if g.num_edges < 2:
        raise ValueError("rewiring needs at least two edges")
    start_c = average_clustering(g)
    if config.target_c <= start_c:
        raise ValueError(
            f"target below current clustering "
            f"(target {config.target_c:.4f}, current {start_c:.4f})"
        )
    max_steps = (
        config.max_steps if config.max_steps is not None else 10_000 * g.num_edges
    )
    stall_limit = (
        config.stall_limit if config.stall_limit is not None else 50 * g.num_edges
    )
    engine = _resolve_engine(engine, g.num_nodes)

    if config.rule == "clustering":
        edges, steps, trajectory, tri_total = _climb_clustering(
            g, config, max_steps, stall_limit, engine
        )
        out = Graph.from_edges(g.num_nodes, edges, labels=g.labels)
    else:
        state, steps, trajectory = _climb_triangles(
            g, config, max_steps, stall_limit, engine
        )
        out = state.freeze(g.labels)
        tri_total = state.triangles
    achieved = average_clustering(out)
    reached = abs(achieved - config.target_c) <= config.tolerance
    return RewireOutcome(
        graph=out,
        achieved_c=achieved,
        steps_taken=steps,
        reached_target=bool(reached),
        trajectory=trajectory.finish(steps, tri_total, achieved),
    )
