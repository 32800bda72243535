"""Immutable undirected simple graphs and their structural statistics.

Nodes are dense integer ids ``0..num_nodes-1``; the original labels of the
input data are kept on the graph so results can be reported in the caller's
id space.  All mutation elsewhere in the package happens by building a new
``Graph``.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable

Pair = tuple[int, int]


def _canon(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with set-based adjacency.

    Attributes
    ----------
    adjacency:
        ``adjacency[v]`` is the frozen neighbor set of ``v``.  Set storage
        makes common-neighbor queries cost ``O(min(k_x, k_y))``.
    edges:
        Canonical edge list, each pair ``(a, b)`` with ``a < b``, sorted.
    labels:
        ``labels[v]`` is the original label of dense node ``v``.
    """

    adjacency: tuple[frozenset[int], ...]
    edges: tuple[Pair, ...]
    labels: tuple[int, ...]

    @property
    def num_nodes(self) -> int:
        return len(self.adjacency)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def degrees(self) -> list[int]:
        return [len(s) for s in self.adjacency]

    @classmethod
    def from_edges(
        cls,
        num_nodes: int,
        edges: Iterable[Pair],
        labels: Iterable[int] | None = None,
    ) -> "Graph":
        """Build a graph over ``0..num_nodes-1`` from canonical edge pairs.

        Edges must reference valid nodes; self loops and duplicates are
        rejected.  Use :func:`build_graph` for raw, unsanitized pair lists.
        """
        adj: list[set[int]] = [set() for _ in range(num_nodes)]
        edge_list: list[Pair] = []
        for a, b in edges:
            a, b = _canon(a, b)
            if a == b:
                raise ValueError(f"self loop on node {a}")
            if not (0 <= a and b < num_nodes):
                raise ValueError(f"edge ({a}, {b}) outside node range")
            if b in adj[a]:
                raise ValueError(f"duplicate edge ({a}, {b})")
            adj[a].add(b)
            adj[b].add(a)
            edge_list.append((a, b))
        edge_list.sort()
        if labels is None:
            label_tuple = tuple(range(num_nodes))
        else:
            label_tuple = tuple(labels)
            if len(label_tuple) != num_nodes:
                raise ValueError("one label per node required")
        return cls(
            adjacency=tuple(frozenset(s) for s in adj),
            edges=tuple(edge_list),
            labels=label_tuple,
        )


def build_graph(edge_pairs: Iterable[Pair]) -> Graph:
    """Sanitize raw label pairs into a :class:`Graph`.

    Self loops are dropped, duplicate mentions (in either orientation)
    collapse into one undirected edge, and labels are remapped to dense ids
    in sorted label order.  Nodes mentioned only in dropped self loops are
    kept as isolated nodes.

    Raises
    ------
    ValueError
        If the input contains no pairs at all ("empty graph").
    """
    pairs = list(edge_pairs)
    if not pairs:
        raise ValueError("empty graph")
    seen_labels: set[int] = set()
    for a, b in pairs:
        seen_labels.add(a)
        seen_labels.add(b)
    ordered = sorted(seen_labels)
    to_id = {lab: i for i, lab in enumerate(ordered)}
    edge_set: set[Pair] = set()
    for a, b in pairs:
        if a == b:
            continue
        edge_set.add(_canon(to_id[a], to_id[b]))
    return Graph.from_edges(len(ordered), sorted(edge_set), labels=ordered)


def drop_isolated_nodes(g: Graph) -> Graph:
    """Return a copy of ``g`` without degree-zero nodes (labels preserved)."""
    keep = [v for v in range(g.num_nodes) if g.degree(v) > 0]
    if not keep:
        raise ValueError("empty graph")
    remap = {v: i for i, v in enumerate(keep)}
    edges = [(remap[a], remap[b]) for a, b in g.edges]
    return Graph.from_edges(len(keep), edges, labels=[g.labels[v] for v in keep])


def local_clustering(g: Graph, v: int) -> float | None:
    """Clustering coefficient of node ``v``: 2*E_v / (k_v*(k_v-1)).

    ``E_v`` counts edges among the neighbors of ``v``.  Returns ``None``
    for nodes of degree <= 1, where the ratio is undefined.
    """
    if not 0 <= v < g.num_nodes:
        raise ValueError(f"node {v} out of range")
    k = g.degree(v)
    if k <= 1:
        return None
    nbrs = sorted(g.adjacency[v])
    closed = 0
    for i, u in enumerate(nbrs):
        for w in nbrs[i + 1 :]:
            if w in g.adjacency[u]:
                closed += 1
    return 2.0 * closed / (k * (k - 1))


def _neighbor_edge_counts(g: Graph) -> tuple[list[int], int]:
    """Per-node count of edges among neighbors, plus the triangle total.

    One pass over the edge list: a common neighbor z of edge (u, v) closes a
    triangle, contributing once to each of u, v, z.  Summing the per-edge
    common-neighbor count onto both endpoints counts every neighbor-edge of a
    node twice, hence the final halving.
    """
    acc = [0] * g.num_nodes
    total3 = 0
    adj = g.adjacency
    for u, v in g.edges:
        c = len(adj[u] & adj[v])
        acc[u] += c
        acc[v] += c
        total3 += c
    return [c // 2 for c in acc], total3 // 3


def triangle_count(g: Graph) -> int:
    """Number of triangles in ``g``."""
    return _neighbor_edge_counts(g)[1]


@dataclass(frozen=True)
class GraphStats:
    """Summary statistics of a graph.

    ``avg_clustering`` averages the local coefficient over nodes of degree
    >= 2 only, unless computed with ``include_low_degree=True`` in which
    case degree <= 1 nodes enter as zeros.
    """

    avg_degree: float
    avg_clustering: float
    gcc_fraction: float
    degree_histogram: dict[int, int]


def connected_component_sizes(g: Graph) -> list[int]:
    """Sizes of connected components, largest first."""
    seen = [False] * g.num_nodes
    sizes: list[int] = []
    for root in range(g.num_nodes):
        if seen[root]:
            continue
        seen[root] = True
        size = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    size += 1
                    queue.append(w)
        sizes.append(size)
    sizes.sort(reverse=True)
    return sizes


def average_clustering(g: Graph, include_low_degree: bool = False) -> float:
    """Mean local clustering coefficient.

    Degree <= 1 nodes have no defined coefficient; by default they are left
    out of both the sum and the denominator.  With ``include_low_degree``
    they count as zeros (the denominator becomes ``num_nodes``).
    """
    counts, _ = _neighbor_edge_counts(g)
    total = 0.0
    defined = 0
    for v in range(g.num_nodes):
        k = g.degree(v)
        if k <= 1:
            continue
        defined += 1
        total += 2.0 * counts[v] / (k * (k - 1))
    denom = g.num_nodes if include_low_degree else defined
    if denom == 0:
        return 0.0
    return total / denom


def graph_stats(g: Graph, include_low_degree: bool = False) -> GraphStats:
    """Compute degree, clustering, and component statistics of ``g``."""
    if g.num_nodes == 0:
        raise ValueError("empty graph")
    degs = g.degrees()
    sizes = connected_component_sizes(g)
    return GraphStats(
        avg_degree=2.0 * g.num_edges / g.num_nodes,
        avg_clustering=average_clustering(g, include_low_degree),
        gcc_fraction=sizes[0] / g.num_nodes,
        degree_histogram=dict(Counter(degs)),
    )
