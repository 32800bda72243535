"""Plain-text edge list reading and writing.

The wire format is one edge per line as two whitespace-separated integer
labels.  Lines starting with ``#`` and blank lines are ignored.  This is the
only graph serialization the package understands.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .graph import Graph, Pair, build_graph, drop_isolated_nodes


@dataclass(frozen=True)
class LoadOptions:
    """Preprocessing applied while loading an edge list.

    drop_isolates:
        Remove nodes that end up with degree zero (for example nodes whose
        only mentions were self loops).
    symmetrize:
        Documents that directed inputs are read as undirected: (a, b) and
        (b, a) collapse into one edge.  The produced graph is undirected
        either way; the flag records the intended reading of the source.
    drop_self_loops:
        Always true.  Self loops have no meaning in a simple graph.
    """

    drop_isolates: bool = False
    symmetrize: bool = True
    drop_self_loops: bool = True

    def __post_init__(self) -> None:
        if not self.drop_self_loops:
            raise ValueError("self loops are always dropped")


def parse_edge_lines(lines: Iterable[str], source: str = "<input>") -> list[Pair]:
    """Parse edge-list lines into raw label pairs.

    Raises ``ValueError`` naming the offending line number on malformed
    input (wrong token count or a token that is not an integer).
    """
    pairs: list[Pair] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ValueError(
                f"{source}:{lineno}: malformed edge line "
                f"(expected two integer tokens, got {len(tokens)})"
            )
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ValueError(
                f"{source}:{lineno}: malformed edge line "
                f"(non-integer token in {tokens!r})"
            ) from None
        pairs.append((a, b))
    return pairs


def load_edge_list(path: str | Path, options: LoadOptions = LoadOptions()) -> Graph:
    """Load an undirected simple graph from an edge-list file.

    Self loops are dropped and duplicate mentions collapse.  With
    ``options.drop_isolates`` nodes of degree zero are removed after
    cleaning.  Original labels are retained on the graph.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        pairs = parse_edge_lines(fh, source=str(path))
    g = build_graph(pairs)
    if options.drop_isolates:
        g = drop_isolated_nodes(g)
    return g


def save_edge_list(g: Graph, path: str | Path) -> None:
    """Write ``g`` as an edge list using its original node labels."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for a, b in g.edges:
            fh.write(f"{g.labels[a]} {g.labels[b]}\n")
