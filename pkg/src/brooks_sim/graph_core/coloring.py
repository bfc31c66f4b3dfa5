"""Partial colorings over [delta] with incrementally maintained palette state."""

from __future__ import annotations

from typing import Iterable

from ..errors import ImproperColoringError
from .graph import Graph


class PartialColoring:
    """Proper partial coloring; colors are ints in [0, delta).

    Besides the assignment itself this maintains, per node, the multiset of
    colors of its colored neighbors. That gives O(1) palette sizes and
    repetition counts; `slackgen.measure_slack` recomputes the same numbers
    from scratch so the incremental bookkeeping can be cross-checked.
    """

    __slots__ = ("graph", "delta", "color", "uncolored_mask", "_nbr_colors", "_colored_nbrs")

    def __init__(self, graph: Graph, delta: int | None = None):
        self.graph = graph
        self.delta = graph.delta if delta is None else delta
        self.color: list[int | None] = [None] * graph.n
        self.uncolored_mask: int = (1 << graph.n) - 1
        self._nbr_colors: list[dict[int, int]] = [{} for _ in range(graph.n)]
        self._colored_nbrs: list[int] = [0] * graph.n

    def is_colored(self, v: int) -> bool:
        return self.color[v] is not None

    def assign(self, v: int, c: int) -> None:
        if self.color[v] is not None:
            raise ImproperColoringError(f"node {v} already colored")
        if not 0 <= c < self.delta:
            raise ImproperColoringError(f"color {c} outside [0,{self.delta})")
        for u in self.graph.adj[v]:
            if self.color[u] == c:
                raise ImproperColoringError(f"edge ({u},{v}) would be monochromatic in {c}")
        self.color[v] = c
        self.uncolored_mask &= ~(1 << v)
        for u in self.graph.adj[v]:
            counts = self._nbr_colors[u]
            counts[c] = counts.get(c, 0) + 1
            self._colored_nbrs[u] += 1

    def palette_size(self, v: int) -> int:
        return self.delta - len(self._nbr_colors[v])

    def palette(self, v: int) -> set[int]:
        return set(range(self.delta)) - self._nbr_colors[v].keys()

    def repetitions(self, v: int) -> int:
        """Colored neighbors minus distinct colors among them (permanent slack source)."""
        return self._colored_nbrs[v] - len(self._nbr_colors[v])

    def colored_neighbor_count(self, v: int) -> int:
        return self._colored_nbrs[v]

    def uncolored_degree_in(self, v: int, subgraph_mask: int) -> int:
        return (self.graph.masks[v] & subgraph_mask & self.uncolored_mask).bit_count()

    def slack_in(self, v: int, subgraph_mask: int) -> int:
        """Incrementally maintained slack of v in the induced subgraph.

        palette size minus uncolored degree within the subgraph; v must be
        uncolored for the value to mean anything, callers enforce that.
        """
        return self.palette_size(v) - self.uncolored_degree_in(v, subgraph_mask)

    def colored_nodes(self) -> list[int]:
        return [v for v in range(self.graph.n) if self.color[v] is not None]

    def uncolored_nodes(self) -> list[int]:
        return [v for v in range(self.graph.n) if self.color[v] is None]

    def uncolored_in(self, nodes: Iterable[int]) -> list[int]:
        return sorted(v for v in nodes if self.color[v] is None)

    def is_total(self) -> bool:
        return self.uncolored_mask == 0

    def copy(self) -> PartialColoring:
        dup = PartialColoring(self.graph, self.delta)
        dup.color = list(self.color)
        dup.uncolored_mask = self.uncolored_mask
        dup._nbr_colors = [dict(d) for d in self._nbr_colors]
        dup._colored_nbrs = list(self._colored_nbrs)
        return dup

    def as_list(self) -> list[int | None]:
        return list(self.color)
