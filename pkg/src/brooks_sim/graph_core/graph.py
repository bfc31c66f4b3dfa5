"""Immutable simple undirected graph with dense integer node ids."""

from __future__ import annotations

from typing import Iterable, Iterator

from ..errors import GraphInvariantError


class Graph:
    """Simple undirected graph on nodes 0..n-1.

    Adjacency is kept three ways: sorted tuples (deterministic iteration),
    sets (membership), and int bitmasks (fast intersection counting).
    Immutable after construction; safe for concurrent reads.
    """

    __slots__ = ("n", "m", "delta", "adj", "_adj_sets", "masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise GraphInvariantError(f"negative node count {n}")
        self.n = n
        seen: set[tuple[int, int]] = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphInvariantError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise GraphInvariantError(f"self-loop at node {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphInvariantError(f"duplicate edge ({key[0]},{key[1]})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.m = len(seen)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self._adj_sets: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in self.adj)
        masks = []
        for a in self.adj:
            mask = 0
            for u in a:
                mask |= 1 << u
            masks.append(mask)
        self.masks: tuple[int, ...] = tuple(masks)
        self.delta = max((len(a) for a in self.adj), default=0)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._adj_sets[v]

    def mask(self, v: int) -> int:
        return self.masks[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj_sets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def nodes(self) -> range:
        return range(self.n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, delta={self.delta})"


def mask_of(nodes: Iterable[int]) -> int:
    """Bitmask with one bit per node id."""
    mask = 0
    for v in nodes:
        mask |= 1 << v
    return mask


def complete_graph(k: int) -> Graph:
    return Graph(k, [(i, j) for i in range(k) for j in range(i + 1, k)])


def cycle_graph(k: int) -> Graph:
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def path_graph(k: int) -> Graph:
    return Graph(k, [(i, i + 1) for i in range(k - 1)])
