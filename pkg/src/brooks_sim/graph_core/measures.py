"""Structural measures: sparsity, outside degree, anti-degree, K_{delta+1} test.

Sparsity is kept as an exact Fraction so threshold comparisons (eps^2 * delta
and friends) never go through floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from ..errors import BrooksSimError
from .graph import Graph

if TYPE_CHECKING:  # pragma: no cover - import cycle guard
    from ..acd import AlmostCliqueDecomposition


@dataclass(frozen=True)
class StructuralMeasures:
    """Per-node zeta for everyone; outside/anti degree for AC members only."""

    zeta: dict[int, Fraction]
    e: dict[int, int]
    a: dict[int, int]


def edges_inside(g: Graph, nodes_mask: int) -> int:
    """Number of edges of g with both endpoints in the masked set."""
    total = 0
    mask = nodes_mask
    while mask:
        low = mask & -mask
        v = low.bit_length() - 1
        total += (g.masks[v] & nodes_mask).bit_count()
        mask ^= low
    return total // 2


def sparsity(g: Graph, v: int) -> Fraction:
    """Local sparsity: (binom(delta,2) - edges inside N(v)) / delta, exact."""
    d = g.delta
    if d == 0:
        return Fraction(0)
    inside = edges_inside(g, g.masks[v])
    return Fraction(d * (d - 1) // 2 - inside, d)


def outside_degree(g: Graph, acd: "AlmostCliqueDecomposition", v: int) -> int:
    """Neighbors of v outside its own almost-clique. Errors on sparse nodes."""
    clique_mask = _own_clique_mask(acd, v)
    return (g.masks[v] & ~clique_mask).bit_count()


def anti_degree(g: Graph, acd: "AlmostCliqueDecomposition", v: int) -> int:
    """Non-neighbors of v inside its own almost-clique (v itself excluded)."""
    clique_mask = _own_clique_mask(acd, v)
    inside = clique_mask & ~(1 << v)
    return (inside & ~g.masks[v]).bit_count()


def _own_clique_mask(acd: "AlmostCliqueDecomposition", v: int) -> int:
    idx = acd.membership[v]
    if idx < 0:
        raise BrooksSimError(f"node {v} is sparse, outside/anti degree undefined")
    return acd.clique_masks[idx]


def structural_measures(g: Graph, acd: "AlmostCliqueDecomposition") -> StructuralMeasures:
    zeta = {v: sparsity(g, v) for v in range(g.n)}
    e = {}
    a = {}
    for clique in acd.cliques:
        for v in clique:
            e[v] = outside_degree(g, acd, v)
            a[v] = anti_degree(g, acd, v)
    return StructuralMeasures(zeta=zeta, e=e, a=a)


def contains_delta_plus_one_clique(g: Graph) -> bool:
    """Exact test: a K_{delta+1} forces some degree-delta node whose closed
    neighborhood is complete, and conversely."""
    d = g.delta
    if d == 0:
        return g.n >= 1  # K_1 is a (0+1)-clique
    for v in range(g.n):
        if len(g.adj[v]) != d:
            continue
        closed_v = g.masks[v] | (1 << v)
        if all((closed_v & ~(g.masks[u] | (1 << u))) == 0 for u in g.adj[v]):
            return True
    return False
