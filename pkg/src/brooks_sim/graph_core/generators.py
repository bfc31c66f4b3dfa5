"""Adversarial instance families.

Families:
  clique_minus_edge  K_{delta+1} minus one edge; the missing pair must be
                     same-colored in any delta-coloring.
  matched_cliques    two K_delta joined by a perfect matching; ordinary ACs
                     whose slack must come from the random color trial.
  guarded_pair       a (delta-deficit)-clique fully covered by two outside
                     special nodes; classifies as one guarded AC plus a
                     protector (deficit defaults to 1).
  runaway_pair       two (delta-deficit)-cliques sharing both special nodes;
                     the smaller-id special is picked twice and becomes an
                     escape.
  random_gnd         near-delta-regular random graph, exactly one node of
                     degree delta (the rest keep a-priori slack).
  mixed              disjoint/bridged union of the above.

All generators are deterministic in (delta, seed), emit max degree exactly
delta, contain no K_{delta+1}, and record construction counts in meta for
test cross-checks. epsilon_min/epsilon_max bound the admissible ACD epsilon
for the family at this delta.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..errors import UnsupportedFamilyError
from ..thresholds import ceil_phi, floor_psi
from .graph import Graph
from .measures import contains_delta_plus_one_clique

FAMILIES = (
    "clique_minus_edge",
    "matched_cliques",
    "guarded_pair",
    "runaway_pair",
    "random_gnd",
    "mixed",
)

# Desk-scale default; inside every family's admissible range for delta >= 3.
DEFAULT_EPSILON = Fraction(1, 8)


@dataclass(frozen=True)
class GeneratedGraph:
    graph: Graph
    family: str
    delta: int
    seed: int
    epsilon_min: Fraction
    epsilon_max: Fraction
    meta: dict = field(default_factory=dict)

    @property
    def epsilon(self) -> Fraction:
        """The family's declared epsilon at this delta."""
        eps = DEFAULT_EPSILON
        if eps < self.epsilon_min:
            eps = self.epsilon_min
        if eps > self.epsilon_max:
            eps = self.epsilon_max
        return eps


def generate(family: str, delta: int, seed: int = 0, **params) -> Graph:
    return generate_instance(family, delta, seed, **params).graph


def generate_instance(family: str, delta: int, seed: int = 0, **params) -> GeneratedGraph:
    try:
        builder = _BUILDERS[family]
    except KeyError:
        raise UnsupportedFamilyError(f"unknown family {family!r}") from None
    if delta < _MIN_DELTA[family]:
        raise UnsupportedFamilyError(
            f"family {family!r} needs delta >= {_MIN_DELTA[family]}, got {delta}"
        )
    out = builder(delta, seed, **params)
    g = out.graph
    if g.delta != delta:
        raise UnsupportedFamilyError(f"{family}({delta}) produced max degree {g.delta}")
    if contains_delta_plus_one_clique(g):
        raise UnsupportedFamilyError(f"{family}({delta}, seed={seed}) contains a K_{delta + 1}")
    return out


def admissible_epsilon(family: str, delta: int) -> Fraction:
    return generate_instance(family, delta, 0).epsilon


def _clique_minus_edge(delta: int, seed: int) -> GeneratedGraph:
    n = delta + 1
    rng = random.Random(seed)
    a = rng.randrange(n)
    b = rng.randrange(n - 1)
    if b >= a:
        b += 1
    missing = (min(a, b), max(a, b))
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) != missing
    ]
    return GeneratedGraph(
        graph=Graph(n, edges),
        family="clique_minus_edge",
        delta=delta,
        seed=seed,
        epsilon_min=Fraction(1, 3 * delta),
        epsilon_max=Fraction(1, 4),
        meta={"missing_edge": missing},
    )


def _matched_cliques(delta: int, seed: int) -> GeneratedGraph:
    rng = random.Random(seed)
    side_a = list(range(delta))
    side_b = list(range(delta, 2 * delta))
    perm = list(range(delta))
    rng.shuffle(perm)
    edges = []
    for side in (side_a, side_b):
        edges.extend((side[i], side[j]) for i in range(delta) for j in range(i + 1, delta))
    matching = [(side_a[i], side_b[perm[i]]) for i in range(delta)]
    edges.extend(matching)
    return GeneratedGraph(
        graph=Graph(2 * delta, edges),
        family="matched_cliques",
        delta=delta,
        seed=seed,
        epsilon_min=Fraction(1, 4 * delta),
        epsilon_max=Fraction(1, 4),
        meta={"sides": (tuple(side_a), tuple(side_b)), "matching": tuple(matching)},
    )


def _covered_clique_edges(
    clique: list[int], s_first: int, s_second: int, k: int
) -> tuple[list[tuple[int, int]], list[int], list[int]]:
    """Clique edges plus coverage: s_first sees positions [0,k), s_second sees
    [k-1, m). Overlap of exactly one member keeps both special degrees down
    while every member gets an outside neighbor (no simplicial nodes)."""
    m = len(clique)
    edges = [(clique[i], clique[j]) for i in range(m) for j in range(i + 1, m)]
    cov_first = clique[:k]
    cov_second = clique[k - 1 :]
    edges.extend((s_first, v) for v in cov_first)
    edges.extend((s_second, v) for v in cov_second)
    return edges, cov_first, cov_second


def _coverage_epsilon_max(delta: int, max_coverage: int) -> Fraction:
    # The special must stay outside the AC: below the augmentation threshold
    # (coverage < (1-4eps)*delta, strict) and under property-4's cap.
    return Fraction(delta - max_coverage, 4 * delta) - Fraction(1, 8 * delta)


def _check_deficit(family: str, delta: int, deficit: int) -> None:
    # |C| >= delta - floor(psi) keeps the clique in the difficult size range
    if not 1 <= deficit <= floor_psi(delta):
        raise UnsupportedFamilyError(
            f"{family}({delta}): deficit {deficit} outside [1, {floor_psi(delta)}]"
        )


def _pad_to_delta(edges: list[tuple[int, int]], n: int, delta: int) -> tuple[int, bool]:
    """Append a disjoint star so the graph's max degree is exactly delta."""
    degrees: dict[int, int] = {}
    for u, v in edges:
        degrees[u] = degrees.get(u, 0) + 1
        degrees[v] = degrees.get(v, 0) + 1
    if max(degrees.values(), default=0) >= delta:
        return n, False
    hub = n
    edges.extend((hub, hub + 1 + i) for i in range(delta))
    return n + 1 + delta, True


def _guarded_pair(delta: int, seed: int, deficit: int = 1) -> GeneratedGraph:
    # One (delta-deficit)-clique; specials 0 and 1 cover it with one-node
    # overlap. The deficit parameterizes the figures' unstated clique size.
    _check_deficit("guarded_pair", delta, deficit)
    rng = random.Random(seed)
    m = delta - deficit
    clique = list(range(2, 2 + m))
    rng.shuffle(clique)
    k = (m + 2) // 2  # |S1|; |S2| = m - k + 1
    edges, cov1, cov2 = _covered_clique_edges(clique, 0, 1, k)
    need = ceil_phi(delta)
    if min(len(cov1), len(cov2)) < need:
        raise UnsupportedFamilyError(f"guarded_pair({delta}): coverage below phi")
    n, padded = _pad_to_delta(edges, 2 + m, delta)
    return GeneratedGraph(
        graph=Graph(n, edges),
        family="guarded_pair",
        delta=delta,
        seed=seed,
        epsilon_min=Fraction(deficit, delta),
        epsilon_max=_coverage_epsilon_max(delta, max(len(cov1), len(cov2))),
        meta={
            "clique": tuple(sorted(clique)),
            "specials": (0, 1),
            "expected_protector": 0,
            "coverage": {0: tuple(sorted(cov1)), 1: tuple(sorted(cov2))},
            "deficit": deficit,
            "padded": padded,
        },
    )


def _runaway_pair(delta: int, seed: int, deficit: int = 1) -> GeneratedGraph:
    # Two (delta-deficit)-cliques; special 0 takes the first ~half of each,
    # special 1 the rest. deg(0) = delta exactly, both special for both cliques.
    _check_deficit("runaway_pair", delta, deficit)
    rng = random.Random(seed)
    m = delta - deficit
    clique1 = list(range(2, 2 + m))
    clique2 = list(range(2 + m, 2 + 2 * m))
    rng.shuffle(clique1)
    rng.shuffle(clique2)
    k1 = (delta + 1) // 2
    k2 = delta - k1
    edges1, cov11, cov21 = _covered_clique_edges(clique1, 0, 1, k1)
    edges2, cov12, cov22 = _covered_clique_edges(clique2, 0, 1, k2)
    need = ceil_phi(delta)
    if min(len(cov11), len(cov21), len(cov12), len(cov22)) < need:
        raise UnsupportedFamilyError(f"runaway_pair({delta}): coverage below phi")
    max_cov = max(len(cov11), len(cov21), len(cov12), len(cov22))
    return GeneratedGraph(
        graph=Graph(2 + 2 * m, edges1 + edges2),
        family="runaway_pair",
        delta=delta,
        seed=seed,
        epsilon_min=Fraction(deficit, delta),
        epsilon_max=_coverage_epsilon_max(delta, max_cov),
        meta={
            "cliques": (tuple(sorted(clique1)), tuple(sorted(clique2))),
            "specials": (0, 1),
            "expected_escape": 0,
            "coverage": {
                0: (tuple(sorted(cov11)), tuple(sorted(cov12))),
                1: (tuple(sorted(cov21)), tuple(sorted(cov22))),
            },
            "deficit": deficit,
        },
    )


def _random_gnd(delta: int, seed: int, n: int | None = None) -> GeneratedGraph:
    rng = random.Random(seed)
    if n is None:
        n = 4 * delta
    if n % 2:
        n += 1
    adj: list[set[int]] = [set() for _ in range(n)]

    def add(u: int, v: int) -> bool:
        if u == v or v in adj[u]:
            return False
        adj[u].add(v)
        adj[v].add(u)
        return True

    d = delta - 2
    for _ in range(d // 2):  # union of random Hamiltonian cycles
        perm = list(range(n))
        rng.shuffle(perm)
        for i in range(n):
            add(perm[i], perm[(i + 1) % n])
    if d % 2:
        perm = list(range(n))
        rng.shuffle(perm)
        for i in range(0, n - 1, 2):
            add(perm[i], perm[i + 1])
    # duplicate skips leave degrees <= delta-2; raise node 0 to exactly delta
    tries = 0
    while len(adj[0]) < delta and tries < 50 * n:
        v = rng.randrange(1, n)
        if len(adj[v]) <= delta - 2:
            add(0, v)
        tries += 1
    for v in range(1, n):  # deterministic fallback, effectively unreachable
        if len(adj[0]) >= delta:
            break
        if len(adj[v]) <= delta - 2:
            add(0, v)
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return GeneratedGraph(
        graph=Graph(n, edges),
        family="random_gnd",
        delta=delta,
        seed=seed,
        epsilon_min=Fraction(1, 4 * delta),
        epsilon_max=Fraction(1, 4),
        meta={"max_degree_node": 0, "n": n},
    )


_MIXED_CYCLE = (
    "clique_minus_edge",
    "matched_cliques",
    "guarded_pair",
    "runaway_pair",
    "random_gnd",
)


def _spare_nodes(part: GeneratedGraph, degrees: dict[int, int], offset: int) -> list[int]:
    """Attachment points that tolerate one more edge without losing what the
    family relies on (random_gnd nodes must keep a-priori slack)."""
    g = part.graph
    limit = part.delta - 2 if part.family == "random_gnd" else part.delta - 1
    spare = []
    for v in range(g.n):
        gv = offset + v
        if part.family == "random_gnd" and v == part.meta["max_degree_node"]:
            continue
        if degrees.get(gv, g.degree(v)) <= limit:
            spare.append(gv)
    return spare


def _mixed(
    delta: int,
    seed: int,
    components: int = 5,
    kinds: tuple[str, ...] | None = None,
    random_n: int | None = None,
) -> GeneratedGraph:
    if kinds is None:
        kinds = tuple(_MIXED_CYCLE[i % len(_MIXED_CYCLE)] for i in range(components))
    rng = random.Random(seed ^ 0x5EED)
    parts: list[GeneratedGraph] = []
    for idx, kind in enumerate(kinds):
        params = {"n": random_n} if (kind == "random_gnd" and random_n) else {}
        parts.append(generate_instance(kind, delta, seed * 131 + idx, **params))

    edges: list[tuple[int, int]] = []
    offsets: list[int] = []
    total = 0
    for part in parts:
        offsets.append(total)
        edges.extend((total + u, total + v) for u, v in part.graph.edges())
        total += part.graph.n

    degrees: dict[int, int] = {}
    bridges: list[tuple[int, int]] = []
    for i in range(len(parts) - 1):
        if rng.random() >= 0.5:
            continue
        left = _spare_nodes(parts[i], degrees, offsets[i])
        right = _spare_nodes(parts[i + 1], degrees, offsets[i + 1])
        if not left or not right:
            continue  # e.g. matched_cliques has no spare-degree node
        u, v = left[0], right[0]
        bridges.append((u, v))
        edges.append((u, v))
        for x in (u, v):
            part_idx = i if x == u else i + 1
            base = parts[part_idx].graph.degree(x - offsets[part_idx])
            degrees[x] = degrees.get(x, base) + 1

    eps_min = max(p.epsilon_min for p in parts)
    eps_max = min(p.epsilon_max for p in parts)
    return GeneratedGraph(
        graph=Graph(total, edges),
        family="mixed",
        delta=delta,
        seed=seed,
        epsilon_min=eps_min,
        epsilon_max=eps_max,
        meta={
            "components": tuple(
                {"family": p.family, "offset": off, "n": p.graph.n, "meta": p.meta}
                for p, off in zip(parts, offsets)
            ),
            "bridges": tuple(bridges),
        },
    )


_BUILDERS: dict[str, Callable[..., GeneratedGraph]] = {
    "clique_minus_edge": _clique_minus_edge,
    "matched_cliques": _matched_cliques,
    "guarded_pair": _guarded_pair,
    "runaway_pair": _runaway_pair,
    "random_gnd": _random_gnd,
    "mixed": _mixed,
}

_MIN_DELTA = {
    "clique_minus_edge": 3,
    "matched_cliques": 3,
    "guarded_pair": 12,
    "runaway_pair": 12,
    "random_gnd": 6,
    "mixed": 12,
}
