"""Almost-clique classification and the seven-set fine partition.

An AC is easy (simplicial node or non-edge), difficult (non-easy, has a
special neighbor, size >= delta - psi), nice (easy or contains a picked
special), or ordinary (none of the above). Each difficult AC picks its
smallest-id special neighbor; specials picked twice become escapes (their
ACs runaways), picked once become protectors (ACs guarded).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .acd import AlmostCliqueDecomposition
from .errors import PartitionViolationError
from .graph_core import Graph, mask_of
from .thresholds import Thresholds

NICE, ORDINARY, GUARDED, RUNAWAY = "nice", "ordinary", "guarded", "runaway"


@dataclass(frozen=True)
class ACClassification:
    thresholds: Thresholds
    labels: tuple[str, ...]
    easy: tuple[bool, ...]
    special_sets: tuple[frozenset[int], ...]
    picked: tuple[int | None, ...]  # per difficult AC; None elsewhere
    protectors: frozenset[int]
    escapes: frozenset[int]

    def is_difficult(self, idx: int) -> bool:
        return self.labels[idx] in (GUARDED, RUNAWAY)

    def picked_special(self, idx: int) -> int:
        node = self.picked[idx]
        if node is None:
            raise PartitionViolationError(f"AC {idx} is not difficult, no picked special")
        return node

    def to_json(self) -> str:
        return json.dumps(
            {
                "labels": list(self.labels),
                "easy": list(self.easy),
                "specials": [sorted(s) for s in self.special_sets],
                "picked": list(self.picked),
                "protectors": sorted(self.protectors),
                "escapes": sorted(self.escapes),
            },
            sort_keys=True,
        )


@dataclass(frozen=True)
class FinePartition:
    """The seven node sets P, E, V*, O, R, N, G of the fine-grained partition."""

    P: frozenset[int]
    E: frozenset[int]
    Vstar: frozenset[int]
    O: frozenset[int]
    R: frozenset[int]
    N: frozenset[int]
    G: frozenset[int]

    def sets(self) -> dict[str, frozenset[int]]:
        return {
            "P": self.P,
            "E": self.E,
            "Vstar": self.Vstar,
            "O": self.O,
            "R": self.R,
            "N": self.N,
            "G": self.G,
        }

    def mask(self, *names: str) -> int:
        total = 0
        for name in names:
            total |= mask_of(self.sets()[name])
        return total

    def to_json(self) -> str:
        return json.dumps({k: sorted(v) for k, v in self.sets().items()}, sort_keys=True)


def find_special(g: Graph, acd: AlmostCliqueDecomposition, clique_idx: int) -> frozenset[int]:
    """Outside nodes with at least phi neighbors in the AC."""
    thresholds = Thresholds(g.delta)
    cmask = acd.clique_masks[clique_idx]
    clique = acd.cliques[clique_idx]
    candidates: set[int] = set()
    for v in clique:
        candidates.update(g.adj[v])
    out = []
    for u in sorted(candidates - set(clique)):
        if thresholds.is_special_count((g.masks[u] & cmask).bit_count()):
            out.append(u)
    return frozenset(out)


def has_non_edge(g: Graph, clique: frozenset[int], cmask: int) -> bool:
    return any((cmask & ~(g.masks[v] | (1 << v))) != 0 for v in clique)


def is_simplicial(g: Graph, v: int) -> bool:
    """True iff N(v) induces a clique (in the whole graph)."""
    nmask = g.masks[v]
    return all((nmask & ~(1 << u)) & ~g.masks[u] == 0 for u in g.adj[v])


def is_easy(g: Graph, acd: AlmostCliqueDecomposition, clique_idx: int) -> bool:
    clique = acd.cliques[clique_idx]
    cmask = acd.clique_masks[clique_idx]
    if has_non_edge(g, clique, cmask):
        return True
    return any(is_simplicial(g, v) for v in clique)


def classify_acs(
    g: Graph, acd: AlmostCliqueDecomposition, thresholds: Thresholds | None = None
) -> ACClassification:
    if thresholds is None:
        thresholds = Thresholds(g.delta)
    t = len(acd.cliques)
    easy = tuple(is_easy(g, acd, i) for i in range(t))
    specials = tuple(find_special(g, acd, i) for i in range(t))

    # pass 1: difficult ACs pick their smallest-id special
    difficult = [
        not easy[i] and bool(specials[i]) and thresholds.difficult_size_ok(len(acd.cliques[i]))
        for i in range(t)
    ]
    picked: list[int | None] = [min(specials[i]) if difficult[i] else None for i in range(t)]

    # pass 2: escape/protector status needs the global pick counts
    pick_count: dict[int, int] = {}
    for node in picked:
        if node is not None:
            pick_count[node] = pick_count.get(node, 0) + 1
    escapes = frozenset(v for v, c in pick_count.items() if c >= 2)
    protectors = frozenset(v for v, c in pick_count.items() if c == 1)
    picked_any = escapes | protectors

    labels = []
    for i in range(t):
        if difficult[i]:
            labels.append(RUNAWAY if picked[i] in escapes else GUARDED)
        elif easy[i] or (acd.cliques[i] & picked_any):
            labels.append(NICE)
        else:
            labels.append(ORDINARY)
    return ACClassification(
        thresholds=thresholds,
        labels=tuple(labels),
        easy=easy,
        special_sets=specials,
        picked=tuple(picked),
        protectors=protectors,
        escapes=escapes,
    )


def fine_partition(
    g: Graph, acd: AlmostCliqueDecomposition, cls: ACClassification
) -> FinePartition:
    """Build the seven sets and assert both structural observations."""
    pe = cls.protectors | cls.escapes
    if cls.protectors & cls.escapes:
        raise PartitionViolationError(
            f"node {min(cls.protectors & cls.escapes)} is both protector and escape"
        )

    buckets: dict[str, set[int]] = {k: set() for k in ("O", "R", "N", "G")}
    for idx, clique in enumerate(acd.cliques):
        label = cls.labels[idx]
        if label in (GUARDED, RUNAWAY, ORDINARY):
            # Obs: difficult and ordinary ACs are cliques without P/E members
            if has_non_edge(g, clique, acd.clique_masks[idx]):
                raise PartitionViolationError(f"{label} AC {idx} is not a clique")
            inside_pe = clique & pe
            if inside_pe:
                raise PartitionViolationError(
                    f"{label} AC {idx} contains picked special {min(inside_pe)}",
                    node=min(inside_pe),
                )
        if label == ORDINARY:
            buckets["O"].update(clique)
        elif label == RUNAWAY:
            buckets["R"].update(clique)
        elif label == GUARDED:
            buckets["G"].update(clique)
        else:
            buckets["N"].update(clique - pe)

    part = FinePartition(
        P=cls.protectors,
        E=cls.escapes,
        Vstar=frozenset(acd.sparse - pe),
        O=frozenset(buckets["O"]),
        R=frozenset(buckets["R"]),
        N=frozenset(buckets["N"]),
        G=frozenset(buckets["G"]),
    )

    counts = [0] * g.n
    for name, nodes in part.sets().items():
        for v in nodes:
            counts[v] += 1
    for v, c in enumerate(counts):
        if c != 1:
            raise PartitionViolationError(
                f"node {v} appears in {c} partition sets", node=v
            )
    return part
