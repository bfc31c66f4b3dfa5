"""(deg+1)-list coloring: instances, the randomized trial engine, and the
sequential greedy oracle.

A unit is one real node or a pair of real nodes that must end up
same-colored. Units are adjacent when they share a member or any two members
are adjacent in G; a unit's palette is [delta] minus the colors of colored
G-neighbors of any member (so a pair's palette is the intersection of its
endpoints' palettes).

The distributed solver is a plain synchronous trial loop (activate w.p. 1/2,
try a uniform available color, keep on no conflict) standing in for the
cited list-coloring algorithms; it reports rounds but makes no round-
complexity claim. The engine is behind one interface so a faster algorithm
could be swapped in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import BrooksSimError, DegPlusOneViolation, InstanceInfeasible
from .graph_core import Graph, PartialColoring
from .sim_engine import Message, RoundMetrics, StreamRng, color_value_bits, run_protocol

Unit = tuple[int, ...]

TAG_TRY = 1
TAG_KEEP = 2


@dataclass(frozen=True)
class ListInstance:
    name: str
    delta: int
    units: tuple[Unit, ...]
    edges: tuple[tuple[int, int], ...]
    palettes: tuple[frozenset[int], ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * len(self.units)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)

    @property
    def min_palette(self) -> int | None:
        return min((len(p) for p in self.palettes), default=None)

    @property
    def max_degree(self) -> int | None:
        return max(self.degrees, default=None)

    def to_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "delta": self.delta,
                "units": [list(u) for u in self.units],
                "edges": [list(e) for e in self.edges],
                "palettes": [sorted(p) for p in self.palettes],
            },
            sort_keys=True,
        )


def make_unit(*nodes: int) -> Unit:
    return tuple(sorted(nodes))


def build_instance(
    g: Graph,
    coloring: PartialColoring,
    units: Sequence[Unit],
    *,
    name: str = "instance",
) -> ListInstance:
    """Assemble an instance over the given units; degrees count only edges
    inside the instance. Asserts the deg+1 property unit by unit."""
    units = tuple(sorted(make_unit(*u) for u in units))
    node_to_unit: dict[int, int] = {}
    for idx, unit in enumerate(units):
        for v in unit:
            if coloring.is_colored(v):
                raise BrooksSimError(f"{name}: unit member {v} is already colored")
            if v in node_to_unit:
                raise BrooksSimError(f"{name}: node {v} appears in two units")
            node_to_unit[v] = idx

    palettes = []
    for unit in units:
        palette = set(range(coloring.delta))
        for v in unit:
            palette &= coloring.palette(v)
        palettes.append(frozenset(palette))

    edges: set[tuple[int, int]] = set()
    for idx, unit in enumerate(units):
        for v in unit:
            for w in g.adj[v]:
                j = node_to_unit.get(w)
                if j is not None and j != idx:
                    edges.add((idx, j) if idx < j else (j, idx))
        if len(unit) == 2 and g.has_edge(unit[0], unit[1]):
            raise BrooksSimError(f"{name}: pair {unit} is an edge of G")

    instance = ListInstance(
        name=name,
        delta=coloring.delta,
        units=units,
        edges=tuple(sorted(edges)),
        palettes=tuple(palettes),
    )
    for idx, unit in enumerate(units):
        if len(instance.palettes[idx]) < instance.degrees[idx] + 1:
            raise DegPlusOneViolation(
                name, unit, len(instance.palettes[idx]), instance.degrees[idx]
            )
    return instance


class TrialProgram:
    """Per-unit trial loop: even rounds try, odd rounds resolve."""

    __slots__ = ("idx", "neighbors", "available", "candidate", "color", "halted")

    def __init__(self, idx: int, neighbors: tuple[int, ...], palette: frozenset[int]):
        self.idx = idx
        self.neighbors = neighbors
        self.available = sorted(palette)
        self.candidate: int | None = None
        self.color: int | None = None
        self.halted = False

    def step(
        self, round_no: int, inbox: Mapping[int, Message], rng: StreamRng
    ) -> tuple[dict[int, Message], bool]:
        if round_no % 2 == 0:
            # neighbors fixed in the previous resolve round shrink the palette
            for msg in inbox.values():
                if msg[0] == TAG_KEEP and msg[1] in self.available:
                    self.available.remove(msg[1])
            if not self.available:
                raise AssertionError("palette exhausted despite deg+1 invariant")
            self.candidate = None
            if rng.uniform() < 0.5:
                self.candidate = self.available[rng.randrange(len(self.available))]
                return {u: (TAG_TRY, self.candidate) for u in self.neighbors}, False
            return {}, False
        if self.candidate is not None:
            conflict = any(
                msg[0] == TAG_TRY and msg[1] == self.candidate for msg in inbox.values()
            )
            if not conflict:
                self.color = self.candidate
                return {u: (TAG_KEEP, self.color) for u in self.neighbors}, True
        return {}, False


def default_trial_rounds(unit_count: int) -> int:
    n = max(2, unit_count)
    return 64 * max(1, (n - 1).bit_length()) + 64


def solve_distributed(
    instance: ListInstance,
    seed: int,
    max_rounds: int | None = None,
    *,
    strict_bit_budget: int | None = None,
) -> tuple[dict[Unit, int], RoundMetrics]:
    """Color all units by repeated synchronous trials; empty assignment for
    an empty instance."""
    k = len(instance.units)
    if k == 0:
        return {}, RoundMetrics()
    if max_rounds is None:
        max_rounds = default_trial_rounds(k)
    sim_graph = Graph(k, instance.edges)
    programs = [
        TrialProgram(i, sim_graph.adj[i], instance.palettes[i]) for i in range(k)
    ]
    final, metrics = run_protocol(
        sim_graph,
        programs,
        seed,
        max_rounds=max_rounds,
        value_bits=color_value_bits(instance.delta),
        strict_bit_budget=strict_bit_budget,
        phase=instance.name,
    )
    assignment = {instance.units[i]: final[i].color for i in range(k)}
    if any(c is None for c in assignment.values()):
        raise AssertionError("halted with uncolored units")
    return assignment, metrics


def solve_greedy_oracle(instance: ListInstance) -> dict[Unit, int]:
    """Sequential greedy in unit order; the deg+1 property guarantees a free
    color at every step, so failure means the instance was malformed."""
    adj: list[list[int]] = [[] for _ in instance.units]
    for i, j in instance.edges:
        adj[i].append(j)
        adj[j].append(i)
    colors: list[int | None] = [None] * len(instance.units)
    for idx in range(len(instance.units)):
        taken = {colors[j] for j in adj[idx] if colors[j] is not None}
        free = sorted(instance.palettes[idx] - taken)
        if not free:
            raise InstanceInfeasible(
                f"{instance.name}: unit {instance.units[idx]} has no free color"
            )
        colors[idx] = free[0]
    return {instance.units[i]: colors[i] for i in range(len(instance.units))}


def validate_assignment(instance: ListInstance, assignment: dict[Unit, int]) -> bool:
    """Total, in-palette, proper w.r.t. instance edges."""
    if set(assignment) != set(instance.units):
        return False
    for idx, unit in enumerate(instance.units):
        if assignment[unit] not in instance.palettes[idx]:
            return False
    for i, j in instance.edges:
        if assignment[instance.units[i]] == assignment[instance.units[j]]:
            return False
    return True


DISTRIBUTED = "distributed"
CENTRALIZED = "centralized"


@dataclass(frozen=True)
class InstanceRecord:
    kind: str
    units: int
    min_palette: int | None
    max_degree: int | None
    rounds: int
    tag: str
    declared_min: str

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "units": self.units,
            "min_palette": self.min_palette,
            "max_degree": self.max_degree,
            "rounds": self.rounds,
            "tag": self.tag,
            "declared_min": self.declared_min,
        }


@dataclass
class InstanceLedger:
    """Ordered record of every executed instance of a pipeline run."""

    records: list[InstanceRecord] = field(default_factory=list)

    def append(self, record: InstanceRecord) -> None:
        self.records.append(record)

    def kinds(self) -> tuple[str, ...]:
        return tuple(r.kind for r in self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def get(self, kind: str) -> InstanceRecord:
        for record in self.records:
            if record.kind == kind:
                return record
        raise KeyError(kind)

    def to_json_list(self) -> list[dict]:
        return [r.to_json_dict() for r in self.records]
