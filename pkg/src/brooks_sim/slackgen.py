"""One-round random color trial (slack generation) and its property checks.

Participants activate independently with probability p_g, activated nodes try
a uniform color from [delta] and keep it exactly when no neighbor tried the
same color. Runs as node programs inside the simulator: a try round, a
resolve round (keep/discard + keep announcements), and a final delivery
round so neighbors observe every kept color.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .acd import AlmostCliqueDecomposition
from .classify import ACClassification, FinePartition, ORDINARY
from .errors import SlackMeasureError
from .graph_core import Graph, PartialColoring
from .sim_engine import Message, RoundMetrics, StreamRng, color_value_bits, run_protocol

TAG_TRY = 1
TAG_KEEP = 2

# Classical activation probability for the one-round trial.
P_G_DEFAULT = 0.05


class SlackGenerationProgram:
    """Node program for one slack-generation trial."""

    __slots__ = (
        "node",
        "participant",
        "delta",
        "p_g",
        "neighbors",
        "tried",
        "kept",
        "neighbor_keeps",
        "halted",
    )

    def __init__(
        self, node: int, neighbors: tuple[int, ...], participant: bool, delta: int, p_g: float
    ):
        self.node = node
        self.neighbors = neighbors
        self.participant = participant
        self.delta = delta
        self.p_g = p_g
        self.tried: int | None = None
        self.kept: int | None = None
        self.neighbor_keeps: dict[int, int] = {}
        self.halted = False

    def step(
        self, round_no: int, inbox: Mapping[int, Message], rng: StreamRng
    ) -> tuple[dict[int, Message], bool]:
        if round_no == 0:
            if self.participant:
                activated = rng.uniform() < self.p_g  # activation draw precedes color draw
                color = rng.randrange(self.delta)
                if activated:
                    self.tried = color
                    return {u: (TAG_TRY, color) for u in self.neighbors}, False
            return {}, False
        if round_no == 1:
            if self.tried is not None:
                conflict = any(
                    msg[0] == TAG_TRY and msg[1] == self.tried for msg in inbox.values()
                )
                if not conflict:
                    self.kept = self.tried
                    return {u: (TAG_KEEP, self.kept) for u in self.neighbors}, False
            return {}, False
        # round 2: record keep announcements, then halt
        for sender, msg in inbox.items():
            if msg[0] == TAG_KEEP:
                self.neighbor_keeps[sender] = msg[1]
        return {}, True


def run_slack_generation_with_metrics(
    g: Graph,
    participants: Iterable[int],
    p_g: float,
    seed: int,
    *,
    strict_bit_budget: int | None = None,
) -> tuple[PartialColoring, RoundMetrics]:
    pset = set(participants)
    programs = [
        SlackGenerationProgram(v, g.adj[v], v in pset, g.delta, p_g) for v in range(g.n)
    ]
    final, metrics = run_protocol(
        g,
        programs,
        seed,
        max_rounds=4,
        value_bits=color_value_bits(g.delta),
        strict_bit_budget=strict_bit_budget,
        phase="slackgen",
    )
    coloring = PartialColoring(g)
    for prog in final:
        if prog.kept is not None:
            if prog.node not in pset:
                raise AssertionError("non-participant kept a color")
            coloring.assign(prog.node, prog.kept)
    return coloring, metrics


def run_slack_generation(
    g: Graph, participants: Iterable[int], p_g: float = P_G_DEFAULT, seed: int = 0
) -> PartialColoring:
    coloring, _ = run_slack_generation_with_metrics(g, participants, p_g, seed)
    return coloring


def measure_slack(
    g: Graph, coloring: PartialColoring, v: int, subgraph_nodes: Iterable[int]
) -> int:
    """From-scratch slack of an uncolored node in the induced subgraph.

    Recounts palette and uncolored degree directly from the color array,
    independently of the incrementally maintained counters.
    """
    if coloring.color[v] is not None:
        raise SlackMeasureError(f"node {v} is colored, slack undefined")
    sub = set(subgraph_nodes)
    used = {coloring.color[u] for u in g.adj[v] if coloring.color[u] is not None}
    palette = coloring.delta - len(used)
    uncolored_deg = sum(1 for u in g.adj[v] if u in sub and coloring.color[u] is None)
    return palette - uncolored_deg


@dataclass
class SlackReport:
    """Measured slack-property quantities plus the retry-gate verdict.

    The asymptotic guarantees hide their constants; the gate applies the weakest
    sufficient conditions (>=1 slack, >=1 unit-slack node, <=1/2 colored) and
    raw values are kept for analysis.
    """

    sparse_slack: dict[int, int] = field(default_factory=dict)
    escape_slack: dict[int, int] = field(default_factory=dict)
    ordinary_unit_slack: dict[int, int] = field(default_factory=dict)
    difficult_colored_fraction: dict[int, Fraction] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def gate_ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "sparse_slack": {str(k): v for k, v in sorted(self.sparse_slack.items())},
            "escape_slack": {str(k): v for k, v in sorted(self.escape_slack.items())},
            "ordinary_unit_slack": {
                str(k): v for k, v in sorted(self.ordinary_unit_slack.items())
            },
            "difficult_colored_fraction": {
                str(k): str(v) for k, v in sorted(self.difficult_colored_fraction.items())
            },
            "violations": list(self.violations),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def check_lemma33(
    g: Graph,
    acd: AlmostCliqueDecomposition,
    cls: ACClassification,
    part: FinePartition,
    coloring: PartialColoring,
) -> SlackReport:
    report = SlackReport()
    vo_mask = part.mask("Vstar", "O")
    full_mask = (1 << g.n) - 1

    # (i) sparse nodes in G[V* u O]; escapes in G[V]
    for v in sorted(part.Vstar):
        if coloring.is_colored(v):
            continue
        slack = coloring.slack_in(v, vo_mask)
        report.sparse_slack[v] = slack
        if slack < 1:
            report.violations.append(f"sparse node {v} has slack {slack} < 1")
    for v in sorted(part.E):
        slack = coloring.slack_in(v, full_mask)
        report.escape_slack[v] = slack
        if slack < 1:
            report.violations.append(f"escape {v} has slack {slack} < 1 in G[V]")

    # (ii) uncolored unit-slack nodes per ordinary AC
    for idx, clique in enumerate(acd.cliques):
        if cls.labels[idx] != ORDINARY:
            continue
        uncolored = [v for v in clique if not coloring.is_colored(v)]
        count = sum(1 for v in uncolored if coloring.slack_in(v, vo_mask) >= 1)
        report.ordinary_unit_slack[idx] = count
        if uncolored and count == 0:
            report.violations.append(f"ordinary AC {idx}: no uncolored unit-slack node")

    # (iii) colored fraction of N_C(picked special) per difficult AC
    for idx in range(len(acd.cliques)):
        if not cls.is_difficult(idx):
            continue
        pick = cls.picked_special(idx)
        inside = g.masks[pick] & acd.clique_masks[idx]
        total = inside.bit_count()
        colored = (inside & ~coloring.uncolored_mask).bit_count()
        frac = Fraction(colored, total) if total else Fraction(0)
        report.difficult_colored_fraction[idx] = frac
        if 2 * colored > total:
            report.violations.append(
                f"difficult AC {idx}: {colored}/{total} of N_C(special) colored"
            )
    return report


def participant_set(part: FinePartition) -> frozenset[int]:
    """Slack-generation participants: V* u O u R."""
    return part.Vstar | part.O | part.R
