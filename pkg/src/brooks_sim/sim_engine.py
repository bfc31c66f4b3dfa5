"""Round-synchronous message-passing simulator with bit accounting.

Execution model: in round r every non-halted node sees the messages sent to
it in round r-1, its own state, and a private random stream, and produces at
most one message per incident edge. The scheduler is sequential in node-id
order, which (together with the keyed streams) makes a run a pure function
of (graph, programs, seed).

Messages are (tag, value) pairs with value an int in [0, 2^value_bits) or
None; their canonical encoding is 2 tag bits plus value_bits payload bits,
and that encoding is what the budget accounting measures.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from typing import Mapping, Protocol, Sequence

from .errors import MessageSizeViolation, RoundLimitExceeded
from .graph_core import Graph

TAG_BITS = 2

Message = tuple[int, int | None]


class StreamRng:
    """Deterministic per-(seed, node, round) stream.

    Draws come from blake2b over (seed, node, round, counter); activation and
    color draws therefore stay independent, and a node's randomness is
    reproducible without running the simulator.
    """

    __slots__ = ("_prefix", "_counter")

    def __init__(self, seed: int, node: int, round_no: int):
        self._prefix = struct.pack("<qqq", seed, node, round_no)
        self._counter = 0

    def _next(self) -> int:
        raw = hashlib.blake2b(
            self._prefix + struct.pack("<q", self._counter), digest_size=8
        ).digest()
        self._counter += 1
        return int.from_bytes(raw, "little")

    def uniform(self) -> float:
        """Float in [0, 1) with 53 random bits."""
        return (self._next() >> 11) / (1 << 53)

    def randrange(self, k: int) -> int:
        """Uniform int in [0, k), rejection-free (multiply-shift)."""
        if k <= 0:
            raise ValueError("randrange needs k >= 1")
        return (self._next() * k) >> 64


class NodeProgram(Protocol):
    """Per-node protocol logic. `halted` may be True before the first step."""

    halted: bool

    def step(
        self, round_no: int, inbox: Mapping[int, Message], rng: StreamRng
    ) -> tuple[dict[int, Message], bool]:
        """Return (outbox keyed by neighbor id, halted)."""
        ...


@dataclass
class RoundMetrics:
    rounds_elapsed: int = 0
    messages_sent: int = 0
    per_round_max_bits: list[int] = field(default_factory=list)

    @property
    def max_message_bits(self) -> int:
        return max(self.per_round_max_bits, default=0)

    def merge(self, other: "RoundMetrics") -> None:
        self.rounds_elapsed += other.rounds_elapsed
        self.messages_sent += other.messages_sent
        self.per_round_max_bits.extend(other.per_round_max_bits)


def message_bits(msg: Message, value_bits: int) -> int:
    tag, value = msg
    return TAG_BITS + (value_bits if value is not None else 0)


def run_protocol(
    g: Graph,
    programs: Sequence[NodeProgram],
    seed: int,
    max_rounds: int,
    *,
    value_bits: int = 1,
    strict_bit_budget: int | None = None,
    phase: str | None = None,
) -> tuple[list[NodeProgram], RoundMetrics]:
    """Run lockstep rounds until every program halts or max_rounds is hit.

    Returns the (mutated) programs as final states plus metrics. Raises
    RoundLimitExceeded naming the nodes that had not halted, and
    MessageSizeViolation in strict mode when a message overflows the budget.
    """
    if len(programs) != g.n:
        raise ValueError(f"need one program per node: {len(programs)} != {g.n}")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    metrics = RoundMetrics()
    halted = [bool(getattr(p, "halted", False)) for p in programs]
    inboxes: list[dict[int, Message]] = [{} for _ in range(g.n)]
    for round_no in range(max_rounds):
        if all(halted):
            return list(programs), metrics
        next_inboxes: list[dict[int, Message]] = [{} for _ in range(g.n)]
        round_max_bits = 0
        for v in range(g.n):
            if halted[v]:
                continue
            rng = StreamRng(seed, v, round_no)
            outbox, node_halted = programs[v].step(round_no, inboxes[v], rng)
            halted[v] = node_halted
            if not outbox:
                continue
            nbrs = g.neighbor_set(v)
            for target, msg in outbox.items():
                if target not in nbrs:
                    raise ValueError(f"node {v} sent to non-neighbor {target}")
                value = msg[1]
                if value is not None and not 0 <= value < (1 << value_bits):
                    raise ValueError(f"node {v}: value {value} overflows {value_bits} bits")
                bits = message_bits(msg, value_bits)
                if strict_bit_budget is not None and bits > strict_bit_budget:
                    raise MessageSizeViolation(v, bits, strict_bit_budget, phase=phase)
                if bits > round_max_bits:
                    round_max_bits = bits
                metrics.messages_sent += 1
                next_inboxes[target][v] = msg
        metrics.rounds_elapsed += 1
        metrics.per_round_max_bits.append(round_max_bits)
        inboxes = next_inboxes
    if not all(halted):
        pending = tuple(v for v in range(g.n) if not halted[v])
        raise RoundLimitExceeded(
            f"{len(pending)} nodes had not halted after {max_rounds} rounds",
            pending,
            phase=phase,
        )
    return list(programs), metrics


def check_congest_budget(metrics: RoundMetrics, n: int, c: int) -> bool:
    """True iff every recorded message fits in c * ceil(log2 n) bits."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return metrics.max_message_bits <= c * _ceil_log2(n)


def _ceil_log2(n: int) -> int:
    return (n - 1).bit_length()


def color_value_bits(delta: int) -> int:
    """Bits for one color in [delta]."""
    return max(1, (delta - 1).bit_length())
