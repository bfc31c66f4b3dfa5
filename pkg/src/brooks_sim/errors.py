"""Exception types shared across the package.

Every error carries an optional `phase` so pipeline failures can name the
step they came from; the CLI serializes that into its error object.
"""

from __future__ import annotations


class BrooksSimError(Exception):
    def __init__(self, message: str, *, phase: str | None = None):
        super().__init__(message)
        self.phase = phase


class GraphFormatError(BrooksSimError):
    """Unparseable or non-simple graph file; carries the 1-based line number."""

    def __init__(self, message: str, *, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class GraphInvariantError(BrooksSimError):
    """Construction would violate simplicity (self-loop, duplicate, bad id)."""


class UnsupportedFamilyError(BrooksSimError):
    """Unknown generator family or unsupported (family, delta) combination."""


class ImproperColoringError(BrooksSimError):
    """Assignment would give two adjacent nodes the same color."""


class SlackMeasureError(BrooksSimError):
    """Slack was requested for an already-colored node."""


class RoundLimitExceeded(BrooksSimError):
    def __init__(self, message: str, pending: tuple[int, ...], *, phase: str | None = None):
        super().__init__(message, phase=phase)
        self.pending = pending


class MessageSizeViolation(BrooksSimError):
    def __init__(self, node: int, bits: int, budget: int, *, phase: str | None = None):
        super().__init__(
            f"node {node} sent a {bits}-bit message, budget is {budget} bits", phase=phase
        )
        self.node = node
        self.bits = bits
        self.budget = budget


class AcdVerificationError(BrooksSimError):
    """The computed decomposition fails one of the four contract properties."""

    def __init__(self, message: str, report=None, *, phase: str | None = None):
        super().__init__(message, phase=phase)
        self.report = report


class PartitionViolationError(BrooksSimError):
    """A node landed in zero or two of the seven fine-partition sets."""

    def __init__(self, message: str, node: int | None = None, *, phase: str | None = None):
        super().__init__(message, phase=phase)
        self.node = node


class DegPlusOneViolation(BrooksSimError):
    """A list instance unit has |palette| <= instance degree (upstream slack failure)."""

    def __init__(self, instance_name: str, unit, palette_size: int, degree: int):
        super().__init__(
            f"{instance_name}: unit {unit} has palette {palette_size} <= degree {degree}",
            phase=instance_name,
        )
        self.unit = unit
        self.palette_size = palette_size
        self.degree = degree


class InstanceInfeasible(BrooksSimError):
    """Greedy oracle ran out of colors; only reachable if deg+1 was violated."""


class DeltaPlusOneCliquePresent(BrooksSimError):
    """Input contains a K_{delta+1}; no delta-coloring exists."""


class RetryExhausted(BrooksSimError):
    def __init__(self, message: str, attempts: int, *, phase: str | None = None):
        super().__init__(message, phase=phase)
        self.attempts = attempts


class SizeLimitError(BrooksSimError):
    """Exhaustive oracle asked to run beyond its size bound."""
