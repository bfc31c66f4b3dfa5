"""Exact integer arithmetic for the psi/phi degree thresholds.

psi = delta^(1/3) and phi = delta^(2/3)/2 are irrational for most delta, so
every decision comparison is done on cubed integers instead of floats:

    count >= phi      <=>  (2*count)^3 >= delta^2
    count >= phi/2    <=>  (4*count)^3 >= delta^2
    size  >= delta - floor(psi)   with floor(psi) the integer cube root.
"""

from __future__ import annotations

from dataclasses import dataclass


def icbrt(x: int) -> int:
    """Integer cube root: largest r with r^3 <= x."""
    if x < 0:
        raise ValueError("icbrt of negative value")
    r = round(x ** (1 / 3))
    while r**3 > x:
        r -= 1
    while (r + 1) ** 3 <= x:
        r += 1
    return r


def floor_psi(delta: int) -> int:
    return icbrt(delta)


def count_meets_phi(count: int, delta: int) -> bool:
    """count >= delta^(2/3)/2, exactly."""
    return (2 * count) ** 3 >= delta * delta


def count_meets_half_phi(count: int, delta: int) -> bool:
    """count >= delta^(2/3)/4, exactly."""
    return (4 * count) ** 3 >= delta * delta


def ceil_phi(delta: int) -> int:
    """Smallest integer count with count >= phi."""
    c = icbrt(delta * delta) // 2  # near delta^(2/3)/2
    while not count_meets_phi(c, delta):
        c += 1
    while c > 0 and count_meets_phi(c - 1, delta):
        c -= 1
    return c


@dataclass(frozen=True)
class Thresholds:
    """psi/phi for a given delta; float views for reports, exact tests for decisions."""

    delta: int

    @property
    def psi(self) -> float:
        return self.delta ** (1 / 3)

    @property
    def phi(self) -> float:
        return self.delta ** (2 / 3) / 2

    def is_special_count(self, count: int) -> bool:
        return count_meets_phi(count, self.delta)

    def meets_half_phi(self, count: int) -> bool:
        return count_meets_half_phi(count, self.delta)

    def difficult_size_ok(self, size: int) -> bool:
        """size >= delta - floor(psi); psi rounded down keeps the criterion strict."""
        return size >= self.delta - floor_psi(self.delta)
