"""Eventually periodic subsets of the naturals.

A set is stored as an explicit head below ``start`` plus a residue pattern
modulo ``period`` that applies from ``start`` on.  Values are normalised on
construction (minimal period, then minimal start), so two equal sets always
compare equal and hash equally.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _divisors(p: int) -> list[int]:
    small = [d for d in range(1, int(p**0.5) + 1) if p % d == 0]
    return sorted(set(small + [p // d for d in small]))


@dataclass(frozen=True)
class EventuallyPeriodic:
    start: int
    head: frozenset[int]
    period: int
    residues: frozenset[int]

    def __post_init__(self) -> None:
        if self.period < 1 or self.start < 0:
            raise ValueError("period must be >= 1 and start >= 0")
        if any(x < 0 or x >= self.start for x in self.head):
            raise ValueError("head elements must lie in [0, start)")
        if any(x < 0 or x >= self.period for x in self.residues):
            raise ValueError("residues must lie in [0, period)")

    @classmethod
    def make(cls, start: int, head: Iterable[int], period: int, residues: Iterable[int]) -> "EventuallyPeriodic":
        """Build and normalise."""
        head = frozenset(head)
        residues = frozenset(x % period for x in residues)
        for d in _divisors(period):
            if all(((x + d) % period in residues) for x in residues):
                residues = frozenset(x % d for x in residues)
                period = d
                break
        while start > 0:
            x = start - 1
            if (x in head) != ((x % period) in residues):
                break
            head = head - {x}
            start = x
        return cls(start, head, period, residues)

    # constructors -------------------------------------------------------

    @classmethod
    def empty(cls) -> "EventuallyPeriodic":
        return cls(0, frozenset(), 1, frozenset())

    @classmethod
    def full(cls) -> "EventuallyPeriodic":
        return cls(0, frozenset(), 1, frozenset({0}))

    @classmethod
    def finite(cls, elements: Iterable[int]) -> "EventuallyPeriodic":
        elements = frozenset(elements)
        if any(x < 0 for x in elements):
            raise ValueError("negative element")
        top = max(elements) + 1 if elements else 0
        return cls.make(top, elements, 1, ())

    @classmethod
    def interval(cls, lo: int, hi: int | None = None) -> "EventuallyPeriodic":
        """[lo, hi), or the tail [lo, oo) when hi is None."""
        lo = max(lo, 0)
        if hi is None:
            return cls.make(lo, (), 1, (0,))
        return cls.finite(range(lo, max(lo, hi)))

    @classmethod
    def congruence(cls, a: int, m: int) -> "EventuallyPeriodic":
        if m < 1:
            raise ValueError("modulus must be >= 1")
        return cls.make(0, (), m, (a % m,))

    # queries ------------------------------------------------------------

    def __contains__(self, x: int) -> bool:
        if x < 0:
            return False
        if x < self.start:
            return x in self.head
        return (x % self.period) in self.residues

    def is_finite(self) -> bool:
        return not self.residues

    def is_cofinite(self) -> bool:
        return len(self.residues) == self.period

    def tail(self) -> "EventuallyPeriodic":
        """The same residue pattern with the head dropped (start = 0)."""
        return EventuallyPeriodic(0, frozenset(), self.period, self.residues)

    def count_below(self, h: int) -> int:
        if h <= self.start:
            return sum(1 for x in self.head if x < h)
        n = len(self.head)
        span = h - self.start
        full, rest = divmod(span, self.period)
        n += full * len(self.residues)
        base = self.start + full * self.period
        n += sum(1 for x in range(base, h) if (x % self.period) in self.residues)
        return n

    def elements_below(self, h: int) -> list[int]:
        return [x for x in range(h) if x in self]

    # Boolean algebra ----------------------------------------------------

    def _combine(self, other: "EventuallyPeriodic", op) -> "EventuallyPeriodic":
        period = _lcm(self.period, other.period)
        start = max(self.start, other.start)
        head = [x for x in range(start) if op(x in self, x in other)]
        residues = []
        for rho in range(period):
            x = start + ((rho - start) % period)
            if op(x in self, x in other):
                residues.append(rho)
        return EventuallyPeriodic.make(start, head, period, residues)

    def __and__(self, other: "EventuallyPeriodic") -> "EventuallyPeriodic":
        return self._combine(other, lambda a, b: a and b)

    def __or__(self, other: "EventuallyPeriodic") -> "EventuallyPeriodic":
        return self._combine(other, lambda a, b: a or b)

    def __sub__(self, other: "EventuallyPeriodic") -> "EventuallyPeriodic":
        return self._combine(other, lambda a, b: a and not b)

    def __invert__(self) -> "EventuallyPeriodic":
        head = [x for x in range(self.start) if x not in self.head]
        residues = [x for x in range(self.period) if x not in self.residues]
        return EventuallyPeriodic.make(self.start, head, self.period, residues)

    def __le__(self, other: "EventuallyPeriodic") -> bool:
        return (self - other).is_empty()

    def is_empty(self) -> bool:
        return not self.head and not self.residues

    # serialisation ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "head": sorted(self.head),
            "period": self.period,
            "residues": sorted(self.residues),
        }

    @classmethod
    def from_json(cls, data: dict) -> "EventuallyPeriodic":
        return cls.make(data["start"], data["head"], data["period"], data["residues"])

    def __str__(self) -> str:
        tail = "{" + ",".join(map(str, sorted(self.residues))) + f"}} mod {self.period}"
        if not self.start:
            return tail
        return "{" + ",".join(map(str, sorted(self.head))) + f"}} | x>={self.start}: {tail}"
