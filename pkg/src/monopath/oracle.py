"""Set descriptors and large-set oracles.

An oracle answers "large" or "small" for finitary set descriptors and keeps
a transcript so that its answers can be audited afterwards for the
properties a non-principal ultrafilter would have.

``CongruenceOracle`` is exact on eventually periodic sets: given nested
residues r_m modulo M_m = lcm(1..m) it calls a set large iff the set
contains a tail of the progression {x = r_m mod M_m} at the first level
whose modulus is a multiple of the set's period.  ``DensityOracle`` is a
heuristic for colourings without periodic structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Callable, Iterable, Optional

from .periodic import EventuallyPeriodic


class OracleError(RuntimeError):
    pass


class UndecidableDescriptor(OracleError):
    """The oracle cannot reduce the descriptor; supply a different oracle."""


class OracleIncoherence(OracleError):
    pass


# ---------------------------------------------------------------------------
# descriptors


class Descriptor:
    def contains(self, x: int) -> bool:
        raise NotImplementedError

    def patched(self, x: int) -> bool:
        """Membership with each atom's hole at its own vertex filled; a finite change."""
        return self.contains(x)

    def periodic(self) -> EventuallyPeriodic:
        raise UndecidableDescriptor(f"{self} has no eventually periodic form")

    def tail_pattern(self) -> EventuallyPeriodic:
        """The eventual residue pattern only (enough for a non-principal oracle)."""
        return self.periodic().tail()

    def __and__(self, other: "Descriptor") -> "Descriptor":
        return Intersection((self, other))

    def __or__(self, other: "Descriptor") -> "Descriptor":
        return Union((self, other))

    def __invert__(self) -> "Descriptor":
        return Complement(self)

    def __sub__(self, other: "Descriptor") -> "Descriptor":
        return Intersection((self, Complement(other)))


@dataclass(frozen=True, eq=False)
class Literal(Descriptor):
    """A literal eventually periodic set; also covers congruences, intervals and finite sets."""

    value: EventuallyPeriodic
    label: str = ""

    def contains(self, x: int) -> bool:
        return x in self.value

    def periodic(self) -> EventuallyPeriodic:
        return self.value

    def __str__(self) -> str:
        return self.label or str(self.value)


def congruence(a: int, m: int) -> Literal:
    return Literal(EventuallyPeriodic.congruence(a, m), f"{{x = {a % m} mod {m}}}")


def interval(lo: int, hi: Optional[int] = None) -> Literal:
    return Literal(EventuallyPeriodic.interval(lo, hi), f"[{lo},{'oo' if hi is None else hi})")


def finite(elements: Iterable[int]) -> Literal:
    elements = sorted(set(elements))
    return Literal(EventuallyPeriodic.finite(elements), "{" + ",".join(map(str, elements)) + "}")


def everything() -> Literal:
    return Literal(EventuallyPeriodic.full(), "N")


@dataclass(frozen=True, eq=False)
class Nbhd(Descriptor):
    """N(v, i) in a lazy coloured graph."""

    graph: object
    v: int
    i: int

    def contains(self, x: int) -> bool:
        return self.graph.colour(self.v, x) == self.i

    def patched(self, x: int) -> bool:
        return self.contains(self.v + 1 if x == self.v else x)

    def periodic(self) -> EventuallyPeriodic:
        p = self.graph.neighbourhood_pattern(self.v, self.i)
        if p is None:
            return super().periodic()
        return p

    def tail_pattern(self) -> EventuallyPeriodic:
        t = self.graph.neighbourhood_tail(self.v, self.i)
        return super().tail_pattern() if t is None else t

    def __str__(self) -> str:
        return f"N({self.v},{self.i})"


@dataclass(frozen=True, eq=False)
class CrossNbhd(Descriptor):
    """{zeta : a_xi b_zeta has colour j} in an H-type graph, as b-indices."""

    graph: object
    xi: int
    j: int

    def contains(self, zeta: int) -> bool:
        return self.graph.cross_colour(self.xi, zeta) == self.j

    def periodic(self) -> EventuallyPeriodic:
        p = self.graph.cross_pattern(self.xi, self.j)
        if p is None:
            return super().periodic()
        return p

    def __str__(self) -> str:
        return f"NB({self.xi},{self.j})"


@dataclass(frozen=True, eq=False)
class LabelClass(Descriptor):
    """{v : label(v) == i} for a labelling that is periodic with period p from threshold t."""

    label: Callable[[int], int]
    i: int
    period: Optional[int] = None
    threshold: int = 0
    name: str = "V"

    def contains(self, x: int) -> bool:
        return self.label(x) == self.i

    def periodic(self) -> EventuallyPeriodic:
        if self.period is None:
            return super().periodic()
        t, p = self.threshold, self.period
        head = [x for x in range(t) if self.label(x) == self.i]
        residues = [x % p for x in range(t, t + p) if self.label(x) == self.i]
        return EventuallyPeriodic.make(t, head, p, residues)

    def __str__(self) -> str:
        return f"{self.name}_{self.i}"


@dataclass(frozen=True, eq=False)
class Union(Descriptor):
    parts: tuple[Descriptor, ...]

    def contains(self, x: int) -> bool:
        return any(p.contains(x) for p in self.parts)

    def patched(self, x: int) -> bool:
        return any(p.patched(x) for p in self.parts)

    def periodic(self) -> EventuallyPeriodic:
        out = EventuallyPeriodic.empty()
        for p in self.parts:
            out = out | p.periodic()
        return out

    def __str__(self) -> str:
        return "(" + " | ".join(map(str, self.parts)) + ")" if self.parts else "{}"


@dataclass(frozen=True, eq=False)
class Intersection(Descriptor):
    parts: tuple[Descriptor, ...]

    def contains(self, x: int) -> bool:
        return all(p.contains(x) for p in self.parts)

    def patched(self, x: int) -> bool:
        return all(p.patched(x) for p in self.parts)

    def periodic(self) -> EventuallyPeriodic:
        out = EventuallyPeriodic.full()
        for p in self.parts:
            out = out & p.periodic()
        return out

    def __str__(self) -> str:
        return "(" + " & ".join(map(str, self.parts)) + ")" if self.parts else "N"


@dataclass(frozen=True, eq=False)
class Complement(Descriptor):
    part: Descriptor

    def contains(self, x: int) -> bool:
        return not self.part.contains(x)

    def patched(self, x: int) -> bool:
        return not self.part.patched(x)

    def periodic(self) -> EventuallyPeriodic:
        return ~self.part.periodic()

    def __str__(self) -> str:
        return f"~{self.part}"


# ---------------------------------------------------------------------------
# window sets (keys for the density oracle)


@dataclass(frozen=True)
class WindowSet:
    """A set observed on a window of ``size`` naturals only, as a bitmask."""

    bits: int
    size: int

    def __and__(self, o: "WindowSet") -> "WindowSet":
        return WindowSet(self.bits & o.bits, self.size)

    def __or__(self, o: "WindowSet") -> "WindowSet":
        return WindowSet(self.bits | o.bits, self.size)

    def __invert__(self) -> "WindowSet":
        return WindowSet(((1 << self.size) - 1) ^ self.bits, self.size)

    def __le__(self, o: "WindowSet") -> bool:
        return self.bits & ~o.bits == 0

    def is_finite(self) -> bool:
        return self.bits == 0

    def is_cofinite(self) -> bool:
        return self.bits == (1 << self.size) - 1

    def tail(self) -> "WindowSet":
        return self


# ---------------------------------------------------------------------------
# oracles


@dataclass
class TranscriptEntry:
    descriptor: str
    key: object
    large: bool


class LargeSetOracle:
    kind = "user"

    def __init__(self) -> None:
        self.transcript: list[TranscriptEntry] = []

    def key(self, d: Descriptor):
        raise NotImplementedError

    def _decide_key(self, key) -> bool:
        raise NotImplementedError

    def decide(self, d: Descriptor) -> bool:
        """True for large, False for small; every answer is logged."""
        key = self.key(d)
        large = self._decide_key(key)
        self.transcript.append(TranscriptEntry(str(d), key, large))
        return large

    def identity(self) -> str:
        return self.kind


class UserOracle(LargeSetOracle):
    """Wraps a caller-supplied decision on eventually periodic sets."""

    kind = "user"

    def __init__(self, decide_fn: Callable[[EventuallyPeriodic], bool]) -> None:
        super().__init__()
        self._fn = decide_fn

    def key(self, d: Descriptor) -> EventuallyPeriodic:
        return d.periodic()

    def _decide_key(self, key: EventuallyPeriodic) -> bool:
        return bool(self._fn(key))


class CongruenceOracle(LargeSetOracle):
    kind = "congruence"

    def __init__(self, residues: Iterable[int]) -> None:
        super().__init__()
        chain = []
        for m, res in enumerate(residues, start=1):
            modulus = lcm(*range(1, m + 1))
            res %= modulus
            if chain and res % chain[-1][0] != chain[-1][1]:
                raise ValueError(
                    f"residue chain not nested at level {m}: {res} is not {chain[-1][1]} mod {chain[-1][0]}"
                )
            chain.append((modulus, res))
        if not chain:
            raise ValueError("empty residue chain")
        self.chain = tuple(chain)

    @classmethod
    def constant(cls, residue: int = 0, levels: int = 16) -> "CongruenceOracle":
        """The chain r_m = residue for every level (always nested)."""
        return cls([residue] * levels)

    def key(self, d: Descriptor) -> EventuallyPeriodic:
        # the answer ignores finite differences, so the tail suffices
        return d.tail_pattern()

    def level(self, period: int) -> tuple[int, int]:
        for modulus, res in self.chain:
            if modulus % period == 0:
                return modulus, res
        raise UndecidableDescriptor(
            f"period {period} does not divide lcm(1..{len(self.chain)}); extend the residue chain"
        )

    def _decide_key(self, key: EventuallyPeriodic) -> bool:
        _, res = self.level(key.period)
        return (res % key.period) in key.residues

    def identity(self) -> str:
        return f"congruence:{','.join(str(r) for _, r in self.chain)}"


class DensityOracle(LargeSetOracle):
    """Heuristic: large iff more than half of the window [offset, offset + size) lies in the set.

    The window is odd-sized and far from 0, so a set and its complement
    never tie and finite sets below the offset are small.  This is not an
    ultrafilter fragment; its transcript is still audited and an
    incoherent run is aborted by the caller.
    """

    kind = "density"

    def __init__(self, size: int = 511, offset: int = 1 << 20) -> None:
        super().__init__()
        if size < 1 or size % 2 == 0:
            raise ValueError("density window size must be odd")
        self.size = size
        self.offset = offset

    def key(self, d: Descriptor) -> WindowSet:
        bits = 0
        for k in range(self.size):
            if d.patched(self.offset + k):
                bits |= 1 << k
        return WindowSet(bits, self.size)

    def _decide_key(self, key: WindowSet) -> bool:
        return 2 * key.bits.bit_count() > key.size

    def identity(self) -> str:
        return f"density:{self.size}:{self.offset}"


def make_congruence_oracle(residue_chain: Iterable[int]) -> CongruenceOracle:
    return CongruenceOracle(residue_chain)


def parse_oracle(text: str) -> LargeSetOracle:
    """``congruence``, ``congruence:R`` (constant residue), ``congruence:r1,r2,...``, ``density[:size[:offset]]``."""
    name, _, arg = text.partition(":")
    if name == "congruence":
        if not arg:
            return CongruenceOracle.constant(0)
        values = [int(x) for x in arg.split(",")]
        if len(values) == 1:
            return CongruenceOracle.constant(values[0])
        return CongruenceOracle(values)
    if name == "density":
        values = [int(x) for x in arg.split(":") if x]
        return DensityOracle(*values)
    raise ValueError(f"unknown oracle {text!r}")


# ---------------------------------------------------------------------------
# coherence audit


def check_coherence(oracle: LargeSetOracle) -> list[str]:
    """Audit the transcript; returns a list of violations (empty when coherent).

    Entries are grouped by eventual pattern (sets that differ by a finite set
    must get the same answer); the four properties are then checked between
    patterns: complementarity, monotonicity, finite intersections and
    non-principality.
    """
    problems: list[str] = []
    groups: dict[object, bool] = {}
    names: dict[object, str] = {}
    for e in oracle.transcript:
        t = e.key.tail()
        if t in groups and groups[t] != e.large:
            problems.append(f"finite-difference: {e.descriptor} answered differently from {names[t]}")
        groups.setdefault(t, e.large)
        names.setdefault(t, e.descriptor)

    keys = list(groups)
    for k in keys:
        if k.is_finite() and groups[k]:
            problems.append(f"non-principality: finite set {names[k]} answered large")
        if k.is_cofinite() and not groups[k]:
            problems.append(f"non-principality: cofinite set {names[k]} answered small")
        comp = (~k).tail()
        if comp in groups and groups[comp] == groups[k]:
            problems.append(f"complementarity: {names[k]} and {names[comp]} both {'large' if groups[k] else 'small'}")

    large = [k for k in keys if groups[k]]
    small = [k for k in keys if not groups[k]]
    for s in large:
        for t in small:
            if s <= t:
                problems.append(f"monotonicity: {names[s]} large but superset {names[t]} small")
    for a in range(len(large)):
        for b in range(a + 1, len(large)):
            meet = (large[a] & large[b]).tail()
            if meet.is_finite() or groups.get(meet) is False:
                problems.append(f"intersection: {names[large[a]]} & {names[large[b]]} not large")
    return problems
