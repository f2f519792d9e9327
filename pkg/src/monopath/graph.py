"""Edge-coloured graphs on the naturals.

Three graph kinds share one small protocol (``r``, ``is_edge``, ``colour``,
``has_vertex``):

* :class:`FiniteColouredGraph`  complete graph on ``0..n-1`` with an optional
  symmetric set of missing pairs;
* :class:`LazyColouredGraph`  complete graph on all naturals given by a pure
  colour oracle and finite per-vertex non-neighbour sets;
* :class:`HTypeGraph`  half graphs: ``a_xi`` joined to ``b_zeta`` iff
  ``xi <= zeta`` (and the two are different vertices).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional

from .periodic import EventuallyPeriodic


class GraphError(ValueError):
    """Bad vertex, colour, or graph data."""


def pair_index(u: int, v: int, n: int) -> int:
    """Position of the unordered pair {u, v} in the row-major upper triangle."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pairs(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def _check_colour(graph, i: int) -> None:
    if not 0 <= i < graph.r:
        raise GraphError(f"colour {i} out of range 0..{graph.r - 1}")


# ---------------------------------------------------------------------------
# finite graphs


@dataclass(frozen=True)
class FiniteColouredGraph:
    """Complete graph on ``range(n)``; ``colours`` is the upper triangle in
    :func:`pair_index` order, with ``-1`` marking a missing pair."""

    n: int
    r: int
    colours: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 0 or self.r < 1:
            raise GraphError("need n >= 0 and r >= 1")
        if len(self.colours) != self.n * (self.n - 1) // 2:
            raise GraphError("colour table has the wrong length")
        for c in self.colours:
            if not -1 <= c < self.r:
                raise GraphError(f"colour {c} out of range 0..{self.r - 1}")
        for v in range(self.n):
            if self.n and len(self.missing(v)) >= self.n:
                raise GraphError(f"vertex {v} misses too many neighbours")

    @classmethod
    def from_function(
        cls,
        n: int,
        r: int,
        colour: Callable[[int, int], int],
        missing: Iterable[tuple[int, int]] = (),
    ) -> "FiniteColouredGraph":
        gone = {(min(u, v), max(u, v)) for u, v in missing}
        table = [(-1 if (u, v) in gone else colour(u, v)) for u, v in pairs(n)]
        return cls(n, r, tuple(table))

    @classmethod
    def constant(cls, n: int, c: int = 0, r: int | None = None) -> "FiniteColouredGraph":
        return cls(n, r if r is not None else c + 1, (c,) * (n * (n - 1) // 2))

    def has_vertex(self, v: int) -> bool:
        return 0 <= v < self.n

    def _index(self, u: int, v: int) -> int:
        if not (self.has_vertex(u) and self.has_vertex(v)):
            raise GraphError(f"vertex out of range 0..{self.n - 1}")
        return pair_index(u, v, self.n)

    def is_edge(self, u: int, v: int) -> bool:
        if u == v or not (self.has_vertex(u) and self.has_vertex(v)):
            return False
        return self.colours[pair_index(u, v, self.n)] >= 0

    def colour(self, u: int, v: int) -> Optional[int]:
        if u == v:
            return None
        c = self.colours[self._index(u, v)]
        return None if c < 0 else c

    def missing(self, v: int) -> frozenset[int]:
        return frozenset(
            w for w in range(self.n) if w != v and self.colours[pair_index(v, w, self.n)] < 0
        )

    def missing_pairs(self) -> list[tuple[int, int]]:
        return [p for p, c in zip(pairs(self.n), self.colours) if c < 0]

    def vertices(self) -> range:
        return range(self.n)


# ---------------------------------------------------------------------------
# lazy graphs on all naturals


def _no_missing(v: int) -> frozenset[int]:
    return frozenset()


@dataclass(frozen=True, eq=False)
class LazyColouredGraph:
    """Complete graph on the naturals, coloured by ``colour_fn(u, v)`` (u < v).

    ``periodicity = (p, t)`` is an optional promise used to decide
    neighbourhood sets exactly: for every u, ``colour_fn(u, v) ==
    colour_fn(u, v + p)`` whenever ``v >= max(u + 1, t)``, and the eventual
    pattern of N(u, i) agrees for u and u + p once ``u >= t``.
    ``missing_fn`` must be symmetric and return finite sets.
    """

    r: int
    colour_fn: Callable[[int, int], int]
    missing_fn: Callable[[int], frozenset[int]] = _no_missing
    periodicity: Optional[tuple[int, int]] = None
    name: str = "lazy"

    def __post_init__(self) -> None:
        if self.r < 1:
            raise GraphError("need r >= 1")

    def has_vertex(self, v: int) -> bool:
        return v >= 0

    def is_edge(self, u: int, v: int) -> bool:
        if u == v or u < 0 or v < 0:
            return False
        return v not in self.missing_fn(u) and u not in self.missing_fn(v)

    def colour(self, u: int, v: int) -> Optional[int]:
        if not self.is_edge(u, v):
            return None
        if u > v:
            u, v = v, u
        c = self.colour_fn(u, v)
        if not 0 <= c < self.r:
            raise GraphError(f"colour_fn returned {c} for ({u}, {v})")
        return c

    def restrict(self, n: int) -> FiniteColouredGraph:
        missing = [(u, v) for u, v in pairs(n) if not self.is_edge(u, v)]
        return FiniteColouredGraph.from_function(n, self.r, self.colour_fn, missing)

    def neighbourhood_pattern(self, v: int, i: int) -> Optional[EventuallyPeriodic]:
        """N(v, i) as an eventually periodic set, or None without a periodicity promise."""
        _check_colour(self, i)
        if self.periodicity is None:
            return None
        return _lazy_pattern(self, v, i)

    def neighbourhood_tail(self, v: int, i: int) -> Optional[EventuallyPeriodic]:
        """The eventual pattern of N(v, i) with start 0, in O(period) colour calls."""
        _check_colour(self, i)
        if self.periodicity is None:
            return None
        return _lazy_tail(self, v, i)


@lru_cache(maxsize=65536)
def _lazy_pattern(graph: LazyColouredGraph, v: int, i: int) -> EventuallyPeriodic:
    p, t = graph.periodicity
    gone = graph.missing_fn(v)
    start = max(v + 1, t, max(gone, default=-1) + 1)
    head = [w for w in range(start) if graph.colour(v, w) == i]
    residues = [w % p for w in range(start, start + p) if graph.colour(v, w) == i]
    return EventuallyPeriodic.make(start, head, p, residues)


@lru_cache(maxsize=65536)
def _lazy_tail(graph: LazyColouredGraph, v: int, i: int) -> EventuallyPeriodic:
    p, t = graph.periodicity
    start = max(v + 1, t, max(graph.missing_fn(v), default=-1) + 1)
    residues = [w % p for w in range(start, start + p) if graph.colour(v, w) == i]
    return EventuallyPeriodic.make(0, (), p, residues)


# ---------------------------------------------------------------------------
# half graphs


@dataclass(frozen=True, eq=False)
class HTypeGraph:
    """Graph of type H_{omega,omega} with enumerations ``a(xi)`` and ``b(zeta)``.

    ``kind="disjoint"`` uses a_xi = 2 xi, b_zeta = 2 zeta + 1; ``kind="identified"``
    uses a_n = b_n = n, so the main class is every natural and the graph is
    the complete graph.  ``colour_fn(xi, zeta)`` colours the edge a_xi b_zeta;
    ``period`` promises ``colour_fn(xi, zeta) == colour_fn(xi, zeta + period)``
    for zeta >= xi.
    """

    kind: str = "disjoint"
    colour_fn: Callable[[int, int], int] = lambda xi, zeta: 0
    r: int = 1
    period: Optional[int] = 1
    name: str = "constant:0"

    def __post_init__(self) -> None:
        if self.kind not in ("disjoint", "identified"):
            raise GraphError(f"unknown H-type kind {self.kind!r}")

    # enumerations
    def a(self, xi: int) -> int:
        return 2 * xi if self.kind == "disjoint" else xi

    def b(self, zeta: int) -> int:
        return 2 * zeta + 1 if self.kind == "disjoint" else zeta

    def a_index(self, v: int) -> Optional[int]:
        if v < 0:
            return None
        if self.kind == "disjoint":
            return v // 2 if v % 2 == 0 else None
        return v

    def b_index(self, v: int) -> Optional[int]:
        if v < 0:
            return None
        if self.kind == "disjoint":
            return v // 2 if v % 2 == 1 else None
        return v

    def main_class(self) -> EventuallyPeriodic:
        if self.kind == "disjoint":
            return EventuallyPeriodic.congruence(0, 2)
        return EventuallyPeriodic.full()

    def has_vertex(self, v: int) -> bool:
        return self.a_index(v) is not None or self.b_index(v) is not None

    def cross_index(self, u: int, v: int) -> Optional[tuple[int, int]]:
        """The (xi, zeta) pair witnessing the edge {u, v}; smallest xi wins."""
        if u == v:
            return None
        options = []
        for x, y in ((u, v), (v, u)):
            xi, zeta = self.a_index(x), self.b_index(y)
            if xi is not None and zeta is not None and xi <= zeta:
                options.append((xi, zeta))
        return min(options) if options else None

    def is_edge(self, u: int, v: int) -> bool:
        return self.cross_index(u, v) is not None

    def colour(self, u: int, v: int) -> Optional[int]:
        idx = self.cross_index(u, v)
        if idx is None:
            return None
        c = self.colour_fn(*idx)
        if not 0 <= c < self.r:
            raise GraphError(f"colour_fn returned {c} for {idx}")
        return c

    def uncoloured(self) -> "HTypeGraph":
        return HTypeGraph(self.kind, lambda xi, zeta: 0, 1, 1, "uncoloured")

    def cross_colour(self, xi: int, zeta: int) -> Optional[int]:
        """Colour of a_xi b_zeta, None when that pair is not an edge."""
        if zeta < xi or self.a(xi) == self.b(zeta):
            return None
        return self.colour_fn(xi, zeta)

    def cross_pattern(self, xi: int, j: int) -> Optional[EventuallyPeriodic]:
        """{zeta : a_xi b_zeta is an edge of colour j}, as a set of b-indices."""
        if self.period is None:
            return None
        p = self.period
        start = xi + 1
        head = [z for z in range(start) if self.cross_colour(xi, z) == j]
        residues = [z % p for z in range(start, start + p) if self.cross_colour(xi, z) == j]
        return EventuallyPeriodic.make(start, head, p, residues)


# ---------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class PathSeq:
    """Finite injective vertex sequence; ``colour`` is required once it has an edge."""

    vertices: tuple[int, ...]
    colour: Optional[int] = None

    def __init__(self, vertices: Iterable[int], colour: Optional[int] = None) -> None:
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "colour", colour)

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def to_json(self) -> dict:
        return {"colour": self.colour, "vertices": list(self.vertices)}

    @classmethod
    def from_json(cls, data: dict) -> "PathSeq":
        return cls(data["vertices"], data.get("colour"))


class OmegaPathStream:
    """A one-way infinite path produced on demand by a deterministic generator."""

    def __init__(self, generator: Iterator[int], colour: Optional[int], label: str = "") -> None:
        self._gen = generator
        self.colour = colour
        self.label = label
        self.produced: list[int] = []
        self.certificate = None

    def prefix(self, k: int) -> PathSeq:
        while len(self.produced) < k:
            try:
                self.produced.append(next(self._gen))
            except StopIteration:
                break
        return PathSeq(self.produced[:k], self.colour)

    def __getitem__(self, k: int) -> int:
        seq = self.prefix(k + 1)
        if len(seq) <= k:
            raise IndexError(k)
        return seq.vertices[k]


# ---------------------------------------------------------------------------
# neighbourhood queries


def _horizon(graph, horizon: Optional[int]) -> int:
    if isinstance(graph, FiniteColouredGraph):
        return graph.n if horizon is None else min(horizon, graph.n)
    if horizon is None:
        raise GraphError("a horizon is required for infinite graphs")
    return horizon


def neighbours(graph, v: int, i: int, horizon: Optional[int] = None) -> frozenset[int]:
    """{w < horizon : w != v, {v, w} an edge of colour i}."""
    _check_colour(graph, i)
    if not graph.has_vertex(v):
        raise GraphError(f"vertex {v} not in graph")
    h = _horizon(graph, horizon)
    return frozenset(w for w in range(h) if w != v and graph.colour(v, w) == i)


def common_neighbours(graph, F: Iterable[int], i: int, horizon: Optional[int] = None) -> frozenset[int]:
    """Intersection of :func:`neighbours` over F; for empty F every vertex below the horizon."""
    _check_colour(graph, i)
    F = sorted(set(F))
    h = _horizon(graph, horizon)
    if not F:
        return frozenset(w for w in range(h) if graph.has_vertex(w))
    out = neighbours(graph, F[0], i, h)
    for v in F[1:]:
        out &= neighbours(graph, v, i, h)
    return out
