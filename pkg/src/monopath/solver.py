"""Minimum monochromatic path partitions of small finite coloured complete graphs.

The exact solver works on vertex bitmasks.  For each colour c it fills
``ends[c][S]``: the set of vertices v such that some colour-c path covers
exactly S and ends at v.  A set S is then a colour-c path iff ``ends[c][S]``
is non-zero, and the minimum partition is a set-partition DP over subsets.

Modes:
  ``any``       paths may repeat colours; single vertices carry no colour.
  ``distinct``  every path, single vertices included, takes its own colour
                label, so a partition has at most r pieces.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .graph import FiniteColouredGraph, PathSeq
from .verify import MODES, PathPartition

DEFAULT_CAP = 12
INF = 1 << 30


class SolverCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SolveResult:
    optimum: Optional[int]
    witness: Optional[PathPartition]
    nodes: int
    mode: str

    def to_json(self) -> dict:
        return {
            "optimum": self.optimum,
            "witness": self.witness.to_json() if self.witness is not None else None,
            "nodes": self.nodes,
            "mode": self.mode,
        }


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@lru_cache(maxsize=None)
def _lowbit_submasks(n: int) -> tuple[tuple[int, ...], ...]:
    """For every mask, its submasks that contain the lowest set bit."""
    out = [()]
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        subs = []
        sub = rest
        while True:
            subs.append(sub | low)
            if not sub:
                break
            sub = (sub - 1) & rest
        out.append(tuple(subs))
    return tuple(out)


def _adjacency(n: int, r: int, colours) -> list[list[int]]:
    adj = [[0] * n for _ in range(r)]
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            c = colours[k]
            k += 1
            if c >= 0:
                adj[c][u] |= 1 << v
                adj[c][v] |= 1 << u
    return adj


def _path_ends(adj_c: list[int], n: int) -> list[int]:
    size = 1 << n
    full = size - 1
    ends = [0] * size
    for v in range(n):
        ends[1 << v] = 1 << v
    for mask in range(1, size):
        e = ends[mask]
        if not e:
            continue
        free = full ^ mask
        while e:
            low = e & -e
            ext = adj_c[low.bit_length() - 1] & free
            while ext:
                w = ext & -ext
                ends[mask | w] |= w
                ext ^= w
            e ^= low
    return ends


class _Tables:
    """Per-instance DP tables; also the feasibility oracle for witness search."""

    def __init__(self, n: int, r: int, colours) -> None:
        self.n, self.r = n, r
        self.size = 1 << n
        self.full = self.size - 1
        self.adj = _adjacency(n, r, colours)
        self.ends = [_path_ends(a, n) for a in self.adj]
        self.nodes = self.size * r
        self._any: Optional[list[int]] = None
        self._distinct: dict[frozenset[int], list[int]] = {}

    def is_path(self, mask: int, c: int) -> bool:
        return mask & (mask - 1) == 0 or bool(self.ends[c][mask])

    def any_table(self) -> list[int]:
        if self._any is None:
            ok = [False] * self.size
            for mask in range(1, self.size):
                ok[mask] = mask & (mask - 1) == 0 or any(e[mask] for e in self.ends)
            f = [0] * self.size
            subs = _lowbit_submasks(self.n)
            for mask in range(1, self.size):
                best = INF
                for s in subs[mask]:
                    if ok[s]:
                        val = f[mask ^ s]
                        if val < best:
                            best = val
                f[mask] = best + 1
                self.nodes += len(subs[mask])
            self._any = f
        return self._any

    def distinct_table(self, allowed: frozenset[int]) -> list[int]:
        """Minimum pieces covering each mask: at most one multi-vertex path per allowed colour, plus singletons."""
        if allowed not in self._distinct:
            h = [m.bit_count() for m in range(self.size)]
            for c in sorted(allowed):
                ends = self.ends[c]
                new = h[:]
                for mask in range(3, self.size):
                    best = new[mask]
                    sub = mask
                    while sub:
                        if sub & (sub - 1) and ends[sub]:
                            val = h[mask ^ sub] + 1
                            if val < best:
                                best = val
                        sub = (sub - 1) & mask
                    new[mask] = best
                self.nodes += 3 ** self.n
                h = new
            self._distinct[allowed] = h
        return self._distinct[allowed]

    def optimum(self, mode: str) -> Optional[int]:
        if self.n == 0:
            return 0
        if mode == "any":
            return self.any_table()[self.full]
        best = self.distinct_table(frozenset(range(self.r)))[self.full]
        return best if best <= self.r else None

    def lexmin_path(self, mask: int, c: Optional[int]) -> tuple[int, ...]:
        """Lexicographically smallest colour-c vertex sequence covering exactly ``mask``."""
        if mask & (mask - 1) == 0:
            return (mask.bit_length() - 1,)
        ends, adj = self.ends[c], self.adj[c]
        # ends[S] holds v iff some path over S ends at v, i.e. (reversed) starts at v
        cand = ends[mask]
        v = (cand & -cand).bit_length() - 1
        seq = [v]
        rest = mask ^ (1 << v)
        while rest:
            options = adj[v] & rest
            for w in _bits(options):
                if ends[rest] >> w & 1:
                    break
            else:
                raise AssertionError("endpoint table inconsistent")
            seq.append(w)
            rest ^= 1 << w
            v = w
        return tuple(seq)

    def witness(self, k: int, mode: str) -> list[PathSeq]:
        """Lexicographically smallest sorted list of <= k paths covering every vertex."""
        chosen: list[PathSeq] = []
        rest, budget = self.full, k
        colours = frozenset(range(self.r))
        while rest:
            best: Optional[tuple[tuple[int, ...], Optional[int], int]] = None
            sub = rest
            while sub:
                s = sub
                sub = (sub - 1) & rest
                single = s & (s - 1) == 0
                options = [None] if single else [c for c in sorted(colours) if self.ends[c][s]]
                for c in options:
                    left = rest ^ s
                    if mode == "any":
                        need = self.any_table()[left]
                    else:
                        need = self.distinct_table(colours - {c} if c is not None else colours)[left]
                    if need > budget - 1:
                        continue
                    seq = self.lexmin_path(s, c)
                    if best is None or seq < best[0]:
                        best = (seq, c, s)
            if best is None:
                raise AssertionError("no feasible piece; optimum was wrong")
            seq, c, s = best
            chosen.append(PathSeq(seq, c))
            if c is not None and mode == "distinct":
                colours = colours - {c}
            rest ^= s
            budget -= 1
        chosen.sort(key=lambda p: p.vertices)
        if mode == "distinct":
            free = sorted(colours)
            chosen = [p if p.colour is not None else PathSeq(p.vertices, free.pop(0)) for p in chosen]
        return chosen


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _tables(graph: FiniteColouredGraph, cap: int) -> _Tables:
    if graph.n > cap:
        raise SolverCapExceeded(
            f"n={graph.n} exceeds the exact-solver cap {cap}; use heuristic_partition"
        )
    return _Tables(graph.n, graph.r, graph.colours)


def min_partition(graph: FiniteColouredGraph, mode: str = "any", cap: int = DEFAULT_CAP) -> SolveResult:
    """Provably minimal monochromatic path partition.

    Ties are broken towards the lexicographically smallest sorted list of
    vertex sequences.  In distinct mode ``optimum`` is None when no partition
    with pairwise distinct colours exists (possible only with missing edges
    or r >= 3).
    """
    _check_mode(mode)
    t = _tables(graph, cap)
    opt = t.optimum(mode)
    if opt is None:
        return SolveResult(None, None, t.nodes, mode)
    paths = t.witness(opt, mode)
    return SolveResult(opt, PathPartition.of(paths, mode), t.nodes, mode)


def optimum_value(n: int, r: int, colours, mode: str) -> Optional[int]:
    """Optimum only, straight from a colour table (the sweep's hot path)."""
    return _Tables(n, r, colours).optimum(mode)


def exists_within(graph: FiniteColouredGraph, k: int, mode: str = "any", cap: int = DEFAULT_CAP) -> Optional[PathPartition]:
    """A partition into at most k paths, or None if there is none."""
    result = min_partition(graph, mode, cap)
    if result.optimum is None or result.optimum > k:
        return None
    return result.witness


# ---------------------------------------------------------------------------
# heuristic


def _grow(graph: FiniteColouredGraph, c: int, free: set[int], start: int, rotations: int) -> list[int]:
    """Greedy colour-c path from ``start`` inside ``free``, with Posa rotations when stuck."""
    path = [start]
    on = {start}

    def extend_end() -> bool:
        last = path[-1]
        for w in sorted(free - on):
            if graph.colour(last, w) == c:
                path.append(w)
                on.add(w)
                return True
        return False

    budget = rotations
    while True:
        if extend_end():
            continue
        path.reverse()
        if extend_end():
            continue
        path.reverse()
        rotated = False
        last = path[-1]
        for k in range(len(path) - 2):
            if budget <= 0:
                break
            if graph.colour(last, path[k]) == c:
                nxt = path[k + 1]
                if any(graph.colour(nxt, w) == c for w in free - on):
                    path[k + 1:] = reversed(path[k + 1:])
                    budget -= 1
                    rotated = True
                    break
        if not rotated:
            return path


def heuristic_partition(graph: FiniteColouredGraph, rotations: Optional[int] = None) -> PathPartition:
    """Repeatedly extract the longest greedy monochromatic path (any mode, no optimality claim)."""
    free = set(range(graph.n))
    rotations = graph.n * graph.n if rotations is None else rotations
    paths: list[PathSeq] = []
    while free:
        start = min(free)
        best, best_c = [start], None
        for c in range(graph.r):
            p = _grow(graph, c, free, start, rotations)
            if len(p) > len(best):
                best, best_c = p, c
        paths.append(PathSeq(best, best_c if len(best) > 1 else None))
        free -= set(best)
    return PathPartition.of(paths, "any")
