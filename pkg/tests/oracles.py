"""Naive reference computations, deliberately unrelated to the library's bitmask DP."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

INF = float("inf")


def colour_of(n, colours, u, v):
    if u > v:
        u, v = v, u
    k = 0
    for a, b in combinations(range(n), 2):
        if (a, b) == (u, v):
            c = colours[k]
            return None if c < 0 else c
        k += 1
    raise KeyError((u, v))


def monochromatic_paths(n, colours):
    """Every (frozenset, colour) covered by some monochromatic path with >= 2 vertices."""
    table = {}
    for a, b in combinations(range(n), 2):
        table[(a, b)] = table[(b, a)] = colour_of(n, colours, a, b)
    found = set()

    def grow(path, c):
        found.add((frozenset(path), c))
        for w in range(n):
            if w not in path and table[(path[-1], w)] == c:
                grow(path + [w], c)

    for a, b in permutations(range(n), 2):
        c = table[(a, b)]
        if c is not None:
            grow([a, b], c)
    return found


def brute_optimum(n, r, colours, mode):
    """Minimum number of pieces; None when distinct mode has no partition."""
    if n == 0:
        return 0
    paths = monochromatic_paths(n, colours)

    @lru_cache(maxsize=None)
    def any_mode(rest):
        if not rest:
            return 0
        m = min(rest)
        best = 1 + any_mode(rest - {m})
        for s, _ in paths:
            if m in s and s <= rest:
                best = min(best, 1 + any_mode(rest - s))
        return best

    @lru_cache(maxsize=None)
    def distinct_mode(rest, free):
        if not rest:
            return 0
        if not free:
            return INF
        m = min(rest)
        best = INF
        for c in free:
            best = min(best, 1 + distinct_mode(rest - {m}, free - {c}))
        for s, c in paths:
            if m in s and s <= rest and c in free:
                best = min(best, 1 + distinct_mode(rest - s, free - {c}))
        return best

    full = frozenset(range(n))
    if mode == "any":
        return any_mode(full)
    val = distinct_mode(full, frozenset(range(r)))
    return None if val == INF else val
