"""Exhaustive sweeps over all r-colourings of K_n.

Colouring number ``idx`` is the ``idx``-th tuple of
``itertools.product(range(r), repeat=n*(n-1)//2)``, read in ``pair_index``
order: the last pair varies fastest.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path
from typing import Optional

from .graph import pair_index, pairs
from .solver import optimum_value
from .verify import MODES

DEFAULT_BUDGET = 2_000_000
DEFAULT_CHUNK = 4096
JOBS_ENV = "MONOPATH_JOBS"


class BudgetExceeded(ValueError):
    def __init__(self, required: int, budget: int) -> None:
        super().__init__(f"sweep needs {required} colourings, budget is {budget}; raise --budget")
        self.required = required
        self.budget = budget


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def decode(idx: int, n: int, r: int) -> tuple[int, ...]:
    m = n * (n - 1) // 2
    out = [0] * m
    for k in range(m - 1, -1, -1):
        idx, out[k] = divmod(idx, r)
    return tuple(out)


def encode(colours, r: int) -> int:
    idx = 0
    for c in colours:
        idx = idx * r + c
    return idx


def _perm_maps(n: int) -> list[list[int]]:
    """For each vertex permutation, where each pair slot moves to."""
    maps = []
    for perm in permutations(range(n)):
        maps.append([pair_index(perm[u], perm[v], n) for u, v in pairs(n)])
    return maps


def orbit(colours: tuple[int, ...], r: int, maps: list[list[int]]) -> set[int]:
    out = set()
    for mp in maps:
        img = [0] * len(colours)
        for k, c in enumerate(colours):
            img[mp[k]] = c
        out.add(encode(img, r))
    return out


@dataclass
class _Partial:
    """Mergeable summary of one index range."""

    histogram: dict[str, int] = field(default_factory=dict)
    max_optimum: Optional[int] = None
    argmax: Optional[int] = None
    violations: int = 0
    first_violation: Optional[int] = None
    classes: int = 0

    def add(self, idx: int, opt: Optional[int], weight: int, k: Optional[int]) -> None:
        key = "none" if opt is None else str(opt)
        self.histogram[key] = self.histogram.get(key, 0) + weight
        if opt is not None and (self.max_optimum is None or opt > self.max_optimum):
            self.max_optimum, self.argmax = opt, idx
        if k is not None and (opt is None or opt > k):
            self.violations += weight
            if self.first_violation is None:
                self.first_violation = idx
        self.classes += 1

    def merge(self, o: "_Partial") -> None:
        for key, v in o.histogram.items():
            self.histogram[key] = self.histogram.get(key, 0) + v
        if o.max_optimum is not None and (
            self.max_optimum is None
            or o.max_optimum > self.max_optimum
            or (o.max_optimum == self.max_optimum and o.argmax < self.argmax)
        ):
            self.max_optimum, self.argmax = o.max_optimum, o.argmax
        self.violations += o.violations
        if o.first_violation is not None and (self.first_violation is None or o.first_violation < self.first_violation):
            self.first_violation = o.first_violation
        self.classes += o.classes

    def to_json(self) -> dict:
        return {
            "histogram": self.histogram,
            "max_optimum": self.max_optimum,
            "argmax": self.argmax,
            "violations": self.violations,
            "first_violation": self.first_violation,
            "classes": self.classes,
        }

    @classmethod
    def from_json(cls, d: dict) -> "_Partial":
        return cls(dict(d["histogram"]), d["max_optimum"], d["argmax"], d["violations"], d["first_violation"], d["classes"])


def _run_range(args: tuple) -> tuple[int, int, dict]:
    n, r, mode, k, lo, hi, canonical = args
    part = _Partial()
    maps = _perm_maps(n) if canonical else None
    for idx in range(lo, hi):
        colours = decode(idx, n, r)
        weight = 1
        if maps is not None:
            orb = orbit(colours, r, maps)
            if min(orb) != idx:
                continue
            weight = len(orb)
        part.add(idx, optimum_value(n, r, colours, mode), weight, k)
    return lo, hi, part.to_json()


@dataclass
class SweepSummary:
    n: int
    r: int
    mode: str
    k: Optional[int]
    total: int
    max_optimum: Optional[int]
    argmax: Optional[int]
    histogram: dict[str, int]
    violations: int
    first_violation: Optional[int]
    canonical: bool
    classes: int

    @property
    def argmax_colours(self) -> Optional[tuple[int, ...]]:
        return None if self.argmax is None else decode(self.argmax, self.n, self.r)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "mode": self.mode,
            "k": self.k,
            "total": self.total,
            "max_optimum": self.max_optimum,
            "argmax": self.argmax,
            "argmax_colours": list(self.argmax_colours) if self.argmax is not None else None,
            "histogram": dict(sorted(self.histogram.items())),
            "violations": self.violations,
            "first_violation": self.first_violation,
            "canonical": self.canonical,
            "classes": self.classes,
        }


def _ranges(total: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def sweep_colourings(
    n: int,
    r: int,
    mode: str = "distinct",
    k: Optional[int] = None,
    jobs: Optional[int] = None,
    canonical: bool = False,
    budget: int = DEFAULT_BUDGET,
    checkpoint: Optional[Path] = None,
    chunk: int = DEFAULT_CHUNK,
) -> SweepSummary:
    """Exact histogram of optima over every r-colouring of K_n.

    ``k`` counts colourings whose optimum exceeds k (or that have no
    distinct-mode partition at all).  With ``canonical`` only the least index
    of each vertex-permutation orbit is solved and weighted by the orbit size,
    so the histogram still counts every colouring.  The argmax is the least
    index attaining the maximum.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    total = r ** (n * (n - 1) // 2)
    if total > budget:
        raise BudgetExceeded(total, budget)
    jobs = default_jobs() if jobs is None else max(1, jobs)

    key = {"n": n, "r": r, "mode": mode, "k": k, "canonical": canonical, "chunk": chunk}
    done: dict[str, dict] = {}
    if checkpoint is not None and Path(checkpoint).exists():
        state = json.loads(Path(checkpoint).read_text())
        if state.get("params") == key:
            done = state.get("ranges", {})

    def save() -> None:
        if checkpoint is not None:
            Path(checkpoint).write_text(json.dumps({"params": key, "ranges": done}, sort_keys=True))

    todo = [(n, r, mode, k, lo, hi, canonical) for lo, hi in _ranges(total, chunk) if f"{lo}-{hi}" not in done]
    if jobs == 1 or len(todo) <= 1:
        for args in todo:
            lo, hi, part = _run_range(args)
            done[f"{lo}-{hi}"] = part
            save()
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for lo, hi, part in pool.map(_run_range, todo):
                done[f"{lo}-{hi}"] = part
                save()

    acc = _Partial()
    for name in sorted(done, key=lambda s: int(s.split("-")[0])):
        acc.merge(_Partial.from_json(done[name]))
    return SweepSummary(
        n, r, mode, k, total, acc.max_optimum, acc.argmax, acc.histogram,
        acc.violations, acc.first_violation, canonical, acc.classes,
    )
