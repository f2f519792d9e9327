"""Depth-bounded runs of countable path constructions.

Every "infinite set" hypothesis is checked finitely: at least ``witness``
elements below ``horizon``.  A check that runs out of horizon is reported as
unverified, never passed silently.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, count
from typing import Iterable, Iterator, Optional

from .graph import HTypeGraph, OmegaPathStream, PathSeq
from .oracle import (
    Complement,
    CrossNbhd,
    Descriptor,
    Intersection,
    LabelClass,
    LargeSetOracle,
    Nbhd,
    OracleIncoherence,
    Union,
    check_coherence,
    everything,
)
from .verify import PrefixCertificate

DEFAULT_WITNESS = 8
DEFAULT_SLACK = 2


class ConstructionError(RuntimeError):
    pass


class PreconditionError(ConstructionError):
    pass


class LinkageError(ConstructionError):
    def __init__(self, pair: tuple[int, int], message: str) -> None:
        super().__init__(message)
        self.pair = pair


class StitchError(ConstructionError):
    def __init__(self, junction: tuple[int, int], message: str) -> None:
        super().__init__(message)
        self.junction = junction


def _audit(oracle: LargeSetOracle) -> None:
    problems = check_coherence(oracle)
    if problems:
        raise OracleIncoherence("; ".join(problems[:5]))


def _count_upto(desc: Descriptor, horizon: int, want: int) -> int:
    """Members of desc below horizon, stopping once ``want`` are found."""
    found = 0
    for x in range(horizon):
        if desc.contains(x):
            found += 1
            if found >= want:
                break
    return found


# ---------------------------------------------------------------------------
# the label partition


class Labeller:
    """d(v) = the unique colour i with N(v, i) large, computed on demand."""

    def __init__(self, graph, oracle: LargeSetOracle) -> None:
        self.graph = graph
        self.oracle = oracle
        self._cache: dict[int, int] = {}

    def __call__(self, v: int) -> int:
        if v not in self._cache:
            large = [i for i in range(self.graph.r) if self.oracle.decide(Nbhd(self.graph, v, i))]
            if len(large) != 1:
                raise OracleIncoherence(
                    f"vertex {v}: colour classes {large} answered large, expected exactly one"
                )
            self._cache[v] = large[0]
        return self._cache[v]

    def label_class(self, i: int) -> LabelClass:
        period, threshold = self.graph.periodicity or (None, 0)
        return LabelClass(self, i, period, threshold, "V")

    def distinguished(self) -> int:
        large = [i for i in range(self.graph.r) if self.oracle.decide(self.label_class(i))]
        if len(large) != 1:
            raise OracleIncoherence(f"label classes {large} answered large, expected exactly one")
        return large[0]


@dataclass
class UftrickResult:
    labels: list[int]
    distinguished: int
    checks: list[dict]
    unverified: list[str]
    params: dict

    @property
    def verified(self) -> bool:
        return not self.unverified

    def to_json(self) -> dict:
        return {
            "labels": self.labels,
            "distinguished_colour": self.distinguished,
            "checks": self.checks,
            "unverified": self.unverified,
            "params": self.params,
        }


def uftrick_partition(
    graph,
    oracle: LargeSetOracle,
    depth: int,
    A: Optional[Descriptor] = None,
    horizon: Optional[int] = None,
    witness: int = DEFAULT_WITNESS,
    samples: int = 32,
    max_f: int = 4,
    seed: int = 0,
) -> UftrickResult:
    """Label every v < depth by the colour whose neighbourhood is large and pick the large label class.

    Sampled check: for finite F inside A and one label class V_i (|F| <=
    max_f), N[F, i] meets the distinguished class in at least ``witness``
    vertices below the horizon, and the oracle calls that intersection large.
    """
    A = A if A is not None else everything()
    horizon = horizon if horizon is not None else 10 * depth
    rng = random.Random(seed)
    lab = Labeller(graph, oracle)
    labels = [lab(v) for v in range(depth)]
    ic = lab.distinguished()
    vic = lab.label_class(ic)

    checks: list[dict] = []
    unverified: list[str] = []
    in_a = [v for v in range(depth) if A.contains(v)]

    # N[F] infinite for finite F inside A
    for _ in range(min(samples, max(1, len(in_a)))):
        if not in_a:
            break
        F = sorted(rng.sample(in_a, min(len(in_a), rng.randint(1, max_f))))
        common = Intersection(tuple(Complement(_non_edge_set(graph, v)) for v in F))
        got = _count_upto(common, horizon, witness + len(F))
        if got < witness:
            unverified.append(f"N[{F}] has only {got} vertices below {horizon}")

    by_class: dict[int, list[int]] = {}
    for v in in_a:
        by_class.setdefault(labels[v], []).append(v)
    classes = sorted(by_class)
    for s in range(samples if classes else 0):
        i = classes[s % len(classes)]
        pool = by_class[i]
        F = sorted(rng.sample(pool, min(len(pool), rng.randint(1, max_f))))
        desc = Intersection(tuple(Nbhd(graph, v, i) for v in F) + (vic,))
        large = oracle.decide(desc)
        got = _count_upto(desc, horizon, witness)
        ok = large and got >= witness
        checks.append({"F": F, "colour": i, "large": large, "count": got, "ok": ok})
        if not large:
            raise OracleIncoherence(f"{desc} answered small although every part is large")
        if got < witness:
            unverified.append(f"N[{F},{i}] & V_{ic}: only {got} of {witness} witnesses below {horizon}")
    _audit(oracle)
    params = {
        "construction": "uftrick",
        "colouring": getattr(graph, "name", "?"),
        "oracle": oracle.identity(),
        "depth": depth,
        "horizon": horizon,
        "witness": witness,
        "seed": seed,
    }
    return UftrickResult(labels, ic, checks, unverified, params)


@dataclass(frozen=True, eq=False)
class _NonEdges(Descriptor):
    graph: object
    v: int

    def contains(self, x: int) -> bool:
        return not self.graph.is_edge(self.v, x)

    def __str__(self) -> str:
        return f"non-N({self.v})"


def _non_edge_set(graph, v: int) -> Descriptor:
    return _NonEdges(graph, v)


# ---------------------------------------------------------------------------
# Rado's cover


def rado_cover(
    graph,
    oracle: LargeSetOracle,
    steps: int,
    horizon: Optional[int] = None,
) -> PrefixCertificate:
    """Cover the naturals by at most r disjoint monochromatic streams of distinct colours.

    Step: take the least uncovered v and its label i; start stream i at v,
    append v directly when the end of stream i is joined to it in colour i,
    or else append y, v where y is the least unused vertex of the
    distinguished class joined in colour i to both the end of stream i and v.
    Every stream ends at a vertex of its own label, which is what keeps the
    next connector available.
    """
    horizon = horizon if horizon is not None else max(16, 10 * steps)
    lab = Labeller(graph, oracle)
    ic = lab.distinguished()
    streams: dict[int, list[int]] = {}
    used: set[int] = set()
    bound = 0
    unverified: list[int] = []
    for step in range(steps):
        while bound in used:
            bound += 1
        v = bound
        if v >= horizon:
            unverified.append(step)
            break
        i = lab(v)
        path = streams.get(i)
        if path is None:
            streams[i] = [v]
            used.add(v)
            continue
        last = path[-1]
        if graph.colour(last, v) == i:
            path.append(v)
            used.add(v)
            continue
        for y in range(v + 1, horizon):
            if y in used or graph.colour(last, y) != i or graph.colour(y, v) != i:
                continue
            if lab(y) == ic:
                break
        else:
            unverified.append(step)
            break
        path += [y, v]
        used.update((y, v))
    while bound in used:
        bound += 1

    colours = sorted(streams)
    witnesses = [_extension(graph, streams[c][-1], c, used, bound, horizon) for c in colours]
    _audit(oracle)
    params = {
        "construction": "rado",
        "colouring": getattr(graph, "name", "?"),
        "oracle": oracle.identity(),
        "steps": steps,
        "horizon": horizon,
        "distinguished_colour": ic,
        "unverified_steps": unverified,
    }
    return PrefixCertificate(
        step=steps,
        paths=[PathSeq(streams[c], c) for c in colours],
        coverage_bound=bound,
        witnesses=witnesses,
        params=params,
        mode="distinct",
    )


def _extension(graph, last: int, colour: int, used: set[int], lo: int, horizon: int) -> Optional[int]:
    for w in range(lo, horizon):
        if w not in used and graph.colour(last, w) == colour:
            return w
    return None


# ---------------------------------------------------------------------------
# zig-zag through a half graph


def _zigzag(H: HTypeGraph) -> Iterator[int]:
    used: set[int] = set()
    low = 0  # every a-index below this is used

    def first_free_a(limit: int, avoid: int) -> Optional[int]:
        nonlocal low
        while H.a(low) in used:
            low += 1
        j = low
        while j <= limit:
            v = H.a(j)
            if v not in used and v != avoid:
                return j
            j += 1
        return None

    j = first_free_a(0, -1)
    used.add(H.a(j))
    yield H.a(j)
    last = j
    while True:
        k = last
        while True:
            bk = H.b(k)
            if bk not in used:
                j = first_free_a(k, bk)
                if j is not None:
                    break
            k += 1
        used.add(bk)
        yield bk
        used.add(H.a(j))
        yield H.a(j)
        last = j


def zigzag_htype(H: HTypeGraph) -> OmegaPathStream:
    """Alternating a/b stream covering the main class of an H-type graph.

    After a_l the next b is the least unused b_k with k >= l for which some
    unused a-index j <= k (with a_j != b_k) remains; the least such j follows.
    """
    return OmegaPathStream(_zigzag(H), 0, f"zigzag:{H.kind}")


def zigzag_certificate(H: HTypeGraph, steps: int, horizon: Optional[int] = None) -> PrefixCertificate:
    stream = zigzag_htype(H)
    seq = stream.prefix(steps + 1)
    prefix, nxt = list(seq.vertices[:steps]), seq.vertices[steps]
    on = set(prefix)
    main = H.main_class()
    bound = next(v for v in count() if v in main and v not in on)
    horizon = horizon if horizon is not None else max(prefix + [nxt]) + 1
    return PrefixCertificate(
        step=steps,
        paths=[PathSeq(prefix, 0)],
        coverage_bound=bound,
        witnesses=[nxt],
        params={"construction": "zigzag", "htype": H.kind, "steps": steps, "horizon": horizon},
        mode="any",
        domain=main,
    )


# ---------------------------------------------------------------------------
# configurations and the ultrafilter split


@dataclass
class Configuration:
    a_sets: list[list[int]]  # a-indices
    y: list[int]  # b-indices
    a_vertices: list[list[int]]
    y_vertices: list[int]

    def to_json(self) -> dict:
        return {
            "a_indices": self.a_sets,
            "y_indices": self.y,
            "a_vertices": self.a_vertices,
            "y_vertices": self.y_vertices,
        }


def _hits(H: HTypeGraph, xs: Iterable[int], zeta: int, colours: frozenset[int]) -> bool:
    return any(H.cross_colour(x, zeta) in colours for x in xs)


def check_configuration(H: HTypeGraph, conf: Configuration, I: Iterable[int]) -> list[str]:
    """Pointwise check of the configuration property; empty list when valid."""
    I = frozenset(I)
    problems = []
    flat = [H.a(x) for a in conf.a_sets for x in a]
    if len(set(flat)) != len(flat):
        problems.append("a-sets not pairwise disjoint")
    ys = [H.b(z) for z in conf.y]
    if len(set(ys)) != len(ys):
        problems.append("y vertices not distinct")
    if set(flat) & set(ys):
        problems.append("a-sets meet the y vertices")
    for zi, zeta in enumerate(conf.y):
        for xi in range(zi + 1):
            if not _hits(H, conf.a_sets[xi], zeta, I):
                problems.append(f"y_{zi} = b_{zeta} not joined in colours {sorted(I)} to a-set {xi}")
    return problems


def find_configuration(
    H: HTypeGraph,
    I: Iterable[int],
    k: int,
    horizon: int,
    slack: int = DEFAULT_SLACK,
    max_size: int = 3,
    pool: int = 8,
) -> Optional[Configuration]:
    """Greedy finite configuration of length k, or None when no a-set qualifies within the horizon.

    An a-set qualifies when, among b_zeta with max(a) <= zeta < horizon, at
    most ``slack`` miss every I-coloured neighbourhood of the set.
    """
    I = frozenset(I)
    used: set[int] = set()
    a_sets: list[list[int]] = []
    ys: list[int] = []
    for _ in range(k):
        cands = [x for x in range(horizon) if H.a(x) not in used][:pool]
        chosen = None
        for size in range(1, max_size + 1):
            for combo in combinations(cands, size):
                lo = max(combo)
                misses = sum(1 for z in range(lo, horizon) if not _hits(H, combo, z, I))
                if misses <= slack:
                    chosen = list(combo)
                    break
            if chosen:
                break
        if chosen is None:
            return None
        a_sets.append(chosen)
        used.update(H.a(x) for x in chosen)
        for z in range(horizon):
            if H.b(z) in used:
                continue
            if all(_hits(H, a, z, I) for a in a_sets):
                break
        else:
            return None
        ys.append(z)
        used.add(H.b(z))
    conf = Configuration(a_sets, ys, [[H.a(x) for x in a] for a in a_sets], [H.b(z) for z in ys])
    problems = check_configuration(H, conf, I)
    if problems:
        raise ConstructionError("; ".join(problems))
    return conf


@dataclass
class SplitResult:
    parts: dict[int, list[int]]  # colour j -> a-indices
    checks: list[dict]
    unverified: list[str]
    params: dict

    def to_json(self) -> dict:
        return {
            "parts": {str(j): xs for j, xs in sorted(self.parts.items())},
            "checks": self.checks,
            "unverified": self.unverified,
            "params": self.params,
        }


def ultrafilter_split(
    H: HTypeGraph,
    I: Iterable[int],
    oracle: LargeSetOracle,
    depth: int,
    X: Optional[Descriptor] = None,
    horizon: Optional[int] = None,
    witness: int = DEFAULT_WITNESS,
    samples: int = 16,
    seed: int = 0,
) -> SplitResult:
    """Split X (a-indices below depth) by the colour j outside I whose b-neighbourhood is large."""
    I = frozenset(I)
    X = X if X is not None else everything()
    horizon = horizon if horizon is not None else 10 * depth
    rng = random.Random(seed)
    xs = [x for x in range(depth) if X.contains(x)]
    outside = [j for j in range(H.r) if j not in I]

    trials = [[x] for x in xs[:4]]
    for _ in range(samples):
        if xs:
            trials.append(sorted(rng.sample(xs, min(len(xs), rng.randint(1, 4)))))
    for a in trials:
        avoided = Complement(Union(tuple(CrossNbhd(H, x, i) for x in a for i in sorted(I))))
        if not oracle.decide(avoided):
            raise PreconditionError(
                f"B minus the {sorted(I)}-neighbourhoods of {a} is small; use find_configuration"
            )

    parts: dict[int, list[int]] = {j: [] for j in outside}
    for x in xs:
        large = [j for j in outside if oracle.decide(CrossNbhd(H, x, j))]
        if len(large) != 1:
            raise OracleIncoherence(f"a_{x}: colours {large} answered large, expected exactly one")
        parts[large[0]].append(x)

    checks: list[dict] = []
    unverified: list[str] = []
    for j, members in sorted(parts.items()):
        if not members:
            continue
        for _ in range(min(samples, len(members) ** 2)):
            x, x2 = rng.choice(members), rng.choice(members)
            desc = CrossNbhd(H, x, j) & CrossNbhd(H, x2, j)
            large = oracle.decide(desc)
            got = _count_upto(desc, horizon, witness)
            checks.append({"pair": [x, x2], "colour": j, "large": large, "count": got})
            if not large:
                raise OracleIncoherence(f"{desc} answered small")
            if got < witness:
                unverified.append(f"N({x},{j}) & N({x2},{j}): only {got} below {horizon}")
    _audit(oracle)
    params = {
        "construction": "split",
        "htype": H.kind,
        "colouring": H.name,
        "colours_avoided": sorted(I),
        "oracle": oracle.identity(),
        "depth": depth,
        "horizon": horizon,
        "witness": witness,
        "seed": seed,
    }
    return SplitResult(parts, checks, unverified, params)


# ---------------------------------------------------------------------------
# stitching and covering from a start point


def stitch(graph, segments: Iterable[PathSeq], colour: int) -> PathSeq:
    """Concatenate colour-``colour`` segments into one path; raise at the first bad junction."""
    out: list[int] = []
    seen: set[int] = set()
    for seg in segments:
        verts = list(seg.vertices)
        if not verts:
            continue
        for a, b in zip(verts, verts[1:]):
            if graph.colour(a, b) != colour:
                raise StitchError((a, b), f"segment edge ({a},{b}) is not colour {colour}")
        if out and graph.colour(out[-1], verts[0]) != colour:
            raise StitchError((out[-1], verts[0]), f"no colour-{colour} link at junction ({out[-1]},{verts[0]})")
        for v in verts:
            if v in seen:
                raise StitchError((out[-1] if out else v, v), f"vertex {v} repeated")
            seen.add(v)
        out += verts
    return PathSeq(out, colour)


def colour_path(graph, i: int, src: int, dst: int, blocked: set[int], horizon: int, max_len: int = 6) -> Optional[list[int]]:
    """Shortest colour-i path src..dst through unblocked vertices below the horizon.

    Breadth first; neighbours are scanned in increasing order, so among the
    shortest paths the one found first uses the least connectors.
    """
    if graph.colour(src, dst) == i:
        return [src, dst]
    into = {y for y in range(horizon) if y not in blocked and y != src and graph.colour(y, dst) == i}
    if not into:
        return None
    parent = {src: None}
    frontier = [src]
    for _ in range(max_len - 1):
        nxt = []
        for u in frontier:
            for y in range(horizon):
                if y in parent or y in blocked or y == dst or graph.colour(u, y) != i:
                    continue
                parent[y] = u
                if y in into:
                    path = [dst, y]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                nxt.append(y)
        if not nxt:
            return None
        frontier = nxt
    return None


def cover_from(
    graph,
    A: Descriptor,
    i: int,
    start: int,
    steps: int,
    horizon: Optional[int] = None,
    samples: int = 8,
    forbid: int = 2,
    seed: int = 0,
) -> OmegaPathStream:
    """Colour-i stream starting at ``start`` that absorbs the vertices of A in increasing order.

    The returned stream's ``certificate`` records the state after ``steps``
    absorptions.  Raises :class:`LinkageError` when the sampled linkage
    precondition fails.
    """
    horizon = horizon if horizon is not None else max(16, 10 * steps)
    if not A.contains(start):
        raise PreconditionError(f"start {start} is not in A")
    rng = random.Random(seed)
    members = [v for v in range(horizon) if A.contains(v)]
    pairs = [(start, a) for a in members[: samples + 1] if a != start]
    for _ in range(samples):
        if len(members) >= 2:
            u, v = rng.sample(members[: max(2, horizon // 4)], 2)
            pairs.append((u, v))
    for u, v in pairs:
        pool = [x for x in range(min(horizon, 4 * samples)) if x not in (u, v)]
        F = set(rng.sample(pool, min(forbid, len(pool))))
        if colour_path(graph, i, u, v, F, horizon) is None:
            raise LinkageError((u, v), f"no colour-{i} path from {u} to {v} avoiding {sorted(F)} below {horizon}")

    def run() -> Iterator[list[int]]:
        used, path = {start}, [start]
        while True:
            target = next((a for a in members if a not in used), None)
            if target is None:
                return
            link = colour_path(graph, i, path[-1], target, used - {path[-1]}, horizon)
            if link is None:
                return
            path += link[1:]
            used.update(link[1:])
            yield link[1:]

    def gen() -> Iterator[int]:
        yield start
        for added in run():
            yield from added

    path, stuck = [start], None
    absorptions = run()
    for step in range(steps):
        added = next(absorptions, None)
        if added is None:
            stuck = step
            break
        path += added
    used = set(path)
    bound = next((a for a in members if a not in used), horizon)
    domain = A.periodic()
    cert = PrefixCertificate(
        step=steps,
        paths=[PathSeq(path, i)],
        coverage_bound=bound,
        witnesses=[_extension(graph, path[-1], i, used, 0, horizon)],
        params={
            "construction": "cover",
            "colouring": getattr(graph, "name", "?"),
            "colour": i,
            "start": start,
            "steps": steps,
            "horizon": horizon,
            "unverified_steps": [] if stuck is None else [stuck],
        },
        mode="any",
        domain=domain,
    )
    stream = OmegaPathStream(gen(), i, "cover")
    stream.certificate = cert
    return stream
