"""Independent checks for paths, path partitions and prefix certificates.

Nothing in here trusts the code that produced the object being checked:
every edge and colour is recomputed from the graph.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Optional

from .graph import FiniteColouredGraph, PathSeq
from .periodic import EventuallyPeriodic

MODES = ("distinct", "any")

OK = "ok"
VIOLATION = "violation"
UNVERIFIABLE = "unverifiable"


@dataclass
class Report:
    status: str = OK
    violations: list[str] = field(default_factory=list)
    index: Optional[int] = None

    @property
    def ok(self) -> bool:
        return self.status == OK

    def fail(self, message: str) -> None:
        self.violations.append(message)
        self.status = VIOLATION

    def unverifiable(self, message: str) -> None:
        self.violations.append(message)
        if self.status == OK:
            self.status = UNVERIFIABLE

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PathPartition:
    paths: tuple[PathSeq, ...]
    mode: str = "any"
    cover: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")

    @classmethod
    def of(cls, paths, mode: str = "any") -> "PathPartition":
        paths = tuple(paths)
        return cls(paths, mode, frozenset(v for p in paths for v in p))

    def __len__(self) -> int:
        return len(self.paths)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "paths": [p.to_json() for p in self.paths],
            "cover": sorted(self.cover),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PathPartition":
        paths = tuple(PathSeq.from_json(p) for p in data["paths"])
        cover = data.get("cover")
        if cover is None:
            cover = [v for p in paths for v in p]
        return cls(paths, data.get("mode", "any"), frozenset(cover))


@dataclass
class PrefixCertificate:
    """State of an omega-construction after ``step`` steps.

    ``witnesses[k]`` is an unused vertex joined to the last vertex of stream k
    in that stream's colour.  ``domain`` restricts the coverage claim (every
    domain vertex below ``coverage_bound`` is in a stream); None means all
    naturals.
    """

    step: int
    paths: list[PathSeq]
    coverage_bound: int
    witnesses: list[Optional[int]]
    params: dict[str, Any]
    mode: str = "distinct"
    domain: Optional[EventuallyPeriodic] = None

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "paths": [p.to_json() for p in self.paths],
            "cover": sorted(v for p in self.paths for v in p),
            "step": self.step,
            "coverage_bound": self.coverage_bound,
            "witnesses": list(self.witnesses),
            "params": self.params,
        }
        if self.domain is not None:
            out["domain"] = self.domain.to_json()
        return out

    @classmethod
    def from_json(cls, data: dict) -> "PrefixCertificate":
        domain = data.get("domain")
        return cls(
            step=data["step"],
            paths=[PathSeq.from_json(p) for p in data["paths"]],
            coverage_bound=data["coverage_bound"],
            witnesses=list(data["witnesses"]),
            params=dict(data.get("params", {})),
            mode=data.get("mode", "distinct"),
            domain=EventuallyPeriodic.from_json(domain) if domain else None,
        )


def dumps(obj: dict) -> str:
    """Byte-stable JSON."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------


def verify_path(graph, path: PathSeq) -> Report:
    """ok iff the vertices are distinct and every consecutive pair is an edge of the path's colour."""
    report = Report()

    def bad(k: int, message: str) -> Report:
        report.fail(f"index {k}: {message}")
        report.index = k
        return report

    seen: set[int] = set()
    for k, v in enumerate(path.vertices):
        if not graph.has_vertex(v):
            return bad(k, f"vertex {v} is not in the graph")
        if v in seen:
            return bad(k, f"vertex {v} repeated")
        seen.add(v)
    if len(path) < 2:
        return report
    if path.colour is None:
        return bad(0, "path with an edge has no colour")
    if not 0 <= path.colour < graph.r:
        return bad(0, f"colour {path.colour} out of range")
    for k in range(len(path) - 1):
        u, v = path.vertices[k], path.vertices[k + 1]
        c = graph.colour(u, v)
        if c != path.colour:
            return bad(k, f"({u},{v}) " + ("not an edge" if c is None else f"edge has colour {c}"))
    return report


def verify_partition(graph, partition: PathPartition) -> Report:
    """Check validity, disjointness, coverage and (distinct mode) colour labels; lists every failure."""
    report = Report()
    for k, p in enumerate(partition.paths):
        sub = verify_path(graph, p)
        for msg in sub.violations:
            report.fail(f"validity: path {k}: {msg}")

    counts = Counter(v for p in partition.paths for v in p)
    for v in sorted(x for x, c in counts.items() if c > 1):
        report.fail(f"disjointness: vertex {v} duplicated")

    union = set(counts)
    cover = set(partition.cover)
    if union - cover:
        report.fail(f"coverage: vertices {sorted(union - cover)} not in the claimed cover")
    if cover - union:
        report.fail(f"coverage: claimed vertices {sorted(cover - union)} not covered")
    if isinstance(graph, FiniteColouredGraph):
        left = set(range(graph.n)) - union
        if left:
            report.fail(f"coverage: graph vertices {sorted(left)} not covered")

    if partition.mode == "distinct":
        labels = [p.colour for p in partition.paths]
        if any(c is None for c in labels):
            report.fail("colour-distinctness: a path has no colour label")
        present = [c for c in labels if c is not None]
        if any(not 0 <= c < graph.r for c in present):
            report.fail("colour-distinctness: label out of range")
        dup = sorted(c for c, k in Counter(present).items() if k > 1)
        if dup:
            report.fail(f"colour-distinctness: colours {dup} used more than once")
    return report


def verify_certificate(graph, cert: PrefixCertificate, domain: Optional[EventuallyPeriodic] = None) -> Report:
    """Recompute every clause of a prefix certificate against the graph's colour oracle.

    Returns status ``unverifiable`` (not ``violation``) when something needed
    lies at or beyond the certificate's horizon.
    """
    report = Report()
    horizon = cert.params.get("horizon")
    if horizon is None:
        report.unverifiable("no horizon recorded")
        return report
    domain = domain if domain is not None else cert.domain

    mentioned = [v for p in cert.paths for v in p] + [w for w in cert.witnesses if w is not None]
    if any(v >= horizon for v in mentioned):
        report.unverifiable(f"vertices beyond horizon {horizon}")
        return report

    for k, p in enumerate(cert.paths):
        sub = verify_path(graph, p)
        for msg in sub.violations:
            report.fail(f"validity: stream {k}: {msg}")

    counts = Counter(v for p in cert.paths for v in p)
    for v in sorted(x for x, c in counts.items() if c > 1):
        report.fail(f"disjointness: vertex {v} in more than one place")

    if cert.coverage_bound > horizon:
        report.unverifiable("coverage bound beyond horizon")
    for v in range(min(cert.coverage_bound, horizon)):
        if domain is not None and v not in domain:
            continue
        if counts[v] == 0:
            report.fail(f"coverage: vertex {v} below bound {cert.coverage_bound} uncovered")
            break

    if len(cert.witnesses) != len(cert.paths):
        report.fail("extendability: one witness per stream required")
    else:
        for k, (p, w) in enumerate(zip(cert.paths, cert.witnesses)):
            if w is None:
                report.unverifiable(f"extendability: stream {k} has no witness within horizon")
                continue
            if counts[w]:
                report.fail(f"extendability: witness {w} of stream {k} already used")
            elif p.vertices:
                last = p.vertices[-1]
                if graph.colour(last, w) != p.colour:
                    report.fail(f"extendability: witness {w} not joined to {last} in colour {p.colour}")

    if cert.mode == "distinct":
        labels = [p.colour for p in cert.paths]
        if len(cert.paths) > graph.r or len(set(labels)) != len(labels) or None in labels:
            report.fail("colour-distinctness: stream colours not pairwise distinct")

    unverified = cert.params.get("unverified_steps") or []
    if unverified:
        report.unverifiable(f"construction left steps {unverified} unverified")
    return report
