"""Builtin colourings, the ``NAME[:k=v,...]`` grammar, and the graph text format."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Union

from .graph import FiniteColouredGraph, GraphError, HTypeGraph, LazyColouredGraph, pairs


class ColouringError(ValueError):
    pass


@dataclass(frozen=True)
class ColouringSpec:
    name: str
    params: dict = field(default_factory=dict)
    n: Optional[int] = None  # None: lazy (all naturals)

    def text(self) -> str:
        if not self.params:
            return self.name
        return self.name + ":" + ",".join(f"{k}={_fmt(v)}" for k, v in self.params.items())


def _fmt(v) -> str:
    if isinstance(v, (list, tuple)):
        return ";".join(map(str, v))
    return str(v)


@dataclass(frozen=True)
class _Builtin:
    params: tuple[str, ...]
    defaults: dict
    make: Callable[..., LazyColouredGraph]
    help: str


def _random_colour(seed: int, r: int) -> Callable[[int, int], int]:
    def colour(u: int, v: int) -> int:
        digest = hashlib.blake2b(f"{seed}:{u}:{v}".encode(), digest_size=8).digest()
        return int.from_bytes(digest, "big") % r

    return colour


def _constant(c: int, r: Optional[int]) -> LazyColouredGraph:
    r = c + 1 if r is None else r
    return LazyColouredGraph(r, lambda u, v: c, periodicity=(1, 0), name=f"constant:c={c},r={r}")


def _parity() -> LazyColouredGraph:
    return LazyColouredGraph(2, lambda u, v: (u + v) % 2, periodicity=(2, 0), name="parity")


def _mod(m: int, r: Optional[int]) -> LazyColouredGraph:
    r = m if r is None else r
    if m < 1:
        raise ColouringError("mod needs m >= 1")
    return LazyColouredGraph(r, lambda u, v: ((u + v) % m) % r, periodicity=(m, 0), name=f"mod:m={m},r={r}")


def _star(center: int, c: int, r: Optional[int]) -> LazyColouredGraph:
    r = max(c, 1) + 1 if r is None else r
    other = 0 if c != 0 else 1
    if other >= r:
        raise ColouringError("star needs r >= 2")

    def colour(u: int, v: int) -> int:
        return c if center in (u, v) else other

    return LazyColouredGraph(r, colour, periodicity=(1, center + 1), name=f"star:center={center},c={c},r={r}")


def _layer(table, r: Optional[int]) -> LazyColouredGraph:
    table = tuple(int(x) for x in table)
    if not table:
        raise ColouringError("layer needs a non-empty table")
    r = max(table) + 1 if r is None else r

    def colour(u: int, v: int) -> int:
        return table[max(u, v) % len(table)]

    return LazyColouredGraph(r, colour, periodicity=(len(table), 0), name=f"layer:table={_fmt(table)},r={r}")


def _random(seed: int, r: int) -> LazyColouredGraph:
    return LazyColouredGraph(r, _random_colour(seed, r), name=f"random:seed={seed},r={r}")


BUILTINS: dict[str, _Builtin] = {
    "constant": _Builtin(("c", "r"), {"c": 0, "r": None}, _constant, "every edge gets colour c"),
    "parity": _Builtin((), {}, _parity, "c(u,v) = (u+v) mod 2"),
    "mod": _Builtin(("m", "r"), {"m": 3, "r": None}, _mod, "c(u,v) = ((u+v) mod m) mod r, r defaults to m"),
    "star": _Builtin(("center", "c", "r"), {"center": 0, "c": 1, "r": None}, _star,
                     "edges at center get colour c, all others colour 0 (1 if c = 0)"),
    "layer": _Builtin(("table", "r"), {"table": (0, 1), "r": None}, _layer,
                      "c(u,v) = table[max(u,v) mod len(table)], table given as t0;t1;..."),
    "random": _Builtin(("seed", "r"), {"seed": 0, "r": 2}, _random,
                       "per-pair hash of (seed,u,v) mod r; not periodic, use the density oracle"),
}


def _convert(key: str, value: str):
    if key == "table":
        return tuple(int(x) for x in value.replace("/", ";").split(";") if x)
    try:
        return int(value)
    except ValueError:
        raise ColouringError(f"parameter {key}={value!r} is not an integer") from None


def parse_spec(text: str, n: Optional[int] = None) -> ColouringSpec:
    """Parse ``NAME[:k=v,...]``; bare values fill parameters positionally."""
    name, _, rest = text.partition(":")
    if name not in BUILTINS:
        raise ColouringError(f"unknown colouring {name!r}; known: {', '.join(sorted(BUILTINS))}")
    spec = BUILTINS[name]
    params: dict = {}
    if rest:
        for pos, item in enumerate(rest.split(",")):
            if "=" in item:
                key, _, value = item.partition("=")
            else:
                if pos >= len(spec.params):
                    raise ColouringError(f"too many parameters for {name}")
                key, value = spec.params[pos], item
            if key not in spec.params:
                raise ColouringError(f"{name} has no parameter {key!r}")
            params[key] = _convert(key, value)
    return ColouringSpec(name, params, n)


def build(spec: Union[ColouringSpec, str], n: Optional[int] = None) -> Union[LazyColouredGraph, FiniteColouredGraph]:
    if isinstance(spec, str):
        spec = parse_spec(spec, n)
    entry = BUILTINS.get(spec.name)
    if entry is None:
        raise ColouringError(f"unknown colouring {spec.name!r}")
    args = {**entry.defaults, **spec.params}
    unknown = set(args) - set(entry.params)
    if unknown:
        raise ColouringError(f"{spec.name} has no parameters {sorted(unknown)}")
    try:
        lazy = entry.make(**args)
    except GraphError as exc:
        raise ColouringError(str(exc)) from exc
    return lazy if spec.n is None else lazy.restrict(spec.n)


def registry_text() -> str:
    lines = []
    for name, entry in BUILTINS.items():
        params = ",".join(f"{p}={_fmt(entry.defaults[p])}" for p in entry.params)
        lines.append(f"{name}{':' + params if params else ''}\t{entry.help}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# H-type colourings (colour of a_xi b_zeta as a function of the two indices)

H_BUILTINS: dict[str, tuple[Callable[..., tuple[Callable[[int, int], int], int, int]], str]] = {
    "constant": (lambda c=0: (lambda xi, zeta: c, c + 1, 1), "every edge colour c"),
    "bmod": (lambda m=2: (lambda xi, zeta: zeta % m, m, m), "c(a_xi,b_zeta) = zeta mod m"),
    "sum": (lambda m=2: (lambda xi, zeta: (xi + zeta) % m, m, m), "c(a_xi,b_zeta) = (xi+zeta) mod m"),
}


def build_htype(kind: str, text: str = "constant") -> HTypeGraph:
    name, _, rest = text.partition(":")
    if name not in H_BUILTINS:
        raise ColouringError(f"unknown H-type colouring {name!r}; known: {', '.join(H_BUILTINS)}")
    args = [int(x.partition("=")[2] or x) for x in rest.split(",") if x]
    fn, r, period = H_BUILTINS[name][0](*args)
    return HTypeGraph(kind, fn, r, period, text)


# ---------------------------------------------------------------------------
# text format


class FormatError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def loads(text: str) -> FiniteColouredGraph:
    lines = text.splitlines()
    entries: dict[tuple[int, int], int] = {}
    gone: set[tuple[int, int]] = set()
    header = None
    for num, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise FormatError(num, "header must be 'n r'")
            n, r = map(int, parts)
            if r < 1:
                raise FormatError(num, "r must be >= 1")
            header = (n, r)
            continue
        n, r = header
        if parts[0] == "!":
            if len(parts) != 4 or parts[1] != "missing" or not all(p.isdigit() for p in parts[2:]):
                raise FormatError(num, "directive must be '! missing u v'")
            u, v = int(parts[2]), int(parts[3])
            c = None
        else:
            if len(parts) != 3 or not all(p.isdigit() for p in parts):
                raise FormatError(num, "expected 'u v c'")
            u, v, c = map(int, parts)
        if not 0 <= u < v < n:
            raise FormatError(num, f"need 0 <= u < v < {n}, got {u} {v}")
        if (u, v) in entries or (u, v) in gone:
            raise FormatError(num, f"duplicate pair {u} {v}")
        if c is None:
            gone.add((u, v))
        else:
            if c >= r:
                raise FormatError(num, f"colour {c} >= r = {r}")
            entries[(u, v)] = c
    if header is None:
        raise FormatError(1, "empty file")
    n, r = header
    absent = [p for p in pairs(n) if p not in entries and p not in gone]
    if absent:
        u, v = absent[0]
        raise FormatError(len(lines), f"pair {u} {v} has no colour and is not flagged '! missing'")
    table = tuple(entries.get(p, -1) for p in pairs(n))
    try:
        return FiniteColouredGraph(n, r, table)
    except GraphError as exc:
        raise FormatError(len(lines), str(exc)) from exc


def dumps(graph: FiniteColouredGraph) -> str:
    out = [f"{graph.n} {graph.r}"]
    for (u, v), c in zip(pairs(graph.n), graph.colours):
        if c >= 0:
            out.append(f"{u} {v} {c}")
    for u, v in graph.missing_pairs():
        out.append(f"! missing {u} {v}")
    return "\n".join(out) + "\n"


def load(path) -> FiniteColouredGraph:
    return loads(Path(path).read_text(encoding="ascii"))


def save(graph: FiniteColouredGraph, path) -> None:
    Path(path).write_text(dumps(graph), encoding="ascii")
