"""Command line entry point.

Exit codes: 0 ok, 1 verification or bound violation, 2 invalid input,
3 unverifiable (horizon exhausted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .colourings import ColouringError, FormatError, build, build_htype, dumps as dump_graph, load, registry_text
from .construct import (
    ConstructionError,
    cover_from,
    find_configuration,
    rado_cover,
    uftrick_partition,
    ultrafilter_split,
    zigzag_certificate,
)
from .oracle import Descriptor, OracleError, OracleIncoherence, UndecidableDescriptor, check_coherence, congruence, everything, parse_oracle
from .solver import SolverCapExceeded, heuristic_partition, min_partition
from .sweep import BudgetExceeded, default_jobs, sweep_colourings
from .verify import MODES, UNVERIFIABLE, PathPartition, PrefixCertificate, Report, dumps, verify_certificate, verify_partition

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_UNVERIFIABLE = 0, 1, 2, 3
CONSTRUCTIONS = ("uftrick", "rado", "zigzag", "config", "split", "cover")
_LOCAL = {"out", "format", "func", "command", "omega_command", "colourings_command", "jobs", "checkpoint"}


class InputError(ValueError):
    pass


def _meta(args: argparse.Namespace, command: str) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in _LOCAL}
    return {"tool": "monopath", "version": __version__, "command": command, "params": params}


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)


def _status_code(report: Report) -> int:
    if report.ok:
        return EXIT_OK
    return EXIT_UNVERIFIABLE if report.status == UNVERIFIABLE else EXIT_VIOLATION


def _report_json(report: Report) -> dict:
    return {"status": report.status, "violations": report.violations, "index": report.index}


def _warn(report: Report) -> None:
    for msg in report.violations:
        print(f"monopath: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# solve / sweep


def cmd_solve(args: argparse.Namespace) -> int:
    graph = load(args.input)
    if args.heuristic:
        part = heuristic_partition(graph)
        body = {"optimum": None, "paths": len(part), "witness": part.to_json(), "mode": "any", "heuristic": True}
    else:
        result = min_partition(graph, args.mode, args.cap)
        part = result.witness
        body = result.to_json()
    report = verify_partition(graph, part) if part is not None else Report()
    body["meta"] = _meta(args, "solve")
    body["verification"] = _report_json(report)
    _emit(args, dumps(body))
    _warn(report)
    return _status_code(report)


def _sweep_witness(summary) -> tuple[Optional[PathPartition], Report]:
    from .graph import FiniteColouredGraph

    if summary.argmax is None:
        return None, Report()
    graph = FiniteColouredGraph(summary.n, summary.r, summary.argmax_colours)
    result = min_partition(graph, summary.mode)
    report = verify_partition(graph, result.witness)
    if len(result.witness) != summary.max_optimum:
        report.fail("argmax witness size differs from the recorded maximum")
    return result.witness, report


def _fmt_paths(part: PathPartition) -> str:
    return " ".join(
        "[" + ",".join(map(str, p.vertices)) + "]" + ("" if p.colour is None else f"@{p.colour}") for p in part.paths
    )


def cmd_sweep(args: argparse.Namespace) -> int:
    summary = sweep_colourings(
        args.n, args.r, args.mode, k=args.k, jobs=args.jobs, canonical=args.canonical,
        budget=args.budget, checkpoint=args.checkpoint,
    )
    witness, report = _sweep_witness(summary)
    data = summary.to_json()
    data["argmax_witness"] = witness.to_json() if witness is not None else None
    meta = _meta(args, "sweep")
    if args.format == "json":
        data["meta"] = meta
        data["verification"] = _report_json(report)
        text = dumps(data)
    else:
        buf = io.StringIO()
        buf.write(f"# tool=monopath version={__version__} command=sweep\n")
        for key in ("n", "r", "mode", "k", "canonical", "budget"):
            buf.write(f"# {key}={meta['params'][key]}\n")
        buf.write(f"# total={summary.total} classes={summary.classes}\n")
        buf.write(f"# violations={summary.violations} first_violation={summary.first_violation}\n")
        if summary.argmax is not None:
            buf.write(f"# argmax={summary.argmax} colours={';'.join(map(str, summary.argmax_colours))}\n")
            buf.write(f"# argmax_witness={_fmt_paths(witness)}\n")
        buf.write(f"# verification={report.status}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "r", "mode", "optimum", "count", "max_optimum"])
        for key, count in sorted(summary.histogram.items()):
            w.writerow([summary.n, summary.r, summary.mode, key, count, summary.max_optimum])
        text = buf.getvalue()
    _emit(args, text)
    _warn(report)
    if not report.ok:
        return _status_code(report)
    if summary.violations:
        print(f"monopath: {summary.violations} colourings exceed k={args.k} (first index {summary.first_violation})", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _certificate_graph(args: argparse.Namespace, cert: PrefixCertificate):
    if args.htype:
        kind, _, colouring = args.htype.partition(":")
        H = build_htype(kind, colouring or "constant")
        return H.uncoloured() if cert.params.get("construction") == "zigzag" else H
    if args.colouring:
        return build(args.colouring)
    name = cert.params.get("colouring")
    if name and name != "?":
        return build(name)
    raise InputError("certificate names no colouring; pass --colouring or --htype")


def cmd_verify(args: argparse.Namespace) -> int:
    if args.partition:
        if not args.graph:
            raise InputError("--partition needs --graph")
        graph = load(args.graph)
        data = _read_json(args.partition)
        if "witness" in data:
            data = data["witness"]
        try:
            part = PathPartition.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed partition: {exc}") from exc
        report = verify_partition(graph, part)
    elif args.certificate:
        data = _read_json(args.certificate)
        try:
            cert = PrefixCertificate.from_json(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed certificate: {exc}") from exc
        report = verify_certificate(_certificate_graph(args, cert), cert)
    else:
        raise InputError("pass --partition or --certificate")
    body = {"meta": _meta(args, "verify"), **_report_json(report)}
    _emit(args, dumps(body))
    _warn(report)
    return _status_code(report)


# ---------------------------------------------------------------------------
# omega


def _subset(text: str) -> Descriptor:
    """``all`` or ``mod:a/m``."""
    if text == "all":
        return everything()
    name, _, rest = text.partition(":")
    if name == "mod" and "/" in rest:
        a, m = rest.split("/")
        return congruence(int(a), int(m))
    raise InputError(f"subset must be 'all' or 'mod:a/m', got {text!r}")


def _colour_set(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x != ""]


def cmd_omega(args: argparse.Namespace) -> int:
    oracle = parse_oracle(args.oracle)
    c = args.construction
    body: dict
    report = Report()
    if c in ("uftrick", "rado", "cover"):
        graph = build(args.colouring)
    if c == "rado":
        cert = rado_cover(graph, oracle, args.steps, args.horizon)
        report = verify_certificate(graph, cert)
        body = cert.to_json()
    elif c == "uftrick":
        res = uftrick_partition(graph, oracle, args.steps, A=_subset(args.subset), horizon=args.horizon,
                                witness=args.witness, seed=args.seed)
        for msg in res.unverified:
            report.unverifiable(msg)
        body = res.to_json()
    elif c == "cover":
        stream = cover_from(graph, _subset(args.subset), args.colour, args.start, args.steps, args.horizon,
                            seed=args.seed)
        cert = stream.certificate
        report = verify_certificate(graph, cert)
        body = cert.to_json()
    elif c == "zigzag":
        H = build_htype(args.kind, args.colouring)
        cert = zigzag_certificate(H, args.steps, args.horizon)
        report = verify_certificate(H.uncoloured(), cert)
        body = cert.to_json()
    elif c == "config":
        H = build_htype(args.kind, args.colouring)
        horizon = args.horizon if args.horizon is not None else max(16, 10 * args.steps)
        conf = find_configuration(H, _colour_set(args.colours), args.steps, horizon)
        body = {"found": conf is not None, "configuration": conf.to_json() if conf else None,
                "horizon": horizon}
    else:
        H = build_htype(args.kind, args.colouring)
        res = ultrafilter_split(H, _colour_set(args.colours), oracle, args.steps, X=_subset(args.subset),
                                horizon=args.horizon, witness=args.witness, seed=args.seed)
        for msg in res.unverified:
            report.unverifiable(msg)
        body = res.to_json()
    problems = check_coherence(oracle)
    for msg in problems:
        report.fail(f"oracle coherence: {msg}")
    body["meta"] = _meta(args, "omega run")
    body["verification"] = _report_json(report)
    _emit(args, dumps(body))
    _warn(report)
    return _status_code(report)


# ---------------------------------------------------------------------------
# gen / colourings


def cmd_gen(args: argparse.Namespace) -> int:
    graph = build(args.colouring, args.n)
    _emit(args, dump_graph(graph))
    return EXIT_OK


def cmd_colourings(args: argparse.Namespace) -> int:
    _emit(args, registry_text())
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="monopath", description="Monochromatic path partitions: solver, sweeps, constructions.")
    p.add_argument("--version", action="version", version=f"monopath {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="exact minimum partition of a graph file")
    s.add_argument("--input", required=True)
    s.add_argument("--mode", choices=MODES, default="any")
    s.add_argument("--cap", type=int, default=12)
    s.add_argument("--heuristic", action="store_true", help="greedy partition, no optimality claim")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("sweep", help="histogram of optima over every r-colouring of K_n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--mode", choices=MODES, default="distinct")
    s.add_argument("--k", type=int, help="count colourings whose optimum exceeds k (exit 1 if any)")
    s.add_argument("--jobs", type=int, default=default_jobs())
    s.add_argument("--canonical", action="store_true", help="solve one colouring per isomorphism class")
    s.add_argument("--budget", type=int, default=2_000_000)
    s.add_argument("--checkpoint", help="JSON state file; finished ranges are skipped on rerun")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("verify", help="check a partition or a prefix certificate")
    s.add_argument("--graph")
    s.add_argument("--partition")
    s.add_argument("--certificate")
    s.add_argument("--colouring", help="lazy colouring for a certificate (default: the one it names)")
    s.add_argument("--htype", help="KIND[:colouring] for half-graph certificates")
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("omega", help="depth-bounded countable constructions")
    osub = s.add_subparsers(dest="omega_command", required=True)
    r = osub.add_parser("run")
    r.add_argument("--construction", choices=CONSTRUCTIONS, required=True)
    r.add_argument("--colouring", default="constant", help="NAME[:k=v,...]; H-type names for zigzag/config/split")
    r.add_argument("--oracle", default="congruence")
    r.add_argument("--steps", type=int, required=True, help="steps, or depth for uftrick/split, or length for config")
    r.add_argument("--horizon", type=int)
    r.add_argument("--witness", type=int, default=8)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--kind", choices=("disjoint", "identified"), default="disjoint")
    r.add_argument("--colours", default="", help="colour set I for config/split, e.g. 0,1")
    r.add_argument("--colour", type=int, default=0, help="stream colour for cover")
    r.add_argument("--start", type=int, default=0)
    r.add_argument("--subset", default="all", help="A or X: 'all' or 'mod:a/m'")
    r.add_argument("--out")
    r.set_defaults(func=cmd_omega)

    s = sub.add_parser("gen", help="write a builtin colouring of K_n in the graph text format")
    s.add_argument("--colouring", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("colourings", help="builtin colouring registry")
    csub = s.add_subparsers(dest="colourings_command", required=True)
    ls = csub.add_parser("list")
    ls.add_argument("--out")
    ls.set_defaults(func=cmd_colourings)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, ColouringError, SolverCapExceeded, BudgetExceeded,
            UndecidableDescriptor, OSError, ValueError) as exc:
        print(f"monopath: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OracleIncoherence, ConstructionError, OracleError) as exc:
        print(f"monopath: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
