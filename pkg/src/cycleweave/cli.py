"""Command-line front end: generate | extract | verify | audit.

Exit codes: 0 ok, 3 certificate or audit failure, 4 pipeline precondition,
5 verification failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import connect, edgelist, gen
from .extract import ExtractionError, PipelineTrace, audit_trace, extract, trace_from_dict
from .graph import Graph, GraphValidationError
from .thresholds import (
    ExtractConfig,
    InvalidThresholds,
    PivotStrategy,
    ThresholdSet,
    encode,
    k_from_beta,
    rational,
    read_config_file,
)

EXIT_OK = 0
EXIT_CERTIFICATE = 3
EXIT_PRECONDITION = 4
EXIT_VERIFY = 5
EXIT_USAGE = 64

log = logging.getLogger("cycleweave")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _read_graph(path: str) -> Graph:
    try:
        return edgelist.read_edge_list(path)
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err}") from None
    except GraphValidationError as err:
        raise UsageError(str(err)) from None


def _parse_pairs(text: str, seed: int):
    if text == "all":
        return "all"
    if text.startswith("sample:"):
        try:
            count = int(text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad --pairs value {text!r}") from None
        if count < 1:
            raise UsageError("--pairs sample:N needs N >= 1")
        return ("sample", count, seed)
    raise UsageError(f"--pairs must be 'all' or 'sample:N', got {text!r}")


# -- generate -----------------------------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    family = args.family
    try:
        if family == "cliques":
            if args.n is None:
                raise UsageError("cliques needs --n")
            parts = args.parts if args.parts is not None else None
            meta_extra: dict[str, Any] = {}
            if parts is None:
                if args.beta is None:
                    raise UsageError("cliques needs --parts or --beta")
                parts = gen.parts_from_beta(args.n, float(args.beta))
                meta_extra = {"beta": args.beta, "parts_rounded_from": args.n ** float(args.beta)}
            g = gen.disjoint_cliques(args.n, parts)
            spec = gen.GenSpec("disjoint_cliques", args.n, rational(parts), 0)
        elif family == "random":
            if args.n is None or args.p is None:
                raise UsageError("random needs --n and --p")
            p = rational(args.p)
            g = gen.uniform_random(args.n, p, args.seed)
            spec, meta_extra = gen.GenSpec("uniform_random", args.n, p, args.seed), {}
        elif family in ("bipartite", "complete-bipartite"):
            if args.a is None or args.b is None:
                raise UsageError(f"{family} needs --a and --b")
            if family == "bipartite":
                if args.p is None:
                    raise UsageError("bipartite needs --p")
                p = rational(args.p)
                g = gen.bipartite_random(args.a, args.b, p, args.seed).graph
                spec = gen.GenSpec("bipartite_random", args.a + args.b, p, args.seed)
            else:
                g = gen.complete_bipartite(args.a, args.b).graph
                spec = gen.GenSpec("complete_bipartite", args.a + args.b, rational(args.a), 0)
            meta_extra = {"side_a": [0, args.a - 1], "side_b": [args.a, args.a + args.b - 1]}
        else:  # pragma: no cover - argparse restricts choices
            raise UsageError(f"unknown family {family}")
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(str(err)) from None

    text = edgelist.format_edge_list(g.vertex_count, list(g.edges()))
    _emit(text, args.output)
    if args.output and args.output != "-":
        edgelist.write_metadata(args.output, spec.to_dict() | meta_extra | {"edges": g.edge_count})
    return EXIT_OK


# -- extract / audit ----------------------------------------------------------


_THRESHOLD_KEYS = ("t_peel", "t_codeg", "t_gamma_deg", "t_bad", "t1", "t2", "t3")


def _settings(args: argparse.Namespace) -> dict[str, str]:
    merged: dict[str, str] = {}
    if args.config:
        try:
            merged.update(read_config_file(args.config))
        except (OSError, ValueError) as err:
            raise UsageError(f"config: {err}") from None
    for key in ("mode", "k", "beta", "pivot", "seed") + _THRESHOLD_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = str(val)
    if "pivot_strategy" in merged and "pivot" not in merged:
        merged["pivot"] = merged["pivot_strategy"]
    if "t_bad_per_vertex" in merged and "t_bad" not in merged:
        merged["t_bad"] = merged["t_bad_per_vertex"]
    if "k_num" in merged and "k" not in merged:
        merged["k"] = f"{merged['k_num']}/{merged.get('k_den', '1')}"
    return merged


def build_config(args: argparse.Namespace, g: Graph) -> ExtractConfig:
    s = _settings(args)
    mode = s.get("mode", "custom")
    seed = int(s.get("seed", "0"))
    try:
        if mode == "paper":
            if "k" in s:
                ts = ThresholdSet.paper(g.vertex_count, rational(s["k"]))
            elif "beta" in s:
                k, rec = k_from_beta(g.vertex_count, s["beta"])
                ts = ThresholdSet.paper(g.vertex_count, k, rec)
            else:
                raise UsageError("paper mode needs --k or --beta")
        elif mode == "custom":
            missing = [k for k in ("t_peel", "t_codeg", "t_gamma_deg", "t_bad") if k not in s]
            if missing:
                raise UsageError(f"custom mode needs {', '.join('--' + m.replace('_', '-') for m in missing)}")
            ts = ThresholdSet.custom(
                s["t_peel"],
                s["t_codeg"],
                s["t_gamma_deg"],
                s["t_bad"],
                t1=s.get("t1"),
                t2=s.get("t2"),
                t3=s.get("t3"),
                n=g.vertex_count,
            )
        else:
            raise UsageError(f"--mode must be paper or custom, got {mode!r}")
        pivot = PivotStrategy.parse(s.get("pivot", "exhaustive"), seed)
    except (ValueError, ZeroDivisionError) as err:
        if isinstance(err, InvalidThresholds):
            raise
        raise UsageError(str(err)) from None
    return ExtractConfig(thresholds=ts, pivot_strategy=pivot, keep_pivot=not args.drop_pivot)


def _certify(trace: PipelineTrace, args: argparse.Namespace, report: dict[str, Any]) -> int:
    ts = trace.thresholds
    gp = trace.g_prime
    audit = audit_trace(trace)
    cert = connect.check_certificate(gp, ts.t1, ts.t2, ts.t3)
    report["audit"] = audit.to_dict()
    report["certificate"] = cert.to_dict()
    report["g_prime"] = {
        "side_a": list(gp.graph.labels[a] for a in gp.side_a),
        "side_b": list(gp.graph.labels[b] for b in gp.side_b),
        "edges": gp.edge_count,
    }
    if cert.holds:
        p3 = connect.verify_path3_bound(gp, ts.t2, ts.t3, n=ts.n if ts.mode == "paper" else None, k=ts.k)
        report["path3"] = p3.to_dict()
    status = EXIT_OK if cert.holds and audit.ok else EXIT_CERTIFICATE
    if getattr(args, "verify", False):
        conn = connect.verify_strong_c8(
            gp.graph, _parse_pairs(args.pairs, args.seed or 0), max_cycle=args.max_cycle, even=not args.any_parity
        )
        report["connectivity"] = conn.to_dict(gp.graph.labels)
        if status == EXIT_OK and not conn.strongly_c8:
            status = EXIT_VERIFY
    return status


def cmd_extract(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    cfg = build_config(args, g)
    report: dict[str, Any] = {"command": "extract", "input": {"vertices": g.vertex_count, "edges": g.edge_count}}
    try:
        t0 = time.perf_counter()
        gp, trace = extract(g, cfg)
    except (ExtractionError, InvalidThresholds) as err:
        log.error("%s: %s", type(err).__name__, err)
        report["config"] = cfg.to_dict()
        report["error"] = {"type": type(err).__name__, "message": str(err)}
        report["exit_status"] = EXIT_PRECONDITION
        _emit(_dump(report), args.report)
        return EXIT_PRECONDITION
    report["config"] = trace.config.to_dict() | {"thresholds": trace.thresholds.to_dict()}
    status = _certify(trace, args, report)
    if args.timings:
        report["timings_ms"] = {k: round(v, 3) for k, v in trace.timings_ms.items()}
        report["timings_ms"]["total"] = round((time.perf_counter() - t0) * 1e3, 3)
    report["exit_status"] = status
    if args.output:
        edgelist.write_edge_list(gp.graph, args.output if args.output != "-" else sys.stdout, original_ids=True)
    if args.trace:
        _emit(_dump(trace.to_dict(timings=args.timings)), args.trace)
    _emit(_dump(report), args.report)
    return status


def cmd_audit(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    try:
        data = json.loads(Path(args.trace).read_text(encoding="utf-8"))
    except (OSError, ValueError) as err:
        raise UsageError(f"cannot read trace {args.trace}: {err}") from None
    if not any(getattr(args, key, None) for key in ("config", "mode", "k", "beta")) and "config" in data:
        args = _args_from_trace(args, data["config"])
    cfg = build_config(args, g)
    report: dict[str, Any] = {"command": "audit", "input": {"vertices": g.vertex_count, "edges": g.edge_count}}
    try:
        trace = trace_from_dict(g, data, cfg)
    except (ExtractionError, InvalidThresholds) as err:
        report["error"] = {"type": type(err).__name__, "message": str(err)}
        report["exit_status"] = EXIT_PRECONDITION
        _emit(_dump(report), args.report)
        return EXIT_PRECONDITION
    except (KeyError, IndexError, GraphValidationError) as err:
        raise UsageError(f"trace does not match input graph: {err}") from None
    report["config"] = cfg.to_dict()
    status = _certify(trace, args, report)
    report["exit_status"] = status
    _emit(_dump(report), args.report)
    return status


def _args_from_trace(args: argparse.Namespace, cfg: dict[str, Any]) -> argparse.Namespace:
    """Fill threshold flags from the configuration recorded in a trace."""
    ts = cfg["thresholds"]
    vals = vars(args).copy()

    def frac(d: dict[str, int]) -> str:
        return f"{d['num']}/{d['den']}"

    vals["mode"] = ts["mode"]
    if ts["mode"] == "paper":
        vals["k"] = frac(ts["k"])
    else:
        for key, src in (("t_peel", "t_peel"), ("t_codeg", "t_codeg"), ("t_gamma_deg", "t_gamma_deg"),
                         ("t_bad", "t_bad_per_vertex"), ("t1", "t1"), ("t2", "t2"), ("t3", "t3")):
            vals[key] = frac(ts[src])
    vals["drop_pivot"] = not cfg.get("keep_pivot", True)
    return argparse.Namespace(**vals)


# -- verify -------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    if args.max_cycle < 4:
        raise UsageError("--max-cycle must be >= 4")
    pairs = _parse_pairs(args.pairs, args.seed or 0)
    rep = connect.verify_strong_c8(
        g, pairs, max_cycle=args.max_cycle, even=not args.any_parity, keep_witnesses=args.witnesses
    )
    status = EXIT_OK if rep.strongly_c8 else EXIT_VERIFY
    report = {
        "command": "verify",
        "input": {"vertices": g.vertex_count, "edges": g.edge_count},
        "pairs": args.pairs,
        "seed": args.seed or 0,
        "even_cycles_only": not args.any_parity,
        "connectivity": rep.to_dict(g.labels),
        "exit_status": status,
    }
    _emit(_dump(report), args.output)
    return status


# -- parser -------------------------------------------------------------------


def _add_threshold_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value file or JSON object with run settings")
    p.add_argument("--mode", choices=["paper", "custom"])
    kg = p.add_mutually_exclusive_group()
    kg.add_argument("--k", help="density parameter as NUM/DEN (paper mode)")
    kg.add_argument("--beta", help="derive k = n^beta, rounded to a multiple of 2^-20")
    p.add_argument("--t-peel", dest="t_peel", metavar="NUM/DEN")
    p.add_argument("--t-codeg", dest="t_codeg", metavar="NUM/DEN")
    p.add_argument("--t-gamma-deg", dest="t_gamma_deg", metavar="NUM/DEN")
    p.add_argument("--t-bad", dest="t_bad", metavar="NUM/DEN")
    p.add_argument("--t1", metavar="NUM/DEN", help="certificate: min A'-degree (default 2 * t-bad)")
    p.add_argument("--t2", metavar="NUM/DEN", help="certificate: bad-partner bound (default t-bad)")
    p.add_argument("--t3", metavar="NUM/DEN", help="certificate: codegree bound (default t-gamma-deg)")
    p.add_argument("--pivot", metavar="exhaustive|sampled:N")
    p.add_argument("--seed", type=int)
    p.add_argument("--drop-pivot", action="store_true", help="exclude the pivot itself from A'")
    p.add_argument("--verify", action="store_true", help="also run the exhaustive cycle verifier on G'")
    p.add_argument("--pairs", default="all", metavar="all|sample:N")
    p.add_argument("--max-cycle", dest="max_cycle", type=int, default=8)
    p.add_argument("--any-parity", action="store_true", help="accept odd cycles in verification")
    p.add_argument("--report", help="report path (default stdout)")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cycleweave", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a generated instance as an edge list")
    p.add_argument("family", choices=["cliques", "random", "bipartite", "complete-bipartite"])
    p.add_argument("--n", type=int)
    p.add_argument("--parts", type=int)
    p.add_argument("--beta")
    p.add_argument("--p", metavar="NUM/DEN")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("extract", help="run the extraction pipeline and certify G'")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", help="write G' edge list (original ids)")
    p.add_argument("--trace", help="write the pipeline trace JSON")
    p.add_argument("--timings", action="store_true", help="include stage timings (breaks byte-identical reruns)")
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("audit", help="re-audit a stored trace against its input graph")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--trace", required=True)
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("verify", help="exhaustively check strong C8-connectivity")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", help="report path (default stdout)")
    p.add_argument("--max-cycle", dest="max_cycle", type=int, default=8)
    p.add_argument("--pairs", default="all", metavar="all|sample:N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--witnesses", action="store_true")
    p.add_argument("--any-parity", action="store_true", help="accept odd cycles")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as err:
        print(f"cycleweave: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidThresholds as err:
        print(f"cycleweave: InvalidThresholds: {err}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
