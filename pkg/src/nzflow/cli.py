"""Command-line front end: ``nzflow {info,build,synth,verify,oracle}``.

Reports go to stdout as tab-delimited ``key<TAB>value`` lines. Exit codes:
0 ok, 1 flow rejected by the verifier, 2 parse error, 3 hypotheses fail,
4 disconnected Cayley graph, 5 internal assertion, 6 oracle refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .cayley import build_cayley
from .errors import (
    DisconnectedError,
    FlowError,
    GroupError,
    HypothesisError,
    InternalAssertion,
    OracleRefusal,
    ParseError,
    PreconditionError,
)
from .flows import verify_flow
from .groups import derived_subgroup, sylow_subgroup
from .io import load_document, parse_flow, parse_graph, parse_job, render_figure, rung_edges, to_dot
from .oracle import DEFAULT_RANK_CAP, cycle_rank, z3_oracle, z3_to_integer
from .synth import TraceNode, hypothesis_report, synthesize_on

EXIT_OK, EXIT_REJECTED, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_DISCONNECTED, EXIT_INTERNAL, EXIT_REFUSAL = 0, 1, 2, 3, 4, 5, 6


def _emit(key: str, value: Any) -> None:
    if isinstance(value, bool):
        value = str(value).lower()
    elif isinstance(value, (list, dict)):
        value = json.dumps(value, sort_keys=True, separators=(",", ":"))
    print(f"{key}\t{value}")


def _write_json(path: str, doc: Any) -> None:
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _print_trace(node: TraceNode, depth: int = 0) -> None:
    data = json.dumps(node.data, sort_keys=True, separators=(",", ":"))
    print(f"trace\t{'  ' * depth}{node.step}\t{node.rule}\t{data}")
    for c in node.children:
        _print_trace(c, depth + 1)


def cmd_info(args) -> int:
    doc = load_document(args.input)
    if isinstance(doc, dict) and "connection" in doc:
        job = parse_job(doc)
        G = job.group
    else:
        job = parse_job({"group": doc.get("group", doc) if isinstance(doc, dict) else doc, "connection": []})
        G = job.group
    rep = hypothesis_report(G)
    _emit("group", G.name or "table")
    _emit("order", G.order)
    _emit("abelian", G.is_abelian)
    _emit("derived_order", derived_subgroup(G).order)
    _emit("nilpotent", rep.nilpotent)
    _emit("supersolvable", rep.supersolvable)
    _emit("sylow2_order", sylow_subgroup(G, 2).order if G.order % 2 == 0 else 1)
    _emit("sylow2_cyclic", not rep.noncyclic_sylow2)
    _emit("squarefree_derived", rep.squarefree_derived)
    _emit("applicable", rep.applicable)
    if job.connection.cardinality:
        cay = build_cayley(G, job.connection)
        _emit("valency", job.connection.cardinality)
        _emit("connected", cay.is_connected())
    return EXIT_OK


def cmd_build(args) -> int:
    job = parse_job(load_document(args.input))
    cay = build_cayley(job.group, job.connection)
    _emit("vertices", cay.graph.vertex_count)
    _emit("edges", len(cay.graph.edges))
    _emit("connected", cay.is_connected())
    _emit("cycle_rank", cycle_rank(cay.graph))
    if args.out:
        doc = cay.graph.to_json()
        doc["labels"] = [{"id": e, "from": l[0], "element": l[1], "copy": l[2]} for e, l in sorted(cay.labels.items())]
        _write_json(args.out, doc)
        _emit("graph_file", args.out)
    if args.dot:
        Path(args.dot).write_text(to_dot(cay.graph, None, cay))
        _emit("dot_file", args.dot)
    if args.figure:
        render_figure(cay.graph, None, args.figure, f"Cay({job.group.name}, X)")
        _emit("figure_file", args.figure)
    return EXIT_OK


def cmd_synth(args) -> int:
    job = parse_job(load_document(args.input))
    cay = build_cayley(job.group, job.connection)
    cert = synthesize_on(cay)
    rep = verify_flow(cay.graph, cert.flow, 3)
    _emit("group", job.group.name or "table")
    _emit("order", job.group.order)
    _emit("valency", job.connection.cardinality)
    _emit("top_step", cert.trace.step)
    _emit("steps", cert.trace.steps())
    _emit("verified", rep.ok)
    if args.trace:
        _print_trace(cert.trace)
    if args.out:
        Path(args.out).write_text(cert.dumps() + "\n")
        _emit("certificate_file", args.out)
    rungs = rung_edges(cert)
    if args.dot:
        Path(args.dot).write_text(to_dot(cay.graph, cert.flow, cay, rungs))
        _emit("dot_file", args.dot)
    if args.figure:
        render_figure(cay.graph, cert.flow, args.figure, f"{cert.trace.step} on {job.group.name}", rungs)
        _emit("figure_file", args.figure)
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def cmd_verify(args) -> int:
    doc = load_document(args.input)
    g = parse_graph(doc)
    f = parse_flow(load_document(args.flow) if args.flow else doc)
    try:
        rep = verify_flow(g, f, args.k)
    except FlowError as exc:
        raise ParseError(f"flow does not match graph: {exc}") from None
    _emit("k", args.k)
    _emit("valid", rep.ok)
    for v in rep.violations:
        _emit("violation", v)
    return EXIT_OK if rep.ok else EXIT_REJECTED


def cmd_oracle(args) -> int:
    g = parse_graph(load_document(args.input))
    cap = args.max_rank if args.max_rank is not None else DEFAULT_RANK_CAP
    _emit("cycle_rank", cycle_rank(g))
    z = z3_oracle(g, cap)
    if z is None:
        _emit("result", "no nowhere-zero 3-flow")
        return EXIT_OK
    f = z3_to_integer(g, z)
    rep = verify_flow(g, f, 3)
    _emit("result", "witness")
    _emit("reverified", rep.ok)
    if args.out:
        _write_json(args.out, {"graph": g.to_json(), "flow": f.to_json()})
        _emit("witness_file", args.out)
    if args.dot:
        Path(args.dot).write_text(to_dot(g, f))
        _emit("dot_file", args.dot)
    if args.figure:
        render_figure(g, f, args.figure, "oracle witness")
        _emit("figure_file", args.figure)
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nzflow", description="Nowhere-zero 3-flows on Cayley graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True, dot=True):
        sp.add_argument("--input", required=True, help="input document (JSON), '-' for stdin")
        if out:
            sp.add_argument("--out", help="write the structured result here")
        if dot:
            sp.add_argument("--dot", help="write a Graphviz rendering here")
            sp.add_argument("--figure", help="write a matplotlib figure here (.png, .svg, .pdf)")

    sp = sub.add_parser("info", help="group facts and hypothesis report")
    common(sp, out=False, dot=False)
    sp.set_defaults(func=cmd_info)
    sp = sub.add_parser("build", help="build the Cayley graph")
    common(sp)
    sp.set_defaults(func=cmd_build)
    sp = sub.add_parser("synth", help="construct a certified nowhere-zero 3-flow")
    common(sp)
    sp.add_argument("--trace", action="store_true", help="print the derivation trace")
    sp.set_defaults(func=cmd_synth)
    sp = sub.add_parser("verify", help="check a flow against a graph")
    common(sp, out=False, dot=False)
    sp.add_argument("flow", nargs="?", help="flow document (defaults to the 'flow' of the input)")
    sp.add_argument("--k", type=int, default=3)
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("oracle", help="decide 3-flow existence by enumeration")
    common(sp)
    sp.add_argument("--max-rank", type=int, default=None, dest="max_rank")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, GroupError, OSError) as exc:
        code, msg = EXIT_PARSE, exc
    except DisconnectedError as exc:
        code, msg = EXIT_DISCONNECTED, exc
    except HypothesisError as exc:
        code, msg = EXIT_HYPOTHESIS, exc
    except OracleRefusal as exc:
        code, msg = EXIT_REFUSAL, exc
    except (InternalAssertion, PreconditionError, FlowError) as exc:
        code, msg = EXIT_INTERNAL, exc
    print(f"error\t{type(msg).__name__}: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
