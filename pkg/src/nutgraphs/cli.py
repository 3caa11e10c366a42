"""Command-line surface: certification, construction and search commands.

Every command prints a line-oriented ``key: value`` report on stdout and
exits nonzero when a certification fails or an input is malformed.
Randomized commands require an explicit ``--seed`` so identical
invocations produce byte-identical output; ``--jobs`` controls the worker
pool for census commands (results are worker-count independent).
"""

from __future__ import annotations

import argparse
import sys

from .graphs import Graph, degree_profile
from .codec import from_graph6, to_graph6, read_graph_file, parse_edge_list
from .kernel import nut_certificate
from .perms import PermGroup, parse_cycles, format_cycles, orbits
from .autgroup import automorphism_group
from .construct import (
    triangle_multiplier,
    build_nut_realization,
    build_regular_nut_realization,
    verify_report,
    report_to_text,
    report_from_text,
    pairing_schedule,
)
from .gadgets import (
    search_root_gadgets,
    search_proto_gadgets,
    save_gadget_records,
    load_gadget_records,
    default_root_gadget,
    packaged_apex_gadgets,
    GadgetSearchError,
)
from .census import (
    census_nuts,
    enumerate_graphs,
    enumerate_regular,
    minimal_order_for_group,
    CeilingExceeded,
)


def _load_graphs(path: str) -> list[Graph]:
    if path.endswith(".edges") or path.endswith(".txt"):
        with open(path) as fh:
            return [parse_edge_list(fh.read())]
    return read_graph_file(path)


def _emit(key: str, value) -> None:
    print(f"{key}: {value}")


def _cmd_verify(args) -> int:
    if args.report:
        with open(args.report) as fh:
            rep = report_from_text(fh.read())
        ok = verify_report(rep)
        _emit("report", args.report)
        _emit("verified", str(ok).lower())
        _emit("summary", "report verdicts reproduced" if ok else "report FAILED re-verification")
        return 0 if ok else 1
    if not args.infile:
        raise ValueError("verify needs --in or --report")
    graphs = _load_graphs(args.infile)
    all_nut = True
    for idx, g in enumerate(graphs):
        cert = nut_certificate(g)
        _emit(f"graph.{idx}", to_graph6(g))
        _emit(f"graph.{idx}.n", g.n)
        _emit(f"graph.{idx}.nullity", cert.nullity)
        _emit(f"graph.{idx}.full", str(cert.is_nut).lower())
        _emit(f"graph.{idx}.nut", str(cert.is_nut).lower())
        if cert.kernel_vector is not None:
            _emit(f"graph.{idx}.kernel", ",".join(map(str, cert.kernel_vector)))
        if cert.failure_reason:
            _emit(f"graph.{idx}.reason", cert.failure_reason)
        all_nut = all_nut and cert.is_nut
    _emit("summary", f"{len(graphs)} graph(s), all nut: {str(all_nut).lower()}")
    return 0 if all_nut else 1


def _cmd_aut(args) -> int:
    graphs = _load_graphs(args.infile)
    for idx, g in enumerate(graphs):
        aut = automorphism_group(g)
        _emit(f"graph.{idx}", to_graph6(g))
        _emit(f"graph.{idx}.aut-order", aut.order())
        gens = ";".join(format_cycles(p) for p in aut.generators) or "()"
        _emit(f"graph.{idx}.aut-gens", gens)
        cells = ["{" + ",".join(map(str, c)) + "}" for c in orbits(aut)]
        _emit(f"graph.{idx}.orbits", " ".join(cells))
    _emit("summary", f"{len(graphs)} graph(s)")
    return 0


def _cmd_multiplier(args) -> int:
    graphs = _load_graphs(args.infile)
    status = 0
    for idx, h in enumerate(graphs):
        m = triangle_multiplier(h)
        cert = nut_certificate(m.graph, kernel_hint=m.kernel_vector())
        aut = automorphism_group(m.graph)
        _emit(f"input.{idx}", to_graph6(h))
        _emit(f"output.{idx}", to_graph6(m.graph))
        _emit(f"output.{idx}.order", m.graph.n)
        _emit(f"output.{idx}.t", m.t)
        _emit(f"output.{idx}.nut", str(cert.is_nut).lower())
        _emit(f"output.{idx}.aut-order", aut.order())
        if not cert.is_nut:
            status = 1
    if args.out:
        with open(args.out, "w") as fh:
            for h in graphs:
                fh.write(to_graph6(triangle_multiplier(h).graph) + "\n")
    _emit("summary", f"{len(graphs)} graph(s) multiplied")
    return status


def _report_out(rep, args) -> int:
    text = report_to_text(rep)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    ok = rep.certificate.is_nut and rep.restriction_equal
    _emit("summary", "certified" if ok else "CERTIFICATION FAILED")
    return 0 if ok else 1


def _cmd_construct(args) -> int:
    h = _load_graphs(args.infile)[0]
    gadget = None
    if args.gadget:
        gadget = load_gadget_records(args.gadget)[0]
    rep = build_nut_realization(h, gadget=gadget, sigma=args.sigma)
    return _report_out(rep, args)


def _cmd_construct_regular(args) -> int:
    h = _load_graphs(args.infile)[0]
    gadgets = None
    if args.gadgets:
        gadgets = load_gadget_records(args.gadgets)
    rep = build_regular_nut_realization(h, args.d, gadgets=gadgets)
    return _report_out(rep, args)


def _cmd_search_gadgets(args) -> int:
    if args.kind == "two-root":
        records = search_root_gadgets(args.max_order)
    else:
        if args.seed is None:
            raise ValueError("--seed is required for apex gadget searches")
        if args.d is None:
            raise ValueError("--d is required for apex gadget searches")
        count = args.count or max(b for _, b in pairing_schedule(args.d))
        records = search_proto_gadgets(args.d, count, args.seed)
    for idx, rec in enumerate(records):
        _emit(f"gadget.{idx}", to_graph6(rec.gadget))
        _emit(f"gadget.{idx}.kind", rec.spec.kind)
        _emit(f"gadget.{idx}.roots", ",".join(map(str, rec.roots)))
        if rec.proto is not None:
            _emit(f"gadget.{idx}.proto", to_graph6(rec.proto))
    if args.out:
        save_gadget_records(records, args.out)
        _emit("library", args.out)
    _emit("summary", f"{len(records)} gadget(s)")
    return 0


def _cmd_census(args) -> int:
    if args.filter == "nut":
        rows = census_nuts(args.max_n, jobs=args.jobs)
        for row in rows:
            _emit(f"nut.{row.n}", row.count)
    elif args.filter in ("all", "connected"):
        connected = args.filter == "connected"
        for n in range(1, args.max_n + 1):
            count = 0
            for g in enumerate_graphs(n, connected_only=connected, jobs=args.jobs):
                if args.witnesses:
                    print(to_graph6(g))
                count += 1
            _emit(f"{args.filter}.{n}", count)
    else:  # regular
        if args.d is None:
            raise SystemExit("--filter regular requires --d")
        for n in range(args.d + 1, args.max_n + 1):
            if n * args.d % 2:
                continue
            count = 0
            for g in enumerate_regular(n, args.d, jobs=args.jobs):
                if args.witnesses:
                    print(to_graph6(g))
                count += 1
            _emit(f"regular{args.d}.{n}", count)
    _emit("summary", f"census to n={args.max_n} filter={args.filter}")
    return 0


def _parse_group(gens_text: str, degree: int) -> PermGroup:
    toks = [tok for tok in gens_text.split(";") if tok.strip()]
    gens = [parse_cycles(tok, degree) for tok in toks]
    return PermGroup(gens, degree=degree)


def _cmd_minimal(args) -> int:
    target = _parse_group(args.gens, args.degree)
    result = minimal_order_for_group(
        target, args.predicate, args.max_n, jobs=args.jobs
    )
    _emit("group-order", result.group_order)
    _emit("predicate", result.predicate)
    _emit("min-order", "open" if result.min_order is None else result.min_order)
    _emit("candidates", result.candidate_count)
    for idx, g in enumerate(result.witnesses):
        _emit(f"witness.{idx}", to_graph6(g))
    _emit(
        "summary",
        "not found within range" if result.min_order is None else "minimum found",
    )
    return 0


def _cmd_group_order(args) -> int:
    group = _parse_group(args.gens, args.degree)
    _emit("order", group.order())
    _emit("base", ",".join(map(str, group.base)))
    _emit("summary", f"group on {args.degree} points")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nutgraphs",
        description="Construct, certify and search for nut graphs with prescribed symmetry.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="nut-certify graphs or re-verify a report")
    p.add_argument("--in", dest="infile", help="graph6/sparse6 file")
    p.add_argument("--report", help="pipeline report file to re-verify")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("aut", help="automorphism group of graphs")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_aut)

    p = sub.add_parser("multiplier", help="fuse pendant triangles onto a regular graph")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", help="write the multiplied graphs as graph6")
    p.set_defaults(func=_cmd_multiplier)

    p = sub.add_parser("construct", help="nut graph realising Aut of a 4-regular input")
    p.add_argument("--in", dest="infile", required=True, help="4-regular graph")
    p.add_argument("--sigma", type=int, default=0, help="pendant-edge subdivision steps")
    p.add_argument("--gadget", help="two-root gadget library (default: packaged)")
    p.add_argument("--out", help="write the report to a file")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser(
        "construct-regular", help="d-regular nut graph realising Aut of the input"
    )
    p.add_argument("--in", dest="infile", required=True, help="(d/2)-regular graph")
    p.add_argument("--d", type=int, required=True, choices=(8, 12, 16, 20, 24))
    p.add_argument("--gadgets", help="apex gadget library (default: packaged)")
    p.add_argument("--out", help="write the report to a file")
    p.set_defaults(func=_cmd_construct_regular)

    p = sub.add_parser("search-gadgets", help="find decoration gadgets")
    p.add_argument("--kind", choices=("two-root", "apex"), required=True)
    p.add_argument("--max-order", type=int, default=8, help="two-root: exhaust to this order")
    p.add_argument("--d", type=int, choices=(8, 12, 16, 20, 24))
    p.add_argument("--count", type=int, help="apex: gadgets wanted (default: schedule size)")
    p.add_argument("--seed", type=int, help="apex: RNG seed (required)")
    p.add_argument("--out", help="append to a gadget library file")
    p.set_defaults(func=_cmd_search_gadgets)

    p = sub.add_parser("census", help="exhaustive per-order counts")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--filter", choices=("nut", "all", "connected", "regular"), default="nut")
    p.add_argument("--d", type=int, help="degree for --filter regular")
    p.add_argument("--witnesses", action="store_true", help="print one graph6 line per class")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("minimal", help="smallest order realising a group")
    p.add_argument("--gens", required=True, help="semicolon-separated cycle strings; empty for trivial")
    p.add_argument("--degree", type=int, required=True, help="points the generators act on")
    p.add_argument("--predicate", default="nut", help="nut | 4-regular | <d>-regular-nut")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_minimal)

    p = sub.add_parser("group-order", help="order of a permutation group")
    p.add_argument("--gens", required=True)
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=_cmd_group_order)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, CeilingExceeded, GadgetSearchError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
