"""Command-line entry point: ``cbnet <command> ...``.

Exit codes: 0 success, 1 input error, 2 model violation or failed internal
check, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats, report
from .accessibility import DetectionConfig, analyze_structure
from .bounds import diameter_bound
from .constructions import OracleCache, construct_mka, construct_mpc, mstar, oracle_min_pclan
from .errors import CbnetError, PreconditionError
from .generator import GeneratorConfig, generate
from .graph_core import Digraph, tarjan_scc
from .reduction import check_removal, greedy_max_removal


def _read(path: str) -> Digraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return formats.read_graph(text)


def _detection(args) -> DetectionConfig:
    return DetectionConfig(min_core_size=args.min_core_size, plateau_tolerance=args.plateau_tol)


def _emit(args, sections) -> None:
    sys.stdout.write(formats.emit_report(sections, args.format))


def _largest_scc(g: Digraph) -> Digraph:
    comps = tarjan_scc(g.bank_subgraph() if g.customers else g)
    if not comps or len(comps[0]) < 2:
        raise PreconditionError("graph has no strongly connected component of order >= 2")
    return g.induced(comps[0])


def cmd_analyze(args) -> int:
    g = _read(args.input)
    _emit(args, report.analyze(g, _detection(args), strict=args.strict))
    return 0


def cmd_accessibility(args) -> int:
    _emit(args, report.accessibility_sections(_read(args.input), _detection(args)))
    return 0


def cmd_scc(args) -> int:
    g = _read(args.input)
    _emit(args, {"graph": report.graph_section(g), "scc": report.scc_section(g)})
    return 0


def cmd_bounds(args) -> int:
    g = _read(args.input)
    scc = _largest_scc(g)
    rep = diameter_bound(scc, p=args.p)
    sections = {"bounds": report.bound_section(rep)}
    if scc.order < g.order:
        sections["input"] = {"note": "bounds computed on the largest SCC", "scc_order": scc.order}
    _emit(args, sections)
    return 0


def cmd_mstar(args) -> int:
    cache = OracleCache(args.cache) if args.cache else None
    res = mstar(args.n, args.p, oracle=args.oracle, cache=cache)
    if cache is not None:
        cache.save()
    _emit(args, {"mstar": report.mstar_section(res)})
    return 0


def cmd_construct(args) -> int:
    if args.family == "mka":
        if args.k is None:
            raise PreconditionError("construct mka needs --k")
        res = construct_mka(args.n, args.k)
    else:
        if args.p is None:
            raise PreconditionError("construct mpc needs --p")
        res = construct_mpc(args.n, args.p)
    if args.edges:
        Path(args.edges).write_text(formats.edge_list_text(res.graph), encoding="utf-8")
    _emit(args, {"construction": report.construction_section(res)})
    return 0


def cmd_oracle(args) -> int:
    cache = OracleCache(args.cache) if args.cache else None
    res = oracle_min_pclan(args.n, args.p, cache=cache)
    if cache is not None:
        cache.save()
    _emit(
        args,
        {
            "oracle": {
                "n": res.n,
                "p": res.p,
                "min_edges": res.min_edges,
                "witness_arcs": [list(a) for a in res.witness_arcs],
            }
        },
    )
    return 0


def cmd_generate(args) -> int:
    cfg = GeneratorConfig(
        seed=args.seed,
        parents=args.parents,
        branches_mean=args.branches_mean,
        core_density=args.core_density,
        sender_banks=args.sender_banks,
        receiver_banks=args.receiver_banks,
        sender_count=args.senders,
        receiver_count=args.receivers,
        attach_exponent=args.attach_exponent,
    )
    text = formats.edge_list_text(generate(cfg).graph)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_reduce(args) -> int:
    g = _read(args.input)
    st = analyze_structure(g, _detection(args), strict=False)
    gscc = st.gscc if st is not None and st.gscc_order >= 2 else _largest_scc(g).vertices
    if args.remove:
        ids = [x.strip() for x in args.remove.split(",") if x.strip()]
        verdict = check_removal(g, gscc, ids)
    else:
        _, verdict = greedy_max_removal(g, gscc)
    _emit(args, {"removal": report.removal_section(verdict)})
    return 0


def cmd_export_dot(args) -> int:
    g = _read(args.input)
    gscc = ()
    if args.highlight:
        st = analyze_structure(g, _detection(args), strict=False)
        if st is not None:
            gscc = st.gscc
    sys.stdout.write(formats.export_dot(g, gscc=gscc))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--min-core-size", type=int, default=None)
    common.add_argument("--plateau-tol", type=float, default=0.01)

    parser = argparse.ArgumentParser(prog="cbnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text, takes_input=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if takes_input:
            p.add_argument("input", help="edge-list or payment-path CSV ('-' for stdin)")
        p.set_defaults(func=fn)
        return p

    p = command("analyze", cmd_analyze, "full analysis report")
    p.add_argument("--strict", action="store_true", help="treat model violations as errors")
    command("accessibility", cmd_accessibility, "accessibility profile and k detection")
    command("scc", cmd_scc, "strongly connected components")
    p = command("bounds", cmd_bounds, "degree-based diameter bound of the largest SCC")
    p.add_argument("--p", type=int, default=None, help="also report circumference bounds")

    p = command("mstar", cmd_mstar, "minimal p-Clan edge count", takes_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--cache", default=None, help="oracle cache file")

    p = command("construct", cmd_construct, "certified sparse constructions", takes_input=False)
    p.add_argument("family", choices=("mka", "mpc"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--edges", default=None, help="write the edge list here")

    p = command("oracle", cmd_oracle, "exhaustive minimal p-Clan search", takes_input=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--cache", default=None)

    d = GeneratorConfig()
    p = command("generate", cmd_generate, "synthetic network edge list", takes_input=False)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--parents", type=int, default=d.parents)
    p.add_argument("--branches-mean", type=float, default=d.branches_mean)
    p.add_argument("--core-density", type=float, default=d.core_density)
    p.add_argument("--sender-banks", type=int, default=d.sender_banks)
    p.add_argument("--receiver-banks", type=int, default=d.receiver_banks)
    p.add_argument("--senders", type=int, default=d.sender_count)
    p.add_argument("--receivers", type=int, default=d.receiver_count)
    p.add_argument("--attach-exponent", type=float, default=d.attach_exponent)
    p.add_argument("--out", default=None)

    p = command("reduce", cmd_reduce, "what-if removal from the GSCC")
    p.add_argument("--remove", default=None, help="comma-separated ids; omit for greedy search")

    p = command("export-dot", cmd_export_dot, "Graphviz DOT output")
    p.add_argument("--highlight", action="store_true", help="colour the GSCC")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CbnetError as exc:
        print(f"cbnet: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, UnicodeDecodeError, ValueError) as exc:
        print(f"cbnet: input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
