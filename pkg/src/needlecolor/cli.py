"""Command-line interface.

Exit status: 0 on success, 2 on invalid input, 3 when an exact search exceeds
its budget.
"""

from __future__ import annotations

import argparse
import io as _io
import json
import math
import os
import sys

from . import bounds, estimator, hyperdim
from ._rng import fresh_seed
from .colorings import COLORING_SYNTAX, StripeColoring, parse_coloring
from .exceptions import InvalidArgumentError, NeedleColorError, ResourceLimitError
from .graphs import GRAPH_NAMES, MAX_NODES, get_graph, solve_mk
from .io import SWEEP_HEADER, dumps, emit_sweep_csv, load_graph

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE = 0, 2, 3

COMMANDS = {
    "estimate": "Monte Carlo needle probability of a periodic coloring (optionally by graph throwing)",
    "exact": "exact needle probability of the stripe 2-coloring by quadrature",
    "mk": "exact minimum monochromatic edge fraction m_k of a graph",
    "bounds": "lower and upper bounds on the best needle probability for k colors",
    "table": "needle probability on the finite table [-R, R]^2",
    "optimize": "sweep and refine the hexagon edge of the hexagonal 3-coloring",
    "hyperdim": "slab colorings, graph throwing and simplex bounds in dimension d",
}

EPILOG = (
    "subcommands:\n"
    + "".join(f"  {name:<10} {text}\n" for name, text in COMMANDS.items())
    + "\ncolorings: " + ", ".join(COLORING_SYNTAX)
    + "\ngraphs:    " + ", ".join(GRAPH_NAMES) + ", or a path to a graph JSON file"
)


def _common(p, n_default=1_000_000):
    p.add_argument("--n", type=int, default=n_default, help="number of samples")
    p.add_argument("--seed", type=int, default=None, help="random seed (echoed in the report)")
    p.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")
    p.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.add_argument("--config", default=None, help="JSON file of option defaults; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="needlecolor",
        description="Monochromatic needle probabilities on colored planes.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("estimate", help=COMMANDS["estimate"])
    p.add_argument("--coloring")
    p.add_argument("--graph", help="throw this graph instead of a single needle")
    _common(p)

    p = sub.add_parser("exact", help=COMMANDS["exact"])
    p.add_argument("--width", type=float, default=math.sqrt(3.0) / 2.0)
    _common(p)

    p = sub.add_parser("mk", help=COMMANDS["mk"])
    p.add_argument("--graph")
    p.add_argument("--k", type=int)
    p.add_argument("--max-nodes", type=int, default=MAX_NODES)
    _common(p)

    p = sub.add_parser("bounds", help=COMMANDS["bounds"])
    p.add_argument("--k", type=int)
    p.add_argument("--R", type=float, default=8.0, help="grid period")
    p.add_argument("--cells", type=int, default=16, help="grid subdivisions per side")
    _common(p)

    p = sub.add_parser("table", help=COMMANDS["table"])
    p.add_argument("--coloring")
    p.add_argument("--R", type=float, default=10.0, help="table half-width")
    _common(p)

    p = sub.add_parser("optimize", help=COMMANDS["optimize"])
    p.add_argument("--s-min", type=float, default=0.3)
    p.add_argument("--s-max", type=float, default=1.2)
    p.add_argument("--budget", type=int, default=25)
    p.add_argument("--refine", type=int, default=12, help="golden-section steps")
    _common(p)

    p = sub.add_parser("hyperdim", help=COMMANDS["hyperdim"])
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--width", type=float, default=math.sqrt(3.0) / 2.0)
    p.add_argument("--graph", help="'simplex' or a graph JSON file with d-length coordinates")
    p.add_argument("--simplex-bound", type=int, default=None, metavar="K")
    _common(p)
    return parser


def _subparsers(parser):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices
    return {}


def parse_args(argv):
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            with open(known.config) as fh:
                cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise InvalidArgumentError(f"cannot read config {known.config}: {exc}") from exc
        cfg = {key.replace("-", "_"): value for key, value in cfg.items()}
        for sp in _subparsers(parser).values():
            sp.set_defaults(**cfg)
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        raise InvalidArgumentError("a command is required")
    return args


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise InvalidArgumentError(f"{args.command}: missing required option(s) {', '.join(missing)}")


def _graph(spec: str):
    if os.path.exists(spec):
        return load_graph(spec)
    return get_graph(spec)


def _estimate_text(e) -> str:
    return f"p_hat={e.p_hat:.10g} stderr={e.stderr:.3g} n={e.n} seed={e.seed} process={e.process}\n"


def _estimate_csv(e) -> str:
    return "p_hat,stderr,n,seed,process\n" + f"{e.p_hat:.17g},{e.stderr:.17g},{e.n},{e.seed},{e.process}\n"


def _render(report, fmt, text=None, csv=None) -> str:
    if fmt == "text" and text is not None:
        return text
    if fmt == "csv" and csv is not None:
        return csv
    if fmt in ("text", "csv"):
        raise InvalidArgumentError(f"format {fmt!r} is not available for this command")
    return dumps(report)


def cmd_estimate(args, seed):
    _require(args, "coloring")
    c = parse_coloring(args.coloring)
    if args.graph:
        e = estimator.estimate_via_graph_throw(c, _graph(args.graph), args.n, seed, args.threads)
    else:
        e = estimator.estimate_p_per(c, args.n, seed, args.threads)
    return _render(e, args.format, _estimate_text(e), _estimate_csv(e))


def cmd_exact(args, seed):
    p = estimator.exact_stripe_p(args.width)
    report = {"coloring": StripeColoring(args.width).to_dict(), "p": p}
    return _render(report, args.format, f"{p:.15g}\n", f"width,p\n{args.width:.17g},{p:.17g}\n")


def cmd_mk(args, seed):
    _require(args, "graph", "k")
    r = solve_mk(_graph(args.graph), args.k, args.max_nodes)
    text = f"{r}\nwitness: {' '.join(map(str, r.witness))}\n"
    return _render(r, args.format or "text", text)


def cmd_bounds(args, seed):
    _require(args, "k")
    rep = bounds.build_bounds_report(args.k, args.n, seed, args.R, args.cells, args.threads)
    rows = [f"lower,{rep.lower_witness},{float(rep.lower):.17g},0\n"]
    for w, e in rep.candidates:
        rows.append(f"upper_candidate,{w['type']},{e.p_hat:.17g},{e.stderr:.17g}\n")
    text = (f"k={rep.k}: {rep.lower} ({float(rep.lower):.6f}, {rep.lower_witness})"
            f" <= inf p <= {rep.upper:.6f} ({rep.upper_witness['type']})\n")
    return _render(rep, args.format, text, "bound,witness,value,stderr\n" + "".join(rows))


def cmd_table(args, seed):
    _require(args, "coloring")
    c = parse_coloring(args.coloring)
    e = estimator.estimate_p_table(c, args.R, args.n, seed, args.threads)
    report = {"estimate": e.to_dict(), "gap_bound": bounds.table_bound_gap(args.R)}
    return _render(report, args.format, _estimate_text(e), _estimate_csv(e))


def cmd_optimize(args, seed):
    opt = bounds.optimize_hex_edge(args.s_min, args.s_max, args.budget, args.n, seed,
                                   refine_steps=args.refine, n_threads=args.threads)
    if args.format == "csv":
        if args.output:
            emit_sweep_csv(opt.sweep, args.output)
            return None
        buf = _io.StringIO()
        buf.write(",".join(SWEEP_HEADER) + "\n")
        for p in opt.sweep:
            e = p.estimate
            buf.write(f"{p.parameter:.17g},{e.p_hat:.17g},{e.stderr:.17g},{e.n},{e.seed}\n")
        return buf.getvalue()
    best = opt.best.estimate
    report = {
        "s_star": opt.s_star,
        "best": best.to_dict(),
        "min_edges_non_3_colorable": bounds.min_edges_non_k_colorable(best),
        "sweep": [{"parameter": p.parameter, **p.estimate.to_dict()} for p in opt.sweep],
    }
    text = f"s*={opt.s_star:.6f} p={best.p_hat:.6f} stderr={best.stderr:.2g}\n"
    return _render(report, args.format, text)


def cmd_hyperdim(args, seed):
    if args.simplex_bound is not None:
        v = hyperdim.simplex_bound(args.simplex_bound)
        report = {"k": args.simplex_bound, "value": str(v), "decimal": float(v)}
        return _render(report, args.format, f"{v} ({float(v):.10g})\n")
    c = hyperdim.SlabColoring(args.d, args.width)
    if args.graph:
        g = hyperdim.regular_simplex(args.d) if args.graph == "simplex" else load_graph(args.graph)
        e = hyperdim.estimate_graph_throw_d(c, g, args.n, seed, args.threads)
    else:
        e = hyperdim.estimate_p_per_d(c, args.n, seed, args.threads)
    return _render(e, args.format, _estimate_text(e), _estimate_csv(e))


HANDLERS = {
    "estimate": cmd_estimate,
    "exact": cmd_exact,
    "mk": cmd_mk,
    "bounds": cmd_bounds,
    "table": cmd_table,
    "optimize": cmd_optimize,
    "hyperdim": cmd_hyperdim,
}


def run(argv=None) -> int:
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        seed = fresh_seed() if args.seed is None else args.seed
        out = HANDLERS[args.command](args, seed)
        if out is not None:
            if args.output:
                with open(args.output, "w") as fh:
                    fh.write(out)
            else:
                sys.stdout.write(out)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (NeedleColorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:
        return int(exc.code or 0)
    return EXIT_OK


def main():
    sys.exit(run())
