"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 capacity exceeded, 3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from hiermotif import io, ising, verify
from hiermotif.degrees import degree_fit
from hiermotif.errors import CapacityExceeded, HierMotifError
from hiermotif.hierarchy import MAX_NODES, build
from hiermotif.motifs import MotifId
from hiermotif.sampling import sample
from hiermotif.structure import boundary_ratio_closed, clustering_average, diameter, structure_report

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for capacity errors
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# argument types

def _motif(text: str) -> MotifId:
    try:
        return MotifId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _level(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError(f"level must be >= 1, got {k}")
    return k


def _count(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"count must be >= 1, got {n}")
    return n


def _prob(text: str) -> float:
    p = float(text)
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {p}")
    return p


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return v


def grid(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to 12 decimals so values print cleanly."""
    if step <= 0:
        raise UsageError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise UsageError(f"grid max {hi} is below min {lo}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) + 0.0 for i in range(n)]


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hiermotif", description="Hierarchical motif graphs and their Ising model.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    out = _Parser(add_help=False)
    out.add_argument("--out", type=Path, help="write the result here (default: stdout)")
    out.add_argument("--format", choices=("json", "csv"), default="json")
    out.add_argument("--plot", action="store_true", help="also render a PNG next to --out")

    graph = _Parser(add_help=False)
    graph.add_argument("--motif", type=_motif, required=True, help="m1 .. m5")
    graph.add_argument("--k", type=_level, required=True, help="hierarchy level")
    graph.add_argument("--max-nodes", type=int, default=MAX_NODES)

    rand = _Parser(add_help=False)
    rand.add_argument("--p", type=_prob, default=0.5, help="decoration probability")
    rand.add_argument("--seed", type=int, default=42)

    couplings = _Parser(add_help=False)
    couplings.add_argument("--K", type=_finite, required=True, help="basic coupling")
    couplings.add_argument("--L", type=_finite, required=True, help="decoration coupling")
    couplings.add_argument("--p", type=_prob, default=0.5, help="decoration probability")

    sub.add_parser("build", parents=[graph, out], help="build the graph topology")
    sub.add_parser("sample", parents=[graph, rand, out], help="draw one decoration realization")
    p = sub.add_parser("degree-stats", parents=[graph, rand, out], help="sampled vs mixture degree law")
    p.add_argument("--samples", type=_count, default=100)
    p.add_argument("--workers", type=_count, default=None)
    sub.add_parser("structure", parents=[graph, rand, out], help="clustering, diameter, boundary ratio")

    p = sub.add_parser("ising-iterate", parents=[couplings, out], help="x_k, S_k and Y_k trajectory")
    p.add_argument("--k-max", type=_count, default=50)
    p.add_argument("--Y1", type=_finite, nargs=3, default=[2.0, 1.0, 1.0], metavar=("Y1", "Y2", "Y3"))
    sub.add_parser("ising-phase", parents=[couplings, out], help="phase verdict and critical coupling")

    p = sub.add_parser("phase-diagram", parents=[out], help="long-format (L, p, K) sweep")
    for axis, lo, hi, step in (("L", -0.5, 1.0, 0.05), ("p", 0.0, 1.0, 0.25), ("K", -0.5, 1.5, 0.05)):
        p.add_argument(f"--{axis}-min", type=_finite, default=lo)
        p.add_argument(f"--{axis}-max", type=_finite, default=hi)
        p.add_argument(f"--{axis}-step", type=_finite, default=step)

    p = sub.add_parser("verify", parents=[out], help="run the oracle and identity suites")
    p.add_argument("--suite", action="append", choices=sorted(verify.SUITES), help="repeatable; default all")
    return parser


# ---------------------------------------------------------------------------
# commands

def _emit(args, json_doc: dict, columns, rows) -> str:
    if args.format == "csv":
        return io.to_csv(columns, rows)
    return io.to_json(json_doc)


def _figure_path(args) -> Path | None:
    if not args.plot:
        return None
    if args.out is None:
        raise UsageError("--plot needs --out so the figure has somewhere to go")
    return args.out.with_suffix(".png")


def cmd_build(args):
    g = build(args.motif, args.k, max_nodes=args.max_nodes)
    return _emit(args, io.graph_document(g), io.GRAPH_CSV_COLUMNS, io.graph_rows(g)), EXIT_OK


def cmd_sample(args):
    g = build(args.motif, args.k, max_nodes=args.max_nodes)
    real = sample(g, args.p, args.seed)
    text = _emit(args, io.realization_document(g, real), io.SAMPLE_CSV_COLUMNS, io.realization_rows(g, real))
    return text, EXIT_OK


def cmd_degree_stats(args):
    g = build(args.motif, args.k, max_nodes=args.max_nodes)
    rep = degree_fit(g, args.p, args.samples, args.seed, workers=args.workers)
    fig = _figure_path(args)
    if fig is not None:
        from hiermotif.plotting import plot_degree_fit

        plot_degree_fit(rep, fig)
    doc = rep.to_dict()
    doc["mean_z_score"] = rep.mean_z_score
    return _emit(args, doc, io.DEGREE_CSV_COLUMNS, doc["histogram"]), EXIT_OK


def cmd_structure(args):
    series, top = [], None
    for j in range(1, args.k + 1):
        g = build(args.motif, j, max_nodes=args.max_nodes)
        real = sample(g, args.p, args.seed)
        if j == args.k:
            top = structure_report(g, real)
            q, d = top.clustering_avg, top.diameter
        else:
            q, d = clustering_average(g, real), diameter(g, real)
        series.append({"k": j, "Q_k": q, "diam": d, "boundary_ratio": boundary_ratio_closed(g.motif, j)})
    fig = _figure_path(args)
    if fig is not None:
        from hiermotif.plotting import plot_structure_series

        plot_structure_series(series, fig, title=f"{args.motif.value}, p={args.p}, seed={args.seed}")
    doc = {"report": top.to_dict(), "series": series}
    return _emit(args, doc, io.STRUCTURE_CSV_COLUMNS, series), EXIT_OK


def cmd_ising_iterate(args):
    params = ising.IsingParams(args.K, args.L, args.p)
    traj = ising.evolve_Y(params, args.Y1, args.k_max)
    fig = _figure_path(args)
    if fig is not None:
        from hiermotif.plotting import plot_trajectory

        plot_trajectory(traj, fig)
    rows = []
    for k in range(1, len(traj.diameter_Y) + 1):
        inside = k <= len(traj.x)
        rows.append({
            "k": k,
            "x": traj.x[k - 1] if inside else None,
            "dobrushin_S": traj.dobrushin_S[k - 1] if inside else None,
            "diameter_Y": traj.diameter_Y[k - 1],
        })
    doc = traj.to_dict()
    doc["Y1"] = list(args.Y1)
    return _emit(args, doc, io.TRAJECTORY_CSV_COLUMNS, rows), EXIT_OK


def cmd_ising_phase(args):
    row = ising.phase_row(args.K, args.L, args.p)
    ks = "none" if row["K_star"] is None else repr(row["K_star"])
    summary = f"verdict: {row['verdict']}\nK_star: {ks}\n"
    if args.out is None:
        return summary, EXIT_OK, summary
    return _emit(args, row, ising.PHASE_COLUMNS, [row]), EXIT_OK, summary


def cmd_phase_diagram(args):
    rows = ising.phase_diagram(
        grid(args.L_min, args.L_max, args.L_step),
        grid(args.p_min, args.p_max, args.p_step),
        grid(args.K_min, args.K_max, args.K_step),
    )
    fig = _figure_path(args)
    if fig is not None:
        from hiermotif.plotting import plot_phase_diagram

        plot_phase_diagram(rows, fig)
    return _emit(args, {"columns": list(ising.PHASE_COLUMNS), "rows": rows}, ising.PHASE_COLUMNS, rows), EXIT_OK


def cmd_verify(args):
    results = verify.run_all(args.suite)
    failed = any(not r.passed for r in results)
    table = verify.render_table(results)
    if args.out is None:
        text = table
    elif args.format == "csv":
        text = io.to_csv(
            ("suite", "name", "passed", "detail"),
            [{**r.__dict__, "passed": "true" if r.passed else "false"} for r in results],
        )
    else:
        text = io.to_json({"passed": not failed, "checks": [r.__dict__ for r in results]})
    return text, EXIT_VERIFY if failed else EXIT_OK, table


COMMANDS = {
    "build": cmd_build,
    "sample": cmd_sample,
    "degree-stats": cmd_degree_stats,
    "structure": cmd_structure,
    "ising-iterate": cmd_ising_iterate,
    "ising-phase": cmd_ising_phase,
    "phase-diagram": cmd_phase_diagram,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, code, *summary = COMMANDS[args.command](args)
        if args.out is None:
            sys.stdout.write(text)
        else:
            io.write_atomic(args.out, text)
            if summary:
                sys.stdout.write(summary[0])
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapacityExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (HierMotifError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return code


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
