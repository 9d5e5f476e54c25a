"""Command-line interface.

Subcommands: score, entropy, bf, sweep, learn, cpdag, repro.  Every
subcommand writes machine-readable output (CSV or DAG text) when given an
output path; human-readable tables go to stdout with values at four
significant digits.  Exit codes: 0 success, 1 data/domain error, 2 usage
error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import analysis, dag, entropy, learn, repro, scores
from .dataset import Dataset, load_csv
from .errors import BnscoreError

__all__ = ["main", "build_parser"]


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _grid_spec(text: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected LO,HI,POINTS")
    try:
        lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc
    if not (0 < lo < hi) or points < 2:
        raise argparse.ArgumentTypeError("need 0 < LO < HI and POINTS >= 2")
    return lo, hi, points


def _add_data_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="CSV file with the sample")
    p.add_argument(
        "--no-header",
        action="store_true",
        help="first CSV row is data; variables are named V1..VN",
    )


def _add_score_args(p: argparse.ArgumentParser, include_bic: bool = True) -> None:
    choices = ["bdeu", "bds", "bdj", "k2", "bdla"] + (["bic"] if include_bic else [])
    p.add_argument("--score", default="bdeu", choices=choices, help="score family")
    p.add_argument(
        "--alpha", type=_positive_float, default=1.0, help="imaginary sample size"
    )
    p.add_argument("--bdla-L", dest="bdla_level", type=_positive_int, default=5,
                   help="half-width L of the bdla mixture grid {2^-L..2^L}")
    if include_bic:
        p.add_argument(
            "--bic-penalty",
            choices=["literal", "effective"],
            default="literal",
            help="BIC dimension count: q(r-1) or the effective parameter count",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bnscore",
        description="Dirichlet-multinomial scores, Bayesian entropy estimators, "
        "and structure search for discrete Bayesian networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="total and per-family log scores of a DAG")
    _add_data_arg(p)
    p.add_argument("--dag", required=True, help="DAG text file (Parent -> Child lines)")
    _add_score_args(p)
    p.add_argument("--out", help="CSV output: node,parents,log_score plus a TOTAL row")

    p = sub.add_parser("entropy", help="entropy estimators for every family of a DAG")
    _add_data_arg(p)
    p.add_argument("--dag", required=True)
    _add_score_args(p, include_bic=False)
    p.add_argument(
        "--row-mask",
        choices=["observed", "all"],
        default="observed",
        help="configurations included in the plug-in estimator",
    )
    p.add_argument("--out", help="CSV output, one row per node")

    p = sub.add_parser("bf", help="Bayes factor for a nested DAG pair")
    _add_data_arg(p)
    p.add_argument("--dag-minus", required=True, help="smaller DAG")
    p.add_argument("--dag-plus", required=True, help="larger DAG")
    _add_score_args(p)
    p.add_argument("--out", help="single-row CSV output")

    p = sub.add_parser("sweep", help="alpha sweep of a nested DAG pair")
    _add_data_arg(p)
    p.add_argument("--dag-minus", required=True)
    p.add_argument("--dag-plus", required=True)
    p.add_argument(
        "--scores",
        default="bdeu,bds",
        help="comma-separated score families to sweep (default bdeu,bds)",
    )
    p.add_argument("--bdla-L", dest="bdla_level", type=_positive_int, default=5)
    p.add_argument(
        "--grid",
        type=_grid_spec,
        default=(1e-4, 1e4, 201),
        help="LO,HI,POINTS log-spaced alpha grid (default 1e-4,1e4,201)",
    )
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--plot", help="also render the curves to this PNG")

    p = sub.add_parser("learn", help="hill-climb a structure from data")
    _add_data_arg(p)
    _add_score_args(p)
    p.add_argument("--max-parents", type=_nonneg_int, default=5)
    p.add_argument("--max-iter", type=_nonneg_int, default=200)
    p.add_argument("--out", help="learned DAG in text format")
    p.add_argument("--moves", help="CSV move log: iteration,move,from,to,delta")
    p.add_argument("--dot", help="learned DAG as DOT digraph text")

    p = sub.add_parser("cpdag", help="skeleton, v-structures, equivalence test")
    _add_data_arg(p)
    p.add_argument("--dag", required=True)
    p.add_argument("--dag2", help="second DAG for the equivalence test")
    p.add_argument("--out", help="CSV output: kind,x,y,z rows")
    p.add_argument("--dot", help="DOT digraph output for --dag")

    p = sub.add_parser(
        "repro",
        help="regenerate the built-in fixture tables, sweep CSVs and figures",
    )
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--dump-data", action="store_true", help="also export d1.csv/d2.csv")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.add_argument("--grid", type=_grid_spec, default=(1e-4, 1e4, 201))

    return parser


def _load(args: argparse.Namespace) -> Dataset:
    return load_csv(args.data, has_header=not args.no_header)


def _read_dag(path: str, data: Dataset) -> dag.Dag:
    return dag.parse_dag(Path(path).read_text(encoding="utf-8"), data.names)


def _build_spec(args: argparse.Namespace) -> scores.ScoreSpec:
    if getattr(args, "score", None) == "bic":
        return scores.BicSpec(penalty=args.bic_penalty)
    kind = args.score
    if kind == "bdla":
        return scores.AlphaSpec.bdla(args.alpha, args.bdla_level)
    if kind in ("bdj", "k2"):
        return scores.AlphaSpec(kind)
    return scores.AlphaSpec(kind, alpha=args.alpha)


def _write_csv_rows(path: str, header: list[str], rows: list[list[str]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    repro.atomic_write_text(Path(path), buf.getvalue())


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def _cmd_score(args: argparse.Namespace) -> int:
    data = _load(args)
    g = _read_dag(args.dag, data)
    spec = _build_spec(args)
    from .dataset import counts

    rows = []
    total = 0.0
    for i in range(g.node_count):
        parents = g.parents(i)
        value = scores.local_score(counts(data, i, parents), spec)
        total += value
        rows.append((data.names[i], " ".join(data.names[p] for p in parents), value))
    width = max(len(name) for name in data.names)
    for name, parents, value in rows:
        print(f"{name:<{width}}  | {parents or '(none)':<20} {_fmt(value)}")
    print(f"total log score: {_fmt(total)}")
    if args.out:
        csv_rows = [[name, parents, repr(value)] for name, parents, value in rows]
        csv_rows.append(["TOTAL", "", repr(total)])
        _write_csv_rows(args.out, ["node", "parents", "log_score"], csv_rows)
    return 0


def _cmd_entropy(args: argparse.Namespace) -> int:
    data = _load(args)
    g = _read_dag(args.dag, data)
    spec = _build_spec(args)
    from .dataset import counts

    header = [
        "node",
        "parents",
        "empirical",
        "marginal_posterior",
        "expected_posterior",
        "lemma1_bias",
        "me_score",
    ]
    csv_rows = []
    for i in range(g.node_count):
        parents = g.parents(i)
        rep = entropy.entropy_report(counts(data, i, parents), spec, rows=args.row_mask)
        print(
            f"{data.names[i]}: empirical={_fmt(rep.empirical)} "
            f"marginal={_fmt(rep.marginal_posterior)} "
            f"expected={_fmt(rep.expected_posterior)} me={_fmt(rep.me_score)}"
        )
        csv_rows.append(
            [
                data.names[i],
                " ".join(data.names[p] for p in parents),
                repr(rep.empirical),
                repr(rep.marginal_posterior),
                repr(rep.expected_posterior),
                repr(rep.lemma1_bias),
                repr(rep.me_score),
            ]
        )
    if args.out:
        _write_csv_rows(args.out, header, csv_rows)
    return 0


def _cmd_bf(args: argparse.Namespace) -> int:
    import math

    data = _load(args)
    g_minus = _read_dag(args.dag_minus, data)
    g_plus = _read_dag(args.dag_plus, data)
    spec = _build_spec(args)
    log_bf = analysis.bayes_factor(data, g_minus, g_plus, spec)
    print(f"log BF (g- over g+): {_fmt(log_bf)}   BF: {_fmt(math.exp(log_bf))}")
    print(f"log BF (g+ over g-): {_fmt(-log_bf)}   BF: {_fmt(math.exp(-log_bf))}")
    if args.out:
        _write_csv_rows(
            args.out,
            ["score", "alpha", "log_bf", "log_bf_rev"],
            [[args.score, repr(args.alpha), repr(log_bf), repr(-log_bf)]],
        )
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    data = _load(args)
    g_minus = _read_dag(args.dag_minus, data)
    g_plus = _read_dag(args.dag_plus, data)
    kinds = tuple(k.strip() for k in args.scores.split(",") if k.strip())
    lo, hi, points = args.grid
    grid = analysis.default_grid(lo, hi, points)
    curve = analysis.alpha_sweep(
        data, g_minus, g_plus, kinds=kinds, grid=grid, bdla_level=args.bdla_level
    )
    tmp = Path(args.out).with_suffix(Path(args.out).suffix + ".tmp")
    curve.write_csv(tmp)
    import os

    os.replace(tmp, args.out)
    print(f"wrote {len(curve.records)} records over {len(curve.grid)} grid points to {args.out}")
    if args.plot:
        from . import figures

        figures.render_single_sweep(curve, args.plot)
        print(f"figure written to {args.plot}")
    return 0


def _cmd_learn(args: argparse.Namespace) -> int:
    data = _load(args)
    spec = _build_spec(args)
    result = learn.hill_climb(
        data, spec, max_parents=args.max_parents, max_iter=args.max_iter
    )
    text = dag.format_dag(result.dag, data.names)
    print(text if text else "(empty DAG)")
    print(f"score: {_fmt(result.score)}  moves: {result.iterations}")
    if args.out:
        repro.atomic_write_text(Path(args.out), text)
    if args.dot:
        repro.atomic_write_text(Path(args.dot), dag.to_dot(result.dag, data.names))
    if args.moves:
        rows = [
            [str(it), move.kind, data.names[move.u], data.names[move.v], repr(delta)]
            for it, move, delta in result.moves
        ]
        _write_csv_rows(args.moves, ["iteration", "move", "from", "to", "delta"], rows)
    return 0


def _cmd_cpdag(args: argparse.Namespace) -> int:
    data = _load(args)
    g = _read_dag(args.dag, data)
    skel = sorted(dag.skeleton(g))
    vs = sorted(dag.v_structures(g))
    print("skeleton:", ", ".join(f"{data.names[a]}-{data.names[b]}" for a, b in skel) or "(none)")
    print(
        "v-structures:",
        ", ".join(f"{data.names[j]}->{data.names[i]}<-{data.names[k]}" for j, i, k in vs)
        or "(none)",
    )
    rows = [["skeleton", data.names[a], data.names[b], ""] for a, b in skel]
    rows += [
        ["v_structure", data.names[j], data.names[i], data.names[k]] for j, i, k in vs
    ]
    if args.dag2:
        g2 = _read_dag(args.dag2, data)
        same = dag.same_equivalence_class(g, g2)
        print(f"same equivalence class: {'yes' if same else 'no'}")
        rows.append(["same_class", str(same).lower(), "", ""])
    if args.out:
        _write_csv_rows(args.out, ["kind", "x", "y", "z"], rows)
    if args.dot:
        repro.atomic_write_text(Path(args.dot), dag.to_dot(g, data.names))
    return 0


def _cmd_repro(args: argparse.Namespace) -> int:
    lo, hi, points = args.grid
    result = repro.run_repro(
        args.out,
        dump_data=args.dump_data,
        figures=not args.no_figures,
        grid=analysis.default_grid(lo, hi, points),
    )
    name_w = max(len(row.name) for row in result.checks)
    for row in result.checks:
        status = "pass" if row.ok else "FAIL"
        print(
            f"{row.name:<{name_w}}  computed {_fmt(row.computed):>12}  "
            f"reference {_fmt(row.reference):>12}  [{status}]"
        )
    n_ok = sum(row.ok for row in result.checks)
    print(f"{n_ok}/{len(result.checks)} checks within tolerance")
    print(f"wrote {len(result.files)} files to {args.out}")
    return 0 if result.all_ok else 1


_COMMANDS = {
    "score": _cmd_score,
    "entropy": _cmd_entropy,
    "bf": _cmd_bf,
    "sweep": _cmd_sweep,
    "learn": _cmd_learn,
    "cpdag": _cmd_cpdag,
    "repro": _cmd_repro,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (BnscoreError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
