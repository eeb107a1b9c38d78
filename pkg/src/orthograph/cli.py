"""Command-line interface.

Subcommands:
  params   evaluate the closed-form predictions only (no graph is built)
  verify   build the graph, measure everything, compare, emit a report
  sweep    run verify over a grid of (n, nu, delta, z), emit reports + summary CSV
  export   write the graph as an edge list, adjacency JSON and vertex table CSV

Exit codes: 0 clean, 1 at least one verification failure, 2 usage error.
ORTHOGRAPH_THREADS bounds sweep parallelism (default 1, serial).
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import OrthographError
from .ortho_graph import build_graph, to_adjacency_json, to_edge_list, vertex_table_csv
from .projective import DEFAULT_VERTEX_CAP
from .quad_forms import FormSpec
from .reports import (
    VerifyOptions,
    exit_code,
    report_json,
    run_params,
    run_verify,
    run_verify_or_skip,
    summary_header,
    summary_row,
)
from .subconstituents import subconstituent


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="ring exponent (modulus 2^n)")
    p.add_argument("--nu", type=int, required=True, help="Witt index nu >= 1")
    p.add_argument("--delta", type=int, required=True, choices=(0, 1, 2))
    p.add_argument("--z", type=int, default=1, help="unit for the delta=2 tail block (default 1)")


def _add_budget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap", type=int, default=DEFAULT_VERTEX_CAP, help="vertex count cap")
    p.add_argument("--budget-color", type=int, default=2_000_000, help="colouring search node budget")
    p.add_argument("--budget-aut", type=int, default=300_000, help="group search node budget")
    p.add_argument("--aut-max-vertices", type=int, default=150,
                   help="largest graph for a full group search (certified above)")
    p.add_argument("--chromatic-max-vertices", type=int, default=500,
                   help="largest graph the exact colouring solver is attempted on")


def _options(args: argparse.Namespace) -> VerifyOptions:
    return VerifyOptions(
        cap=args.cap,
        color_budget=args.budget_color,
        chromatic_max_vertices=args.chromatic_max_vertices,
        aut_max_vertices=args.aut_max_vertices,
        aut_node_budget=args.budget_aut,
    )


def _spec(args: argparse.Namespace) -> FormSpec:
    return FormSpec(args.n, args.nu, args.delta, args.z)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report_csv(report: dict, runtime: float | None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(summary_header())
    w.writerow(summary_row(report, runtime))
    return buf.getvalue()


def _parse_range(text: str) -> list[int]:
    """Accepts '2', '1..3' and '0,1,2'."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise ValueError(f"empty range: {text!r}")
    return sorted(set(out))


def _run_one(task: tuple) -> tuple[dict, float]:
    spec_fields, opts = task
    t0 = time.perf_counter()
    report = run_verify_or_skip(FormSpec(*spec_fields), opts)
    return report, time.perf_counter() - t0


def cmd_params(args: argparse.Namespace) -> int:
    report = run_params(_spec(args))
    text = report_json(report) if args.format == "json" else _report_csv(report, None)
    _emit(text, args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    report = run_verify(_spec(args), _options(args))
    runtime = time.perf_counter() - t0
    text = report_json(report) if args.format == "json" else _report_csv(report, runtime)
    _emit(text, args.out)
    return exit_code(report)


def cmd_sweep(args: argparse.Namespace) -> int:
    opts = _options(args)
    zs = _parse_range(args.z_list)
    grid = [
        (n, nu, delta, z)
        for n in _parse_range(args.n)
        for nu in _parse_range(args.nu)
        for delta in _parse_range(args.delta)
        for z in (zs if delta == 2 else [1])
    ]
    # deduplicate (delta != 2 collapses z)
    grid = sorted(set(grid))
    workers = max(1, int(os.environ.get("ORTHOGRAPH_THREADS", "1")))
    tasks = [(g, opts) for g in grid]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = [summary_header()]
    worst = 0
    for (n, nu, delta, z), (report, runtime) in zip(grid, results):
        name = f"report_n{n}_nu{nu}_delta{delta}_z{z}.json"
        (outdir / name).write_text(report_json(report))
        rows.append(summary_row(report, runtime))
        worst = max(worst, exit_code(report))
    with open(outdir / "summary.csv", "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    sys.stdout.write(f"{len(grid)} specs -> {outdir}/summary.csv\n")
    return worst


def cmd_export(args: argparse.Namespace) -> int:
    spec = _spec(args)
    g = build_graph(spec, args.cap)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = f"graph_n{spec.n}_nu{spec.nu}_delta{spec.delta}_z{spec.z}"
    wanted = args.format
    if wanted in ("edges", "all"):
        (outdir / f"{stem}.edges").write_text(to_edge_list(g))
    if wanted in ("adjacency-json", "all"):
        (outdir / f"{stem}.adjacency.json").write_text(to_adjacency_json(g))
    if wanted in ("vertex-csv", "all"):
        (outdir / f"{stem}.vertices.csv").write_text(vertex_table_csv(g))
    if args.subconstituents:
        for i in (1, 2):
            sub = subconstituent(g, i)
            iu, ju = sub.adj.nonzero()
            lines = [f"p edge {sub.num_vertices} {int(sub.adj.sum()) // 2}"]
            lines += [f"e {a + 1} {b + 1}" for a, b in zip(iu.tolist(), ju.tolist()) if a < b]
            (outdir / f"{stem}.sub{i}.edges").write_text("\n".join(lines) + "\n")
    sys.stdout.write(f"wrote {stem}.* to {outdir}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="orthograph",
        description="Construct orthogonal graphs over Z_{2^n} and verify their "
                    "claimed parameters by brute-force measurement.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="closed-form predictions only")
    _add_spec_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("verify", help="build, measure and compare one spec")
    _add_spec_args(p)
    _add_budget_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="verify a grid of specs")
    p.add_argument("--n", required=True, help="range, e.g. 1..3")
    p.add_argument("--nu", required=True, help="range, e.g. 1..2")
    p.add_argument("--delta", required=True, help="list, e.g. 0,1,2")
    p.add_argument("--z", dest="z_list", default="1", help="z values for delta=2 (default 1)")
    _add_budget_args(p)
    p.add_argument("--format", choices=("json",), default="json")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="write graph files")
    _add_spec_args(p)
    p.add_argument("--cap", type=int, default=DEFAULT_VERTEX_CAP)
    p.add_argument("--format", choices=("edges", "adjacency-json", "vertex-csv", "all"), default="all")
    p.add_argument("--subconstituents", action="store_true", help="also export the two subconstituents")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_export)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except OrthographError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
