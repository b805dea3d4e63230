"""Command-line interface: ``qsa {assign,table,conjecture,marginal,section,validate}``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from .assignment import SmearingKernel, assign_state, convexity_check, smear_povm, von_neumann_povm
from .bloch_geometry import diagonal_triangle, planar_section
from .errors import QSAError
from .posterior import DEFAULT_REPLICATES, DEFAULT_SAMPLES, DEFAULT_SEED, FrequencyTriple, IntegrationConfig
from .priors import CONSTANT, Prior, default_gaussian_prior, grid_centers, marginal_density_grid
from .su_basis import SQRT3
from .table import reproduce_table
from .validation import SUITES, run_suites

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    integration: IntegrationConfig
    prior: Prior
    output_format: str = "json"


def _prior_from_args(args) -> Prior:
    if args.prior == CONSTANT:
        return Prior.constant()
    p = default_gaussian_prior()
    if args.breadth is not None:
        p = Prior.gaussian(p.center, args.breadth)
    return p


def _config(args) -> RunConfig:
    integ = IntegrationConfig(args.samples, args.replicates, args.seed, args.threads)
    return RunConfig(integ, _prior_from_args(args), args.format)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(cfg: IntegrationConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "seed": cfg.seed, "samples": cfg.samples, "replicates": cfg.replicates}


def _parse_kernel(text: str) -> SmearingKernel:
    rows = [[float(v) for v in r.split(",")] for r in text.split(";")]
    return SmearingKernel(np.array(rows))


def cmd_assign(args) -> int:
    run = _config(args)
    counts = FrequencyTriple.of(args.counts)
    povm = None
    if args.kernel:
        povm = smear_povm(von_neumann_povm(), _parse_kernel(args.kernel))
    res = assign_state(counts, run.prior, run.integration, povm)
    d = {**_meta(run.integration), **res.to_dict()}
    if args.kernel:
        d["kernel"] = args.kernel
    if run.output_format == "json":
        text = _dump_json(d)
    elif run.output_format == "csv":
        rows = [["i", "rho_ii", "stderr"]]
        rows += [[i + 1, repr(v), repr(e)] for i, (v, e) in enumerate(zip(res.diagonal, res.diagonal_stderr))]
        text = _csv_text(rows)
    else:
        lines = [f"counts {counts.label()}  prior {run.prior.tag}  seed {run.integration.seed}"]
        lines += [f"  rho_{i+1}{i+1} = {v:.4f} +- {e:.4f}" for i, (v, e) in enumerate(zip(res.diagonal, res.diagonal_stderr))]
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return 0


def cmd_table(args) -> int:
    run = _config(args)
    report = reproduce_table(run.integration)
    if run.output_format == "json":
        text = _dump_json({**_meta(run.integration), "pass": report.passed, "rows": [r.to_dict() for r in report.rows]})
    elif run.output_format == "csv":
        rows = [["prior", "counts", "rho11", "rho22", "rho33", "se11", "se22", "se33", "ref11", "ref22", "ref33", "unc11", "unc22", "unc33", "pass"]]
        for r in report.rows:
            rows.append([r.prior, "".join(map(str, r.counts)), *map(repr, r.computed), *map(repr, r.stderr),
                         *map(repr, r.reference), *map(repr, r.reference_unc), int(r.passed)])
        text = _csv_text(rows)
    else:
        lines = [f"{'prior':9} {'counts':7} {'computed diagonal':32} {'reference':22} result"]
        for r in report.rows:
            comp = " ".join(f"{v:.4f}({e * 1e4:.0f})" for v, e in zip(r.computed, r.stderr))
            ref = " ".join(f"{v:.4f}" for v in r.reference)
            lines.append(f"{r.prior:9} ({''.join(map(str, r.counts))})   {comp:32} {ref:22} {'PASS' if r.passed else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    if not report.passed:
        bad = ", ".join(f"{r.prior}({''.join(map(str, r.counts))})" for r in report.failures)
        print(f"table rows outside tolerance: {bad}", file=sys.stderr)
        return 1
    return 0


def cmd_conjecture(args) -> int:
    run = _config(args)
    if run.prior.kind != CONSTANT and not args.experimental:
        print("conjecture check needs --prior constant (or --experimental)", file=sys.stderr)
        return 2
    rows = convexity_check(args.N, run.prior, run.integration, experimental=args.experimental)
    ok = all(r.within() for r in rows)
    if run.output_format == "json":
        text = _dump_json({
            **_meta(run.integration), "N": args.N, "prior": run.prior.to_dict(), "pass": ok,
            "rows": [{"counts": list(r.counts), "residual_x3": r.residual[0], "residual_x8": r.residual[1],
                      "stderr_x3": r.stderr[0], "stderr_x8": r.stderr[1]} for r in rows],
        })
    elif run.output_format == "csv":
        text = _csv_text([["counts", "residual_x3", "residual_x8", "stderr_x3", "stderr_x8"]] + [
            ["".join(map(str, r.counts)), *map(repr, r.residual), *map(repr, r.stderr)] for r in rows])
    else:
        lines = [f"({''.join(map(str, r.counts))})  dx3 = {r.residual[0]:+.5f} +- {r.stderr[0]:.5f}"
                 f"   dx8 = {r.residual[1]:+.5f} +- {r.stderr[1]:.5f}" for r in rows]
        text = "\n".join(lines + [f"all within 3 sigma: {ok}"]) + "\n"
    _emit(text, args.output)
    if args.experimental and run.prior.kind != CONSTANT:
        return 0
    return 0 if ok else 1


def cmd_marginal(args) -> int:
    p = _prior_from_args(args)
    grid = marginal_density_grid(p, (3, 8), args.grid, args.samples_per_cell, args.seed, args.threads)
    c3, c8 = grid_centers((3, 8), args.grid)
    tri = diagonal_triangle()
    if args.format == "json":
        text = _dump_json({
            "schema_version": SCHEMA_VERSION, "seed": args.seed, "samples_per_cell": args.samples_per_cell,
            "prior": p.to_dict(), "axes": [3, 8], "x3": c3.tolist(), "x8": c8.tolist(),
            "extent": {"x3": [-1.0, 1.0], "x8": [-2 / SQRT3, 1 / SQRT3]},
            "density": grid.tolist(), "triangle": tri.tolist(),
        })
    else:
        # rows follow x3, columns follow x8; first row/column hold the centres
        rows = [["x3\\x8", *map(repr, c8)]] + [[repr(c3[i]), *map(repr, grid[i])] for i in range(len(c3))]
        text = _csv_text(rows)
    _emit(text, args.output)
    return 0


def cmd_section(args) -> int:
    axes = tuple(int(a) for a in args.axes.split(","))
    lines = planar_section(axes, args.resolution)
    if args.format == "json":
        text = _dump_json({"schema_version": SCHEMA_VERSION, "axes": list(axes),
                           "polylines": [pl.tolist() for pl in lines]})
    else:
        rows = []
        for pl in lines:
            rows += [[repr(a), repr(b)] for a, b in pl]
        text = _csv_text(rows)
    _emit(text, args.output)
    return 0


def cmd_validate(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    cfg = IntegrationConfig(args.samples, args.replicates, args.seed, args.threads)
    results = run_suites(names, points=args.points, N=args.N, cfg=cfg)
    if args.format == "json":
        text = _dump_json({**_meta(cfg), "pass": all(r.passed for r in results),
                           "suites": [{"name": r.name, "pass": r.passed, "details": r.details} for r in results]})
    else:
        text = "".join(f"{r.name:14} {'PASS' if r.passed else 'FAIL'}\n" for r in results)
    _emit(text, args.output)
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"failed invariants: {', '.join(failed)}", file=sys.stderr)
        return 1
    return 0


def _integration_flags(p: argparse.ArgumentParser, with_prior: bool = True):
    p.add_argument("--samples", type=_at_least(10_000), default=DEFAULT_SAMPLES, help="points per replicate")
    p.add_argument("--replicates", type=_at_least(2), default=DEFAULT_REPLICATES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default: QSA_THREADS or CPU count)")
    if with_prior:
        _prior_flags(p)


def _prior_flags(p: argparse.ArgumentParser):
    p.add_argument("--prior", choices=["constant", "gaussian"], default="constant")
    p.add_argument("--breadth", type=float, default=None, help="breadth of the Gaussian-like prior")


def _at_least(lo: int):
    def parse(text: str) -> int:
        n = int(float(text))
        if n < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}")
        return n

    return parse


def _counts(text: str) -> FrequencyTriple:
    try:
        return FrequencyTriple.of(text.split(","))
    except (QSAError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"invalid counts {text!r}: {exc}")


def _conjecture_N(text: str) -> int:
    n = int(text)
    if not 2 <= n <= 5:
        raise argparse.ArgumentTypeError("N must be between 2 and 5")
    return n


def _grid(text: str) -> int:
    n = int(text)
    if not 16 <= n <= 512:
        raise argparse.ArgumentTypeError("grid must be between 16 and 512")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsa", description="Bayesian state assignment for a three-level system")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assign", help="assign a statistical operator to absolute-frequency data")
    p.add_argument("--counts", type=_counts, required=True, help="N1,N2,N3")
    p.add_argument("--kernel", default=None, help="smearing kernel rows, e.g. '0.9,0.05,0.05;0.05,0.9,0.05;0.05,0.05,0.9'")
    _integration_flags(p)
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("table", help="reproduce the reference table")
    _integration_flags(p, with_prior=False)
    p.set_defaults(prior="constant", breadth=None)
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("conjecture", help="convexity relation residuals for all triples of size N")
    p.add_argument("--N", type=_conjecture_N, required=True)
    p.add_argument("--experimental", action="store_true", help="allow non-constant priors (no pass/fail meaning)")
    _integration_flags(p)
    p.add_argument("--format", choices=["json", "csv", "text"], default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("marginal", help="(x3, x8) marginal density of a prior")
    _prior_flags(p)
    p.add_argument("--grid", type=_grid, default=64)
    p.add_argument("--samples-per-cell", type=int, default=4096)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_marginal)

    p = sub.add_parser("section", help="boundary of a planar section of the Bloch body")
    p.add_argument("--axes", default="3,8", help="two 1-based coordinate indices")
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_section)

    p = sub.add_parser("validate", help="run invariant suites")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--points", type=int, default=100_000)
    p.add_argument("--N", type=int, default=3)
    _integration_flags(p, with_prior=False)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QSAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
