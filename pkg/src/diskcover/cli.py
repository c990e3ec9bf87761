"""Command line front end.

Exit codes: 0 success (an infeasible instance is a normal outcome),
2 usage error, 3 I/O or input-file error, 4 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import instance as inst_mod
from .render import RenderError, render_svg
from .runs import COLUMNS, METHODS, append_record, benchmark, records_to_csv, run_method, write_suite

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INTERNAL = 0, 2, 3, 4

CSV_HELP = (
    "CSV columns (schema runs/1): " + ", ".join(COLUMNS) + ". "
    "gap = (objective - lower_bound) / objective; wall_time is empty unless --timing."
)


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {v}")
    return v


def _alpha(text):
    if text.lower() in ("inf", "infinity"):
        return float("inf")
    v = _positive_float(text)
    if v < 1:
        raise argparse.ArgumentTypeError("alpha must be >= 1")
    return v


def _kappa_set(text):
    try:
        vals = tuple(sorted({int(t) for t in text.split(",") if t.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or vals[0] < 1:
        raise argparse.ArgumentTypeError("kappa choices must be positive integers")
    return vals


def _add_solver_flags(p):
    p.add_argument("--ell", type=_positive_float, default=None,
                   help="separation distance for dgmc-ip (default: instance ell, else 5)")
    p.add_argument("--alpha", type=_alpha, default=1.2, help="candidate radius bound factor (default 1.2, 'inf' disables)")
    p.add_argument("--cliques", choices=("on", "off"), default="on", help="clique separation rows (default on)")
    p.add_argument("--time-limit", type=_positive_float, default=900.0, help="per-solve limit in seconds (default 900)")
    p.add_argument("--backend", choices=("auto", "bnb", "highs"), default="auto",
                   help="exact solver backend (default auto)")
    p.add_argument("--seed", type=int, default=0, help="heuristic seed (default 0)")
    p.add_argument("--timing", action="store_true",
                   help="record wall times (outputs are then no longer byte-reproducible)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diskcover", description="Minimum-area disk multi-covers.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random instance or a benchmark suite")
    g.add_argument("--n", type=_positive_int, help="number of points")
    g.add_argument("--m", type=_positive_int, help="disk budget")
    g.add_argument("--family", choices=inst_mod.FAMILIES, help="write a whole benchmark suite")
    g.add_argument("--scale", choices=("full", "small"), default="full",
                   help="'small' keeps suite sizes at n <= 60")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--kappa", type=_kappa_set, default=(1, 2, 3), help="coverage choices, e.g. 1,2,3")
    g.add_argument("--width", type=_positive_float, default=100.0)
    g.add_argument("--height", type=_positive_float, default=100.0)
    g.add_argument("--ell", type=_positive_float, default=None, help="store a separation distance")
    g.add_argument("-o", "--output", required=True, help="instance file, or directory with --family")

    s = sub.add_parser("solve", help="solve one instance", epilog=CSV_HELP)
    s.add_argument("instance")
    s.add_argument("--method", choices=METHODS, required=True)
    _add_solver_flags(s)
    s.add_argument("-o", "--output", help="solution file (default <instance>.<method>.json)")
    s.add_argument("--records", help="run table to append to (default runs.csv next to the solution)")

    b = sub.add_parser("benchmark", help="run methods over a suite directory", epilog=CSV_HELP)
    b.add_argument("suite")
    b.add_argument("--methods", default="heuristic,gmc-ip", help="comma-separated methods")
    _add_solver_flags(b)
    b.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    b.add_argument("-o", "--output", required=True, help="CSV output path")

    r = sub.add_parser("render", help="draw a solution as SVG")
    r.add_argument("instance")
    r.add_argument("solution")
    r.add_argument("--ell", type=_positive_float, default=None, help="draw separation segments")
    r.add_argument("-o", "--output", required=True)

    c = sub.add_parser("candidates", help="dump the candidate disk set as JSON")
    c.add_argument("instance")
    c.add_argument("--kgon-ell", type=_positive_float, default=None, help="also add k-gon disks")
    c.add_argument("-o", "--output", required=True)

    e = sub.add_parser("export-lp", help="write the GMC integer program in LP format")
    e.add_argument("instance")
    e.add_argument("--heuristic-seed", type=int, default=None,
                   help="embed a heuristic start solution as a comment block")
    e.add_argument("-o", "--output", required=True)
    return parser


def cmd_generate(args) -> int:
    cfg = inst_mod.GeneratorConfig(args.width, args.height, args.kappa, args.seed)
    if args.family:
        if args.n is not None or args.m is not None:
            raise UsageError("--family cannot be combined with --n/--m")
        suite = inst_mod.make_suite(args.family, args.seed, args.scale, cfg)
        if args.ell is not None:
            suite = [i.with_ell(args.ell) for i in suite]
        write_suite(suite, args.output, args.family, args.seed, args.scale)
        print(f"wrote {len(suite)} instances to {args.output}")
        return EXIT_OK
    if args.n is None or args.m is None:
        raise UsageError("generate needs --n and --m (or --family)")
    inst = inst_mod.generate(args.n, args.m, cfg)
    if args.ell is not None:
        inst = inst.with_ell(args.ell)
    out = Path(args.output)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    inst_mod.save(inst, out)
    print(f"wrote {out}")
    return EXIT_OK


def _solver_opts(args) -> dict:
    return dict(ell=args.ell, alpha=args.alpha, cliques=args.cliques == "on",
                time_limit=args.time_limit, backend=args.backend, timing=args.timing, seed=args.seed)


def _default_ell(args, inst):
    if args.ell is None and inst.ell is None:
        args.ell = 5.0


def cmd_solve(args) -> int:
    inst = inst_mod.load(args.instance)
    if args.method == "dgmc-ip":
        _default_ell(args, inst)
    payload, rec = run_method(inst, args.method, **_solver_opts(args))
    out = Path(args.output) if args.output else Path(args.instance).with_suffix(f".{args.method}.json")
    out.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    records = Path(args.records) if args.records else out.parent / "runs.csv"
    append_record(records, rec)
    obj = "-" if rec.objective is None else f"{rec.objective:.6f}"
    print(f"{inst.name} {args.method} status={rec.status} objective={obj} -> {out}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if unknown or not methods:
        raise UsageError(f"unknown method(s) {unknown}; choose from {', '.join(METHODS)}")
    if "dgmc-ip" in methods and args.ell is None:
        args.ell = 5.0
    recs = benchmark(args.suite, methods, jobs=args.jobs, **_solver_opts(args))
    Path(args.output).write_text(records_to_csv(recs), encoding="utf-8")
    print(f"wrote {len(recs)} rows to {args.output}")
    return EXIT_OK


def cmd_render(args) -> int:
    inst = inst_mod.load(args.instance)
    try:
        sol = json.loads(Path(args.solution).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise inst_mod.InstanceError(f"malformed solution JSON: {exc}") from exc
    Path(args.output).write_text(render_svg(inst, sol, args.ell), encoding="utf-8")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_candidates(args) -> int:
    from .candidates import augment_kgons, enumerate_gmc

    inst = inst_mod.load(args.instance)
    C = enumerate_gmc(inst.points)
    if args.kgon_ell:
        C = augment_kgons(C, inst, args.kgon_ell)
    Path(args.output).write_text(C.to_json(), encoding="utf-8")
    print(f"wrote {len(C)} candidates to {args.output}")
    return EXIT_OK


def cmd_export_lp(args) -> int:
    from .candidates import enumerate_gmc
    from .heuristic import solve_heuristic
    from .solver import build_gmc_model, export_lp

    inst = inst_mod.load(args.instance)
    model = build_gmc_model(enumerate_gmc(inst.points), inst)
    if args.heuristic_seed is not None and inst.gmc_feasible:
        model.heuristic_note = list(solve_heuristic(inst, args.heuristic_seed).disks)
    export_lp(model, args.output)
    print(f"wrote {args.output}")
    return EXIT_OK


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "benchmark": cmd_benchmark,
    "render": cmd_render,
    "candidates": cmd_candidates,
    "export-lp": cmd_export_lp,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"diskcover: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, inst_mod.InstanceError, RenderError) as exc:
        print(f"diskcover: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # noqa: BLE001
        print(f"diskcover: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
