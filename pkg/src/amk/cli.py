"""Command-line front end.

Subcommands: encode, count, verify, propcheck, pigeonhole, bench. Payload
(DIMACS, CSV, tables) goes to stdout or the requested file; diagnostics go
to stderr. Exit codes: 0 success, 1 property-check failure, 2 usage or
config error, 3 solver/environment error.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from typing import Optional

from . import bench as bench_mod
from .cnf import write_dimacs
from .encoders import (
    ENCODING_NAMES,
    EncodingError,
    count_report,
    encode_to_formula,
    valid_bounds,
)
from .pigeonhole import PigeonholeInstance, generate_pigeonhole
from .propagation import (
    ORACLE_LIMIT,
    OracleLimitError,
    check_ac_by_up,
    projection_counterexample,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_ENVIRONMENT = 3


def _err(message: str) -> None:
    print(f"amk: {message}", file=sys.stderr)


def _warn_all(warnings) -> None:
    for message in warnings:
        print(f"amk: warning: {message}", file=sys.stderr)


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def cmd_encode(args) -> int:
    warnings: list[str] = []
    formula = encode_to_formula(args.encoding, args.n, args.k, warning_sink=warnings)
    _warn_all(warnings)
    out, close = _open_out(args.out)
    try:
        write_dimacs(formula, out)
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_count(args) -> int:
    lo, hi = args.n_range
    reports = [
        count_report(args.encoding, n, args.k) for n in range(lo, hi + 1, args.step)
    ]
    print("n,aux_vars,clauses")
    for r in reports:
        print(f"{r.n},{r.aux_vars},{r.clauses}")
    if args.plot:
        from .plots import save_growth_figure

        save_growth_figure(reports, args.plot)
        _err(f"wrote figure {args.plot}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.max_n > ORACLE_LIMIT:
        _err(f"--max-n {args.max_n} exceeds the exhaustive oracle limit {ORACLE_LIMIT}")
        return EXIT_USAGE
    encodings = list(ENCODING_NAMES) if args.encoding == "all" else [args.encoding]
    failures: list[str] = []
    detections: list[str] = []
    for encoding in encodings:
        for n in range(1, args.max_n + 1):
            for k in valid_bounds(encoding, n):
                formula = encode_to_formula(encoding, n, k)
                clauses = list(formula.clauses)
                dropped = None
                if args.mutate:
                    if not clauses:
                        continue
                    dropped = clauses.pop()
                witness = projection_counterexample(clauses, range(1, n + 1), k)
                if args.mutate:
                    if witness is None:
                        failures.append(
                            f"{encoding} n={n} k={k}: dropping clause {dropped} went undetected"
                        )
                    else:
                        true_vars = sorted(v for v, b in witness.items() if b)
                        detections.append(
                            f"{encoding} n={n} k={k}: dropping {dropped} detected; "
                            f"witness true vars {true_vars}"
                        )
                elif witness is not None:
                    true_vars = sorted(v for v, b in witness.items() if b)
                    failures.append(
                        f"{encoding} n={n} k={k}: assignment with true vars {true_vars} "
                        f"disagrees with popcount <= {k}"
                    )
    if args.mutate:
        for line in detections:
            print(line)
        for line in failures:
            print(f"MISSED: {line}")
        # detections are the expected outcome of a mutate run: the sweep "failed"
        return EXIT_CHECK_FAILED if detections or failures else EXIT_OK
    if failures:
        for line in failures:
            print(f"FAIL: {line}")
        return EXIT_CHECK_FAILED
    print(f"ok: {', '.join(encodings)} projection-equivalent up to n={args.max_n}")
    return EXIT_OK


def cmd_propcheck(args) -> int:
    report = check_ac_by_up(
        args.encoding, args.n, args.k, seed=args.seed, sample_size=args.sample_size
    )
    if report.achieves_ac:
        print("AC: yes")
    else:
        print("AC: no")
        w = report.witness
        if w.conflict:
            print(f"witness: seeding {sorted(w.seed_vars)} true yields a conflict")
        else:
            print(f"witness: seeding {sorted(w.seed_vars)} true leaves {w.unforced} unforced")
    scope = "exhaustive" if report.exhaustive else f"sampled (seed={args.seed})"
    _err(f"checked {report.seeds_checked} seeds, {scope}")
    return EXIT_OK


def cmd_pigeonhole(args) -> int:
    inst = PigeonholeInstance(args.p, args.h, args.k, amo=args.amo, amk=args.amk)
    warnings: list[str] = []
    formula = generate_pigeonhole(inst, warning_sink=warnings)
    _warn_all(warnings)
    out, close = _open_out(args.out)
    try:
        write_dimacs(formula, out)
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_bench(args) -> int:
    parallel = 1
    if args.config:
        try:
            cfg, parallel = bench_mod.load_config(args.config)
        except (OSError, ValueError) as exc:
            _err(f"bad config: {exc}")
            return EXIT_USAGE
    elif args.solver:
        cfg = bench_mod.SolverConfig(args.solver)
    else:
        _err("either --config or --solver is required")
        return EXIT_USAGE
    if args.solver and args.config:
        cfg = dataclasses.replace(cfg, executable=args.solver)
    if args.timeout is not None:
        cfg = dataclasses.replace(cfg, timeout_s=args.timeout)
    if args.parallel is not None:
        parallel = args.parallel

    try:
        if args.suite:
            instances = bench_mod.suite_preset(args.suite)
        else:
            instances = [
                PigeonholeInstance(*_parse_phk(row), amo=args.amo, amk=args.amk)
                for row in args.rows.split(",")
            ]
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE

    csv_out, close_csv = _open_out(args.csv)
    md_out, close_md = _open_out(args.md)
    try:
        results = bench_mod.run_suite(instances, cfg, csv_out, md_out, parallel=parallel)
    finally:
        if close_csv:
            csv_out.close()
        if close_md:
            md_out.close()
    if args.plot:
        from .plots import save_bench_figure

        save_bench_figure(results, args.plot, cfg.timeout_s)
        _err(f"wrote figure {args.plot}")
    errors = [r for r in results if r.verdict == bench_mod.ERROR]
    for r in errors:
        _err(f"cell {r.instance} {r.amo}/{r.amk}: {r.message}")
    return EXIT_ENVIRONMENT if errors else EXIT_OK


def _parse_phk(text: str) -> tuple[int, int, int]:
    parts = text.strip().split("-")
    if len(parts) != 3:
        raise ValueError(f"expected P-H-K, got {text!r}")
    return int(parts[0]), int(parts[1]), int(parts[2])


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        value = int(text)
        return value, value
    return int(lo), int(hi)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amk",
        description="At-most-k cardinality CNF encodings, verification, and benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write the DIMACS encoding of at-most-k")
    p.add_argument("--encoding", required=True, choices=ENCODING_NAMES)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--out", "-o", help="output path (default stdout)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("count", help="table of emission sizes over a range of n")
    p.add_argument("--encoding", required=True, choices=ENCODING_NAMES)
    p.add_argument("--n-range", required=True, type=_parse_range, metavar="A..B")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--plot", help="also render a growth figure to this path")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="brute-force projection-equivalence sweep")
    p.add_argument("--encoding", required=True, choices=ENCODING_NAMES + ("all",))
    p.add_argument("--max-n", required=True, type=int)
    p.add_argument("--seed", type=int, default=0, help="reserved for sampled sweeps")
    p.add_argument(
        "--mutate",
        action="store_true",
        help="drop one clause per formula and demand the oracle notices",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("propcheck", help="arc-consistency-by-UP check")
    p.add_argument("--encoding", required=True, choices=ENCODING_NAMES)
    p.add_argument("--n", required=True, type=int)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sample-size", type=int, default=1000)
    p.set_defaults(func=cmd_propcheck)

    p = sub.add_parser("pigeonhole", help="write a pigeonhole instance as DIMACS")
    p.add_argument("--p", required=True, type=int, help="pigeons")
    p.add_argument("--h", required=True, type=int, help="holes")
    p.add_argument("--k", required=True, type=int, help="hole capacity")
    p.add_argument("--amo", default="pw", choices=ENCODING_NAMES)
    p.add_argument("--amk", default="sc", choices=ENCODING_NAMES)
    p.add_argument("--out", "-o", help="output path (default stdout)")
    p.set_defaults(func=cmd_pigeonhole)

    p = sub.add_parser("bench", help="run a suite through an external DIMACS solver")
    p.add_argument("--config", help="key=value file: solver, args, timeout, parallel")
    p.add_argument("--solver", help="solver executable (overrides config)")
    p.add_argument("--timeout", type=float, help="per-cell timeout override, seconds")
    p.add_argument("--parallel", type=int, help="concurrent solver processes")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--suite", choices=tuple(bench_mod.SUITE_PRESETS))
    group.add_argument("--rows", help="comma-separated P-H-K triples")
    p.add_argument("--amo", default="pw", choices=ENCODING_NAMES, help="for --rows")
    p.add_argument("--amk", default="sc", choices=ENCODING_NAMES, help="for --rows")
    p.add_argument("--csv", help="CSV output path (default stdout)")
    p.add_argument("--md", help="markdown table output path (default stdout)")
    p.add_argument("--plot", help="also render a timing figure to this path")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EncodingError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except OracleLimitError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except ValueError as exc:
        _err(str(exc))
        return EXIT_USAGE
    except OSError as exc:
        _err(str(exc))
        return EXIT_ENVIRONMENT


if __name__ == "__main__":
    sys.exit(main())
