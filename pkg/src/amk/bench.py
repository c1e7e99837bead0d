"""Benchmark harness: run pigeonhole instances through an external DIMACS solver.

The solver is any executable invoked as `executable [extra args...] cnf-path`
that either exits with the SAT-competition codes (10 = SAT, 20 = UNSAT) or
prints an `s SATISFIABLE` / `s UNSATISFIABLE` line. Results stream to CSV
and pivot into a markdown table with one column per encoding.
"""

from __future__ import annotations

import dataclasses
import os
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Optional, Sequence

from .cnf import CnfFormula, write_dimacs
from .pigeonhole import PigeonholeInstance, generate_pigeonhole

SAT = "SAT"
UNSAT = "UNSAT"
TIMEOUT = "TIMEOUT"
ERROR = "ERROR"

CSV_COLUMNS = ("instance", "amo", "amk", "verdict", "encode_s", "solve_s", "total_s", "vars", "clauses")


@dataclass(frozen=True)
class SolverConfig:
    executable: str
    extra_args: tuple[str, ...] = ()
    timeout_s: float = 60.0
    sat_exit_code: int = 10
    unsat_exit_code: int = 20

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class BenchResult:
    instance: str = ""
    amo: str = ""
    amk: str = ""
    verdict: str = ERROR
    encode_s: float = 0.0
    solve_s: float = 0.0
    vars: int = 0
    clauses: int = 0
    model: Optional[dict[int, bool]] = None
    message: str = ""

    @property
    def total_s(self) -> float:
        return self.encode_s + self.solve_s

    def csv_row(self) -> str:
        return ",".join(
            (
                self.instance,
                self.amo,
                self.amk,
                self.verdict,
                f"{self.encode_s:.3f}",
                f"{self.solve_s:.3f}",
                f"{self.total_s:.3f}",
                str(self.vars),
                str(self.clauses),
            )
        )


def _parse_model(stdout: str) -> Optional[dict[int, bool]]:
    lits = []
    for line in stdout.splitlines():
        if line.startswith("v ") or line == "v":
            lits.extend(int(tok) for tok in line[1:].split())
    if not lits:
        return None
    return {abs(lit): lit > 0 for lit in lits if lit != 0}


def run_solver(formula: CnfFormula, cfg: SolverConfig) -> BenchResult:
    """Write the formula to a temp file, invoke the solver, classify the outcome.

    The verdict comes from the exit code first, then from the `s ...` status
    line; wall time is recorded and the process is killed at the timeout.
    """
    result = BenchResult(vars=formula.num_vars, clauses=formula.num_clauses)
    fd, path = tempfile.mkstemp(suffix=".cnf", prefix="amk-")
    try:
        with os.fdopen(fd, "w") as handle:
            write_dimacs(formula, handle)
        argv = [cfg.executable, *cfg.extra_args, path]
        started = time.perf_counter()
        try:
            proc = subprocess.run(
                argv, capture_output=True, text=True, timeout=cfg.timeout_s
            )
        except subprocess.TimeoutExpired:
            result.verdict = TIMEOUT
            result.solve_s = cfg.timeout_s
            return result
        except OSError as exc:
            result.verdict = ERROR
            result.message = f"failed to spawn solver: {exc}"
            return result
        result.solve_s = time.perf_counter() - started
        result.verdict, result.message = _classify(proc, cfg)
        if result.verdict == SAT:
            result.model = _parse_model(proc.stdout)
        return result
    finally:
        os.unlink(path)


def _classify(proc: subprocess.CompletedProcess, cfg: SolverConfig) -> tuple[str, str]:
    if proc.returncode == cfg.sat_exit_code:
        return SAT, ""
    if proc.returncode == cfg.unsat_exit_code:
        return UNSAT, ""
    for line in proc.stdout.splitlines():
        if line.startswith("s SATISFIABLE"):
            return SAT, ""
        if line.startswith("s UNSATISFIABLE"):
            return UNSAT, ""
    return ERROR, f"unrecognized solver output (exit code {proc.returncode})"


def run_cell(inst: PigeonholeInstance, cfg: SolverConfig) -> BenchResult:
    """Encode one instance and run it; per-cell failures become ERROR verdicts."""
    try:
        started = time.perf_counter()
        formula = generate_pigeonhole(inst)
        encode_s = time.perf_counter() - started
    except Exception as exc:
        return BenchResult(
            instance=inst.label, amo=inst.amo, amk=inst.amk, verdict=ERROR,
            message=f"encoding failed: {exc}",
        )
    result = run_solver(formula, cfg)
    return dataclasses.replace(
        result, instance=inst.label, amo=inst.amo, amk=inst.amk, encode_s=encode_s
    )


def run_suite(
    instances: Sequence[PigeonholeInstance],
    cfg: SolverConfig,
    csv_out: IO[str],
    md_out: Optional[IO[str]] = None,
    parallel: int = 1,
) -> list[BenchResult]:
    """Run every cell, streaming CSV rows in input order, then render markdown.

    Timing-sensitive runs should keep parallel=1 (the default) to avoid
    contention skew; higher values fan solver processes out over threads.
    """
    csv_out.write(",".join(CSV_COLUMNS) + "\n")
    results: list[BenchResult] = []
    if parallel <= 1:
        for inst in instances:
            result = run_cell(inst, cfg)
            csv_out.write(result.csv_row() + "\n")
            results.append(result)
    else:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            futures = [pool.submit(run_cell, inst, cfg) for inst in instances]
            for future in futures:
                result = future.result()
                csv_out.write(result.csv_row() + "\n")
                results.append(result)
    if md_out is not None:
        md_out.write(render_markdown_table(results, cfg.timeout_s))
    return results


def render_markdown_table(results: Sequence[BenchResult], timeout_s: float) -> str:
    """Pivot results into a markdown table: instance rows, one column per encoding."""
    amos = {r.amo for r in results}
    if all(r.amo == r.amk for r in results):
        key = lambda r: r.amo
    elif len(amos) == 1:
        key = lambda r: r.amk
    else:
        key = lambda r: f"{r.amo}/{r.amk}"

    rows: list[str] = []
    columns: list[str] = []
    cells: dict[tuple[str, str], str] = {}
    for r in results:
        if r.instance not in rows:
            rows.append(r.instance)
        column = key(r)
        if column not in columns:
            columns.append(column)
        if r.verdict == TIMEOUT:
            text = f">{timeout_s:g}"
        elif r.verdict == ERROR:
            text = "err"
        else:
            text = f"{r.total_s:.2f}"
        cells[(r.instance, column)] = text

    lines = ["| P-H-K | " + " | ".join(columns) + " |"]
    lines.append("| --- |" + " --- |" * len(columns))
    for row in rows:
        entries = [cells.get((row, col), "") for col in columns]
        lines.append(f"| {row} | " + " | ".join(entries) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Suite presets mirroring the shape of the two comparison tables

TABLE1_ROWS_SMALL = ((12, 11, 1), (13, 12, 1), (14, 13, 1), (15, 14, 1), (16, 15, 1))
TABLE1_ROWS_LARGE = ((100, 100, 1), (200, 200, 1), (300, 300, 1), (400, 400, 1), (500, 500, 1))
TABLE2_ROWS_SMALL = ((19, 9, 2), (21, 5, 4), (22, 7, 3), (25, 6, 4), (26, 5, 5))
TABLE2_ROWS_LARGE = ((100, 20, 5), (200, 40, 5), (300, 60, 5), (400, 80, 5), (500, 100, 5))

TABLE1_ENCODINGS = ("bs", "pc", "pd", "sc")
TABLE2_ENCODINGS = ("ba", "pc", "sc")
TABLE2_AMO = "pd"  # the at-most-one side is fixed in the at-most-k comparison


def _table1_suite(rows) -> list[PigeonholeInstance]:
    return [
        PigeonholeInstance(p, h, k, amo=e, amk=e)
        for (p, h, k) in rows
        for e in TABLE1_ENCODINGS
    ]


def _table2_suite(rows) -> list[PigeonholeInstance]:
    return [
        PigeonholeInstance(p, h, k, amo=TABLE2_AMO, amk=e)
        for (p, h, k) in rows
        for e in TABLE2_ENCODINGS
    ]


SUITE_PRESETS = {
    "table1-small": lambda: _table1_suite(TABLE1_ROWS_SMALL),
    "table1-large": lambda: _table1_suite(TABLE1_ROWS_LARGE),
    "table2-small": lambda: _table2_suite(TABLE2_ROWS_SMALL),
    "table2-large": lambda: _table2_suite(TABLE2_ROWS_LARGE),
}


def suite_preset(name: str) -> list[PigeonholeInstance]:
    try:
        return SUITE_PRESETS[name]()
    except KeyError:
        raise ValueError(
            f"unknown suite {name!r}; expected one of {', '.join(SUITE_PRESETS)}"
        )


# ---------------------------------------------------------------------------
# key=value config files


def parse_config_text(text: str) -> tuple[SolverConfig, int]:
    """Parse solver/args/timeout/parallel keys; returns (config, parallelism)."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in {"solver", "args", "timeout", "parallel"}:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        values[key] = value.strip()
    if "solver" not in values:
        raise ValueError("config must set solver=<executable path>")
    cfg = SolverConfig(
        executable=values["solver"],
        extra_args=tuple(values.get("args", "").split()),
        timeout_s=float(values.get("timeout", 60.0)),
    )
    return cfg, int(values.get("parallel", 1))


def load_config(path: str) -> tuple[SolverConfig, int]:
    with open(path) as handle:
        return parse_config_text(handle.read())
