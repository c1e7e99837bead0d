"""Acceptance suite: one test per criterion, printing a pass/fail line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
The solver-backed criteria default to the bundled DPLL shim; point AMK_SOLVER
at a real DIMACS solver executable for stronger runs, and AMK_BENCH_TIMEOUT
at a per-cell budget (seconds) for the informational benchmark.
"""

import itertools
import math
import os
import platform
import sys
import time

from amk.bench import SAT, TIMEOUT, UNSAT, SolverConfig, run_cell
from amk.cnf import EncoderContext
from amk.encoders import (
    AMO_ONLY_ENCODINGS,
    ENCODING_NAMES,
    AtMostK,
    count_report,
    encode_binary_adder,
    encode_to_formula,
    valid_bounds,
    _complete_full_adder,
    _complete_half_adder,
    _one_prop_full_adder,
    _one_prop_half_adder,
)
from amk.pigeonhole import PigeonholeInstance, verify_model
from amk.propagation import (
    FIXPOINT,
    Propagator,
    _extendable,
    check_ac_by_up,
    projection_counterexample,
    unit_propagate,
)

from conftest import SHIM_PATH


def _report(criterion: int, ok: bool, detail: str = "") -> bool:
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance {criterion}] {status} {detail}".rstrip())
    return ok


def _info(criterion: int, detail: str) -> None:
    print(f"[acceptance {criterion}] INFO {detail}")


def _solver_config(timeout_s: float) -> SolverConfig:
    override = os.environ.get("AMK_SOLVER")
    if override:
        return SolverConfig(executable=override, timeout_s=timeout_s)
    return SolverConfig(
        executable=sys.executable, extra_args=(SHIM_PATH,), timeout_s=timeout_s
    )


# ---------------------------------------------------------------------------
# 1. Oracle equivalence sweep


def test_c1_oracle_equivalence_sweep():
    started = time.perf_counter()
    failures = []
    for encoding in ENCODING_NAMES:
        for n in range(2, 10):
            for k in valid_bounds(encoding, n):
                formula = encode_to_formula(encoding, n, k)
                witness = projection_counterexample(formula, range(1, n + 1), k)
                if witness is not None:
                    failures.append((encoding, n, k, witness))
    elapsed = time.perf_counter() - started
    ok = not failures and elapsed < 300
    assert _report(
        1,
        ok,
        f"all six encodings projection-equivalent for 1 <= k < n <= 9 "
        f"({elapsed:.1f}s); failures={failures}",
    )


# ---------------------------------------------------------------------------
# 2. Exact size checks (hand-traced, then frozen)


def test_c2_exact_size_checks():
    problems = []
    for n in range(2, 51):
        r = count_report("pw", n, 1)
        if (r.clauses, r.aux_vars) != (n * (n - 1) // 2, 0):
            problems.append(f"pw n={n}: {r}")
    frozen = {
        ("bs", 5, 1): (9, 1),
        ("pd", 9, 1): (24, 6),
        ("sc", 4, 2): (12, 6),
        ("pc", 3, 2): (8, 2),
    }
    for (encoding, n, k), (clauses, aux) in frozen.items():
        r = count_report(encoding, n, k)
        if (r.clauses, r.aux_vars) != (clauses, aux):
            problems.append(f"{encoding} n={n} k={k}: expected {clauses}/{aux}, got {r}")
    assert _report(
        2,
        not problems,
        f"PW quadratic through n=50; BS(5,1)=9/1 PD(9,1)=24/6 SC(4,2)=12/6 "
        f"PC(3,2)=8/2; problems={problems}",
    )


# ---------------------------------------------------------------------------
# 3. Asymptotic envelopes (constants fixed after the first fit)

ENVELOPE_NS = range(10, 201, 10)
ENVELOPE_KS = (2, 5, 10)
BS_ENVELOPE_C = 0.93  # clauses <= c * n * log2(n)
SC_ENVELOPE_C = 2.50  # clauses <= c * n * k
PC_ENVELOPE_C = 3.45  # clauses <= c * n * bit_length(k)
BA_ENVELOPE_C = 6.75  # clauses <= c * n * bit_length(k)


def test_c3_asymptotic_envelopes():
    violations = []
    for n in ENVELOPE_NS:
        r = count_report("bs", n, 1)
        if r.clauses > BS_ENVELOPE_C * n * math.log2(n):
            violations.append(f"bs n={n}: {r.clauses}")
    for n in ENVELOPE_NS:
        for k in ENVELOPE_KS:
            if count_report("sc", n, k).clauses > SC_ENVELOPE_C * n * k:
                violations.append(f"sc n={n} k={k}")
            width = k.bit_length()
            if count_report("pc", n, k).clauses > PC_ENVELOPE_C * n * width:
                violations.append(f"pc n={n} k={k}")
            if count_report("ba", n, k).clauses > BA_ENVELOPE_C * n * width:
                violations.append(f"ba n={n} k={k}")
    assert _report(
        3,
        not violations,
        f"growth within fitted classes over n in 10..200, k in {ENVELOPE_KS}; "
        f"violations={violations}",
    )


# ---------------------------------------------------------------------------
# 4. Adder truth tables


def _satisfied(clauses, assignment):
    return all(any(assignment[abs(l)] == (l > 0) for l in cl) for cl in clauses)


def test_c4_adder_truth_tables():
    problems = []

    ctx = EncoderContext(2)
    s, carry = _complete_half_adder(1, 2, ctx)
    if len(ctx.clauses) != 7:
        problems.append("complete half adder is not 7 clauses")
    for bits in itertools.product([False, True], repeat=4):
        assignment = dict(zip([1, 2, s, carry], bits))
        a, b = assignment[1], assignment[2]
        good = assignment[s] == (a != b) and assignment[carry] == (a and b)
        if _satisfied(ctx.clauses, assignment) != good:
            problems.append(f"complete half adder wrong at {bits}")

    ctx = EncoderContext(3)
    s, carry = _complete_full_adder(1, 2, 3, ctx)
    if len(ctx.clauses) != 10:
        problems.append("complete full adder is not 10 clauses")
    for bits in itertools.product([False, True], repeat=5):
        assignment = dict(zip([1, 2, 3, s, carry], bits))
        total = assignment[1] + assignment[2] + assignment[3]
        good = assignment[s] == bool(total % 2) and assignment[carry] == (total >= 2)
        if _satisfied(ctx.clauses, assignment) != good:
            problems.append(f"complete full adder wrong at {bits}")

    ctx = EncoderContext(2)
    s, carry = _one_prop_half_adder(1, 2, ctx)
    if len(ctx.clauses) != 3:
        problems.append("incomplete half adder is not 3 clauses")
    for a, b in itertools.product([False, True], repeat=2):
        seed = [1 if a else -1, 2 if b else -2]
        outcome = unit_propagate(ctx.clauses, seed)
        expected = {lit for lit, cond in ((s, a != b), (carry, a and b)) if cond}
        if outcome.status != FIXPOINT or outcome.forced != expected:
            problems.append(f"incomplete half adder UP wrong at {(a, b)}")

    ctx = EncoderContext(3)
    s, carry = _one_prop_full_adder(1, 2, 3, ctx)
    if len(ctx.clauses) != 7:
        problems.append("incomplete full adder is not 7 clauses")
    for bits in itertools.product([False, True], repeat=3):
        seed = [v if bit else -v for v, bit in zip([1, 2, 3], bits)]
        outcome = unit_propagate(ctx.clauses, seed)
        total = sum(bits)
        expected = {lit for lit, cond in ((s, total % 2 == 1), (carry, total >= 2)) if cond}
        if outcome.status != FIXPOINT or outcome.forced != expected:
            problems.append(f"incomplete full adder UP wrong at {bits}")

    assert _report(
        4,
        not problems,
        f"complete 7/10-clause adders match their functions exactly; incomplete "
        f"3/7-clause adders force all and only the 1-outputs; problems={problems}",
    )


# ---------------------------------------------------------------------------
# 5. Arc consistency


def test_c5_arc_consistency():
    failures = []
    for n in range(3, 11):
        for k in range(2, n):
            report = check_ac_by_up("sc", n, k)
            if not report.achieves_ac:
                failures.append((n, k, report.witness))
    pc_report = check_ac_by_up("pc", 4, 2)
    if pc_report.achieves_ac:
        _info(5, "DISCREPANCY: pc(4,2) achieved AC by UP; expected a failure "
                 "witness per the incomplete-adder design — investigate")
    else:
        w = pc_report.witness
        _info(
            5,
            f"pc(4,2) does not achieve AC by UP (as expected): seeding "
            f"{sorted(w.seed_vars)} leaves {w.unforced} unforced",
        )
    assert _report(
        5,
        not failures,
        f"sc achieves AC by UP for all 2 <= k < n <= 10; failures={failures}",
    )


# ---------------------------------------------------------------------------
# 6. Pigeonhole verdicts through the external solver

# Boundary instances on both sides of P = H*K, all within P, H <= 8. Every
# (amo, amk) pair is exercised: 36 pairs at K=1, 18 general pairs at K>1.
VERDICT_GRID_K1 = ((3, 3, 1), (4, 3, 1), (5, 5, 1), (6, 5, 1))
VERDICT_GRID_K2 = ((6, 3, 2), (7, 3, 2), (5, 2, 2), (8, 4, 2))
VERDICT_GRID_K3 = ((6, 2, 3), (7, 2, 3))
VERDICT_SPOT = (
    (7, 6, 1, "pd", "pd"),
    (8, 7, 1, "pw", "pw"),
    (8, 8, 1, "bs", "bs"),
)
GENERAL_ENCODINGS = tuple(e for e in ENCODING_NAMES if e not in AMO_ONLY_ENCODINGS)


def test_c6_pigeonhole_verdicts():
    cfg = _solver_config(timeout_s=60.0)
    instances = []
    for p, h, k in VERDICT_GRID_K1:
        for amo in ENCODING_NAMES:
            for amk in ENCODING_NAMES:
                instances.append(PigeonholeInstance(p, h, k, amo=amo, amk=amk))
    for grid in (VERDICT_GRID_K2, VERDICT_GRID_K3):
        for p, h, k in grid:
            for amo in ENCODING_NAMES:
                for amk in GENERAL_ENCODINGS:
                    instances.append(PigeonholeInstance(p, h, k, amo=amo, amk=amk))
    for p, h, k, amo, amk in VERDICT_SPOT:
        instances.append(PigeonholeInstance(p, h, k, amo=amo, amk=amk))

    failures = []
    started = time.perf_counter()
    for inst in instances:
        result = run_cell(inst, cfg)
        expected = SAT if inst.satisfiable else UNSAT
        if result.verdict != expected:
            failures.append(f"{inst.label} {inst.amo}/{inst.amk}: "
                            f"{result.verdict} != {expected} {result.message}")
        elif result.verdict == SAT:
            if result.model is None or not verify_model(inst, result.model):
                failures.append(f"{inst.label} {inst.amo}/{inst.amk}: bad SAT model")
    elapsed = time.perf_counter() - started
    assert _report(
        6,
        not failures,
        f"{len(instances)} cells, verdict == (P <= H*K) and SAT models verify "
        f"({elapsed:.1f}s); failures={failures}",
    )


# ---------------------------------------------------------------------------
# 7. Desk-scale directional benchmark (informational, never fails the build)


def test_c7_directional_benchmark():
    timeout = float(os.environ.get("AMK_BENCH_TIMEOUT", "20"))
    cfg = _solver_config(timeout_s=timeout)
    _info(
        7,
        f"host: {platform.platform()}, python {platform.python_version()}, "
        f"{os.cpu_count()} cpus, solver={cfg.executable} {' '.join(cfg.extra_args)}, "
        f"timeout {timeout:g}s per cell",
    )
    totals = {}
    for p, h, k in ((21, 5, 4), (26, 5, 5)):
        for amk in ("ba", "pc"):
            inst = PigeonholeInstance(p, h, k, amo="pd", amk=amk)
            result = run_cell(inst, cfg)
            totals[(inst.label, amk)] = (result.verdict, result.total_s)
            _info(
                7,
                f"{inst.label} amk={amk}: verdict={result.verdict} "
                f"encode={result.encode_s:.2f}s solve={result.solve_s:.2f}s",
            )
    for label in ("21-5-4", "26-5-5"):
        ba_verdict, ba_total = totals[(label, "ba")]
        pc_verdict, pc_total = totals[(label, "pc")]
        if TIMEOUT in (ba_verdict, pc_verdict):
            _info(
                7,
                f"{label}: comparison inconclusive on this solver/host "
                f"(ba={ba_verdict}, pc={pc_verdict})",
            )
        elif ba_total <= pc_total:
            _info(7, f"{label}: ba total {ba_total:.2f}s <= pc total {pc_total:.2f}s")
        else:
            _info(
                7,
                f"{label}: ba total {ba_total:.2f}s EXCEEDS pc total {pc_total:.2f}s "
                f"— differs from the expected ordering on this solver/host",
            )
    _report(7, True, "informational benchmark logged (never gates the build)")


# ---------------------------------------------------------------------------
# 8. Binary-adder redundancy ablation


def test_c8_binary_adder_ablation():
    failures = []
    for n in range(2, 11):
        inputs = tuple(range(1, n + 1))
        for k in range(1, n):
            full_ctx = EncoderContext(n)
            encode_binary_adder(AtMostK(inputs, k), full_ctx)
            ablated_ctx = EncoderContext(n)
            encode_binary_adder(
                AtMostK(inputs, k), ablated_ctx, intermediate_comparators=False
            )
            full = Propagator(full_ctx.clauses)
            ablated = Propagator(ablated_ctx.clauses)
            assignment_full: dict = {}
            assignment_ablated: dict = {}
            for bits in itertools.product([False, True], repeat=n):
                seed = [v if bit else -v for v, bit in zip(inputs, bits)]
                expected = sum(bits) <= k
                ext_full = _extendable(full, assignment_full, seed)
                ext_ablated = _extendable(ablated, assignment_ablated, seed)
                if ext_ablated != expected:
                    failures.append(f"ablated n={n} k={k} at {bits}")
                    break
                if ext_full != ext_ablated:
                    failures.append(f"full/ablated disagree n={n} k={k} at {bits}")
                    break
    assert _report(
        8,
        not failures,
        "removing intermediate comparators preserves equivalence on n <= 10 and "
        f"the full formula never loses models; failures={failures}",
    )
