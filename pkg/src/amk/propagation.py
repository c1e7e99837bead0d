"""Unit propagation, DPLL search, and brute-force equivalence oracles.

An assignment is a dict mapping variable id to bool; absent means
unassigned. The oracles here deliberately favor simplicity over speed:
they exist to check encodings exhaustively at small n, not to compete
with real solvers.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .cnf import CnfFormula
from .encoders import encode_to_formula

FIXPOINT = "fixpoint"
CONFLICT = "conflict"

ORACLE_LIMIT = 12
AC_EXHAUSTIVE_LIMIT = 10
AC_SAMPLE_SIZE = 1000


class OracleLimitError(ValueError):
    """Exhaustive enumeration was refused because n exceeds the configured limit."""


@dataclass(frozen=True)
class UpOutcome:
    """Result of running unit propagation to its fixpoint."""

    status: str  # FIXPOINT or CONFLICT
    forced: frozenset[int]  # literals derived beyond the seed


def _clauses_of(source: CnfFormula | Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    if isinstance(source, CnfFormula):
        return list(source.clauses)
    return [tuple(cl) for cl in source]


class Propagator:
    """Occurrence-list unit propagation over a fixed clause list.

    Built once per formula and reused across many seeds; propagation state
    lives in the caller's assignment dict so backtracking is a matter of
    undoing a trail.
    """

    def __init__(self, clauses: CnfFormula | Iterable[Sequence[int]]):
        self.clauses = _clauses_of(clauses)
        self.watch: dict[int, list[int]] = {}
        for idx, clause in enumerate(self.clauses):
            for lit in clause:
                self.watch.setdefault(lit, []).append(idx)
        self.initial_units = [cl[0] for cl in self.clauses if len(cl) == 1]
        self.variables = sorted({abs(lit) for cl in self.clauses for lit in cl})

    def _clause_state(self, idx: int, assignment: dict[int, bool]):
        """Returns ('sat', None), ('open', None), ('unit', lit) or ('conflict', None)."""
        unassigned = None
        for lit in self.clauses[idx]:
            value = assignment.get(abs(lit))
            if value is None:
                if unassigned is not None:
                    return "open", None
                unassigned = lit
            elif value == (lit > 0):
                return "sat", None
        if unassigned is None:
            return "conflict", None
        return "unit", unassigned

    def propagate(
        self,
        assignment: dict[int, bool],
        pending: Iterable[int],
        trail: list[int],
    ) -> bool:
        """Drive assignment to the unit-propagation fixpoint; False on conflict.

        `pending` holds literals just made true whose consequences are still
        unprocessed. Every newly forced literal is appended to `trail` (and
        assigned), so callers can undo.
        """
        queue = deque(pending)
        while queue:
            lit = queue.popleft()
            for idx in self.watch.get(-lit, ()):
                state, unit = self._clause_state(idx, assignment)
                if state == "conflict":
                    return False
                if state == "unit":
                    assignment[abs(unit)] = unit > 0
                    trail.append(unit)
                    queue.append(unit)
        return True

    def assume(
        self, assignment: dict[int, bool], seed: Iterable[int], trail: list[int]
    ) -> bool:
        """Assign seed literals plus the formula's unit clauses, then propagate."""
        pending = []
        for lit in itertools.chain(seed, self.initial_units):
            current = assignment.get(abs(lit))
            if current is None:
                assignment[abs(lit)] = lit > 0
                trail.append(lit)
                pending.append(lit)
            elif current != (lit > 0):
                return False
        return self.propagate(assignment, pending, trail)


def _as_literals(seed) -> list[int]:
    if isinstance(seed, dict):
        return [var if value else -var for var, value in seed.items()]
    return list(seed)


def unit_propagate(
    clauses: CnfFormula | Iterable[Sequence[int]], seed=()
) -> UpOutcome:
    """Least fixpoint of unit resolution from the seed assignment.

    The seed may be a dict {var: bool} or an iterable of literals; it must be
    self-consistent. The result is order-independent: the fixpoint is unique.
    """
    seed_lits = _as_literals(seed)
    if any(-lit in seed_lits for lit in seed_lits):
        raise ValueError("inconsistent seed assignment")
    prop = Propagator(clauses)
    assignment: dict[int, bool] = {}
    trail: list[int] = []
    ok = prop.assume(assignment, seed_lits, trail)
    forced = frozenset(trail) - frozenset(seed_lits)
    return UpOutcome(FIXPOINT if ok else CONFLICT, forced)


def _undo(assignment: dict[int, bool], trail: list[int], mark: int) -> None:
    while len(trail) > mark:
        del assignment[abs(trail.pop())]


def _search(prop: Propagator, assignment: dict[int, bool], trail: list[int]) -> bool:
    """DPLL over the propagator's variables; leaves a model in assignment on success."""
    branch_var = None
    for var in prop.variables:
        if var not in assignment:
            branch_var = var
            break
    if branch_var is None:
        return True
    for value in (True, False):
        mark = len(trail)
        lit = branch_var if value else -branch_var
        assignment[branch_var] = value
        trail.append(lit)
        if prop.propagate(assignment, [lit], trail) and _search(prop, assignment, trail):
            return True
        _undo(assignment, trail, mark)
    return False


def solve(
    clauses: CnfFormula | Iterable[Sequence[int]], seed=()
) -> Optional[dict[int, bool]]:
    """Complete DPLL satisfiability check; a model dict or None.

    Variables not occurring in any clause come back False. With a seed, the
    search decides whether the seed extends to a model.
    """
    prop = Propagator(clauses)
    assignment: dict[int, bool] = {}
    trail: list[int] = []
    if not prop.assume(assignment, _as_literals(seed), trail):
        return None
    if not _search(prop, assignment, trail):
        return None
    model = dict(assignment)
    if isinstance(clauses, CnfFormula):
        for var in range(1, clauses.num_vars + 1):
            model.setdefault(var, False)
    return model


def _extendable(prop: Propagator, assignment: dict[int, bool], seed: list[int]) -> bool:
    trail: list[int] = []
    ok = prop.assume(assignment, seed, trail) and _search(prop, assignment, trail)
    _undo(assignment, trail, 0)
    return ok


def projection_counterexample(
    clauses: CnfFormula | Iterable[Sequence[int]],
    input_vars: Sequence[int],
    k: int,
    limit: int = ORACLE_LIMIT,
) -> Optional[dict[int, bool]]:
    """First input assignment where extendability disagrees with popcount <= k.

    Enumerates all 2^n assignments of the input variables; extendability over
    the auxiliaries is decided by DPLL with unit propagation. None means the
    clause set is projection-equivalent to the cardinality constraint.
    """
    input_vars = list(input_vars)
    n = len(input_vars)
    if n > limit:
        raise OracleLimitError(
            f"exhaustive oracle refuses n={n} > limit {limit}; sample instead"
        )
    prop = Propagator(clauses)
    assignment: dict[int, bool] = {}
    for bits in itertools.product((False, True), repeat=n):
        seed = [var if bit else -var for var, bit in zip(input_vars, bits)]
        expected = sum(bits) <= k
        if _extendable(prop, assignment, seed) != expected:
            return dict(zip(input_vars, bits))
    return None


def oracle_equivalent(encoding: str, n: int, k: int, limit: int = ORACLE_LIMIT) -> bool:
    """True iff the encoding is projection-equivalent to at-most-k at this size."""
    formula = encode_to_formula(encoding, n, k)
    return projection_counterexample(formula, range(1, n + 1), k, limit) is None


@dataclass(frozen=True)
class AcWitness:
    """A seed that unit propagation failed on: either a literal left unforced
    (unforced holds the literal that should have been derived) or a conflict."""

    seed_vars: tuple[int, ...]
    unforced: Optional[int]
    conflict: bool = False


@dataclass(frozen=True)
class AcReport:
    """Whether unit propagation enforces the cardinality bound on its own.

    achieves_ac means: for every tested seed of k true inputs, propagation
    alone forced all remaining inputs false.
    """

    encoding: str
    n: int
    k: int
    achieves_ac: bool
    witness: Optional[AcWitness]
    seeds_checked: int
    exhaustive: bool


def check_ac_by_up(
    encoding: str,
    n: int,
    k: int,
    seed: int = 0,
    sample_size: int = AC_SAMPLE_SIZE,
    exhaustive_limit: int = AC_EXHAUSTIVE_LIMIT,
) -> AcReport:
    """Seed every k-subset of inputs true, propagate, and demand the rest false.

    Exhaustive over all k-subsets for n <= exhaustive_limit; above that,
    sample_size subsets are drawn from a fixed-seed generator for
    reproducibility.
    """
    formula = encode_to_formula(encoding, n, k)
    prop = Propagator(formula)
    inputs = list(range(1, n + 1))

    exhaustive = n <= exhaustive_limit
    if exhaustive:
        subsets: Iterable[tuple[int, ...]] = itertools.combinations(inputs, k)
    else:
        rng = random.Random(seed)
        subsets = (tuple(sorted(rng.sample(inputs, k))) for _ in range(sample_size))

    checked = 0
    assignment: dict[int, bool] = {}
    for subset in subsets:
        checked += 1
        trail: list[int] = []
        ok = prop.assume(assignment, list(subset), trail)
        if not ok:
            _undo(assignment, trail, 0)
            witness = AcWitness(subset, None, conflict=True)
            return AcReport(encoding, n, k, False, witness, checked, exhaustive)
        missing = None
        for var in inputs:
            if var not in subset and assignment.get(var) is not False:
                missing = -var
                break
        _undo(assignment, trail, 0)
        if missing is not None:
            witness = AcWitness(subset, missing)
            return AcReport(encoding, n, k, False, witness, checked, exhaustive)
    return AcReport(encoding, n, k, True, None, checked, exhaustive)
