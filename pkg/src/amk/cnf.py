"""Core CNF machinery: clauses, formulas, fresh-variable allocation, DIMACS I/O.

Literals follow the DIMACS convention throughout: a literal is a nonzero
int whose absolute value is the 1-based variable id and whose sign is the
polarity, so negation is plain integer negation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Optional


class EmptyClauseError(ValueError):
    """An empty clause was emitted, i.e. upstream constant folding went inconsistent."""


class DimacsParseError(ValueError):
    """Malformed DIMACS input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def normalize_clause(lits: Iterable[int]) -> Optional[tuple[int, ...]]:
    """Drop duplicate literals (keeping first occurrence); None for tautologies."""
    out: list[int] = []
    for lit in lits:
        if lit == 0:
            raise ValueError("0 is not a literal (reserved as the DIMACS terminator)")
        if -lit in out:
            return None
        if lit not in out:
            out.append(lit)
    return tuple(out)


@dataclass(frozen=True)
class CnfFormula:
    """Immutable CNF: clause tuples plus comment lines (stored without the 'c ' prefix)."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    comments: tuple[str, ...] = ()

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def max_var_referenced(self) -> int:
        return max((abs(lit) for cl in self.clauses for lit in cl), default=0)


class EncoderContext:
    """Fresh-variable allocator plus clause sink shared by all encoders.

    Problem variables own ids 1..num_problem_vars; every id handed out by
    fresh_var comes after them. Contexts are single-owner and not thread safe.
    """

    def __init__(self, num_problem_vars: int = 0):
        if num_problem_vars < 0:
            raise ValueError("num_problem_vars must be >= 0")
        self.num_problem_vars = num_problem_vars
        self._next_var = num_problem_vars + 1
        self.clauses: list[tuple[int, ...]] = []
        self.warnings: list[str] = []

    @property
    def next_var(self) -> int:
        return self._next_var

    @property
    def aux_var_count(self) -> int:
        return self._next_var - 1 - self.num_problem_vars

    def fresh_var(self) -> int:
        """Allocate a new variable; returns it as a positive literal."""
        var = self._next_var
        self._next_var += 1
        return var

    def fresh_vars(self, count: int) -> list[int]:
        return [self.fresh_var() for _ in range(count)]

    def emit_clause(self, lits: Iterable[int]) -> None:
        """Append a clause after duplicate removal; tautologies are dropped silently."""
        lits = tuple(lits)
        if not lits:
            raise EmptyClauseError("refusing to emit the empty clause")
        clause = normalize_clause(lits)
        if clause is not None:
            self.clauses.append(clause)

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def to_formula(self, comments: Iterable[str] = ()) -> CnfFormula:
        """Finalize into an immutable formula covering every allocated variable."""
        return CnfFormula(self._next_var - 1, tuple(self.clauses), tuple(comments))


def dimacs_str(formula: CnfFormula) -> str:
    """Render in DIMACS CNF format: comments, `p cnf` header, 0-terminated clauses."""
    lines = [f"c {text}" for text in formula.comments]
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def write_dimacs(formula: CnfFormula, out: IO[str]) -> None:
    out.write(dimacs_str(formula))


def read_dimacs(source: IO[str] | Iterable[str]) -> CnfFormula:
    """Parse DIMACS CNF text, validating the header counts against the body.

    Clauses are normalized on the way in (duplicate literals dropped,
    tautologies removed), which is a no-op for files produced by write_dimacs.
    """
    num_vars: Optional[int] = None
    declared_clauses = 0
    raw_count = 0
    clauses: list[tuple[int, ...]] = []
    comments: list[str] = []
    pending: list[int] = []

    lineno = 0
    for lineno, line in enumerate(source, start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[2:] if line.startswith("c ") else line[1:])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"malformed header {line!r}", lineno)
            try:
                num_vars = int(parts[2])
                declared_clauses = int(parts[3])
            except ValueError:
                raise DimacsParseError(f"non-numeric header counts in {line!r}", lineno)
            if num_vars < 0 or declared_clauses < 0:
                raise DimacsParseError("negative header counts", lineno)
            continue
        if num_vars is None:
            raise DimacsParseError(f"clause data before header: {line!r}", lineno)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsParseError(f"bad literal {token!r}", lineno)
            if lit == 0:
                if not pending:
                    raise DimacsParseError("empty clause", lineno)
                raw_count += 1
                clause = normalize_clause(pending)
                if clause is not None:
                    clauses.append(clause)
                pending = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsParseError(
                        f"literal {lit} exceeds declared variable count {num_vars}", lineno
                    )
                pending.append(lit)

    if pending:
        raise DimacsParseError("missing 0 terminator on final clause", lineno)
    if num_vars is None:
        raise DimacsParseError("no header line found")
    if raw_count != declared_clauses:
        raise DimacsParseError(
            f"header declares {declared_clauses} clauses but body has {raw_count}"
        )
    return CnfFormula(num_vars, tuple(clauses), tuple(comments))


def iter_literals(formula: CnfFormula) -> Iterator[int]:
    for clause in formula.clauses:
        yield from clause
