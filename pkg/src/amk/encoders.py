"""CNF encodings for at-most-k cardinality constraints.

Six encodings are provided. Three handle only the at-most-one case (pw,
bs, pd); three handle any bound (sc, pc, ba). The binary-counter encodings
share ripple-carry adder builders and a most-significant-bit-first
comparator against a constant bound.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .cnf import CnfFormula, EncoderContext


class EncodingError(ValueError):
    """Invalid (encoding, n, k) combination."""


@dataclass(frozen=True)
class AtMostK:
    """At most k of the given literals may be true.

    Literals must be over pairwise-distinct variables. Bounds k >= n are
    accepted (the constraint is then vacuous) so callers never have to
    special-case capacity larger than population.
    """

    lits: tuple[int, ...]
    k: int

    def __init__(self, lits: Sequence[int], k: int):
        lits = tuple(lits)
        if not lits:
            raise ValueError("at least one literal is required")
        if any(lit == 0 for lit in lits):
            raise ValueError("0 is not a literal")
        if len({abs(lit) for lit in lits}) != len(lits):
            raise ValueError("literals must be over pairwise-distinct variables")
        if k < 0:
            raise ValueError(f"bound must be >= 0, got {k}")
        object.__setattr__(self, "lits", lits)
        object.__setattr__(self, "k", k)

    @property
    def n(self) -> int:
        return len(self.lits)


def _handle_trivial_bound(constraint: AtMostK, ctx: EncoderContext) -> bool:
    """Shared degenerate cases: k = 0 pins every literal false, k >= n is vacuous."""
    if constraint.k == 0:
        for lit in constraint.lits:
            ctx.emit_clause([-lit])
        return True
    if constraint.k >= constraint.n:
        ctx.warn(
            f"at-most-{constraint.k} over {constraint.n} literals is trivially true;"
            " nothing emitted"
        )
        return True
    return False


def _require_amo(constraint: AtMostK, name: str) -> None:
    if constraint.k != 1:
        raise EncodingError(f"{name} supports k=1 only, got k={constraint.k}")


# ---------------------------------------------------------------------------
# At-most-one encodings


def encode_pairwise(constraint: AtMostK, ctx: EncoderContext) -> None:
    """One binary clause per pair: n(n-1)/2 clauses, no new variables."""
    _require_amo(constraint, "pw")
    if _handle_trivial_bound(constraint, ctx):
        return
    lits = constraint.lits
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            ctx.emit_clause([-lits[i], -lits[j]])


def _pairwise_over(lits: Sequence[int], ctx: EncoderContext) -> None:
    for i in range(len(lits)):
        for j in range(i + 1, len(lits)):
            ctx.emit_clause([-lits[i], -lits[j]])


def encode_bisect(constraint: AtMostK, ctx: EncoderContext) -> None:
    """Split the literals in half around a fresh commander variable, recursing.

    The first half implies the commander, the second half its negation, so
    no two literals from different halves can hold together. Groups of at
    most 4 fall back to the pairwise clauses.
    """
    _require_amo(constraint, "bs")
    if _handle_trivial_bound(constraint, ctx):
        return
    _bisect(constraint.lits, ctx)


def _bisect(lits: Sequence[int], ctx: EncoderContext) -> None:
    n = len(lits)
    if n <= 4:
        _pairwise_over(lits, ctx)
        return
    half = n // 2
    commander = ctx.fresh_var()
    for lit in lits[:half]:
        ctx.emit_clause([-lit, commander])
    for lit in lits[half:]:
        ctx.emit_clause([-lit, -commander])
    _bisect(lits[:half], ctx)
    _bisect(lits[half:], ctx)


def encode_product(constraint: AtMostK, ctx: EncoderContext) -> None:
    """Lay the literals on a square grid with fresh row/column selector variables.

    Each literal implies its row and column selector; at-most-one is then
    enforced recursively on the selectors. Grid cells past n stay empty and
    emit nothing. Groups of at most 4 fall back to the pairwise clauses.
    """
    _require_amo(constraint, "pd")
    if _handle_trivial_bound(constraint, ctx):
        return
    _product(constraint.lits, ctx)


def _product(lits: Sequence[int], ctx: EncoderContext) -> None:
    n = len(lits)
    if n <= 4:
        _pairwise_over(lits, ctx)
        return
    side = math.isqrt(n)
    if side * side < n:
        side += 1
    rows = ctx.fresh_vars(side)
    cols = ctx.fresh_vars(side)
    for i, lit in enumerate(lits):
        ctx.emit_clause([-lit, rows[i // side]])
        ctx.emit_clause([-lit, cols[i % side]])
    _product(rows, ctx)
    _product(cols, ctx)


# ---------------------------------------------------------------------------
# Sequential counter


def encode_sequential_counter(constraint: AtMostK, ctx: EncoderContext) -> None:
    """Unary running count with k bits per position; O(nk) clauses and variables.

    count[i][j] (0-based) reads "at least j+1 of the first i+1 literals hold".
    The first counter is pinned to its literal; each later counter copies the
    previous one and bumps it when its literal holds; any literal that would
    push the count past k is forbidden.
    """
    if _handle_trivial_bound(constraint, ctx):
        return
    xs = constraint.lits
    n, k = constraint.n, constraint.k
    count = [ctx.fresh_vars(k) for _ in range(n - 1)]

    ctx.emit_clause([-xs[0], count[0][0]])
    for j in range(1, k):
        ctx.emit_clause([-count[0][j]])
    for i in range(1, n - 1):
        ctx.emit_clause([-xs[i], count[i][0]])
    for i in range(1, n - 1):
        for j in range(k):
            ctx.emit_clause([-count[i - 1][j], count[i][j]])
    for i in range(1, n - 1):
        for j in range(1, k):
            ctx.emit_clause([-xs[i], -count[i - 1][j - 1], count[i][j]])
    for i in range(k, n):
        ctx.emit_clause([-xs[i], -count[i - 1][k - 1]])


# ---------------------------------------------------------------------------
# Adder circuits

# A binary number is a list of literals, least-significant bit first.
BinaryNumber = list


def _one_prop_half_adder(a: int, b: int, ctx: EncoderContext) -> tuple[int, int]:
    """3 clauses forcing only the 1-outputs of sum = a xor b, carry = a and b."""
    s = ctx.fresh_var()
    carry = ctx.fresh_var()
    ctx.emit_clause([-a, -b, carry])
    ctx.emit_clause([-a, b, s])
    ctx.emit_clause([a, -b, s])
    return s, carry


def _one_prop_full_adder(a: int, b: int, d: int, ctx: EncoderContext) -> tuple[int, int]:
    """7 clauses forcing only the 1-outputs: 4 odd-parity sum rows, 3 carry pairs."""
    s = ctx.fresh_var()
    carry = ctx.fresh_var()
    ctx.emit_clause([-a, b, d, s])
    ctx.emit_clause([a, -b, d, s])
    ctx.emit_clause([a, b, -d, s])
    ctx.emit_clause([-a, -b, -d, s])
    ctx.emit_clause([-a, -b, carry])
    ctx.emit_clause([-a, -d, carry])
    ctx.emit_clause([-b, -d, carry])
    return s, carry


def _complete_half_adder(a: int, b: int, ctx: EncoderContext) -> tuple[int, int]:
    """7 clauses: sum <-> a xor b (4 clauses) and carry <-> a and b (3 clauses)."""
    s = ctx.fresh_var()
    carry = ctx.fresh_var()
    ctx.emit_clause([-a, -b, -s])
    ctx.emit_clause([a, b, -s])
    ctx.emit_clause([a, -b, s])
    ctx.emit_clause([-a, b, s])
    ctx.emit_clause([-a, -b, carry])
    ctx.emit_clause([a, -carry])
    ctx.emit_clause([b, -carry])
    return s, carry

# Minimum CNF characterizing the full-adder relation over (a, b, d, s, carry):
# s is the parity of the inputs and carry their majority. Derived by exact set
# cover over the prime implicates of the relation; the test suite re-checks it
# against the 2^5 truth table.
_FULL_ADDER_RELATION = (
    ("a", "b", "-carry"),
    ("-a", "-b", "carry"),
    ("d", "-s", "-carry"),
    ("-d", "s", "carry"),
    ("a", "b", "d", "-s"),
    ("a", "-b", "d", "s"),
    ("a", "-b", "-d", "-s"),
    ("-a", "b", "d", "s"),
    ("-a", "b", "-d", "-s"),
    ("-a", "-b", "-d", "s"),
)


def _complete_full_adder(a: int, b: int, d: int, ctx: EncoderContext) -> tuple[int, int]:
    """10 clauses pinning sum and carry exactly (propagates 0s as well as 1s)."""
    s = ctx.fresh_var()
    carry = ctx.fresh_var()
    names = {"a": a, "b": b, "d": d, "s": s, "carry": carry}
    for clause in _FULL_ADDER_RELATION:
        ctx.emit_clause(
            [-names[t[1:]] if t.startswith("-") else names[t] for t in clause]
        )
    return s, carry


def _ripple_add(
    left: BinaryNumber,
    right: BinaryNumber,
    ctx: EncoderContext,
    half_adder: Callable,
    full_adder: Callable,
) -> BinaryNumber:
    """Add two binary numbers column by column, appending the final carry."""
    out: BinaryNumber = []
    carry: Optional[int] = None
    for pos in range(max(len(left), len(right))):
        column = [num[pos] for num in (left, right) if pos < len(num)]
        if carry is not None:
            column.append(carry)
        if len(column) == 3:
            s, carry = full_adder(column[0], column[1], column[2], ctx)
        elif len(column) == 2:
            s, carry = half_adder(column[0], column[1], ctx)
        else:
            s, carry = column[0], None
        out.append(s)
    if carry is not None:
        out.append(carry)
    return out


def _truncate(bits: BinaryNumber, max_width: Optional[int], ctx: EncoderContext) -> BinaryNumber:
    """Pin bits above max_width to 0 (escaping carries can never be genuine 1s)."""
    if max_width is None or len(bits) <= max_width:
        return bits
    for bit in reversed(bits[max_width:]):
        ctx.emit_clause([-bit])
    return bits[:max_width]


def build_incomplete_sum(
    xs: Sequence[int], ctx: EncoderContext, max_width: Optional[int] = None
) -> BinaryNumber:
    """Binary counter of the true literals in xs, built from 1-propagating adders.

    Pairs go through a half adder, triples through a full adder, longer runs
    split in half and the recursive sums combine through a ripple-carry adder.
    In any model the counter's value is >= the true count, and equality is
    always achievable, which is what the downstream comparator needs.
    """
    xs = list(xs)
    if not xs:
        raise ValueError("cannot sum zero literals")
    if len(xs) == 1:
        return _truncate([xs[0]], max_width, ctx)
    if len(xs) == 2:
        s, carry = _one_prop_half_adder(xs[0], xs[1], ctx)
        return _truncate([s, carry], max_width, ctx)
    if len(xs) == 3:
        s, carry = _one_prop_full_adder(xs[0], xs[1], xs[2], ctx)
        return _truncate([s, carry], max_width, ctx)
    mid = (len(xs) + 1) // 2
    left = build_incomplete_sum(xs[:mid], ctx, max_width)
    right = build_incomplete_sum(xs[mid:], ctx, max_width)
    total = _ripple_add(left, right, ctx, _one_prop_half_adder, _one_prop_full_adder)
    return _truncate(total, max_width, ctx)


def encode_leq_const(bits: BinaryNumber, bound: int, ctx: EncoderContext) -> None:
    """Forbid every value of the counter above the bound.

    Works most-significant bit first: bits beyond the bound's width are pinned
    to 0 by unit clauses; for each 0-bit position of the bound, one clause
    rules out a 1 there together with 1s at every higher 1-bit of the bound.
    """
    if bound < 0:
        raise ValueError(f"bound must be >= 0, got {bound}")
    if bound >= 1 << len(bits):
        return
    width = bound.bit_length()
    for pos in range(len(bits) - 1, width - 1, -1):
        ctx.emit_clause([-bits[pos]])
    ones = [pos for pos in range(width) if bound >> pos & 1]
    for pos in range(width - 1, -1, -1):
        if bound >> pos & 1:
            continue
        ctx.emit_clause([-bits[pos]] + [-bits[p] for p in ones if p > pos])


def encode_parallel_counter(constraint: AtMostK, ctx: EncoderContext) -> None:
    """Binary counter from 1-propagating adders, compared against the bound.

    The counter is kept just wide enough to represent k; carries that would
    escape that width are pinned to 0, and only the final counter gets a
    comparator. Clause and variable counts are O(n * width).
    """
    if _handle_trivial_bound(constraint, ctx):
        return
    width = constraint.k.bit_length()
    counter = build_incomplete_sum(constraint.lits, ctx, max_width=width)
    encode_leq_const(counter, constraint.k, ctx)


def encode_binary_adder(
    constraint: AtMostK,
    ctx: EncoderContext,
    intermediate_comparators: bool = True,
    comparator_spans: Optional[list] = None,
) -> None:
    """Combine the narrowest partial sums with complete adders, bounding each.

    A worklist (keyed by bit width, FIFO on ties) starts from the n one-bit
    inputs. Each step adds the two narrowest numbers with complete ripple-carry
    adders, pins escaping carries to 0, and emits a comparator against k for
    the new number, until a single number remains. The intermediate
    comparators are redundant but aid propagation; pass
    intermediate_comparators=False to keep only the final one.

    When comparator_spans is a list, (start, end, is_final) clause-index
    spans of each comparator emission are appended to it.
    """
    if _handle_trivial_bound(constraint, ctx):
        return
    width = constraint.k.bit_length()
    heap: list[tuple[int, int, BinaryNumber]] = []
    for seq, lit in enumerate(constraint.lits):
        heapq.heappush(heap, (1, seq, [lit]))
    seq = len(constraint.lits)
    while len(heap) > 1:
        _, _, left = heapq.heappop(heap)
        _, _, right = heapq.heappop(heap)
        total = _ripple_add(left, right, ctx, _complete_half_adder, _complete_full_adder)
        total = _truncate(total, width, ctx)
        is_final = not heap
        if intermediate_comparators or is_final:
            start = len(ctx.clauses)
            encode_leq_const(total, constraint.k, ctx)
            if comparator_spans is not None:
                comparator_spans.append((start, len(ctx.clauses), is_final))
        heapq.heappush(heap, (len(total), seq, total))
        seq += 1


# ---------------------------------------------------------------------------
# Shared helpers and dispatch


def encode_at_least_one(lits: Sequence[int], ctx: EncoderContext) -> None:
    """Single clause requiring one of the literals; pair with any AMO for exactly-one."""
    ctx.emit_clause(list(lits))


ENCODERS: dict[str, Callable[[AtMostK, EncoderContext], None]] = {
    "pw": encode_pairwise,
    "bs": encode_bisect,
    "pd": encode_product,
    "sc": encode_sequential_counter,
    "pc": encode_parallel_counter,
    "ba": encode_binary_adder,
}

ENCODING_NAMES: tuple[str, ...] = tuple(ENCODERS)
AMO_ONLY_ENCODINGS = frozenset({"pw", "bs", "pd"})


def get_encoder(name: str) -> Callable[[AtMostK, EncoderContext], None]:
    try:
        return ENCODERS[name]
    except KeyError:
        raise EncodingError(
            f"unknown encoding {name!r}; expected one of {', '.join(ENCODING_NAMES)}"
        )


def encode(name: str, constraint: AtMostK, ctx: EncoderContext) -> None:
    """Dispatch to the named encoder."""
    get_encoder(name)(constraint, ctx)


def check_bound(name: str, n: int, k: int) -> None:
    """Raise EncodingError for combinations the named encoding cannot express."""
    get_encoder(name)
    if n < 1:
        raise EncodingError(f"need at least one literal, got n={n}")
    if k < 0:
        raise EncodingError(f"bound must be >= 0, got k={k}")
    if name in AMO_ONLY_ENCODINGS and k != 1:
        raise EncodingError(f"{name} supports k=1 only, got k={k}")


def valid_bounds(name: str, n: int) -> list[int]:
    """The non-degenerate bounds the named encoding accepts for n literals."""
    if name in AMO_ONLY_ENCODINGS:
        return [1] if n > 1 else []
    return list(range(1, n))


def encode_to_formula(
    name: str, n: int, k: int, warning_sink: Optional[list] = None
) -> CnfFormula:
    """Encode at-most-k over fresh problem variables 1..n into a finished formula.

    The comment header records the encoding, n, k, and the problem-variable id
    range so downstream tools can project models back onto the inputs. Warnings
    about degenerate bounds are appended to warning_sink when given.
    """
    check_bound(name, n, k)
    ctx = EncoderContext(n)
    encode(name, AtMostK(tuple(range(1, n + 1)), k), ctx)
    if warning_sink is not None:
        warning_sink.extend(ctx.warnings)
    comment = f"amk encoding={name} n={n} k={k} xvars=1..{n}"
    return ctx.to_formula([comment])


@dataclass(frozen=True)
class CountReport:
    """Exact emission size of one encoder run."""

    encoding: str
    n: int
    k: int
    aux_vars: int
    clauses: int


def count_report(name: str, n: int, k: int) -> CountReport:
    """Run the named encoder against a throwaway context and count its output."""
    check_bound(name, n, k)
    ctx = EncoderContext(n)
    encode(name, AtMostK(tuple(range(1, n + 1)), k), ctx)
    return CountReport(name, n, k, ctx.aux_var_count, len(ctx.clauses))
