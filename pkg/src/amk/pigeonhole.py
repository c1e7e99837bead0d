"""Pigeonhole CNF instances: every pigeon gets a hole, no hole over capacity.

An instance over P pigeons and H holes uses a P x H matrix of variables;
the variable for pigeon p in hole h gets DIMACS id (p-1)*H + h. Rows carry
an at-least-one clause plus a selectable at-most-one encoding; columns
carry a selectable at-most-K encoding.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import CnfFormula, EncoderContext
from .encoders import (
    AMO_ONLY_ENCODINGS,
    AtMostK,
    EncodingError,
    check_bound,
    encode,
    encode_at_least_one,
)


@dataclass(frozen=True)
class PigeonholeInstance:
    pigeons: int
    holes: int
    capacity: int
    amo: str = "pw"  # encoding for the per-pigeon at-most-one
    amk: str = "sc"  # encoding for the per-hole at-most-capacity

    def __post_init__(self):
        if self.pigeons < 1 or self.holes < 1 or self.capacity < 1:
            raise ValueError("pigeons, holes, and capacity must all be >= 1")

    @property
    def label(self) -> str:
        return f"{self.pigeons}-{self.holes}-{self.capacity}"

    @property
    def num_vars(self) -> int:
        return self.pigeons * self.holes

    @property
    def satisfiable(self) -> bool:
        """Instances are satisfiable exactly when capacity covers the pigeons."""
        return self.pigeons <= self.holes * self.capacity

    def var(self, pigeon: int, hole: int) -> int:
        """DIMACS id of the 'pigeon p sits in hole h' variable (both 1-based)."""
        if not (1 <= pigeon <= self.pigeons and 1 <= hole <= self.holes):
            raise ValueError(f"no variable for pigeon {pigeon}, hole {hole}")
        return (pigeon - 1) * self.holes + hole

    def row(self, pigeon: int) -> list[int]:
        return [self.var(pigeon, h) for h in range(1, self.holes + 1)]

    def column(self, hole: int) -> list[int]:
        return [self.var(p, hole) for p in range(1, self.pigeons + 1)]


def validate_instance(inst: PigeonholeInstance) -> None:
    """Reject encoding/bound mismatches before any clause is emitted."""
    check_bound(inst.amo, inst.holes, 1)
    if inst.amk in AMO_ONLY_ENCODINGS and inst.capacity != 1:
        raise EncodingError(
            f"{inst.amk} cannot encode the at-most-{inst.capacity} hole constraint"
        )
    check_bound(inst.amk, inst.pigeons, inst.capacity)


def generate_pigeonhole(
    inst: PigeonholeInstance, warning_sink: list | None = None
) -> CnfFormula:
    """Build the instance CNF; deterministic, so equal instances give equal bytes."""
    validate_instance(inst)
    ctx = EncoderContext(inst.num_vars)
    for p in range(1, inst.pigeons + 1):
        row = inst.row(p)
        encode_at_least_one(row, ctx)
        encode(inst.amo, AtMostK(row, 1), ctx)
    for h in range(1, inst.holes + 1):
        encode(inst.amk, AtMostK(inst.column(h), inst.capacity), ctx)
    if warning_sink is not None:
        warning_sink.extend(ctx.warnings)
    comment = (
        f"pigeonhole p={inst.pigeons} h={inst.holes} k={inst.capacity}"
        f" amo={inst.amo} amk={inst.amk} bvars=1..{inst.num_vars}"
    )
    return ctx.to_formula([comment])


def verify_model(inst: PigeonholeInstance, model: dict[int, bool]) -> bool:
    """Semantic check of a model: every pigeon housed, no hole over capacity.

    The model must assign every pigeon/hole variable; auxiliaries are ignored.
    """
    for p in range(1, inst.pigeons + 1):
        for h in range(1, inst.holes + 1):
            if inst.var(p, h) not in model:
                raise ValueError(f"model does not assign pigeon {p}, hole {h}")
    for p in range(1, inst.pigeons + 1):
        if not any(model[v] for v in inst.row(p)):
            return False
    for h in range(1, inst.holes + 1):
        if sum(model[v] for v in inst.column(h)) > inst.capacity:
            return False
    return True
