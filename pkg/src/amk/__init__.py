"""At-most-k cardinality constraint CNF toolkit.

Encodings of at-most-one and at-most-k constraints to CNF, brute-force
verification oracles, a unit-propagation strength checker, and a
pigeonhole benchmark harness for external DIMACS solvers.
"""

from .cnf import (
    CnfFormula,
    DimacsParseError,
    EmptyClauseError,
    EncoderContext,
    dimacs_str,
    read_dimacs,
    write_dimacs,
)
from .encoders import (
    AMO_ONLY_ENCODINGS,
    ENCODING_NAMES,
    AtMostK,
    CountReport,
    EncodingError,
    build_incomplete_sum,
    count_report,
    encode,
    encode_at_least_one,
    encode_binary_adder,
    encode_bisect,
    encode_leq_const,
    encode_pairwise,
    encode_parallel_counter,
    encode_product,
    encode_sequential_counter,
    encode_to_formula,
)
from .pigeonhole import PigeonholeInstance, generate_pigeonhole, verify_model
from .propagation import (
    AcReport,
    UpOutcome,
    check_ac_by_up,
    oracle_equivalent,
    projection_counterexample,
    solve,
    unit_propagate,
)

__version__ = "0.1.0"
