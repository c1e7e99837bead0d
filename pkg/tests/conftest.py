import os
import sys

import pytest

from amk.bench import SolverConfig

SHIM_PATH = os.path.join(os.path.dirname(__file__), "solver_shim.py")


@pytest.fixture(scope="session")
def shim_solver() -> SolverConfig:
    """External-solver config pointing at the bundled DPLL shim."""
    return SolverConfig(
        executable=sys.executable, extra_args=(SHIM_PATH,), timeout_s=60.0
    )
