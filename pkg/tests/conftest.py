from pathlib import Path

import numpy as np
import pytest

from quadnmr import SpinSystem

SQRT3 = np.sqrt(3.0)

# frozen propagator of the hard 90 about -y for spin 3/2
HARD_90_MINUS_Y = np.array(
    [[1,      SQRT3,  SQRT3,  1],
     [-SQRT3, -1,     1,      SQRT3],
     [SQRT3,  -1,     -1,     SQRT3],
     [-1,     SQRT3,  -SQRT3, 1]], dtype=complex) / (2.0 * np.sqrt(2.0))

SEQUENCES_DIR = Path(__file__).resolve().parents[1] / "src" / "quadnmr" / "sequences"
INVALID_DIR = Path(__file__).resolve().parent / "invalid"


@pytest.fixture
def sys32():
    return SpinSystem()


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
