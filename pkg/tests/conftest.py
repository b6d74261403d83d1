import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

# Frozen goldens; values established by oracles.max_overlap_scipy
# (independent of the power sweeps) before being recorded here.
GHZ3_LAMBDA = 0.7071067811865472
W3_LAMBDA = 0.6666666666666669


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
