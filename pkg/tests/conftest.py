"""Shared test infrastructure for chainopuc.

Provides:
- pair_from_b(): helper building a (c, m) pair from c and b = 1 - 2m
- Sample data: the two-term worked pair, the period-2 reference parameters, Lebesgue alpha
- Pytest fixtures (rng, worked_pair, example_params, alternating_pair, small_config)
"""

import numpy as np
import pytest

from chainopuc.bijection import SequencePair
from chainopuc.closed_form import ExampleParams
from chainopuc.config import ProcessingConfig, RunConfig

# ---------------------------------------------------------------------------
# Helper functions (usable from unittest.TestCase tests via import)
# ---------------------------------------------------------------------------


def pair_from_b(c, b, periodic_tail=None) -> SequencePair:
    """Pair with the given c and b_n = 1 - 2 m_n."""
    m = np.concatenate([[0.0], 0.5 * (1.0 - np.asarray(b, dtype=float))])
    return SequencePair.from_minimal(c, m, periodic_tail)


# ---------------------------------------------------------------------------
# Shared sample data
# ---------------------------------------------------------------------------

# c = 0, d = (1/2, 1/4): R_2 = z^2 + z + 1, W_2 = x^2 - 1/4
WORKED_C = [0.0, 0.0]
WORKED_D = [0.5, 0.25]

# alpha = (1/2, 1/3) recovers c = 0, m = (0, 1/4, 1/3)
ALPHA_EXAMPLE = [0.5, 1.0 / 3.0]
ALPHA_EXAMPLE_M = [0.0, 0.25, 1.0 / 3.0]

# Period-2 reference family: masses 8/15 at z = 1 and 2/15 at z = -i
EXAMPLE_PARAMS = (1.0, 0.3, 0.5)
EXAMPLE_MASS_AT_ONE = 8.0 / 15.0
EXAMPLE_MASS_AT_W2 = 2.0 / 15.0

LEBESGUE_ALPHA = [0.0] * 6


# ---------------------------------------------------------------------------
# Pytest fixtures (for pytest-style tests)
# ---------------------------------------------------------------------------


@pytest.fixture
def rng():
    """Seeded generator; every test draws the same pairs."""
    return np.random.default_rng(20240607)


@pytest.fixture
def worked_pair():
    return SequencePair.from_d(WORKED_C, WORKED_D)


@pytest.fixture
def example_params():
    return ExampleParams(*EXAMPLE_PARAMS)


@pytest.fixture
def alternating_pair():
    """c_k = (-1)^k 1.5 with varied b, long enough for 12 levels."""
    c = 1.5 * (-1.0) ** np.arange(1, 13)
    b = np.resize([0.4, -0.2, 0.1, 0.6], 12)
    return pair_from_b(c, b)


@pytest.fixture
def small_config():
    """RunConfig sized for quick check-suite runs."""
    return RunConfig(
        command="check",
        processing=ProcessingConfig(max_workers=2, seed=7, check_pairs=2, check_length=8),
    )
