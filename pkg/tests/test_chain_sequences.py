"""Tests for chain sequences and their parameter sequences."""

import unittest

import numpy as np
import pytest

from chainopuc.chain_sequences import (
    ChainSequence,
    d_from_minimal,
    extend_periodic,
    maximal_parameters,
    minimal_parameters,
)
from chainopuc.exceptions import InvalidParametersError, NoConvergenceError, NotAChainSequenceError


class TestMinimalParameters(unittest.TestCase):
    """Test the forward recursion m_n = d_n / (1 - m_{n-1})."""

    def test_constant_quarter(self):
        """Test d = 1/4 gives m_n = n / (2 (n + 1))."""
        m = minimal_parameters([0.25] * 6)
        expected = [n / (2.0 * (n + 1)) for n in range(7)]
        np.testing.assert_allclose(m, expected, atol=1e-15)

    def test_not_a_chain_sequence(self):
        """Test the first m_n reaching 1 is reported with its index."""
        with self.assertRaises(NotAChainSequenceError) as context:
            minimal_parameters([0.5, 0.6])
        self.assertIn("m_2", str(context.exception))
        self.assertEqual(context.exception.details["index"], 2)

    def test_nonpositive_d(self):
        """Test that a non-positive d_n is rejected before the recursion runs."""
        with self.assertRaises(InvalidParametersError) as context:
            minimal_parameters([0.2, 0.0, 0.1])
        self.assertIn("d_2", str(context.exception))

    def test_inverse(self):
        """Test d_from_minimal undoes minimal_parameters."""
        d = [0.1, 0.3, 0.2, 0.45, 0.05]
        np.testing.assert_allclose(d_from_minimal(minimal_parameters(d)), d, rtol=1e-14)

    def test_m0_must_vanish(self):
        """Test that m_0 != 0 is rejected."""
        with self.assertRaises(InvalidParametersError) as context:
            d_from_minimal([0.1, 0.2])
        self.assertIn("m_0 must be 0", str(context.exception))

    def test_m_outside_unit_interval(self):
        """Test that m_n outside (0, 1) is rejected."""
        with self.assertRaises(InvalidParametersError) as context:
            d_from_minimal([0.0, 0.5, 1.0])
        self.assertIn("m_2", str(context.exception))


class TestChainSequence(unittest.TestCase):
    """Test the stored-prefix container."""

    def test_tail_longer_than_prefix(self):
        """Test that a tail period beyond the stored length is rejected."""
        with self.assertRaises(InvalidParametersError) as context:
            ChainSequence.from_d([0.2, 0.2], periodic_tail=3)
        self.assertIn("exceeds the stored length", str(context.exception))

    def test_extended_repeats_tail(self):
        """Test extension repeats the last p values."""
        chain = ChainSequence.from_d([0.1, 0.2, 0.3], periodic_tail=2).extended(7)
        np.testing.assert_allclose(chain.d, [0.1, 0.2, 0.3, 0.2, 0.3, 0.2, 0.3])
        self.assertEqual(chain.periodic_tail, 2)

    def test_extension_without_tail(self):
        """Test that asking for unstored terms without a tail fails."""
        with self.assertRaises(InvalidParametersError) as context:
            extend_periodic(np.array([0.1, 0.2]), None, 4, "d")
        self.assertIn("no periodic tail", str(context.exception))


def test_maximal_parameters_quarter_tail():
    """d = 1/4 has M_n = 1/2 throughout, a jump of 1/2 at z = 1."""
    chain = ChainSequence.from_d([0.25] * 5, periodic_tail=1)
    result = maximal_parameters(chain)

    assert result.method == "fixed_point"
    np.testing.assert_allclose(result.M, 0.5, atol=1e-12)
    assert result.jump_at_one == pytest.approx(0.5, abs=1e-12)
    assert not result.determinate


def test_doubling_agrees_with_fixed_point():
    chain = ChainSequence.from_d([0.2, 0.1, 0.2], periodic_tail=2)
    exact = maximal_parameters(chain, method="fixed_point")
    doubled = maximal_parameters(chain, depth=8, tol=1e-13, method="doubling")

    assert doubled.method == "doubling"
    assert doubled.tail_depth >= 16
    np.testing.assert_allclose(doubled.M, exact.M, atol=1e-10)


def test_maximal_dominates_minimal():
    chain = ChainSequence.from_d([0.3, 0.1, 0.25, 0.2], periodic_tail=2)
    result = maximal_parameters(chain)
    assert np.all(result.M >= chain.m - 1e-12)


def test_doubling_slow_tail_gives_up():
    """Algebraic convergence on d = 1/4 cannot reach 1e-14 by depth 64."""
    chain = ChainSequence.from_d([0.25] * 3, periodic_tail=1)
    with pytest.raises(NoConvergenceError):
        maximal_parameters(chain, depth=4, max_depth=64, tol=1e-14, method="doubling")


def test_prefix_without_tail_warns_and_bounds():
    chain = ChainSequence.from_d([0.25] * 4)
    result = maximal_parameters(chain)
    assert result.method == "prefix"
    assert result.M[-1] == 1.0
    assert np.all(result.M >= chain.m)


def test_unknown_method():
    chain = ChainSequence.from_d([0.2, 0.2], periodic_tail=1)
    with pytest.raises(InvalidParametersError):
        maximal_parameters(chain, method="secant")
