"""Tests for the closed-form period-2 family."""

import math
import unittest

import numpy as np

from chainopuc.closed_form import (
    ExampleParams,
    bands_within_support,
    example_alpha,
    example_bands,
    example_discriminant,
    example_masses,
    example_pair,
    example_phi2_orthonormal,
    example_weight,
    rotation_identity_residual,
    second_candidate,
)
from chainopuc.exceptions import InvalidParametersError, OffBandError
from chainopuc.periodic import orthonormal_phi


class TestExampleParams(unittest.TestCase):
    """Test parameter validation."""

    def test_b_must_be_inside_interval(self):
        """Test that |b1| >= 1 is rejected."""
        with self.assertRaises(InvalidParametersError) as context:
            ExampleParams(1.0, 1.0, 0.5)
        self.assertIn("b1 must satisfy |b1| < 1", str(context.exception))

    def test_c_must_be_finite(self):
        """Test that a non-finite c is rejected."""
        with self.assertRaises(InvalidParametersError) as context:
            ExampleParams(float("nan"), 0.3, 0.5)
        self.assertIn("c must be finite", str(context.exception))

    def test_pair_needs_two_terms(self):
        """Test that the pair has at least one full period."""
        with self.assertRaises(InvalidParametersError):
            example_pair(ExampleParams(1.0, 0.3, 0.5), 1)


class TestReferenceValues(unittest.TestCase):
    """Test the worked values for c = 1, b1 = 0.3, b2 = 0.5."""

    def setUp(self):
        self.params = ExampleParams(1.0, 0.3, 0.5)

    def test_alpha(self):
        """Test alpha_0 = 0.65 + 0.35i and alpha_1 = -0.25 - 0.75i."""
        a0, a1 = example_alpha(self.params)
        self.assertAlmostEqual(a0, 0.65 + 0.35j, places=15)
        self.assertAlmostEqual(a1, -0.25 - 0.75j, places=15)

    def test_pair_alternates(self):
        """Test c = (-c, c, ...) and b = (b1, b2, ...)."""
        pair = example_pair(self.params, 4)
        np.testing.assert_allclose(pair.c, [-1.0, 1.0, -1.0, 1.0])
        np.testing.assert_allclose(pair.b, [0.3, 0.5, 0.3, 0.5], atol=1e-15)
        self.assertEqual(pair.periodic_tail, 2)

    def test_masses(self):
        """Test masses 8/15 at z = 1 and 2/15 at z = -i."""
        first, second = example_masses(self.params)
        self.assertAlmostEqual(first.mass, 8.0 / 15.0, places=15)
        self.assertAlmostEqual(second.mass, 2.0 / 15.0, places=15)
        self.assertAlmostEqual(second.point, -1j, places=15)
        self.assertAlmostEqual(second.theta, 1.5 * math.pi, places=15)

    def test_band_edges_solve_discriminant(self):
        """Test Delta = 2 at the plus edges and Delta = -2 at the minus edges."""
        plus1, minus1, plus2, minus2 = example_bands(self.params)
        np.testing.assert_allclose(example_discriminant(self.params, [plus1, plus2]), 2.0, atol=1e-12)
        np.testing.assert_allclose(example_discriminant(self.params, [minus1, minus2]), -2.0, atol=1e-12)
        self.assertAlmostEqual(plus2, 2.0 * math.pi - plus1, places=14)
        self.assertLess(plus1, minus1)

    def test_weight_off_band(self):
        """Test that the weight is only defined inside a band."""
        with self.assertRaises(OffBandError):
            example_weight(self.params, 0.0)

    def test_weight_positive_in_band(self):
        """Test the weight is positive at a band interior point."""
        plus1, minus1, _, _ = example_bands(self.params)
        self.assertGreater(example_weight(self.params, 0.5 * (plus1 + minus1)), 0.0)

    def test_phi2_matches_transfer_matrix(self):
        """Test the closed-form orthonormal phi_2 against the period product."""
        poly = example_phi2_orthonormal(self.params)
        alpha = np.array(example_alpha(self.params))
        z = np.array([0.3, 0.5j, np.exp(0.7j), -0.9 + 0.1j])
        phi, _ = orthonormal_phi(alpha, z)
        np.testing.assert_allclose(poly(z), phi, atol=1e-13)

    def test_second_candidate_is_rotation_point(self):
        """Test w2 = -(1 + i c) / (1 - i c)."""
        self.assertLess(rotation_identity_residual(self.params), 1e-15)
        self.assertAlmostEqual(second_candidate(self.params), -1j, places=15)

    def test_bands_within_support(self):
        """Test both bands sit inside the alternating-sign support arcs."""
        self.assertTrue(bands_within_support(self.params))


def test_equal_b_has_single_mass():
    """b1 = b2 = b leaves only the mass 2b / (1 + b) at z = 1."""
    first, second = example_masses(ExampleParams(1.0, 0.4, 0.4))
    assert second is None
    assert abs(first.mass - 0.8 / 1.4) < 1e-15


def test_zero_b_has_no_mass():
    assert example_masses(ExampleParams(1.0, 0.0, 0.0)) == (None, None)


def test_bands_within_support_over_grid():
    for c in (-1.0, -0.5, 0.5, 1.0, 2.0):
        for b1, b2 in ((0.3, 0.5), (-0.7, 0.2), (0.6, -0.6)):
            assert bands_within_support(ExampleParams(c, b1, b2))
