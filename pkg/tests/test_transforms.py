"""Tests for conjugation, unfolding and rotation."""

import numpy as np
import pytest

from chainopuc.bijection import SequencePair, pair_to_verblunsky, verblunsky_to_pair
from chainopuc.checks import alternating_pair, random_alpha, random_pair
from chainopuc.exceptions import HypothesisViolatedError, InvalidParametersError
from chainopuc.polynomials import r_poly
from chainopuc.transforms import conjugate_pair, rotate_alpha, rotation_point, unfold_alternating
from chainopuc.zeros import w_zeros
from tests.conftest import pair_from_b


@pytest.fixture
def paired_pair(rng):
    """c_{2n} = -c_{2n-1} with random magnitudes."""
    c = np.repeat(rng.uniform(-2.0, 2.0, 4), 2)
    c[1::2] *= -1.0
    return SequencePair.from_minimal(c, np.concatenate([[0.0], rng.uniform(0.05, 0.95, 8)]))


def test_conjugate_conjugates_r(rng):
    pair = random_pair(rng, 9)
    np.testing.assert_allclose(r_poly(conjugate_pair(pair), 9).coeffs, np.conj(r_poly(pair, 9).coeffs), atol=1e-12)


def test_conjugate_mirrors_zeros(rng):
    pair = random_pair(rng, 10)
    mirrored = np.sort(2.0 * np.pi - w_zeros(pair, 10).theta_zeros)
    np.testing.assert_allclose(w_zeros(conjugate_pair(pair), 10).theta_zeros, mirrored, atol=1e-10)


def test_unfold_structure(paired_pair):
    data = unfold_alternating(paired_pair)
    even_c = paired_pair.c[1::2]
    np.testing.assert_allclose(data.pair_tilde.c, np.repeat(even_c, 2))
    np.testing.assert_allclose(data.pair_tilde.m[1::2], 1.0 - paired_pair.m[1::2], atol=1e-15)
    np.testing.assert_allclose(data.pair_tilde.m[2::2], paired_pair.m[2::2], atol=1e-15)
    np.testing.assert_allclose(np.abs(data.beta), 1.0, atol=1e-15)


def test_unfold_matches_forward_map(paired_pair):
    data = unfold_alternating(paired_pair)
    forward = pair_to_verblunsky(data.pair_tilde).alpha
    np.testing.assert_allclose(forward, data.alpha_tilde, atol=1e-11)


def test_unfold_rejects_unpaired_c():
    pair = pair_from_b([1.0, 1.0], [0.2, 0.3])
    with pytest.raises(HypothesisViolatedError, match="c_2 != -c_1"):
        unfold_alternating(pair)


def test_unfold_needs_even_length():
    pair = pair_from_b([1.0, -1.0, 1.0], [0.2, 0.3, 0.1])
    with pytest.raises(InvalidParametersError, match="even number"):
        unfold_alternating(pair)


def test_rotation_point():
    assert rotation_point(1.0) == pytest.approx(-1j)
    assert rotation_point(0.0) == pytest.approx(-1.0)
    assert abs(rotation_point(3.7)) == pytest.approx(1.0)


def test_rotation_makes_alternating_c_constant(rng):
    pair = alternating_pair(rng, np.full(10, 0.7))
    rotated = verblunsky_to_pair(rotate_alpha(pair_to_verblunsky(pair), rotation_point(0.7)))
    np.testing.assert_allclose(rotated.c, 0.7, atol=1e-11)


def test_rotation_by_one_is_identity(rng):
    alpha = random_alpha(rng, 6)
    np.testing.assert_allclose(rotate_alpha(alpha, 1.0), alpha)


def test_rotation_needs_unimodular_beta(rng):
    with pytest.raises(InvalidParametersError, match="is not 1"):
        rotate_alpha(random_alpha(rng, 3), 0.5j)
