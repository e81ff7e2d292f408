"""Tests for the discrete measures psi_n."""

import math
import warnings

import numpy as np
import pytest

from chainopuc.bijection import SequencePair, pair_to_verblunsky, verblunsky_to_pair
from chainopuc.checks import random_pair
from chainopuc.closed_form import example_pair
from chainopuc.exceptions import ClusterWarning, InvalidParametersError, NodeAtOneError
from chainopuc.quadrature import moments, quadrature, step_eval
from chainopuc.zeros import w_zeros
from tests.conftest import LEBESGUE_ALPHA


@pytest.fixture
def level_one_pair():
    """c_1 = 0, d_1 = 1/2: R_1 = z + 1, Q_1 = 1."""
    return SequencePair.from_d([0.0], [0.5])


def test_level_one_weights(level_one_pair):
    dm = quadrature(level_one_pair, 1)
    np.testing.assert_allclose(dm.thetas, [0.0, math.pi], atol=1e-12)
    np.testing.assert_allclose(dm.weights, [0.5, 0.5], atol=1e-12)


def test_worked_pair_equal_weights(worked_pair):
    dm = quadrature(worked_pair, 2)
    np.testing.assert_allclose(dm.weights, [1.0 / 3.0] * 3, atol=1e-12)


def test_step_function_is_left_continuous(level_one_pair):
    dm = quadrature(level_one_pair, 1)
    assert step_eval(dm, 0.0) == 0.0
    assert step_eval(dm, 3.0) == pytest.approx(0.5)
    assert step_eval(dm, dm.thetas[1]) == pytest.approx(0.5)
    assert step_eval(dm, 3.3) == pytest.approx(1.0)
    assert step_eval(dm, 2.0 * math.pi) == 1.0


def test_step_function_is_monotone(rng):
    dm = quadrature(random_pair(rng, 20, c_scale=0.5), 20)
    values = step_eval(dm, np.linspace(0.0, 2.0 * math.pi, 400))
    assert np.all(np.diff(values) >= 0.0)


def test_step_function_range(level_one_pair):
    dm = quadrature(level_one_pair, 1)
    with pytest.raises(InvalidParametersError, match=r"theta must lie in \[0, 2 pi\]"):
        step_eval(dm, 7.0)


def test_weights_positive_and_normalised(rng):
    for _ in range(5):
        dm = quadrature(random_pair(rng, 30, c_scale=0.5), 30)
        assert np.all(dm.weights > 0.0)
        assert float(np.sum(dm.weights)) == pytest.approx(1.0, abs=1e-10)
        assert dm.thetas[0] == 0.0
        assert np.all(np.diff(dm.thetas) > 0.0)


def test_first_moment_is_alpha0(rng):
    pair = random_pair(rng, 15, c_scale=0.5)
    mu = moments(quadrature(pair, 15), 1)
    assert mu[0] == pytest.approx(1.0, abs=1e-10)
    assert abs(mu[1] - pair_to_verblunsky(pair).alpha[0]) < 1e-10


def test_lebesgue_moments_vanish():
    pair = verblunsky_to_pair(LEBESGUE_ALPHA)
    mu = moments(quadrature(pair, 6), 6)
    assert np.max(np.abs(mu[1:])) < 1e-12


def test_reuses_given_zero_set(worked_pair):
    zs = w_zeros(worked_pair, 2)
    dm = quadrature(worked_pair, 2, zero_set=zs)
    np.testing.assert_allclose(dm.thetas[1:], zs.theta_zeros)


def test_zero_set_level_mismatch(worked_pair):
    zs = w_zeros(worked_pair, 1)
    with pytest.raises(InvalidParametersError, match="zero set is for level 1"):
        quadrature(worked_pair, 2, zero_set=zs)


@pytest.mark.parametrize("n", [15, 30, 60])
def test_lebesgue_quadrature_at_high_degree(n):
    """alpha = 0: R_n(1) 2^-n = (n + 1) 2^-n is tiny, yet z = 1 is an ordinary node among the roots of unity."""
    pair = verblunsky_to_pair(np.zeros(60, dtype=complex))
    dm = quadrature(pair, n)
    np.testing.assert_allclose(dm.weights, np.full(n + 1, 1.0 / (n + 1)), atol=1e-10)
    mu = moments(dm, n)
    assert abs(mu[1]) <= 0.05
    assert np.max(np.abs(mu[1:])) < 1e-12


def test_node_at_one_is_relative(worked_pair):
    """R_2 = z^2 + z + 1 peaks at z = 1, so only an eps above 1 rejects it."""
    assert quadrature(worked_pair, 2, node_eps=0.5).level == 2
    with pytest.raises(NodeAtOneError, match=r"\|R_2\(1\)\| / max \|R_2\|"):
        quadrature(worked_pair, 2, node_eps=2.0)


@pytest.mark.slow
def test_example_moments_stabilise(example_params):
    """psi_n reproduces mu_k for k <= n, so mu_1 .. mu_3 agree between n = 100 and n = 200."""
    pair = example_pair(example_params, 4)
    alpha0 = pair_to_verblunsky(pair).alpha[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClusterWarning)
        coarse = moments(quadrature(pair, 100), 3)
        fine = moments(quadrature(pair, 200), 3)
    np.testing.assert_allclose(fine, coarse, atol=1e-3)
    assert abs(fine[1] - alpha0) < 1e-8
