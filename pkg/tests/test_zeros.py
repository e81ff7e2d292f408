"""Tests for the interlacing zero finder and the alternating-sign gap check."""

import math

import numpy as np
import pytest

from chainopuc.checks import alternating_pair, random_pair
from chainopuc.exceptions import ClusterWarning, HypothesisViolatedError, InvalidParametersError
from chainopuc.polynomials import r_eval, w_eval
from chainopuc.zeros import _collapsed_points, support_gap_check, w_zero_levels, w_zeros, zero_arc_hull
from tests.conftest import pair_from_b


def test_worked_pair_zeros(worked_pair):
    """W_2 = x^2 - 1/4 vanishes at x = +/-1/2, i.e. theta = 2 pi/3 and 4 pi/3."""
    zs = w_zeros(worked_pair, 2)
    np.testing.assert_allclose(zs.x_zeros, [0.5, -0.5], atol=1e-13)
    np.testing.assert_allclose(zs.theta_zeros, [2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0], atol=1e-12)


def test_zeros_are_ordered(rng):
    zs = w_zeros(random_pair(rng, 25, c_scale=0.5), 25)
    assert np.all(np.diff(zs.x_zeros) < 0.0)
    assert np.all(np.diff(zs.theta_zeros) > 0.0)
    assert np.all((zs.theta_zeros > 0.0) & (zs.theta_zeros < 2.0 * math.pi))


def test_levels_interlace(rng):
    levels = w_zero_levels(random_pair(rng, 20, c_scale=0.5), 20)
    assert [zs.level for zs in levels] == list(range(1, 21))
    for inner, outer in zip(levels[:-1], levels[1:]):
        assert np.all(outer.x_zeros[:-1] > inner.x_zeros)
        assert np.all(inner.x_zeros > outer.x_zeros[1:])


def test_zeros_are_roots_of_r(rng):
    """z = e^{i theta} at each zero of W_n is a zero of R_n."""
    pair = random_pair(rng, 12, c_scale=1.0)
    zs = w_zeros(pair, 12)
    assert np.max(np.abs(w_eval(pair, 12, zs.x_zeros))) < 1e-9
    r_values = np.abs(r_eval(pair, 12, zs.nodes).value)
    r_scale = np.max(np.abs(r_eval(pair, 12, np.exp(1j * np.linspace(0.1, 6.0, 40))).value))
    assert np.max(r_values) < 1e-9 * r_scale


def test_level_must_be_positive(worked_pair):
    with pytest.raises(InvalidParametersError):
        w_zero_levels(worked_pair, 0)


def test_support_gap_report(alternating_pair):
    levels = w_zero_levels(alternating_pair, 12)
    report = support_gap_check(alternating_pair, 12, tol=1e-11, levels=levels)
    assert report.c_bound == pytest.approx(1.5)
    assert report.x_bound == pytest.approx(1.5 / math.sqrt(3.25))
    assert report.min_distance > -1e-12
    assert report.levels == 12
    assert len(report.arcs) == 2
    assert report.arcs[0].end == pytest.approx(report.theta_c)


def test_support_gap_random_magnitudes(rng):
    pair = alternating_pair(rng, rng.uniform(1.0, 2.0, 16))
    report = support_gap_check(pair, 16, tol=1e-11, levels=w_zero_levels(pair, 16))
    assert report.x_bound >= 1.0 / math.sqrt(2.0) - 1e-15


def test_odd_levels_share_a_zero():
    """With c_k = (-1)^k c every odd level vanishes at x = -c / sqrt(1 + c^2)."""
    c = 0.8
    pair = pair_from_b(c * (-1.0) ** np.arange(1, 10), np.resize([0.2, -0.5, 0.7], 9))
    target = -c / math.sqrt(1.0 + c * c)
    for zs in w_zero_levels(pair, 9):
        if zs.level % 2 == 1:
            assert np.min(np.abs(zs.x_zeros - target)) < 1e-10


def test_support_gap_requires_alternation():
    pair = pair_from_b([1.0, 1.0, 1.0], [0.1, 0.2, 0.3])
    with pytest.raises(HypothesisViolatedError):
        support_gap_check(pair, 3)


def test_arc_hull_of_gapped_zeros(alternating_pair):
    """Every zero of every level lies on one of the hull arcs."""
    levels = w_zero_levels(alternating_pair, 12)
    arcs = zero_arc_hull(levels, gap=0.2)
    assert len(arcs) >= 1
    for zs in levels:
        inside = np.zeros(zs.level, dtype=bool)
        for arc in arcs:
            inside |= arc.contains(zs.theta_zeros, 1e-12)
        assert np.all(inside)


def test_collapsed_points_flag_only_tiny_wrong_signs():
    expected, collapsed = _collapsed_points(np.array([2.0, -1.0, -1e-18, -0.7, 0.4]), 1e-6)
    np.testing.assert_array_equal(expected, [1.0, -1.0, 1.0, -1.0, 1.0])
    assert collapsed.tolist() == [2]
    _, collapsed = _collapsed_points(np.array([2.0, -1.0, -0.5, -0.7, 0.4]), 1e-6)
    assert collapsed.size == 0


def test_collapsed_levels_warn_instead_of_failing(rng):
    """With |c| up to 2 consecutive levels share zeros to below double precision by n = 40."""
    pair = random_pair(rng, 40, c_scale=2.0)
    with pytest.warns(ClusterWarning, match="collapsed onto the level"):
        levels = w_zero_levels(pair, 40)
    assert [zs.level for zs in levels] == list(range(1, 41))
    for inner, outer in zip(levels[:-1], levels[1:]):
        assert np.all(np.diff(outer.x_zeros) < 0.0)
        assert np.all(outer.x_zeros[:-1] >= inner.x_zeros - 1e-12)
        assert np.all(inner.x_zeros >= outer.x_zeros[1:] - 1e-12)


@pytest.mark.slow
def test_interlacing_margin_over_fifty_pairs(rng):
    worst = math.inf
    for _ in range(50):
        levels = w_zero_levels(random_pair(rng, 40, c_scale=0.5), 40)
        for inner, outer in zip(levels[:-1], levels[1:]):
            worst = min(worst, float(np.min(outer.x_zeros[:-1] - inner.x_zeros)))
            worst = min(worst, float(np.min(inner.x_zeros - outer.x_zeros[1:])))
    assert worst > 1e-12
