"""Tests for periodic Verblunsky coefficients: discriminant, bands, gaps and pure points."""

import math

import numpy as np
import pytest

from chainopuc import periodic
from chainopuc.bijection import SequencePair, VerblunskySequence
from chainopuc.checks import random_alpha
from chainopuc.closed_form import example_alpha, example_bands, example_discriminant, example_pair, example_weight
from chainopuc.config import PeriodicConfig
from chainopuc.exceptions import HypothesisViolatedError, InternalInvariantError, NotACandidateError, OffBandError
from chainopuc.periodic import (
    ac_weight,
    band_structure,
    discriminant,
    gap_candidates,
    is_periodic_pair,
    pair_from_parallel_alpha,
    parallel_alpha_from_parameters,
    parallel_lines_check,
    period_block,
    pure_point_mass,
    sample_weight,
    series_mass,
    spectrum,
    tau_is_periodic,
    tau_w,
    total_mass,
    transfer_matrix,
)
from tests.conftest import EXAMPLE_MASS_AT_ONE, EXAMPLE_MASS_AT_W2

FAST = PeriodicConfig(grid_per_period=1024, series_terms_per_period=2000)


@pytest.fixture
def example_block(example_params):
    return np.array(example_alpha(example_params))


def test_transfer_matrix_determinant():
    z = np.exp(1j * np.array([0.1, 2.0, 5.5]))
    np.testing.assert_allclose(transfer_matrix(0.4 - 0.3j, z).det, z, atol=1e-14)


def test_lebesgue_discriminant():
    """alpha = 0 with p = 1 gives Delta = 2 cos(theta / 2)."""
    theta = np.linspace(0.0, 6.0, 25)
    np.testing.assert_allclose(discriminant([0.0], theta), 2.0 * np.cos(0.5 * theta), atol=1e-14)


def test_discriminant_matches_closed_form(example_params, example_block):
    theta = np.linspace(0.0, 2.0 * math.pi, 200, endpoint=False)
    np.testing.assert_allclose(discriminant(example_block, theta), example_discriminant(example_params, theta), atol=1e-12)


def test_band_edges_match_closed_form(example_params, example_block):
    found = band_structure(example_block, 1024)
    plus1, minus1, plus2, minus2 = example_bands(example_params)
    np.testing.assert_allclose(found.plus_solutions, sorted([plus1, plus2]), atol=1e-10)
    np.testing.assert_allclose(found.minus_solutions, sorted([minus1, minus2]), atol=1e-10)
    assert len(found.bands) == 2
    assert not any(gap.closed for gap in found.gaps)


def test_band_orientations_alternate(example_block):
    found = band_structure(example_block, 1024)
    assert sorted(band.orientation for band in found.bands) == [-1, 1]


def test_example_pure_points(example_block):
    found = spectrum(example_block, FAST)
    thetas = [pp.theta for pp in found.pure_points]
    masses = [pp.mass for pp in found.pure_points]
    np.testing.assert_allclose(thetas, [0.0, 1.5 * math.pi], atol=1e-9)
    np.testing.assert_allclose(masses, [EXAMPLE_MASS_AT_ONE, EXAMPLE_MASS_AT_W2], atol=1e-12)


def test_example_total_mass(example_block):
    assert total_mass(spectrum(example_block, FAST)) == pytest.approx(1.0, abs=1e-6)


def test_lebesgue_spectrum():
    found = spectrum([0.0], FAST)
    assert found.pure_points == []
    assert len(found.bands) == 1
    assert total_mass(found) == pytest.approx(1.0, abs=1e-8)


def test_gap_candidates(example_block):
    candidates = gap_candidates(example_block, 1024)
    np.testing.assert_allclose(np.sort_complex(candidates), np.sort_complex([-1j, 1.0]), atol=1e-10)


def test_tau_periodic_only_at_candidates(example_block):
    assert tau_is_periodic(example_block, 1.0)
    assert not tau_is_periodic(example_block, np.exp(0.3j))


def test_pure_point_mass_rejects_non_candidate(example_block):
    with pytest.raises(NotACandidateError):
        pure_point_mass(example_block, np.exp(0.3j))


def test_series_mass_agrees(example_block):
    point = pure_point_mass(example_block, 1.0)
    assert series_mass(example_block, 1.0, terms=4000) == pytest.approx(point.mass, abs=1e-8)


def test_ac_weight_matches_closed_form(example_params, example_block):
    for band in band_structure(example_block, 1024).bands:
        theta = float(np.mod(band.arc.midpoint, 2.0 * math.pi))
        expected = example_weight(example_params, theta)
        assert ac_weight(example_block, theta) == pytest.approx(expected, rel=1e-8)


def test_ac_weight_off_band(example_block):
    with pytest.raises(OffBandError):
        ac_weight(example_block, 0.0)
    assert sample_weight(example_block, np.array([0.0, math.pi])).tolist() == [0.0, 0.0]


def test_eventually_periodic_alpha_rejected():
    alpha = VerblunskySequence.from_alpha([0.1, 0.2, 0.3, 0.2, 0.3], periodic_tail=2)
    with pytest.raises(HypothesisViolatedError, match="only eventually periodic"):
        period_block(alpha)


def test_periodic_pair_detection(example_params):
    pair = example_pair(example_params, 6)
    assert is_periodic_pair(pair, 2).periodic
    assert not is_periodic_pair(pair, 3).periodic


def test_odd_period_symmetric_pair():
    m = np.concatenate([[0.0], np.tile([0.2, 0.6, 0.45], 4)])
    report = is_periodic_pair(SequencePair.from_minimal(np.zeros(12), m, 3), 3)
    assert report.periodic
    assert report.symmetric is True
    assert report.alpha_residual < 1e-12


def test_parallel_lines(example_params, example_block, rng):
    assert parallel_lines_check(example_block)
    assert not parallel_lines_check(random_alpha(rng, 2))


def test_pair_from_parallel_alpha(example_block):
    pair = pair_from_parallel_alpha(example_block)
    np.testing.assert_allclose(pair.c, [-1.0, 1.0], atol=1e-14)
    np.testing.assert_allclose(pair.b, [0.3, 0.5], atol=1e-14)


def test_parallel_alpha_from_parameters(example_block):
    built = parallel_alpha_from_parameters([-1.0], [0.3, 0.5])
    np.testing.assert_allclose(built, example_block, atol=1e-15)


def test_tau_w_at_one_has_period_two(example_block):
    np.testing.assert_allclose(tau_w(example_block, 1.0, 4), [1.0, 1j, 1.0, 1j, 1.0], atol=1e-14)
    np.testing.assert_allclose(np.abs(tau_w(example_block, np.exp(0.3j), 7)), 1.0, atol=1e-14)


def test_tau_w_at_rotation_point_alternates(example_block):
    """At c = 1 the second pure point is w = -i, where tau_n(w) = (-1)^n."""
    np.testing.assert_allclose(tau_w(example_block, -1j, 8), (-1.0) ** np.arange(9), atol=1e-13)


def test_odd_period_band_through_one():
    """p = 3 with z = 1 inside a band: each gap edge pair is labelled on one continuous branch."""
    block = np.array([-0.32403141 + 0.79167067j, -0.11497669 + 0.06011469j, 0.40047139 - 0.75403624j])
    assert abs(discriminant(block, 0.0)) < 2.0
    found = band_structure(block, 1024)
    assert len(found.plus_solutions) == 3
    assert len(found.minus_solutions) == 3
    assert len(found.bands) == 3
    assert any(band.arc.contains(0.0) for band in found.bands)


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5, 6])
def test_edge_counts_for_random_blocks(p, rng):
    for _ in range(8):
        block = rng.uniform(0.2, 0.85, p) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, p))
        found = band_structure(block, 1024)
        assert len(found.plus_solutions) == p
        assert len(found.minus_solutions) == p
        assert len(found.bands) == p
        edges = np.array(found.plus_solutions + found.minus_solutions)
        np.testing.assert_allclose(discriminant(block, edges) ** 2, 4.0, atol=1e-8)


def test_series_mass_matches_closed_form_on_random_blocks(rng):
    compared = 0
    for p in (2, 3, 4, 5):
        for _ in range(3):
            block = rng.uniform(0.2, 0.85, p) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, p))
            for point in spectrum(block, FAST, cross_check=False).pure_points:
                if float(np.prod(point.q)) < 0.99:
                    assert series_mass(block, point.point) == pytest.approx(point.mass, abs=1e-10)
                    compared += 1
    assert compared > 0


def test_series_mass_rejects_non_candidate(example_block):
    with pytest.raises(NotACandidateError):
        series_mass(example_block, np.exp(0.3j))


def test_spectrum_raises_when_series_disagrees(example_block, monkeypatch):
    monkeypatch.setattr(periodic, "series_mass", lambda *args, **kwargs: 0.0)
    with pytest.raises(InternalInvariantError, match="series mass"):
        spectrum(example_block, FAST)
