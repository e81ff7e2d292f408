"""Tests for circle arcs and the alternating-sign support arcs."""

import math

import numpy as np
import pytest

from chainopuc.arcs import TWO_PI, Arc, support_arcs
from chainopuc.quadrature import quadrature


def test_arc_contains():
    arc = Arc(0.0, 0.5 * math.pi)
    assert arc.contains(0.3)
    assert not arc.contains(math.pi)
    np.testing.assert_array_equal(arc.contains(np.array([0.0, 1.0, 2.0])), [True, True, False])


def test_arc_through_one():
    arc = Arc(6.0, 7.0)
    assert arc.contains(0.2)
    assert arc.contains(6.1)
    assert not arc.contains(1.0)
    assert arc.length == pytest.approx(1.0)
    assert arc.midpoint == pytest.approx(6.5 - TWO_PI)


def test_support_arcs_c_one():
    first, second = support_arcs(1.0)
    assert first.as_list() == pytest.approx([0.0, 0.5 * math.pi])
    assert second.as_list() == pytest.approx([1.5 * math.pi, TWO_PI])


def test_support_arcs_c_zero_cover_circle():
    first, second = support_arcs(0.0)
    assert first.end == pytest.approx(math.pi)
    assert second.start == pytest.approx(math.pi)


def test_nodes_within_support_arcs(alternating_pair):
    dm = quadrature(alternating_pair, 12)
    assert dm.nodes_within(support_arcs(1.5)).all()
    assert not dm.nodes_within([Arc(0.5 * math.pi, 1.5 * math.pi)])[1:].any()
