"""Closed forms for the period-2 family

    c_{2n-1} = -c,  c_{2n} = c,  b_{2n-1} = b1,  b_{2n} = b2,   |b1|, |b2| < 1.

Its Verblunsky coefficients are alpha_{2n} = (b1 + i c) / (1 + i c), alpha_{2n+1} = (b2 - i c) / (1 + i c),
and every spectral quantity has an explicit formula. These serve as reference values for the
generic periodic machinery.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .arcs import TWO_PI, support_arcs
from .bijection import SequencePair
from .exceptions import InternalInvariantError, InvalidParametersError, OffBandError
from .polynomials import PolyCoeffs
from .transforms import rotation_point


@dataclass(frozen=True)
class ExampleParams:
    """Parameters (c, b1, b2) of the period-2 family."""

    c: float
    b1: float
    b2: float

    def __post_init__(self):
        for name in ("c", "b1", "b2"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParametersError(f"{name} must be finite")
        if abs(self.b1) >= 1.0:
            raise InvalidParametersError("b1 must satisfy |b1| < 1")
        if abs(self.b2) >= 1.0:
            raise InvalidParametersError("b2 must satisfy |b2| < 1")

    @property
    def sqrt_p(self) -> float:
        """sqrt((1 - b1^2)(1 - b2^2))."""
        return math.sqrt((1.0 - self.b1**2) * (1.0 - self.b2**2))


@dataclass(frozen=True)
class ExampleMass:
    point: complex
    theta: float
    mass: float


def example_pair(params: ExampleParams, n: int = 2) -> SequencePair:
    """The first n terms of the family's (c, m) pair, with a period-2 tail."""
    if n < 2:
        raise InvalidParametersError("n must be >= 2")
    c = np.resize([-params.c, params.c], n)
    b = np.resize([params.b1, params.b2], n)
    m = np.concatenate([[0.0], 0.5 * (1.0 - b)])
    return SequencePair.from_minimal(c, m, periodic_tail=2)


def example_alpha(params: ExampleParams) -> Tuple[complex, complex]:
    c = params.c
    return complex((params.b1 + 1j * c) / (1.0 + 1j * c)), complex((params.b2 - 1j * c) / (1.0 + 1j * c))


def _numerator(params: ExampleParams, theta):
    c2 = params.c**2
    return (1.0 + c2) * np.cos(theta) + params.b1 * params.b2 - c2


def example_discriminant(params: ExampleParams, theta):
    """Delta = 2 [(1 + c^2) cos theta + b1 b2 - c^2] / sqrt((1 - b1^2)(1 - b2^2))."""
    return 2.0 * _numerator(params, np.asarray(theta, dtype=float)) / params.sqrt_p


def _arccos_checked(value: float) -> float:
    if abs(value) > 1.0 + 1e-12:
        raise InternalInvariantError(f"arccos argument {value!r} outside [-1, 1]")
    return math.acos(max(-1.0, min(1.0, value)))


def example_bands(params: ExampleParams) -> Tuple[float, float, float, float]:
    """(theta1+, theta1-, theta2+, theta2-): solutions of Delta = 2 (+) and Delta = -2 (-).

    The bands are [theta1+, theta1-] and [theta2-, theta2+].
    """
    c2 = params.c**2
    bb = params.b1 * params.b2
    plus = _arccos_checked((params.sqrt_p + c2 - bb) / (1.0 + c2))
    minus = _arccos_checked((c2 - params.sqrt_p - bb) / (1.0 + c2))
    return plus, minus, TWO_PI - plus, TWO_PI - minus


def example_weight(params: ExampleParams, theta: float, eps: float = 1e-12) -> float:
    """sqrt(P - X^2) / |(1 + b2)(sin theta + c (1 - cos theta))| with X the discriminant numerator.

    Raises:
        OffBandError: if theta is not strictly inside a band
    """
    delta = float(example_discriminant(params, theta))
    if abs(delta) >= 2.0 - eps:
        raise OffBandError(float(theta), delta)
    x = float(_numerator(params, theta))
    denom = abs((1.0 + params.b2) * (math.sin(theta) + params.c * (1.0 - math.cos(theta))))
    return math.sqrt(params.sqrt_p**2 - x * x) / denom


def second_candidate(params: ExampleParams) -> complex:
    """w2 = (c^2 - 1)/(1 + c^2) - 2 i c/(1 + c^2)."""
    c2 = params.c**2
    return complex((c2 - 1.0) / (1.0 + c2), -2.0 * params.c / (1.0 + c2))


def example_masses(params: ExampleParams) -> Tuple[Optional[ExampleMass], Optional[ExampleMass]]:
    """Masses at w1 = 1 (iff b1 + b2 > 0) and at w2 (iff b2 - b1 > 0)."""
    b1, b2 = params.b1, params.b2
    first = ExampleMass(1.0 + 0.0j, 0.0, (b1 + b2) / (1.0 + b2)) if b1 + b2 > 0.0 else None
    w2 = second_candidate(params)
    theta2 = math.atan2(w2.imag, w2.real) % TWO_PI
    second = ExampleMass(w2, theta2, (b2 - b1) / (1.0 + b2)) if b2 - b1 > 0.0 else None
    return first, second


def example_phi2_orthonormal(params: ExampleParams) -> PolyCoeffs:
    """Orthonormal phi_2, ascending coefficients."""
    c, b1, b2 = params.c, params.b1, params.b2
    root = params.sqrt_p
    coeffs = np.array(
        [
            complex(c * c - b2, -c * (b2 + 1.0)) / root,
            complex(b1 * b2 - b1 - 2.0 * c * c, c * (1.0 + b2)) / root,
            complex(1.0 + c * c, 0.0) / root,
        ]
    )
    return PolyCoeffs(coeffs, "phi")


def rotation_identity_residual(params: ExampleParams) -> float:
    """|w2 - (-(1 + i c)/(1 - i c))|."""
    return abs(second_candidate(params) - rotation_point(params.c))


def bands_within_support(params: ExampleParams, tol: float = 1e-12) -> bool:
    """Both bands lie inside the arcs [0, theta_c] and [2 pi - theta_c, 2 pi]."""
    plus1, minus1, plus2, minus2 = example_bands(params)
    first, second = support_arcs(params.c)
    return bool(minus1 <= first.end + tol and minus2 >= second.start - tol and plus1 >= 0.0 and plus2 <= TWO_PI)
