"""Closed arcs of the unit circle in angle form."""

import math
from dataclasses import dataclass
from typing import List

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Arc:
    """The arc {e^{i theta}: start <= theta <= end}.

    ``start`` lies in [0, 2 pi); ``end`` may exceed 2 pi for arcs passing through z = 1.
    """

    start: float
    end: float

    @property
    def length(self) -> float:
        return self.end - self.start

    @property
    def midpoint(self) -> float:
        return math.fmod(0.5 * (self.start + self.end), TWO_PI)

    def contains(self, theta, tol: float = 0.0):
        offset = np.mod(np.asarray(theta, dtype=float) - self.start, TWO_PI)
        return (offset <= self.length + tol) | (offset >= TWO_PI - tol)

    def as_list(self) -> List[float]:
        return [self.start, self.end]


def support_arcs(c: float) -> List[Arc]:
    """Arcs [0, theta_c] and [2 pi - theta_c, 2 pi], theta_c = arccos((c^2 - 1)/(c^2 + 1)).

    A measure whose c_n alternate in sign with |c_n| >= |c| has no support strictly between them.
    """
    theta_c = math.acos((c * c - 1.0) / (c * c + 1.0))
    return [Arc(0.0, theta_c), Arc(TWO_PI - theta_c, TWO_PI)]
