"""Discrete approximating measures psi_n built from the zeros of R_n and the point z = 1.

Weights:

    lambda_{n,0} = 1 - Q_n(1) / R_n(1)
    lambda_{n,j} = Q_n(z_{n,j}) / ((1 - z_{n,j}) R_n'(z_{n,j})),   j = 1 .. n

psi_n is the left-continuous step function that jumps by lambda_{n,j} just after theta_{n,j}
(theta_{n,0} = 0), so its value at a jump point is the value before the jump.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from loguru import logger

from .arcs import TWO_PI, Arc
from .bijection import SequencePair
from .config import QuadratureConfig, ZeroConfig
from .exceptions import InternalInvariantError, InvalidParametersError, NegativeWeightError, NodeAtOneError
from .polynomials import ScaledValue, q_eval, r_eval
from .zeros import ZeroSet, w_zeros


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """The n + 1 point measure psi_n.

    Attributes:
        level: n
        thetas: 0 = theta_0 < theta_1 < ... < theta_n < 2 pi
        weights: lambda_{n,0} ... lambda_{n,n}, positive, summing to 1
    """

    level: int
    thetas: np.ndarray
    weights: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        return np.exp(1j * self.thetas)

    def nodes_within(self, arcs: List[Arc], tol: float = 1e-12) -> np.ndarray:
        """Boolean mask of nodes lying on one of ``arcs``; the node z = 1 is always admitted."""
        inside = np.zeros(len(self.thetas), dtype=bool)
        for arc in arcs:
            inside |= arc.contains(self.thetas, tol)
        inside[0] = True
        return inside


def _relative_size_at_one(pair: SequencePair, n: int, r_one: ScaledValue) -> float:
    """|R_n(1)| / max |R_n| over 4n + 16 equispaced points on the circle, in log2 to avoid overflow."""
    grid = np.exp(1j * TWO_PI * np.arange(4 * n + 16) / (4 * n + 16))
    r_grid = r_eval(pair, n, grid, rescale=True)
    with np.errstate(divide="ignore"):
        log_grid = np.log2(np.abs(r_grid.mantissa)) + r_grid.exponent
        log_one = np.log2(abs(r_one.mantissa[0])) + r_one.exponent[0]
    return float(np.exp2(log_one - max(np.max(log_grid), log_one)))


def quadrature(
    pair: SequencePair,
    n: int,
    zero_set: Optional[ZeroSet] = None,
    node_eps: float = QuadratureConfig.node_eps,
    weight_floor: float = QuadratureConfig.weight_floor,
    sum_tol: float = QuadratureConfig.sum_tol,
    zero_tol: float = ZeroConfig.tol,
) -> DiscreteMeasure:
    """Build psi_n for ``pair``.

    Args:
        pair: sequence pair holding at least n terms (or a tail)
        n: level, n >= 1
        zero_set: zeros of W_n if already computed

    Raises:
        NodeAtOneError: if |R_n(1)| < node_eps * max |R_n| on the circle
        NegativeWeightError: if some weight is <= weight_floor
        InternalInvariantError: if the weights do not sum to 1 within sum_tol
    """
    if n < 1:
        raise InvalidParametersError("n must be >= 1")
    if zero_set is None:
        zero_set = w_zeros(pair, n, zero_tol)
    elif zero_set.level != n:
        raise InvalidParametersError(f"zero set is for level {zero_set.level}, not {n}")

    r_one = r_eval(pair, n, np.array([1.0 + 0.0j]))
    q_one = q_eval(pair, n, np.array([1.0 + 0.0j]))
    r_relative = _relative_size_at_one(pair, n, r_one)
    if r_relative < node_eps:
        raise NodeAtOneError(
            f"|R_{n}(1)| / max |R_{n}| = {r_relative!r} is below {node_eps!r}", {"n": n, "relative": r_relative}
        )
    ratio_one = q_one.mantissa[0] / r_one.mantissa[0] * 2.0 ** float(q_one.exponent[0] - r_one.exponent[0])
    lam0 = 1.0 - ratio_one

    z = zero_set.nodes
    r_vals = r_eval(pair, n, z, with_derivative=True)
    q_vals = q_eval(pair, n, z)
    raw = q_vals.mantissa / ((1.0 - z) * r_vals.derivative) * np.exp2(q_vals.exponent - r_vals.exponent)

    weights = np.concatenate([[lam0], raw]).astype(complex)
    imag = float(np.max(np.abs(weights.imag)))
    logger.debug(f"psi_{n}: largest imaginary weight residual {imag!r}")
    weights = weights.real.copy()

    low = np.flatnonzero(weights <= weight_floor)
    if low.size:
        j = int(low[0])
        raise NegativeWeightError(j, float(weights[j]))
    total = float(np.sum(weights))
    if abs(total - 1.0) > sum_tol:
        raise InternalInvariantError(f"weights of psi_{n} sum to {total!r}", {"n": n, "sum": total})

    thetas = np.concatenate([[0.0], zero_set.theta_zeros])
    return DiscreteMeasure(level=n, thetas=thetas, weights=weights)


def moments(dm: DiscreteMeasure, k_max: int = QuadratureConfig.k_max) -> np.ndarray:
    """mu_k = sum_j lambda_j conj(node_j)^k for k = 0 .. k_max."""
    if k_max < 0:
        raise InvalidParametersError("k_max must be >= 0")
    k = np.arange(k_max + 1)
    return np.exp(-1j * np.outer(k, dm.thetas)) @ dm.weights


def step_eval(dm: DiscreteMeasure, theta):
    """psi_n(e^{i theta}) for theta in [0, 2 pi]; scalar in, float out."""
    theta_arr = np.asarray(theta, dtype=float)
    if np.any((theta_arr < 0.0) | (theta_arr > TWO_PI)):
        raise InvalidParametersError("theta must lie in [0, 2 pi]")
    partial = np.cumsum(dm.weights)
    below = np.searchsorted(dm.thetas[1:], theta_arr, side="left")
    values = np.where(below >= dm.level, 1.0, partial[np.minimum(below, dm.level)])
    values = np.where(theta_arr == 0.0, 0.0, values)
    if values.ndim == 0:
        return float(values)
    return values
