"""Zeros of W_n in (-1, 1) and of R_n on the unit circle.

The zeros of W_{k-1} strictly interlace those of W_k, so the k brackets
(x_{k-1,j}, x_{k-1,j-1}) with x_{k-1,0} = 1 and x_{k-1,k} = -1 each hold exactly one zero of W_k.
Levels are built in order 1 .. n; all brackets of one level are bisected together.
"""

import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from .arcs import TWO_PI, Arc, support_arcs
from .bijection import SequencePair
from .config import ZeroConfig
from .exceptions import (
    BracketFailureError,
    ClusterWarning,
    GapViolatedError,
    HypothesisViolatedError,
    InvalidParametersError,
)
from .polynomials import w_recurrence

_MAX_BISECTIONS = 200


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """All zeros of W_n, and the matching zeros of R_n.

    Attributes:
        level: n
        x_zeros: x_{n,1} > ... > x_{n,n} in (-1, 1)
        theta_zeros: theta_{n,j} = 2 arccos(x_{n,j}), increasing in (0, 2 pi)
    """

    level: int
    x_zeros: np.ndarray
    theta_zeros: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        """z_{n,j} = e^{i theta_{n,j}}."""
        return np.exp(1j * self.theta_zeros)


@dataclass
class SupportGapReport:
    """Outcome of the alternating-sign gap check.

    Attributes:
        c_bound: smallest |c_k| over the checked prefix
        x_bound: c_bound / sqrt(1 + c_bound^2); no zero lies strictly inside (-x_bound, x_bound)
        theta_c: arccos((c^2 - 1)/(c^2 + 1))
        min_distance: min over all checked zeros of |x| - x_bound
        levels: number of levels checked
        arcs: the two support arcs in angle form
    """

    c_bound: float
    x_bound: float
    theta_c: float
    min_distance: float
    levels: int
    arcs: List[Arc] = field(default_factory=list)


def _level_values(c: np.ndarray, d: np.ndarray, x: np.ndarray) -> np.ndarray:
    return w_recurrence(c, d, x, np.sqrt((1.0 - x) * (1.0 + x)))


def _bisect_brackets(c, d, lower, upper, f_lower, f_upper, tol):
    """Bisect every bracket to width tol, then take one safeguarded secant step."""
    lo, hi = lower.copy(), upper.copy()
    f_lo, f_hi = f_lower.copy(), f_upper.copy()
    for _ in range(_MAX_BISECTIONS):
        active = (hi - lo) > tol
        if not np.any(active):
            break
        mid = 0.5 * (lo + hi)
        stuck = (mid <= lo) | (mid >= hi)
        if np.all(stuck | ~active):
            break
        f_mid = _level_values(c, d, mid)
        exact = f_mid == 0.0
        left = (np.sign(f_mid) == np.sign(f_lo)) & active & ~exact
        right = ~left & active & ~exact
        lo = np.where(left | exact, mid, lo)
        f_lo = np.where(left | exact, f_mid, f_lo)
        hi = np.where(right | exact, mid, hi)
        f_hi = np.where(right | exact, f_mid, f_hi)

    denom = f_hi - f_lo
    with np.errstate(divide="ignore", invalid="ignore"):
        secant = lo - f_lo * (hi - lo) / denom
    safe = np.isfinite(secant) & (secant >= lo) & (secant <= hi) & (denom != 0.0)
    return np.where(safe, secant, 0.5 * (lo + hi)), lo, hi


def _collapsed_points(values: np.ndarray, floor: float):
    """Alternating sign pattern of a level, and the interior points that break it by rounding only."""
    pattern = (-1.0) ** np.arange(len(values))
    orientation = 1.0 if np.sum(np.sign(values) * pattern) >= 0.0 else -1.0
    expected = orientation * pattern
    off = np.flatnonzero(np.sign(values[1:-1]) != expected[1:-1]) + 1
    scale = float(np.max(np.abs(values)))
    return expected, off[np.abs(values[off]) <= floor * scale]


def _refine_in_theta(pair_c, pair_d, lo: float, hi: float, xtol: float) -> Optional[float]:
    """Re-solve a zero near x = +/-1 in theta, where sqrt(1 - x^2) = sin(theta/2) is exact."""

    def f(theta: float) -> float:
        half = 0.5 * theta
        return float(w_recurrence(pair_c, pair_d, np.array(math.cos(half)), np.array(math.sin(half))))

    theta_a = 2.0 * math.acos(min(hi, 1.0))
    theta_b = 2.0 * math.acos(max(lo, -1.0))
    fa, fb = f(theta_a), f(theta_b)
    if fa == 0.0:
        return theta_a
    if fb == 0.0:
        return theta_b
    if fa * fb > 0.0:
        return None
    return brentq(f, theta_a, theta_b, xtol=xtol, rtol=4 * np.finfo(float).eps)


def w_zero_levels(
    pair: SequencePair,
    n: int,
    tol: float = ZeroConfig.tol,
    cluster_factor: float = ZeroConfig.cluster_factor,
    theta_refine_margin: float = ZeroConfig.theta_refine_margin,
    collapse_floor: float = ZeroConfig.collapse_floor,
) -> List[ZeroSet]:
    """Zeros of W_1, ..., W_n, built level by level from the interlacing brackets.

    Zeros of consecutive levels can converge onto a mass point faster than double precision
    resolves. When W_k at a level k-1 zero is below collapse_floor times the largest endpoint
    value and has the wrong sign, the endpoint takes the alternating sign, the zero of W_k is
    placed at that endpoint to working precision, and a ClusterWarning is issued.

    Raises:
        BracketFailureError: if a bracket shows no sign change and its endpoints are not collapsed
    """
    if n < 1:
        raise InvalidParametersError("n must be >= 1")
    c_all, d_all = pair.coefficients(n)
    levels: List[ZeroSet] = []
    previous = np.empty(0)

    for k in range(1, n + 1):
        c, d = c_all[:k], d_all[:k]
        points = np.concatenate([[1.0], previous, [-1.0]])
        values = _level_values(c, d, points)
        expected, collapsed = _collapsed_points(values, collapse_floor)
        for i in collapsed:
            message = (
                f"level {k}: W_{k}({points[i]!r}) = {values[i]!r} has the wrong sign; "
                f"zero collapsed onto the level {k - 1} zero"
            )
            logger.warning(message)
            warnings.warn(message, ClusterWarning, stacklevel=2)
            values[i] = expected[i] * max(abs(values[i]), np.finfo(float).tiny)
        upper, lower = points[:-1], points[1:]
        f_upper, f_lower = values[:-1], values[1:]
        bad = np.flatnonzero(f_upper * f_lower >= 0.0)
        if bad.size:
            j = int(bad[0])
            raise BracketFailureError(
                k, j + 1, float(lower[j]), float(upper[j]), float(f_lower[j]), float(f_upper[j])
            )

        x, lo, hi = _bisect_brackets(c, d, lower, upper, f_lower, f_upper, tol)
        theta = 2.0 * np.arccos(x)

        near_edge = np.flatnonzero(np.abs(x) > 1.0 - theta_refine_margin)
        for j in near_edge:
            refined = _refine_in_theta(c, d, float(lo[j]) - tol, float(hi[j]) + tol, xtol=tol)
            if refined is not None:
                theta[j] = refined
                x[j] = math.cos(0.5 * refined)

        gaps = x[:-1] - x[1:]
        clustered = np.flatnonzero(gaps < cluster_factor * tol)
        for j in clustered:
            message = (
                f"level {k}: zeros {j + 1} and {j + 2} are {gaps[j]!r} apart; "
                f"brackets [{lo[j]!r}, {hi[j]!r}] and [{lo[j + 1]!r}, {hi[j + 1]!r}]"
            )
            logger.warning(message)
            warnings.warn(message, ClusterWarning, stacklevel=2)

        levels.append(ZeroSet(level=k, x_zeros=x, theta_zeros=theta))
        previous = x

    logger.debug(f"Located zeros of W_1 .. W_{n}")
    return levels


def w_zeros(pair: SequencePair, n: int, tol: float = ZeroConfig.tol, **kwargs) -> ZeroSet:
    """The n zeros of W_n (and, through theta, of R_n)."""
    return w_zero_levels(pair, n, tol, **kwargs)[-1]


def support_gap_check(
    pair: SequencePair,
    n: int,
    tol: float = ZeroConfig.tol,
    levels: Optional[List[ZeroSet]] = None,
) -> SupportGapReport:
    """Certify that no zero of W_k, k <= n, enters (-c/sqrt(1+c^2), c/sqrt(1+c^2)).

    The pair must satisfy c_k = (-1)^k ct_k with all ct_k of one sign; c is the smallest |ct_k|.

    Raises:
        HypothesisViolatedError: if the signs of (-1)^k c_k are mixed
        GapViolatedError: if a zero penetrates the forbidden interval
    """
    c_vals, _ = pair.coefficients(n)
    unfolded = ((-1.0) ** np.arange(1, n + 1)) * c_vals
    if not (np.all(unfolded >= 0.0) or np.all(unfolded <= 0.0)):
        raise HypothesisViolatedError(
            "c_k is not of the form (-1)^k ct_k with ct_k of one sign", {"checked": n}
        )
    c_bound = float(np.min(np.abs(unfolded)))
    x_bound = c_bound / math.sqrt(1.0 + c_bound * c_bound)

    if levels is None:
        levels = w_zero_levels(pair, n, tol)
    min_distance = math.inf
    for zs in levels[:n]:
        distance = np.abs(zs.x_zeros) - x_bound
        min_distance = min(min_distance, float(np.min(distance)))
        inside = np.flatnonzero(distance < -tol)
        if inside.size:
            j = int(inside[0])
            raise GapViolatedError(zs.level, j + 1, float(zs.x_zeros[j]), x_bound)

    theta_c = math.acos((c_bound * c_bound - 1.0) / (c_bound * c_bound + 1.0))
    return SupportGapReport(
        c_bound=c_bound,
        x_bound=x_bound,
        theta_c=theta_c,
        min_distance=min_distance,
        levels=len(levels[:n]),
        arcs=support_arcs(c_bound),
    )


def zero_arc_hull(levels: List[ZeroSet], gap: float = ZeroConfig.hull_gap) -> List[Arc]:
    """Heuristic arcs covering the zeros of all levels.

    Zeros are pooled and sorted in theta; a new arc starts wherever consecutive zeros are more
    than ``gap`` apart, and the first and last runs merge through theta = 0 when close enough.
    """
    thetas = np.sort(np.concatenate([zs.theta_zeros for zs in levels]))
    if thetas.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(thetas) > gap)
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [thetas.size - 1]])
    runs = [[float(thetas[s]), float(thetas[e])] for s, e in zip(starts, ends)]
    if len(runs) > 1 and (TWO_PI - runs[-1][1]) + runs[0][0] <= gap:
        last = runs.pop()
        runs[0] = [last[0], runs[0][1] + TWO_PI]
    return [Arc(start, end) for start, end in sorted(runs)]
