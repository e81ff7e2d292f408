"""Spectral decomposition for periodic Verblunsky coefficients.

With alpha_{n+p} = alpha_n the orthonormal Szego pair advances by the transfer matrices

    A(alpha, z) = (1 - |alpha|^2)^{-1/2} [[z, -conj(alpha)], [-alpha z, 1]],
    T_p(z) = A(alpha_{p-1}, z) ... A(alpha_0, z),

and the discriminant Delta(e^{i theta}) = e^{-i p theta / 2} Tr T_p(e^{i theta}) is real on the circle.
Bands are the arcs where |Delta| <= 2, gaps the open arcs between them. Pure points can sit only at
the zeros of phi_p* - phi_p, one in each gap closure.

Angles are taken in [0, 2 pi). For odd p the factor e^{-i p theta / 2} flips sign across theta = 0;
root finding works on Delta^2 - 4, which is 2 pi periodic for every p, and edges are labelled +2 or -2
on the branch continuous from a cut inside a gap.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from scipy import integrate, optimize

from .arcs import TWO_PI, Arc
from .bijection import AlphaLike, SequencePair, VerblunskySequence, pair_to_verblunsky, validate_alpha
from .config import PeriodicConfig
from .exceptions import (
    CandidateCountMismatchError,
    DenominatorVanishedError,
    HypothesisViolatedError,
    InternalInvariantError,
    InvalidParametersError,
    NonRealDiscriminantError,
    NotACandidateError,
    OffBandError,
    RootCountMismatchError,
)

DICHOTOMY_NOTE = (
    "Only zeros of phi_p* - phi_p are reported as pure points; "
    "each open gap carries either no spectral mass or exactly one such point."
)

_SEAM_TOL = 1e-12
_BAND_EPS = 1e-12
_DENOM_EPS = 1e-14


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """One factor A(alpha_j, z) of the period product.

    Attributes:
        matrix: 2x2 complex entries (leading axes follow z)
        index: source index j
        z: argument
    """

    matrix: np.ndarray
    index: int
    z: np.ndarray

    @property
    def det(self) -> np.ndarray:
        m = self.matrix
        return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]


@dataclass(frozen=True)
class Band:
    """A band arc; orientation is +1 when Delta runs from 2 down to -2 along increasing theta."""

    arc: Arc
    orientation: int


@dataclass(frozen=True)
class Gap:
    """A gap arc; a closed gap has start == end (a double solution of Delta = +/-2)."""

    arc: Arc
    closed: bool


@dataclass(frozen=True, eq=False)
class PurePoint:
    """A confirmed mass point.

    Attributes:
        point: w on the unit circle
        theta: arg w in [0, 2 pi)
        mass: gamma / (gamma + delta)
        gamma: 1 - prod(q)
        delta: sum_{n=1}^{p} prod_{j<=n} q_j
        q: q_1 .. q_p
    """

    point: complex
    theta: float
    mass: float
    gamma: float
    delta: float
    q: np.ndarray


@dataclass(eq=False)
class PeriodicSpectrum:
    """Bands, gaps, candidates and pure points of one period block."""

    alpha: np.ndarray
    p: int
    bands: List[Band]
    gaps: List[Gap]
    plus_solutions: List[float]
    minus_solutions: List[float]
    candidates: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=complex))
    pure_points: List[PurePoint] = field(default_factory=list)
    note: str = DICHOTOMY_NOTE

    @property
    def candidate_thetas(self) -> np.ndarray:
        return _wrap(np.angle(self.candidates))


def _wrap(theta):
    out = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    return np.where(out >= TWO_PI - _SEAM_TOL, 0.0, out)


def _circular_distance(a: float, b: float) -> float:
    diff = abs(a - b) % TWO_PI
    return min(diff, TWO_PI - diff)


def period_block(alpha: AlphaLike) -> np.ndarray:
    """alpha_0 .. alpha_{p-1} of a purely periodic sequence.

    A bare list is taken as the period block itself. A VerblunskySequence with a tail must repeat
    its block over the whole stored prefix.
    """
    if isinstance(alpha, VerblunskySequence) and alpha.periodic_tail is not None:
        p = alpha.periodic_tail
        stored = alpha.alpha
        if len(stored) > p and np.max(np.abs(stored[p:] - stored[:-p])) > 1e-12:
            raise HypothesisViolatedError(
                "alpha is only eventually periodic; spectral analysis needs a purely periodic sequence",
                {"period": p},
            )
        return stored[:p]
    block = validate_alpha(alpha)
    if len(block) == 0:
        raise InvalidParametersError("period block is empty")
    return block


# ---------------------------------------------------------------------------
# Transfer matrices and the discriminant
# ---------------------------------------------------------------------------


def transfer_matrix(alpha_j: complex, z, index: int = 0) -> TransferMatrix:
    """A(alpha_j, z) with the symmetric (1 - |alpha_j|^2)^{-1/2} normalisation; det = z."""
    z = np.asarray(z, dtype=complex)
    rho = math.sqrt(1.0 - abs(alpha_j) ** 2)
    m = np.empty(z.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = z / rho
    m[..., 0, 1] = -np.conj(alpha_j) / rho
    m[..., 1, 0] = -alpha_j * z / rho
    m[..., 1, 1] = 1.0 / rho
    return TransferMatrix(matrix=m, index=index, z=z)


def transfer_product(alpha: AlphaLike, z) -> np.ndarray:
    """T_p(z) = A(alpha_{p-1}, z) ... A(alpha_0, z), shape z.shape + (2, 2)."""
    block = period_block(alpha)
    z = np.asarray(z, dtype=complex)
    product = np.broadcast_to(np.eye(2, dtype=complex), z.shape + (2, 2)).copy()
    for j, a in enumerate(block):
        product = transfer_matrix(a, z, j).matrix @ product
    return product


def _unwound(block: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(e^{-i p theta/2} Tr T_p, e^{-i p theta/2} phi_p) on the branch continuous in theta."""
    t = transfer_product(block, np.exp(1j * theta))
    phase = np.exp(-0.5j * len(block) * theta)
    trace = phase * (t[..., 0, 0] + t[..., 1, 1])
    phi = phase * (t[..., 0, 0] + t[..., 0, 1])
    return trace, phi


def discriminant(alpha: AlphaLike, theta, imag_tol: float = PeriodicConfig.imag_tol):
    """Delta(e^{i theta}) with theta reduced to [0, 2 pi).

    Raises:
        NonRealDiscriminantError: if the imaginary part exceeds imag_tol
    """
    block = period_block(alpha)
    theta_arr = np.mod(np.asarray(theta, dtype=float), TWO_PI)
    trace, _ = _unwound(block, theta_arr)
    imag = np.abs(trace.imag)
    if np.any(imag > imag_tol):
        k = int(np.argmax(imag))
        raise NonRealDiscriminantError(float(theta_arr.flat[k]), float(imag.flat[k]))
    if trace.ndim == 0:
        return float(trace.real)
    return trace.real


def orthonormal_phi(alpha: AlphaLike, z) -> Tuple[np.ndarray, np.ndarray]:
    """(phi_p(z), phi_p*(z)), orthonormal, from T_p applied to (1, 1)."""
    t = transfer_product(alpha, z)
    return t[..., 0, 0] + t[..., 0, 1], t[..., 1, 0] + t[..., 1, 1]


def _bracketed_root(f, a: float, b: float, xtol: float) -> float:
    """brentq on [a, b], tolerating endpoint values that round to the wrong side of zero."""
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        return a if abs(fa) < abs(fb) else b
    return optimize.brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps)


def _gap_function(block: np.ndarray):
    def g(theta: float) -> float:
        trace, _ = _unwound(block, np.array(theta, dtype=float))
        return float(trace.real) ** 2 - 4.0

    return g


def _branch_value(block: np.ndarray, cut: float, theta: float) -> float:
    """Delta at theta on the branch continuous over [cut, cut + 2 pi)."""
    trace, _ = _unwound(block, np.array(cut + (theta - cut) % TWO_PI, dtype=float))
    return float(trace.real)


def _branch_cut(open_gaps: List[Tuple[float, float]], closed_at: List[float]) -> float:
    """A cut for odd-p edge labelling: inside an open gap if any, else at a closed gap."""
    if open_gaps:
        start, end = open_gaps[0]
        return float(start + 0.5 * ((end - start) % TWO_PI))
    if closed_at:
        return float(closed_at[0])
    return 0.0


# ---------------------------------------------------------------------------
# Bands and gaps
# ---------------------------------------------------------------------------


def band_structure(
    alpha: AlphaLike,
    grid_per_period: int = PeriodicConfig.grid_per_period,
    root_tol: float = PeriodicConfig.root_tol,
    touch_tol: float = PeriodicConfig.touch_tol,
    imag_tol: float = PeriodicConfig.imag_tol,
) -> PeriodicSpectrum:
    """Locate the p solutions of each of Delta = 2 and Delta = -2 and assemble bands and gaps.

    Gaps are the runs of a periodic theta grid where Delta^2 - 4 > 0, with edges refined by brentq.
    Local maxima of Delta^2 - 4 inside bands are refined with a bounded scalar search; a maximum
    within touch_tol of zero is a closed gap and counts twice.

    Raises:
        NonRealDiscriminantError: if Delta leaves the real axis on the grid
        RootCountMismatchError: if the refined solutions are not p of each sign
    """
    block = period_block(alpha)
    p = len(block)
    n_grid = grid_per_period * p
    step = TWO_PI / n_grid
    theta = np.arange(n_grid) * step
    trace, _ = _unwound(block, theta)
    imag = np.abs(trace.imag)
    if np.any(imag > imag_tol):
        k = int(np.argmax(imag))
        raise NonRealDiscriminantError(float(theta[k]), float(imag[k]))
    g_grid = trace.real**2 - 4.0
    g = _gap_function(block)

    positive = g_grid > 0.0
    nxt = np.roll(np.arange(n_grid), -1)
    prv = np.roll(np.arange(n_grid), 1)

    def refine(lo: float, hi: float) -> float:
        return _bracketed_root(g, lo, hi, root_tol)

    def peak(lo: float, hi: float) -> Tuple[float, float]:
        res = optimize.minimize_scalar(
            lambda t: -g(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        return float(res.x), float(-res.fun)

    open_gaps: List[Tuple[float, float]] = []
    closed_at: List[float] = []

    rising = np.flatnonzero(~positive & positive[nxt])
    falling = np.flatnonzero(positive & ~positive[nxt])
    if positive.all():
        raise RootCountMismatchError({"plus": 0, "minus": 0}, p, {"grid": n_grid, "reason": "no band found"})
    if rising.size:
        starts = [refine(theta[k], theta[k] + step) for k in rising]
        ends = [refine(theta[k], theta[k] + step) for k in falling]
        ends_sorted = sorted(ends)
        for start, k in zip(starts, rising):
            # run of positive samples beginning after grid index k
            run = []
            j = int(nxt[k])
            while positive[j]:
                run.append(j)
                j = int(nxt[j])
            end = next((e for e in ends_sorted if e >= start), ends_sorted[0] + TWO_PI)
            top = max(run, key=lambda i: g_grid[i])
            if g_grid[top] <= touch_tol:
                t_star, g_star = peak(theta[top] - step, theta[top] + step)
                if g_star <= touch_tol:
                    closed_at.append(t_star)
                    continue
            open_gaps.append((start, end))

    band_max = np.flatnonzero(
        ~positive
        & ~positive[nxt]
        & ~positive[prv]
        & (g_grid >= g_grid[nxt])
        & (g_grid >= g_grid[prv])
        & (g_grid > g_grid.min())
    )
    for k in band_max:
        t_star, g_star = peak(theta[k] - step, theta[k] + step)
        if g_star > touch_tol:
            open_gaps.append((refine(theta[k] - step, t_star), refine(t_star, theta[k] + step)))
        elif g_star >= -touch_tol:
            closed_at.append(t_star)

    unique: List[float] = []
    for t_star in closed_at:
        if all(_circular_distance(t_star, u) > 1e-6 for u in unique):
            unique.append(t_star)
    closed_at = unique

    # Labels come from one branch cut inside a gap; a band crossing theta = 0 keeps one edge of each sign.
    cut = _branch_cut(open_gaps, closed_at)
    plus: List[float] = []
    minus: List[float] = []
    for start, end in open_gaps:
        for edge in (start, end):
            edge = float(_wrap(edge))
            (plus if _branch_value(block, cut, edge) > 0.0 else minus).append(edge)
    for t_star in closed_at:
        t_star = float(_wrap(t_star))
        if p % 2 == 1 and _circular_distance(t_star, cut) < 1e-6:
            plus.append(t_star)
            minus.append(t_star)
        else:
            target = plus if _branch_value(block, cut, t_star) > 0.0 else minus
            target.extend([t_star, t_star])

    logger.debug(f"p={p}: {len(open_gaps)} open gaps, {len(closed_at)} closed gaps on a {n_grid}-point grid")
    if len(plus) != p or len(minus) != p:
        raise RootCountMismatchError(
            {"plus": len(plus), "minus": len(minus)},
            p,
            {"grid": n_grid, "open_gaps": len(open_gaps), "closed_gaps": len(closed_at)},
        )

    gaps = [Gap(Arc(float(_wrap(s)), float(_wrap(s)) + ((e - s) % TWO_PI)), False) for s, e in open_gaps]
    gaps += [Gap(Arc(float(_wrap(t)), float(_wrap(t))), True) for t in closed_at]
    gaps.sort(key=lambda gp: gp.arc.start)

    bands: List[Band] = []
    for i, gap in enumerate(gaps):
        following = gaps[(i + 1) % len(gaps)]
        start = float(_wrap(gap.arc.end))
        length = TWO_PI - gap.arc.length if len(gaps) == 1 else (following.arc.start - gap.arc.end) % TWO_PI
        quarter_points = start + np.array([0.25, 0.75]) * length
        values, _ = _unwound(block, quarter_points)
        orientation = 1 if values[0].real > values[1].real else -1
        bands.append(Band(Arc(start, start + length), orientation))
    bands.sort(key=lambda b: b.arc.start)

    return PeriodicSpectrum(
        alpha=block,
        p=p,
        bands=bands,
        gaps=gaps,
        plus_solutions=sorted(plus),
        minus_solutions=sorted(minus),
    )


# ---------------------------------------------------------------------------
# Gap candidates, tau(w) and pure points
# ---------------------------------------------------------------------------


def gap_candidates(
    alpha: AlphaLike,
    grid_per_period: int = PeriodicConfig.grid_per_period,
    root_tol: float = PeriodicConfig.root_tol,
    candidate_tol: float = PeriodicConfig.candidate_tol,
) -> np.ndarray:
    """The p zeros of phi_p* - phi_p on the unit circle, ordered by angle.

    On the circle phi_p* - phi_p = -2i e^{i p theta/2} Im(e^{-i p theta/2} phi_p), so the zeros are
    those of h(theta) = Im(e^{-i p theta/2} phi_p(e^{i theta})), scanned on the continuous branch.

    Raises:
        CandidateCountMismatchError: if the number of verified zeros is not p
    """
    block = period_block(alpha)
    p = len(block)
    n_grid = grid_per_period * p
    theta = np.linspace(0.0, TWO_PI, n_grid + 1)
    _, u = _unwound(block, theta)
    h = u.imag

    def h_at(t: float) -> float:
        _, val = _unwound(block, np.array(t, dtype=float))
        return float(val.imag)

    found: List[float] = []
    for k in np.flatnonzero(h[:-1] * h[1:] <= 0.0):
        root = _bracketed_root(h_at, float(theta[k]), float(theta[k + 1]), root_tol)
        root = float(_wrap(root))
        if all(_circular_distance(root, f) > 1e-9 for f in found):
            found.append(root)

    points = np.exp(1j * np.array(sorted(found)))
    phi, phi_star = orthonormal_phi(block, points)
    residual = np.abs(phi_star - phi)
    verified = points[residual < candidate_tol]
    if len(verified) != p:
        raise CandidateCountMismatchError(len(verified), p)
    return verified


def tau_w(alpha: AlphaLike, w: complex, n: Optional[int] = None, eps: float = _DENOM_EPS) -> np.ndarray:
    """tau_0(w) = 1, tau_{j+1}(w) = (w tau_j - conj(alpha_j)) / (1 - w tau_j alpha_j), j < n.

    A period block is repeated as needed; n defaults to one period.

    Raises:
        DenominatorVanishedError: if |1 - w tau_j alpha_j| < eps
    """
    if isinstance(alpha, VerblunskySequence):
        block = alpha.alpha if alpha.periodic_tail is None else period_block(alpha)
    else:
        block = validate_alpha(alpha)
    if n is None:
        n = len(block)
    coeffs = np.resize(block, n)
    tau = np.empty(n + 1, dtype=complex)
    tau[0] = 1.0
    for j, a in enumerate(coeffs):
        denom = 1.0 - w * tau[j] * a
        if abs(denom) < eps:
            raise DenominatorVanishedError(f"1 - w tau_{j} alpha_{j} vanishes", {"j": j, "modulus": abs(denom)})
        tau[j + 1] = (w * tau[j] - np.conj(a)) / denom
    return tau


def tau_is_periodic(alpha: AlphaLike, w: complex, tol: float = PeriodicConfig.tau_tol) -> bool:
    """True when tau_p(w) = 1, i.e. tau_n(w) repeats with the period of alpha."""
    return bool(abs(tau_w(period_block(alpha), w)[-1] - 1.0) < tol)


def _q_factors(block: np.ndarray, w: complex, tau: np.ndarray) -> np.ndarray:
    coeffs = np.resize(block, len(tau) - 1)
    return np.abs(1.0 - w * tau[:-1] * coeffs) ** 2 / (1.0 - np.abs(coeffs) ** 2)


def pure_point_mass(
    alpha: AlphaLike,
    w: complex,
    tau_tol: float = PeriodicConfig.tau_tol,
    mass_tol: float = PeriodicConfig.mass_tol,
) -> Optional[PurePoint]:
    """Mass of the measure at a gap candidate w, or None when w carries no mass.

    With q_j = |1 - w tau_{j-1}(w) alpha_{j-1}|^2 / (1 - |alpha_{j-1}|^2) over one period,
    there is no mass when prod(q) >= 1; otherwise mass = gamma / (gamma + delta).

    Raises:
        NotACandidateError: if tau_p(w) != 1
    """
    block = period_block(alpha)
    tau = tau_w(block, w)
    residual = abs(tau[-1] - 1.0)
    if residual > tau_tol:
        raise NotACandidateError(complex(w), float(residual))
    q = _q_factors(block, w, tau)
    partial = np.cumprod(q)
    product = float(partial[-1])
    if product >= 1.0 - mass_tol:
        return None
    gamma = 1.0 - product
    delta = float(np.sum(partial))
    return PurePoint(
        point=complex(w),
        theta=float(_wrap(np.angle(w))),
        mass=gamma / (gamma + delta),
        gamma=gamma,
        delta=delta,
        q=q,
    )


def series_mass(
    alpha: AlphaLike,
    w: complex,
    terms: Optional[int] = None,
    tau_tol: float = PeriodicConfig.tau_tol,
) -> float:
    """1 / (1 + lambda_N(w)) with lambda_N = sum_{n=1}^{N} prod_{j<=n} q_j (N defaults to 10^4 periods).

    tau_n(w) is iterated over one period and q_{n+p} = q_n is repeated from it.

    Raises:
        NotACandidateError: if tau_p(w) != 1
    """
    block = period_block(alpha)
    p = len(block)
    if terms is None:
        terms = PeriodicConfig.series_terms_per_period * p
    tau = tau_w(block, w)
    residual = abs(tau[-1] - 1.0)
    if residual > tau_tol:
        raise NotACandidateError(complex(w), float(residual))
    partial = np.cumprod(_q_factors(block, w, tau))
    periods = -(-terms // p)
    with np.errstate(over="ignore", invalid="ignore"):
        blocks = np.power(partial[-1], np.arange(periods))[:, None] * partial[None, :]
        lam = float(np.sum(blocks.ravel()[:terms]))
    return 1.0 / (1.0 + lam)


# ---------------------------------------------------------------------------
# Absolutely continuous weight
# ---------------------------------------------------------------------------


def _weight_values(block: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    trace, u = _unwound(block, theta)
    delta = trace.real
    numerator = np.sqrt(np.clip(4.0 - delta**2, 0.0, None))
    denominator = 2.0 * np.abs(u.imag)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(denominator > 0.0, numerator / denominator, 0.0)
    return w, delta, denominator


def ac_weight(alpha: AlphaLike, theta: float, eps: float = _BAND_EPS) -> float:
    """w(theta) = sqrt(4 - Delta^2) / (2 |Im(e^{-i p theta/2} phi_p(e^{i theta}))|) on a band interior.

    Raises:
        OffBandError: if |Delta| >= 2 - eps
        DenominatorVanishedError: if the Im term vanishes
    """
    block = period_block(alpha)
    w, delta, denominator = _weight_values(block, np.array(theta, dtype=float))
    if abs(float(delta)) >= 2.0 - eps:
        raise OffBandError(float(theta), float(delta))
    if float(denominator) < _DENOM_EPS:
        raise DenominatorVanishedError(f"Im(phi_p) term vanishes at theta = {theta!r}", {"theta": float(theta)})
    return float(w)


def sample_weight(alpha: AlphaLike, theta) -> np.ndarray:
    """w(theta) on a grid, 0 outside the band interiors."""
    block = period_block(alpha)
    w, delta, _ = _weight_values(block, np.asarray(theta, dtype=float))
    return np.where(np.abs(delta) < 2.0, w, 0.0)


def band_integral(block: np.ndarray, band: Band, epsabs: float = 1e-11) -> float:
    """Integral of w over one band divided by 2 pi, with theta = edge +/- u^2 near both edges."""
    a, b = band.arc.start, band.arc.end
    mid = 0.5 * (a + b)
    half = math.sqrt(max(mid - a, 0.0))

    def left(u: float) -> float:
        w, _, _ = _weight_values(block, np.array(a + u * u))
        return float(w) * 2.0 * u

    def right(u: float) -> float:
        w, _, _ = _weight_values(block, np.array(b - u * u))
        return float(w) * 2.0 * u

    total = 0.0
    for f in (left, right):
        value, _ = integrate.quad(f, 0.0, half, limit=200, epsabs=epsabs, epsrel=1e-10)
        total += value
    return total / TWO_PI


def total_mass(spectrum: PeriodicSpectrum) -> float:
    """Band integrals of w / (2 pi) plus the pure-point masses."""
    ac = sum(band_integral(spectrum.alpha, band) for band in spectrum.bands)
    return ac + sum(pp.mass for pp in spectrum.pure_points)


# ---------------------------------------------------------------------------
# Full assembly
# ---------------------------------------------------------------------------


def spectrum(
    alpha: AlphaLike,
    config: Optional[PeriodicConfig] = None,
    cross_check: bool = True,
) -> PeriodicSpectrum:
    """Bands, gaps, gap candidates and confirmed pure points of a periodic sequence.

    Raises:
        InternalInvariantError: if a pure point falls outside every gap closure, its series mass
            disagrees with the closed form, or the masses leave (0, 1)
    """
    cfg = config or PeriodicConfig()
    block = period_block(alpha)
    result = band_structure(block, cfg.grid_per_period, cfg.root_tol, cfg.touch_tol, cfg.imag_tol)
    result.candidates = gap_candidates(block, cfg.grid_per_period, cfg.root_tol, cfg.candidate_tol)

    for w in result.candidates:
        point = pure_point_mass(block, w, cfg.tau_tol, cfg.mass_tol)
        if point is None:
            continue
        if not any(gap.arc.contains(point.theta, 1e-7) for gap in result.gaps):
            raise InternalInvariantError(
                f"pure point at theta = {point.theta!r} is outside every gap closure", {"theta": point.theta}
            )
        if cross_check and float(np.prod(point.q)) < 0.99:
            series = series_mass(block, w, cfg.series_terms_per_period * len(block), cfg.tau_tol)
            if abs(series - point.mass) > 1e-8:
                raise InternalInvariantError(
                    f"series mass {series!r} disagrees with closed form {point.mass!r}",
                    {"theta": point.theta, "series": series, "closed_form": point.mass},
                )
        result.pure_points.append(point)

    masses = [pp.mass for pp in result.pure_points]
    if any(not (0.0 < m < 1.0) for m in masses) or sum(masses) > 1.0 + 1e-12:
        raise InternalInvariantError("pure-point masses are not a sub-probability", {"masses": masses})
    logger.debug(f"p={len(block)}: {len(result.pure_points)} pure points")
    return result


# ---------------------------------------------------------------------------
# Periodicity and geometry of pairs
# ---------------------------------------------------------------------------


@dataclass
class PeriodicityReport:
    """Outcome of the (c, b) periodicity conditions.

    Attributes:
        periodic: both conditions hold at every tested n
        arg_residual: largest wrapped argument mismatch
        modulus_residual: largest modulus mismatch
        alpha_residual: largest |alpha_{n+p} - alpha_n| over the horizon, computed directly
        horizon: number of n tested
        symmetric: for odd p with c_{2n} = -c_{2n-1}, whether c vanishes; None otherwise
    """

    periodic: bool
    arg_residual: float
    modulus_residual: float
    alpha_residual: float
    horizon: int
    symmetric: Optional[bool] = None

    def as_dict(self) -> Dict[str, object]:
        return {
            "periodic": self.periodic,
            "arg_residual": self.arg_residual,
            "modulus_residual": self.modulus_residual,
            "alpha_residual": self.alpha_residual,
            "horizon": self.horizon,
            "symmetric": self.symmetric,
        }


def is_periodic_pair(
    pair: SequencePair, p: int, horizon: Optional[int] = None, tol: float = 1e-10
) -> PeriodicityReport:
    """Test whether the pair's Verblunsky coefficients have period p, from (c, b) alone.

    For each n < horizon, with X_k = (b_k - i c_k) / (1 - i c_k):

        sum_{j=n+1}^{n+p} arg((1 + i c_j) / (1 - i c_j)) = arg X_{n+1} - arg X_{n+p+1}  (mod 2 pi)
        |X_{n+1}| = |X_{n+p+1}|
    """
    if p < 1:
        raise InvalidParametersError("p must be >= 1")
    if horizon is None:
        horizon = pair.length + p if pair.periodic_tail is not None else pair.length - p
    if horizon < 1:
        raise InvalidParametersError(f"pair of length {pair.length} is too short to test period {p}")
    ext = pair.extended(horizon + p)
    c = ext.c[: horizon + p]
    b = ext.b[: horizon + p]
    x = (b - 1j * c) / (1.0 - 1j * c)
    rot = np.angle((1.0 + 1j * c) / (1.0 - 1j * c))
    window = np.convolve(rot, np.ones(p), mode="valid")[:horizon]

    x_now, x_later = x[:horizon], x[p : p + horizon]
    mismatch = window - (np.angle(x_now) - np.angle(x_later))
    wrapped = np.abs(np.angle(np.exp(1j * mismatch)))
    defined = (np.abs(x_now) > tol) & (np.abs(x_later) > tol)
    arg_residual = float(np.max(np.where(defined, wrapped, 0.0)))
    modulus_residual = float(np.max(np.abs(np.abs(x_now) ** 2 - np.abs(x_later) ** 2)))

    alpha = pair_to_verblunsky(ext.truncated(horizon + p)).alpha
    alpha_residual = float(np.max(np.abs(alpha[p:] - alpha[:-p])))
    periodic = arg_residual < tol and modulus_residual < tol

    symmetric = None
    if p % 2 == 1 and periodic:
        pairs_len = (len(c) // 2) * 2
        if np.allclose(c[1:pairs_len:2], -c[0:pairs_len:2], atol=tol):
            symmetric = bool(np.max(np.abs(c)) < 1e3 * tol)
    return PeriodicityReport(periodic, arg_residual, modulus_residual, alpha_residual, horizon, symmetric)


def parallel_lines_check(alpha: AlphaLike, p: Optional[int] = None, tol: float = 1e-9) -> bool:
    """True when alpha_{2k} - 1 is parallel to alpha_{2k+1} + 1 for every k in one period (p even)."""
    coeffs = alpha.alpha if isinstance(alpha, VerblunskySequence) else validate_alpha(alpha)
    if p is None:
        p = len(coeffs)
    if p % 2 != 0 or p < 2 or p > len(coeffs):
        raise InvalidParametersError("parallel-line test needs an even period within the stored prefix")
    if len(coeffs) > p and np.max(np.abs(coeffs[p:] - coeffs[:-p])) > tol:
        raise HypothesisViolatedError(f"alpha is not {p}-periodic on the stored prefix")
    v1 = coeffs[0:p:2] - 1.0
    v2 = coeffs[1:p:2] + 1.0
    cross = v1.real * v2.imag - v1.imag * v2.real
    return bool(np.all(np.abs(cross) < tol * np.abs(v1) * np.abs(v2)))


def pair_from_parallel_alpha(alpha: AlphaLike) -> SequencePair:
    """Rebuild (c, b) from an even block of alpha lying on the two parallel-line families.

    c_{2k+1} = y_{2k} / (x_{2k} - 1),          b_{2k+1} = 1 + ((x_{2k} - 1)^2 + y_{2k}^2) / (x_{2k} - 1)
    c_{2k+2} = -y_{2k+1} / (1 + x_{2k+1}),     b_{2k+2} = -1 + ((1 + x_{2k+1})^2 + y_{2k+1}^2) / (1 + x_{2k+1})
    """
    coeffs = alpha.alpha if isinstance(alpha, VerblunskySequence) else validate_alpha(alpha)
    if len(coeffs) % 2 != 0:
        raise InvalidParametersError("alpha block must have even length")
    even, odd = coeffs[0::2], coeffs[1::2]
    c = np.empty(len(coeffs))
    b = np.empty(len(coeffs))
    c[0::2] = even.imag / (even.real - 1.0)
    b[0::2] = 1.0 + ((even.real - 1.0) ** 2 + even.imag**2) / (even.real - 1.0)
    c[1::2] = -odd.imag / (1.0 + odd.real)
    b[1::2] = -1.0 + ((1.0 + odd.real) ** 2 + odd.imag**2) / (1.0 + odd.real)
    m = np.concatenate([[0.0], 0.5 * (1.0 - b)])
    return SequencePair.from_minimal(c, m, len(coeffs))


def parallel_alpha_from_parameters(c_odd, b) -> np.ndarray:
    """Period block of alpha for c_{2k+1} = c_odd[k], c_{2k+2} = -c_odd[k] and periodic b."""
    c_odd = np.asarray(c_odd, dtype=float)
    b = np.asarray(b, dtype=float)
    if len(b) != 2 * len(c_odd):
        raise InvalidParametersError("b must have twice as many entries as c_odd")
    c = np.empty(len(b))
    c[0::2] = c_odd
    c[1::2] = -c_odd
    pair = SequencePair.from_minimal(c, np.concatenate([[0.0], 0.5 * (1.0 - b)]), len(b))
    return pair_to_verblunsky(pair).alpha
