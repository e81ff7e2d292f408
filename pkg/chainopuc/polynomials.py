"""Recurrence evaluation for the polynomial families attached to a pair or to alpha.

Families:

- Szego: phi_n(z) = z phi_{n-1}(z) - conj(alpha_{n-1}) phi*_{n-1}(z),
  phi*_n(z) = phi*_{n-1}(z) - alpha_{n-1} z phi_{n-1}(z), phi_0 = phi*_0 = 1 (monic).
- R: R_{n+1}(z) = [(1 + i c_{n+1}) z + (1 - i c_{n+1})] R_n(z) - 4 d_{n+1} z R_{n-1}(z), R_0 = 1.
- Q: the same recurrence with Q_0 = 0, Q_1 = 2 d_1.
- W: W_{n+1}(x) = (x - c_{n+1} sqrt(1 - x^2)) W_n(x) - d_{n+1} W_{n-1}(x), W_0 = 1,
  so that W_n(cos(theta/2)) = 2^-n e^{-i n theta/2} R_n(e^{i theta}).

Coefficient arrays are ascending in degree. Evaluation works on scalars or numpy arrays.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .bijection import AlphaLike, SequencePair, VerblunskySequence, pair_to_verblunsky, validate_alpha
from .config import PolynomialConfig
from .exceptions import HypothesisViolatedError, InvalidParametersError


@dataclass(frozen=True, eq=False)
class SzegoState:
    """Values of the monic Szego polynomials at z.

    Attributes:
        n: degree
        phi: phi_n(z)
        phi_star: phi*_n(z)
        kappa: normalisation, phi_n * kappa is orthonormal
    """

    n: int
    phi: np.ndarray
    phi_star: np.ndarray
    kappa: float

    @property
    def orthonormal(self) -> np.ndarray:
        return self.kappa * self.phi

    @property
    def orthonormal_star(self) -> np.ndarray:
        return self.kappa * self.phi_star


@dataclass(frozen=True, eq=False)
class PolyCoeffs:
    """Coefficients of one polynomial, ascending in degree.

    Attributes:
        coeffs: complex coefficients c_0 ... c_deg
        family: "R", "Q", "phi" or "phi_star"
    """

    coeffs: np.ndarray
    family: str

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, z):
        return npoly.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def self_inversive_residual(self) -> float:
        """max_k |a_k - conj(a_{deg-k})| relative to the largest coefficient."""
        a = self.coeffs
        return float(np.max(np.abs(a - np.conj(a[::-1]))) / np.max(np.abs(a)))


@dataclass(frozen=True, eq=False)
class ScaledValue:
    """A recurrence value held as mantissa * 2**exponent.

    Attributes:
        mantissa: scaled value
        exponent: integer power-of-two exponent (array when evaluated on an array)
        derivative: scaled derivative sharing the same exponent, if requested
    """

    mantissa: np.ndarray
    exponent: np.ndarray
    derivative: Optional[np.ndarray] = None

    @property
    def value(self) -> np.ndarray:
        return self.mantissa * np.exp2(self.exponent)

    @property
    def derivative_value(self) -> Optional[np.ndarray]:
        if self.derivative is None:
            return None
        return self.derivative * np.exp2(self.exponent)


# ---------------------------------------------------------------------------
# Szego polynomials
# ---------------------------------------------------------------------------


def alpha_prefix(alpha: AlphaLike, n: Optional[int] = None) -> np.ndarray:
    """alpha_0 .. alpha_{n-1}; a periodic VerblunskySequence is extended as needed."""
    if isinstance(alpha, VerblunskySequence):
        return alpha.alpha if n is None else alpha.extended(n)
    alpha = validate_alpha(alpha)
    if n is None:
        return alpha
    if n > len(alpha):
        raise InvalidParametersError(f"degree {n} needs {n} coefficients, {len(alpha)} given")
    return alpha[:n]


def szego_eval(alpha: AlphaLike, z, n: Optional[int] = None) -> SzegoState:
    """Evaluate phi_n, phi*_n (monic) and kappa_n at z by the paired recurrence."""
    coeffs = alpha_prefix(alpha, n)
    z = np.asarray(z, dtype=complex)
    phi = np.ones_like(z)
    phi_star = np.ones_like(z)
    kappa = 1.0
    for a in coeffs:
        phi, phi_star = z * phi - np.conj(a) * phi_star, phi_star - a * z * phi
        kappa /= np.sqrt(1.0 - abs(a) ** 2)
    return SzegoState(n=len(coeffs), phi=phi, phi_star=phi_star, kappa=float(kappa))


def szego_coeffs(alpha: AlphaLike, n: Optional[int] = None) -> Tuple[PolyCoeffs, PolyCoeffs]:
    """Coefficient arrays of the monic phi_n and phi*_n."""
    coeffs = alpha_prefix(alpha, n)
    phi = np.array([1.0 + 0.0j])
    phi_star = np.array([1.0 + 0.0j])
    for a in coeffs:
        z_phi = np.concatenate([[0.0], phi])
        phi, phi_star = (
            z_phi - np.conj(a) * np.concatenate([phi_star, [0.0]]),
            np.concatenate([phi_star, [0.0]]) - a * z_phi,
        )
    return PolyCoeffs(phi, "phi"), PolyCoeffs(phi_star, "phi_star")


# ---------------------------------------------------------------------------
# R and Q
# ---------------------------------------------------------------------------


def _recurrence_coeffs(c: np.ndarray, d: np.ndarray, prev: np.ndarray, cur: np.ndarray, start: int) -> np.ndarray:
    for k in range(start, len(c)):
        ic = 1j * c[k]
        nxt = np.zeros(max(len(cur), len(prev)) + 1, dtype=complex)
        nxt[: len(cur)] += (1.0 - ic) * cur
        nxt[1 : len(cur) + 1] += (1.0 + ic) * cur
        nxt[1 : len(prev) + 1] -= 4.0 * d[k] * prev
        prev, cur = cur, nxt
    return cur


def _check_coeff_degree(n: int, max_degree: int) -> None:
    if n < 0:
        raise InvalidParametersError("degree must be >= 0")
    if n > max_degree:
        raise InvalidParametersError(
            f"coefficient arrays are built up to degree {max_degree}; use evaluation for degree {n}",
            {"n": n, "max_coeff_degree": max_degree},
        )


def r_poly(pair: SequencePair, n: int, max_degree: int = PolynomialConfig.max_coeff_degree) -> PolyCoeffs:
    """Coefficients of R_n."""
    _check_coeff_degree(n, max_degree)
    c, d = pair.coefficients(n)
    coeffs = _recurrence_coeffs(c, d, np.zeros(1, dtype=complex), np.ones(1, dtype=complex), 0)
    return PolyCoeffs(coeffs, "R")


def q_poly(pair: SequencePair, n: int, max_degree: int = PolynomialConfig.max_coeff_degree) -> PolyCoeffs:
    """Coefficients of Q_n (degree n - 1 for n >= 1)."""
    _check_coeff_degree(n, max_degree)
    if n == 0:
        return PolyCoeffs(np.zeros(1, dtype=complex), "Q")
    c, d = pair.coefficients(n)
    first = np.array([2.0 * d[0]], dtype=complex)
    coeffs = _recurrence_coeffs(c, d, np.zeros(1, dtype=complex), first, 1)
    return PolyCoeffs(coeffs, "Q")


def _rescale(arrays, exponent):
    scale = np.max(np.abs(np.stack(arrays)), axis=0)
    _, e = np.frexp(scale)
    e = np.where(scale > 0, e, 0)
    factor = np.ldexp(1.0, -e)
    return [a * factor for a in arrays], exponent + e


def _three_term_eval(
    c: np.ndarray,
    d: np.ndarray,
    z,
    second_kind: bool,
    with_derivative: bool,
    rescale: bool,
) -> ScaledValue:
    z = np.asarray(z, dtype=complex)
    exponent = np.zeros(z.shape, dtype=int)
    zero = np.zeros_like(z)
    if second_kind:
        if len(c) == 0:
            return ScaledValue(zero, exponent, zero.copy() if with_derivative else None)
        prev, cur, start = zero, np.full_like(z, 2.0 * d[0]), 1
    else:
        prev, cur, start = zero, np.ones_like(z), 0
    dprev, dcur = zero.copy(), zero.copy()

    for k in range(start, len(c)):
        ic = 1j * c[k]
        a = (1.0 + ic) * z + (1.0 - ic)
        nxt = a * cur - 4.0 * d[k] * z * prev
        if with_derivative:
            dnxt = (1.0 + ic) * cur + a * dcur - 4.0 * d[k] * (prev + z * dprev)
            dprev, dcur = dcur, dnxt
        prev, cur = cur, nxt
        if rescale:
            if with_derivative:
                (prev, cur, dprev, dcur), exponent = _rescale((prev, cur, dprev, dcur), exponent)
            else:
                (prev, cur), exponent = _rescale((prev, cur), exponent)

    return ScaledValue(cur, exponent, dcur if with_derivative else None)


def r_eval(
    pair: SequencePair,
    n: int,
    z,
    with_derivative: bool = False,
    rescale: bool = PolynomialConfig.rescale,
) -> ScaledValue:
    """Evaluate R_n (and optionally R_n') at z without building coefficients."""
    c, d = pair.coefficients(n)
    return _three_term_eval(c, d, z, second_kind=False, with_derivative=with_derivative, rescale=rescale)


def q_eval(pair: SequencePair, n: int, z, rescale: bool = PolynomialConfig.rescale) -> ScaledValue:
    """Evaluate Q_n at z without building coefficients."""
    c, d = pair.coefficients(n)
    return _three_term_eval(c, d, z, second_kind=True, with_derivative=False, rescale=rescale)


# ---------------------------------------------------------------------------
# W (real trigonometric form)
# ---------------------------------------------------------------------------


def w_recurrence(c: np.ndarray, d: np.ndarray, x: np.ndarray, s: np.ndarray) -> np.ndarray:
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for k in range(len(c)):
        prev, cur = cur, (x - c[k] * s) * cur - d[k] * prev
    return cur


def w_eval(pair: SequencePair, n: int, x) -> np.ndarray:
    """Evaluate W_n(x) for |x| <= 1."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise InvalidParametersError("W_n is evaluated on [-1, 1] only")
    c, d = pair.coefficients(n)
    return w_recurrence(c, d, x, np.sqrt((1.0 - x) * (1.0 + x)))


def w_eval_theta(pair: SequencePair, n: int, theta) -> np.ndarray:
    """W_n(cos(theta/2)) with sqrt(1 - x^2) taken as sin(theta/2), theta in [0, 2 pi]."""
    half = 0.5 * np.asarray(theta, dtype=float)
    c, d = pair.coefficients(n)
    return w_recurrence(c, d, np.cos(half), np.sin(half))


def w_from_r_check(pair: SequencePair, n: int, theta) -> np.ndarray:
    """|2^-n e^{-i n theta/2} R_n(e^{i theta}) - W_n(cos(theta/2))| for theta in (0, 2 pi)."""
    theta = np.asarray(theta, dtype=float)
    if np.any((theta <= 0.0) | (theta >= 2.0 * np.pi)):
        raise InvalidParametersError("theta must lie in (0, 2 pi)")
    sv = r_eval(pair, n, np.exp(1j * theta), rescale=True)
    lhs = sv.mantissa * np.exp(-0.5j * n * theta) * np.exp2(sv.exponent - n)
    return np.abs(lhs - w_eval(pair, n, np.cos(0.5 * theta)))


def r_from_szego_residual(pair: SequencePair, n: int, z) -> np.ndarray:
    """Relative gap between R_n(z) and its expression through the monic Szego polynomials.

    R_n(z) = prod(1 - t_j) / prod(1 - Re t_j) * (z phi_n(z) - tau_n phi*_n(z)) / (z - 1),
    with t_j = tau_{j-1} alpha_{j-1}. Conditioning degrades as t_j approaches 1.
    """
    v = pair_to_verblunsky(pair.extended(n).truncated(n))
    t = v.tau[:-1] * v.alpha
    prefactor = np.prod(1.0 - t) / np.prod(1.0 - t.real)
    z = np.asarray(z, dtype=complex)
    state = szego_eval(v.alpha, z)
    rhs = prefactor * (z * state.phi - v.tau[-1] * state.phi_star) / (z - 1.0)
    lhs = r_eval(pair, n, z, rescale=False).value
    return np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))


# ---------------------------------------------------------------------------
# Alternating-sign quotients
# ---------------------------------------------------------------------------


def alternating_constant(pair: SequencePair, n: int, tol: float = 1e-14) -> float:
    """Return c when c_k = (-1)^k c for k <= n, else raise HypothesisViolatedError."""
    c_vals, _ = pair.coefficients(max(n, 1))
    signs = (-1.0) ** np.arange(1, len(c_vals) + 1)
    c = float(signs[0] * c_vals[0])
    if np.any(np.abs(signs * c_vals - c) > tol * max(1.0, abs(c))):
        raise HypothesisViolatedError("c_n is not of the form (-1)^n c on the requested prefix")
    return c


def r_odd_quotient(
    pair: SequencePair, degree: int, max_degree: int = PolynomialConfig.max_coeff_degree
) -> Tuple[PolyCoeffs, float]:
    """Divide R_{2n+1} by (1 - i c) z + (1 + i c) when c_k = (-1)^k c.

    Returns the quotient and the modulus of the remainder.
    """
    if degree % 2 != 1:
        raise InvalidParametersError("degree must be odd")
    c = alternating_constant(pair, degree)
    r = r_poly(pair, degree, max_degree)
    quotient, remainder = npoly.polydiv(r.coeffs, np.array([1.0 + 1j * c, 1.0 - 1j * c]))
    return PolyCoeffs(quotient, "R"), float(np.max(np.abs(remainder)))


def w_odd_quotient_eval(pair: SequencePair, degree: int, x, min_divisor: float = 1e-12) -> np.ndarray:
    """W_{2n+1}(x) / (x + c sqrt(1 - x^2)) when c_k = (-1)^k c."""
    if degree % 2 != 1:
        raise InvalidParametersError("degree must be odd")
    c = alternating_constant(pair, degree)
    x = np.asarray(x, dtype=float)
    divisor = x + c * np.sqrt((1.0 - x) * (1.0 + x))
    if np.any(np.abs(divisor) < min_divisor):
        raise InvalidParametersError("x is a zero of x + c sqrt(1 - x^2)")
    return w_eval(pair, degree, x) / divisor
