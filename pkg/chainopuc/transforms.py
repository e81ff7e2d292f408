"""Measure transformations expressed on pairs and on Verblunsky coefficients."""

from dataclasses import dataclass

import numpy as np
from loguru import logger

from .bijection import AlphaLike, SequencePair, VerblunskySequence, pair_to_verblunsky, unimodular_cumprod, validate_alpha
from .config import BijectionConfig
from .exceptions import ChainViolationError, HypothesisViolatedError, InternalInvariantError, InvalidParametersError


def conjugate_pair(pair: SequencePair) -> SequencePair:
    """(c, d) -> (-c, d); R_n of the result is conj(R_n(conj z))."""
    return SequencePair(c=-pair.c, chain=pair.chain, periodic_tail=pair.periodic_tail, tail_basis=pair.tail_basis)


@dataclass(frozen=True, eq=False)
class UnfoldingData:
    """Result of unfolding an alternating pair.

    Attributes:
        beta: beta_n = -(1 + i c_{2n}) / (1 - i c_{2n}), n = 1 .. N/2
        alpha_tilde: transformed Verblunsky coefficients
        pair_tilde: pair with c~_{2n-1} = c~_{2n} = c_{2n}, m~_{2n-1} = 1 - m_{2n-1}, m~_{2n} = m_{2n}
    """

    beta: np.ndarray
    alpha_tilde: np.ndarray
    pair_tilde: SequencePair


def unfold_alternating(
    pair: SequencePair,
    tol: float = 1e-14,
    check_tol: float = 1e-11,
    renormalize_every: int = BijectionConfig.renormalize_every,
) -> UnfoldingData:
    """Turn a pair with c_{2n} = -c_{2n-1} into one whose c is constant on each index pair.

    Raises:
        HypothesisViolatedError: if c_{2n} != -c_{2n-1} anywhere on the stored prefix
        ChainViolationError: if a transformed minimal parameter leaves (0, 1)
        InternalInvariantError: if the forward map of pair_tilde disagrees with alpha_tilde
    """
    if pair.length % 2:
        if pair.periodic_tail is None:
            raise InvalidParametersError("unfolding needs an even number of stored terms")
        pair = pair.extended(pair.length + 1)
    c, m = pair.c, pair.m
    odd_c, even_c = c[0::2], c[1::2]
    bad = np.flatnonzero(np.abs(even_c + odd_c) > tol * np.maximum(1.0, np.abs(odd_c)))
    if bad.size:
        k = int(bad[0]) + 1
        raise HypothesisViolatedError(f"c_{2 * k} != -c_{2 * k - 1}", {"n": k})

    beta = -(1.0 + 1j * even_c) / (1.0 - 1j * even_c)
    c_tilde = np.repeat(even_c, 2)
    m_tilde = m.copy()
    m_tilde[1::2] = 1.0 - m[1::2]
    outside = np.flatnonzero((m_tilde[1:] <= 0.0) | (m_tilde[1:] >= 1.0))
    if outside.size:
        k = int(outside[0]) + 1
        raise ChainViolationError(k, float(m_tilde[k]))
    period = pair.periodic_tail if pair.periodic_tail is not None and pair.periodic_tail % 2 == 0 else None
    pair_tilde = SequencePair.from_minimal(c_tilde, m_tilde, period if pair.tail_basis == "m" else None)

    alpha = pair_to_verblunsky(pair, renormalize_every).alpha
    squares = unimodular_cumprod(beta**2, renormalize_every)
    alpha_tilde = np.empty_like(alpha)
    alpha_tilde[0::2] = squares[:-1] * beta * alpha[0::2]
    alpha_tilde[1::2] = squares[1:] * alpha[1::2]

    forward = pair_to_verblunsky(pair_tilde, renormalize_every).alpha
    residual = float(np.max(np.abs(forward - alpha_tilde)))
    logger.debug(f"Unfolding cross-check residual {residual!r}")
    if residual > check_tol:
        raise InternalInvariantError(
            f"unfolded pair maps to coefficients {residual!r} away from the product formula",
            {"residual": residual},
        )
    return UnfoldingData(beta=beta, alpha_tilde=alpha_tilde, pair_tilde=pair_tilde)


def rotation_point(c: float) -> complex:
    """beta = -(1 + i c) / (1 - i c), the rotation that makes an alternating constant c constant."""
    return complex(-(1.0 + 1j * c) / (1.0 - 1j * c))


def rotate_alpha(alpha: AlphaLike, beta: complex, tol: float = 1e-12) -> np.ndarray:
    """alpha~_n = beta^{n+1} alpha_n, the coefficients of mu(beta z)."""
    if abs(abs(beta) - 1.0) > tol:
        raise InvalidParametersError(f"|beta| = {abs(beta)!r} is not 1")
    coeffs = alpha.alpha if isinstance(alpha, VerblunskySequence) else validate_alpha(alpha)
    powers = np.exp(1j * np.angle(beta) * np.arange(1, len(coeffs) + 1))
    return powers * coeffs
