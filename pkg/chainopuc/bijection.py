"""Correspondence between Verblunsky coefficients and (c, m) sequence pairs.

A pair consists of real c_1 ... c_N and a positive chain sequence d_1 ... d_N with minimal
parameters m_0 = 0, m_1 ... m_N. The forward map is

    alpha_{n-1} = conj(tau_{n-1}) (1 - 2 m_n - i c_n) / (1 - i c_n)
    tau_n = tau_{n-1} (1 - i c_n) / (1 + i c_n),   tau_0 = 1

and the inverse reads c_n, m_n off t = tau_{n-1} alpha_{n-1}:

    c_n = -Im t / (1 - Re t),   m_n = |1 - t|^2 / (2 (1 - Re t)).

Indexing follows the arrays: ``c[k]`` is c_{k+1}, ``alpha[k]`` is alpha_k, ``tau[k]`` is tau_k.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from .chain_sequences import ChainSequence, as_real_array, check_period, extend_periodic, frozen
from .config import BijectionConfig
from .exceptions import DegenerateDenominatorError, InternalInvariantError, InvalidParametersError


@dataclass(frozen=True, eq=False)
class SequencePair:
    """The real pair ({c_n}, {d_n}).

    Attributes:
        c: (c_1, ..., c_N)
        chain: the chain sequence holding d and the minimal parameters m
        periodic_tail: optional period p of the stored tail
        tail_basis: "m" when (c, m) repeat with period p, "d" when (c, d) do
    """

    c: np.ndarray
    chain: ChainSequence
    periodic_tail: Optional[int] = None
    tail_basis: str = "m"

    def __post_init__(self):
        object.__setattr__(self, "c", frozen(as_real_array(self.c, "c")))
        if len(self.c) != self.chain.length:
            raise InvalidParametersError(
                f"c has {len(self.c)} entries but d has {self.chain.length}",
                {"c": len(self.c), "d": self.chain.length},
            )
        if self.tail_basis not in ("m", "d"):
            raise InvalidParametersError("tail_basis must be 'm' or 'd'")
        check_period(self.periodic_tail, len(self.c), "pair")

    @classmethod
    def from_minimal(
        cls, c: Sequence[float], m: Sequence[float], periodic_tail: Optional[int] = None
    ) -> "SequencePair":
        """Build a pair from c_1..c_N and m_0..m_N; a tail repeats (c, m)."""
        return cls(c=c, chain=ChainSequence.from_minimal(m), periodic_tail=periodic_tail, tail_basis="m")

    @classmethod
    def from_d(cls, c: Sequence[float], d: Sequence[float], periodic_tail: Optional[int] = None) -> "SequencePair":
        """Build a pair from c_1..c_N and d_1..d_N; a tail repeats (c, d)."""
        return cls(
            c=c, chain=ChainSequence.from_d(d, periodic_tail), periodic_tail=periodic_tail, tail_basis="d"
        )

    @property
    def length(self) -> int:
        return len(self.c)

    @property
    def d(self) -> np.ndarray:
        return self.chain.d

    @property
    def m(self) -> np.ndarray:
        return self.chain.m

    @property
    def b(self) -> np.ndarray:
        """(b_1, ..., b_N) with b_n = 1 - 2 m_n."""
        return 1.0 - 2.0 * self.chain.m[1:]

    def extended(self, length: int) -> "SequencePair":
        """Return a pair holding at least ``length`` terms, realised from the periodic tail."""
        if length <= self.length:
            return self
        p = self.periodic_tail
        c = extend_periodic(self.c, p, length, "c")
        if self.tail_basis == "m":
            m = np.concatenate([[0.0], extend_periodic(self.m[1:], p, length, "m")])
            return SequencePair.from_minimal(c, m, p)
        d = extend_periodic(self.d, p, length, "d")
        return SequencePair.from_d(c, d, p)

    def truncated(self, length: int) -> "SequencePair":
        """Return the first ``length`` terms without a tail."""
        if length > self.length:
            raise InvalidParametersError(f"cannot truncate a pair of length {self.length} to {length}")
        return SequencePair.from_minimal(self.c[:length], self.m[: length + 1])

    def coefficients(self, n: int) -> Tuple[np.ndarray, np.ndarray]:
        """(c_1..c_n, d_1..d_n), extended from the tail when n exceeds the stored length."""
        pair = self.extended(n)
        return pair.c[:n], pair.d[:n]

    def chain_with_tail(self) -> ChainSequence:
        """Chain sequence whose d-tail realises this pair's tail.

        An m-tail of period p makes d_n = (1 - m_{n-1}) m_n periodic once both factors lie in the
        repeating block, so extending by p + 1 terms leaves a clean d-tail of the same period.
        """
        p = self.periodic_tail
        if p is None or self.tail_basis == "d":
            return self.chain
        ext = self.extended(self.length + p + 1)
        return ChainSequence(d=ext.d, m=ext.m, periodic_tail=p)


@dataclass(frozen=True, eq=False)
class VerblunskySequence:
    """Verblunsky coefficients with their unimodular companion sequence.

    Attributes:
        alpha: (alpha_0, ..., alpha_{N-1}), all strictly inside the unit disk
        tau: (tau_0, ..., tau_N) with tau_0 = 1 and |tau_n| = 1
        periodic_tail: optional period p with alpha_{n+p} = alpha_n beyond the prefix
    """

    alpha: np.ndarray
    tau: np.ndarray
    periodic_tail: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", frozen(np.asarray(self.alpha, dtype=complex)))
        object.__setattr__(self, "tau", frozen(np.asarray(self.tau, dtype=complex)))
        if len(self.tau) != len(self.alpha) + 1:
            raise InvalidParametersError("tau must have exactly one more entry than alpha")
        check_period(self.periodic_tail, len(self.alpha), "alpha")

    @classmethod
    def from_alpha(
        cls,
        alpha: Sequence[complex],
        periodic_tail: Optional[int] = None,
        renormalize_every: int = BijectionConfig.renormalize_every,
    ) -> "VerblunskySequence":
        alpha = validate_alpha(alpha)
        return cls(alpha=alpha, tau=_tau_from_alpha(alpha, renormalize_every), periodic_tail=periodic_tail)

    @property
    def length(self) -> int:
        return len(self.alpha)

    def extended(self, length: int) -> np.ndarray:
        """alpha_0 .. alpha_{length-1}, realised from the periodic tail."""
        return extend_periodic(self.alpha, self.periodic_tail, length, "alpha")


AlphaLike = Union[VerblunskySequence, Sequence[complex], np.ndarray]


def validate_alpha(alpha: AlphaLike, boundary_eps: float = BijectionConfig.boundary_eps) -> np.ndarray:
    """Return alpha as a complex array, rejecting |alpha_n| >= 1."""
    if isinstance(alpha, VerblunskySequence):
        return alpha.alpha
    arr = np.asarray(alpha, dtype=complex)
    if arr.ndim != 1:
        raise InvalidParametersError("alpha must be a flat list of complex numbers")
    if not np.all(np.isfinite(arr)):
        raise InvalidParametersError("alpha contains non-finite values")
    outside = np.flatnonzero(np.abs(arr) >= 1.0 - boundary_eps)
    if outside.size:
        k = int(outside[0])
        raise InvalidParametersError(f"|alpha_{k}| = {abs(arr[k])!r} is not below 1", {"index": k})
    return arr


def unimodular_cumprod(
    factors: Sequence[complex], renormalize_every: int = BijectionConfig.renormalize_every
) -> np.ndarray:
    """Running products 1, f_1, f_1 f_2, ... of unit-modulus factors.

    The running product is divided by its modulus every ``renormalize_every`` factors.
    """
    factors = np.asarray(factors, dtype=complex)
    out = np.empty(len(factors) + 1, dtype=complex)
    out[0] = 1.0
    acc = 1.0 + 0.0j
    for k, f in enumerate(factors, start=1):
        acc *= f
        if k % renormalize_every == 0:
            acc /= abs(acc)
        out[k] = acc
    return out


def tau_from_c(c: Sequence[float], renormalize_every: int = BijectionConfig.renormalize_every) -> np.ndarray:
    """tau_0 = 1, tau_n = prod_{k<=n} (1 - i c_k) / (1 + i c_k)."""
    c = as_real_array(c, "c")
    return unimodular_cumprod((1.0 - 1j * c) / (1.0 + 1j * c), renormalize_every)


def _tau_from_alpha(alpha: np.ndarray, renormalize_every: int) -> np.ndarray:
    tau = np.empty(len(alpha) + 1, dtype=complex)
    tau[0] = 1.0
    for n in range(1, len(alpha) + 1):
        t = tau[n - 1] * alpha[n - 1]
        tau[n] = tau[n - 1] * (1.0 - np.conj(t)) / (1.0 - t)
        if n % renormalize_every == 0:
            tau[n] /= abs(tau[n])
    return tau


def _tail_closes(tau: np.ndarray, period: Optional[int], tol: float = 1e-12) -> bool:
    """True when tau_N / tau_{N-p} = 1, so a repeating (c, m) block repeats alpha too."""
    if period is None:
        return False
    return abs(tau[-1] * np.conj(tau[-1 - period]) - 1.0) < tol


def pair_to_verblunsky(
    pair: SequencePair,
    renormalize_every: int = BijectionConfig.renormalize_every,
) -> VerblunskySequence:
    """Map a pair (c, m) to its Verblunsky coefficients.

    The returned sequence carries the pair's tail period only when the tail provably
    repeats alpha (the tail of (c, m) repeats and tau returns to itself over one period).

    Raises:
        InternalInvariantError: if some |alpha_n| >= 1 numerically
    """
    tau = tau_from_c(pair.c, renormalize_every)
    ic = 1j * pair.c
    alpha = np.conj(tau[:-1]) * (pair.b - ic) / (1.0 - ic)
    modulus = np.abs(alpha)
    if np.any(modulus >= 1.0):
        k = int(np.argmax(modulus))
        raise InternalInvariantError(f"|alpha_{k}| = {modulus[k]!r} >= 1", {"index": k})

    period = None
    if pair.tail_basis == "m" and _tail_closes(tau, pair.periodic_tail):
        period = pair.periodic_tail
    elif pair.periodic_tail is not None:
        logger.debug("Pair tail does not repeat alpha; alpha emitted without a tail")
    return VerblunskySequence(alpha=alpha, tau=tau, periodic_tail=period)


def verblunsky_to_pair(
    alpha: AlphaLike,
    periodic_tail: Optional[int] = None,
    boundary_eps: float = BijectionConfig.boundary_eps,
    renormalize_every: int = BijectionConfig.renormalize_every,
) -> SequencePair:
    """Recover the unique pair (c, m) of a Verblunsky sequence.

    Raises:
        InvalidParametersError: if some |alpha_n| >= 1
        DegenerateDenominatorError: if 1 - Re(tau_{n-1} alpha_{n-1}) < boundary_eps
    """
    if isinstance(alpha, VerblunskySequence) and periodic_tail is None:
        periodic_tail = alpha.periodic_tail
    alpha = validate_alpha(alpha, boundary_eps)
    n_terms = len(alpha)
    c = np.empty(n_terms)
    m = np.zeros(n_terms + 1)
    tau = np.empty(n_terms + 1, dtype=complex)
    tau[0] = 1.0
    for n in range(1, n_terms + 1):
        t = tau[n - 1] * alpha[n - 1]
        denom = 1.0 - t.real
        if abs(denom) < boundary_eps:
            raise DegenerateDenominatorError(n, float(denom))
        c[n - 1] = -t.imag / denom
        m[n] = 0.5 * abs(1.0 - t) ** 2 / denom
        tau[n] = tau[n - 1] * (1.0 - np.conj(t)) / (1.0 - t)
        if n % renormalize_every == 0:
            tau[n] /= abs(tau[n])

    period = periodic_tail if _tail_closes(tau, periodic_tail) else None
    if periodic_tail is not None and period is None:
        logger.debug("Alpha tail does not repeat (c, m); pair emitted without a tail")
    return SequencePair.from_minimal(c, m, period)
