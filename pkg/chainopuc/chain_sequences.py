"""Positive chain sequences and their minimal / maximal parameter sequences.

Indexing: ``d[k]`` holds d_{k+1} (d_1 ... d_N) while ``m[k]`` and ``M[k]`` hold m_k and
M_k for k = 0 ... N. A periodic tail of period p means d_{n+p} = d_n beyond the stored
prefix, i.e. the last p stored values repeat.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from .config import ChainConfig
from .exceptions import (
    DivisionByZeroError,
    InternalInvariantError,
    InvalidParametersError,
    NoConvergenceError,
    NotAChainSequenceError,
)


def as_real_array(values: Sequence[float], name: str) -> np.ndarray:
    """Return ``values`` as a 1-D float array, rejecting non-finite entries."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidParametersError(f"{name} must be a flat list of reals")
    if not np.all(np.isfinite(arr)):
        raise InvalidParametersError(f"{name} contains non-finite values")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, copy=True)
    out.setflags(write=False)
    return out


def check_period(period: Optional[int], length: int, name: str) -> None:
    if period is None:
        return
    if int(period) != period or period < 1:
        raise InvalidParametersError(f"{name} tail period must be a positive integer")
    if period > length:
        raise InvalidParametersError(f"{name} tail period {period} exceeds the stored length {length}")


def extend_periodic(values: np.ndarray, period: Optional[int], length: int, name: str = "sequence") -> np.ndarray:
    """Extend a stored prefix to ``length`` entries by repeating its last ``period`` values.

    Raises:
        InvalidParametersError: if more entries are requested than stored and there is no tail
    """
    stored = len(values)
    if length <= stored:
        return values[:length]
    if period is None:
        raise InvalidParametersError(
            f"{name} has {stored} stored terms, {length} requested and no periodic tail",
            {"stored": stored, "requested": length},
        )
    tail = values[stored - period :]
    reps = math.ceil((length - stored) / period)
    return np.concatenate([values, np.tile(tail, reps)])[:length]


def minimal_parameters(d: Sequence[float]) -> np.ndarray:
    """Compute the minimal parameter sequence m_0 = 0, m_n = d_n / (1 - m_{n-1}).

    Args:
        d: Positive reals d_1 ... d_N

    Returns:
        Array (m_0, ..., m_N)

    Raises:
        InvalidParametersError: if some d_n <= 0
        NotAChainSequenceError: if some m_n >= 1
    """
    d = as_real_array(d, "d")
    nonpositive = np.flatnonzero(d <= 0)
    if nonpositive.size:
        k = int(nonpositive[0])
        raise InvalidParametersError(f"d_{k + 1} = {d[k]!r} must be > 0", {"index": k + 1})

    m = np.zeros(len(d) + 1)
    for n in range(1, len(d) + 1):
        m[n] = d[n - 1] / (1.0 - m[n - 1])
        if m[n] >= 1.0:
            raise NotAChainSequenceError(n, float(m[n]))
    return m


def d_from_minimal(m: Sequence[float]) -> np.ndarray:
    """Inverse of :func:`minimal_parameters`: d_n = (1 - m_{n-1}) m_n.

    Raises:
        InvalidParametersError: if m_0 != 0 or some m_n (n >= 1) is outside (0, 1)
    """
    m = as_real_array(m, "m")
    if len(m) == 0 or m[0] != 0.0:
        raise InvalidParametersError("m_0 must be 0")
    bad = np.flatnonzero((m[1:] <= 0.0) | (m[1:] >= 1.0))
    if bad.size:
        k = int(bad[0]) + 1
        raise InvalidParametersError(f"m_{k} = {m[k]!r} must lie in (0, 1)", {"index": k})
    return (1.0 - m[:-1]) * m[1:]


@dataclass(frozen=True, eq=False)
class ChainSequence:
    """A stored prefix of a positive chain sequence.

    Attributes:
        d: (d_1, ..., d_N), all positive
        m: minimal parameters (m_0, ..., m_N), m_0 = 0
        periodic_tail: optional period p with d_{n+p} = d_n beyond the prefix
    """

    d: np.ndarray
    m: np.ndarray
    periodic_tail: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "d", frozen(self.d))
        object.__setattr__(self, "m", frozen(self.m))
        if len(self.m) != len(self.d) + 1:
            raise InvalidParametersError("m must have exactly one more entry than d")
        check_period(self.periodic_tail, len(self.d), "d")

    @classmethod
    def from_d(cls, d: Sequence[float], periodic_tail: Optional[int] = None) -> "ChainSequence":
        d = as_real_array(d, "d")
        return cls(d=d, m=minimal_parameters(d), periodic_tail=periodic_tail)

    @classmethod
    def from_minimal(cls, m: Sequence[float], periodic_tail: Optional[int] = None) -> "ChainSequence":
        m = as_real_array(m, "m")
        return cls(d=d_from_minimal(m), m=m, periodic_tail=periodic_tail)

    @property
    def length(self) -> int:
        return len(self.d)

    def extended(self, length: int) -> "ChainSequence":
        """Return a copy holding at least ``length`` terms, realised from the tail."""
        if length <= self.length:
            return self
        d = extend_periodic(self.d, self.periodic_tail, length, "d")
        return ChainSequence.from_d(d, self.periodic_tail)


@dataclass(frozen=True, eq=False)
class MaximalParameters:
    """Maximal parameter sequence of a chain sequence.

    Attributes:
        M: (M_0, ..., M_N); M_0 is the jump of the measure at z = 1
        tail_depth: number of tail terms iterated (0 when the tail was solved exactly)
        tol: convergence tolerance that was used
        method: "fixed_point", "doubling" or "prefix"
        determinate: True when the maximal and minimal parameters coincide within tol
    """

    M: np.ndarray
    tail_depth: int
    tol: float
    method: str
    determinate: bool

    def __post_init__(self):
        object.__setattr__(self, "M", frozen(self.M))

    @property
    def jump_at_one(self) -> float:
        return float(self.M[0])


def _backward_iterate(d: np.ndarray, seed: float) -> np.ndarray:
    """M_{n-1} = 1 - d_n / M_n from M_L = seed down to M_0, L = len(d)."""
    M = np.empty(len(d) + 1)
    M[-1] = seed
    for n in range(len(d), 0, -1):
        if M[n] <= 0.0:
            raise DivisionByZeroError(n, float(M[n]))
        M[n - 1] = 1.0 - d[n - 1] / M[n]
    return M


def _tail_fixed_point(tail: np.ndarray) -> float:
    """Largest fixed point in (0, 1] of one tail period of x -> 1 - d/x.

    Each step is the Mobius map with matrix [[1, -d], [1, 0]]; the composition over a period
    is a single 2x2 matrix [[a, b], [c, e]] whose fixed points solve c x^2 + (e - a) x - b = 0.
    The seed-1 backward iteration decreases monotonically onto the largest of them.
    """
    F = np.eye(2)
    for dj in tail:
        F = F @ np.array([[1.0, -dj], [1.0, 0.0]])
        F /= np.max(np.abs(F))
    (a, b), (c, e) = F
    lin = e - a
    if abs(c) < 1e-300:
        roots = [b / lin]
    else:
        disc = lin * lin + 4.0 * c * b
        scale = lin * lin + abs(4.0 * c * b)
        if disc < 0.0:
            if disc < -1e-12 * scale:
                raise InvalidParametersError("periodic tail of d is not a positive chain sequence")
            disc = 0.0
        root = math.sqrt(disc)
        roots = [(-lin + root) / (2.0 * c), (-lin - root) / (2.0 * c)]
    admissible = [r for r in roots if 0.0 <= r <= 1.0 + 1e-12]
    if not admissible:
        raise InvalidParametersError("periodic tail of d has no admissible parameter fixed point")
    return min(max(admissible), 1.0)


def maximal_parameters(
    chain: ChainSequence,
    depth: Optional[int] = None,
    tol: float = ChainConfig.tol,
    max_depth: int = ChainConfig.max_depth,
    method: str = ChainConfig.method,
) -> MaximalParameters:
    """Compute the maximal parameter sequence (M_0, ..., M_N).

    With ``method="doubling"`` the backward iteration M_{n-1} = 1 - d_n / M_n is seeded with 1 at
    index N + depth (the tail supplies d beyond N) and depth doubles until M_0 moves by less than
    ``tol``. With ``method="fixed_point"`` the tail is solved exactly and only the prefix is iterated.
    Without a periodic tail the seed sits at index N and the result bounds the maximal parameters
    of every extension of the prefix.

    Raises:
        NoConvergenceError: if doubling passes ``max_depth`` without stabilising
        DivisionByZeroError: if an iterate M_n (n >= 1) reaches zero
    """
    if depth is None:
        depth = ChainConfig.initial_depth
    if depth < 1:
        raise InvalidParametersError("depth must be >= 1")
    n_stored = chain.length
    tail = chain.periodic_tail

    if tail is None:
        logger.warning("No periodic tail given; maximal parameters are those of the stored prefix alone")
        M = _backward_iterate(chain.d, 1.0)
        used, kind = 0, "prefix"
    elif method == "fixed_point":
        seed = _tail_fixed_point(chain.d[n_stored - tail :])
        logger.debug(f"Tail fixed point M_{n_stored} = {seed!r}")
        M = _backward_iterate(chain.d, seed)
        used, kind = 0, "fixed_point"
    elif method == "doubling":
        previous = None
        while True:
            d_ext = extend_periodic(chain.d, tail, n_stored + depth, "d")
            M = _backward_iterate(d_ext, 1.0)[: n_stored + 1]
            logger.debug(f"depth {depth}: M_0 = {M[0]!r}")
            if previous is not None and abs(M[0] - previous) < tol:
                break
            if 2 * depth > max_depth:
                raise NoConvergenceError(
                    f"M_0 did not stabilise within tol={tol} up to depth {depth}",
                    {"depth": depth, "last_change": None if previous is None else abs(M[0] - previous)},
                )
            previous = M[0]
            depth *= 2
        used, kind = depth, "doubling"
    else:
        raise InvalidParametersError(f"unknown method {method!r}")

    if M[0] < 0.0:
        if M[0] < -tol:
            raise DivisionByZeroError(0, float(M[0]))
        M[0] = 0.0
    if np.any(chain.m > M + max(tol, 1e-12)):
        k = int(np.argmax(chain.m - M))
        raise InternalInvariantError(
            f"minimal parameter m_{k} exceeds maximal parameter M_{k}",
            {"index": k, "m": float(chain.m[k]), "M": float(M[k])},
        )
    determinate = bool(np.all(M - chain.m < tol))
    return MaximalParameters(M=M, tail_depth=used, tol=tol, method=kind, determinate=determinate)
