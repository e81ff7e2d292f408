"""Exception hierarchy for chainopuc.

Two families matter to callers:

- ``InputValidationError``: the supplied sequence or parameters are not admissible.
  The CLI exits with status 2.
- ``NumericalContractError``: the input was admissible but a computed quantity broke
  one of its guaranteed properties. The CLI exits with status 3.

Every exception carries a ``details`` dict that the CLI serialises into its error JSON.
"""

from typing import Any, Dict, Optional


class ChainOpucError(Exception):
    """Base class for all chainopuc errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class InputValidationError(ChainOpucError, ValueError):
    """Raised when an input sequence or parameter set is not admissible."""


class NumericalContractError(ChainOpucError, ArithmeticError):
    """Raised when a computed result violates a property it is guaranteed to have."""


# ---------------------------------------------------------------------------
# Input validation
# ---------------------------------------------------------------------------


class NotAChainSequenceError(InputValidationError):
    """Raised when a prefix cannot belong to a positive chain sequence."""

    def __init__(self, index: int, value: float):
        super().__init__(
            f"minimal parameter m_{index} = {value!r} is not below 1",
            {"index": index, "value": value},
        )
        self.index = index


class InvalidParametersError(InputValidationError):
    """Raised when a parameter list is outside its admissible range."""


class DegenerateDenominatorError(InputValidationError):
    """Raised when 1 - Re(tau * alpha) vanishes (input sits on the unit circle)."""

    def __init__(self, index: int, denominator: float):
        super().__init__(
            f"1 - Re(tau_{index - 1} alpha_{index - 1}) = {denominator!r} is degenerate",
            {"index": index, "denominator": denominator},
        )
        self.index = index


class HypothesisViolatedError(InputValidationError):
    """Raised when an operation's structural hypothesis fails on the stored prefix."""


class ChainViolationError(InputValidationError):
    """Raised when a transformed parameter leaves [0, 1)."""

    def __init__(self, index: int, value: float):
        super().__init__(
            f"transformed parameter m_{index} = {value!r} is outside (0, 1)",
            {"index": index, "value": value},
        )
        self.index = index


class NotACandidateError(InputValidationError):
    """Raised when a point is not a zero of phi_p* - phi_p."""

    def __init__(self, point: complex, residual: float):
        super().__init__(
            f"tau_p(w) - 1 = {residual!r} at w = {point!r}; not a gap candidate",
            {"re": point.real, "im": point.imag, "residual": residual},
        )


class OffBandError(InputValidationError):
    """Raised when a weight is requested outside the band interiors."""

    def __init__(self, theta: float, discriminant: float):
        super().__init__(
            f"theta = {theta!r} is not inside a band (discriminant {discriminant!r})",
            {"theta": theta, "discriminant": discriminant},
        )
        self.theta = theta


class NonRealDiscriminantError(InputValidationError):
    """Raised when the normalised transfer-matrix trace is not real."""

    def __init__(self, theta: float, imag: float):
        super().__init__(
            f"discriminant has imaginary part {imag!r} at theta = {theta!r}",
            {"theta": theta, "imag": imag},
        )


# ---------------------------------------------------------------------------
# Numerical contracts
# ---------------------------------------------------------------------------


class NoConvergenceError(NumericalContractError):
    """Raised when an iteration fails to settle within its configured cap."""


class DivisionByZeroError(NumericalContractError):
    """Raised when a backward maximal-parameter iterate reaches zero."""

    def __init__(self, index: int, value: float):
        super().__init__(
            f"maximal parameter iterate M_{index} = {value!r} is not positive",
            {"index": index, "value": value},
        )
        self.index = index


class InternalInvariantError(NumericalContractError):
    """Raised when an internal cross-check disagrees beyond tolerance."""


class BracketFailureError(NumericalContractError):
    """Raised when an interlacing bracket does not show a sign change."""

    def __init__(self, level: int, index: int, lower: float, upper: float, f_lower: float, f_upper: float):
        super().__init__(
            f"no sign change in bracket {index} at level {level}: "
            f"W({lower!r}) = {f_lower!r}, W({upper!r}) = {f_upper!r}",
            {"level": level, "j": index, "lower": lower, "upper": upper, "f_lower": f_lower, "f_upper": f_upper},
        )
        self.level = level
        self.index = index


class GapViolatedError(NumericalContractError):
    """Raised when a zero penetrates the forbidden interval of an alternating pair."""

    def __init__(self, level: int, index: int, x: float, bound: float):
        super().__init__(
            f"zero x_{{{level},{index}}} = {x!r} lies inside (-{bound!r}, {bound!r})",
            {"level": level, "j": index, "x": x, "bound": bound},
        )


class NodeAtOneError(NumericalContractError):
    """Raised when R_n(1) is too small for the weight at z = 1 to be defined."""


class NegativeWeightError(NumericalContractError):
    """Raised when a quadrature weight comes out non-positive."""

    def __init__(self, index: int, weight: float):
        super().__init__(f"weight lambda_{index} = {weight!r} is not positive", {"j": index, "weight": weight})
        self.index = index


class RootCountMismatchError(NumericalContractError):
    """Raised when the band-edge count disagrees with the period."""

    def __init__(self, found: Dict[str, int], expected: int, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(
            f"found {found} solutions of discriminant = +/-2, expected {expected} of each",
            {"found": found, "expected": expected, **(diagnostics or {})},
        )


class CandidateCountMismatchError(NumericalContractError):
    """Raised when the number of gap candidates disagrees with the period."""

    def __init__(self, found: int, expected: int):
        super().__init__(f"found {found} gap candidates, expected {expected}", {"found": found, "expected": expected})


class DenominatorVanishedError(NumericalContractError):
    """Raised when a denominator that must stay away from zero vanishes."""


class ClusterWarning(UserWarning):
    """Issued when zeros of one level, or of consecutive levels, sit closer than double precision resolves."""
