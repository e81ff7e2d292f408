"""chainopuc: orthogonal polynomials on the unit circle through real chain-sequence pairs."""

__version__ = "0.1.0"

from .bijection import SequencePair, VerblunskySequence, pair_to_verblunsky, verblunsky_to_pair
from .chain_sequences import ChainSequence, MaximalParameters, maximal_parameters, minimal_parameters
from .closed_form import ExampleParams
from .exceptions import ChainOpucError, InputValidationError, NumericalContractError
from .periodic import PeriodicSpectrum, spectrum
from .quadrature import DiscreteMeasure, quadrature
from .zeros import ZeroSet, w_zeros

__all__ = [
    "__version__",
    "ChainSequence",
    "MaximalParameters",
    "maximal_parameters",
    "minimal_parameters",
    "SequencePair",
    "VerblunskySequence",
    "pair_to_verblunsky",
    "verblunsky_to_pair",
    "ZeroSet",
    "w_zeros",
    "DiscreteMeasure",
    "quadrature",
    "PeriodicSpectrum",
    "spectrum",
    "ExampleParams",
    "ChainOpucError",
    "InputValidationError",
    "NumericalContractError",
]
