"""chainopuc.io: sequence input parsing and deterministic report writers."""

from .base import AlphaPayload, ChainPayload, PairPayload, detect_family
from .sequences import SequenceInput, load_sequence, parse_sequence
from .writers import CsvTable, csv_text, json_text, to_jsonable, write_artifacts

__all__ = [
    "AlphaPayload",
    "ChainPayload",
    "PairPayload",
    "detect_family",
    "SequenceInput",
    "load_sequence",
    "parse_sequence",
    "CsvTable",
    "csv_text",
    "json_text",
    "to_jsonable",
    "write_artifacts",
]
