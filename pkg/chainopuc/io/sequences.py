"""Read sequence input from inline JSON, a file or stdin."""

import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from loguru import logger

from ..bijection import SequencePair, VerblunskySequence
from ..chain_sequences import ChainSequence
from ..exceptions import InvalidParametersError
from .base import detect_family, unwrap


@dataclass(frozen=True, eq=False)
class SequenceInput:
    """One parsed sequence; exactly one of pair / alpha / chain is set."""

    family: str
    pair: Optional[SequencePair] = None
    alpha: Optional[VerblunskySequence] = None
    chain: Optional[ChainSequence] = None


def read_source(source: Optional[str]) -> str:
    """Return raw JSON text from inline JSON, "-" (stdin) or a file path."""
    if source is None:
        raise InvalidParametersError("no --input given")
    if source.strip().startswith("{"):
        return source
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if not path.is_file():
        raise InvalidParametersError(f"input file not found: {source}", {"path": source})
    return path.read_text(encoding="utf-8")


def _tail(payload: Dict[str, Any]) -> Optional[int]:
    tail = payload.get("tail_period")
    if tail is None:
        return None
    if isinstance(tail, bool) or not isinstance(tail, int):
        raise InvalidParametersError("tail_period must be an integer or null")
    return tail


def _reals(payload: Dict[str, Any], key: str) -> List[float]:
    values = payload[key]
    if not isinstance(values, list) or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
        raise InvalidParametersError(f"{key} must be a list of numbers")
    return [float(v) for v in values]


def _complexes(values: Any) -> np.ndarray:
    if not isinstance(values, list):
        raise InvalidParametersError("alpha must be a list of [re, im] pairs")
    out = []
    for entry in values:
        if isinstance(entry, (int, float)) and not isinstance(entry, bool):
            out.append(complex(entry, 0.0))
        elif isinstance(entry, list) and len(entry) == 2:
            out.append(complex(float(entry[0]), float(entry[1])))
        else:
            raise InvalidParametersError(f"alpha entry {entry!r} is not [re, im]")
    return np.array(out, dtype=complex)


def _minimal(m: List[float], n_terms: int) -> List[float]:
    """Accept m listed from m_1, or from m_0 = 0."""
    if len(m) == n_terms:
        return [0.0] + m
    if len(m) == n_terms + 1 and m[0] == 0.0:
        return m
    raise InvalidParametersError(f"m must list {n_terms} values (m_1..m_N) or {n_terms + 1} starting with m_0 = 0")


def parse_sequence(payload: Dict[str, Any]) -> SequenceInput:
    """Build the domain object for a decoded JSON payload."""
    if not isinstance(payload, dict):
        raise InvalidParametersError("input must be a JSON object")
    payload = unwrap(payload)
    family = detect_family(payload)
    tail = _tail(payload)

    if family == "alpha":
        alpha = VerblunskySequence.from_alpha(_complexes(payload["alpha"]), periodic_tail=tail)
        return SequenceInput(family, alpha=alpha)
    if family == "chain":
        return SequenceInput(family, chain=ChainSequence.from_d(_reals(payload, "d"), tail))

    c = _reals(payload, "c")
    if family == "pair_m":
        pair = SequencePair.from_minimal(c, _minimal(_reals(payload, "m"), len(c)), tail)
    else:
        pair = SequencePair.from_d(c, _reals(payload, "d"), tail)
    return SequenceInput(family, pair=pair)


def load_sequence(source: Optional[str]) -> SequenceInput:
    """Read and parse one sequence input."""
    text = read_source(source)
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidParametersError(
            f"input is not valid JSON: {e.msg}", {"line": e.lineno, "column": e.colno}
        ) from e
    parsed = parse_sequence(payload)
    logger.debug(f"Parsed {parsed.family} input")
    return parsed
