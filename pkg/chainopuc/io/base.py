"""Payload shapes and coefficient-family detection for sequence input."""

from typing import Any, Dict, List, Optional

try:
    from typing import TypedDict
except ImportError:
    from typing_extensions import TypedDict

from ..exceptions import InvalidParametersError

FAMILIES = ("pair_m", "pair_d", "alpha", "chain")


class PairPayload(TypedDict, total=False):
    c: List[float]
    m: List[float]
    d: List[float]
    tail_period: Optional[int]


class AlphaPayload(TypedDict, total=False):
    alpha: List[List[float]]
    tail_period: Optional[int]


class ChainPayload(TypedDict, total=False):
    d: List[float]
    tail_period: Optional[int]


def unwrap(payload: Dict[str, Any]) -> Dict[str, Any]:
    """Return the ``result`` object of a full report, or the payload itself."""
    inner = payload.get("result")
    if isinstance(inner, dict):
        return inner
    return payload


def detect_family(payload: Dict[str, Any]) -> str:
    """Identify which coefficient family a payload carries.

    Returns one of: "pair_m", "pair_d", "alpha", "chain".
    """
    keys = set(payload)

    # alpha never travels together with a real pair
    if "alpha" in keys:
        if keys & {"c", "m", "d"}:
            raise InvalidParametersError("payload mixes alpha with c/m/d; give exactly one coefficient family")
        return "alpha"

    if "c" in keys:
        if "m" in keys:
            return "pair_m"
        if "d" in keys:
            return "pair_d"
        raise InvalidParametersError("c must come with m or d")

    if "d" in keys:
        return "chain"

    raise InvalidParametersError("payload carries none of: alpha, c + m, c + d, d", {"keys": sorted(keys)})
