"""Deterministic JSON and CSV output."""

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
from loguru import logger


@dataclass
class CsvTable:
    """A CSV artifact: fixed header plus numeric rows."""

    name: str
    header: List[str]
    rows: List[Sequence[Any]] = field(default_factory=list)


def format_number(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays and complex numbers into plain JSON types.

    Complex values become [re, im]; floats keep Python's shortest round-trip repr.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def json_text(command: str, result: Dict[str, Any], version: str) -> str:
    """Full report: sorted keys, no timestamps, versions under ``metadata``."""
    payload = {"metadata": {"command": command, "package": "chainopuc", "version": version}, "result": result}
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def csv_text(table: CsvTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([format_number(v) for v in row])
    return buffer.getvalue()


def write_artifacts(directory: str, files: Dict[str, str]) -> List[Path]:
    """Write each name -> text pair under ``directory`` with LF line endings."""
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        path = out_dir / name
        path.write_text(text, encoding="utf-8", newline="\n")
        logger.info(f"Wrote {path}")
        written.append(path)
    return written


def rows_from_columns(*columns: Iterable[Any]) -> List[List[Any]]:
    return [list(row) for row in zip(*columns)]
