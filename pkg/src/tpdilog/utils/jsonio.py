"""
Canonical JSON documents for coordinates, matrices and reports.

Rationals are written as "p/q" strings, always with the denominator, and
keys are sorted so equal inputs produce identical bytes.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Union

from ..core import InvalidCoordinatesError, InvalidIndexError, JacobiCoords, SquareMatrix

logger = logging.getLogger(__name__)

Document = Dict[str, object]


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: object) -> Fraction:
    """Accept "p/q" or "p" (integers are tolerated as well)."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ValueError(f"rational must be a string like '3/2', got {text!r}")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"cannot parse rational {text!r}: {e}") from None


def coords_to_document(coords: JacobiCoords) -> Document:
    return {"n": coords.n, "x": {f"{i},{j}": format_rational(v) for (i, j), v in coords.items()}}


def coords_from_document(document: Document) -> JacobiCoords:
    n = _read_dimension(document)
    raw = document.get("x")
    if not isinstance(raw, dict):
        raise InvalidCoordinatesError("coordinate document needs an object under 'x'")
    mapping = {}
    for key, value in raw.items():
        try:
            i, j = (int(part) for part in key.split(","))
        except ValueError:
            raise InvalidCoordinatesError(f"bad coordinate key {key!r}, expected 'i,j'") from None
        mapping[(i, j)] = parse_rational(value)
    return JacobiCoords.from_mapping(n, mapping)


def matrix_to_document(M: SquareMatrix) -> Document:
    return {"n": M.n, "entries": [[format_rational(v) for v in row] for row in M.rows]}


def matrix_from_document(document: Document) -> SquareMatrix:
    n = _read_dimension(document)
    entries = document.get("entries")
    if not isinstance(entries, list) or len(entries) != n or any(not isinstance(row, list) or len(row) != n for row in entries):
        raise InvalidIndexError(f"matrix document needs an {n}x{n} list under 'entries'")
    return SquareMatrix(tuple(tuple(parse_rational(v) for v in row) for row in entries))


def _read_dimension(document: Document) -> int:
    n = document.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 2:
        raise InvalidIndexError(f"document needs an integer dimension n >= 2, got {n!r}")
    return n


def document_to_object(document: Document) -> Union[JacobiCoords, SquareMatrix]:
    """Coordinates or matrix; a `gen` document yields its coordinates."""
    if not isinstance(document, dict):
        raise ValueError("input document must be a JSON object")
    if "coords" in document:
        return coords_from_document(document["coords"])
    if "x" in document:
        return coords_from_document(document)
    if "entries" in document:
        return matrix_from_document(document)
    raise ValueError("input document is neither coordinates ('x') nor a matrix ('entries')")


def dumps_canonical(document: object) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def read_document(path: Union[str, Path]) -> Document:
    text = Path(path).read_text()
    logger.debug(f"Read {len(text)} bytes from {path}")
    return json.loads(text)


def write_document(document: object, path: Union[str, Path, None]) -> str:
    """Write canonical JSON to path, or just return it when path is None or '-'."""
    text = dumps_canonical(document)
    if path is not None and str(path) != "-":
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text)
        logger.info(f"Saved output to: {target}")
    return text

