"""Canonical JSON wire format for frames.

A frame document is an object::

    {"n": int, "m": int, "field": "complex" | "real",
     "vectors": [[[re, im], ...n pairs...], ...m rows...]}

Serialization writes full double precision, so a dump/load round trip is
bit exact.  Validation errors name the offending field.
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .core import ComplexFrame
from .errors import FrameFormatError

__all__ = ["frame_to_dict", "frame_from_dict", "dump_frame", "load_frame"]


def frame_to_dict(fr: ComplexFrame) -> dict[str, Any]:
    """Render a frame as a JSON-ready dict in the canonical format."""
    vectors = [[[float(c.real), float(c.imag)] for c in row] for row in fr.vectors]
    return {"n": fr.n, "m": fr.m, "field": fr.field, "vectors": vectors}


def _require_positive_int(doc: dict, key: str) -> int:
    if key not in doc:
        raise FrameFormatError(f"missing field '{key}'")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise FrameFormatError(f"field '{key}' must be an integer, got {value!r}")
    if value < 1:
        raise FrameFormatError(f"field '{key}' must be positive, got {value}")
    return value


def _parse_entry(pair: Any, where: str) -> complex:
    if not isinstance(pair, list) or len(pair) != 2:
        raise FrameFormatError(f"field '{where}' must be a [re, im] pair")
    re, im = pair
    for part, val in (("re", re), ("im", im)):
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise FrameFormatError(f"field '{where}' has a non-numeric {part} part")
        if not math.isfinite(val):
            raise FrameFormatError(f"field '{where}' has a non-finite {part} part")
    return complex(re, im)


def frame_from_dict(doc: Any) -> ComplexFrame:
    """Parse and validate a frame document.

    Raises FrameFormatError naming the offending field on any violation.
    """
    if not isinstance(doc, dict):
        raise FrameFormatError("frame document root must be an object")
    n = _require_positive_int(doc, "n")
    m = _require_positive_int(doc, "m")
    field = doc.get("field")
    if field not in ("real", "complex"):
        raise FrameFormatError(
            f"field 'field' must be 'real' or 'complex', got {field!r}"
        )
    rows = doc.get("vectors")
    if not isinstance(rows, list):
        raise FrameFormatError("field 'vectors' must be a list of rows")
    if len(rows) != m:
        raise FrameFormatError(f"field 'vectors' has {len(rows)} rows, expected m={m}")
    vectors = np.zeros((m, n), dtype=np.complex128)
    for k, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise FrameFormatError(
                f"field 'vectors[{k}]' must be a list of n={n} pairs"
            )
        for j, pair in enumerate(row):
            entry = _parse_entry(pair, f"vectors[{k}][{j}]")
            if field == "real" and entry.imag != 0.0:
                raise FrameFormatError(
                    f"field 'vectors[{k}][{j}]' has a nonzero imaginary part "
                    "in a frame declared real"
                )
            vectors[k, j] = entry
    return ComplexFrame(n=n, m=m, vectors=vectors, field=field)


def dump_frame(fr: ComplexFrame, path: str) -> None:
    """Write a frame document to a file."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(frame_to_dict(fr), fh, indent=2)
        fh.write("\n")


def load_frame(path: str) -> ComplexFrame:
    """Read and validate a frame document from a file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise FrameFormatError(f"cannot read frame file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FrameFormatError(f"frame file is not valid JSON: {exc}") from exc
    return frame_from_dict(doc)
