# relay-kit/src/relay_kit/utils/serialization.py

"""
Converts analysis results into JSON-compatible structures.

This module is the single place where numpy arrays and scalars, complex
numbers, `Fraction`s and pydantic models are turned into plain lists, dicts,
numbers and strings before they are written by the CLI.
"""

from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel


def _complex_to_json(value: complex) -> Any:
    if value.imag == 0:
        return float(value.real)
    return {"re": float(value.real), "im": float(value.imag)}


def safe_serialize(data: Any) -> Any:
    """
    Recursively converts a data structure into JSON-compatible types.

    Args:
        data: The Python object or data structure to serialize.

    Returns:
        A new structure containing only lists, dicts, strings, numbers,
        booleans and None. Tuples and sets become lists (sets sorted),
        complex values with a zero imaginary part become floats.
    """
    if isinstance(data, (list, tuple)):
        return [safe_serialize(item) for item in data]

    if isinstance(data, (set, frozenset)):
        return [safe_serialize(item) for item in sorted(data)]

    if isinstance(data, dict):
        return {
            (str(key) if not isinstance(key, tuple) else ",".join(map(str, key))): safe_serialize(
                value
            )
            for key, value in data.items()
        }

    if isinstance(data, BaseModel):
        return safe_serialize(data.model_dump())

    if isinstance(data, np.ndarray):
        if np.iscomplexobj(data):
            return [safe_serialize(item) for item in data.tolist()]
        return data.tolist()

    if isinstance(data, np.generic):
        return safe_serialize(data.item())

    if isinstance(data, complex):
        return _complex_to_json(data)

    if isinstance(data, Fraction):
        return data.numerator if data.denominator == 1 else str(data)

    if isinstance(data, Path):
        return str(data)

    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError:
            return f"<binary data of size {len(data)} bytes>"

    return data
