# relay-kit/src/relay_kit/utils/linalg.py

"""
Exact and structured linear algebra used by the certificate and AF modules.
"""

import math
from fractions import Fraction
from numbers import Integral
from typing import List, Sequence

import numpy as np

from ..contracts.errors import PreconditionError


def _as_integer_rows(matrix) -> List[List[int]]:
    """Converts a matrix of integers or rationals to integer rows of the same rank."""
    if isinstance(matrix, np.ndarray) and np.issubdtype(matrix.dtype, np.integer):
        return [list(row) for row in matrix.tolist()]
    rows: List[List[int]] = []
    for raw_row in matrix:
        entries = []
        for value in raw_row:
            if isinstance(value, (Integral, np.integer)):
                entries.append(Fraction(int(value)))
            elif isinstance(value, Fraction):
                entries.append(value)
            elif isinstance(value, (float, np.floating)) and float(value).is_integer():
                entries.append(Fraction(int(value)))
            else:
                raise PreconditionError(f"exact_rank needs integral entries, got {value!r}.")
        # Scaling a row by a nonzero constant does not change the rank.
        scale = math.lcm(*(entry.denominator for entry in entries)) if entries else 1
        rows.append([int(entry * scale) for entry in entries])
    return rows


def exact_rank(matrix) -> int:
    """
    Rank over the rationals by fraction-free (Bareiss) elimination.

    Args:
        matrix: A 2-D array-like of integers, `Fraction`s, or integral floats.

    Returns:
        The exact rank; no floating-point tolerance is involved.
    """
    rows = _as_integer_rows(matrix)
    if not rows or not rows[0]:
        return 0

    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    previous_pivot = 1
    for col in range(n_cols):
        pivot_row = next((r for r in range(rank, n_rows) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, n_rows):
            factor = rows[r][col]
            if factor == 0 and pivot == previous_pivot:
                continue
            for c in range(col + 1, n_cols):
                # Exact by Sylvester's identity.
                rows[r][c] = (rows[r][c] * pivot - factor * rows[rank][c]) // previous_pivot
            rows[r][col] = 0
        previous_pivot = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank


def block_toeplitz(blocks: Sequence[np.ndarray], time_slots: int) -> np.ndarray:
    """
    Assembles the lower block-triangular Toeplitz matrix with block (t2, t1) =
    blocks[t2 - t1] for t2 >= t1, zero above the diagonal and beyond the
    last supplied block.
    """
    if not blocks:
        raise PreconditionError("block_toeplitz needs at least one block.")
    rows, cols = blocks[0].shape
    dtype = np.result_type(*blocks)
    out = np.zeros((time_slots * rows, time_slots * cols), dtype=dtype)
    for t2 in range(time_slots):
        for t1 in range(t2 + 1):
            lag = t2 - t1
            if lag < len(blocks):
                out[t2 * rows : (t2 + 1) * rows, t1 * cols : (t1 + 1) * cols] = blocks[lag]
    return out
