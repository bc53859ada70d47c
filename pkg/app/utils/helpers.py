import csv
import os
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from loguru import logger

from app.config import settings
from app.utils.validators import InputError


def as_point(x: Union[Sequence[float], np.ndarray, float]) -> np.ndarray:
    """
    Convert a scalar, sequence or array into a flat float array

    Args:
        x: Point in any array-like form

    Returns:
        1-D numpy array of floats (a copy)
    """
    return np.atleast_1d(np.array(x, dtype=float)).ravel()


def as_list(x: Union[Sequence[float], np.ndarray, float]) -> List[float]:
    """Convert an array-like into a plain list of Python floats"""
    return [float(v) for v in as_point(x)]


def default_fd_step(x: np.ndarray) -> float:
    """Central-difference step h = fd_step * max(1, |x|_inf)"""
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    return settings.fd_step * max(1.0, scale)


def finite_difference_jacobian(evaluator: Callable[[np.ndarray], Any],
                               x: Union[Sequence[float], np.ndarray],
                               h: Optional[float] = None) -> np.ndarray:
    """
    Central-difference Jacobian of a vector-valued evaluator

    Entry (i, j) is (F_i(x + h e_j) - F_i(x - h e_j)) / (2h).

    Args:
        evaluator: Map from R^n to R^q (scalars are treated as q = 1)
        x: Point of evaluation
        h: Step size; defaults to default_fd_step(x)

    Returns:
        q x n matrix
    """
    point = as_point(x)
    step = default_fd_step(point) if h is None else float(h)
    if step <= 0:
        raise InputError("Finite-difference step must be positive", field="h")

    columns = []
    for j in range(point.size):
        forward = point.copy()
        backward = point.copy()
        forward[j] += step
        backward[j] -= step
        diff = as_point(evaluator(forward)) - as_point(evaluator(backward))
        columns.append(diff / (2.0 * step))

    if not columns:
        return np.zeros((as_point(evaluator(point)).size, 0))
    return np.column_stack(columns)


def format_number(value: Optional[float]) -> str:
    """Serialize a number with 17 significant digits; None becomes blank"""
    if value is None:
        return ""
    return format(float(value), ".17g")


def numbered_columns(prefix: str, count: int) -> List[str]:
    """Header names prefix_1 .. prefix_count"""
    return [f"{prefix}_{i + 1}" for i in range(count)]


def write_table_atomic(path: Union[str, Path], header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    """
    Write a comma-separated table with a header row atomically

    The table goes to a temporary file in the destination directory and is
    renamed over the target, so readers never see a truncated file.

    Args:
        path: Destination file
        header: Column names
        rows: Row values; floats are serialized with 17 significant digits

    Returns:
        The destination path
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=str(target.parent))
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(list(header))
            for row in rows:
                writer.writerow([_cell(value) for value in row])
        os.replace(tmp_name, target)
    except Exception as e:
        logger.error(f"Failed to write table {target}: {e}")
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise

    logger.debug(f"Wrote {len(rows)} rows to {target}")
    return target


def read_table(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Read a comma-separated table with a header row into dictionaries"""
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def read_points(path: Union[str, Path], n: int) -> List[np.ndarray]:
    """
    Read candidate points from a table with columns x_1 .. x_n

    Args:
        path: Candidate file
        n: Decision dimension

    Returns:
        List of points
    """
    columns = numbered_columns("x", n)
    points = []
    for row in read_table(path):
        missing = [c for c in columns if c not in row]
        if missing:
            raise ValueError(f"Candidate file is missing columns {missing}")
        points.append(np.array([float(row[c]) for c in columns]))
    return points


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating, int, np.integer)):
        return format_number(value) if isinstance(value, (float, np.floating)) else str(int(value))
    return str(value)
