from typing import List, Optional, Sequence, Tuple

import numpy as np


def validate_point_dimension(x: Sequence[float], n: int) -> Tuple[bool, Optional[str]]:
    """Validate that a point has the decision dimension"""
    size = np.asarray(x, dtype=float).size
    if size != n:
        return False, f"Point has dimension {size}, expected {n}"

    return True, None


def validate_vector_dimension(u: Sequence[float], m: int) -> Tuple[bool, Optional[str]]:
    """Validate that a vector has the objective dimension"""
    size = np.asarray(u, dtype=float).size
    if size != m:
        return False, f"Vector has dimension {size}, expected {m}"

    return True, None


def validate_simplex_weight(alpha: Sequence[float], m: int, tol: float = 1e-12) -> Tuple[bool, Optional[str]]:
    """Validate a weight vector on the unit simplex"""
    weights = np.asarray(alpha, dtype=float)
    if weights.size != m:
        return False, f"Weight vector has dimension {weights.size}, expected {m}"

    if np.any(weights < 0):
        return False, "Weights must be nonnegative"

    if abs(weights.sum() - 1.0) > tol:
        return False, f"Weights must sum to 1 (got {weights.sum():.17g})"

    return True, None


def validate_box(lower: Sequence[float], upper: Sequence[float], n: int) -> Tuple[bool, Optional[str]]:
    """Validate a box for local runs: right dimension and nonempty interior"""
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if lo.size != n or hi.size != n:
        return False, f"Box bounds must have dimension {n}"

    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        return False, "Box bounds must be finite"

    if np.any(hi - lo <= 0):
        return False, "Box has a side of nonpositive length (empty interior)"

    return True, None


def validate_grouping(grouping: Sequence[Sequence[int]], p: int, m: int) -> Tuple[bool, Optional[str]]:
    """Validate a partition of constraint indices {0..p-1} into m groups"""
    if len(grouping) != m:
        return False, f"Grouping must have {m} groups, got {len(grouping)}"

    seen: List[int] = []
    for group in grouping:
        for index in group:
            if not 0 <= index < p:
                return False, f"Constraint index {index} out of range 0..{p - 1}"
            if index in seen:
                return False, f"Constraint index {index} appears in more than one group"
            seen.append(index)

    if len(seen) != p:
        missing = sorted(set(range(p)) - set(seen))
        return False, f"Grouping does not cover constraint indices {missing}"

    return True, None


def validate_grid(counts: Sequence[int], bounds: Sequence[Tuple[float, float]], cap: int) -> Tuple[bool, Optional[str]]:
    """Validate grid counts, bounds and the total point cap"""
    if len(counts) != len(bounds):
        return False, "Grid counts and bounds must have the same length"

    total = 1
    for count, (low, high) in zip(counts, bounds):
        if count < 1:
            return False, "Grid counts must be positive"
        if count == 1 and low != high:
            return False, "A single-point dimension needs equal bounds"
        if high < low:
            return False, "Grid upper bound below lower bound"
        total *= count

    if total > cap:
        return False, f"Grid has {total} points, exceeding the cap of {cap}"

    return True, None


class SolverError(Exception):
    """Base exception for solver errors"""

    def __init__(self, message: str, field: str = None):
        self.message = message
        self.field = field
        super().__init__(self.message)


class InputError(SolverError):
    """Malformed input: dimension mismatch, off-simplex weights, empty traces"""


class ConfigurationError(SolverError):
    """Inconsistent configuration of a barrier, auxiliary function, box or run"""


class DomainError(SolverError):
    """Evaluation outside the strict interior or too close to its boundary"""


class PreconditionError(SolverError):
    """A start point is infeasible or its objective value is not finite"""


class TieError(SolverError):
    """Gradient of a max-type function requested at tied maxima"""


class CapabilityError(SolverError):
    """The requested operation is not available for these inputs"""


class ProblemLookupError(SolverError, LookupError):
    """Unknown registry name"""
