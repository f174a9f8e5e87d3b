"""
Dense linear-algebra helpers shared by the Gaussian-state modules.
"""
import logging

import numpy as np
from scipy import linalg as sla

from error_handling.exceptions import MalformedMatrix, NumericalInstability, SingularCovariance

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-9
PHYSICAL_TOL = 1e-8
MAX_CONDITION = 1e12
CLAMP_TOL = 1e-9


def as_covariance(gamma, tol: float = SYMMETRY_TOL) -> np.ndarray:
    """
    Coerce input to a float covariance matrix and check its shape.

    Args:
        gamma: Square, even-dimensional, symmetric array-like
        tol: Allowed absolute asymmetry

    Returns:
        A symmetrised float copy

    Raises:
        MalformedMatrix: If the matrix is not square, odd-dimensional or not symmetric
    """
    matrix = np.array(gamma, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise MalformedMatrix(f"Covariance must be square; got shape {matrix.shape}")
    if matrix.shape[0] == 0 or matrix.shape[0] % 2:
        raise MalformedMatrix(
            f"Covariance dimension must be a positive even number; got {matrix.shape[0]}"
        )
    asymmetry = np.max(np.abs(matrix - matrix.T))
    if asymmetry > tol:
        raise MalformedMatrix(f"Covariance is not symmetric (max asymmetry {asymmetry:.3e})")
    return 0.5 * (matrix + matrix.T)


def checked_inverse(matrix: np.ndarray, max_condition: float = MAX_CONDITION) -> np.ndarray:
    """Invert a matrix, refusing ill-conditioned input."""
    condition = np.linalg.cond(matrix)
    if not np.isfinite(condition) or condition > max_condition:
        raise SingularCovariance(
            f"Matrix condition number {condition:.3e} exceeds {max_condition:.1e}"
        )
    return sla.solve(matrix, np.eye(matrix.shape[0]))


def checked_det(matrix: np.ndarray, max_condition: float = MAX_CONDITION) -> float:
    """Determinant of a covariance matrix with the same conditioning guard."""
    condition = np.linalg.cond(matrix)
    if not np.isfinite(condition) or condition > max_condition:
        raise SingularCovariance(
            f"Matrix condition number {condition:.3e} exceeds {max_condition:.1e}"
        )
    return float(np.linalg.det(matrix))


def clamp_nonnegative(values: np.ndarray, what: str, tol: float = CLAMP_TOL) -> np.ndarray:
    """
    Clamp roundoff-negative values to zero.

    Raises:
        NumericalInstability: If any value is below -tol
    """
    values = np.asarray(values, dtype=float)
    worst = float(np.min(values)) if values.size else 0.0
    if worst < -tol:
        raise NumericalInstability(f"{what} is negative beyond tolerance ({worst:.3e})")
    if worst < 0.0:
        logger.debug(f"Clamping {what} roundoff {worst:.3e} to zero")
    return np.clip(values, 0.0, None)


def psd_sqrt(symmetric: np.ndarray, what: str = "matrix") -> np.ndarray:
    """Principal square root of a symmetric positive-semidefinite matrix."""
    eigenvalues, eigenvectors = np.linalg.eigh(0.5 * (symmetric + symmetric.T))
    roots = np.sqrt(clamp_nonnegative(eigenvalues, f"eigenvalue of {what}"))
    return (eigenvectors * roots) @ eigenvectors.T


def mode_indices(modes) -> np.ndarray:
    """Phase-space row indices (q, p) of the given modes, in xpxp order."""
    modes = np.asarray(list(modes), dtype=int)
    return np.stack([2 * modes, 2 * modes + 1], axis=1).reshape(-1)


def momentum_reflection(n_modes: int) -> np.ndarray:
    """theta_N: p -> -p on every mode."""
    return np.diag(np.tile([1.0, -1.0], n_modes))
