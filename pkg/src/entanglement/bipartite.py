"""
Bipartite Gaussian entanglement: local invariants, standard form,
partial transposition, logarithmic negativity, entropy of entanglement
and purification.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np
from scipy.special import xlogy

from error_handling.exceptions import DimensionError, PurityError
from gaussian_core.linalg import (
    CLAMP_TOL,
    PHYSICAL_TOL,
    as_covariance,
    clamp_nonnegative,
    momentum_reflection,
    psd_sqrt,
)
from gaussian_core.state import GaussianState, symplectic_spectrum
from gaussian_core.symplectic import symplectic_form

logger = logging.getLogger(__name__)

PURE_TOL = 1e-6

Covariance = Union[GaussianState, np.ndarray]


def _matrix(gamma: Covariance) -> np.ndarray:
    if isinstance(gamma, GaussianState):
        return gamma.gamma
    return as_covariance(gamma)


def _two_mode(gamma: Covariance) -> np.ndarray:
    matrix = _matrix(gamma)
    if matrix.shape != (4, 4):
        raise DimensionError(f"Expected a 4x4 two-mode covariance; got {matrix.shape}")
    return matrix


@dataclass(frozen=True)
class BlockInvariants:
    """Determinants of the A, B, C blocks and of the full two-mode covariance."""
    detA: float
    detB: float
    detC: float
    detGamma: float


@dataclass(frozen=True)
class StandardForm:
    """
    Two-mode standard form

        [[la, 0, kx, 0], [0, la, 0, -kp], [kx, 0, lb, 0], [0, -kp, 0, lb]]

    with kx >= |kp|.
    """
    lambda_a: float
    lambda_b: float
    k_x: float
    k_p: float

    @property
    def is_symmetric(self) -> bool:
        return bool(np.isclose(self.lambda_a, self.lambda_b, rtol=0.0, atol=1e-9))

    def covariance(self) -> np.ndarray:
        la, lb, kx, kp = self.lambda_a, self.lambda_b, self.k_x, self.k_p
        return np.array(
            [
                [la, 0.0, kx, 0.0],
                [0.0, la, 0.0, -kp],
                [kx, 0.0, lb, 0.0],
                [0.0, -kp, 0.0, lb],
            ]
        )


def block_invariants(gamma: Covariance) -> BlockInvariants:
    """
    Local symplectic invariants of a two-mode covariance matrix.

    Args:
        gamma: 4x4 covariance matrix or two-mode GaussianState

    Returns:
        BlockInvariants(detA, detB, detC, detGamma)

    Raises:
        DimensionError: If gamma is not 4x4
    """
    g = _two_mode(gamma)
    return BlockInvariants(
        detA=float(np.linalg.det(g[:2, :2])),
        detB=float(np.linalg.det(g[2:, 2:])),
        detC=float(np.linalg.det(g[:2, 2:])),
        detGamma=float(np.linalg.det(g)),
    )


def to_standard_form(gamma: Covariance) -> StandardForm:
    """
    Standard-form parameters computed from the four local invariants.

    The normal-form couplings k1, k2 are the roots of t^2 - alpha t + detC with
    alpha = |k1 + k2| = sqrt(((sqrt(detA detB) + detC)^2 - detGamma) / sqrt(detA detB)).
    The larger modulus becomes k_x and k_p = -detC / k_x.

    Raises:
        NumericalInstability: If a radicand is negative beyond roundoff
    """
    inv = block_invariants(gamma)
    lambda_a = float(np.sqrt(clamp_nonnegative(inv.detA, "det A")))
    lambda_b = float(np.sqrt(clamp_nonnegative(inv.detB, "det B")))
    local = lambda_a * lambda_b
    scale = max(1.0, local * local)

    if local == 0.0:
        alpha = 0.0
    else:
        radicand = ((local + inv.detC) ** 2 - inv.detGamma) / local
        alpha = float(np.sqrt(clamp_nonnegative(radicand, "normal-form radicand", CLAMP_TOL * scale)))
    discriminant = clamp_nonnegative(
        alpha * alpha - 4.0 * inv.detC, "normal-form discriminant", CLAMP_TOL * scale
    )
    root = float(np.sqrt(discriminant))
    k_x = max(abs(alpha + root), abs(alpha - root)) / 2.0
    k_p = -inv.detC / k_x if k_x > 0.0 else 0.0
    logger.debug(
        f"Standard form: lambda=({lambda_a:.6g}, {lambda_b:.6g}) k=({k_x:.6g}, {k_p:.6g})"
    )
    return StandardForm(lambda_a, lambda_b, k_x, k_p)


def _party_modes(party: Union[int, Sequence[int]]) -> List[int]:
    return [party] if isinstance(party, (int, np.integer)) else [int(m) for m in party]


def partial_transpose(gamma: Covariance, party: Union[int, Sequence[int]] = 0) -> np.ndarray:
    """Apply p -> -p on the given party's modes: gamma -> theta gamma theta^T."""
    g = _matrix(gamma)
    n_modes = g.shape[0] // 2
    flips = np.ones(2 * n_modes)
    for mode in _party_modes(party):
        if not 0 <= mode < n_modes:
            raise DimensionError(f"Mode {mode} out of range for {n_modes} modes")
        flips[2 * mode + 1] = -1.0
    return g * np.outer(flips, flips)


def ppt_spectrum(gamma: Covariance, party: Union[int, Sequence[int]] = 0) -> List[float]:
    """Symplectic spectrum of the partially transposed covariance, descending."""
    return symplectic_spectrum(partial_transpose(gamma, party))


def is_nppt(gamma: Covariance, party: Union[int, Sequence[int]] = 0, tol: float = PHYSICAL_TOL) -> bool:
    """True if the partial transpose has a symplectic eigenvalue below 1."""
    return min(ppt_spectrum(gamma, party)) < 1.0 - tol


def log_negativity(gamma: Covariance, party: Union[int, Sequence[int]] = 0) -> float:
    """Base-2 logarithmic negativity, -sum log2(min(mu_i, 1)) over the PPT spectrum."""
    spectrum = np.asarray(ppt_spectrum(gamma, party))
    return float(-np.sum(np.log2(np.minimum(spectrum, 1.0))))


def _entropy_term(mu: np.ndarray) -> np.ndarray:
    plus = (mu + 1.0) / 2.0
    minus = clamp_nonnegative((mu - 1.0) / 2.0, "symplectic eigenvalue excess")
    return (xlogy(plus, plus) - xlogy(minus, minus)) / np.log(2.0)


def entropy_of_entanglement(
    gamma: Covariance, party: Union[int, Sequence[int]] = 0, tol: float = PURE_TOL
) -> float:
    """
    Von Neumann entropy of one party of a pure bipartite Gaussian state.

    Args:
        gamma: Global covariance matrix
        party: Mode (or modes) forming party A
        tol: Allowed deviation of the global symplectic spectrum from 1

    Returns:
        Entropy in bits

    Raises:
        PurityError: If the global state is mixed
    """
    g = _matrix(gamma)
    deviation = max(abs(mu - 1.0) for mu in symplectic_spectrum(g))
    if deviation > tol:
        raise PurityError(
            f"Entropy of entanglement needs a pure state; symplectic spectrum deviates by {deviation:.3e}"
        )
    modes = _party_modes(party)
    idx = np.array([[2 * m, 2 * m + 1] for m in modes]).reshape(-1)
    reduced = np.asarray(symplectic_spectrum(g[np.ix_(idx, idx)]))
    return float(np.sum(_entropy_term(reduced)))


def purification_root(gamma: Covariance) -> np.ndarray:
    """
    Principal square root of M = -(J gamma)^2 - I.

    M is similar to the symmetric PSD matrix -K^2 - I with K = gamma^1/2 J gamma^1/2,
    so sqrt(M) = gamma^-1/2 sqrt(-K^2 - I) gamma^1/2.
    """
    g = _matrix(gamma)
    n_modes = g.shape[0] // 2
    J = symplectic_form(n_modes)
    eigenvalues, eigenvectors = np.linalg.eigh(g)
    half = (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T
    half_inverse = (eigenvectors / np.sqrt(eigenvalues)) @ eigenvectors.T
    K = half @ J @ half
    root = psd_sqrt(K.T @ K - np.eye(2 * n_modes), "-K^2 - I")
    return half_inverse @ root @ half


def purify(gamma: Covariance, tol: float = 1e-9) -> np.ndarray:
    """
    Covariance of a 2N-mode pure state whose first N modes reduce to gamma.

    Returns [[gamma, C], [C^T, theta gamma theta]] with C = J sqrt(-(J gamma)^2 - I) theta.
    An already pure gamma is returned alongside vacuum ancillas.
    """
    g = _matrix(gamma)
    n_modes = g.shape[0] // 2
    dim = 2 * n_modes
    purified = np.zeros((2 * dim, 2 * dim))
    purified[:dim, :dim] = g

    if max(abs(mu - 1.0) for mu in symplectic_spectrum(g)) < tol:
        logger.debug("State already pure; attaching vacuum ancillas")
        purified[dim:, dim:] = np.eye(dim)
        return purified

    theta = momentum_reflection(n_modes)
    coupling = symplectic_form(n_modes) @ purification_root(g) @ theta
    purified[:dim, dim:] = coupling
    purified[dim:, :dim] = coupling.T
    purified[dim:, dim:] = theta @ g @ theta.T
    return 0.5 * (purified + purified.T)
