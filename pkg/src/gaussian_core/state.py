"""
Gaussian states: validation, symplectic action, phase-space functions,
purity, fidelity, tensoring and partial trace.

Conventions: xpxp ordering, vacuum covariance equal to the identity and
W(zeta) = exp(-(zeta - d)^T gamma^-1 (zeta - d)) / (pi^N sqrt(det gamma)).
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Union

import numpy as np

from error_handling.exceptions import DimensionError, UnphysicalInput
from gaussian_core.linalg import (
    PHYSICAL_TOL,
    as_covariance,
    checked_det,
    checked_inverse,
    mode_indices,
)
from gaussian_core.symplectic import SymplecticTransform, make_transform, symplectic_form

logger = logging.getLogger(__name__)

JSON_DIGITS = 17


@dataclass(frozen=True)
class GaussianState:
    """
    An N-mode Gaussian state given by its displacement vector and covariance matrix.

    Instances are immutable; the arrays are stored read-only.
    """
    gamma: np.ndarray
    d: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        gamma = as_covariance(self.gamma)
        d = np.zeros(gamma.shape[0]) if self.d is None else np.array(self.d, dtype=float)
        if d.shape != (gamma.shape[0],):
            raise DimensionError(
                f"Displacement has shape {d.shape}; expected ({gamma.shape[0]},)"
            )
        gamma.setflags(write=False)
        d.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "d", d)

    @property
    def n_modes(self) -> int:
        return self.gamma.shape[0] // 2

    def require_physical(self, tol: float = PHYSICAL_TOL) -> "GaussianState":
        """Return self, raising UnphysicalInput if gamma + iJ is not PSD."""
        report = validate_state(self.gamma, tol)
        if not report.is_physical:
            raise UnphysicalInput(
                f"gamma + iJ has eigenvalue {report.min_eigenvalue:.3e} < -{tol:g}"
            )
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_modes": self.n_modes,
            "d": [float(x) for x in self.d],
            "gamma": [[float(x) for x in row] for row in self.gamma],
        }

    def to_json(self) -> str:
        """Serialise as {n_modes, d, gamma} with 17 significant digits."""
        def fmt(x: float) -> str:
            return format(x, f".{JSON_DIGITS}g")

        d = ", ".join(fmt(x) for x in self.d)
        rows = ", ".join("[" + ", ".join(fmt(x) for x in row) + "]" for row in self.gamma)
        return f'{{"n_modes": {self.n_modes}, "d": [{d}], "gamma": [{rows}]}}'

    @classmethod
    def from_json(cls, text: str) -> "GaussianState":
        payload = json.loads(text)
        state = cls(np.array(payload["gamma"], dtype=float), np.array(payload["d"], dtype=float))
        if "n_modes" in payload and int(payload["n_modes"]) != state.n_modes:
            raise DimensionError(
                f"n_modes={payload['n_modes']} does not match gamma of size {state.gamma.shape[0]}"
            )
        return state


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of validate_state."""
    is_physical: bool
    min_eigenvalue: float
    symplectic_spectrum: List[float]


StateOrMatrix = Union[GaussianState, np.ndarray, Sequence[Sequence[float]]]


def _gamma_of(state: StateOrMatrix) -> np.ndarray:
    if isinstance(state, GaussianState):
        return state.gamma
    return as_covariance(state)


def symplectic_spectrum(gamma: StateOrMatrix) -> List[float]:
    """
    Symplectic eigenvalues of a covariance matrix, sorted descending.

    They are the moduli of the imaginary-pair eigenvalues of J gamma.
    """
    gamma = _gamma_of(gamma)
    n_modes = gamma.shape[0] // 2
    eigenvalues = np.linalg.eigvals(symplectic_form(n_modes) @ gamma)
    moduli = np.sort(np.abs(eigenvalues.imag))[::-1]
    return [float(mu) for mu in moduli[::2]]


def validate_state(gamma: StateOrMatrix, tol: float = PHYSICAL_TOL) -> ValidityReport:
    """
    Check the uncertainty principle gamma + iJ >= 0.

    Args:
        gamma: Covariance matrix or GaussianState
        tol: Tolerance on the smallest eigenvalue of gamma + iJ

    Returns:
        ValidityReport with the verdict, the smallest eigenvalue and the symplectic spectrum

    Raises:
        MalformedMatrix: If gamma is not square, even-dimensional and symmetric
    """
    gamma = _gamma_of(gamma)
    J = symplectic_form(gamma.shape[0] // 2)
    min_eigenvalue = float(np.min(np.linalg.eigvalsh(gamma + 1j * J)))
    return ValidityReport(
        is_physical=min_eigenvalue >= -tol,
        min_eigenvalue=min_eigenvalue,
        symplectic_spectrum=symplectic_spectrum(gamma),
    )


def apply(transform: SymplecticTransform, state: GaussianState) -> GaussianState:
    """Act with an affine symplectic map: gamma -> S gamma S^T, d -> S d + s."""
    if transform.n_modes != state.n_modes:
        raise DimensionError(
            f"{transform.n_modes}-mode transform applied to {state.n_modes}-mode state"
        )
    S = transform.S
    gamma = S @ state.gamma @ S.T
    return GaussianState(0.5 * (gamma + gamma.T), S @ state.d + transform.s)


def _points(state: GaussianState, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if points.shape[-1] != 2 * state.n_modes:
        raise DimensionError(
            f"Phase-space points have length {points.shape[-1]}; expected {2 * state.n_modes}"
        )
    return points


def wigner(state: GaussianState, zeta) -> Union[float, np.ndarray]:
    """
    Wigner function of a Gaussian state.

    Args:
        state: The state
        zeta: A phase-space point of length 2N, or an array of points with shape (..., 2N)

    Returns:
        W(zeta), a float for a single point or an array of shape (...)

    Raises:
        SingularCovariance: If gamma cannot be inverted reliably
    """
    zeta = _points(state, zeta)
    inverse = checked_inverse(state.gamma)
    norm = np.pi ** state.n_modes * np.sqrt(checked_det(state.gamma))
    delta = zeta - state.d
    exponent = np.einsum("...i,ij,...j->...", delta, inverse, delta)
    values = np.exp(-exponent) / norm
    return float(values) if values.ndim == 0 else values


def characteristic(state: GaussianState, eta) -> Union[complex, np.ndarray]:
    """chi(eta) = exp(i eta^T J d - eta^T J^T (gamma / 4) J eta)."""
    eta = _points(state, eta)
    J = symplectic_form(state.n_modes)
    quadratic = J.T @ state.gamma @ J / 4.0
    phase = eta @ (J @ state.d)
    exponent = 1j * phase - np.einsum("...i,ij,...j->...", eta, quadratic, eta)
    values = np.exp(exponent)
    return complex(values) if values.ndim == 0 else values


def purity(state: GaussianState) -> float:
    """Tr(rho^2) = 1 / sqrt(det gamma)."""
    return float(1.0 / np.sqrt(checked_det(state.gamma)))


def fidelity_hs(state1: GaussianState, state2: GaussianState) -> float:
    """
    Hilbert-Schmidt overlap Tr(rho1 rho2) of two Gaussian states.

    Equals the fidelity when at least one of the states is pure.
    """
    if state1.n_modes != state2.n_modes:
        raise DimensionError(
            f"Cannot compare {state1.n_modes}-mode and {state2.n_modes}-mode states"
        )
    total = state1.gamma + state2.gamma
    d = state1.d - state2.d
    exponent = float(d @ checked_inverse(total) @ d)
    return float(np.exp(-exponent) / np.sqrt(checked_det(total / 2.0)))


def tensor(state_a: GaussianState, state_b: GaussianState) -> GaussianState:
    """Direct sum of covariances, concatenation of displacements."""
    na, nb = state_a.gamma.shape[0], state_b.gamma.shape[0]
    gamma = np.zeros((na + nb, na + nb))
    gamma[:na, :na] = state_a.gamma
    gamma[na:, na:] = state_b.gamma
    return GaussianState(gamma, np.concatenate([state_a.d, state_b.d]))


def _check_modes(modes: Sequence[int], n_modes: int) -> List[int]:
    modes = [int(m) for m in modes]
    if not modes:
        raise DimensionError("At least one mode must be selected")
    if len(set(modes)) != len(modes) or min(modes) < 0 or max(modes) >= n_modes:
        raise DimensionError(f"Invalid modes {modes} for a {n_modes}-mode state")
    return modes


def partial_trace(state: GaussianState, keep_modes: Sequence[int]) -> GaussianState:
    """Reduced state on keep_modes (in the given order)."""
    modes = _check_modes(keep_modes, state.n_modes)
    idx = mode_indices(modes)
    return GaussianState(state.gamma[np.ix_(idx, idx)], state.d[idx])


def condition_on_position(
    state: GaussianState, modes: Sequence[int], outcomes: Sequence[float]
) -> GaussianState:
    """
    Conditional state of the remaining modes after ideal position homodyne
    detection on ``modes`` with results ``outcomes``.

    Args:
        state: Global state
        modes: Measured modes
        outcomes: Position results, one per measured mode

    Returns:
        State of the unmeasured modes, in their original order
    """
    modes = _check_modes(modes, state.n_modes)
    outcomes = np.asarray(outcomes, dtype=float)
    if outcomes.shape != (len(modes),):
        raise DimensionError(f"Expected {len(modes)} outcomes; got shape {outcomes.shape}")
    rest = [m for m in range(state.n_modes) if m not in modes]
    if not rest:
        raise DimensionError("Conditioning on every mode leaves no state")
    measured = np.array([2 * m for m in modes])
    kept = mode_indices(rest)

    g = state.gamma
    gain = g[np.ix_(kept, measured)] @ checked_inverse(g[np.ix_(measured, measured)])
    gamma = g[np.ix_(kept, kept)] - gain @ g[np.ix_(measured, kept)]
    d = state.d[kept] + gain @ (outcomes - state.d[measured])
    return GaussianState(0.5 * (gamma + gamma.T), d)


def vacuum_state(n_modes: int = 1) -> GaussianState:
    return GaussianState(np.eye(2 * n_modes))


def thermal_state(mean_photons: float, n_modes: int = 1) -> GaussianState:
    """Thermal state with gamma = (2M + 1) I on every mode."""
    if mean_photons < 0:
        raise UnphysicalInput(f"Mean photon number must be non-negative; got {mean_photons}")
    return GaussianState((2.0 * mean_photons + 1.0) * np.eye(2 * n_modes))


def coherent_state(q0: float, p0: float) -> GaussianState:
    return GaussianState(np.eye(2), np.array([q0, p0], dtype=float))


def squeezed_state(r: float, q0: float = 0.0, p0: float = 0.0) -> GaussianState:
    """Displaced single-mode squeezed vacuum, gamma = diag(e^-2r, e^2r)."""
    return GaussianState(np.diag([np.exp(-2.0 * r), np.exp(2.0 * r)]), np.array([q0, p0]))


def two_mode_squeezed_vacuum(r: float) -> GaussianState:
    """TMSV with lambda = cosh 2r and couplings +/- sinh 2r."""
    return apply(make_transform("two_mode_squeezer", {"r": r}), vacuum_state(2))


def phase_space_grid(
    gamma: np.ndarray, center: np.ndarray, n_sigma: float = 8.0, n_points: int = 256
):
    """
    Uniform product grid covering +/- n_sigma standard deviations per axis
    of the Gaussian density exp(-x^T gamma^-1 x).

    Returns:
        (points of shape (n_points^2N, 2N), cell volume)
    """
    sigmas = np.sqrt(np.diag(gamma) / 2.0)
    axes = [np.linspace(c - n_sigma * s, c + n_sigma * s, n_points) for c, s in zip(center, sigmas)]
    volume = float(np.prod([axis[1] - axis[0] for axis in axes]))
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, len(axes)), volume


def symplectic_fourier_wigner(
    state: GaussianState, zeta, n_sigma: float = 8.0, n_points: int = 256
) -> np.ndarray:
    """
    Wigner function obtained numerically from the characteristic function,
    W(zeta) = (2 pi)^-2N int chi(eta) exp(-i eta^T J zeta) d eta.

    The eta grid is sized from the envelope of |chi|; cost grows as n_points^2N.
    """
    zeta = np.atleast_2d(_points(state, zeta))
    J = symplectic_form(state.n_modes)
    eta_cov = 4.0 * checked_inverse(J.T @ state.gamma @ J)
    eta, volume = phase_space_grid(eta_cov, np.zeros(2 * state.n_modes), n_sigma, n_points)
    chi = characteristic(state, eta)
    kernel = np.exp(-1j * (eta @ J) @ zeta.T)
    integral = (chi @ kernel) * volume
    values = (integral / (2.0 * np.pi) ** (2 * state.n_modes)).real
    logger.debug(f"Fourier-inverted chi on {eta.shape[0]} nodes for {zeta.shape[0]} points")
    return values


__all__ = [
    "GaussianState",
    "ValidityReport",
    "apply",
    "characteristic",
    "coherent_state",
    "condition_on_position",
    "fidelity_hs",
    "partial_trace",
    "phase_space_grid",
    "purity",
    "squeezed_state",
    "symplectic_fourier_wigner",
    "symplectic_spectrum",
    "tensor",
    "thermal_state",
    "two_mode_squeezed_vacuum",
    "vacuum_state",
    "validate_state",
    "wigner",
]
