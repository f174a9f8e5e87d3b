"""
Alice-Bob-Eve protocol quantities for a symmetric standard-form state:
the purified three-party state, coincidence probabilities, the bit error
rate and Eve's conditional states.

All formulas consume the moduli |x0A|, |x0B| and accept numpy arrays.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.special import expit

from error_handling.exceptions import SingularDenominator
from gaussian_core.linalg import checked_inverse
from gaussian_core.state import GaussianState
from qkd_protocol.states import MeasurementModel, SymmetricStdState

logger = logging.getLogger(__name__)


def _moduli(x0A, x0B) -> Tuple[np.ndarray, np.ndarray]:
    return np.abs(np.asarray(x0A, dtype=float)), np.abs(np.asarray(x0B, dtype=float))


def _scalar_or_array(values: np.ndarray):
    return float(values) if np.ndim(values) == 0 else values


def purify_abe(state: SymmetricStdState) -> GaussianState:
    """
    Pure four-mode state (A, B, E1, E2) whose reduction to A, B is gamma_AB.

    The coupling block couples each position of A, B to Eve's momenta and
    each momentum to Eve's positions with entries -X and -Y; Eve's block is
    theta gamma_AB theta, which equals gamma_AB for the standard form.

    Raises:
        UnphysicalInput: If a - b is negative beyond tolerance
    """
    aux = state.auxiliaries()
    X, Y = aux.X, aux.Y
    coupling = -np.array(
        [
            [0.0, X, 0.0, Y],
            [X, 0.0, Y, 0.0],
            [0.0, Y, 0.0, X],
            [Y, 0.0, X, 0.0],
        ]
    )
    gamma_ab = state.covariance()
    gamma = np.block([[gamma_ab, coupling], [coupling.T, gamma_ab]])
    logger.debug(f"Purified state: a={aux.a:.6g} b={aux.b:.6g} X={X:.6g} Y={Y:.6g}")
    return GaussianState(gamma)


@dataclass(frozen=True)
class CoincidenceProbs:
    """Unnormalised acceptance weights for equal and opposite symbols."""
    p_same: float
    p_diff: float
    K: float

    @property
    def error_fraction(self) -> float:
        return self.p_diff / (self.p_same + self.p_diff)


def coincidence_probs(state: SymmetricStdState, sigma: float, x0A, x0B) -> CoincidenceProbs:
    """
    Overlaps of gamma_AB with Gaussian projectors of width sigma centred at
    (+|x0A|, +|x0B|) (equal symbols) and (+|x0A|, -|x0B|) (opposite symbols).

    Args:
        state: Shared state
        sigma: Projector width
        x0A: Alice's outcome
        x0B: Bob's outcome

    Returns:
        CoincidenceProbs with p_same, p_diff and the prefactor K(sigma)

    Raises:
        SingularDenominator: If (lambda + sigma^2)^2 <= c_x^2
    """
    MeasurementModel(sigma)
    u, v = _moduli(x0A, x0B)
    lam, cx, cp = state.lam, state.c_x, state.c_p
    s2 = sigma * sigma
    denominator = (lam + s2) ** 2 - cx * cx
    momentum = (lam * s2 + 1.0) ** 2 - cp * cp * s2 * s2
    if denominator <= 0.0 or momentum <= 0.0:
        raise SingularDenominator(
            f"Non-positive denominator in coincidence probabilities ({denominator:.3e}, {momentum:.3e})"
        )
    K = 4.0 * s2 / (np.sqrt(denominator) * np.sqrt(momentum))
    common = -(lam + s2) * (u * u + v * v)
    cross = 2.0 * u * v * cx
    return CoincidenceProbs(
        p_same=_scalar_or_array(K * np.exp((cross + common) / denominator)),
        p_diff=_scalar_or_array(K * np.exp((-cross + common) / denominator)),
        K=float(K),
    )


def error_rate(
    state: SymmetricStdState, x0A, x0B, measurement: Optional[MeasurementModel] = None
):
    """
    Probability that accepted symbols disagree.

    In the sharp limit this is 1 / (1 + exp(4 c_x |x0A||x0B| / (lambda^2 - c_x^2)));
    for a finite width sigma the denominator becomes (lambda + sigma^2)^2 - c_x^2.
    """
    u, v = _moduli(x0A, x0B)
    if measurement is None or measurement.is_sharp:
        denominator = state.L
    else:
        denominator = (state.lam + measurement.sigma ** 2) ** 2 - state.c_x ** 2
    return _scalar_or_array(expit(-4.0 * state.c_x * u * v / denominator))


@dataclass(frozen=True)
class EveConditional:
    """Eve's states after Alice and Bob project onto (+,+) or (-,-)."""
    gamma_pp: np.ndarray
    d_pp: np.ndarray
    d_mm: np.ndarray

    def states(self) -> Tuple[GaussianState, GaussianState]:
        return GaussianState(self.gamma_pp, self.d_pp), GaussianState(self.gamma_pp, self.d_mm)


def eve_conditional(state: SymmetricStdState, x0A: float, x0B: float) -> EveConditional:
    """
    Conditional covariance gamma_x (+) gamma_x^-1 (positions, momenta) and
    displacements d_++ = -d_-- = -1/2 (0, A dx - B Dx, 0, A dx + B Dx) in
    xpxp order, with dx = |x0B| + |x0A| and Dx = |x0B| - |x0A|.

    Raises:
        SingularCovariance: If gamma_x is singular
    """
    u, v = abs(float(x0A)), abs(float(x0B))
    aux = state.auxiliaries()
    gamma_x = state.gamma_x
    inverse = checked_inverse(gamma_x)

    gamma = np.zeros((4, 4))
    gamma[np.ix_([0, 2], [0, 2])] = gamma_x
    gamma[np.ix_([1, 3], [1, 3])] = inverse

    sum_term = aux.A_coef * (v + u)
    diff_term = aux.B_coef * (v - u)
    d_pp = -0.5 * np.array([0.0, sum_term - diff_term, 0.0, sum_term + diff_term])
    return EveConditional(gamma_pp=gamma, d_pp=d_pp, d_mm=-d_pp)


def _overlap_exponent(state: SymmetricStdState, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(4 / L) [((u^2 + v^2) / 2) P + u v (c_x - c_p L)]."""
    bracket = 0.5 * (u * u + v * v) * state.P + u * v * (state.c_x - state.c_p * state.L)
    return 4.0 / state.L * bracket


def eve_overlap_squared(state: SymmetricStdState, x0A, x0B):
    """|<e++|e-->|^2, equal to fidelity_hs of Eve's two conditional states."""
    u, v = _moduli(x0A, x0B)
    return _scalar_or_array(np.exp(-_overlap_exponent(state, u, v)))


def eve_overlap(state: SymmetricStdState, x0A, x0B):
    """|<e++|e-->|."""
    u, v = _moduli(x0A, x0B)
    return _scalar_or_array(np.exp(-0.5 * _overlap_exponent(state, u, v)))
