"""
Protocol efficiency E(gamma_AB): the probability per shared state of keeping
a correct bit, integrated over Alice's and Bob's position outcomes.

The deterministic path is a Gauss-Legendre product rule whose inner limits
are the acceptance-window edges, so every panel integrates a smooth
function. The Monte-Carlo path samples the position marginal directly.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from pydantic import BaseModel, Field
from scipy.special import erfc

from error_handling.exceptions import ConfigurationError
from qkd_protocol.protocol import error_rate
from qkd_protocol.security import Attack, SecurityInterval, accept_interval
from qkd_protocol.states import SymmetricStdState

logger = logging.getLogger(__name__)


class QuadratureConfig(BaseModel):
    """Numerical settings for efficiency integration and its Monte-Carlo oracle."""
    x_max: Optional[float] = Field(
        None, gt=0, description="Truncation radius per axis; defaults to 8 sqrt(lambda)"
    )
    n_points: int = Field(256, ge=8, description="Gauss-Legendre nodes per axis")
    mc_samples: int = Field(1_000_000, ge=1000, description="Monte-Carlo samples")
    rng_seed: int = Field(0, ge=0, description="Seed for Monte-Carlo streams")
    window_scale: float = Field(
        1.0, ge=0, description="Diagnostic widening of the acceptance window; 0 is point acceptance"
    )
    fold_reflection: bool = Field(
        True, description="Integrate x0A > 0 only and double, using (x0A, x0B) -> (-x0A, -x0B)"
    )
    tail_tolerance: float = Field(1e-6, gt=0, description="Allowed marginal mass beyond x_max")
    chunk_size: int = Field(1 << 18, ge=1024, description="Monte-Carlo samples per batch")
    verify_sigma: float = Field(
        4.0, gt=0, description="Standard errors a verified sweep point may deviate from Monte-Carlo"
    )

    def radius(self, state: SymmetricStdState) -> float:
        """Truncation radius for a state, checked against the tail tolerance."""
        x_max = self.x_max if self.x_max is not None else 8.0 * math.sqrt(state.lam)
        # each one-dimensional marginal is N(0, lambda / 2)
        tail = 2.0 * float(erfc(x_max / math.sqrt(state.lam)))
        if tail >= self.tail_tolerance:
            raise ConfigurationError(
                f"x_max={x_max:g} leaves marginal tail mass {tail:.3e} >= {self.tail_tolerance:g}"
            )
        return x_max


def marginal_density(state: SymmetricStdState, x0A, x0B):
    """
    Joint position density of Alice's and Bob's outcomes,
    exp((2 c_x x0A x0B - lambda (x0A^2 + x0B^2)) / L) / (pi sqrt(L)).
    """
    xa = np.asarray(x0A, dtype=float)
    xb = np.asarray(x0B, dtype=float)
    L = state.L
    values = np.exp((2.0 * state.c_x * xa * xb - state.lam * (xa * xa + xb * xb)) / L)
    values = values / (math.pi * math.sqrt(L))
    return float(values) if np.ndim(values) == 0 else values


def _window(state: SymmetricStdState, attack: Attack, config: QuadratureConfig) -> SecurityInterval:
    return accept_interval(state, None, attack).scaled(config.window_scale)


def _half_plane(
    state: SymmetricStdState,
    interval: SecurityInterval,
    x_max: float,
    n_points: int,
    sign: float,
    weight_by_success: bool,
) -> float:
    """Integral over x0A in sign * (0, x_max) and both signs of x0B."""
    nodes, weights = leggauss(n_points)
    a = 0.5 * x_max * (nodes + 1.0)
    wa = 0.5 * x_max * weights

    lower, upper = interval.bounds(a)
    lower = np.clip(lower, 0.0, x_max)
    upper = np.clip(np.minimum(upper, x_max), 0.0, x_max)
    span = np.maximum(upper - lower, 0.0)

    b = lower[:, None] + 0.5 * span[:, None] * (nodes[None, :] + 1.0)
    wb = 0.5 * span[:, None] * weights[None, :]
    xa = sign * a[:, None]
    density = marginal_density(state, xa, b) + marginal_density(state, xa, -b)
    if weight_by_success:
        density = density * (1.0 - error_rate(state, a[:, None], b))
    return float(np.sum(wa[:, None] * wb * density))


def _integrate(
    state: SymmetricStdState, attack: Attack, config: QuadratureConfig, weight_by_success: bool
) -> float:
    interval = _window(state, attack, config)
    if interval.hi_factor <= interval.lo_factor:
        return 0.0
    x_max = config.radius(state)
    if config.fold_reflection:
        total = 2.0 * _half_plane(state, interval, x_max, config.n_points, 1.0, weight_by_success)
    else:
        total = sum(
            _half_plane(state, interval, x_max, config.n_points, sign, weight_by_success)
            for sign in (1.0, -1.0)
        )
    return float(min(max(total, 0.0), 1.0))


def efficiency(
    state: SymmetricStdState,
    attack: Attack = Attack.INDIVIDUAL,
    config: Optional[QuadratureConfig] = None,
) -> float:
    """
    Efficiency E = integral over accepted outcomes of (1 - eps_AB) times the position density.

    Args:
        state: Shared NPPT state
        attack: Attack model selecting the acceptance window
        config: Quadrature settings

    Returns:
        E in [0, 1]

    Raises:
        SeparableState: If the state is PPT
        NotCoherentSecure: For coherent attacks on states that cannot be secured
    """
    config = config or QuadratureConfig()
    value = _integrate(state, Attack(attack), config, weight_by_success=True)
    logger.debug(f"E({state.lam:g}, {state.c_x:g}, {state.c_p:g}; {Attack(attack).value}) = {value:.12g}")
    return value


def acceptance_probability(
    state: SymmetricStdState,
    attack: Attack = Attack.INDIVIDUAL,
    config: Optional[QuadratureConfig] = None,
) -> float:
    """Probability that Bob's outcome falls inside the window; an upper bound of E."""
    config = config or QuadratureConfig()
    return _integrate(state, Attack(attack), config, weight_by_success=False)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """Sample mean and its standard error."""
    mean: float
    standard_error: float
    n_samples: int


def efficiency_monte_carlo(
    state: SymmetricStdState,
    attack: Attack = Attack.INDIVIDUAL,
    config: Optional[QuadratureConfig] = None,
    stream: int = 0,
) -> MonteCarloEstimate:
    """
    Monte-Carlo estimate of E from samples of the position marginal N(0, gamma_x / 2).

    Args:
        state: Shared NPPT state
        attack: Attack model
        config: Sample count, seed and window scale
        stream: Index mixed into the seed so independent points draw independent streams

    Returns:
        MonteCarloEstimate
    """
    config = config or QuadratureConfig()
    interval = _window(state, Attack(attack), config)
    rng = np.random.default_rng(np.random.SeedSequence([config.rng_seed, stream]))
    chol = np.linalg.cholesky(state.gamma_x / 2.0)

    total = 0.0
    total_sq = 0.0
    remaining = config.mc_samples
    while remaining > 0:
        size = min(remaining, config.chunk_size)
        xa, xb = (rng.standard_normal((size, 2)) @ chol.T).T
        accepted = interval.contains(xa, xb)
        values = np.where(accepted, 1.0 - error_rate(state, xa, xb), 0.0)
        total += float(values.sum())
        total_sq += float(np.square(values).sum())
        remaining -= size

    n = config.mc_samples
    mean = total / n
    variance = max(total_sq / n - mean * mean, 0.0)
    return MonteCarloEstimate(mean, math.sqrt(variance / (n - 1)), n)


@dataclass(frozen=True)
class EfficiencyCheck:
    """Quadrature value compared with the Monte-Carlo oracle."""
    quadrature: float
    monte_carlo: MonteCarloEstimate
    n_sigma: float

    @property
    def deviation(self) -> float:
        """|quadrature - mean| in standard errors."""
        if self.monte_carlo.standard_error == 0.0:
            return 0.0 if self.quadrature == self.monte_carlo.mean else math.inf
        return abs(self.quadrature - self.monte_carlo.mean) / self.monte_carlo.standard_error

    @property
    def consistent(self) -> bool:
        return self.deviation <= self.n_sigma


def verify_efficiency(
    state: SymmetricStdState,
    attack: Attack = Attack.INDIVIDUAL,
    config: Optional[QuadratureConfig] = None,
    stream: int = 0,
    n_sigma: float = 3.0,
) -> EfficiencyCheck:
    """Evaluate E both ways and log a warning when they disagree."""
    config = config or QuadratureConfig()
    check = EfficiencyCheck(
        quadrature=efficiency(state, attack, config),
        monte_carlo=efficiency_monte_carlo(state, attack, config, stream),
        n_sigma=n_sigma,
    )
    if not check.consistent:
        logger.warning(
            f"Quadrature E={check.quadrature:.6g} and Monte-Carlo "
            f"{check.monte_carlo.mean:.6g} +/- {check.monte_carlo.standard_error:.2g} "
            f"differ by {check.deviation:.2f} sigma"
        )
    return check
