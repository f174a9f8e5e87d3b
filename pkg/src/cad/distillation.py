"""
Classical advantage distillation by repetition blocks.

Alice draws a secret bit b and publishes b XOR a_i for M of her raw bits a_i.
Bob XORs the announcement into his bits and keeps the block only when all M
results agree. The conditional error of kept blocks is
eps^M / ((1 - eps)^M + eps^M).
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import expit

from error_handling.exceptions import ConfigurationError, NoAdvantage

logger = logging.getLogger(__name__)

DEFAULT_CHUNK = 1 << 16
MIN_TRIALS = 10_000


def _check(epsilon: float, M: int) -> None:
    if not 0.0 <= epsilon:
        raise ConfigurationError(f"Error rate must be non-negative; got {epsilon}")
    if epsilon >= 0.5:
        raise NoAdvantage(f"Advantage distillation needs eps < 1/2; got {epsilon}")
    if int(M) != M or M < 1:
        raise ConfigurationError(f"Block size must be a positive integer; got {M}")


def cad_error(epsilon: float, M: int) -> float:
    """
    Error probability of an accepted block.

    Args:
        epsilon: Raw bit error rate in [0, 1/2)
        M: Block size

    Returns:
        eps^M / ((1 - eps)^M + eps^M)

    Raises:
        NoAdvantage: If epsilon >= 1/2
    """
    _check(epsilon, M)
    if epsilon == 0.0:
        return 0.0
    # 1 / (1 + ((1 - eps) / eps)^M), stable for large M
    return float(expit(-M * math.log((1.0 - epsilon) / epsilon)))


def acceptance_rate(epsilon: float, M: int) -> float:
    """Probability that Bob keeps a block, (1 - eps)^M + eps^M."""
    _check(epsilon, M)
    return float((1.0 - epsilon) ** M + epsilon ** M)


def blocks_needed(epsilon: float, target: float) -> int:
    """Smallest block size M with cad_error(epsilon, M) < target."""
    if not 0.0 < target < 0.5:
        raise ConfigurationError(f"Target error must lie in (0, 1/2); got {target}")
    _check(epsilon, 1)
    if epsilon < target:
        return 1
    estimate = math.log((1.0 - target) / target) / math.log((1.0 - epsilon) / epsilon)
    M = max(1, math.floor(estimate))
    while cad_error(epsilon, M) >= target:
        M += 1
    return M


@dataclass(frozen=True)
class CadResult:
    """Closed-form and simulated outcome of advantage distillation."""
    epsilon_in: float
    block_size_M: int
    epsilon_out_formula: float
    epsilon_out_simulated: Optional[float]
    acceptance_rate: float
    n_trials: int
    n_accepted: int

    @property
    def acceptance_formula(self) -> float:
        return (1.0 - self.epsilon_in) ** self.block_size_M + self.epsilon_in ** self.block_size_M

    @property
    def standard_error(self) -> Optional[float]:
        """Binomial standard error of the simulated conditional error."""
        if self.n_accepted == 0:
            return None
        p = self.epsilon_out_formula
        return math.sqrt(p * (1.0 - p) / self.n_accepted)

    def consistent(self, n_sigma: float = 3.0) -> bool:
        """Whether simulation and closed form agree within n_sigma binomial errors."""
        q = self.acceptance_formula
        accept_error = math.sqrt(q * (1.0 - q) / self.n_trials)
        if abs(self.acceptance_rate - q) > n_sigma * accept_error + 1.0 / self.n_trials:
            return False
        if self.epsilon_out_simulated is None:
            return True
        error_bound = n_sigma * self.standard_error + 1.0 / self.n_accepted
        return abs(self.epsilon_out_simulated - self.epsilon_out_formula) <= error_bound

    def as_dict(self) -> dict:
        return {
            "epsilon_in": self.epsilon_in,
            "M": self.block_size_M,
            "epsilon_out_formula": self.epsilon_out_formula,
            "epsilon_out_simulated": self.epsilon_out_simulated,
            "acceptance_rate": self.acceptance_rate,
            "n_trials": self.n_trials,
            "n_accepted": self.n_accepted,
        }


def _simulate_chunk(rng: np.random.Generator, epsilon: float, M: int, size: int):
    alice_raw = rng.integers(0, 2, size=(size, M), dtype=np.uint8)
    flips = (rng.random((size, M)) < epsilon).astype(np.uint8)
    bob_raw = alice_raw ^ flips
    secret = rng.integers(0, 2, size=size, dtype=np.uint8)
    announced = alice_raw ^ secret[:, None]
    decoded = bob_raw ^ announced
    accepted = np.all(decoded == decoded[:, :1], axis=1)
    errors = accepted & (decoded[:, 0] != secret)
    return int(accepted.sum()), int(errors.sum())


def simulate_cad(
    epsilon: float,
    M: int,
    n_trials: int = 1_000_000,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
) -> CadResult:
    """
    Bit-level simulation of the repetition-block protocol.

    Args:
        epsilon: Raw bit error rate in [0, 1/2)
        M: Block size
        n_trials: Number of blocks, at least MIN_TRIALS
        seed: Seed; chunk k draws from SeedSequence([seed, k])
        chunk_size: Blocks per vectorised batch

    Returns:
        CadResult; epsilon_out_simulated is None when no block was accepted
    """
    _check(epsilon, M)
    if n_trials < MIN_TRIALS:
        raise ConfigurationError(f"n_trials must be at least {MIN_TRIALS}; got {n_trials}")
    formula = cad_error(epsilon, M)

    accepted = errors = 0
    chunk = 0
    remaining = n_trials
    while remaining > 0:
        size = min(chunk_size, remaining)
        rng = np.random.default_rng(np.random.SeedSequence([seed, chunk]))
        chunk_accepted, chunk_errors = _simulate_chunk(rng, epsilon, M, size)
        accepted += chunk_accepted
        errors += chunk_errors
        remaining -= size
        chunk += 1

    simulated = errors / accepted if accepted else None
    result = CadResult(
        epsilon_in=epsilon,
        block_size_M=int(M),
        epsilon_out_formula=formula,
        epsilon_out_simulated=simulated,
        acceptance_rate=accepted / n_trials,
        n_trials=n_trials,
        n_accepted=accepted,
    )
    logger.debug(f"CAD eps={epsilon:g} M={M}: formula={formula:.6g} simulated={simulated} accepted={accepted}")
    return result
