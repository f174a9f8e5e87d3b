"""
BB84 prepare-and-measure simulation with an optional intercept-resend
eavesdropper.

Bases are "Z" (computational) and "X" (diagonal). A measurement in the
preparation basis returns the prepared bit; otherwise the outcome is
uniformly random.
"""
import logging
from typing import List, Optional, Sequence

import numpy as np

from classical_crypto.transcript import QubitProtocolRun
from error_handling.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

BASES = ("Z", "X")
DEFAULT_THRESHOLD = 0.25


def _measure(
    prepared_bits: np.ndarray, prepared_bases: np.ndarray, measure_bases: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    random_bits = rng.integers(0, 2, size=prepared_bits.shape)
    return np.where(prepared_bases == measure_bases, prepared_bits, random_bits)


def _finish(
    alice_bits: np.ndarray,
    alice_bases: np.ndarray,
    bob_bases: np.ndarray,
    bob_bits: np.ndarray,
    rng: np.random.Generator,
    eve_bases: Optional[np.ndarray] = None,
    disclose_fraction: float = 0.0,
    threshold: float = DEFAULT_THRESHOLD,
) -> QubitProtocolRun:
    """Sift matching-basis rounds, sacrifice a fraction to estimate the error and decide."""
    sifted = np.flatnonzero(alice_bases == bob_bases)
    mismatches = alice_bits[sifted] != bob_bits[sifted]
    error_rate = float(mismatches.mean()) if sifted.size else None

    n_disclose = int(round(disclose_fraction * sifted.size))
    disclosed = np.sort(rng.choice(sifted, size=n_disclose, replace=False)) if n_disclose else np.array([], dtype=int)
    kept = np.setdiff1d(sifted, disclosed)
    if n_disclose:
        estimated = float(np.mean(alice_bits[disclosed] != bob_bits[disclosed]))
    else:
        estimated = error_rate

    secure = None if estimated is None else bool(estimated < threshold)
    return QubitProtocolRun(
        protocol="bb84",
        n_rounds=int(alice_bits.size),
        alice_bases=[BASES[b] for b in alice_bases],
        bob_bases=[BASES[b] for b in bob_bases],
        alice_bits=[int(b) for b in alice_bits],
        bob_bits=[int(b) for b in bob_bits],
        sifted_positions=[int(i) + 1 for i in sifted],
        alice_key=[int(b) for b in alice_bits[kept]],
        bob_key=[int(b) for b in bob_bits[kept]],
        eve_bases=None if eve_bases is None else [BASES[b] for b in eve_bases],
        error_rate=error_rate,
        estimated_error=estimated,
        disclosed_positions=[int(i) + 1 for i in disclosed],
        secure=secure,
    )


def _basis_indices(bases: Sequence[str]) -> np.ndarray:
    try:
        return np.array([BASES.index(b.strip().upper()) for b in bases], dtype=int)
    except ValueError:
        raise ConfigurationError(f"Bases must be 'Z' or 'X'; got {list(bases)}")


def bb84_from_choices(
    alice_bits: Sequence[int],
    alice_bases: Sequence[str],
    bob_bases: Sequence[str],
    bob_bits: Optional[Sequence[int]] = None,
    seed: int = 0,
    threshold: float = DEFAULT_THRESHOLD,
) -> QubitProtocolRun:
    """
    Replay a run from explicit per-round tables.

    Args:
        alice_bits: Alice's raw bits
        alice_bases: Alice's preparation bases ("Z"/"X")
        bob_bases: Bob's measurement bases
        bob_bits: Bob's outcomes; simulated without eavesdropper when omitted
        seed: Seed for simulated outcomes
        threshold: Error rate below which the key is kept

    Returns:
        QubitProtocolRun with 1-based sifted positions
    """
    a_bits = np.asarray(alice_bits, dtype=int)
    a_bases = _basis_indices(alice_bases)
    b_bases = _basis_indices(bob_bases)
    if not (a_bits.size == a_bases.size == b_bases.size):
        raise ConfigurationError("Bit and basis tables must have the same length")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    if bob_bits is None:
        b_bits = _measure(a_bits, a_bases, b_bases, rng)
    else:
        b_bits = np.asarray(bob_bits, dtype=int)
        if b_bits.size != a_bits.size:
            raise ConfigurationError("Bob's bits must match the number of rounds")
    return _finish(a_bits, a_bases, b_bases, b_bits, rng, threshold=threshold)


def bb84_run(
    n_bits: int,
    eavesdrop: bool = False,
    seed: int = 0,
    disclose_fraction: float = 0.5,
    threshold: float = DEFAULT_THRESHOLD,
) -> QubitProtocolRun:
    """
    Simulate BB84.

    Args:
        n_bits: Number of transmitted qubits (at least 8)
        eavesdrop: Insert an intercept-resend attacker measuring in random bases
        seed: Seed for all random choices
        disclose_fraction: Fraction of the sifted key published to estimate the error
        threshold: Estimated error rate below which the key is accepted

    Returns:
        QubitProtocolRun with the full sifted error rate and the disclosed-sample estimate
    """
    if n_bits < 8:
        raise ConfigurationError(f"BB84 needs at least 8 rounds; got {n_bits}")
    if not 0.0 <= disclose_fraction < 1.0:
        raise ConfigurationError(f"disclose_fraction must lie in [0, 1); got {disclose_fraction}")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    alice_bits = rng.integers(0, 2, size=n_bits)
    alice_bases = rng.integers(0, 2, size=n_bits)
    bob_bases = rng.integers(0, 2, size=n_bits)

    eve_bases = None
    sent_bits, sent_bases = alice_bits, alice_bases
    if eavesdrop:
        eve_bases = rng.integers(0, 2, size=n_bits)
        sent_bits = _measure(alice_bits, alice_bases, eve_bases, rng)
        sent_bases = eve_bases
    bob_bits = _measure(sent_bits, sent_bases, bob_bases, rng)

    run = _finish(alice_bits, alice_bases, bob_bases, bob_bits, rng, eve_bases, disclose_fraction, threshold)
    logger.debug(f"BB84 n={n_bits} eve={eavesdrop}: sifted={len(run.sifted_positions)} qber={run.error_rate}")
    return run


WORKED_EXAMPLE: List[tuple] = [
    # (Alice bit, Alice basis, Bob basis, Bob bit)
    (0, "Z", "X", 0),
    (1, "X", "Z", 0),
    (1, "X", "X", 1),
    (0, "X", "X", 0),
    (0, "Z", "X", 0),
    (1, "X", "X", 1),
    (1, "Z", "X", 1),
    (0, "X", "X", 0),
    (0, "X", "X", 0),
]
