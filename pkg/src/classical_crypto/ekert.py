"""
Ekert91 entanglement-based key distribution on simulated singlet pairs.

Alice measures along one of three azimuthal angles (0, pi/4, pi/2) and Bob
along one of (pi/4, pi/2, 3pi/4). For a singlet the correlation of the
+/-1 outcomes is E = -cos(phi_A - phi_B). Rounds with equal orientations
give anticorrelated key bits; the mismatched settings estimate the CHSH value.
"""
import itertools
import logging
import math
from typing import Dict, Optional, Tuple

import numpy as np

from classical_crypto.transcript import QubitProtocolRun
from error_handling.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

ALICE_ANGLES = np.array([0.0, math.pi / 4, math.pi / 2])
BOB_ANGLES = np.array([math.pi / 4, math.pi / 2, 3 * math.pi / 4])
KEY_SETTINGS = ((1, 0), (2, 1))
# (setting, sign) terms of S = |E11 + E33 - E13 + E31|
CHSH_TERMS = (((0, 0), 1.0), ((2, 2), 1.0), ((0, 2), -1.0), ((2, 0), 1.0))
CLASSICAL_BOUND = 2.0


def correlation(i: int, j: int) -> float:
    """Singlet correlation for Alice's setting i and Bob's setting j (zero-based)."""
    return -math.cos(ALICE_ANGLES[i] - BOB_ANGLES[j])


def chsh_value_exact() -> float:
    """Quantum CHSH value for the fixed angles, 2 sqrt(2)."""
    return abs(sum(sign * correlation(i, j) for (i, j), sign in CHSH_TERMS))


def classical_chsh_bound() -> float:
    """
    Largest CHSH value reachable by local deterministic strategies.

    Every strategy fixes Alice's outcomes for settings 1 and 3 and Bob's for
    settings 1 and 3; all sixteen assignments are enumerated.
    """
    best = 0.0
    for a1, a3, b1, b3 in itertools.product((1, -1), repeat=4):
        alice = {0: a1, 2: a3}
        bob = {0: b1, 2: b3}
        value = abs(sum(sign * alice[i] * bob[j] for (i, j), sign in CHSH_TERMS))
        best = max(best, float(value))
    return best


def _chsh_estimate(
    correlations: Dict[Tuple[int, int], Tuple[float, float, int]]
) -> Tuple[Optional[float], Optional[float]]:
    total = 0.0
    variance = 0.0
    for setting, sign in CHSH_TERMS:
        mean, error, count = correlations[setting]
        if count == 0:
            logger.warning(f"No rounds with settings {setting}; CHSH value unavailable")
            return None, None
        total += sign * mean
        variance += error * error
    return abs(total), math.sqrt(variance)


def ekert91_run(n_pairs: int, seed: int = 0) -> QubitProtocolRun:
    """
    Simulate Ekert91.

    Args:
        n_pairs: Number of distributed singlet pairs (at least 100)
        seed: Seed for setting choices and outcomes

    Returns:
        QubitProtocolRun carrying the sifted key, the per-setting
        correlations as (mean, standard error, count) and the CHSH estimate
    """
    if n_pairs < 100:
        raise ConfigurationError(f"Ekert91 needs at least 100 pairs; got {n_pairs}")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    alice_settings = rng.integers(0, 3, size=n_pairs)
    bob_settings = rng.integers(0, 3, size=n_pairs)

    expected = -np.cos(ALICE_ANGLES[alice_settings] - BOB_ANGLES[bob_settings])
    alice_out = rng.choice(np.array([1, -1]), size=n_pairs)
    agree = rng.random(n_pairs) < (1.0 + expected) / 2.0
    bob_out = np.where(agree, alice_out, -alice_out)

    correlations: Dict[Tuple[int, int], Tuple[float, float, int]] = {}
    for i in range(3):
        for j in range(3):
            mask = (alice_settings == i) & (bob_settings == j)
            count = int(mask.sum())
            if count == 0:
                correlations[(i, j)] = (0.0, 0.0, 0)
                continue
            mean = float(np.mean(alice_out[mask] * bob_out[mask]))
            correlations[(i, j)] = (mean, math.sqrt(max(1.0 - mean * mean, 0.0) / count), count)
    s_value, s_error = _chsh_estimate(correlations)

    # outcome +1 -> bit 0, -1 -> bit 1
    alice_bits = (alice_out < 0).astype(int)
    bob_bits = (bob_out < 0).astype(int)
    key_mask = np.zeros(n_pairs, dtype=bool)
    for i, j in KEY_SETTINGS:
        key_mask |= (alice_settings == i) & (bob_settings == j)
    sifted = np.flatnonzero(key_mask)
    alice_key = alice_bits[sifted]
    bob_key = 1 - bob_bits[sifted]
    error_rate = float(np.mean(alice_key != bob_key)) if sifted.size else None

    run = QubitProtocolRun(
        protocol="ekert91",
        n_rounds=n_pairs,
        alice_bases=[f"A{i + 1}" for i in alice_settings],
        bob_bases=[f"B{j + 1}" for j in bob_settings],
        alice_bits=[int(b) for b in alice_bits],
        bob_bits=[int(b) for b in bob_bits],
        sifted_positions=[int(i) + 1 for i in sifted],
        alice_key=[int(b) for b in alice_key],
        bob_key=[int(b) for b in bob_key],
        error_rate=error_rate,
        estimated_error=error_rate,
        s_value=s_value,
        s_standard_error=s_error,
        correlations=correlations,
        secure=None if s_value is None else bool(s_value > CLASSICAL_BOUND),
    )
    logger.debug(f"Ekert91 n={n_pairs}: S={s_value} +/- {s_error}, key={len(sifted)}")
    return run
