"""
Security predicates and acceptance windows.

Individual attacks require eps / (1 - eps) < |<e++|e-->|, finite coherent
attacks eps / (1 - eps) < |<e++|e-->|^2. Both reduce to a quadratic form in
(|x0A|, |x0B|) whose negative region is the window
Dx = |x0B| - |x0A| in (2 / (-sqrt(alpha) - 1), 2 / (sqrt(alpha) - 1)) |x0A|.
"""
import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from error_handling.exceptions import (
    InternalInconsistency,
    NotCoherentSecure,
    SeparableState,
)
from qkd_protocol.protocol import error_rate, eve_overlap, eve_overlap_squared
from qkd_protocol.states import SymmetricStdState

logger = logging.getLogger(__name__)

UNIT_SNAP_TOL = 1e-12
PURE_SNAP_TOL = 1e-9
NEUTRAL_BAND = 1e-9


class Attack(str, Enum):
    """Eavesdropping models."""
    INDIVIDUAL = "individual"
    COHERENT = "coherent"


@dataclass(frozen=True)
class SecurityInterval:
    """
    Open acceptance window for Dx = |x0B| - |x0A|, in units of |x0A|.

    param is alpha (individual) or beta (finite coherent). param == 1 means an
    unbounded window: lo_factor = -1, hi_factor = +inf.
    """
    lo_factor: float
    hi_factor: float
    param: float
    attack: Attack

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.hi_factor)

    def bounds(self, x0A):
        """Accepted (lower, upper) range of |x0B| for a given x0A."""
        u = np.abs(np.asarray(x0A, dtype=float))
        return u * (1.0 + self.lo_factor), u * (1.0 + self.hi_factor)

    def contains(self, x0A, x0B):
        """True where |x0B| - |x0A| lies strictly inside the window."""
        u = np.abs(np.asarray(x0A, dtype=float))
        delta = np.abs(np.asarray(x0B, dtype=float)) - u
        inside = (delta > self.lo_factor * u) & (delta < self.hi_factor * u)
        return bool(inside) if np.ndim(inside) == 0 else inside

    def length(self, x0A: float) -> float:
        """Window length D = 4 sqrt(param) / (param - 1) |x0A|."""
        if self.unbounded:
            return math.inf
        return (self.hi_factor - self.lo_factor) * abs(float(x0A))

    def scaled(self, factor: float) -> "SecurityInterval":
        """Window with both factors multiplied by ``factor``; 0 gives point acceptance."""
        if factor < 0:
            raise ValueError(f"Window scale must be non-negative; got {factor}")
        if factor == 0:
            return replace(self, lo_factor=0.0, hi_factor=0.0)
        return replace(self, lo_factor=self.lo_factor * factor, hi_factor=self.hi_factor * factor)

    def describe(self) -> str:
        name = "alpha" if self.attack == Attack.INDIVIDUAL else "beta"
        if self.unbounded:
            return f"interval: unbounded ({name} = 1)"
        return f"interval: [{self.lo_factor:.6g}, {self.hi_factor:.6g}] |x0A| ({name} = {self.param:.6g})"


def coherent_constraint(state: SymmetricStdState) -> float:
    """lambda - (lambda + c_x)(lambda - c_x)(lambda - c_p)."""
    return state.coherent_constraint()


def alpha_parameter(state: SymmetricStdState) -> float:
    """Window parameter for individual attacks."""
    lam, cx, cp = state.lam, state.c_x, state.c_p
    ratio = (cx - lam) / (cx + lam)
    return ratio * (1.0 - (lam + cx) * (lam + cp)) / (1.0 - state.ppt_product)


def beta_parameter(state: SymmetricStdState) -> float:
    """Window parameter for finite coherent attacks, (c_p L + P) / (c_p L - P)."""
    cpl = state.c_p * state.L
    return (cpl + state.P) / (cpl - state.P)


def security_margin(state: SymmetricStdState, x0A, x0B, attack: Attack = Attack.INDIVIDUAL):
    """
    Reduced left-hand side of the security inequality; negative means secure.

    Individual: ((u^2 + v^2) / 2) P + u v (-c_x - c_p L).
    Coherent:   ((u^2 + v^2) / 2) P - u v c_p L.
    """
    u = np.abs(np.asarray(x0A, dtype=float))
    v = np.abs(np.asarray(x0B, dtype=float))
    coupling = state.c_p * state.L
    if Attack(attack) == Attack.INDIVIDUAL:
        coupling += state.c_x
    margin = 0.5 * (u * u + v * v) * state.P - u * v * coupling
    return float(margin) if np.ndim(margin) == 0 else margin


def _direct_log_gap(state: SymmetricStdState, u: np.ndarray, v: np.ndarray, attack: Attack):
    """log(overlap) - log(eps / (1 - eps)), evaluated from the protocol quantities."""
    eps = np.asarray(error_rate(state, u, v))
    if attack == Attack.INDIVIDUAL:
        overlap = np.asarray(eve_overlap(state, u, v))
    else:
        overlap = np.asarray(eve_overlap_squared(state, u, v))
    with np.errstate(divide="ignore"):
        return np.log(overlap) - (np.log(eps) - np.log1p(-eps))


def security_check(state: SymmetricStdState, x0A, x0B, attack: Attack = Attack.INDIVIDUAL):
    """
    Whether Alice and Bob can keep the bit from outcomes (x0A, x0B).

    Evaluated from the error rate and Eve's overlap, and independently from
    the reduced inequality; the two must agree outside a small neutral band.

    Raises:
        InternalInconsistency: If the two evaluations disagree
    """
    attack = Attack(attack)
    u = np.abs(np.asarray(x0A, dtype=float))
    v = np.abs(np.asarray(x0B, dtype=float))
    margin = np.asarray(security_margin(state, u, v, attack))
    reduced = margin < 0.0

    gap = _direct_log_gap(state, u, v, attack)
    finite = np.isfinite(gap)
    direct = gap > 0.0
    scale = NEUTRAL_BAND * (1.0 + (u * u + v * v) * (abs(state.P) + state.c_x + abs(state.c_p) * state.L))
    decided = finite & (np.abs(margin) > scale)
    if np.any(decided & (direct != reduced)):
        raise InternalInconsistency(
            f"Security predicate disagrees with its reduced form for {state} ({attack.value})"
        )
    return bool(reduced) if np.ndim(reduced) == 0 else reduced


def accept_interval(
    state: SymmetricStdState, x0A: Optional[float] = None, attack: Attack = Attack.INDIVIDUAL
) -> SecurityInterval:
    """
    Acceptance window for Bob's outcome given Alice's.

    Args:
        state: Shared NPPT state
        x0A: Alice's outcome; the window factors do not depend on it
        attack: Attack model

    Returns:
        SecurityInterval with lo/hi factors and alpha or beta

    Raises:
        SeparableState: If the state is PPT
        NotCoherentSecure: For coherent attacks on a state with a non-positive constraint value
        InternalInconsistency: If the window parameter is below 1
    """
    attack = Attack(attack)
    if not state.is_nppt:
        raise SeparableState(
            f"(lambda - c_x)(lambda - c_p) = {state.ppt_product:.6g} >= 1: state is PPT"
        )

    if attack == Attack.INDIVIDUAL:
        param = alpha_parameter(state)
        coupling = state.c_x + state.c_p * state.L
        reference = (state.P + coupling) / (coupling - state.P)
        if not math.isclose(param, reference, rel_tol=1e-8, abs_tol=1e-12):
            raise InternalInconsistency(f"alpha={param!r} disagrees with its reduced form {reference!r}")
    else:
        constraint = coherent_constraint(state)
        if constraint <= 0.0:
            raise NotCoherentSecure(
                f"lambda - (lambda + c_x)(lambda - c_x)(lambda - c_p) = {constraint:.6g} <= 0"
            )
        param = beta_parameter(state)

    if param < 1.0 - 1e-9:
        raise InternalInconsistency(f"Window parameter {param!r} < 1 for an admissible state")
    # purity within PURE_SNAP_TOL of 1 counts as pure: unbounded window
    if abs(param - 1.0) <= UNIT_SNAP_TOL or param <= 1.0 or state.purity >= 1.0 - PURE_SNAP_TOL:
        logger.debug(f"{attack.value}: parameter snapped to 1, window unbounded")
        return SecurityInterval(-1.0, math.inf, 1.0, attack)

    root = math.sqrt(param)
    interval = SecurityInterval(2.0 / (-root - 1.0), 2.0 / (root - 1.0), param, attack)
    logger.debug(f"{attack.value}: {interval.describe()}")
    return interval
