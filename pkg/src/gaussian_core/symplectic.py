"""
Symplectic form, affine symplectic transforms and their generators.

Phase-space ordering is xpxp: (q_1, p_1, q_2, p_2, ...).
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence, Set

import numpy as np
from scipy.linalg import block_diag

from error_handling.exceptions import DimensionError, UnsupportedTransform
from gaussian_core.linalg import SYMMETRY_TOL, mode_indices

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymplecticForm:
    """J_N = direct sum of N blocks [[0, 1], [-1, 0]]."""
    n_modes: int

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise DimensionError(f"Number of modes must be positive; got {self.n_modes}")

    @property
    def matrix(self) -> np.ndarray:
        omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
        return np.kron(np.eye(self.n_modes), omega)


def symplectic_form(n_modes: int) -> np.ndarray:
    """Matrix of the symplectic form for n_modes modes."""
    return SymplecticForm(n_modes).matrix


@dataclass(frozen=True)
class SymplecticTransform:
    """Affine symplectic map zeta -> S zeta + s."""
    S: np.ndarray
    s: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        S = np.array(self.S, dtype=float)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise DimensionError(f"S must be 2N x 2N; got shape {S.shape}")
        s = np.zeros(S.shape[0]) if self.s is None else np.array(self.s, dtype=float)
        if s.shape != (S.shape[0],):
            raise DimensionError(
                f"Translation length {s.shape} does not match S dimension {S.shape[0]}"
            )
        S.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "s", s)

    @property
    def n_modes(self) -> int:
        return self.S.shape[0] // 2

    def symplectic_defect(self) -> float:
        """max |S^T J S - J|."""
        J = symplectic_form(self.n_modes)
        return float(np.max(np.abs(self.S.T @ J @ self.S - J)))

    def is_symplectic(self, tol: float = SYMMETRY_TOL) -> bool:
        return self.symplectic_defect() < tol

    def compose(self, inner: "SymplecticTransform") -> "SymplecticTransform":
        """The transform applying ``inner`` first, then ``self``."""
        if inner.n_modes != self.n_modes:
            raise DimensionError(
                f"Cannot compose {self.n_modes}-mode and {inner.n_modes}-mode transforms"
            )
        return SymplecticTransform(self.S @ inner.S, self.S @ inner.s + self.s)

    def direct_sum(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """Local transform acting as self on the first modes and other on the rest."""
        return SymplecticTransform(
            block_diag(self.S, other.S), np.concatenate([self.s, other.s])
        )


def embed_transform(
    transform: SymplecticTransform, modes: Sequence[int], n_modes: int
) -> SymplecticTransform:
    """
    Lift a k-mode transform to act on the given modes of an n_modes system.

    Args:
        transform: Transform on len(modes) modes
        modes: Target mode indices, in the transform's own mode order
        n_modes: Total number of modes

    Returns:
        The embedded transform, identity on all other modes
    """
    modes = list(modes)
    if len(modes) != transform.n_modes:
        raise DimensionError(
            f"Transform acts on {transform.n_modes} modes but {len(modes)} were given"
        )
    if len(set(modes)) != len(modes) or min(modes) < 0 or max(modes) >= n_modes:
        raise DimensionError(f"Invalid target modes {modes} for {n_modes} modes")
    idx = mode_indices(modes)
    S = np.eye(2 * n_modes)
    S[np.ix_(idx, idx)] = transform.S
    s = np.zeros(2 * n_modes)
    s[idx] = transform.s
    return SymplecticTransform(S, s)


def _phase_shift(theta: float) -> SymplecticTransform:
    c, sn = np.cos(theta), np.sin(theta)
    return SymplecticTransform(np.array([[c, -sn], [sn, c]]))


def _squeezer(r: float) -> SymplecticTransform:
    return SymplecticTransform(np.diag([np.exp(-r), np.exp(r)]))


def _beam_splitter(theta: float) -> SymplecticTransform:
    c, sn = np.cos(theta / 2.0), np.sin(theta / 2.0)
    identity = np.eye(2)
    return SymplecticTransform(np.block([[c * identity, sn * identity],
                                         [-sn * identity, c * identity]]))


def _two_mode_squeezer(r: float) -> SymplecticTransform:
    ch, sh = np.cosh(r), np.sinh(r)
    identity = np.eye(2)
    reflection = np.diag([1.0, -1.0])
    return SymplecticTransform(np.block([[ch * identity, sh * reflection],
                                         [sh * reflection, ch * identity]]))


def _translation(q0: float, p0: float) -> SymplecticTransform:
    return SymplecticTransform(np.eye(2), np.array([q0, p0]))


# Registry of generator kinds and their required parameters
_GENERATORS: Dict[str, Callable[..., SymplecticTransform]] = {
    "phase_shift": _phase_shift,
    "squeezer": _squeezer,
    "beam_splitter": _beam_splitter,
    "two_mode_squeezer": _two_mode_squeezer,
    "translation": _translation,
}

_PARAMETERS: Dict[str, Set[str]] = {
    "phase_shift": {"theta"},
    "squeezer": {"r"},
    "beam_splitter": {"theta"},
    "two_mode_squeezer": {"r"},
    "translation": {"q0", "p0"},
}


def list_transforms() -> Dict[str, list]:
    """Supported generator kinds mapped to their parameter names."""
    return {kind: sorted(params) for kind, params in _PARAMETERS.items()}


def make_transform(
    kind: str, params: Optional[Mapping[str, float]] = None
) -> SymplecticTransform:
    """
    Build one of the elementary symplectic generators.

    Args:
        kind: phase_shift, squeezer, beam_splitter, two_mode_squeezer or translation
        params: Parameter mapping, e.g. {"r": 0.5}

    Returns:
        The generator as a SymplecticTransform

    Raises:
        UnsupportedTransform: If the kind is unknown or parameters are missing/invalid
    """
    if kind not in _GENERATORS:
        raise UnsupportedTransform(
            f"Transform '{kind}' is not supported. "
            f"Supported kinds: {', '.join(sorted(_GENERATORS))}"
        )
    params = dict(params or {})
    expected = _PARAMETERS[kind]
    if set(params) != expected:
        raise UnsupportedTransform(
            f"Transform '{kind}' takes parameters {sorted(expected)}; got {sorted(params)}"
        )
    values = {name: float(value) for name, value in params.items()}
    if not all(np.isfinite(v) for v in values.values()):
        raise UnsupportedTransform(f"Transform '{kind}' parameters must be finite: {values}")
    transform = _GENERATORS[kind](**values)
    logger.debug(f"Built {kind} transform with {values}")
    return transform
