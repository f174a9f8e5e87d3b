"""
Protocol state types: the symmetric standard-form state shared by Alice
and Bob, the auxiliary coefficients describing Eve's purification, and the
measurement model.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from entanglement.bipartite import to_standard_form
from error_handling.exceptions import ConfigurationError, UnphysicalInput
from gaussian_core.linalg import CLAMP_TOL, PHYSICAL_TOL
from gaussian_core.state import GaussianState

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetricStdState:
    """
    Symmetric two-mode standard form

        gamma_AB = [[lam, 0, c_x, 0], [0, lam, 0, -c_p],
                    [c_x, 0, lam, 0], [0, -c_p, 0, lam]]

    in xpxp ordering. Construction fails with UnphysicalInput unless
    c_x >= |c_p|, lam > c_x and (lam - c_x)(lam + c_p) >= 1.
    """
    lam: float
    c_x: float
    c_p: float

    def __post_init__(self) -> None:
        values = (self.lam, self.c_x, self.c_p)
        if not all(np.isfinite(v) for v in values):
            raise UnphysicalInput(f"State parameters must be finite; got {values}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "c_x", float(self.c_x))
        object.__setattr__(self, "c_p", float(self.c_p))
        if self.c_x < abs(self.c_p):
            raise UnphysicalInput(
                f"Standard form requires c_x >= |c_p|; got c_x={self.c_x:g}, c_p={self.c_p:g}"
            )
        if self.lam <= self.c_x:
            raise UnphysicalInput(
                f"Covariance not positive definite: lambda={self.lam:g} <= c_x={self.c_x:g}"
            )
        positivity = (self.lam - self.c_x) * (self.lam + self.c_p)
        if positivity < 1.0 - PHYSICAL_TOL:
            raise UnphysicalInput(
                f"(lambda - c_x)(lambda + c_p) = {positivity:.6g} < 1 violates the uncertainty principle"
            )

    @classmethod
    def tmsv(cls, r: float) -> "SymmetricStdState":
        """Two-mode squeezed vacuum: lambda = cosh 2r, c_x = c_p = sinh 2r."""
        return cls(np.cosh(2.0 * r), np.sinh(2.0 * r), np.sinh(2.0 * r))

    @classmethod
    def from_covariance(cls, gamma: np.ndarray, tol: float = 1e-9) -> "SymmetricStdState":
        """Reduce a symmetric two-mode covariance to its standard-form triple."""
        form = to_standard_form(gamma)
        if not np.isclose(form.lambda_a, form.lambda_b, rtol=0.0, atol=tol):
            raise UnphysicalInput(
                f"State is not symmetric: lambda_a={form.lambda_a:g}, lambda_b={form.lambda_b:g}"
            )
        return cls(form.lambda_a, form.k_x, form.k_p)

    @property
    def L(self) -> float:
        """lambda^2 - c_x^2."""
        return self.lam * self.lam - self.c_x * self.c_x

    @property
    def P(self) -> float:
        """lambda (lambda^2 - c_x^2 - 1)."""
        return self.lam * (self.L - 1.0)

    def covariance(self) -> np.ndarray:
        lam, cx, cp = self.lam, self.c_x, self.c_p
        return np.array(
            [
                [lam, 0.0, cx, 0.0],
                [0.0, lam, 0.0, -cp],
                [cx, 0.0, lam, 0.0],
                [0.0, -cp, 0.0, lam],
            ]
        )

    def gaussian_state(self) -> GaussianState:
        return GaussianState(self.covariance())

    @property
    def gamma_x(self) -> np.ndarray:
        """Position block [[lambda, c_x], [c_x, lambda]]."""
        return np.array([[self.lam, self.c_x], [self.c_x, self.lam]])

    @property
    def ppt_product(self) -> float:
        """(lambda - c_x)(lambda - c_p); below 1 iff NPPT."""
        return (self.lam - self.c_x) * (self.lam - self.c_p)

    @property
    def is_nppt(self) -> bool:
        return self.ppt_product < 1.0

    @property
    def log_negativity(self) -> float:
        return float(max(0.0, -0.5 * np.log2(self.ppt_product)))

    @property
    def purity(self) -> float:
        return float(1.0 / np.sqrt(self.L * (self.lam ** 2 - self.c_p ** 2)))

    @property
    def is_pure(self) -> bool:
        return bool(abs(self.purity - 1.0) < 1e-10)

    def coherent_constraint(self) -> float:
        """lambda - (lambda + c_x)(lambda - c_x)(lambda - c_p); positive where finite coherent security is possible."""
        return self.lam - self.L * (self.lam - self.c_p)

    def auxiliaries(self, tol: float = CLAMP_TOL) -> "EveAuxiliaries":
        return EveAuxiliaries.from_state(self, tol)

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "c_x": self.c_x, "c_p": self.c_p}


@dataclass(frozen=True)
class EveAuxiliaries:
    """Coefficients of the purification coupling and of Eve's conditional displacement."""
    a: float
    b: float
    X: float
    Y: float
    A_coef: float
    B_coef: float

    @classmethod
    def from_state(cls, state: SymmetricStdState, tol: float = CLAMP_TOL) -> "EveAuxiliaries":
        """
        a = lambda^2 - c_x c_p - 1 and b = lambda (c_x - c_p).

        Raises:
            UnphysicalInput: If a - b is negative beyond tol
        """
        lam, cx, cp = state.lam, state.c_x, state.c_p
        a = lam * lam - cx * cp - 1.0
        b = lam * (cx - cp)
        plus, minus = a + b, a - b
        if minus < -tol or plus < -tol:
            raise UnphysicalInput(f"Purification radicands negative: a+b={plus:.3e}, a-b={minus:.3e}")
        root_plus = float(np.sqrt(max(plus, 0.0)))
        root_minus = float(np.sqrt(max(minus, 0.0)))
        return cls(
            a=a,
            b=b,
            X=(root_plus + root_minus) / 2.0,
            Y=(root_plus - root_minus) / 2.0,
            A_coef=root_plus / (lam + cx),
            B_coef=root_minus / (lam - cx),
        )


@dataclass(frozen=True)
class MeasurementModel:
    """Gaussian position projector of width sigma, or the sharp limit when sigma is None."""
    sigma: Optional[float] = None

    def __post_init__(self) -> None:
        if self.sigma is not None and not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ConfigurationError(f"Measurement width must be finite and positive; got {self.sigma}")

    @classmethod
    def sharp(cls) -> "MeasurementModel":
        return cls(None)

    @property
    def is_sharp(self) -> bool:
        return self.sigma is None
