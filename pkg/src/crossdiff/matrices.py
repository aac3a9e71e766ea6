"""2x2 diffusion-matrix algebra.

Validation of the positive-definiteness conditions, classification of the
eigenstructure into the four canonical cases, and the closed-form matrix
exponential exp(-a*d) that the filter symbol is built from. Everything here
is scalar and pure; the array-valued hot path lives in ``crossdiff._kernels``
and uses the same formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import PositiveDefinitenessViolation

__all__ = [
    "DEGENERATE_S_CUTOFF",
    "DiffusionMatrix",
    "SpectralCase",
    "SpectralDecomposition",
    "validate_matrix",
    "decompose",
    "exponent_branch",
    "matrix_exponent",
    "symbol",
]

# |s| below this fraction of q^2 is treated as exactly zero: sinh(a*m)/m and
# sin(a*m)/m are numerically unstable for tiny m while the m -> 0 limit is
# exact to machine precision there.
DEGENERATE_S_CUTOFF = 1e-12


@dataclass(frozen=True)
class DiffusionMatrix:
    """Positive-definite 2x2 matrix of diffusion weights.

    Validity means d11 > 0 and 4*d11*d22 - (d12 + d21)^2 >= 0, excluding the
    symmetric boundary case (equality with d12 = d21). In other words the
    symmetric part must be at least positive semidefinite, which together
    with the boundary exclusion keeps the real parts of both eigenvalues
    strictly positive. The matrix itself need not be symmetric.
    """

    d11: float
    d12: float
    d21: float
    d22: float

    def __post_init__(self):
        for name in ("d11", "d12", "d21", "d22"):
            object.__setattr__(self, name, float(getattr(self, name)))
        entries = (self.d11, self.d12, self.d21, self.d22)
        if not all(math.isfinite(x) for x in entries):
            raise PositiveDefinitenessViolation(f"matrix entries must be finite: {entries}")
        if self.d11 <= 0.0:
            raise PositiveDefinitenessViolation(f"d11 must be positive, got {self.d11}")
        margin = 4.0 * self.d11 * self.d22 - (self.d12 + self.d21) ** 2
        if margin < 0.0 or (margin == 0.0 and self.d12 == self.d21):
            raise PositiveDefinitenessViolation(
                f"4*d11*d22 - (d12 + d21)^2 must not be negative (strictly positive "
                f"for symmetric matrices), got {margin}"
            )

    @property
    def q(self) -> float:
        """Trace d11 + d22 (always positive for a valid matrix)."""
        return self.d11 + self.d22

    @property
    def r(self) -> float:
        """Diagonal gap d22 - d11."""
        return self.d22 - self.d11

    @property
    def s(self) -> float:
        """Eigenvalue discriminant r^2 + 4*d12*d21."""
        return self.r * self.r + 4.0 * self.d12 * self.d21

    @property
    def m(self) -> float:
        """sqrt(|s|)/2: eigenvalue half-gap (s > 0) or oscillation rate (s < 0)."""
        return 0.5 * math.sqrt(abs(self.s))

    @property
    def eigenvalues(self) -> tuple[complex, complex]:
        """(lambda_plus, lambda_minus); a conjugate pair when s < 0."""
        if self.s >= 0.0:
            root = math.sqrt(self.s)
            return complex(0.5 * (self.q + root)), complex(0.5 * (self.q - root))
        nu, mu = 0.5 * self.q, 0.5 * math.sqrt(-self.s)
        return complex(nu, mu), complex(nu, -mu)

    def as_array(self) -> np.ndarray:
        return np.array([[self.d11, self.d12], [self.d21, self.d22]])


def validate_matrix(d11: float, d12: float, d21: float, d22: float) -> DiffusionMatrix:
    """Validate four entries and return the resulting :class:`DiffusionMatrix`.

    Raises :class:`PositiveDefinitenessViolation` when the entries are not
    finite or the positive-definiteness conditions fail.
    """
    return DiffusionMatrix(d11, d12, d21, d22)


class SpectralCase(Enum):
    """Eigenstructure classes of a valid diffusion matrix."""

    REAL_DISTINCT = "real_distinct"      # s > 0: two distinct real eigenvalues
    SCALAR_DIAGONAL = "scalar_diagonal"  # s = 0 and d = alpha * I
    JORDAN = "jordan"                    # s = 0, not diagonalizable
    COMPLEX_PAIR = "complex_pair"        # s < 0: complex-conjugate eigenvalues


@dataclass(frozen=True)
class SpectralDecomposition:
    """Similarity transform d = P @ canonical @ inv(P) onto a canonical form.

    ``canonical`` is diag(lambda+, lambda-) for distinct real eigenvalues,
    alpha*I for scalar matrices, an upper Jordan block for the defective case,
    and the rotation-scaling form [[nu, -mu], [mu, nu]] for conjugate pairs.
    ``m`` is sqrt(|s|)/2.
    """

    case: SpectralCase
    P: np.ndarray
    canonical: np.ndarray
    m: float


def decompose(d: DiffusionMatrix) -> SpectralDecomposition:
    """Classify ``d`` and build the canonical form it is similar to.

    Columns of P are (generalized) eigenvectors chosen from the nonzero
    off-diagonal entries, so P @ canonical @ inv(P) reproduces ``d`` exactly
    up to roundoff.
    """
    s, r, q = d.s, d.r, d.q
    if s > 0.0:
        root = math.sqrt(s)
        lam_p, lam_m = 0.5 * (q + root), 0.5 * (q - root)
        if d.d12 != 0.0:
            P = np.array([[d.d12, d.d12], [0.5 * (r + root), 0.5 * (r - root)]])
            canonical = np.diag([lam_p, lam_m])
        elif d.d21 != 0.0:
            P = np.array([[0.5 * (-r + root), 0.5 * (-r - root)], [d.d21, d.d21]])
            canonical = np.diag([lam_p, lam_m])
        else:
            # Already diagonal: keep P = I; the canonical entries then follow
            # the matrix order (d11, d22), which is (lambda-, lambda+) if
            # d22 > d11.
            P = np.eye(2)
            canonical = np.diag([d.d11, d.d22])
        return SpectralDecomposition(SpectralCase.REAL_DISTINCT, P, canonical, 0.5 * root)
    if s == 0.0:
        alpha = 0.5 * q
        if d.d12 == 0.0 and d.d21 == 0.0:
            return SpectralDecomposition(
                SpectralCase.SCALAR_DIAGONAL, np.eye(2), alpha * np.eye(2), 0.0
            )
        canonical = np.array([[alpha, 1.0], [0.0, alpha]])
        if d.d12 != 0.0:
            P = np.array([[d.d12, 0.0], [0.5 * r, 1.0]])
        else:
            P = np.array([[-0.5 * r, 1.0], [d.d21, 0.0]])
        return SpectralDecomposition(SpectralCase.JORDAN, P, canonical, 0.0)
    # s < 0 requires d12*d21 < 0, so d12 is never zero here.
    nu, mu = 0.5 * q, 0.5 * math.sqrt(-s)
    canonical = np.array([[nu, -mu], [mu, nu]])
    P = np.array([[d.d12, 0.0], [0.5 * r, -mu]])
    return SpectralDecomposition(SpectralCase.COMPLEX_PAIR, P, canonical, mu)


def exponent_branch(d: DiffusionMatrix) -> tuple[int, float]:
    """Branch selector for the closed-form exponential.

    Returns (+1, m) for the hyperbolic branch, (-1, m) for the trigonometric
    one and (0, 0.0) when |s| is negligible against q^2 and the linear limit
    is used instead.
    """
    if abs(d.s) < DEGENERATE_S_CUTOFF * d.q * d.q:
        return 0, 0.0
    return (1, d.m) if d.s > 0.0 else (-1, d.m)


def _exp_entries(
    q: float, r: float, d12: float, d21: float, branch: int, m: float, a: float
) -> tuple[float, float, float, float]:
    """Entries of exp(-a*d) via the trace/traceless split d = (q/2) I + B.

    B = [[-r/2, d12], [d21, r/2]] squares to (s/4) I, so exp(-a*B) collapses
    to gamma(a*m) I - (sigma(a*m)/m) B with (gamma, sigma) = (cosh, sinh) for
    s > 0, (cos, sin) for s < 0, and the linear limit I - a*B for s = 0. The
    hyperbolic branch is evaluated through e^(-a*lambda) terms, which stay in
    (0, 1] for every a >= 0, so no intermediate can overflow.
    """
    if branch > 0:
        decay_slow = math.exp(-a * (0.5 * q - m))  # e^(-a*lambda_minus)
        decay_fast = math.exp(-a * (0.5 * q + m))  # e^(-a*lambda_plus)
        cosh_term = 0.5 * (decay_slow + decay_fast)
        sinh_over_m = -0.5 * decay_slow * math.expm1(-2.0 * a * m) / m
    elif branch < 0:
        decay = math.exp(-0.5 * a * q)
        cosh_term = decay * math.cos(a * m)
        sinh_over_m = decay * math.sin(a * m) / m
    else:
        decay = math.exp(-0.5 * a * q)
        cosh_term = decay
        sinh_over_m = decay * a
    half_r = 0.5 * r * sinh_over_m
    return cosh_term + half_r, -d12 * sinh_over_m, -d21 * sinh_over_m, cosh_term - half_r


def matrix_exponent(d: DiffusionMatrix, a: float) -> np.ndarray:
    """exp(-a*d) for a >= 0, as a (2, 2) float array.

    Uses the closed scalar form instead of a generic matrix exponential; all
    entries remain finite for arbitrarily large ``a``.
    """
    a = float(a)
    if not (math.isfinite(a) and a >= 0.0):
        raise ValueError(f"a must be finite and >= 0, got {a}")
    branch, m = exponent_branch(d)
    k11, k12, k21, k22 = _exp_entries(d.q, d.r, d.d12, d.d21, branch, m, a)
    return np.array([[k11, k12], [k21, k22]])


def symbol(d: DiffusionMatrix, p: float, t: float, xi_mag: float) -> np.ndarray:
    """The filter symbol exp(-t*|xi|^p*d) at one radial frequency magnitude."""
    p, t, xi_mag = float(p), float(t), float(xi_mag)
    if not (math.isfinite(p) and p > 0.0):
        raise ValueError(f"p must be finite and positive, got {p}")
    if not (math.isfinite(xi_mag) and xi_mag >= 0.0):
        raise ValueError(f"xi_mag must be finite and >= 0, got {xi_mag}")
    return matrix_exponent(d, t * xi_mag**p)
