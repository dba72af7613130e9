#!/usr/bin/env python3
"""Closed-form results for a Gaussian pump with a Gaussian phase-matching function."""

from typing import Optional

import numpy as np

from ..core.config import TOLERANCES
from ..core.exceptions import DegenerateGroupVelocities, DomainError
from ..core.models import CorrelationMatrix


def gaussian_correlation_matrix(r: float, s: float) -> CorrelationMatrix:
    """Matrix C of the exponent -(1/2) (x, y) C (x, y)^T of |Psi|."""
    return CorrelationMatrix(c11=1.0 + r * r, c12=1.0 + r * s, c22=1.0 + s * s)


def gaussian_purity(r: float, s: float) -> float:
    """Exact purity |r - s| / sqrt((1 + r^2)(1 + s^2))."""
    if abs(r - s) <= TOLERANCES.get("degenerate", 1e-12):
        raise DegenerateGroupVelocities(
            f"r and s coincide (r={r}, s={s}); the JSA vanishes identically"
        )
    return float(abs(r - s) / np.sqrt((1.0 + r * r) * (1.0 + s * s)))


def purity_from_correlation(matrix: CorrelationMatrix) -> float:
    """Purity sqrt(det C) / sqrt(c11 c22) of a real two-dimensional Gaussian."""
    det = matrix.determinant
    if det <= 0:
        raise DegenerateGroupVelocities("correlation matrix is singular")
    return float(np.sqrt(det / (matrix.c11 * matrix.c22)))


def separability_condition(r: float, s: float, tol: Optional[float] = None) -> bool:
    """True iff rs = -1 within ``tol`` (default from config)."""
    if tol is None:
        tol = TOLERANCES.get("separability", 1e-9)
    return bool(abs(r * s + 1.0) <= tol)


def separable_pmf_angle(s: float) -> float:
    """Ridge angle atan(s^2) of a separable Gaussian JSA, where r = -1/s."""
    return float(np.arctan(s * s))


def asymptotic_gaussian_purity(r: float) -> float:
    """Large-r expansion 1 - 1/(2 r^2) of the s = 0 purity."""
    if r == 0:
        raise DomainError("asymptotic purity needs r != 0")
    return 1.0 - 1.0 / (2.0 * r * r)
