#!/usr/bin/env python3
"""Moment-based purity formulas.

For a small mixing angle the purity depends on the input kets only through
n = <a^dag a> and m = <a^2>. This module computes those moments, propagates
them through a squeeze, and evaluates the small-angle purity, the optimal
pump photon number and the large-r asymptotic purity.
"""

from typing import Optional

import numpy as np
from scipy import integrate, optimize, stats

from ..core.config import TOLERANCES
from ..core.exceptions import DegenerateOptimum, DisplacementError, DomainError
from ..core.models import FockKet, Moments, OptimalPump
from ..core.utils import get_logger

logger = get_logger(__name__)

SMALL_THETA_LIMIT = 0.3
ASYMPTOTIC_R_LIMIT = 5.0


def displacement(ket: FockKet) -> complex:
    """<a> = sum_n c_n^* sqrt(n+1) c_{n+1} of the normalized ket."""
    c = ket.coeffs / ket.norm
    n = np.arange(1, c.size)
    return complex(np.sum(np.conj(c[:-1]) * np.sqrt(n) * c[1:]))


def moments(ket: FockKet, check_displacement: bool = True) -> Moments:
    """Photon number n and two-photon moment m of a zero-mean ket.

    Raises:
        DisplacementError: If |<a>| exceeds the configured tolerance and
            ``check_displacement`` is set.
    """
    c = ket.coeffs / ket.norm
    if check_displacement:
        tol = TOLERANCES.get("displacement", 1e-8)
        alpha = displacement(ket)
        if abs(alpha) > tol:
            raise DisplacementError(
                f"ket has mean displacement |<a>| = {abs(alpha):.3e} > {tol:.1e}"
            )
    levels = np.arange(c.size)
    n_mean = float(np.sum(levels * np.abs(c) ** 2))
    k = np.arange(c.size - 2)
    m_mean = complex(np.sum(np.sqrt((k + 1) * (k + 2)) * np.conj(c[:-2]) * c[2:]))
    return Moments(n_mean, m_mean)


def squeeze_moments(moments_in: Moments, nu: float) -> Moments:
    """Moments of S(nu)|k> from those of |k>.

    With ch = cosh(ln nu) and sh = sinh(ln nu):
        n' = ch^2 n - ch sh (m + m^*) + sh^2 (n + 1)
        m' = ch^2 m - ch sh (2n + 1) + sh^2 m^*
    """
    if not (np.isfinite(nu) and nu > 0):
        raise DomainError(f"squeezing parameter must be positive, got {nu}")
    ch = 0.5 * (nu + 1.0 / nu)
    sh = 0.5 * (nu - 1.0 / nu)
    n, m = moments_in.n, moments_in.m
    n_out = ch * ch * n - ch * sh * 2.0 * m.real + sh * sh * (n + 1.0)
    m_out = ch * ch * m - ch * sh * (2.0 * n + 1.0) + sh * sh * np.conj(m)
    return Moments(float(n_out), complex(m_out))


def _bracket(phi: Moments, gamma: Moments) -> float:
    return (
        phi.n * gamma.n
        + 0.5 * (gamma.n + phi.n)
        - float(np.real(np.conj(gamma.m) * phi.m))
    )


def purity_small_theta(theta: float, phi: Moments, gamma: Moments) -> float:
    """1 - (2 theta)^2 (n_phi n_gamma + (n_gamma + n_phi)/2 - Re[m_gamma^* m_phi]).

    ``gamma`` holds the moments of the squeezed pump ket gamma'.
    """
    if abs(theta) >= SMALL_THETA_LIMIT:
        logger.warning(
            f"⚠️  small-angle purity used at theta={theta:.3f}, outside |theta| < {SMALL_THETA_LIMIT}"
        )
    return float(1.0 - (2.0 * theta) ** 2 * _bracket(phi, gamma))


def optimal_pump_n(phi: Moments) -> float:
    """Pump photon number minimizing the small-angle entanglement.

    n_opt = (sqrt(-2 (2 n + 1)^2 / (8 |m|^2 - 2 (2 n + 1)^2)) - 1) / 2,
    which tends to n_phi as |m_phi| approaches sqrt(n_phi (n_phi + 1)).

    Raises:
        DegenerateOptimum: If the denominator vanishes.
    """
    a = (2.0 * phi.n + 1.0) ** 2
    b = abs(phi.m) ** 2
    denominator = 8.0 * b - 2.0 * a
    if abs(denominator) < TOLERANCES.get("degenerate", 1e-12):
        raise DegenerateOptimum(
            f"optimal pump number is undefined for n={phi.n:.6g}, |m|={abs(phi.m):.6g}"
        )
    ratio = -2.0 * a / denominator
    if ratio < 1.0 - 1e-12:
        raise DomainError("moments are outside the physical region")
    return float(0.5 * (np.sqrt(max(ratio, 1.0)) - 1.0))


def optimal_pump(phi: Moments) -> OptimalPump:
    """Squeezed vacuum at ``optimal_pump_n`` with its m-phase aligned to m_phi."""
    n_opt = optimal_pump_n(phi)
    squeeze = float(np.arcsinh(np.sqrt(n_opt)))
    # m of S_p(mu)|0> is -e^{ip} sinh cosh, so align -e^{ip} with m_phi
    phase = float(np.angle(-phi.m)) if abs(phi.m) > 0 else 0.0
    return OptimalPump(n=n_opt, squeeze=squeeze, mu=float(np.exp(squeeze)), phase=phase)


def matched_pump_moments(phi: Moments) -> Moments:
    """Moments of the optimal squeezed pump: n_opt and |m| = sqrt(n(n+1))."""
    n_opt = optimal_pump_n(phi)
    magnitude = np.sqrt(n_opt * (n_opt + 1.0))
    direction = phi.m / abs(phi.m) if abs(phi.m) > 0 else 1.0
    return Moments(n_opt, complex(magnitude * direction))


def matched_squeezed_pump(phi: Moments, N: int) -> FockKet:
    """Fock ket of the optimal squeezed pump, used to warm-start optimization."""
    from .fock_space import squeezed_vacuum

    pump = optimal_pump(phi)
    return squeezed_vacuum(pump.mu, N, pump.phase)


def optimal_pump_n_numeric(phi: Moments) -> float:
    """Bounded scalar minimization of the bracket over squeezed pumps.

    B(n) = n_phi n + (n + n_phi)/2 - |m_phi| sqrt(n (n + 1)).
    """
    m_abs = abs(phi.m)

    def bracket(n: float) -> float:
        return phi.n * n + 0.5 * (n + phi.n) - m_abs * np.sqrt(n * (n + 1.0))

    result = optimize.minimize_scalar(
        bracket, bounds=(0.0, phi.n + 1.0), method="bounded", options={"xatol": 1e-12}
    )
    return float(result.x)


def asymptotic_purity_general(r: float, phi: Moments, gamma: Moments) -> float:
    """Large-r purity 1 - (1 - 2 Re m_g + 2 n_g)(1 + 2 Re m_p + 2 n_p) / (2 r^2).

    ``gamma`` holds the moments of the unsqueezed pump ket.
    """
    if r == 0:
        raise DomainError("asymptotic purity needs r != 0")
    if abs(r) < ASYMPTOTIC_R_LIMIT:
        logger.warning(f"⚠️  asymptotic purity used at r={r:g}, below {ASYMPTOTIC_R_LIMIT}")
    pump_factor = 1.0 - 2.0 * gamma.m.real + 2.0 * gamma.n
    pmf_factor = 1.0 + 2.0 * phi.m.real + 2.0 * phi.n
    if pump_factor <= 0 or pmf_factor <= 0:
        raise DomainError("quadrature variances must be positive")
    return float(1.0 - pump_factor * pmf_factor / (2.0 * r * r))


def sinc_gaussian_purity_s0(
    r: float, alpha: float = 1.0, pump_width: Optional[float] = None
) -> float:
    """Exact purity of a sinc phase-matching function with a Gaussian pump at s = 0.

    P = integral (1 - alpha |k| / 2)_+^2 N(k; 0, 1/(r w)^2) dk, where w is the
    pump width. The sinc function has no finite second moment, so its purity
    deficit scales as alpha sqrt(2/pi) / r rather than 1 / (2 r^2).
    """
    if r == 0 or not alpha > 0:
        raise DomainError("need r != 0 and alpha > 0")
    width = 1.0 if pump_width is None else float(pump_width)
    scale = 1.0 / (abs(r) * width)
    cutoff = 2.0 / alpha

    def integrand(k: float) -> float:
        return (1.0 - 0.5 * alpha * abs(k)) ** 2 * stats.norm.pdf(k, scale=scale)

    value, _ = integrate.quad(integrand, 0.0, cutoff, limit=200)
    return float(2.0 * value)
