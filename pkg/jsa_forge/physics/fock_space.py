#!/usr/bin/env python3
"""Truncated number-basis picture of JSA construction.

A JSA with r s < 0 is the position wavefunction of

    (S(kappa) x S(sigma)) U_BS(theta) (1 x S(nu)) |phi>|gamma>

where |phi>, |gamma> are the phase-matching and pump functions read as
oscillator wavefunctions. Conventions:

    S(mu)   = exp((ln mu / 2)(e^{-i p} a^2 - e^{i p} a^dag^2)),  <x|S(mu)|psi> = sqrt(mu) psi(mu x)
    U_BS(t) = exp(t (a^dag b - a b^dag)),                      U^dag a U = a cos t + b sin t
"""

import warnings
from functools import lru_cache
from typing import Optional, Tuple, Union

import numpy as np
from scipy import linalg, optimize

from ..core.config import FIDELITY_SETTINGS, FOCK_BUFFER, FOCK_SETTINGS, DEFAULT_TRUNCATION
from ..core.exceptions import (
    DomainError,
    MappingDomainError,
    TruncationError,
    TruncationWarning,
)
from ..core.models import (
    BeamSplitterMap,
    FockKet,
    Grid1D,
    JointAmplitude,
    SpectralFn,
    SqueezedFit,
    TwoModeFockState,
)
from ..core.utils import get_logger, handle_numerical_errors

logger = get_logger(__name__)

PI_QUARTER = np.pi ** -0.25


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Normalized Hermite functions psi_0..psi_{n_max} at ``x``.

    Uses the three-term recurrence on the normalized functions,
    psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}.
    Returns an array of shape (n_max + 1,) + x.shape.
    """
    xs = np.asarray(x, dtype=float)
    table = np.empty((n_max + 1,) + xs.shape)
    table[0] = PI_QUARTER * np.exp(-0.5 * xs**2)
    if n_max >= 1:
        table[1] = np.sqrt(2.0) * xs * table[0]
    for n in range(1, n_max):
        table[n + 1] = (
            np.sqrt(2.0 / (n + 1)) * xs * table[n] - np.sqrt(n / (n + 1)) * table[n - 1]
        )
    return table


def hermite_wavefunction(n: int, x: Union[float, np.ndarray]) -> np.ndarray:
    """Oscillator eigenfunction <x|n>."""
    if n < 0:
        raise DomainError(f"Hermite order must be non-negative, got {n}")
    return hermite_functions(n, np.asarray(x, dtype=float))[n]


def _tail(coeffs: np.ndarray) -> float:
    return float(np.sum(np.abs(coeffs[max(coeffs.size - 5, 0):]) ** 2))


def _warn_tail(what: str, tail: float) -> bool:
    threshold = float(FOCK_SETTINGS.get("tail_warning", 0.01))
    if tail > threshold:
        message = f"{what}: truncation tail {tail:.3e} exceeds {threshold:.3e}"
        logger.warning(f"⚠️  {message}")
        warnings.warn(message, TruncationWarning, stacklevel=3)
        return True
    return False


@handle_numerical_errors
def project_to_fock(f: SpectralFn, N: Optional[int] = None) -> FockKet:
    """Number-basis coefficients c_n = integral psi_n(x) f(x) dx.

    The ket is renormalized; ``leakage`` is the weight lost beyond level N-1
    and ``tail_weight`` the weight in the last five kept levels.
    """
    n_trunc = int(N or DEFAULT_TRUNCATION)
    if n_trunc < 1:
        raise DomainError(f"truncation must be positive, got {n_trunc}")
    half_width = np.sqrt(2 * n_trunc + 1) + 12.0
    n_points = int(FOCK_SETTINGS.get("projection_points", 4001))
    x = np.linspace(-half_width, half_width, n_points)
    dx = x[1] - x[0]
    table = hermite_functions(n_trunc - 1, x)
    coeffs = table @ f(x) * dx
    leakage = max(0.0, 1.0 - float(np.sum(np.abs(coeffs) ** 2)))
    ket = FockKet.from_coeffs(coeffs, leakage=leakage)
    flag = _warn_tail(f"projection of {f.label}", ket.tail_weight)
    return FockKet(ket.coeffs, ket.tail_weight, ket.leakage, flag)


def annihilation_operator(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


@lru_cache(maxsize=64)
def _squeeze_matrix(mu: float, dim: int, phase: float) -> np.ndarray:
    a = annihilation_operator(dim)
    a2 = a @ a
    generator = 0.5 * np.log(mu) * (np.exp(-1j * phase) * a2 - np.exp(1j * phase) * a2.conj().T)
    matrix = linalg.expm(generator)
    matrix.setflags(write=False)
    return matrix


def _check_mu(mu: float) -> None:
    if not (np.isfinite(mu) and mu > 0):
        raise DomainError(f"squeezing parameter must be positive, got {mu}")


@handle_numerical_errors
def squeeze_operator(mu: float, N: int, phase: float = 0.0) -> np.ndarray:
    """S(mu) on N levels, exponentiated with FOCK_BUFFER extra levels then cropped."""
    _check_mu(mu)
    full = _squeeze_matrix(float(mu), int(N) + FOCK_BUFFER, float(phase))
    return np.array(full[:N, :N])


def squeezed_vacuum(mu: float, N: int, phase: float = 0.0) -> FockKet:
    """S(mu)|0> from its closed-form even-level amplitudes."""
    _check_mu(mu)
    r = np.log(mu)
    ratio = -np.exp(1j * phase) * np.tanh(r)
    coeffs = np.zeros(N, dtype=complex)
    amp = 1.0 / np.sqrt(np.cosh(r)) + 0j
    n = 0
    while 2 * n < N:
        coeffs[2 * n] = amp
        amp = amp * ratio * np.sqrt((2 * n + 1) * (2 * n + 2)) / (2 * (n + 1))
        n += 1
    leakage = max(0.0, 1.0 - float(np.sum(np.abs(coeffs) ** 2)))
    ket = FockKet.from_coeffs(coeffs, leakage=leakage)
    flag = _warn_tail(f"squeezed vacuum mu={mu:g}", ket.tail_weight)
    return FockKet(ket.coeffs, ket.tail_weight, ket.leakage, flag)


@handle_numerical_errors
def apply_squeeze(
    ket: FockKet, mu: float, out_dim: Optional[int] = None, phase: float = 0.0
) -> FockKet:
    """S(mu)|ket>, computed with buffer levels and cropped to ``out_dim``."""
    _check_mu(mu)
    n_out = int(out_dim or ket.truncation)
    dim = max(n_out, ket.truncation) + FOCK_BUFFER
    full = _squeeze_matrix(float(mu), dim, float(phase))
    padded = np.zeros(dim, dtype=complex)
    padded[: ket.truncation] = ket.coeffs / ket.norm
    out = (full @ padded)[:n_out]
    leakage = max(0.0, 1.0 - float(np.sum(np.abs(out) ** 2)))
    result = FockKet.from_coeffs(out, leakage=leakage)
    flag = _warn_tail(f"squeeze mu={mu:g}", result.tail_weight)
    return FockKet(result.coeffs, result.tail_weight, result.leakage, flag)


@lru_cache(maxsize=1024)
def beamsplitter_block(theta: float, total: int) -> np.ndarray:
    """U_BS(theta) restricted to total photon number ``total``.

    Basis |k, total - k> for k = 0..total. The block is exact, so no
    truncation buffer is needed.
    """
    k = np.arange(total + 1)
    generator = np.zeros((total + 1, total + 1))
    up = theta * np.sqrt((k[:-1] + 1) * (total - k[:-1]))
    down = -theta * np.sqrt(k[1:] * (total - k[1:] + 1))
    generator[k[1:], k[:-1]] = up
    generator[k[:-1], k[1:]] = down
    block = linalg.expm(generator)
    block.setflags(write=False)
    return block


@handle_numerical_errors
def beamsplitter_operator(theta: float, N: int) -> np.ndarray:
    """U_BS(theta) on the N x N two-mode truncation, index n * N + m.

    Built block by block in total photon number and cropped.
    """
    matrix = np.zeros((N * N, N * N))
    for total in range(2 * N - 1):
        block = beamsplitter_block(float(theta), total)
        k = np.arange(total + 1)
        keep = (k < N) & (total - k < N)
        idx = k[keep] * N + (total - k[keep])
        matrix[np.ix_(idx, idx)] = block[np.ix_(keep, keep)]
    return matrix


@handle_numerical_errors
def apply_beamsplitter(coeffs: np.ndarray, theta: float) -> np.ndarray:
    """Apply U_BS(theta) exactly to two-mode amplitudes.

    ``coeffs`` has shape (..., n1, n2); the result has shape
    (..., n1 + n2 - 1, n1 + n2 - 1) so that no amplitude is cropped.
    """
    arr = np.asarray(coeffs)
    n1, n2 = arr.shape[-2:]
    size = n1 + n2 - 1
    out = np.zeros(arr.shape[:-2] + (size, size), dtype=complex)
    for total in range(size):
        k = np.arange(total + 1)
        valid = (k < n1) & (total - k < n2)
        source = np.zeros(arr.shape[:-2] + (total + 1,), dtype=complex)
        source[..., valid] = arr[..., k[valid], total - k[valid]]
        block = beamsplitter_block(float(theta), total)
        out[..., k, total - k] = source @ block.T
    return out


def parity_apply(ket: FockKet) -> FockKet:
    """Parity (-1)^n on each level, i.e. psi(x) -> psi(-x)."""
    signs = (-1.0) ** np.arange(ket.truncation)
    return FockKet(ket.coeffs * signs, ket.tail_weight, ket.leakage, ket.truncation_flag)


def map_params(r: float, s: float) -> BeamSplitterMap:
    """Squeezing and mixing parameters that turn |phi>|gamma> into the JSA.

    With r > 0 > s: kappa = sqrt(r(r-s)), sigma = sqrt(s(s-r)),
    nu = 1/sqrt(-r s), mu = 1, tan(theta) = sqrt(-s/r). Other sign and size
    combinations are reduced to this one by swapping x and y and by
    mirroring phi.

    Raises:
        MappingDomainError: If r * s >= 0.
    """
    if not (np.isfinite(r) and np.isfinite(s)) or r * s >= 0:
        raise MappingDomainError(f"oscillator mapping needs r*s < 0, got r={r}, s={s}")
    swapped = abs(s) > abs(r)
    r_eff, s_eff = (s, r) if swapped else (r, s)
    mirrored = r_eff < 0
    if mirrored:
        r_eff, s_eff = -r_eff, -s_eff
    kappa = float(np.sqrt(r_eff * (r_eff - s_eff)))
    sigma = float(np.sqrt(s_eff * (s_eff - r_eff)))
    nu = float(1.0 / np.sqrt(-r_eff * s_eff))
    theta = float(np.arctan(np.sqrt(-s_eff / r_eff)))
    return BeamSplitterMap(
        theta=theta,
        kappa=kappa,
        sigma=sigma,
        nu=nu,
        mu=1.0,
        r=float(r),
        s=float(s),
        swapped=swapped,
        mirrored=mirrored,
    )


def synthesize_wavefunction(ket: FockKet, x: np.ndarray, mu: float = 1.0) -> np.ndarray:
    """<x|S(mu)|ket> = sqrt(mu) sum_n c_n psi_n(mu x)."""
    table = hermite_functions(ket.truncation - 1, mu * np.asarray(x, dtype=float))
    return np.sqrt(mu) * np.tensordot(ket.coeffs, table, axes=1)


def _check_stage(stage: str, weight: float) -> None:
    error_limit = float(FOCK_SETTINGS.get("tail_error", 0.05))
    stage_tol = float(FOCK_SETTINGS.get("stage_tolerance", 1e-4))
    if weight > error_limit:
        raise TruncationError(
            f"truncation tail {weight:.3e} exceeds {error_limit:.3e} ({stage})"
        )
    if weight > stage_tol:
        message = f"{stage}: truncation weight {weight:.3e} above {stage_tol:.1e}"
        logger.warning(f"⚠️  {message}")
        warnings.warn(message, TruncationWarning, stacklevel=3)


@handle_numerical_errors
def synthesize_two_mode(
    phi: FockKet, gamma: FockKet, bmap: BeamSplitterMap
) -> Tuple[np.ndarray, FockKet]:
    """Two-mode amplitudes U_BS(theta)(|phi> x S(nu)|gamma>) before the final squeezes.

    Returns the amplitude matrix and the squeezed pump ket.
    """
    phi_ket = parity_apply(phi) if bmap.mirrored else phi
    _check_stage("phase-matching ket", phi_ket.tail_weight)
    _check_stage("pump ket", gamma.tail_weight)
    if abs(bmap.nu - 1.0) > 0:
        gamma_prime = apply_squeeze(gamma, bmap.nu, out_dim=gamma.truncation + FOCK_BUFFER)
        _check_stage("squeezed pump ket", max(gamma_prime.tail_weight, gamma_prime.leakage))
    else:
        gamma_prime = gamma
    amplitudes = apply_beamsplitter(np.outer(phi_ket.coeffs, gamma_prime.coeffs), bmap.theta)
    return amplitudes, gamma_prime


@handle_numerical_errors
def synthesize_jsa_from_fock(
    phi: FockKet,
    gamma: FockKet,
    bmap: BeamSplitterMap,
    gx: Grid1D,
    gy: Grid1D,
) -> JointAmplitude:
    """JSA read off the oscillator state on the given grids.

    The final local squeezes act through their exact position action, so
    strong squeezing never touches the number-basis truncation.
    """
    from .spectral_core import assemble_jsa

    amplitudes, _ = synthesize_two_mode(phi, gamma, bmap)
    x_axis, y_axis = (gy, gx) if bmap.swapped else (gx, gy)
    size = amplitudes.shape[0]
    hx = hermite_functions(size - 1, bmap.kappa * x_axis.points)
    hy = hermite_functions(size - 1, bmap.sigma * y_axis.points)
    values = np.sqrt(bmap.kappa * bmap.sigma) * (hx.T @ amplitudes @ hy)
    if bmap.swapped:
        values = values.T
    return assemble_jsa(values, gx, gy, "fock synthesis")


@handle_numerical_errors
def two_mode_purity(psi: Union[TwoModeFockState, np.ndarray]) -> float:
    """Purity of either reduced state, the sum of fourth powers of Schmidt weights."""
    coeffs = psi.coeffs if isinstance(psi, TwoModeFockState) else np.asarray(psi)
    singular = linalg.svdvals(coeffs)
    lam = singular / np.sqrt(np.sum(singular**2))
    return float(np.sum(lam**4))


def _squeezed_overlap_table(
    even_coeffs: np.ndarray, log_mu: np.ndarray, phases: np.ndarray
) -> np.ndarray:
    """<k|S_phase(mu)|0> on a (log_mu, phase) grid."""
    n = np.arange(even_coeffs.size)
    t = np.tanh(log_mu)[:, None]
    # sqrt((2n)!)/(2^n n!) by recurrence
    weights = np.ones(n.size)
    for j in range(1, n.size):
        weights[j] = weights[j - 1] * np.sqrt((2 * j - 1) * (2 * j)) / (2 * j)
    base = ((-t) ** n) * weights / np.sqrt(np.cosh(log_mu))[:, None]
    rotation = np.exp(1j * np.outer(n, phases))
    return (base * np.conj(even_coeffs)) @ rotation


def squeezed_fidelity(ket: FockKet) -> SqueezedFit:
    """Best overlap |<k|S_phase(mu)|0>|^2 over squeezing strength and phase.

    A log-spaced scan over mu in [mu_min, mu_max] and phases in [0, pi) is
    refined with Nelder-Mead. The result is reported with mu >= 1.
    """
    coeffs = ket.coeffs / ket.norm
    even = coeffs[::2]
    mu_min = float(FIDELITY_SETTINGS.get("mu_min", 0.05))
    mu_max = float(FIDELITY_SETTINGS.get("mu_max", 20.0))
    log_mu = np.linspace(np.log(mu_min), np.log(mu_max), int(FIDELITY_SETTINGS.get("scan_points", 161)))
    n_phase = int(FIDELITY_SETTINGS.get("phase_points", 64))
    phases = np.arange(n_phase) * np.pi / n_phase
    table = np.abs(_squeezed_overlap_table(even, log_mu, phases)) ** 2
    i, j = np.unravel_index(int(np.argmax(table)), table.shape)
    best = (float(table[i, j]), float(log_mu[i]), float(phases[j]))

    def negative_fidelity(p: np.ndarray) -> float:
        value = _squeezed_overlap_table(even, np.array([p[0]]), np.array([p[1]]))
        return -float(np.abs(value[0, 0]) ** 2)

    refined = optimize.minimize(
        negative_fidelity,
        np.array([best[1], best[2]]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000},
    )
    if -refined.fun > best[0]:
        best = (float(-refined.fun), float(refined.x[0]), float(refined.x[1]))

    fidelity, lm, phase = best
    if lm < 0:
        # S_p(1/mu)|0> equals S_{p + pi}(mu)|0>
        lm, phase = -lm, phase + np.pi
    return SqueezedFit(
        mu=float(np.exp(lm)),
        phase=float(np.mod(phase, 2.0 * np.pi)),
        fidelity=float(min(fidelity, 1.0)),
    )
