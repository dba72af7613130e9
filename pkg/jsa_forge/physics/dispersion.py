#!/usr/bin/env python3
"""Physical dispersion: wavevectors, (r, s) from group velocities and GVD-curved JSAs.

Frequencies enter as omega_1 = w1 + x / tau and omega_2 = w2 + y / tau around
the central signal and idler frequencies, with omega_0 = omega_1 + omega_2.
The phase-matching function is evaluated at the full mismatch

    Delta(x, y) = (k_0 - k_1 - k_2 - K) L / 2,

whose linearization is -(r x + s y). The pump stays an exact function of
x + y.
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from ..core.config import (
    ErrorMessages,
    TOLERANCES,
    get_dispersion_model_path,
    get_max_threads,
)
from ..core.exceptions import (
    ConfigurationError,
    DegenerateGroupVelocities,
    DomainError,
    InvalidSpectralFn,
    ModelRangeError,
)
from ..core.models import (
    DispersionModel,
    Grid1D,
    JointAmplitude,
    MismatchParameters,
    ProcessGeometry,
    SpectralFn,
    SweepRow,
)
from ..core.utils import get_logger, load_json_file
from .spectral_core import (
    adaptive_grids,
    assemble_jsa,
    build_jsa,
    gvd_sinc_support,
    purity_schmidt,
)

logger = get_logger(__name__)

PMF_PROFILES = ("tophat", "gaussian")
ArrayLike = Union[float, np.ndarray]


def load_dispersion_model(path: Union[str, Path]) -> DispersionModel:
    """Read a dispersion model JSON file.

    Raises:
        ConfigurationError: If the file is missing or malformed.
    """
    data = load_json_file(Path(path))
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: dispersion model must be a JSON object")
    model = DispersionModel.from_dict(data)
    logger.debug(f"Loaded dispersion model '{model.source}' from {path}")
    return model


def load_default_model() -> DispersionModel:
    return load_dispersion_model(get_dispersion_model_path())


def _wavelength_um(omega: ArrayLike) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    if np.any(w <= 0):
        raise ModelRangeError("angular frequencies must be positive")
    return 2.0 * np.pi * SPEED_OF_LIGHT / w * 1e6


def _checked_wavelength(
    model: DispersionModel, mode: int, omega: ArrayLike
) -> np.ndarray:
    if mode not in (0, 1, 2):
        raise DomainError(f"mode must be 0, 1 or 2, got {mode}")
    lam = _wavelength_um(omega)
    lo, hi = model.modes[mode].valid_um
    if np.any(lam < lo) or np.any(lam > hi):
        worst = float(lam.min()) if np.any(lam < lo) else float(lam.max())
        raise ModelRangeError(
            ErrorMessages.format_error(
                ErrorMessages.MODEL_RANGE,
                wavelength_um=worst,
                window=[lo, hi],
                mode=mode,
            )
        )
    return lam


def wavevector(model: DispersionModel, mode: int, omega: ArrayLike) -> np.ndarray:
    """k = n(lambda) omega / c in 1/m."""
    lam = _checked_wavelength(model, mode, omega)
    omega_arr = np.asarray(omega, dtype=float)
    return model.modes[mode].index(lam) * omega_arr / SPEED_OF_LIGHT


def group_index(model: DispersionModel, mode: int, omega: ArrayLike) -> np.ndarray:
    """n_g = n - lambda dn/dlambda = c dk/domega."""
    lam = _checked_wavelength(model, mode, omega)
    return model.modes[mode].group_index(lam)


def group_velocity(model: DispersionModel, mode: int, omega: ArrayLike) -> np.ndarray:
    """v = (dk/domega)^-1 from the analytic derivative of the index model."""
    return SPEED_OF_LIGHT / group_index(model, mode, omega)


def rs_from_physics(
    model: DispersionModel, geom: ProcessGeometry
) -> MismatchParameters:
    """r = (L / tau)(1/(2 v_1) - 1/(2 v_0)) and the same for s with mode 2."""
    w0, w1, w2 = geom.central_omegas
    ng0 = float(group_index(model, 0, w0))
    ng1 = float(group_index(model, 1, w1))
    ng2 = float(group_index(model, 2, w2))
    scale = geom.length_m / (2.0 * SPEED_OF_LIGHT * geom.tau_s)
    r = scale * (ng1 - ng0)
    s = scale * (ng2 - ng0)
    largest = max(abs(r), abs(s))
    tol = float(TOLERANCES.get("rs_degenerate", 1e-3))
    degenerate = largest == 0.0 or abs(r - s) / largest < tol
    if degenerate:
        logger.warning(f"⚠️  Nearly equal mismatch parameters r={r:.6g}, s={s:.6g}")
    return MismatchParameters(r=float(r), s=float(s), degenerate=bool(degenerate))


def _central_mismatch(model: DispersionModel, geom: ProcessGeometry) -> float:
    w0, w1, w2 = geom.central_omegas
    return float(
        wavevector(model, 0, w0) - wavevector(model, 1, w1) - wavevector(model, 2, w2)
    )


def grating_wavevector(model: DispersionModel, geom: ProcessGeometry) -> float:
    """Poling wavevector K: 0 unpoled, 2 pi / period, or the central mismatch."""
    poling = model.poling_period_m
    if poling is None:
        return 0.0
    if poling == "auto":
        return _central_mismatch(model, geom)
    return float(2.0 * np.pi / float(poling))


def central_poling_period(model: DispersionModel, geom: ProcessGeometry) -> float:
    """Poling period that quasi-phase-matches the central frequencies, in m."""
    dk = _central_mismatch(model, geom)
    if dk == 0.0:
        raise DomainError("central frequencies are already phase matched")
    return float(2.0 * np.pi / abs(dk))


def phase_mismatch_full(
    model: DispersionModel,
    geom: ProcessGeometry,
    omega0: ArrayLike,
    omega1: ArrayLike,
    omega2: ArrayLike,
) -> np.ndarray:
    """(k_0(omega0) - k_1(omega1) - k_2(omega2) - K) L / 2."""
    dk = (
        wavevector(model, 0, omega0)
        - wavevector(model, 1, omega1)
        - wavevector(model, 2, omega2)
        - grating_wavevector(model, geom)
    )
    return dk * geom.length_m / 2.0


def linear_mismatch(r: float, s: float, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """First-order mismatch -(r x + s y) in the dimensionless offsets."""
    return -(r * np.asarray(x, dtype=float) + s * np.asarray(y, dtype=float))


def _profile_fn(pmf_profile: str) -> SpectralFn:
    key = pmf_profile.strip().lower()
    if key == "tophat":
        return SpectralFn.sinc(1.0)
    if key == "gaussian":
        return SpectralFn.gaussian(1.0)
    raise InvalidSpectralFn(
        f"unknown phase-matching profile '{pmf_profile}', expected one of {PMF_PROFILES}"
    )


def _effective_pump(pump: SpectralFn, chi3: bool) -> SpectralFn:
    return pump.squared() if chi3 else pump


def _grids_for(
    pmf: SpectralFn, pump: SpectralFn, mismatch: MismatchParameters
) -> Tuple[Grid1D, Grid1D]:
    if mismatch.degenerate:
        raise DegenerateGroupVelocities(
            ErrorMessages.format_error(
                ErrorMessages.DEGENERATE_RS, r=mismatch.r, s=mismatch.s
            )
        )
    return adaptive_grids(
        pmf, pump, mismatch.r, mismatch.s, sinc_support=gvd_sinc_support()
    )


def build_jsa_gvd(
    model: DispersionModel,
    geom: ProcessGeometry,
    pmf_profile: str,
    pump: SpectralFn,
    gx: Optional[Grid1D] = None,
    gy: Optional[Grid1D] = None,
    chi3: bool = False,
) -> JointAmplitude:
    """JSA with the phase-matching function evaluated at the full mismatch.

    The pump is squared first when ``chi3`` is set. Grids default to the
    automatic choice for the linearized (r, s).

    Raises:
        ModelRangeError: If a grid frequency leaves a mode's validity window.
        DegenerateGroupVelocities: If the linearized r and s coincide.
    """
    pmf = _profile_fn(pmf_profile)
    pump_eff = _effective_pump(pump, chi3)
    mismatch = rs_from_physics(model, geom)
    if gx is None or gy is None:
        auto_x, auto_y = _grids_for(pmf, pump_eff, mismatch)
        gx = gx or auto_x
        gy = gy or auto_y
    elif mismatch.degenerate:
        raise DegenerateGroupVelocities(
            ErrorMessages.format_error(
                ErrorMessages.DEGENERATE_RS, r=mismatch.r, s=mismatch.s
            )
        )

    _, w1, w2 = geom.central_omegas
    x = gx.points[:, None]
    y = gy.points[None, :]
    omega1 = w1 + x / geom.tau_s
    omega2 = w2 + y / geom.tau_s
    delta = phase_mismatch_full(model, geom, omega1 + omega2, omega1, omega2)
    prefactor = np.sqrt(abs(mismatch.r - mismatch.s))
    values = prefactor * pmf(-delta) * pump_eff(x + y)
    return assemble_jsa(values, gx, gy, f"GVD {pmf_profile} x {pump_eff.label}")


def build_jsa_linearized(
    model: DispersionModel,
    geom: ProcessGeometry,
    pmf_profile: str,
    pump: SpectralFn,
    gx: Optional[Grid1D] = None,
    gy: Optional[Grid1D] = None,
    chi3: bool = False,
) -> JointAmplitude:
    """The same JSA with the mismatch replaced by -(r x + s y)."""
    pmf = _profile_fn(pmf_profile)
    pump_eff = _effective_pump(pump, chi3)
    mismatch = rs_from_physics(model, geom)
    if gx is None or gy is None:
        auto_x, auto_y = _grids_for(pmf, pump_eff, mismatch)
        gx = gx or auto_x
        gy = gy or auto_y
    return build_jsa(pmf, pump_eff, mismatch.r, mismatch.s, gx, gy)


def sweep_taus_for_r(
    model: DispersionModel, geom: ProcessGeometry, r_values: Sequence[float]
) -> List[float]:
    """Pulse time scales that put r at each requested value.

    r scales as 1 / tau at fixed length and wavelengths.
    """
    reference = rs_from_physics(model, geom).r
    if reference == 0.0:
        raise DegenerateGroupVelocities("r vanishes for this model; it cannot be swept")
    taus = []
    for r in r_values:
        if r == 0 or np.sign(r) != np.sign(reference):
            raise DomainError(f"target r={r} is not reachable from r={reference:.6g}")
        taus.append(float(geom.tau_s * reference / r))
    return taus


def _is_monotone(values: Sequence[float]) -> bool:
    diffs = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(diffs > 0) or np.all(diffs < 0))


def purity_vs_r_sweep(
    model: DispersionModel,
    geom: ProcessGeometry,
    taus: Sequence[float],
    pmf_profile: str,
    pump: SpectralFn,
    chi3: bool = False,
    max_workers: Optional[int] = None,
) -> List[SweepRow]:
    """Purity of the GVD and linearized JSAs over a monotone tau grid.

    Both JSAs of a row share the same grids. Rows are returned in the order
    of ``taus``.
    """
    if len(taus) == 0:
        return []
    if len(taus) > 1 and not _is_monotone(taus):
        raise DomainError("tau grid must be strictly monotone")

    def evaluate(tau: float) -> SweepRow:
        point = geom.with_tau(tau)
        mismatch = rs_from_physics(model, point)
        pmf = _profile_fn(pmf_profile)
        gx, gy = _grids_for(pmf, _effective_pump(pump, chi3), mismatch)
        gvd = build_jsa_gvd(model, point, pmf_profile, pump, gx, gy, chi3=chi3)
        linear = build_jsa_linearized(
            model, point, pmf_profile, pump, gx, gy, chi3=chi3
        )
        row = SweepRow(
            r=mismatch.r,
            s=mismatch.s,
            tau_s=float(tau),
            purity_gvd=purity_schmidt(gvd).purity,
            purity_linear=purity_schmidt(linear).purity,
        )
        logger.debug(f"tau={tau:.4e}: r={row.r:.4f}, P_gvd={row.purity_gvd:.6f}")
        return row

    workers = max(1, min(max_workers or get_max_threads(), len(taus)))
    logger.info(f"📈 Sweeping {len(taus)} pulse durations on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, taus))
