#!/usr/bin/env python3
"""JSA construction on grids and Schmidt-decomposition purity.

The JSA of a chi(2) process with pump amplitude gamma and phase-matching
function phi is

    Psi(x, y) = sqrt|r - s| phi(r x + s y) gamma(x + y)

in the dimensionless frequency offsets x, y. The frequency-conversion
transfer function uses phi(r x - s y) gamma*(x - y) instead.
"""

from typing import Callable, Optional, Tuple

import numpy as np
from scipy import linalg

from ..core.config import DISPERSION_SETTINGS, GRID_SETTINGS, TOLERANCES
from ..core.exceptions import (
    DegenerateGroupVelocities,
    InvalidSpectralFn,
    NumericalFailure,
    UndefinedAngle,
)
from ..core.models import (
    Grid1D,
    JointAmplitude,
    SchmidtModes,
    SchmidtResult,
    SpectralFn,
    SpectralKind,
)
from ..core.utils import get_logger, handle_numerical_errors

logger = get_logger(__name__)

BOUNDARY_TOL = 1e-6


def pmf_angle(r: float, s: float) -> float:
    """Angle of the phase-matching ridge, tan(phi) = -s/r, in (-pi/2, pi/2)."""
    if r == 0:
        raise UndefinedAngle("phase-matching angle is undefined for r = 0")
    return float(np.arctan(-s / r))


def _check_rs(r: float, s: float) -> None:
    if not (np.isfinite(r) and np.isfinite(s)):
        raise DegenerateGroupVelocities(f"r and s must be finite, got r={r}, s={s}")
    if abs(r - s) <= TOLERANCES.get("degenerate", 1e-12):
        raise DegenerateGroupVelocities(
            f"r and s coincide (r={r}, s={s}); the JSA vanishes identically"
        )


def support_halfwidth(fn: SpectralFn, sinc_support: Optional[float] = None) -> float:
    """Half-width outside which ``fn`` is treated as zero."""
    support = GRID_SETTINGS["support"]
    kind = fn.kind
    if kind is SpectralKind.GAUSSIAN:
        return float(support["gaussian"]) * fn.parameters[0]
    if kind is SpectralKind.SINC:
        factor = support["sinc"] if sinc_support is None else sinc_support
        return float(factor) * fn.parameters[0]
    if kind is SpectralKind.SECH:
        return float(support["sech"]) * fn.parameters[0]
    if kind is SpectralKind.HERMITE:
        order, w = fn.parameters
        return (np.sqrt(2 * order + 1) + float(support["hermite_margin"])) * w
    if kind is SpectralKind.SAMPLED:
        grid = fn.sample_grid
        assert grid is not None
        return max(abs(grid.min), abs(grid.max))
    return float(support["custom"])


def feature_size(fn: SpectralFn) -> float:
    """Smallest length scale that the grid has to resolve."""
    kind = fn.kind
    if kind is SpectralKind.GAUSSIAN:
        w, chirp = fn.parameters
        size = w / (1.0 + 8.0 * abs(chirp) * w**2)
    elif kind is SpectralKind.SINC or kind is SpectralKind.SECH:
        size = fn.parameters[0]
    elif kind is SpectralKind.HERMITE:
        order, w = fn.parameters
        size = w / np.sqrt(2 * order + 1)
    elif kind is SpectralKind.SAMPLED:
        grid = fn.sample_grid
        assert grid is not None
        size = 4.0 * grid.spacing
    else:
        size = support_halfwidth(fn) / 200.0
    if fn.power == 2:
        size /= np.sqrt(2.0)
    return float(size)


def _adaptive_extent(
    pmf: SpectralFn,
    pump: SpectralFn,
    r: float,
    s: float,
    sinc_support: Optional[float] = None,
) -> Tuple[float, float, float, float]:
    u_pmf = support_halfwidth(pmf, sinc_support)
    u_pump = support_halfwidth(pump)
    denom = abs(r - s)
    hx = (u_pmf + abs(s) * u_pump) / denom
    hy = (u_pmf + abs(r) * u_pump) / denom

    per_feature = float(GRID_SETTINGS["points_per_feature"])
    f_pmf = feature_size(pmf)
    f_pump = feature_size(pump)
    dx = min(f_pmf / abs(r) if r != 0 else np.inf, f_pump) / per_feature
    dy = min(f_pmf / abs(s) if s != 0 else np.inf, f_pump) / per_feature
    return hx, hy, dx, dy


def _point_count(halfwidth: float, spacing: float, floor: int) -> int:
    hi = int(GRID_SETTINGS["max_points"])
    return int(np.clip(np.ceil(2 * halfwidth / spacing) + 1, floor, hi))


def adaptive_grids(
    pmf: SpectralFn,
    pump: SpectralFn,
    r: float,
    s: float,
    sinc_support: Optional[float] = None,
) -> Tuple[Grid1D, Grid1D]:
    """Grids sized from the supports and feature sizes of both functions.

    The half-widths bound the parallelogram |r x + s y| <= U_pmf,
    |x + y| <= U_pump. Spacing is the smallest feature divided by
    ``points_per_feature``; point counts are clamped to the configured range.
    """
    _check_rs(r, s)
    hx, hy, dx, dy = _adaptive_extent(pmf, pump, r, s, sinc_support)
    lo = int(GRID_SETTINGS["min_points"])
    nx = _point_count(hx, dx, lo)
    ny = _point_count(hy, dy, lo)
    logger.debug(f"Adaptive grids: x in +-{hx:.4g} ({nx} pts), y in +-{hy:.4g} ({ny} pts)")
    return Grid1D.symmetric(hx, nx), Grid1D.symmetric(hy, ny)


def window_grids(
    r: float,
    s: float,
    halfwidth: Optional[float] = None,
    points: Optional[int] = None,
) -> Tuple[Grid1D, Grid1D]:
    """Fixed window: x in +-W/max(|r|, 1), y in +-W/max(|s|, 1)."""
    _check_rs(r, s)
    w = float(GRID_SETTINGS["window_halfwidth"] if halfwidth is None else halfwidth)
    n = int(GRID_SETTINGS["window_points"] if points is None else points)
    if w <= 0 or n < 2:
        raise InvalidSpectralFn(f"grid window needs W > 0 and >= 2 points, got W={w}, n={n}")
    return (
        Grid1D.symmetric(w / max(abs(r), 1.0), n),
        Grid1D.symmetric(w / max(abs(s), 1.0), n),
    )


def default_grids(
    pmf: SpectralFn,
    pump: SpectralFn,
    r: float,
    s: float,
    mode: Optional[str] = None,
) -> Tuple[Grid1D, Grid1D]:
    """Grids used when the caller gives none.

    In ``window`` mode (the default) the grid is the fixed window. When
    neither function is a sinc, each axis grows to hold the support of both
    functions and keeps their features resolved. sinc tails are cut at the
    window edge, and the reference purities of sinc phase matching are
    quoted on that window. ``adaptive`` mode uses adaptive_grids.
    """
    _check_rs(r, s)
    mode = (mode or str(GRID_SETTINGS.get("mode", "window"))).lower()
    if mode == "adaptive":
        return adaptive_grids(pmf, pump, r, s)
    if mode != "window":
        raise InvalidSpectralFn(f"unknown grid mode '{mode}' (window, adaptive)")

    wx, wy = window_grids(r, s)
    if SpectralKind.SINC in (pmf.kind, pump.kind):
        return wx, wy

    hx, hy, dx, dy = _adaptive_extent(pmf, pump, r, s)
    hx, hy = max(hx, wx.max), max(hy, wy.max)
    nx = _point_count(hx, dx, wx.n_points)
    ny = _point_count(hy, dy, wy.n_points)
    logger.debug(f"Grids: x in +-{hx:.4g} ({nx} pts), y in +-{hy:.4g} ({ny} pts)")
    return Grid1D.symmetric(hx, nx), Grid1D.symmetric(hy, ny)


def gvd_sinc_support() -> float:
    return float(DISPERSION_SETTINGS.get("sinc_support", 32.0))


def spectral_fn_from_name(
    name: str,
    alpha: float = 1.0,
    width: float = 1.0,
    chirp: float = 0.0,
    order: int = 0,
) -> SpectralFn:
    """Build a closed-form spectral function from its CLI name."""
    key = name.strip().lower()
    if key == "gaussian":
        return SpectralFn.gaussian(width, chirp)
    if key == "sinc":
        return SpectralFn.sinc(alpha)
    if key == "sech":
        return SpectralFn.sech(width)
    if key == "hermite":
        return SpectralFn.hermite(order, width)
    raise InvalidSpectralFn(
        f"unknown spectral function '{name}' (gaussian, sinc, sech, hermite)"
    )


def _boundary_ratio(values: np.ndarray) -> float:
    mags = np.abs(values)
    peak = float(mags.max())
    if peak == 0.0:
        return 0.0
    edge = max(
        float(mags[0, :].max()),
        float(mags[-1, :].max()),
        float(mags[:, 0].max()),
        float(mags[:, -1].max()),
    )
    return edge / peak


def assemble_jsa(
    values: np.ndarray, gx: Grid1D, gy: Grid1D, label: str
) -> JointAmplitude:
    """Wrap sampled values, flag boundary amplitude and renormalize on the grid."""
    if not np.all(np.isfinite(values)):
        raise InvalidSpectralFn(f"{label}: spectral functions produced non-finite values")
    ratio = _boundary_ratio(values)
    flag = ratio >= BOUNDARY_TOL
    if flag:
        logger.warning(
            f"⚠️  {label}: boundary amplitude is {ratio:.2e} of the peak; "
            "the grid may crop the JSA"
        )
    jsa = JointAmplitude(values, gx, gy, boundary_flag=flag, label=label)
    return jsa.normalized()


def _evaluate_on_grid(
    kernel: Callable[[np.ndarray, np.ndarray], np.ndarray], gx: Grid1D, gy: Grid1D
) -> np.ndarray:
    x = gx.points[:, None]
    y = gy.points[None, :]
    return kernel(x, y)


def build_jsa(
    pmf: SpectralFn,
    pump: SpectralFn,
    r: float,
    s: float,
    gx: Optional[Grid1D] = None,
    gy: Optional[Grid1D] = None,
) -> JointAmplitude:
    """Sample sqrt|r - s| phi(r x + s y) gamma(x + y) and renormalize on the grid.

    Raises:
        DegenerateGroupVelocities: If r and s coincide.
        InvalidSpectralFn: If the inputs produce non-finite samples.
    """
    _check_rs(r, s)
    if gx is None or gy is None:
        auto_x, auto_y = default_grids(pmf, pump, r, s)
        gx = gx or auto_x
        gy = gy or auto_y
    prefactor = np.sqrt(abs(r - s))
    values = _evaluate_on_grid(
        lambda x, y: prefactor * pmf(r * x + s * y) * pump(x + y), gx, gy
    )
    return assemble_jsa(values, gx, gy, f"{pmf.label} x {pump.label}")


def to_frequency_conversion(
    pmf: SpectralFn,
    pump: SpectralFn,
    r: float,
    s: float,
    gx: Optional[Grid1D] = None,
    gy: Optional[Grid1D] = None,
) -> JointAmplitude:
    """Frequency-conversion transfer function sqrt|r-s| phi(r x - s y) gamma*(x - y).

    Its entanglement equals that of the SPDC JSA built with the same real pump,
    and that of the SPDC JSA built with the conjugated pump in general.
    """
    _check_rs(r, s)
    if gx is None or gy is None:
        auto_x, auto_y = default_grids(pmf, pump, r, s)
        gx = gx or auto_x
        gy = gy or auto_y
    prefactor = np.sqrt(abs(r - s))
    conj_pump = pump.conjugate()
    values = _evaluate_on_grid(
        lambda x, y: prefactor * pmf(r * x - s * y) * conj_pump(x - y), gx, gy
    )
    return assemble_jsa(values, gx, gy, f"FC {pmf.label} x {pump.label}*")


def _weighted_matrix(jsa: JointAmplitude) -> np.ndarray:
    values = jsa.values
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("JSA contains non-finite entries")
    weighted = values * np.sqrt(jsa.cell_area)
    if np.iscomplexobj(weighted) and not np.any(weighted.imag):
        weighted = weighted.real
    return weighted


@handle_numerical_errors
def purity_schmidt(jsa: JointAmplitude) -> SchmidtResult:
    """Purity from the singular values of the measure-weighted JSA matrix."""
    weighted = _weighted_matrix(jsa)
    singular = linalg.svdvals(weighted, check_finite=False)
    return SchmidtResult.from_singular_values(singular)


@handle_numerical_errors
def purity_integral(jsa: JointAmplitude) -> float:
    """Purity from the reduced density matrix by direct quadrature.

    rho(x, x') = integral dy Psi(x, y) Psi*(x', y); P = double integral |rho|^2.
    Independent of the SVD path and used as its oracle.
    """
    values = jsa.values
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("JSA contains non-finite entries")
    dx = jsa.x_grid.spacing
    dy = jsa.y_grid.spacing
    rho = (values @ values.conj().T) * dy
    trace = float(np.real(np.trace(rho))) * dx
    purity = float(np.sum(np.abs(rho) ** 2)) * dx * dx
    return purity / trace**2


@handle_numerical_errors
def schmidt_decompose(jsa: JointAmplitude) -> SchmidtModes:
    """Schmidt modes sampled on the JSA grids.

    Columns of ``modes_x`` and rows of ``modes_y`` are L2-normalized with the
    grid measure; ``coefficients`` are normalized to unit sum of squares.
    """
    weighted = _weighted_matrix(jsa)
    try:
        u, sv, vh = linalg.svd(weighted, full_matrices=False, check_finite=False)
    except linalg.LinAlgError as e:
        raise NumericalFailure(f"SVD did not converge: {e}") from e
    total = float(np.sqrt(np.sum(sv**2)))
    if total == 0.0:
        raise NumericalFailure("JSA has zero norm")
    modes_x = u / np.sqrt(jsa.x_grid.spacing)
    modes_y = vh / np.sqrt(jsa.y_grid.spacing)
    return SchmidtModes(
        modes_x=modes_x,
        modes_y=modes_y,
        coefficients=sv / total,
        x_grid=jsa.x_grid,
        y_grid=jsa.y_grid,
    )


def jsa_l2_distance(first: JointAmplitude, second: JointAmplitude) -> float:
    """L2 distance between two JSAs on the same grids, up to a global phase.

    Raises:
        InvalidSpectralFn: If the x or y grids differ in extent or point count.
    """
    if first.x_grid != second.x_grid or first.y_grid != second.y_grid:
        raise InvalidSpectralFn(
            f"JSAs live on different grids: {first.x_grid} x {first.y_grid} "
            f"vs {second.x_grid} x {second.y_grid}"
        )
    overlap = np.vdot(second.values, first.values) * first.cell_area
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    diff = first.values - phase * second.values
    return float(np.sqrt(np.sum(np.abs(diff) ** 2) * first.cell_area))
