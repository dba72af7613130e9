#!/usr/bin/env python3
"""Data models for jsa-forge.

Immutable value types for grids, spectral functions, joint amplitudes,
number-basis kets, optimizer records and dispersion models. Every type
validates itself in ``__post_init__`` and offers ``to_dict()`` for JSON
emission.
"""

import enum
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Tuple, Union

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline

from .exceptions import (
    ConfigurationError,
    DomainError,
    InvalidSpectralFn,
    NumericalFailure,
)


def _complex_pairs(values: np.ndarray) -> List[List[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values).ravel()]


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of dimensionless frequencies."""

    min: float
    max: float
    n_points: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.min) and np.isfinite(self.max)):
            raise DomainError(f"Grid bounds must be finite: [{self.min}, {self.max}]")
        if self.min >= self.max:
            raise DomainError(f"Grid needs min < max, got [{self.min}, {self.max}]")
        if int(self.n_points) < 2:
            raise DomainError(f"Grid needs at least 2 points, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def symmetric(cls, half_width: float, n_points: int) -> "Grid1D":
        return cls(-float(half_width), float(half_width), n_points)

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.n_points)

    def refined(self, factor: int = 2) -> "Grid1D":
        """Same interval with the spacing divided by ``factor``."""
        return Grid1D(self.min, self.max, factor * (self.n_points - 1) + 1)

    def to_dict(self) -> Dict[str, Any]:
        return {"min": self.min, "max": self.max, "n_points": self.n_points}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Grid1D":
        return cls(float(data["min"]), float(data["max"]), int(data["n_points"]))


class SpectralKind(enum.Enum):
    """Closed-form families and the two numeric fallbacks."""

    GAUSSIAN = "gaussian"
    SINC = "sinc"
    SECH = "sech"
    HERMITE = "hermite"
    SAMPLED = "sampled"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class SpectralFn:
    """One-dimensional complex spectral amplitude (pump or phase matching).

    Closed-form kinds are normalized analytically. ``sampled`` and
    ``custom`` kinds, and any squared function, are normalized numerically.
    Use the factory classmethods rather than the raw constructor.

    Attributes:
        kind: Function family.
        parameters: Family parameters, see the factories for their order.
        label: Human-readable name used in outputs.
        conjugated: Evaluate the complex conjugate.
        power: 1 for the plain function, 2 for its square (chi(3) pump).
    """

    kind: SpectralKind
    parameters: Tuple[float, ...] = ()
    label: str = ""
    conjugated: bool = False
    power: int = 1
    sample_grid: Optional[Grid1D] = None
    sample_values: Optional[np.ndarray] = field(default=None, repr=False)
    function: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, repr=False
    )
    _scale: float = field(default=1.0, repr=False)

    def __post_init__(self) -> None:
        if self.power not in (1, 2):
            raise InvalidSpectralFn(f"power must be 1 or 2, got {self.power}")
        self._validate_parameters()
        if not self.label:
            object.__setattr__(self, "label", self.kind.value)
        if self._needs_numeric_norm():
            object.__setattr__(self, "_scale", 1.0)
            norm2 = self._numeric_norm2()
            if not np.isfinite(norm2) or norm2 <= 0.0:
                raise InvalidSpectralFn(
                    f"Spectral function '{self.label}' is not normalizable "
                    f"(squared norm {norm2})"
                )
            object.__setattr__(self, "_scale", float(norm2 ** -0.5))

    # ------------------------------------------------------------------
    # Factories
    # ------------------------------------------------------------------
    @classmethod
    def gaussian(cls, width: float = 1.0, chirp: float = 0.0) -> "SpectralFn":
        return cls(SpectralKind.GAUSSIAN, (float(width), float(chirp)))

    @classmethod
    def sinc(cls, alpha: float = 1.0) -> "SpectralFn":
        return cls(SpectralKind.SINC, (float(alpha),))

    @classmethod
    def sech(cls, width: float = 1.0) -> "SpectralFn":
        return cls(SpectralKind.SECH, (float(width),))

    @classmethod
    def hermite(cls, order: int, width: float = 1.0) -> "SpectralFn":
        return cls(SpectralKind.HERMITE, (float(order), float(width)))

    @classmethod
    def sampled(
        cls, grid: Grid1D, values: np.ndarray, label: str = "sampled"
    ) -> "SpectralFn":
        arr = np.asarray(values, dtype=complex)
        if arr.shape != (grid.n_points,):
            raise InvalidSpectralFn(
                f"sampled values have shape {arr.shape}, grid has {grid.n_points} points"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidSpectralFn("sampled values contain non-finite entries")
        arr.setflags(write=False)
        return cls(SpectralKind.SAMPLED, (), label, sample_grid=grid, sample_values=arr)

    @classmethod
    def custom(
        cls, function: Callable[[np.ndarray], np.ndarray], label: str = "custom"
    ) -> "SpectralFn":
        if not callable(function):
            raise InvalidSpectralFn("custom spectral function must be callable")
        return cls(SpectralKind.CUSTOM, (), label, function=function)

    # ------------------------------------------------------------------
    # Derived functions
    # ------------------------------------------------------------------
    def conjugate(self) -> "SpectralFn":
        return replace(self, conjugated=not self.conjugated)

    def squared(self) -> "SpectralFn":
        """Normalized square of this function, as used for a chi(3) pump."""
        if self.power == 2:
            raise InvalidSpectralFn("function is already squared")
        return replace(self, power=2, label=f"{self.label}^2")

    @property
    def is_real(self) -> bool:
        if self.kind is SpectralKind.GAUSSIAN:
            return self.parameters[1] == 0.0
        if self.kind is SpectralKind.SAMPLED:
            return bool(np.all(np.asarray(self.sample_values).imag == 0.0))
        return self.kind is not SpectralKind.CUSTOM

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------
    def __call__(self, x: Union[float, np.ndarray]) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        values = self._base(xs)
        if self.power == 2:
            values = values * values
        values = values * self._scale
        if self.conjugated:
            values = np.conj(values)
        return values

    def _base(self, x: np.ndarray) -> np.ndarray:
        kind = self.kind
        if kind is SpectralKind.GAUSSIAN:
            w, c = self.parameters
            amp = (w * np.sqrt(np.pi)) ** -0.5 * np.exp(-(x**2) / (2.0 * w**2))
            if c == 0.0:
                return amp.astype(complex)
            return amp * np.exp(-0.5j * c * x**2)
        if kind is SpectralKind.SINC:
            (alpha,) = self.parameters
            # np.sinc is sin(pi t)/(pi t)
            return (np.sinc(x / (alpha * np.pi)) / np.sqrt(alpha * np.pi)).astype(complex)
        if kind is SpectralKind.SECH:
            (w,) = self.parameters
            return (1.0 / np.cosh(np.clip(x / w, -700.0, 700.0)) / np.sqrt(2.0 * w)).astype(
                complex
            )
        if kind is SpectralKind.HERMITE:
            from ..physics.fock_space import hermite_wavefunction

            order, w = self.parameters
            return (hermite_wavefunction(int(order), x / w) / np.sqrt(w)).astype(complex)
        if kind is SpectralKind.SAMPLED:
            return self._sampled_base(x)
        result = np.asarray(self.function(x), dtype=complex)  # type: ignore[misc]
        return np.broadcast_to(result, x.shape).astype(complex)

    def _sampled_base(self, x: np.ndarray) -> np.ndarray:
        grid = self.sample_grid
        assert grid is not None and self.sample_values is not None
        pts = grid.points
        re = CubicSpline(pts, self.sample_values.real)
        im = CubicSpline(pts, self.sample_values.imag)
        inside = (x >= grid.min) & (x <= grid.max)
        out = np.zeros(x.shape, dtype=complex)
        out[inside] = re(x[inside]) + 1j * im(x[inside])
        return out

    # ------------------------------------------------------------------
    # Validation and normalization
    # ------------------------------------------------------------------
    def _validate_parameters(self) -> None:
        kind = self.kind
        params = self.parameters
        expected = {
            SpectralKind.GAUSSIAN: 2,
            SpectralKind.SINC: 1,
            SpectralKind.SECH: 1,
            SpectralKind.HERMITE: 2,
            SpectralKind.SAMPLED: 0,
            SpectralKind.CUSTOM: 0,
        }[kind]
        if len(params) != expected:
            raise InvalidSpectralFn(
                f"{kind.value} takes {expected} parameters, got {len(params)}"
            )
        if not all(np.isfinite(p) for p in params):
            raise InvalidSpectralFn(f"{kind.value} parameters must be finite")
        if kind in (SpectralKind.GAUSSIAN, SpectralKind.SECH, SpectralKind.SINC):
            if params[0] <= 0:
                raise InvalidSpectralFn(f"{kind.value} width must be positive")
        if kind is SpectralKind.HERMITE:
            order, w = params
            if order < 0 or order != int(order):
                raise InvalidSpectralFn("hermite order must be a non-negative integer")
            if w <= 0:
                raise InvalidSpectralFn("hermite width must be positive")
        if kind is SpectralKind.SAMPLED and self.sample_grid is None:
            raise InvalidSpectralFn("sampled spectral function needs a grid")
        if kind is SpectralKind.CUSTOM and self.function is None:
            raise InvalidSpectralFn("custom spectral function needs a callable")

    def _needs_numeric_norm(self) -> bool:
        return self.power == 2 or self.kind in (SpectralKind.SAMPLED, SpectralKind.CUSTOM)

    def _numeric_norm2(self) -> float:
        def density(x: float) -> float:
            value = self._base(np.asarray([x]))[0]
            if self.power == 2:
                value = value * value
            return float(abs(value) ** 2)

        if self.kind is SpectralKind.SAMPLED:
            grid = self.sample_grid
            assert grid is not None
            fine = np.linspace(grid.min, grid.max, 8 * (grid.n_points - 1) + 1)
            values = self._base(fine)
            if self.power == 2:
                values = values * values
            return float(integrate.simpson(np.abs(values) ** 2, x=fine))

        if self.kind is SpectralKind.SINC:
            # integral of sinc(u)^4 du is 2 pi / 3
            (alpha,) = self.parameters
            return 2.0 / (3.0 * alpha * np.pi)

        try:
            value, _ = integrate.quad(density, -np.inf, np.inf, limit=400)
        except Exception as e:
            raise InvalidSpectralFn(f"normalization of '{self.label}' failed: {e}") from e
        return float(value)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "kind": self.kind.value,
            "label": self.label,
            "parameters": list(self.parameters),
            "conjugated": self.conjugated,
            "power": self.power,
        }
        if self.sample_grid is not None:
            data["grid"] = self.sample_grid.to_dict()
        return data


@dataclass(frozen=True, eq=False)
class JointAmplitude:
    """Complex JSA sampled on a rectangular (x, y) grid.

    ``values[i, j]`` is the amplitude at ``(x_grid.points[i], y_grid.points[j])``.
    The stored array is a read-only copy of the input.
    """

    values: np.ndarray
    x_grid: Grid1D
    y_grid: Grid1D
    boundary_flag: bool = False
    label: str = ""

    def __post_init__(self) -> None:
        arr = np.array(self.values)
        if arr.shape != (self.x_grid.n_points, self.y_grid.n_points):
            raise DomainError(
                f"JSA shape {arr.shape} does not match grids "
                f"({self.x_grid.n_points}, {self.y_grid.n_points})"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def cell_area(self) -> float:
        return self.x_grid.spacing * self.y_grid.spacing

    def norm(self) -> float:
        """Discrete L2 norm with the grid measure."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.cell_area))

    def normalized(self) -> "JointAmplitude":
        norm = self.norm()
        if not np.isfinite(norm) or norm == 0.0:
            raise NumericalFailure("cannot normalize a zero or non-finite JSA")
        return replace(self, values=self.values / norm)

    def transpose(self) -> "JointAmplitude":
        """Exchange the roles of x and y."""
        return replace(
            self, values=self.values.T, x_grid=self.y_grid, y_grid=self.x_grid
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "shape": list(self.values.shape),
            "x_grid": self.x_grid.to_dict(),
            "y_grid": self.y_grid.to_dict(),
            "boundary_flag": self.boundary_flag,
            "norm": self.norm(),
        }


@dataclass(frozen=True, eq=False)
class SchmidtResult:
    """Normalized Schmidt coefficients and the purity they imply."""

    singular_values: np.ndarray
    purity: float
    schmidt_number: float

    def __post_init__(self) -> None:
        if not (0.0 < self.purity <= 1.0 + 1e-9):
            raise NumericalFailure(f"purity {self.purity} is outside (0, 1]")

    @classmethod
    def from_singular_values(cls, values: np.ndarray) -> "SchmidtResult":
        sv = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
        total = float(np.sqrt(np.sum(sv**2)))
        if not np.isfinite(total) or total == 0.0:
            raise NumericalFailure("singular values are zero or non-finite")
        lam = sv / total
        purity = float(np.sum(lam**4))
        return cls(singular_values=lam, purity=purity, schmidt_number=1.0 / purity)

    def to_dict(self, top: int = 10) -> Dict[str, Any]:
        return {
            "purity": self.purity,
            "schmidt_number": self.schmidt_number,
            "leading_coefficients": [float(v) for v in self.singular_values[:top]],
        }


@dataclass(frozen=True, eq=False)
class SchmidtModes:
    """Sampled Schmidt mode pairs: Psi(x, y) ~ sum_k c_k u_k(x) v_k(y)."""

    modes_x: np.ndarray
    modes_y: np.ndarray
    coefficients: np.ndarray
    x_grid: Grid1D
    y_grid: Grid1D

    def reconstruct(self, rank: Optional[int] = None) -> np.ndarray:
        k = len(self.coefficients) if rank is None else rank
        return (self.modes_x[:, :k] * self.coefficients[:k]) @ self.modes_y[:k, :]

    def to_dict(self, top: int = 10) -> Dict[str, Any]:
        return {
            "coefficients": [float(c) for c in self.coefficients[:top]],
            "x_grid": self.x_grid.to_dict(),
            "y_grid": self.y_grid.to_dict(),
        }


@dataclass(frozen=True)
class CorrelationMatrix:
    """Quadratic form of the Gaussian-times-Gaussian JSA exponent."""

    c11: float
    c12: float
    c22: float

    @property
    def determinant(self) -> float:
        return self.c11 * self.c22 - self.c12**2

    def as_array(self) -> np.ndarray:
        return np.array([[self.c11, self.c12], [self.c12, self.c22]])

    def is_positive_definite(self, tol: float = 0.0) -> bool:
        return self.c11 > tol and self.determinant > tol

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class FockKet:
    """Truncated number-basis ket with its truncation diagnostics.

    Attributes:
        coeffs: Amplitudes of |0>, ..., |N-1>.
        tail_weight: Weight in the last five levels.
        leakage: Weight lost outside the truncation before renormalization.
        truncation_flag: Set when the tail exceeded the warning threshold.
    """

    coeffs: np.ndarray
    tail_weight: float = 0.0
    leakage: float = 0.0
    truncation_flag: bool = False

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=complex).ravel()
        if arr.size == 0:
            raise DomainError("FockKet needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise NumericalFailure("FockKet coefficients are not finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_coeffs(
        cls, coeffs: np.ndarray, leakage: float = 0.0, tail_threshold: float = np.inf
    ) -> "FockKet":
        """Normalize ``coeffs`` and fill in the tail diagnostic."""
        arr = np.asarray(coeffs, dtype=complex).ravel()
        norm = float(np.linalg.norm(arr))
        if norm == 0.0 or not np.isfinite(norm):
            raise NumericalFailure("cannot normalize a zero or non-finite ket")
        arr = arr / norm
        tail = float(np.sum(np.abs(arr[max(arr.size - 5, 0):]) ** 2))
        return cls(arr, tail, float(leakage), tail > tail_threshold)

    @classmethod
    def number_state(cls, n: int, truncation: int) -> "FockKet":
        if not 0 <= n < truncation:
            raise DomainError(f"number state |{n}> outside truncation {truncation}")
        coeffs = np.zeros(truncation, dtype=complex)
        coeffs[n] = 1.0
        return cls(coeffs)

    @property
    def truncation(self) -> int:
        return int(self.coeffs.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def resized(self, truncation: int) -> "FockKet":
        """Zero-pad or crop to ``truncation`` levels."""
        out = np.zeros(truncation, dtype=complex)
        k = min(truncation, self.truncation)
        out[:k] = self.coeffs[:k]
        return replace(self, coeffs=out)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.truncation,
            "coefficients": _complex_pairs(self.coeffs),
            "tail_weight": self.tail_weight,
            "leakage": self.leakage,
            "truncation_flag": self.truncation_flag,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FockKet":
        pairs = np.asarray(data["coefficients"], dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2 or len(pairs) != int(data["N"]):
            raise ConfigurationError("FockKet coefficients must be N [re, im] pairs")
        return cls(
            pairs[:, 0] + 1j * pairs[:, 1],
            float(data.get("tail_weight", 0.0)),
            float(data.get("leakage", 0.0)),
            bool(data.get("truncation_flag", False)),
        )


@dataclass(frozen=True)
class BeamSplitterMap:
    """Squeezing and mixing parameters that reproduce a JSA.

    ``swapped`` means the roles of (x, r) and (y, s) were exchanged so that
    |r| >= |s|; ``mirrored`` means r < 0 was handled by a parity flip of the
    phase-matching ket.
    """

    theta: float
    kappa: float
    sigma: float
    nu: float
    mu: float = 1.0
    r: float = 0.0
    s: float = 0.0
    swapped: bool = False
    mirrored: bool = False

    def __post_init__(self) -> None:
        for name in ("kappa", "sigma", "nu", "mu"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be positive, got {value}")
        if abs(np.tan(self.theta) - self.sigma / self.kappa) > 1e-10 * max(
            1.0, self.sigma / self.kappa
        ):
            raise DomainError("theta is inconsistent with sigma/kappa")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class TwoModeFockState:
    """Two-mode amplitude matrix: coeffs[n, m] is the amplitude of |n>|m>."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=complex)
        if arr.ndim != 2:
            raise DomainError("two-mode state needs a coefficient matrix")
        norm = float(np.linalg.norm(arr))
        if abs(norm - 1.0) > 1e-8:
            raise DomainError(f"two-mode state must be normalized, norm is {norm}")
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def product(cls, first: FockKet, second: FockKet) -> "TwoModeFockState":
        return cls(np.outer(first.coeffs, second.coeffs))


@dataclass(frozen=True)
class Moments:
    """Second-order moments n = <a^dag a> and m = <a^2> of a single mode."""

    n: float
    m: complex

    def __post_init__(self) -> None:
        if self.n < -1e-12:
            raise DomainError(f"photon number must be non-negative, got {self.n}")
        n = max(float(self.n), 0.0)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", complex(self.m))
        if abs(self.m) > np.sqrt(n * (n + 1.0)) + 1e-9:
            raise DomainError(
                f"|m| = {abs(self.m):.6g} violates |m| <= sqrt(n(n+1)) for n = {n:.6g}"
            )

    @property
    def bound_gap(self) -> float:
        """sqrt(n(n+1)) - |m|, zero for squeezed vacua."""
        return float(np.sqrt(self.n * (self.n + 1.0)) - abs(self.m))

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "m": [self.m.real, self.m.imag]}


@dataclass(frozen=True)
class OptimalPump:
    """Squeezed-vacuum pump at the optimal photon number."""

    n: float
    squeeze: float
    mu: float
    phase: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class SqueezedFit(NamedTuple):
    """Best squeezed-vacuum approximation of a ket."""

    mu: float
    phase: float
    fidelity: float

    def to_dict(self) -> Dict[str, Any]:
        return {"mu": self.mu, "phase": self.phase, "fidelity": self.fidelity}


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for one pump optimization run."""

    theta: float
    n_trunc: int = 30
    penalty: float = 10.0
    restarts: int = 80
    max_iters: int = 2000
    grad_tol: float = 1e-8
    stall_tol: float = 1e-5
    seed: int = 0
    warm_start: bool = True

    def __post_init__(self) -> None:
        if not self.penalty > 0:
            raise DomainError(f"penalty must be positive, got {self.penalty}")
        if self.restarts < 1:
            raise DomainError(f"restarts must be at least 1, got {self.restarts}")
        if self.n_trunc < 2:
            raise DomainError(f"truncation must be at least 2, got {self.n_trunc}")
        if self.max_iters < 1 or not self.grad_tol > 0:
            raise DomainError("max_iters and grad_tol must be positive")

    @classmethod
    def from_settings(cls, theta: float, **overrides: Any) -> "OptimizerConfig":
        """Build from the ``optimizer`` config section plus overrides."""
        from .config import DEFAULT_TRUNCATION, OPTIMIZER_DEFAULTS

        values: Dict[str, Any] = {
            "n_trunc": DEFAULT_TRUNCATION,
            "penalty": OPTIMIZER_DEFAULTS.get("penalty", 10.0),
            "restarts": OPTIMIZER_DEFAULTS.get("restarts", 80),
            "max_iters": OPTIMIZER_DEFAULTS.get("max_iters", 2000),
            "grad_tol": OPTIMIZER_DEFAULTS.get("grad_tol", 1e-8),
            "stall_tol": OPTIMIZER_DEFAULTS.get("stall_tol", 1e-5),
            "seed": OPTIMIZER_DEFAULTS.get("seed", 0),
            "warm_start": OPTIMIZER_DEFAULTS.get("warm_start", True),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(theta=float(theta), **values)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class RestartRecord:
    """Outcome of a single optimizer restart."""

    index: int
    purity: float
    cost: float
    converged: bool
    iterations: int
    gradient_norm: float
    warm: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Best pump ket over all restarts plus the per-restart trace."""

    best_ket: FockKet
    best_purity: float
    best_index: int
    squeezed_fit: SqueezedFit
    restart_trace: List[RestartRecord]
    config: OptimizerConfig

    def to_dict(self) -> Dict[str, Any]:
        return {
            "best_purity": self.best_purity,
            "best_index": self.best_index,
            "best_ket": self.best_ket.to_dict(),
            "squeezed_fit": self.squeezed_fit.to_dict(),
            "restart_trace": [r.to_dict() for r in self.restart_trace],
            "config": self.config.to_dict(),
        }


INDEX_FORMS = ("sellmeier-1pole", "sellmeier-2pole", "constant", "linear")
MODE_METADATA_KEYS = ("form", "valid_um", "note", "reference")


@dataclass(frozen=True)
class IndexModel:
    """Refractive index of one mode as a function of vacuum wavelength in um.

    Forms:
        sellmeier-1pole: n^2 = A + B/(lambda^2 - C) - D lambda^2
        sellmeier-2pole: n^2 = A + B/(1 - C/lambda^2) + D/(1 - E/lambda^2) - F lambda^2,
                         D and E default to 0
        constant:        n
        linear:          n_group + (n_phase - n_group) lambda / ref_um,
                         which makes k exactly linear in omega
    """

    form: str
    coefficients: Tuple[Tuple[str, float], ...]
    valid_um: Tuple[float, float]

    def __post_init__(self) -> None:
        if self.form not in INDEX_FORMS:
            raise ConfigurationError(
                f"unknown index form '{self.form}', expected one of {INDEX_FORMS}"
            )
        lo, hi = self.valid_um
        if not 0 < lo < hi:
            raise ConfigurationError(f"invalid validity window {self.valid_um}")
        needed = {
            "sellmeier-1pole": {"A", "B", "C", "D"},
            "sellmeier-2pole": {"A", "B", "C", "F"},
            "constant": {"n"},
            "linear": {"n_group", "n_phase", "ref_um"},
        }[self.form]
        missing = needed - set(self.params)
        if missing:
            raise ConfigurationError(
                f"index form '{self.form}' is missing coefficients {sorted(missing)}"
            )
        if any(lo**2 <= pole <= hi**2 for pole in self._poles()):
            raise ConfigurationError("Sellmeier pole lies inside the validity window")
        for edge in (lo, hi):
            if not self.index(np.asarray(edge)) > 1.0:
                raise ConfigurationError(
                    f"refractive index must exceed 1 over the window, fails at {edge} um"
                )

    @property
    def params(self) -> Dict[str, float]:
        return dict(self.coefficients)

    def _poles(self) -> List[float]:
        p = self.params
        if self.form == "sellmeier-1pole":
            return [p["C"]]
        if self.form == "sellmeier-2pole":
            return [p["C"]] + ([p.get("E", 0.0)] if p.get("D", 0.0) else [])
        return []

    def index(self, wavelength_um: np.ndarray) -> np.ndarray:
        lam = np.asarray(wavelength_um, dtype=float)
        p = self.params
        if self.form == "constant":
            return np.full(lam.shape, p["n"])
        if self.form == "linear":
            return p["n_group"] + (p["n_phase"] - p["n_group"]) * lam / p["ref_um"]
        lam2 = lam**2
        if self.form == "sellmeier-2pole":
            return np.sqrt(
                p["A"]
                + p["B"] * lam2 / (lam2 - p["C"])
                + p.get("D", 0.0) * lam2 / (lam2 - p.get("E", 0.0))
                - p["F"] * lam2
            )
        return np.sqrt(p["A"] + p["B"] / (lam2 - p["C"]) - p["D"] * lam2)

    def dn_dlambda(self, wavelength_um: np.ndarray) -> np.ndarray:
        """Analytic derivative of the index, per micrometer."""
        lam = np.asarray(wavelength_um, dtype=float)
        p = self.params
        if self.form == "constant":
            return np.zeros(lam.shape)
        if self.form == "linear":
            return np.full(lam.shape, (p["n_phase"] - p["n_group"]) / p["ref_um"])
        lam2 = lam**2
        if self.form == "sellmeier-2pole":
            x = (
                p["B"] * p["C"] / (lam2 - p["C"]) ** 2
                + p.get("D", 0.0) * p.get("E", 0.0) / (lam2 - p.get("E", 0.0)) ** 2
                + p["F"]
            )
            return -lam * x / self.index(lam)
        x = p["B"] / (lam2 - p["C"]) ** 2 + p["D"]
        return -lam * x / self.index(lam)

    def group_index(self, wavelength_um: np.ndarray) -> np.ndarray:
        lam = np.asarray(wavelength_um, dtype=float)
        return self.index(lam) - lam * self.dn_dlambda(lam)

    def to_dict(self) -> Dict[str, Any]:
        return {"form": self.form, **self.params, "valid_um": list(self.valid_um)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IndexModel":
        try:
            form = str(data.get("form", "sellmeier-1pole"))
            valid = data["valid_um"]
            coeffs = tuple(
                (str(k), float(v))
                for k, v in sorted(data.items())
                if k not in MODE_METADATA_KEYS
            )
            return cls(form, coeffs, (float(valid[0]), float(valid[1])))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, ConfigurationError):
                raise
            raise ConfigurationError(f"invalid index model entry: {e}") from e


PolingSpec = Union[None, str, float]


@dataclass(frozen=True)
class DispersionModel:
    """Index models for pump (0), signal (1) and idler (2) plus poling."""

    modes: Tuple[IndexModel, IndexModel, IndexModel]
    poling_period_m: PolingSpec = None
    source: str = ""
    provenance: str = ""

    def __post_init__(self) -> None:
        if len(self.modes) != 3:
            raise ConfigurationError("dispersion model needs exactly three modes")
        p = self.poling_period_m
        if isinstance(p, str) and p != "auto":
            raise ConfigurationError("poling period must be a number, null or 'auto'")
        if isinstance(p, (int, float)) and not isinstance(p, bool) and p <= 0:
            raise ConfigurationError("poling period must be positive")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "modes": {str(i): m.to_dict() for i, m in enumerate(self.modes)},
            "poling_period_m": self.poling_period_m,
            "source": self.source,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DispersionModel":
        try:
            modes_data = data["modes"]
            modes = tuple(IndexModel.from_dict(modes_data[str(i)]) for i in range(3))
        except (KeyError, TypeError) as e:
            raise ConfigurationError(f"dispersion model is missing mode {e}") from e
        poling = data.get("poling_period_m")
        if poling is not None and poling != "auto":
            poling = float(poling)
        return cls(
            modes=modes,  # type: ignore[arg-type]
            poling_period_m=poling,
            source=str(data.get("source", "")),
            provenance=str(data.get("provenance", "")),
        )


@dataclass(frozen=True)
class ProcessGeometry:
    """Crystal length, pulse time scale and central vacuum wavelengths."""

    length_m: float
    tau_s: float
    wavelengths_m: Tuple[float, float, float]

    def __post_init__(self) -> None:
        if not self.length_m > 0 or not self.tau_s > 0:
            raise DomainError("crystal length and tau must be positive")
        l0, l1, l2 = self.wavelengths_m
        if min(l0, l1, l2) <= 0:
            raise DomainError("central wavelengths must be positive")
        lhs = 1.0 / l0
        rhs = 1.0 / l1 + 1.0 / l2
        if abs(lhs - rhs) > 1e-6 * lhs:
            raise DomainError(
                "central frequencies violate energy conservation "
                f"(1/l0 = {lhs:.6e}, 1/l1 + 1/l2 = {rhs:.6e})"
            )

    @property
    def central_omegas(self) -> Tuple[float, float, float]:
        from scipy.constants import c

        return tuple(2.0 * np.pi * c / lam for lam in self.wavelengths_m)  # type: ignore[return-value]

    def with_tau(self, tau_s: float) -> "ProcessGeometry":
        return replace(self, tau_s=float(tau_s))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "length_m": self.length_m,
            "tau_s": self.tau_s,
            "wavelengths_m": list(self.wavelengths_m),
        }


@dataclass(frozen=True)
class MismatchParameters:
    """Dimensionless group-velocity mismatch parameters."""

    r: float
    s: float
    degenerate: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SweepRow:
    """One row of a purity-versus-r sweep."""

    r: float
    s: float
    tau_s: float
    purity_gvd: float
    purity_linear: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class RunConfig:
    """Resolved parameters of a CLI run, echoed into every output file."""

    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    output: Optional[str] = None
    log_level: str = "INFO"
    version: str = ""

    def __post_init__(self) -> None:
        if not self.command:
            raise ValueError("RunConfig needs a command name")
        if not self.version:
            from .config import VERSION

            self.version = VERSION

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
