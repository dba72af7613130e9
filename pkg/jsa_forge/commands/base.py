#!/usr/bin/env python3
"""Command base class, shared flag groups and result-file helpers."""

import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from ..core import (
    OUTPUT_DIR,
    ConfigurationError,
    DispersionModel,
    Grid1D,
    JointAmplitude,
    ProcessGeometry,
    RunConfig,
    SpectralFn,
    exit_code_for,
    get_logger,
    load_json_file,
    save_joint_amplitude_binary,
    save_joint_amplitude_csv,
    save_json_file,
)
from ..core.config import get_dispersion_model_path
from ..physics.dispersion import PMF_PROFILES
from ..physics.spectral_core import default_grids, spectral_fn_from_name

SPECTRAL_CHOICES = ["gaussian", "sinc", "sech", "hermite"]

# Top-level CLI flags, kept out of the per-command parameter echo
GLOBAL_FLAGS = ("command", "json", "quiet", "timing", "log_level", "output_dir")


class BaseCommand(ABC):
    """A jsa-forge subcommand.

    Subclasses set ``name``, declare their flags in ``add_parser_arguments``
    and return a ``CommandResult`` dict from ``execute``. Errors are caught
    inside ``execute`` and turned into a failed result with ``failure``.
    """

    name = "base"

    def __init__(
        self, output_dir: Optional[Path] = None, logger: Optional[logging.Logger] = None
    ) -> None:
        self.output_dir = Path(output_dir) if output_dir else OUTPUT_DIR
        self.logger = logger or get_logger(__name__)

    @abstractmethod
    def execute(self, args: Any) -> Dict[str, Any]:
        """Run with parsed ``args`` and return ``CommandResult.to_dict()``."""

    @abstractmethod
    def add_parser_arguments(self, parser: Any) -> None:
        """Declare this command's flags on its subparser."""

    # Shared argument groups

    @staticmethod
    def add_spectral_arguments(parser: Any, pmf_default: str = "sinc") -> None:
        """Phase-matching and pump function flags."""
        parser.add_argument(
            "--pmf",
            choices=SPECTRAL_CHOICES,
            default=pmf_default,
            help=f"Phase-matching function (default: {pmf_default})",
        )
        parser.add_argument(
            "--pump",
            choices=SPECTRAL_CHOICES,
            default="gaussian",
            help="Pump spectral amplitude (default: gaussian)",
        )
        parser.add_argument(
            "--alpha",
            type=float,
            default=1.0,
            help="sinc width parameter alpha (default: 1.0)",
        )
        parser.add_argument(
            "--pmf-width", type=float, default=1.0, help="PMF width (default: 1.0)"
        )
        parser.add_argument(
            "--pump-width", type=float, default=1.0, help="Pump width (default: 1.0)"
        )
        parser.add_argument(
            "--chirp",
            type=float,
            default=0.0,
            help="Quadratic spectral phase of a Gaussian pump (default: 0)",
        )
        parser.add_argument(
            "--order",
            type=int,
            default=0,
            help="Hermite order for --pmf/--pump hermite (default: 0)",
        )

    @staticmethod
    def add_rs_arguments(parser: Any, r: float = 1.0, s: float = -1.0) -> None:
        parser.add_argument(
            "--r", type=float, default=r, help=f"Mismatch parameter r (default: {r})"
        )
        parser.add_argument(
            "--s", type=float, default=s, help=f"Mismatch parameter s (default: {s})"
        )

    @staticmethod
    def add_output_arguments(parser: Any, default_name: str) -> None:
        parser.add_argument(
            "--out",
            default=default_name,
            help=f"Output file inside the output directory (default: {default_name})",
        )

    @staticmethod
    def add_dispersion_arguments(parser: Any) -> None:
        """Dispersion model and process geometry flags.

        Geometry flags left unset fall back to the model file's ``geometry``
        entry.
        """
        parser.add_argument(
            "--model",
            type=Path,
            default=None,
            help="Dispersion model JSON (default: packaged KTP model)",
        )
        parser.add_argument("--length", type=float, help="Crystal length in m")
        parser.add_argument("--tau", type=float, help="Pulse time scale tau in s")
        parser.add_argument(
            "--wavelengths",
            type=float,
            nargs=3,
            metavar=("PUMP", "SIGNAL", "IDLER"),
            help="Central vacuum wavelengths in m",
        )
        parser.add_argument(
            "--pmf-profile",
            choices=list(PMF_PROFILES),
            default="tophat",
            help="Crystal profile: tophat (sinc PMF) or gaussian (default: tophat)",
        )
        parser.add_argument(
            "--chi3",
            action="store_true",
            help="Square the pump amplitude (single-pump four-wave mixing)",
        )

    # Helpers

    @staticmethod
    def dispersion_setup(args: Any) -> Tuple[DispersionModel, ProcessGeometry]:
        """Load the dispersion model and resolve the process geometry."""
        path = Path(args.model) if args.model else get_dispersion_model_path()
        raw = load_json_file(path)
        model = DispersionModel.from_dict(raw)
        defaults = raw.get("geometry", {})
        length = args.length if args.length is not None else defaults.get("length_m")
        tau = args.tau if args.tau is not None else defaults.get("tau_s")
        wavelengths = args.wavelengths or defaults.get("wavelengths_m")
        if length is None or tau is None or not wavelengths:
            raise ConfigurationError(
                f"{path} has no geometry; pass --length, --tau and --wavelengths"
            )
        geom = ProcessGeometry(
            length_m=float(length),
            tau_s=float(tau),
            wavelengths_m=tuple(float(w) for w in wavelengths),  # type: ignore[arg-type]
        )
        return model, geom

    @staticmethod
    def spectral_functions(args: Any) -> Tuple[SpectralFn, SpectralFn]:
        """Build the (pmf, pump) pair from the shared spectral flags."""
        pmf = spectral_fn_from_name(
            args.pmf,
            alpha=args.alpha,
            width=args.pmf_width,
            order=args.order,
        )
        pump = spectral_fn_from_name(
            args.pump,
            alpha=args.alpha,
            width=args.pump_width,
            chirp=args.chirp,
            order=args.order,
        )
        return pmf, pump

    @staticmethod
    def grids_for(
        args: Any, pmf: SpectralFn, pump: SpectralFn, r: float, s: float
    ) -> Tuple[Grid1D, Grid1D]:
        """Automatic grids, with the point count overridden by --points."""
        gx, gy = default_grids(pmf, pump, r, s)
        points = getattr(args, "points", None)
        if points:
            gx = Grid1D(gx.min, gx.max, points)
            gy = Grid1D(gy.min, gy.max, points)
        return gx, gy

    def output_path(self, args: Any, default_name: str) -> Path:
        name = getattr(args, "out", None) or default_name
        path = Path(name)
        if path.is_absolute():
            return path
        return self.output_dir / path

    @staticmethod
    def command_parameters(args: Any) -> Dict[str, Any]:
        """Command-specific flags of ``args`` as JSON-ready values."""
        params: Dict[str, Any] = {}
        for key, value in sorted(vars(args).items()):
            if key in GLOBAL_FLAGS:
                continue
            if isinstance(value, Path):
                value = str(value)
            elif isinstance(value, tuple):
                value = list(value)
            params[key] = value
        return params

    def run_config(
        self,
        args: Any,
        parameters: Optional[Dict[str, Any]] = None,
        output: Optional[Path] = None,
    ) -> RunConfig:
        """Resolved run configuration echoed into every output file."""
        if parameters is None:
            parameters = self.command_parameters(args)
        return RunConfig(
            command=self.name,
            parameters=parameters,
            seed=getattr(args, "seed", None),
            output=str(output) if output else None,
            log_level=str(getattr(args, "log_level", "INFO")),
        )

    @staticmethod
    def config_comment(run: RunConfig) -> str:
        """One-line run configuration for CSV comment headers."""
        return "run_config " + json.dumps(run.to_dict(), sort_keys=True, default=str)

    def write_json(self, path: Path, payload: Dict[str, Any], run: RunConfig) -> None:
        save_json_file({**payload, "run_config": run.to_dict()}, path)
        self.logger.info(f"💾 Wrote {path}")

    def write_matrix(
        self, jsa: JointAmplitude, path: Path, fmt: str, run: RunConfig
    ) -> Path:
        header = {"run_config": run.to_dict(), "label": jsa.label}
        if fmt == "csv":
            path = path.with_suffix(".csv")
            save_joint_amplitude_csv(jsa, path, header)
        else:
            path = path.with_suffix(".bin")
            save_joint_amplitude_binary(jsa, path, header)
        self.logger.info(f"💾 Wrote {path}")
        return path

    def failure(self, action: str, exc: BaseException) -> Dict[str, Any]:
        """CommandResult dict for a failed run, with the mapped exit code."""
        error_msg = f"{action} failed: {type(exc).__name__}: {exc}"
        self.logger.error(error_msg)
        return CommandResult(
            success=False, error=error_msg, exit_code=exit_code_for(exc)
        ).to_dict()


@dataclass
class CommandResult:
    """Outcome of one command run, as returned by ``execute``.

    ``exit_code`` defaults to 0 on success and 1 otherwise; failures from
    ``BaseCommand.failure`` carry the code mapped from the exception.
    """

    success: bool
    data: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    message: Optional[str] = None
    exit_code: Optional[int] = None

    def __post_init__(self) -> None:
        if self.data is None:
            self.data = {}
        if self.exit_code is None:
            self.exit_code = 0 if self.success else 1

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "success": self.success,
            "data": self.data,
            "exit_code": self.exit_code,
        }
        if self.error:
            result["error"] = self.error
        if self.message:
            result["message"] = self.message
        return result
