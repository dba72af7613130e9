#!/usr/bin/env python3
"""Utility functions shared by the physics modules and CLI commands.

Logging setup, numerical error translation, theta parsing and the
serialization helpers for JSON, CSV and binary JSA files.
"""

import csv
import json
import logging
import re
from functools import wraps
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

import numpy as np

from .exceptions import ConfigurationError, JsaForgeError, NumericalFailure
from .models import Grid1D, JointAmplitude

F = TypeVar("F", bound=Callable[..., Any])

BINARY_MAGIC = b"JSAF1\n"


def get_logger(name: str) -> logging.Logger:
    """Package logger writing ``LEVEL: message`` lines to stderr.

    The handler is attached once per name and records do not propagate, so
    a root handler installed by ``setup_logging`` never prints them twice.
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
        logger.addHandler(handler)
        logger.setLevel(logging.INFO)
        logger.propagate = False
    return logger


LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def setup_logging(level: str = "INFO") -> None:
    """Set the verbosity of every jsa_forge logger; unknown names fall back to INFO."""
    logger = get_logger(__name__)
    name = str(level).upper()
    if name not in LOG_LEVELS:
        logger.warning(f"⚠️  Unknown log level '{level}', using INFO")
        name = "INFO"

    numeric = getattr(logging, name)
    logging.basicConfig(level=numeric, format="%(name)s %(levelname)s: %(message)s")
    for logger_name in list(logging.root.manager.loggerDict):
        if logger_name.startswith("jsa_forge"):
            logging.getLogger(logger_name).setLevel(numeric)
    logger.debug(f"Log level set to {name}")


def handle_numerical_errors(func: F) -> F:
    """Decorator translating numpy/scipy failures into NumericalFailure.

    Errors from this package pass through untouched.
    """

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        logger = get_logger(func.__module__)
        try:
            return func(*args, **kwargs)
        except JsaForgeError:
            raise
        except np.linalg.LinAlgError as e:
            error_msg = f"Linear algebra failure in {func.__name__}: {e}"
            logger.error(error_msg)
            raise NumericalFailure(error_msg) from e
        except FloatingPointError as e:
            error_msg = f"Floating point error in {func.__name__}: {e}"
            logger.error(error_msg)
            raise NumericalFailure(error_msg) from e

    return wrapper  # type: ignore[return-value]


def exit_code_for(exc: Optional[BaseException]) -> int:
    """Map an exception to the CLI exit code contract (0/1/2/3)."""
    if exc is None:
        return 0
    if isinstance(exc, JsaForgeError):
        return int(exc.exit_code)
    return 1


_THETA_FRACTION = re.compile(r"^\s*([+-]?\d+(?:\.\d+)?)\s*/\s*(\d+(?:\.\d+)?)\s*pi\s*$")


def parse_theta(text: str) -> float:
    """Parse a mixing angle given in radians or as ``"k/32pi"``.

    Example:
        >>> round(parse_theta("8/32pi"), 6)
        0.785398
    """
    match = _THETA_FRACTION.match(str(text))
    if match:
        numerator, denominator = float(match.group(1)), float(match.group(2))
        if denominator == 0:
            raise ValueError(f"invalid theta fraction '{text}'")
        return numerator / denominator * np.pi
    try:
        return float(text)
    except ValueError as e:
        raise ValueError(
            f"theta must be radians or a fraction like '3/32pi', got '{text}'"
        ) from e


def ensure_directory_exists(directory_path: str) -> None:
    Path(directory_path).mkdir(parents=True, exist_ok=True)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def save_json_file(data: Dict[str, Any], file_path: Path) -> None:
    """Save a JSON document with sorted keys so reruns are byte-identical."""
    path = Path(file_path)
    ensure_directory_exists(str(path.parent))
    with path.open("w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")


def load_json_file(file_path: Path) -> Dict[str, Any]:
    """Load a JSON document, raising ConfigurationError on bad input."""
    path = Path(file_path)
    if not path.exists():
        raise ConfigurationError(f"File not found: {path}")
    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Invalid JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path} must contain a JSON object")
    return data


def save_csv_rows(
    rows: Iterable[Dict[str, Any]],
    file_path: Path,
    fieldnames: Sequence[str],
    comments: Optional[List[str]] = None,
) -> None:
    """Write dict rows as CSV, preceded by optional ``#`` comment lines."""
    path = Path(file_path)
    ensure_directory_exists(str(path.parent))
    with path.open("w", encoding="utf-8", newline="") as f:
        for line in comments or []:
            f.write(f"# {line}\n")
        writer = csv.DictWriter(f, fieldnames=list(fieldnames), extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _format_cell(row.get(k)) for k in fieldnames})


def _format_cell(value: Any) -> Any:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return value


def save_joint_amplitude_csv(
    jsa: JointAmplitude, file_path: Path, header: Optional[Dict[str, Any]] = None
) -> None:
    """Write a JSA as long-format CSV with columns x, y, re, im.

    The header dictionary (grids and run configuration) goes into a single
    ``#`` comment line as JSON.
    """
    path = Path(file_path)
    ensure_directory_exists(str(path.parent))
    meta = {"x_grid": jsa.x_grid.to_dict(), "y_grid": jsa.y_grid.to_dict()}
    meta.update(header or {})
    xs = jsa.x_grid.points
    ys = jsa.y_grid.points
    with path.open("w", encoding="utf-8", newline="") as f:
        f.write("# " + json.dumps(meta, sort_keys=True, default=_json_default) + "\n")
        writer = csv.writer(f)
        writer.writerow(["x", "y", "re", "im"])
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                v = jsa.values[i, j]
                writer.writerow(
                    [repr(float(x)), repr(float(y)), repr(float(v.real)), repr(float(v.imag))]
                )


def save_joint_amplitude_binary(
    jsa: JointAmplitude, file_path: Path, header: Optional[Dict[str, Any]] = None
) -> None:
    """Write a JSA as a JSON header line plus little-endian float64 re/im pairs."""
    path = Path(file_path)
    ensure_directory_exists(str(path.parent))
    meta = {
        "x_grid": jsa.x_grid.to_dict(),
        "y_grid": jsa.y_grid.to_dict(),
        "dtype": "<f8",
        "layout": "row-major x then y, interleaved re/im",
    }
    meta.update(header or {})
    payload = np.empty(jsa.values.shape + (2,), dtype="<f8")
    payload[..., 0] = jsa.values.real
    payload[..., 1] = jsa.values.imag
    encoded = json.dumps(meta, sort_keys=True, default=_json_default).encode("utf-8")
    with path.open("wb") as f:
        f.write(BINARY_MAGIC)
        f.write(encoded + b"\n")
        f.write(payload.tobytes(order="C"))


def load_joint_amplitude(file_path: Path) -> JointAmplitude:
    """Read a JSA written by either of the save functions."""
    path = Path(file_path)
    if not path.exists():
        raise ConfigurationError(f"File not found: {path}")
    with path.open("rb") as f:
        first = f.readline()
        if first == BINARY_MAGIC:
            meta = json.loads(f.readline().decode("utf-8"))
            raw = f.read()
            return _jsa_from_binary(meta, raw, path)
    return _jsa_from_csv(path)


def _jsa_from_binary(meta: Dict[str, Any], raw: bytes, path: Path) -> JointAmplitude:
    gx = Grid1D.from_dict(meta["x_grid"])
    gy = Grid1D.from_dict(meta["y_grid"])
    data = np.frombuffer(raw, dtype="<f8")
    expected = gx.n_points * gy.n_points * 2
    if data.size != expected:
        raise ConfigurationError(
            f"{path}: expected {expected} float64 values, found {data.size}"
        )
    pairs = data.reshape(gx.n_points, gy.n_points, 2)
    return JointAmplitude(pairs[..., 0] + 1j * pairs[..., 1], gx, gy)


def _jsa_from_csv(path: Path) -> JointAmplitude:
    with path.open("r", encoding="utf-8") as f:
        first = f.readline()
        if not first.startswith("#"):
            raise ConfigurationError(f"{path}: missing JSA header line")
        try:
            meta = json.loads(first[1:])
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path}: invalid JSA header: {e}") from e
        gx = Grid1D.from_dict(meta["x_grid"])
        gy = Grid1D.from_dict(meta["y_grid"])
        reader = csv.DictReader(f)
        missing = {"x", "y", "re", "im"} - set(reader.fieldnames or [])
        if missing:
            raise ConfigurationError(f"{path}: missing CSV columns {sorted(missing)}")
        re_vals = []
        im_vals = []
        for row in reader:
            re_vals.append(float(row["re"]))
            im_vals.append(float(row["im"]))
    if len(re_vals) != gx.n_points * gy.n_points:
        raise ConfigurationError(
            f"{path}: expected {gx.n_points * gy.n_points} rows, found {len(re_vals)}"
        )
    values = (np.asarray(re_vals) + 1j * np.asarray(im_vals)).reshape(
        gx.n_points, gy.n_points
    )
    return JointAmplitude(values, gx, gy)
