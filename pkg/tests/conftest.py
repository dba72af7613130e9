#!/usr/bin/env python3
"""Pytest configuration and shared fixtures for all tests."""

import json
import os
from pathlib import Path
from unittest.mock import Mock

import pytest
from hypothesis import HealthCheck, settings

from jsa_forge.core import DispersionModel, ProcessGeometry, SpectralFn

# Function-scoped autouse fixtures are harmless here: every example only
# reads them.
settings.register_profile(
    "fast",
    max_examples=20,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow],
)
settings.register_profile(
    "ci",
    max_examples=100,
    deadline=None,
    suppress_health_check=[HealthCheck.function_scoped_fixture, HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


LINEAR_MODEL = {
    "source": "dispersionless test crystal",
    "provenance": "k exactly linear in omega for every mode",
    "poling_period_m": "auto",
    "modes": {
        "0": {"form": "linear", "n_group": 1.90, "n_phase": 1.91, "ref_um": 1.0,
              "valid_um": [0.2, 10.0]},
        "1": {"form": "linear", "n_group": 1.85, "n_phase": 1.86, "ref_um": 1.0,
              "valid_um": [0.2, 10.0]},
        "2": {"form": "linear", "n_group": 1.95, "n_phase": 1.96, "ref_um": 1.0,
              "valid_um": [0.2, 10.0]},
    },
    "geometry": {
        "length_m": 0.001,
        "tau_s": 1.0e-13,
        "wavelengths_m": [0.8e-6, 1.6e-6, 1.6e-6],
    },
}

KTP_GEOMETRY = ProcessGeometry(
    length_m=0.02, tau_s=2.9e-14, wavelengths_m=(1.211e-6, 2.422e-6, 2.422e-6)
)


@pytest.fixture
def gaussian_fn():
    """Unit-width Gaussian, the oscillator ground state."""
    return SpectralFn.gaussian(1.0)


@pytest.fixture
def sinc_fn():
    """sinc(x)/sqrt(pi) phase-matching function."""
    return SpectralFn.sinc(1.0)


@pytest.fixture
def optimal_sinc_fn():
    """sinc phase matching with the width that best overlaps the vacuum."""
    return SpectralFn.sinc(0.71)


@pytest.fixture
def linear_model_data():
    """Raw JSON of a dispersionless (GVD-free) model."""
    return json.loads(json.dumps(LINEAR_MODEL))


@pytest.fixture
def linear_model(linear_model_data):
    """Dispersionless model with r = -s."""
    return DispersionModel.from_dict(linear_model_data)


@pytest.fixture
def linear_geometry(linear_model_data):
    """Geometry stored alongside the dispersionless model."""
    geometry = linear_model_data["geometry"]
    return ProcessGeometry(
        geometry["length_m"], geometry["tau_s"], tuple(geometry["wavelengths_m"])
    )


@pytest.fixture
def linear_model_file(tmp_path, linear_model_data):
    """Dispersionless model written to a JSON file."""
    path = tmp_path / "linear_model.json"
    path.write_text(json.dumps(linear_model_data))
    return path


@pytest.fixture
def ktp_geometry():
    """Crystal length, tau and wavelengths of the packaged KTP setup."""
    return KTP_GEOMETRY


@pytest.fixture
def output_dir(tmp_path):
    """Directory for CLI result files."""
    path = tmp_path / "results"
    path.mkdir()
    return path


@pytest.fixture
def mock_logger():
    """Provide mocked logger for testing."""
    logger = Mock()
    logger.info = Mock()
    logger.warning = Mock()
    logger.error = Mock()
    logger.debug = Mock()
    return logger


@pytest.fixture(autouse=True)
def setup_test_environment(tmp_path, monkeypatch):
    """Set up test environment for all tests."""
    # Set temporary directory as working directory
    monkeypatch.chdir(tmp_path)

    # Keep restart and sweep pools small and reproducible
    monkeypatch.setenv("JSA_FORGE_THREADS", "2")
    monkeypatch.setenv("TESTING", "true")


def read_csv_rows(path: Path):
    """Rows of a results CSV, skipping ``#`` comment lines."""
    import csv

    lines = [line for line in path.read_text().splitlines() if not line.startswith("#")]
    return list(csv.DictReader(lines))


# Configure pytest markers
def pytest_configure(config):
    """Configure pytest markers."""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: Integration tests")
    config.addinivalue_line("markers", "e2e: End-to-end tests")
    config.addinivalue_line("markers", "slow: Slow running tests")
    config.addinivalue_line("markers", "property: Hypothesis property suites")


# Test collection configuration
def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers based on test names."""
    for item in items:
        # Add markers based on test file names
        if "test_integration" in item.nodeid:
            item.add_marker(pytest.mark.integration)
        elif "test_cli_interface" in item.nodeid or "test_core_" in item.nodeid:
            item.add_marker(pytest.mark.unit)
        else:
            item.add_marker(pytest.mark.unit)

        # Add markers based on test names
        if "property" in item.nodeid.lower():
            item.add_marker(pytest.mark.property)
        if "e2e" in item.name.lower() or "end_to_end" in item.name.lower():
            item.add_marker(pytest.mark.e2e)
            item.add_marker(pytest.mark.slow)
