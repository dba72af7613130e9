#!/usr/bin/env python3
"""End-to-end tests that drive the CLI and read back the result files."""

import json

import numpy as np
import pytest
from conftest import read_csv_rows

from jsa_forge.core import load_joint_amplitude
from jsa_forge.jsa_forge_cli import JsaForgeCLI
from jsa_forge.physics.gaussian_analytics import gaussian_purity

IGNORE_TRUNCATION = "ignore::jsa_forge.core.exceptions.TruncationWarning"


def run_cli(output_dir, *argv):
    """Run one command quietly and return its exit code."""
    with pytest.raises(SystemExit) as excinfo:
        JsaForgeCLI().run(["--quiet", "--output-dir", str(output_dir), *argv])
    return excinfo.value.code


def load_record(path):
    """Parsed JSON result file."""
    return json.loads(path.read_text())


class TestJsaWorkflow:
    """Build a JSA, write it and measure it again from disk."""

    def test_binary_output(self, output_dir):
        """jsa writes a binary matrix and a JSON record with the run configuration."""
        code = run_cli(
            output_dir, "jsa", "--pmf", "gaussian", "--pump", "gaussian", "--r", "1", "--s", "0"
        )
        assert code == 0

        record = load_record(output_dir / "jsa.json")
        assert record["purity"] == pytest.approx(gaussian_purity(1.0, 0.0), abs=1e-4)
        assert record["run_config"]["command"] == "jsa"
        assert record["run_config"]["parameters"]["pmf"] == "gaussian"

        jsa = load_joint_amplitude(output_dir / "jsa.bin")
        assert jsa.values.shape == (
            record["grid"]["x"]["n_points"],
            record["grid"]["y"]["n_points"],
        )

    def test_csv_round_trip_through_purity(self, output_dir):
        """purity --input reproduces the purity of a CSV matrix written by jsa."""
        code = run_cli(
            output_dir,
            "jsa",
            "--pmf",
            "gaussian",
            "--pump",
            "gaussian",
            "--r",
            "1",
            "--s",
            "0",
            "--points",
            "81",
            "--format",
            "csv",
        )
        assert code == 0
        csv_path = output_dir / "jsa.csv"
        header = csv_path.read_text().splitlines()[0]
        assert header.startswith("# ")
        assert "run_config" in json.loads(header[2:])

        code = run_cli(output_dir, "purity", "--input", str(csv_path), "--oracle")
        assert code == 0
        written = load_record(output_dir / "jsa.json")
        measured = load_record(output_dir / "purity.json")
        assert measured["purity"] == pytest.approx(written["purity"], abs=1e-10)
        assert measured["oracle_delta"] < 1e-6

    def test_missing_input_file(self, output_dir):
        """A missing --input file is a configuration error."""
        assert run_cli(output_dir, "purity", "--input", "absent.csv") == 2


class TestGaussianPurityWorkflow:
    """gaussian-purity with the numerical cross-check."""

    def test_check_against_grid(self, output_dir):
        """--check agrees with the closed form."""
        code = run_cli(output_dir, "gaussian-purity", "--r", "3", "--s", "-0.2", "--check")
        assert code == 0
        record = load_record(output_dir / "gaussian_purity.json")
        assert record["purity"] == pytest.approx(gaussian_purity(3.0, -0.2))
        assert record["grid_delta"] < 1e-4
        assert record["separable"] is False


@pytest.mark.filterwarnings(IGNORE_TRUNCATION)
class TestMapCheckWorkflow:
    """map-check on the Gaussian case."""

    def test_gaussian_mapping(self, output_dir):
        """Direct and synthesized JSAs agree for Gaussian inputs."""
        code = run_cli(
            output_dir,
            "map-check",
            "--pmf",
            "gaussian",
            "--pump",
            "gaussian",
            "--r",
            "1",
            "--s",
            "-0.5",
            "--n-trunc",
            "20",
        )
        assert code == 0
        record = load_record(output_dir / "map_check.json")
        assert record["l2_error"] < 1e-4
        assert record["purity_delta"] < 1e-4


class TestOptimizeWorkflow:
    """optimize runs are reproducible."""

    OPTIMIZE_ARGS = [
        "optimize",
        "--pmf",
        "gaussian",
        "--theta",
        "1/8pi",
        "--n-trunc",
        "8",
        "--restarts",
        "2",
        "--max-iters",
        "200",
        "--seed",
        "3",
    ]

    def test_byte_identical_results(self, output_dir):
        """Two runs with the same seed write the same results.json."""
        assert run_cli(output_dir, *self.OPTIMIZE_ARGS) == 0
        first = (output_dir / "results.json").read_bytes()
        assert run_cli(output_dir, *self.OPTIMIZE_ARGS) == 0
        second = (output_dir / "results.json").read_bytes()
        assert first == second

        record = json.loads(first)
        assert record["best_purity"] == pytest.approx(1.0, abs=1e-8)
        assert record["run_config"]["seed"] == 3


class TestGvdSweepWorkflow:
    """gvd-sweep with a dispersionless model file."""

    def test_linear_model_columns_agree(self, output_dir, linear_model_file):
        """Without GVD the full and linearized purities coincide."""
        code = run_cli(
            output_dir,
            "gvd-sweep",
            "--model",
            str(linear_model_file),
            "--r-min",
            "1",
            "--r-max",
            "3",
            "--r-points",
            "3",
        )
        assert code == 0
        csv_path = output_dir / "gvd_sweep.csv"
        assert csv_path.read_text().startswith("# run_config ")

        rows = read_csv_rows(csv_path)
        assert len(rows) == 3
        for row in rows:
            assert float(row["purity_gvd"]) == pytest.approx(
                float(row["purity_linear"]), abs=1e-8
            )
        np.testing.assert_allclose(
            [abs(float(row["r"])) for row in rows], [1.0, 2.0, 3.0], rtol=1e-6
        )
        assert (output_dir / "gvd_sweep.json").exists()

    def test_bad_range(self, output_dir, linear_model_file):
        """--r-min above --r-max is an input error."""
        code = run_cli(
            output_dir,
            "gvd-sweep",
            "--model",
            str(linear_model_file),
            "--r-min",
            "3",
            "--r-max",
            "1",
        )
        assert code == 2


class TestFcConvertWorkflow:
    """fc-convert against SPDC with the conjugated pump."""

    def test_chirped_pump(self, output_dir):
        """The transfer function purity equals the conjugate-pump SPDC purity."""
        code = run_cli(
            output_dir,
            "fc-convert",
            "--pmf",
            "gaussian",
            "--pump",
            "gaussian",
            "--chirp",
            "0.5",
            "--r",
            "2",
            "--s",
            "-0.3",
            "--points",
            "121",
        )
        assert code == 0
        record = load_record(output_dir / "fc_transfer.json")
        assert record["pump_is_real"] is False
        assert record["purity_delta"] < 1e-8
        assert (output_dir / "fc_transfer.bin").exists()
