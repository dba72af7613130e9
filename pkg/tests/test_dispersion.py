#!/usr/bin/env python3
"""Tests for dispersion models, (r, s) from physics and GVD-curved JSAs."""

import numpy as np
import pytest
from scipy.constants import c as SPEED_OF_LIGHT

from jsa_forge.core import (
    ConfigurationError,
    DegenerateGroupVelocities,
    DispersionModel,
    DomainError,
    InvalidSpectralFn,
    ModelRangeError,
    SpectralFn,
)
from jsa_forge.physics.dispersion import (
    build_jsa_gvd,
    build_jsa_linearized,
    central_poling_period,
    grating_wavevector,
    group_index,
    group_velocity,
    linear_mismatch,
    load_default_model,
    load_dispersion_model,
    phase_mismatch_full,
    purity_vs_r_sweep,
    rs_from_physics,
    sweep_taus_for_r,
    wavevector,
)
from jsa_forge.physics.gaussian_analytics import gaussian_purity
from jsa_forge.physics.spectral_core import jsa_l2_distance, purity_schmidt


def constant_model(n0: float, n1: float, n2: float) -> DispersionModel:
    """Model with wavelength-independent indices."""
    modes = {
        str(i): {"form": "constant", "n": n, "valid_um": [0.2, 10.0]}
        for i, n in enumerate((n0, n1, n2))
    }
    return DispersionModel.from_dict({"modes": modes, "poling_period_m": "auto"})


def offsets(geom, x, y):
    """Pump, signal and idler frequencies at dimensionless offsets (x, y)."""
    _, w1, w2 = geom.central_omegas
    omega1 = w1 + np.asarray(x) / geom.tau_s
    omega2 = w2 + np.asarray(y) / geom.tau_s
    return omega1 + omega2, omega1, omega2


# (A, B, C, D, E, F) of n^2 = A + B/(1 - C/l^2) + D/(1 - E/l^2) - F l^2
KOENIG_NY = (2.09930, 0.922683, 0.0467695, 0.0, 0.0, 0.0138408)
FRADKIN_NZ = (2.12725, 1.18431, 0.0514852, 0.6603, 100.00507, 0.00968956)


def cited_group_index(lam_um, a, b, c, d, e, f, h=1e-4):
    """n - lambda dn/dlambda with a central difference of the published fit."""

    def n(lam):
        return np.sqrt(a + b / (1 - c / lam**2) + d / (1 - e / lam**2) - f * lam**2)

    return n(lam_um) - lam_um * (n(lam_um + h) - n(lam_um - h)) / (2 * h)


@pytest.fixture
def ktp_model():
    """Packaged KTP Sellmeier model."""
    return load_default_model()


class TestModelLoading:
    """Test dispersion model files."""

    def test_packaged_model(self, ktp_model):
        """The packaged model has three cited Sellmeier modes and automatic poling."""
        assert ktp_model.poling_period_m == "auto"
        assert all(mode.form == "sellmeier-2pole" for mode in ktp_model.modes)
        assert "KTP" in ktp_model.source
        assert "doi:10.1063/1.1668320" in ktp_model.provenance
        assert "doi:10.1063/1.123408" in ktp_model.provenance
        assert ktp_model.modes[0] == ktp_model.modes[2]

    def test_load_from_file(self, linear_model_file):
        """A model file on disk loads with its poling setting."""
        model = load_dispersion_model(linear_model_file)
        assert model.modes[1].form == "linear"

    def test_missing_file(self, tmp_path):
        """A missing model file raises ConfigurationError."""
        with pytest.raises(ConfigurationError):
            load_dispersion_model(tmp_path / "absent.json")


class TestWavevectors:
    """Test k(omega), group index and group velocity."""

    def test_group_index_matches_numerical_derivative(self, ktp_model, ktp_geometry):
        """c dk/domega by central differences equals the analytic group index."""
        _, w1, _ = ktp_geometry.central_omegas
        h = w1 * 1e-5
        numeric = SPEED_OF_LIGHT * (
            wavevector(ktp_model, 1, w1 + h) - wavevector(ktp_model, 1, w1 - h)
        ) / (2 * h)
        assert float(group_index(ktp_model, 1, w1)) == pytest.approx(float(numeric), rel=1e-6)
        assert float(group_velocity(ktp_model, 1, w1)) == pytest.approx(
            SPEED_OF_LIGHT / float(numeric), rel=1e-6
        )

    def test_linear_model_group_index(self, linear_model, linear_geometry):
        """The linear form has the configured group index everywhere."""
        omegas = linear_geometry.central_omegas
        for mode, expected in enumerate((1.90, 1.85, 1.95)):
            assert float(group_index(linear_model, mode, omegas[mode])) == pytest.approx(expected)

    def test_outside_window(self, ktp_model):
        """Wavelengths outside the validity window raise ModelRangeError."""
        omega = 2 * np.pi * SPEED_OF_LIGHT / 6.0e-6
        with pytest.raises(ModelRangeError, match="outside model window"):
            wavevector(ktp_model, 1, omega)

    def test_bad_mode(self, ktp_model):
        """Only modes 0, 1 and 2 exist."""
        with pytest.raises(DomainError):
            wavevector(ktp_model, 3, 1e15)


class TestRsFromPhysics:
    """Test group-velocity mismatch parameters."""

    def test_linear_model(self, linear_model, linear_geometry):
        """The dispersionless test crystal has r = -s = -0.8339."""
        mismatch = rs_from_physics(linear_model, linear_geometry)
        scale = linear_geometry.length_m / (2 * SPEED_OF_LIGHT * linear_geometry.tau_s)
        assert mismatch.r == pytest.approx(-0.05 * scale)
        assert mismatch.s == pytest.approx(0.05 * scale)
        assert not mismatch.degenerate

    def test_equal_group_velocities_are_degenerate(self, linear_geometry):
        """Identical indices give r = s = 0."""
        mismatch = rs_from_physics(constant_model(1.8, 1.8, 1.8), linear_geometry)
        assert mismatch.degenerate

    def test_idler_matched_to_pump(self, linear_geometry):
        """v_0 = v_2 gives s = 0."""
        mismatch = rs_from_physics(constant_model(1.8, 1.7, 1.8), linear_geometry)
        assert mismatch.s == pytest.approx(0.0, abs=1e-12)
        assert mismatch.r < 0

    def test_ktp_reference_point(self, ktp_model, ktp_geometry):
        """r and s follow from the published n_y and n_z fits."""
        ng_pump = cited_group_index(1.211, *KOENIG_NY)
        ng_signal = cited_group_index(2.422, *FRADKIN_NZ)
        ng_idler = cited_group_index(2.422, *KOENIG_NY)
        scale = ktp_geometry.length_m / (2 * SPEED_OF_LIGHT * ktp_geometry.tau_s)
        mismatch = rs_from_physics(ktp_model, ktp_geometry)
        assert mismatch.r == pytest.approx(scale * (ng_signal - ng_pump), rel=1e-6)
        assert mismatch.s == pytest.approx(scale * (ng_idler - ng_pump), rel=1e-4)
        assert mismatch.r == pytest.approx(99.5, rel=0.01)
        assert mismatch.s == pytest.approx(-2.65, rel=0.02)
        assert abs(mismatch.s) < 0.05 * abs(mismatch.r)

    def test_ktp_pulse_for_r_23_4(self, ktp_model, ktp_geometry):
        """A 2 cm crystal reaches r = 23.4 at a pulse time scale near 123 fs."""
        (tau,) = sweep_taus_for_r(ktp_model, ktp_geometry, [23.4])
        assert tau == pytest.approx(1.233e-13, rel=0.01)
        mismatch = rs_from_physics(ktp_model, ktp_geometry.with_tau(tau))
        assert mismatch.r == pytest.approx(23.4)
        assert abs(mismatch.s) < 0.05 * abs(mismatch.r)

    def test_r_scales_inversely_with_tau(self, ktp_model, ktp_geometry):
        """Halving tau doubles r."""
        base = rs_from_physics(ktp_model, ktp_geometry).r
        halved = rs_from_physics(ktp_model, ktp_geometry.with_tau(ktp_geometry.tau_s / 2)).r
        assert halved == pytest.approx(2 * base)


class TestPhaseMismatch:
    """Test the full and linearized mismatch."""

    def test_central_mismatch_vanishes_with_auto_poling(self, ktp_model, ktp_geometry):
        """Automatic poling phase-matches the central frequencies."""
        delta = phase_mismatch_full(ktp_model, ktp_geometry, *offsets(ktp_geometry, 0.0, 0.0))
        assert float(delta) == pytest.approx(0.0, abs=1e-6)

    def test_grating_settings(self, linear_model_data, linear_geometry):
        """Unpoled crystals have K = 0, explicit periods give 2 pi / period."""
        linear_model_data["poling_period_m"] = None
        unpoled = DispersionModel.from_dict(linear_model_data)
        assert grating_wavevector(unpoled, linear_geometry) == 0.0
        linear_model_data["poling_period_m"] = 2e-5
        poled = DispersionModel.from_dict(linear_model_data)
        assert grating_wavevector(poled, linear_geometry) == pytest.approx(2 * np.pi / 2e-5)

    def test_central_poling_period(self, ktp_model, ktp_geometry):
        """The period that matches the centre reproduces the automatic grating."""
        period = central_poling_period(ktp_model, ktp_geometry)
        assert period > 0
        assert 2 * np.pi / period == pytest.approx(
            abs(grating_wavevector(ktp_model, ktp_geometry)), rel=1e-12
        )

    def test_linear_model_is_exactly_linear(self, linear_model, linear_geometry):
        """Without GVD the full mismatch equals -(r x + s y)."""
        mismatch = rs_from_physics(linear_model, linear_geometry)
        x = np.linspace(-5.0, 5.0, 11)[:, None]
        y = np.linspace(-4.0, 4.0, 9)[None, :]
        full = phase_mismatch_full(linear_model, linear_geometry, *offsets(linear_geometry, x, y))
        np.testing.assert_allclose(
            full, linear_mismatch(mismatch.r, mismatch.s, x, y), atol=1e-10
        )

    def test_ktp_deviation_is_second_order(self, ktp_model, ktp_geometry):
        """Full minus linear mismatch grows with slope 2 on a log-log scale."""
        mismatch = rs_from_physics(ktp_model, ktp_geometry)
        steps = np.array([0.05, 0.1, 0.2, 0.4])
        deviations = []
        for step in steps:
            full = phase_mismatch_full(
                ktp_model, ktp_geometry, *offsets(ktp_geometry, step, step)
            )
            deviations.append(abs(float(full) - float(linear_mismatch(mismatch.r, mismatch.s, step, step))))
        slope = np.polyfit(np.log(steps), np.log(deviations), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.1)


class TestGvdJsa:
    """Test JSAs built from the full mismatch."""

    @pytest.mark.parametrize("profile", ["tophat", "gaussian"])
    def test_linear_model_matches_linearized(self, linear_model, linear_geometry, gaussian_fn, profile):
        """Without GVD both constructions give the same JSA."""
        gvd = build_jsa_gvd(linear_model, linear_geometry, profile, gaussian_fn)
        linear = build_jsa_linearized(
            linear_model, linear_geometry, profile, gaussian_fn, gvd.x_grid, gvd.y_grid
        )
        assert jsa_l2_distance(gvd, linear) < 1e-8

    def test_chi3_squares_the_pump(self, linear_model, linear_geometry):
        """Four-wave mixing uses the squared pump in both constructions."""
        pump = SpectralFn.sech(1.0)
        gvd = build_jsa_gvd(linear_model, linear_geometry, "gaussian", pump, chi3=True)
        linear = build_jsa_linearized(
            linear_model, linear_geometry, "gaussian", pump, gvd.x_grid, gvd.y_grid, chi3=True
        )
        assert jsa_l2_distance(gvd, linear) < 1e-8
        assert gvd.label.endswith("sech^2")

    def test_unknown_profile(self, linear_model, linear_geometry, gaussian_fn):
        """Only tophat and gaussian profiles exist."""
        with pytest.raises(InvalidSpectralFn):
            build_jsa_gvd(linear_model, linear_geometry, "lorentzian", gaussian_fn)

    def test_degenerate_model(self, linear_geometry, gaussian_fn):
        """Equal group velocities raise DegenerateGroupVelocities."""
        with pytest.raises(DegenerateGroupVelocities):
            build_jsa_gvd(constant_model(1.8, 1.8, 1.8), linear_geometry, "tophat", gaussian_fn)

    @pytest.mark.slow
    def test_ktp_gvd_lowers_purity(self, ktp_model, ktp_geometry, gaussian_fn):
        """At r = 23.4 the curvature costs purity."""
        (tau,) = sweep_taus_for_r(ktp_model, ktp_geometry, [23.4])
        point = ktp_geometry.with_tau(tau)
        gvd = build_jsa_gvd(ktp_model, point, "tophat", gaussian_fn)
        linear = build_jsa_linearized(
            ktp_model, point, "tophat", gaussian_fn, gvd.x_grid, gvd.y_grid
        )
        assert purity_schmidt(gvd).purity < purity_schmidt(linear).purity


class TestSweeps:
    """Test tau selection and purity sweeps."""

    def test_taus_for_targets(self, linear_model, linear_geometry):
        """Requested r values are hit by the returned taus."""
        targets = [-1.0, -2.0, -4.0]
        taus = sweep_taus_for_r(linear_model, linear_geometry, targets)
        for target, tau in zip(targets, taus):
            r = rs_from_physics(linear_model, linear_geometry.with_tau(tau)).r
            assert r == pytest.approx(target)

    def test_unreachable_sign(self, linear_model, linear_geometry):
        """r cannot change sign by changing tau."""
        with pytest.raises(DomainError):
            sweep_taus_for_r(linear_model, linear_geometry, [1.0])

    def test_linear_sweep_columns_agree(self, linear_model, linear_geometry, gaussian_fn):
        """Without GVD both purity columns agree and match the closed form."""
        taus = sweep_taus_for_r(linear_model, linear_geometry, [-0.5, -1.0, -2.0])
        rows = purity_vs_r_sweep(
            linear_model, linear_geometry, taus, "gaussian", SpectralFn.gaussian(2.0), max_workers=2
        )
        assert [row.tau_s for row in rows] == taus
        for row in rows:
            assert row.purity_gvd == pytest.approx(row.purity_linear, abs=1e-8)
        unit = purity_vs_r_sweep(linear_model, linear_geometry, taus, "gaussian", gaussian_fn)
        for row in unit:
            assert row.purity_linear == pytest.approx(gaussian_purity(row.r, row.s), abs=1e-4)

    def test_non_monotone_taus(self, linear_model, linear_geometry, gaussian_fn):
        """The tau grid must be strictly monotone."""
        with pytest.raises(DomainError):
            purity_vs_r_sweep(
                linear_model, linear_geometry, [1e-13, 2e-13, 1.5e-13], "tophat", gaussian_fn
            )

    def test_empty_sweep(self, linear_model, linear_geometry, gaussian_fn):
        """No taus give no rows."""
        assert purity_vs_r_sweep(linear_model, linear_geometry, [], "tophat", gaussian_fn) == []

    @pytest.mark.slow
    def test_narrow_band_limit(self, ktp_model, ktp_geometry, gaussian_fn):
        """At r = 2 GVD hardly changes the purity."""
        taus = sweep_taus_for_r(ktp_model, ktp_geometry, [2.0])
        (row,) = purity_vs_r_sweep(ktp_model, ktp_geometry, taus, "tophat", gaussian_fn)
        assert row.purity_gvd == pytest.approx(row.purity_linear, abs=1e-3)

    @pytest.mark.slow
    def test_gvd_purity_has_single_turning_point(self, ktp_model, ktp_geometry, gaussian_fn):
        """The GVD purity rises then falls at most once across the sweep."""
        taus = sweep_taus_for_r(ktp_model, ktp_geometry, list(np.linspace(2.0, 30.0, 8)))
        rows = purity_vs_r_sweep(ktp_model, ktp_geometry, taus, "tophat", gaussian_fn)
        signs = np.sign(np.diff([row.purity_gvd for row in rows]))
        assert np.count_nonzero(np.diff(signs)) <= 1
