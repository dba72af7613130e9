#!/usr/bin/env python3
"""Tests for JSA construction and Schmidt purity on grids."""

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from jsa_forge.core import (
    DegenerateGroupVelocities,
    Grid1D,
    InvalidSpectralFn,
    JointAmplitude,
    SpectralFn,
    UndefinedAngle,
)
from jsa_forge.physics.gaussian_analytics import gaussian_purity
from jsa_forge.physics.perturbative import sinc_gaussian_purity_s0
from jsa_forge.physics.spectral_core import (
    adaptive_grids,
    build_jsa,
    default_grids,
    jsa_l2_distance,
    pmf_angle,
    purity_integral,
    purity_schmidt,
    schmidt_decompose,
    spectral_fn_from_name,
    to_frequency_conversion,
    window_grids,
)


class TestPmfAngle:
    """Test the phase-matching ridge angle."""

    def test_symmetric_case(self):
        """r = -s = 1 gives pi/4."""
        assert pmf_angle(1.0, -1.0) == pytest.approx(np.pi / 4)

    def test_same_sign(self):
        """r = 1, s = 0.5 gives atan(-0.5)."""
        assert pmf_angle(1.0, 0.5) == pytest.approx(np.arctan(-0.5))

    def test_undefined_for_zero_r(self):
        """r = 0 has no angle."""
        with pytest.raises(UndefinedAngle):
            pmf_angle(0.0, 1.0)


class TestDefaultGrids:
    """Test automatic grid selection."""

    def test_sinc_uses_fixed_window(self, sinc_fn, gaussian_fn):
        """sinc phase matching is sampled on +-10 with 512 points."""
        gx, gy = default_grids(sinc_fn, gaussian_fn, 1.0, -1.0)
        assert (gx.min, gx.max, gx.n_points) == (-10.0, 10.0, 512)
        assert (gy.min, gy.max, gy.n_points) == (-10.0, 10.0, 512)

    def test_window_narrows_with_large_r(self, sinc_fn, gaussian_fn):
        """The x window scales as 1/|r| so the narrow ridge stays resolved."""
        gx, gy = default_grids(sinc_fn, gaussian_fn, 20.0, 0.0)
        assert gx.max == pytest.approx(0.5)
        assert gy.max == pytest.approx(10.0)

    def test_window_is_the_minimum_for_gaussians(self, gaussian_fn):
        """Gaussians with r = -s = 1 fit inside the window."""
        gx, gy = default_grids(gaussian_fn, gaussian_fn, 1.0, -1.0)
        assert gx.max == pytest.approx(10.0)
        assert gy.max == pytest.approx(10.0)
        assert gx.min == -gx.max

    def test_fast_decaying_support_widens_window(self, gaussian_fn):
        """Same-sign r and s stretch the Gaussian support past the window."""
        gx, gy = default_grids(gaussian_fn, gaussian_fn, 1.0, 0.5)
        assert gx.max == pytest.approx(18.0)
        assert gy.max == pytest.approx(24.0)
        assert gx.n_points >= 512

    def test_adaptive_mode(self, gaussian_fn):
        """Adaptive grids hold exactly the configured supports."""
        gx, gy = default_grids(gaussian_fn, gaussian_fn, 1.0, -1.0, mode="adaptive")
        assert gx.max == pytest.approx(6.0)
        assert gy.max == pytest.approx(6.0)
        assert adaptive_grids(gaussian_fn, gaussian_fn, 1.0, -1.0) == (gx, gy)

    def test_adaptive_point_counts_are_clamped(self, sinc_fn, gaussian_fn):
        """Point counts stay within the configured range."""
        gx, gy = adaptive_grids(sinc_fn, gaussian_fn, 1.0, 0.5)
        assert 512 <= gx.n_points <= 1536
        assert 512 <= gy.n_points <= 1536

    def test_unknown_mode(self, gaussian_fn):
        """Modes other than window and adaptive are refused."""
        with pytest.raises(InvalidSpectralFn, match="unknown grid mode"):
            default_grids(gaussian_fn, gaussian_fn, 1.0, -1.0, mode="log")

    def test_explicit_window(self):
        """window_grids takes its half-width and point count from the caller."""
        gx, gy = window_grids(4.0, -0.5, halfwidth=8.0, points=256)
        assert gx.max == pytest.approx(2.0)
        assert gy.max == pytest.approx(8.0)
        assert gx.n_points == gy.n_points == 256

    def test_degenerate_rs(self, gaussian_fn):
        """r = s is rejected."""
        with pytest.raises(DegenerateGroupVelocities):
            default_grids(gaussian_fn, gaussian_fn, 1.0, 1.0)


class TestSpectralFnFromName:
    """Test CLI name lookup."""

    def test_known_names(self):
        """Each CLI name maps to its family."""
        assert spectral_fn_from_name("SINC", alpha=0.5).parameters == (0.5,)
        assert spectral_fn_from_name("hermite", order=2).parameters == (2.0, 1.0)

    def test_unknown_name(self):
        """Unknown names raise InvalidSpectralFn."""
        with pytest.raises(InvalidSpectralFn):
            spectral_fn_from_name("lorentzian")


class TestBuildJsa:
    """Test sampled JSAs and their purity."""

    def test_jsa_is_normalized(self, gaussian_fn):
        """The grid norm is one."""
        jsa = build_jsa(gaussian_fn, gaussian_fn, 2.0, -0.5)
        assert jsa.norm() == pytest.approx(1.0)
        assert not jsa.boundary_flag

    def test_degenerate_rs(self, gaussian_fn):
        """r = s raises DegenerateGroupVelocities."""
        with pytest.raises(DegenerateGroupVelocities):
            build_jsa(gaussian_fn, gaussian_fn, 0.7, 0.7)

    def test_separable_gaussian(self, gaussian_fn):
        """rs = -1 gives a product state."""
        jsa = build_jsa(gaussian_fn, gaussian_fn, 2.0, -0.5)
        assert purity_schmidt(jsa).purity == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("r, s", [(1.0, 0.0), (1.0, 0.5), (3.0, -1.0), (-2.0, 0.3)])
    def test_gaussian_matches_closed_form(self, gaussian_fn, r, s):
        """Gaussian x Gaussian purity equals |r-s|/sqrt((1+r^2)(1+s^2))."""
        jsa = build_jsa(gaussian_fn, gaussian_fn, r, s)
        assert purity_schmidt(jsa).purity == pytest.approx(gaussian_purity(r, s), abs=1e-6)

    def test_gaussian_large_r(self, gaussian_fn):
        """r = 10, s = 0 approaches 1 - 1/(2 r^2)."""
        jsa = build_jsa(gaussian_fn, gaussian_fn, 10.0, 0.0)
        assert purity_schmidt(jsa).purity == pytest.approx(10.0 / np.sqrt(101.0), abs=1e-4)

    def test_sinc_symmetric_case(self, sinc_fn, gaussian_fn):
        """sinc with a Gaussian pump at r = -s = 1 has purity near 0.77.

        The value is quoted on the default +-10 window, where the sinc tails
        are cut.
        """
        jsa = build_jsa(sinc_fn, gaussian_fn, 1.0, -1.0)
        assert jsa.x_grid == Grid1D.symmetric(10.0, 512)
        assert jsa.boundary_flag
        assert purity_schmidt(jsa).purity == pytest.approx(0.77, abs=0.01)

    def test_sinc_same_sign(self, sinc_fn, gaussian_fn):
        """sinc with a Gaussian pump at r = 1, s = 0.5 has purity near 0.24."""
        jsa = build_jsa(sinc_fn, gaussian_fn, 1.0, 0.5)
        assert purity_schmidt(jsa).purity == pytest.approx(0.24, abs=0.01)

    @pytest.mark.slow
    def test_sinc_large_r_matches_exact_s0(self, sinc_fn, gaussian_fn):
        """At s = 0 the sinc purity matches its one-dimensional integral.

        The x window reaches |r x| ~ 1900 so the sinc tails lost to the grid
        move the purity by less than 5e-4.
        """
        gx = Grid1D.symmetric(96.0, 3841)
        gy = Grid1D.symmetric(102.0, 817)
        jsa = build_jsa(sinc_fn, gaussian_fn, 20.0, 0.0, gx, gy)
        assert purity_schmidt(jsa).purity == pytest.approx(
            sinc_gaussian_purity_s0(20.0), abs=1e-3
        )

    def test_non_finite_function_rejected(self):
        """Functions producing NaN cannot be normalized."""
        with pytest.raises(InvalidSpectralFn):
            SpectralFn.custom(lambda x: np.where(np.abs(x) < 50, np.exp(-(x**2)), np.nan))


class TestSchmidtDecomposition:
    """Test Schmidt modes and the quadrature oracle."""

    def test_oracle_agrees_with_svd(self, sinc_fn, gaussian_fn):
        """Direct quadrature of the reduced state reproduces the SVD purity."""
        jsa = build_jsa(sinc_fn, gaussian_fn, 1.0, -1.0)
        assert purity_integral(jsa) == pytest.approx(purity_schmidt(jsa).purity, abs=1e-10)

    def test_leading_weight_and_reconstruction(self, sinc_fn, gaussian_fn):
        """The modes rebuild the JSA and the coefficients give the purity."""
        jsa = build_jsa(sinc_fn, gaussian_fn, 1.0, -1.0)
        modes = schmidt_decompose(jsa)
        weights = modes.coefficients**2
        assert 0.8 < weights[0] < 0.92
        assert np.sum(weights**2) == pytest.approx(purity_schmidt(jsa).purity, abs=1e-12)
        np.testing.assert_allclose(modes.reconstruct(), jsa.values, atol=1e-10)

    def test_modes_are_orthonormal(self, gaussian_fn):
        """Mode functions are orthonormal with the grid measure."""
        jsa = build_jsa(gaussian_fn, gaussian_fn, 1.0, 0.0)
        modes = schmidt_decompose(jsa)
        u = modes.modes_x[:, :3]
        gram = u.conj().T @ u * jsa.x_grid.spacing
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-10)


class TestFrequencyConversion:
    """Test the frequency-conversion transfer function."""

    def test_real_pump_purity_equal(self, gaussian_fn):
        """With a real pump the transfer function is as entangled as the JSA."""
        pmf = SpectralFn.sech(1.0)
        gx, gy = default_grids(pmf, gaussian_fn, 1.5, 0.4)
        fc = to_frequency_conversion(pmf, gaussian_fn, 1.5, 0.4, gx, gy)
        spdc = build_jsa(pmf, gaussian_fn, 1.5, 0.4, gx, gy)
        assert purity_schmidt(fc).purity == pytest.approx(
            purity_schmidt(spdc).purity, abs=1e-10
        )

    def test_chirped_pump_uses_conjugate(self):
        """A complex pump matches the SPDC JSA with the conjugated pump."""
        pmf = SpectralFn.gaussian(1.0)
        pump = SpectralFn.gaussian(1.0, chirp=0.8)
        gx, gy = default_grids(pmf, pump, 1.0, -0.3)
        fc = to_frequency_conversion(pmf, pump, 1.0, -0.3, gx, gy)
        spdc = build_jsa(pmf, pump.conjugate(), 1.0, -0.3, gx, gy)
        assert purity_schmidt(fc).purity == pytest.approx(
            purity_schmidt(spdc).purity, abs=1e-10
        )

    def test_transfer_function_is_reflected_jsa(self, gaussian_fn):
        """On a symmetric grid the transfer function is the JSA with y -> -y."""
        gx, gy = default_grids(gaussian_fn, gaussian_fn, 2.0, 0.5)
        fc = to_frequency_conversion(gaussian_fn, gaussian_fn, 2.0, 0.5, gx, gy)
        spdc = build_jsa(gaussian_fn, gaussian_fn, 2.0, 0.5, gx, gy)
        np.testing.assert_allclose(fc.values, spdc.values[:, ::-1], atol=1e-12)


class TestL2Distance:
    """Test the phase-insensitive JSA distance."""

    def test_global_phase_ignored(self, gaussian_fn):
        """A global phase does not count as a difference."""
        jsa = build_jsa(gaussian_fn, gaussian_fn, 1.0, -1.0)
        rotated = JointAmplitude(jsa.values * np.exp(0.7j), jsa.x_grid, jsa.y_grid)
        assert jsa_l2_distance(jsa, rotated) == pytest.approx(0.0, abs=1e-12)

    def test_grid_mismatch(self, gaussian_fn):
        """JSAs on different grids cannot be compared."""
        first = build_jsa(gaussian_fn, gaussian_fn, 1.0, -1.0)
        second = build_jsa(gaussian_fn, gaussian_fn, 1.0, 0.2)
        with pytest.raises(InvalidSpectralFn, match="different grids"):
            jsa_l2_distance(first, second)

    def test_same_shape_different_extent(self, gaussian_fn):
        """Equal point counts on different intervals are still refused."""
        narrow = Grid1D.symmetric(6.0, 256)
        wide = Grid1D.symmetric(8.0, 256)
        first = build_jsa(gaussian_fn, gaussian_fn, 1.0, -1.0, narrow, narrow)
        second = build_jsa(gaussian_fn, gaussian_fn, 1.0, -1.0, wide, wide)
        assert first.values.shape == second.values.shape
        with pytest.raises(InvalidSpectralFn, match="different grids"):
            jsa_l2_distance(first, second)


class TestPurityProperties:
    """Property suites over random (r, s) with fast-decaying inputs."""

    @settings(max_examples=20)
    @given(
        r=st.floats(min_value=0.5, max_value=3.0),
        s=st.floats(min_value=-3.0, max_value=3.0),
        pump_width=st.floats(min_value=0.6, max_value=1.6),
    )
    def test_property_oracles_agree(self, r, s, pump_width):
        """SVD and quadrature purities agree and lie in (0, 1]."""
        assume(abs(r - s) > 0.3)
        jsa = build_jsa(SpectralFn.gaussian(1.0), SpectralFn.sech(pump_width), r, s)
        purity = purity_schmidt(jsa).purity
        assert 0.0 < purity <= 1.0 + 1e-12
        assert purity_integral(jsa) == pytest.approx(purity, abs=1e-6)

    @settings(max_examples=20)
    @given(
        r=st.floats(min_value=0.5, max_value=3.0),
        s=st.floats(min_value=-3.0, max_value=3.0),
    )
    def test_property_exchange_symmetry(self, r, s):
        """Exchanging (x, r) with (y, s) transposes the JSA and keeps the purity."""
        assume(abs(r - s) > 0.3)
        pmf, pump = SpectralFn.gaussian(1.0), SpectralFn.sech(1.0)
        forward = purity_schmidt(build_jsa(pmf, pump, r, s)).purity
        backward = purity_schmidt(build_jsa(pmf, pump, s, r)).purity
        assert forward == pytest.approx(backward, abs=1e-10)

    @settings(max_examples=20)
    @given(
        r=st.floats(min_value=0.5, max_value=3.0),
        s=st.floats(min_value=-3.0, max_value=3.0),
        pmf_width=st.floats(min_value=0.6, max_value=1.6),
    )
    def test_property_frequency_conversion_real_pump(self, r, s, pmf_width):
        """Real pumps give equal FC and SPDC purities."""
        assume(abs(r - s) > 0.3)
        pmf, pump = SpectralFn.gaussian(pmf_width), SpectralFn.sech(1.0)
        gx, gy = default_grids(pmf, pump, r, s)
        fc = purity_schmidt(to_frequency_conversion(pmf, pump, r, s, gx, gy)).purity
        spdc = purity_schmidt(build_jsa(pmf, pump, r, s, gx, gy)).purity
        assert fc == pytest.approx(spdc, abs=1e-10)
