from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qline.errors import AccuracyWarning, FieldError, GridMismatchError
from qline.fields import (ComplexField, Grid1D, covariance_determinant,
                          derivative, hermite, hermite_function, moments,
                          norm, normalize, overlap_inner, trapezoid)


def unit_gaussian(grid, sigma=None, center=0.0, momentum=0.0):
    """(2 pi sigma^2)^(-1/4) exp(-(tau-c)^2/(4 sigma^2) + i p tau); sigma=None -> 1/sqrt(2)."""
    if sigma is None:
        sigma = 1.0 / np.sqrt(2.0)
    tau = grid.points
    vals = (2.0 * np.pi * sigma**2) ** -0.25 \
        * np.exp(-(tau - center) ** 2 / (4.0 * sigma**2) + 1j * momentum * tau)
    return ComplexField(grid, vals)


GRID = Grid1D(-12.0, 12.0, 2048)


class TestGrid:
    def test_points_uniform_increasing(self):
        pts = GRID.points
        assert np.all(np.diff(pts) > 0)
        assert np.allclose(np.diff(pts), GRID.d_tau, rtol=0, atol=1e-12)
        assert pts[0] == GRID.tau_min and pts[-1] == GRID.tau_max

    def test_too_few_points_rejected(self):
        with pytest.raises(ValueError, match="at least 8"):
            Grid1D(-1.0, 1.0, 7)

    def test_empty_extent_rejected(self):
        with pytest.raises(ValueError):
            Grid1D(1.0, 1.0, 100)


class TestNorm:
    def test_unit_gaussian(self):
        psi = unit_gaussian(GRID)
        assert norm(psi) == pytest.approx(1.0, abs=1e-10)

    def test_zero_field(self):
        psi = ComplexField(GRID, np.zeros(GRID.n_points))
        assert norm(psi) == 0.0

    def test_scaling(self):
        psi = unit_gaussian(GRID)
        assert norm(ComplexField(GRID, 2.0 * psi.values)) == pytest.approx(2.0, abs=1e-10)

    def test_non_finite_rejected(self):
        vals = np.ones(GRID.n_points, dtype=complex)
        vals[5] = np.nan
        with pytest.raises(FieldError, match="non-finite"):
            norm(ComplexField(GRID, vals))

    def test_quadrature_refinement_second_order(self):
        # |psi|^2 integral converges at >= 2nd order under grid refinement
        # (far faster, in fact: trapezoid is spectral for decayed smooth tails)
        errors = []
        for n in (25, 49, 97):
            g = Grid1D(-12.0, 12.0, n)
            errors.append(abs(norm(unit_gaussian(g, sigma=1.0)) - 1.0))
        assert errors[0] > 1e-9  # coarse grid shows real error
        assert errors[1] <= errors[0] / 4
        assert errors[2] <= max(errors[1] / 4, 1e-14)


class TestNormalize:
    def test_unit_result(self):
        psi = ComplexField(GRID, 3.7 * unit_gaussian(GRID).values)
        assert norm(normalize(psi)) == pytest.approx(1.0, abs=1e-12)

    def test_idempotent(self):
        psi = normalize(unit_gaussian(GRID, sigma=0.8))
        again = normalize(psi)
        assert np.max(np.abs(again.values - psi.values)) < 1e-12

    def test_phase_equivariant(self):
        psi = unit_gaussian(GRID)
        theta = 1.234
        rotated = normalize(ComplexField(GRID, psi.values * np.exp(1j * theta)))
        assert np.max(np.abs(rotated.values
                             - normalize(psi).values * np.exp(1j * theta))) < 1e-12

    def test_zero_field_rejected(self):
        with pytest.raises(FieldError, match="zero field"):
            normalize(ComplexField(GRID, np.zeros(GRID.n_points)))


class TestMoments:
    def test_matched_width_k2(self):
        # equilibrium width for trap strength 2: sigma^2 = 1/(2 sqrt(2))
        sigma0 = (0.5 / np.sqrt(2.0)) ** 0.5
        m = moments(unit_gaussian(GRID, sigma=sigma0))
        assert m.sigma == pytest.approx(0.5946035575013605, abs=1e-6)
        assert m.sigma**2 == pytest.approx(0.35355339059327373, abs=1e-6)

    def test_matched_width_k1(self):
        m = moments(unit_gaussian(GRID, sigma=np.sqrt(0.5)))
        assert m.sigma**2 == pytest.approx(0.5, abs=1e-6)

    def test_minimum_uncertainty_product(self):
        m = moments(unit_gaussian(GRID, sigma=np.sqrt(0.5)))
        assert m.sigma * m.sigma_p == pytest.approx(0.5, abs=1e-6)

    def test_momentum_translation(self):
        plain = moments(unit_gaussian(GRID))
        boosted = moments(unit_gaussian(GRID, momentum=3.0))
        assert boosted.mean_p == pytest.approx(3.0, abs=1e-6)
        assert boosted.sigma_p == pytest.approx(plain.sigma_p, abs=1e-6)

    def test_normalizes_with_warning(self):
        psi = ComplexField(GRID, 2.0 * unit_gaussian(GRID).values)
        with pytest.warns(AccuracyWarning, match="normalizing"):
            m = moments(psi)
        assert m.sigma == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-6)

    def test_coarse_grid_warns(self):
        g = Grid1D(-12.0, 12.0, 64)
        with pytest.warns(AccuracyWarning, match="8 grid points"):
            moments(unit_gaussian(g, sigma=0.4))


class TestCovarianceDeterminant:
    def test_ground_state(self):
        m = moments(unit_gaussian(GRID, sigma=np.sqrt(0.5)))
        assert covariance_determinant(m) == pytest.approx(0.25, abs=1e-8)

    def test_chirped_gaussian_keeps_quarter(self):
        # breathing Gaussian: width 1, chirp rate sigma'/sigma = 0.6
        tau = GRID.points
        chirp = 0.3  # sigma'/(2 sigma) with sigma = 1
        vals = (2.0 * np.pi) ** -0.25 * np.exp(-tau**2 / 4.0 + 1j * chirp * tau**2)
        m = moments(ComplexField(GRID, vals))
        assert covariance_determinant(m) == pytest.approx(0.25, abs=1e-6)

    def test_first_excited_mode(self):
        # independent oracle: scipy-built n=1 mode + plain numpy quadrature
        tau_o = np.linspace(-12.0, 12.0, 48001)
        s2, sp2, cr = oracles.quadrature_moments(oracles.harmonic_mode(1, 1.0, tau_o),
                                                 tau_o)
        oracle_det = s2 * sp2 - cr**2
        assert oracle_det == pytest.approx(9.0 / 4.0, abs=5e-6)
        psi1 = ComplexField(GRID, oracles.harmonic_mode(1, 1.0, GRID.points))
        assert covariance_determinant(moments(psi1)) == pytest.approx(9.0 / 4.0, abs=1e-6)

    def test_displaced_state_still_quarter(self):
        m = moments(unit_gaussian(GRID, sigma=0.9, center=1.5, momentum=-2.0))
        assert covariance_determinant(m) == pytest.approx(0.25, abs=1e-6)


class TestHermite:
    def test_base_cases(self):
        for x in (-3.0, 0.0, 0.7):
            assert hermite(0, x) == 1.0
        assert hermite(2, 1.5) == pytest.approx(7.0, abs=1e-12)

    def test_against_explicit_coefficients(self):
        got = hermite(10, 0.3)
        want = oracles.hermite_explicit(10, 0.3)
        assert got == pytest.approx(want, rel=1e-9)

    @given(st.integers(min_value=1, max_value=30),
           st.floats(min_value=-10.0, max_value=10.0, allow_nan=False))
    @settings(max_examples=200, deadline=None)
    def test_recurrence_identity(self, n, x):
        lhs = hermite(n + 1, x) - 2.0 * x * hermite(n, x) + 2.0 * n * hermite(n - 1, x)
        scale = max(abs(hermite(n + 1, x)), 1.0)
        assert abs(lhs) <= 1e-12 * scale

    def test_cap(self):
        with pytest.raises(ValueError, match="cap"):
            hermite(65, 0.5)
        assert np.isfinite(hermite(64, 0.5))
        assert np.isfinite(hermite(80, 0.5, cap=100))

    def test_negative_order(self):
        with pytest.raises(ValueError):
            hermite(-1, 0.0)

    def test_array_input(self):
        x = np.array([-1.0, 0.0, 2.0])
        np.testing.assert_allclose(hermite(2, x), 4 * x**2 - 2)


class TestHermiteFunction:
    @pytest.mark.parametrize("n", [0, 1, 5, 17])
    def test_matches_polynomial_route(self, n):
        x = np.linspace(-6, 6, 201)
        import math
        want = hermite(n, x) * np.exp(-0.5 * x**2) \
            / np.sqrt(2.0**n * math.factorial(n) * np.sqrt(np.pi))
        np.testing.assert_allclose(hermite_function(n, x), want, atol=1e-12)

    def test_no_overflow_high_order(self):
        vals = hermite_function(60, np.linspace(-15, 15, 301))
        assert np.all(np.isfinite(vals))
        assert np.max(np.abs(vals)) < 1.0

    def test_orthonormal(self):
        g = Grid1D(-14.0, 14.0, 4001)
        x = g.points
        for n, m in ((0, 0), (3, 3), (2, 6), (0, 1)):
            val = trapezoid(hermite_function(n, x) * hermite_function(m, x), g.d_tau)
            assert val == pytest.approx(1.0 if n == m else 0.0, abs=1e-9)


class TestOverlapInner:
    def test_self_overlap(self):
        psi = unit_gaussian(GRID)
        assert overlap_inner(psi, psi) == pytest.approx(1.0, abs=1e-10)

    def test_parity_orthogonality(self):
        x = GRID.points
        psi0 = ComplexField(GRID, hermite_function(0, x))
        psi1 = ComplexField(GRID, hermite_function(1, x))
        assert abs(overlap_inner(psi0, psi1)) < 1e-10

    def test_two_widths_against_closed_form(self):
        sa, sb = 1.0 / np.sqrt(2.0), 1.0
        got = overlap_inner(unit_gaussian(GRID, sigma=sa), unit_gaussian(GRID, sigma=sb))
        assert got.real == pytest.approx(oracles.gaussian_overlap(sa, sb), abs=1e-9)
        # frozen from oracles.gaussian_overlap(1/sqrt(2), 1)
        assert got.real == pytest.approx(0.9709835434146469, abs=1e-9)
        assert abs(got.imag) < 1e-12

    def test_grid_mismatch(self):
        other = Grid1D(-12.0, 12.0, 1024)
        with pytest.raises(GridMismatchError):
            overlap_inner(unit_gaussian(GRID), unit_gaussian(other))


def test_derivative_fourth_order():
    errs = []
    for n in (201, 401):
        g = Grid1D(-1.0, 1.0, n)
        x = g.points
        err = np.max(np.abs(derivative(np.sin(3 * x), g.d_tau) - 3 * np.cos(3 * x)))
        errs.append(err)
    assert errs[1] <= errs[0] / 16 * 1.5
