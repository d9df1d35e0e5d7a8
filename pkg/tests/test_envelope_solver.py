from __future__ import annotations

import math

import numpy as np
import pytest

import oracles
from qline.envelope import (EvolutionConfig, carrier_phase, energy_expectation,
                            evolve, step, suggest_ds)
from qline.errors import NumericalError
from qline.fields import ComplexField, Grid1D, norm, overlap_inner
from qline.line import PotentialProfile
from qline.modes import (EnvelopeState, envelope_ode_solve, equilibrium_sigma,
                         hermite_gauss_mode, stationary_mode)


def chirp_free_gaussian(grid, sigma, center=0.0, momentum=0.0):
    tau = grid.points
    vals = (2.0 * np.pi * sigma**2) ** -0.25 \
        * np.exp(-(tau - center) ** 2 / (4.0 * sigma**2) + 1j * momentum * tau)
    return ComplexField(grid, vals)


class TestFreeEvolution:
    def test_norm_and_spreading_law(self):
        grid = Grid1D(-40.0, 40.0, 8001)
        psi0 = chirp_free_gaussian(grid, sigma=2.0)
        traj = evolve(psi0, PotentialProfile.zero(),
                      EvolutionConfig(ds=1e-3, s_end=4.0, record_stride=500))
        assert np.max(np.abs(np.array(traj.norms) - 1.0)) < 1e-12
        for s, m in zip(traj.times, traj.moments):
            want = oracles.free_spread_sigma2(2.0, s)
            assert m.sigma**2 == pytest.approx(want, rel=1e-4)

    def test_spreading_with_heavier_mass(self):
        grid = Grid1D(-40.0, 40.0, 8001)
        psi0 = chirp_free_gaussian(grid, sigma=2.0)
        n0 = 1.5
        traj = evolve(psi0, PotentialProfile.zero(n0=n0),
                      EvolutionConfig(ds=1e-3, s_end=4.0, record_stride=4000))
        want = oracles.free_spread_sigma2(2.0, traj.times[-1], n0=n0)
        assert traj.moments[-1].sigma ** 2 == pytest.approx(want, rel=1e-4)


class TestHarmonicEvolution:
    def test_single_step_phase(self):
        grid = Grid1D(-8.0, 8.0, 10667)
        k, ds = 1.0, 0.005
        psi0 = stationary_mode(0, k, 0.0, grid)
        stepped = step(psi0, PotentialProfile.harmonic(k), 0.0, ds)
        phase = np.angle(complex(overlap_inner(psi0, stepped)))
        assert phase == pytest.approx(-0.5 * math.sqrt(k) * ds, abs=1e-8)
        assert norm(stepped) == pytest.approx(1.0, abs=1e-12)

    def test_matched_ground_state_stationary(self):
        grid = Grid1D(-8.0, 8.0, 8001)
        psi0 = stationary_mode(0, 1.0, 0.0, grid)
        traj = evolve(psi0, PotentialProfile.harmonic(1.0),
                      EvolutionConfig(ds=0.02, s_end=10.0, record_stride=100))
        sig = traj.sigma()
        assert np.max(np.abs(sig - sig[0])) < 1e-6
        assert np.max(np.abs(np.array(traj.energy) - 0.5)) < 1e-6

    def test_breathing_width_window_and_determinant(self):
        grid = Grid1D(-10.5, 10.5, 8401)
        psi0 = chirp_free_gaussian(grid, sigma=1.0)
        traj = evolve(psi0, PotentialProfile.harmonic(1.0),
                      EvolutionConfig(ds=2e-3, s_end=7.0, record_stride=25))
        sig = traj.sigma()
        lo, hi = oracles.breathing_turning_points(1.0, 0.0, 1.0)
        assert np.min(sig) == pytest.approx(lo, abs=1e-3)
        assert np.max(sig) == pytest.approx(hi, abs=1e-3)
        assert np.max(np.abs(traj.determinant() - 0.25)) < 1e-6

    def test_pde_width_tracks_envelope_ode(self):
        grid = Grid1D(-10.5, 10.5, 5251)
        psi0 = chirp_free_gaussian(grid, sigma=1.0)
        ds = 2e-3
        traj = evolve(psi0, PotentialProfile.harmonic(1.0),
                      EvolutionConfig(ds=ds, s_end=6.4, record_stride=100))
        ode = envelope_ode_solve(EnvelopeState(sigma=1.0, k=1.0), s_end=6.4,
                                 ds=ds / 10.0)
        for s, m in zip(traj.times, traj.moments):
            idx = int(round(s / (ds / 10.0)))
            assert m.sigma == pytest.approx(ode.sigma[idx], rel=1e-3)

    def test_energy_conserved(self):
        # the 4th-order operator keeps the measured <H> flat at 1e-8 on a
        # moderate grid; the tridiagonal default conserves its own discrete
        # energy exactly but differs from the quadrature <H> at O(d_tau^2)
        grid = Grid1D(-10.5, 10.5, 8401)
        psi0 = chirp_free_gaussian(grid, sigma=0.8, center=0.5)
        traj = evolve(psi0, PotentialProfile.harmonic(1.0),
                      EvolutionConfig(ds=2e-3, s_end=5.0, record_stride=250,
                                      spatial_order=4))
        e = np.array(traj.energy)
        assert np.max(np.abs(e - e[0])) / abs(e[0]) < 1e-8

    def test_energy_conservation_second_order_route(self):
        # same run on the tridiagonal default: conserved at its O(d_tau^2) level
        errs = []
        for n_points in (8401, 16801):
            grid = Grid1D(-10.5, 10.5, n_points)
            psi0 = chirp_free_gaussian(grid, sigma=0.8, center=0.5)
            traj = evolve(psi0, PotentialProfile.harmonic(1.0),
                          EvolutionConfig(ds=2e-3, s_end=5.0, record_stride=500))
            e = np.array(traj.energy)
            errs.append(np.max(np.abs(e - e[0])) / abs(e[0]))
        assert errs[1] < 5e-7
        assert errs[1] < errs[0] / 3  # shrinks ~4x per grid halving

    @pytest.mark.parametrize("n", range(5))
    def test_eigenstate_fidelity(self, n):
        grid = Grid1D(-12.0, 12.0, 4801)
        psi0 = stationary_mode(n, 1.0, 0.0, grid)
        traj = evolve(psi0, PotentialProfile.harmonic(1.0),
                      EvolutionConfig(ds=5e-3, s_end=5.0, record_stride=1000))
        fid = abs(complex(overlap_inner(psi0, traj.fields[-1])))
        assert fid == pytest.approx(1.0, abs=1e-6)


class TestStepOrder:
    def test_second_order_in_ds(self):
        grid = Grid1D(-10.0, 10.0, 1001)
        psi0 = chirp_free_gaussian(grid, sigma=0.9, momentum=0.5)
        pot = PotentialProfile.harmonic(1.0)
        s_end = 0.5

        def run(ds):
            traj = evolve(psi0, pot, EvolutionConfig(ds=ds, s_end=s_end,
                                                     record_stride=10**9))
            return traj.fields[-1].values

        ref = run(s_end / 1024)
        errs = [np.max(np.abs(run(s_end / n) - ref)) for n in (16, 32, 64)]
        assert errs[1] == pytest.approx(errs[0] / 4, rel=0.2)
        assert errs[2] == pytest.approx(errs[1] / 4, rel=0.3)


class TestTimeDependentPotential:
    def test_sudden_stiffening_populations(self):
        # trap strength jumps 1 -> 4 at s = 5: mode populations afterwards match
        # the frequency-doubling overlap factors
        grid = Grid1D(-9.0, 9.0, 6001)
        psi0 = stationary_mode(0, 1.0, 0.0, grid)

        def u(tau, s):
            k = 1.0 if s < 5.0 else 4.0
            return 0.5 * k * np.asarray(tau, dtype=float) ** 2

        traj = evolve(psi0, PotentialProfile.from_callable(u),
                      EvolutionConfig(ds=1e-3, s_end=8.0, record_stride=8000))
        final = traj.fields[-1]
        want = oracles.ground_jump_populations(1.0, 2.0, 6)
        for m in range(7):
            target = stationary_mode(m, 4.0, 0.0, grid)
            pop = abs(complex(overlap_inner(target, final))) ** 2
            assert pop == pytest.approx(want[m], abs=1e-3)


class TestGuardsAndSponge:
    def test_non_finite_potential_aborts(self):
        grid = Grid1D(-8.0, 8.0, 801)
        psi0 = chirp_free_gaussian(grid, sigma=1.0)

        def bad(tau, s):
            out = np.zeros_like(np.asarray(tau, dtype=float))
            if s > 0.05:
                out[:] = np.nan
            return out

        with pytest.raises(NumericalError, match="non-finite"):
            evolve(psi0, PotentialProfile.from_callable(bad),
                   EvolutionConfig(ds=0.01, s_end=1.0))

    def test_sponge_absorbs_outgoing_packet(self):
        grid = Grid1D(-30.0, 30.0, 3001)
        psi0 = chirp_free_gaussian(grid, sigma=2.0, center=-10.0, momentum=2.0)
        cfg = EvolutionConfig(ds=5e-3, s_end=35.0, record_stride=1000,
                              boundary_pad=400, sponge_strength=2.0)
        traj = evolve(psi0, PotentialProfile.zero(), cfg)
        assert traj.norms[-1] < 0.02  # packet swallowed by the pad
        interior = np.abs(traj.fields[-1].values[500:-500])
        assert np.max(interior) < 1e-2  # and not bounced back

    def test_suggest_ds_bounds(self):
        grid = Grid1D(-8.0, 8.0, 801)
        psi0 = chirp_free_gaussian(grid, sigma=1.0)
        ds = suggest_ds(psi0, PotentialProfile.harmonic(1.0))
        u_max = 0.5 * 8.0**2
        assert ds <= 0.01 / u_max + 1e-15
        assert ds <= 0.5 * grid.d_tau**2 + 1e-15


def test_carrier_phase_definition():
    assert carrier_phase(0.0) == 1.0
    assert carrier_phase(2.0 * math.pi) == pytest.approx(-1.0)
    s = 0.77
    assert complex(carrier_phase(s)) == pytest.approx(np.exp(-0.5j * s))
