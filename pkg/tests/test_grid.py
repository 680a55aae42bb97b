"""Spectral grid operators: eigenfunction identities, Parseval, equivariance."""

import numpy as np
import pytest

import pacok as pk
from pacok.errors import GridMismatchError, InvalidFieldError
from pacok.grid import require_same_grid

from conftest import band_limited

UNIT = pk.GridSpec((64, 64), (1.0, 1.0))


class TestGridSpec:
    def test_basic_properties(self):
        grid = pk.GridSpec((64, 32), (2.0, 1.0))
        assert grid.dim == 2
        assert grid.spacing == (2.0 / 64, 1.0 / 32)
        assert grid.shape == (32, 64)  # x fastest
        assert np.isclose(grid.cell_volume, (2.0 / 64) * (1.0 / 32))

    @pytest.mark.parametrize("points", [(3, 4), (4, 5), (2, 4), (64,), (4, 4, 4, 4)])
    def test_rejects_bad_counts(self, points):
        with pytest.raises(ValueError):
            pk.GridSpec(points, (1.0,) * len(points))

    def test_rejects_bad_lengths(self):
        with pytest.raises(ValueError):
            pk.GridSpec((8, 8), (1.0, -2.0))
        with pytest.raises(ValueError):
            pk.GridSpec((8, 8), (1.0,))

    def test_field_validation(self):
        with pytest.raises(InvalidFieldError):
            pk.Field(UNIT, np.ones((8, 8)))
        bad = np.ones(UNIT.shape)
        bad[3, 5] = np.nan
        with pytest.raises(InvalidFieldError):
            pk.Field(UNIT, bad)
        with pytest.raises(GridMismatchError):
            require_same_grid(pk.Field.full(UNIT, 0.0),
                              pk.Field.full(pk.GridSpec((64, 64), (2.0, 2.0)), 0.0))


class TestPoissonSolve:
    def test_laplacian_eigenfunction(self):
        w = pk.Field.from_function(UNIT, lambda x, y: np.cos(2 * np.pi * x))
        phi = pk.poisson_solve(w)
        expected = w.values / (4.0 * np.pi**2)
        assert np.max(np.abs(phi.values - expected)) < 1e-14

    def test_constant_maps_to_zero(self):
        phi = pk.poisson_solve(pk.Field.full(UNIT, 3.7))
        assert np.max(np.abs(phi.values)) < 1e-14

    def test_round_trip_with_laplacian(self, rng):
        w = band_limited(UNIT, rng, max_mode=10)
        phi = pk.poisson_solve(w)
        recovered = -pk.laplacian(phi).values
        target = w.values - w.values.mean()
        assert np.max(np.abs(recovered - target)) < 1e-12 * np.max(np.abs(target))

    def test_zero_mean_output(self, rng):
        w = band_limited(UNIT, rng, zero_mean=False)
        phi = pk.poisson_solve(w)
        assert abs(phi.values.mean()) < 1e-13 * max(np.max(np.abs(phi.values)), 1e-300)

    def test_3d_round_trip(self, rng):
        grid = pk.GridSpec((16, 16, 16), (1.0, 2.0, 1.5))
        w = band_limited(grid, rng, max_mode=4)
        phi = pk.poisson_solve(w)
        residual = -pk.laplacian(phi).values - (w.values - w.values.mean())
        assert np.max(np.abs(residual)) < 1e-12 * np.max(np.abs(w.values))


class TestLaplacian:
    def test_eigenfunction(self):
        f = pk.Field.from_function(UNIT, lambda x, y: np.cos(2 * np.pi * x))
        lap = pk.laplacian(f)
        assert np.max(np.abs(lap.values + 4.0 * np.pi**2 * f.values)) < 1e-10

    def test_constant(self):
        assert np.max(np.abs(pk.laplacian(pk.Field.full(UNIT, 5.0)).values)) < 1e-12

    def test_anisotropic_box(self):
        grid = pk.GridSpec((64, 32), (2.0, 3.0))
        f = pk.Field.from_function(grid, lambda x, y: np.sin(2 * np.pi * y / 3.0))
        expected = -(2 * np.pi / 3.0) ** 2 * f.values
        assert np.max(np.abs(pk.laplacian(f).values - expected)) < 1e-11


class TestIntegrate:
    def test_domain_area(self):
        grid = pk.GridSpec((32, 64), (2.6, 2.6))
        assert pk.integrate(pk.Field.full(grid, 1.0)) == pytest.approx(6.76, rel=1e-14)

    def test_periodic_harmonic_vanishes(self):
        f = pk.Field.from_function(UNIT, lambda x, y: np.sin(2 * np.pi * x))
        assert abs(pk.integrate(f)) < 1e-14

    def test_tanh_bump_mass(self):
        # indicator-like bump: integral within O(eps) of the sharp mass
        grid = pk.GridSpec((128, 128), (2.6, 2.6))
        eps, radius = 0.05, 0.6
        deltas = [x - 1.3 for x in grid.coords()]
        r = np.sqrt(np.broadcast_to(sum(d * d for d in deltas), grid.shape))
        bump = pk.Field(grid, pk.tanh_profile(radius - r, eps))
        sharp = np.pi * radius**2
        assert abs(pk.integrate(bump) - sharp) < eps


class TestDirichletEnergy:
    def test_cosine_value(self):
        f = pk.Field.from_function(UNIT, lambda x, y: np.cos(2 * np.pi * x))
        assert pk.dirichlet_energy(f) == pytest.approx(2.0 * np.pi**2, rel=1e-12)

    def test_constant_zero(self):
        assert pk.dirichlet_energy(pk.Field.full(UNIT, 2.0)) == 0.0

    def test_matches_integration_by_parts(self, rng):
        f = band_limited(UNIT, rng, max_mode=12, zero_mean=False)
        by_parts = pk.integrate(pk.Field(UNIT, f.values * (-pk.laplacian(f).values)))
        assert pk.dirichlet_energy(f) == pytest.approx(by_parts, rel=1e-10)

    def test_nonnegative_zero_iff_constant(self, rng):
        f = band_limited(UNIT, rng)
        assert pk.dirichlet_energy(f) > 0
        assert pk.dirichlet_energy(pk.Field.full(UNIT, -1.2)) <= 1e-13


class TestTranslationEquivariance:
    @pytest.mark.parametrize("op", [pk.poisson_solve, pk.laplacian])
    def test_circular_shift_commutes(self, rng, op):
        w = band_limited(UNIT, rng, max_mode=16)
        shifted_input = pk.Field(UNIT, np.roll(w.values, (5, 11), axis=(0, 1)))
        a = op(shifted_input).values
        b = np.roll(op(w).values, (5, 11), axis=(0, 1))
        scale = max(np.max(np.abs(b)), 1e-300)
        assert np.max(np.abs(a - b)) < 1e-13 * scale

    def test_quadratures_shift_invariant(self, rng):
        w = band_limited(UNIT, rng, max_mode=16)
        rolled = pk.Field(UNIT, np.roll(w.values, 7, axis=1))
        assert pk.dirichlet_energy(rolled) == pytest.approx(pk.dirichlet_energy(w), rel=1e-12)
        assert pk.integrate(rolled) == pytest.approx(pk.integrate(w), abs=1e-13)
