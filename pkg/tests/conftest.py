"""Shared fixtures and oracle helpers for the test suite."""

import numpy as np
import pytest

import pacok as pk
from pacok import radial


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def band_limited(grid: pk.GridSpec, rng, max_mode: int = 6, zero_mean: bool = True):
    """Random smooth periodic field with modes up to ``max_mode`` per axis."""
    spec_shape = list(grid.shape)
    spec_shape[-1] = grid.shape[-1] // 2 + 1
    spec = np.zeros(spec_shape, dtype=complex)
    sel = tuple(slice(0, max_mode) for _ in range(grid.dim - 1)) + (slice(0, max_mode),)
    spec[sel] = rng.normal(size=spec[sel].shape) + 1j * rng.normal(size=spec[sel].shape)
    values = np.fft.irfftn(spec, s=grid.shape, axes=tuple(range(grid.dim)))
    if zero_mean:
        values = values - values.mean()
    return pk.Field(grid, values)


def quadrature_nonlocal(candidate: radial.RadialCandidate, nodes: int = 240) -> float:
    """Independent oracle for the Coulombic term: N = (1/2) int phi rho dV,
    with phi from the piecewise potential and fixed Gauss-Legendre panels."""
    from numpy.polynomial.legendre import leggauss

    r0, r1, r2, r3 = candidate.radii
    n, zeta = candidate.n, candidate.zeta
    x, w = leggauss(nodes)
    total = 0.0
    for a, b, density in [(r0, r1, -1.0 / zeta), (r1, r2, 1.0), (r2, r3, -1.0 / zeta)]:
        if b <= a:
            continue
        r = 0.5 * (b - a) * x + 0.5 * (a + b)
        weights = 0.5 * (b - a) * w
        phi = radial.radial_potential(candidate, r)
        surface = 2.0 * np.pi * r if n == 2 else 4.0 * np.pi * r * r
        total += float(np.sum(weights * phi * density * surface))
    return 0.5 * total


def radial_seed(candidate: radial.RadialCandidate, grid: pk.GridSpec, epsilon: float,
                center=None):
    """Sharp radial candidate rasterized with tanh profiles, with the true
    (possibly asymmetric) layer radii."""
    if center is None:
        center = tuple(0.5 * length for length in grid.lengths)
    r0, r1, r2, r3 = candidate.radii
    deltas = [np.mod(x - c + 0.5 * L, L) - 0.5 * L
              for x, c, L in zip(grid.coords(), center, grid.lengths)]
    r = np.sqrt(np.broadcast_to(sum(d * d for d in deltas), grid.shape))
    band = lambda lo, hi: pk.tanh_profile(np.minimum(r - lo, hi - r), epsilon)
    u = band(r1, r2)
    v = np.clip(band(r0, r3) - u, 0.0, 1.0)
    return pk.Field(grid, u), pk.Field(grid, v)
