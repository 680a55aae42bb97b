"""Periodic uniform grids and spectral operators.

Fields live on a uniform periodic grid in 2-D or 3-D. All differential
operators are Fourier-spectral: the Laplacian multiplies coefficients by
-|k|^2, the zero-mean Poisson solve divides by |k|^2 with the zero mode
pinned to 0, and quadratic forms use the discrete Parseval identity.
Wavenumbers follow k_j = 2*pi*m_j/L_j with m_j in the symmetric integer
range; the Nyquist mode is retained.

Arrays are stored C-ordered with x as the fastest axis, i.e. a field on an
(Nx, Ny, Nz) grid has array shape (Nz, Ny, Nx).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridMismatchError, InvalidFieldError


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [0, L_x) x [0, L_y) (x [0, L_z)).

    Parameters
    ----------
    points : tuple of int
        Nodes per axis (N_x, N_y[, N_z]); each even and >= 4.
    lengths : tuple of float
        Box edge lengths (L_x, L_y[, L_z]); each > 0.
    """

    points: tuple[int, ...]
    lengths: tuple[float, ...]

    def __post_init__(self) -> None:
        points = tuple(int(n) for n in self.points)
        lengths = tuple(float(value) for value in self.lengths)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "lengths", lengths)
        if len(points) not in (2, 3):
            raise ValueError(f"grid dimension must be 2 or 3, got {len(points)}")
        if len(lengths) != len(points):
            raise ValueError("points and lengths must have the same dimension")
        if any(n < 4 or n % 2 for n in points):
            raise ValueError(f"point counts must be even and >= 4, got {points}")
        if any(length <= 0 for length in lengths):
            raise ValueError(f"box lengths must be positive, got {lengths}")

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(length / n for length, n in zip(self.lengths, self.points))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape; axes reversed so that x varies fastest (C order)."""
        return tuple(reversed(self.points))

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        """Node coordinates along one axis (0 = x)."""
        n = self.points[axis]
        return np.arange(n) * (self.lengths[axis] / n)

    def coords(self) -> list[np.ndarray]:
        """Broadcastable coordinate arrays [X, Y(, Z)] matching ``shape``."""
        out = []
        for axis in range(self.dim):
            c = self.axis_coordinates(axis)
            shape = [1] * self.dim
            shape[self.dim - 1 - axis] = self.points[axis]
            out.append(c.reshape(shape))
        return out


def _all_axes(grid: GridSpec) -> tuple[int, ...]:
    return tuple(range(grid.dim))


@lru_cache(maxsize=64)
def _k_squared(grid: GridSpec) -> np.ndarray:
    """|k|^2 on the rfftn layout for ``grid``."""
    dim = grid.dim
    axes = []
    for axis in range(dim):
        n, h = grid.points[axis], grid.spacing[axis]
        if axis == 0:
            k = 2.0 * np.pi * np.fft.rfftfreq(n, d=h)
        else:
            k = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
        shape = [1] * dim
        shape[dim - 1 - axis] = k.size
        axes.append((k ** 2).reshape(shape))
    k2 = axes[0]
    for extra in axes[1:]:
        k2 = k2 + extra
    return k2


@lru_cache(maxsize=64)
def _parseval_weights(grid: GridSpec) -> np.ndarray:
    """Multiplicity of each rfftn coefficient in the full spectrum."""
    nx = grid.points[0]
    w = np.full(nx // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0  # Nyquist plane is self-conjugate for even nx
    shape = [1] * grid.dim
    shape[-1] = w.size
    return w.reshape(shape)


@dataclass(frozen=True, eq=False)
class Field:
    """Real scalar samples on a :class:`GridSpec`, one per node."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.shape:
            if values.size == self.grid.size:
                values = values.reshape(self.grid.shape)
            else:
                raise InvalidFieldError(
                    f"expected {self.grid.size} samples shaped {self.grid.shape}, "
                    f"got shape {values.shape}"
                )
        if not np.all(np.isfinite(values)):
            raise InvalidFieldError("field contains non-finite samples")
        object.__setattr__(self, "values", values)

    @classmethod
    def full(cls, grid: GridSpec, value: float) -> "Field":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "Field":
        return cls(grid, np.broadcast_to(fn(*grid.coords()), grid.shape).copy())


def require_same_grid(*fields: Field) -> GridSpec:
    grid = fields[0].grid
    for other in fields[1:]:
        if other.grid != grid:
            raise GridMismatchError(f"grids differ: {grid} vs {other.grid}")
    return grid


def poisson_solve(w: Field) -> Field:
    """Zero-mean solution of -lap(phi) = w - mean(w), periodic."""
    return Field(w.grid, poisson_solve_array(w.grid, w.values))


def poisson_solve_array(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    """Array-level Poisson solve; used on the dynamics hot path."""
    spec = np.fft.rfftn(values)
    k2 = _k_squared(grid)
    out = np.zeros_like(spec)
    np.divide(spec, k2, out=out, where=k2 > 0)
    return np.fft.irfftn(out, s=grid.shape, axes=_all_axes(grid))


def laplacian(f: Field) -> Field:
    """Spectral Laplacian: multiply coefficients by -|k|^2."""
    return Field(f.grid, laplacian_array(f.grid, f.values))


def laplacian_array(grid: GridSpec, values: np.ndarray) -> np.ndarray:
    spec = np.fft.rfftn(values)
    return np.fft.irfftn(-_k_squared(grid) * spec, s=grid.shape, axes=_all_axes(grid))


def integrate(f: Field) -> float:
    """Cell-volume-weighted sum (midpoint rule; exact for trig polynomials)."""
    return f.grid.cell_volume * float(f.values.sum())


def integrate_array(grid: GridSpec, values: np.ndarray) -> float:
    return grid.cell_volume * float(values.sum())


def dirichlet_energy(f: Field) -> float:
    """Integral of |grad f|^2 via Parseval."""
    return dirichlet_energy_array(f.grid, f.values)


def dirichlet_energy_array(grid: GridSpec, values: np.ndarray) -> float:
    spec = np.fft.rfftn(values)
    k2 = _k_squared(grid)
    weights = _parseval_weights(grid)
    total = float(np.sum(weights * k2 * (spec.real ** 2 + spec.imag ** 2)))
    return grid.cell_volume / grid.size * total


def dirichlet_energy_spectrum(grid: GridSpec, spec: np.ndarray) -> float:
    """Same as :func:`dirichlet_energy_array` given the rfftn coefficients."""
    k2 = _k_squared(grid)
    weights = _parseval_weights(grid)
    total = float(np.sum(weights * k2 * (spec.real ** 2 + spec.imag ** 2)))
    return grid.cell_volume / grid.size * total
