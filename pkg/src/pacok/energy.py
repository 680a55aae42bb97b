"""Diffuse-interface energy for the two-phase amphiphile model.

The energy of a pair of order parameters (u, v) on a periodic box is

    E = P + gamma*N + C + R,

with the interfacial part P = (eps/2)*int|grad u|^2 + (1/eps)*int W(u,v),
the Coulombic part N = (1/2)*int|grad phi|^2 where -lap(phi) = f(u)-f(v)/zeta
(zero mean, periodic), quadratic mass penalties C, and an optional small
v-smoothing term R = v_reg*int|grad v|^2.

The well W penalizes u outside {0,1}, v outside [0,1] and overlap u+v > 1;
the one-sided quadratics are C^1 with the kink derivative set to 0, so the
gradient of W is continuous.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import (
    Field,
    dirichlet_energy_array,
    integrate_array,
    laplacian_array,
    poisson_solve_array,
    require_same_grid,
)

#: ratio of the default v-regularization coefficient to eps/2
V_REG_RATIO = 1.0 / 1_250_000.0


@dataclass(frozen=True)
class PhysParams:
    """Model parameters.

    ``v_reg`` defaults to (epsilon/2)/1250000, reading the smoothing
    coefficient as that fraction of the full |grad u|^2 coefficient; pass 0
    to disable. ``interpolant`` selects the mass/charge interpolant f:
    "cubic" is 3z^2-2z^3 (the simulation choice), "identity" the linear one
    used in limit arguments.
    """

    zeta: float
    gamma: float
    mass: float
    epsilon: float
    K1: float
    K2: float
    v_reg: float | None = None
    interpolant: str = "cubic"

    def __post_init__(self) -> None:
        for name in ("zeta", "gamma", "mass", "epsilon", "K1", "K2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.v_reg is None:
            object.__setattr__(self, "v_reg", (self.epsilon / 2.0) * V_REG_RATIO)
        elif self.v_reg < 0:
            raise ValueError("v_reg must be nonnegative")
        if self.interpolant not in ("cubic", "identity"):
            raise ValueError(f"unknown interpolant {self.interpolant!r}")


@dataclass(frozen=True)
class EnergyBreakdown:
    """Energy contributions; ``total`` applies gamma to ``nonlocal`` once."""

    perimeter: float
    nonlocal_: float
    constraint: float
    v_regularization: float
    total: float

    @classmethod
    def assemble(cls, perimeter, nonlocal_, constraint, v_regularization, gamma):
        total = perimeter + gamma * nonlocal_ + constraint + v_regularization
        return cls(perimeter, nonlocal_, constraint, v_regularization, total)


def interpolant(z):
    """Cubic interpolant f(z) = 3z^2 - 2z^3 with f(0)=0, f(1)=1."""
    z = np.asarray(z, dtype=np.float64)
    return (3.0 - 2.0 * z) * z * z


def interpolant_deriv(z):
    """f'(z) = 6z - 6z^2."""
    z = np.asarray(z, dtype=np.float64)
    return 6.0 * z * (1.0 - z)


def _identity(z):
    return np.asarray(z, dtype=np.float64)


def _identity_deriv(z):
    return np.ones_like(np.asarray(z, dtype=np.float64))


def interpolant_pair(params: PhysParams):
    """(f, f') for the configured interpolant."""
    if params.interpolant == "identity":
        return _identity, _identity_deriv
    return interpolant, interpolant_deriv


def potential_W(u, v):
    """Degenerate double well W(u, v) >= 0.

    W = 18(u-u^2)^2 + (27/2)[min(v,0)^2 + min(1-v,0)^2 + min(1-u-v,0)^2].
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    well = u - u * u
    penalty = (
        np.minimum(v, 0.0) ** 2
        + np.minimum(1.0 - v, 0.0) ** 2
        + np.minimum(1.0 - u - v, 0.0) ** 2
    )
    return 18.0 * well * well + 13.5 * penalty


def potential_W_grad(u, v):
    """(dW/du, dW/dv); one-sided quadratics differentiated piecewise."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    overlap = np.maximum(u + v - 1.0, 0.0)
    w_u = 36.0 * (u - u * u) * (1.0 - 2.0 * u) + 27.0 * overlap
    w_v = 27.0 * (np.minimum(v, 0.0) + np.maximum(v - 1.0, 0.0) + overlap)
    return w_u, w_v


def charge_density(u: Field, v: Field, params: PhysParams) -> np.ndarray:
    """w = f(u) - f(v)/zeta, the source of the electrostatic potential."""
    require_same_grid(u, v)
    f, _ = interpolant_pair(params)
    return f(u.values) - f(v.values) / params.zeta


def perimeter_term(u: Field, v: Field, params: PhysParams) -> float:
    """(eps/2)*int|grad u|^2 + (1/eps)*int W(u, v)."""
    grid = require_same_grid(u, v)
    gradient_part = 0.5 * params.epsilon * dirichlet_energy_array(grid, u.values)
    well_part = integrate_array(grid, potential_W(u.values, v.values)) / params.epsilon
    return gradient_part + well_part


def nonlocal_term(u: Field, v: Field, params: PhysParams) -> tuple[float, Field]:
    """(N, phi) with N = (1/2)*int|grad phi|^2, phi zero-mean periodic."""
    grid = require_same_grid(u, v)
    phi = poisson_solve_array(grid, charge_density(u, v, params))
    return 0.5 * dirichlet_energy_array(grid, phi), Field(grid, phi)


def constraint_term(u: Field, v: Field, params: PhysParams) -> float:
    """(K1/2)(m - int f(u))^2 + (K2/2)(zeta*m - int f(v))^2."""
    grid = require_same_grid(u, v)
    f, _ = interpolant_pair(params)
    mass_u = integrate_array(grid, f(u.values))
    mass_v = integrate_array(grid, f(v.values))
    return 0.5 * params.K1 * (params.mass - mass_u) ** 2 + 0.5 * params.K2 * (
        params.zeta * params.mass - mass_v
    ) ** 2


def v_regularization_term(v: Field, params: PhysParams) -> float:
    """v_reg * int|grad v|^2."""
    return params.v_reg * dirichlet_energy_array(v.grid, v.values)


def total_energy(u: Field, v: Field, params: PhysParams) -> EnergyBreakdown:
    """Full breakdown; total = P + gamma*N + C + R."""
    nonlocal_, _ = nonlocal_term(u, v, params)
    return EnergyBreakdown.assemble(
        perimeter=perimeter_term(u, v, params),
        nonlocal_=nonlocal_,
        constraint=constraint_term(u, v, params),
        v_regularization=v_regularization_term(v, params),
        gamma=params.gamma,
    )


def variational_derivatives(u: Field, v: Field, params: PhysParams) -> tuple[Field, Field]:
    """(dE/du, dE/dv) as fields.

    dE/du = -eps*lap u + W_u/eps + gamma*phi*f'(u) - K1(m - int f(u)) f'(u)
    dE/dv = W_v/eps - (gamma/zeta)*phi*f'(v) - K2(zeta m - int f(v)) f'(v)
            - 2*v_reg*lap v
    """
    grid = require_same_grid(u, v)
    f, fp = interpolant_pair(params)
    uu, vv = u.values, v.values
    phi = poisson_solve_array(grid, f(uu) - f(vv) / params.zeta)
    mass_u = integrate_array(grid, f(uu))
    mass_v = integrate_array(grid, f(vv))
    w_u, w_v = potential_W_grad(uu, vv)
    du = (
        -params.epsilon * laplacian_array(grid, uu)
        + w_u / params.epsilon
        + (params.gamma * phi - params.K1 * (params.mass - mass_u)) * fp(uu)
    )
    dv = (
        w_v / params.epsilon
        - (params.gamma / params.zeta * phi + params.K2 * (params.zeta * params.mass - mass_v))
        * fp(vv)
        - 2.0 * params.v_reg * laplacian_array(grid, vv)
    )
    return Field(grid, du), Field(grid, dv)
