"""Geometric functionals of a sampled spherical field: excursion area,
signed area difference (defect), level-curve length, Hermite functionals,
and the explicit second-chaos projection of the length.
"""

import math

import numpy as np

from . import backend
from .chaos import beta
from .specfun import hermite
from .sphere import SphereGrid, coeff_sigma

FOUR_PI = 4.0 * math.pi


def excursion_area(grid: SphereGrid, z):
    """Quadrature measure of the region where the field exceeds z."""
    ind = (grid.values > z).astype(float)
    return grid.integrate(ind)


def defect(grid: SphereGrid):
    """Positive-region area minus negative-region area: 2 S(0) - 4 pi."""
    return 2.0 * excursion_area(grid, 0.0) - FOUR_PI


def level_length(grid: SphereGrid, z):
    """Marching-squares length of the z-level curve, geodesic metric.

    Polar caps are closed by treating each pole as a single vertex.
    Requires at least 4 colatitude samples per wavelength.
    """
    ell = grid.ell
    if ell >= 1:
        spw = 2.0 * grid.n_theta / math.sqrt(ell * (ell + 1.0))
        if spw < 4.0:
            raise ValueError(
                f"grid under-resolved for length estimation: {spw:.2f} "
                "colatitude samples per wavelength < 4")
    total = backend.march_sphere(grid.values, grid.theta, grid.d_phi, z)
    north, south = grid.pole_values
    total += backend.march_sphere_cap(north, grid.values[0], grid.theta[0],
                                      0.0, grid.d_phi, z)
    total += backend.march_sphere_cap(south, grid.values[-1], grid.theta[-1],
                                      math.pi, grid.d_phi, z)
    return total


def hermite_functional(grid: SphereGrid, q):
    """Quadrature of H_q(field) over the sphere."""
    if q < 0:
        raise ValueError(f"order must be >= 0, got {q}")
    return grid.integrate(hermite(q, grid.values))


def second_chaos_length(coeffs, z):
    """Second-chaos projection of the z-level length, from the coefficients:

    sqrt(ell(ell+1)/2) sqrt(pi/8) phi(z) z^2 sum_m (a_m^2 - 4 pi/(2 ell + 1)).
    Vanishes identically at z = 0.
    """
    ell = coeffs.ell
    if ell < 1:
        raise ValueError("degree ell must be >= 1")
    var = coeff_sigma(ell) ** 2
    centred = float(np.sum(coeffs.values ** 2) - (2 * ell + 1) * var)
    return (math.sqrt(ell * (ell + 1) / 2.0) * math.sqrt(math.pi / 8.0)
            * beta(0, z) * z * z * centred)
