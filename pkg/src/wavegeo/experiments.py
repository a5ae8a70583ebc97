"""Per-replicate experiment bodies registered with the harness.

Each function maps (params, seed, replicate) to a dict of named values;
one synthesis serves every requested functional of that replicate.
"""

import math

import numpy as np

from . import geomstats, sphere, torus
from .harness import ConfigError, register

FOUR_PI = 4.0 * math.pi


def _sphere_prepare(params):
    ell = params["ell"]
    spw = params.get("spw", 6)
    n_theta, _ = sphere.grid_sizes(ell, spw)
    sphere.basis_tables(ell, n_theta)


@register("sphere")
def sphere_functionals(params, seed, replicate):
    """Functionals of one spherical replicate.

    params: ell, z, spw, want (subset of area, defect, length,
    nodal_length, proj2, tsq, h2, h3, h4).
    """
    ell = params.get("ell")
    if not ell or ell < 1:
        raise ConfigError("sphere experiment needs ell >= 1")
    z = params.get("z", 0.0)
    spw = params.get("spw", 6)
    want = params.get("want", ("area",))
    coeffs = sphere.sample_coeffs(ell, seed, replicate)
    grid = sphere.synthesize(coeffs, samples_per_wavelength=spw,
                             want_gradient=False)
    out = {}
    for name in want:
        if name == "area":
            out[name] = geomstats.excursion_area(grid, z)
        elif name == "defect":
            out[name] = geomstats.defect(grid)
        elif name == "length":
            out[name] = geomstats.level_length(grid, z)
        elif name == "nodal_length":
            out[name] = geomstats.level_length(grid, 0.0)
        elif name == "proj2":
            out[name] = geomstats.second_chaos_length(coeffs, z)
        elif name == "tsq":
            out[name] = grid.integrate(grid.values ** 2) / FOUR_PI
        elif name in ("h2", "h3", "h4"):
            out[name] = geomstats.hermite_functional(grid, int(name[1]))
        else:
            raise ConfigError(f"unknown sphere functional {name!r}")
    return out


sphere_functionals.prepare = _sphere_prepare

_lattice_cache = {}


def _get_lattice(n):
    lat = _lattice_cache.get(n)
    if lat is None:
        lat = torus.lattice_points(n)
        _lattice_cache[n] = lat
    return lat


@register("torus")
def torus_functionals(params, seed, replicate):
    """Functionals of one toral replicate.

    params: n, spw or N, want (subset of length, h1..h4).
    """
    n = params.get("n")
    if not n or n < 1:
        raise ConfigError("torus experiment needs n >= 1")
    lat = _get_lattice(n)
    want = params.get("want", ("length",))
    coeffs = torus.sample_coeffs(lat, seed, replicate)
    out = {}
    if "length" in want:
        grid = torus.synthesize_torus(
            lat, coeffs, N=params.get("N"),
            samples_per_wavelength=params.get("spw", 8), method="fft")
        out["length"] = torus.nodal_length_torus(grid)
    if any(k in want for k in ("h1", "h2", "h3", "h4")):
        h = torus.h_vector(coeffs, lat)
        for i in range(4):
            key = f"h{i + 1}"
            if key in want:
                out[key] = h[i]
    return out


torus_functionals.prepare = lambda params: _get_lattice(params["n"])
