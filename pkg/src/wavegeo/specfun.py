"""Special functions: normalized Gegenbauer/Legendre, Hermite, Bessel,
eigenspace dimensions, sphere volumes, Gaussian pdf/cdf, quadrature rules.
"""

import math
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from . import backend


def gegenbauer(ell, d, t):
    """Normalized Gegenbauer polynomial G_{ell;d}(t), with G_{ell;d}(1) = 1.

    For d = 2 this is the Legendre polynomial P_ell.  Accepts scalar or
    array t in [-1, 1].
    """
    if d < 2:
        raise ValueError(f"dimension d must be >= 2, got {d}")
    if ell < 0:
        raise ValueError(f"degree must be >= 0, got {ell}")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t_arr) > 1 + 1e-14):
        raise ValueError("Gegenbauer argument must lie in [-1, 1]")
    out = backend.gegenbauer_table(int(ell), int(d), np.clip(t_arr, -1.0, 1.0))
    return float(out[0]) if np.isscalar(t) or np.ndim(t) == 0 else out


def hermite(q, x):
    """Probabilists' Hermite polynomial H_q(x): H_{q+1} = x H_q - q H_{q-1}."""
    if q < 0:
        raise ValueError(f"order must be >= 0, got {q}")
    scalar = np.isscalar(x) or np.ndim(x) == 0
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    hm = np.ones_like(x_arr)
    if q == 0:
        return float(hm[0]) if scalar else hm
    h = x_arr.copy()
    for k in range(1, q):
        hm, h = h, x_arr * h - k * hm
    return float(h[0]) if scalar else h


def bessel_j(nu, x):
    """Bessel function J_nu(x) for x >= 0, integer or half-integer nu >= 0.

    Delegates to scipy's jv (series / asymptotic internally); the
    half-integer closed forms are used as test oracles, not here.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("bessel_j requires x >= 0")
    if nu < 0 or (2 * nu) != int(round(2 * nu)):
        raise ValueError(f"order must be a nonnegative integer or half-integer, got {nu}")
    out = _sp.jv(nu, x_arr)
    return float(out) if np.ndim(x) == 0 else out


def eigenspace_dim(ell, d):
    """Dimension n_{ell;d} of the degree-ell eigenspace on the d-sphere."""
    if d < 2:
        raise ValueError(f"dimension d must be >= 2, got {d}")
    if ell < 0:
        raise ValueError(f"degree must be >= 0, got {ell}")
    if ell == 0:
        return 1
    return (2 * ell + d - 1) * math.comb(ell + d - 2, ell - 1) // ell


def eigenvalue(ell, d):
    """Laplace eigenvalue ell (ell + d - 1) on the d-sphere."""
    return ell * (ell + d - 1)


def sphere_volume(d):
    """Hypersurface volume mu_d = 2 pi^{(d+1)/2} / Gamma((d+1)/2) of S^d."""
    if d < 0:
        raise ValueError(f"dimension must be >= 0, got {d}")
    return 2.0 * math.pi ** ((d + 1) / 2) / math.gamma((d + 1) / 2)


def gauss_pdf(z):
    z_arr = np.asarray(z, dtype=float)
    out = np.exp(-0.5 * z_arr * z_arr) / math.sqrt(2.0 * math.pi)
    return float(out) if np.ndim(z) == 0 else out


def gauss_cdf(z):
    out = _sp.ndtr(np.asarray(z, dtype=float))
    return float(out) if np.ndim(z) == 0 else out


@lru_cache(maxsize=64)
def gauss_legendre(n):
    """Cached Gauss-Legendre rule on [-1, 1]; arrays are read-only."""
    x, w = _sp.roots_legendre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre_ab(n, a, b):
    """Gauss-Legendre rule mapped to [a, b]."""
    x, w = gauss_legendre(n)
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


def bessel_zeros(nu, count):
    """First `count` positive zeros of J_nu, by McMahon bracket + brentq."""
    from scipy import optimize

    zeros = np.empty(count)
    k = 1
    found = 0
    while found < count:
        guess = (k + 0.5 * nu - 0.25) * math.pi
        for half in (0.5, 0.9):
            a = max(guess - half * math.pi, 1e-12)
            b = guess + half * math.pi
            if _sp.jv(nu, a) * _sp.jv(nu, b) < 0:
                zeros[found] = optimize.brentq(lambda t: _sp.jv(nu, t), a, b, xtol=1e-14)
                found += 1
                break
        else:
            raise RuntimeError(f"failed to bracket zero {found + 1} of J_{nu}")
        k += 1
    return zeros
