"""Closed-form, series and quadrature oracles: every expectation, variance
constant and asymptotic coefficient that the simulations are compared to.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import backend
from .specfun import (bessel_zeros, gauss_cdf, gauss_legendre_ab, gauss_pdf,
                      eigenspace_dim, hermite, sphere_volume)

SQRT_PI_2 = math.sqrt(math.pi / 2.0)


@dataclass(frozen=True)
class OracleValue:
    name: str
    value: float
    method: str          # closed-form | quadrature | series
    error_bound: float   # internally estimated, 0 for closed forms


# ---------------------------------------------------------------------------
# Gegenbauer moments

def gegenbauer_moment(ell, q, d, half=True, nodes=None):
    """int G_{ell;d}(cos t)^q sin^{d-1} t dt over [0, pi/2] (half) or [0, pi].

    Gauss-Legendre with at least 8 ell nodes resolves the oscillation.
    """
    if ell < 1 or q < 1 or d < 2:
        raise ValueError("need ell >= 1, q >= 1, d >= 2")
    n = nodes or max(8 * ell, 256)
    upper = math.pi / 2 if half else math.pi
    t, w = gauss_legendre_ab(n, 0.0, upper)
    g = backend.gegenbauer_table(ell, d, np.cos(t))
    return float(np.dot(w, g ** q * np.sin(t) ** (d - 1)))


def gegenbauer_second_moment(ell, d):
    """Closed form of the full-range second moment: mu_d / (mu_{d-1} n_{ell;d})."""
    return sphere_volume(d) / (sphere_volume(d - 1) * eigenspace_dim(ell, d))


# ---------------------------------------------------------------------------
# Bessel-kernel constants c_{q;d}

def bessel_kernel(d, psi):
    """B_d(psi) = 2^{d/2-1} (d/2-1)! J_{d/2-1}(psi) psi^{-(d/2-1)}, the
    scaling limit of G_{ell;d}(cos(psi/ell)); bounded by 1."""
    nu = d / 2.0 - 1.0
    psi = np.asarray(psi, dtype=float)
    pref = 2.0 ** nu * math.gamma(d / 2.0)
    with np.errstate(invalid="ignore"):
        out = pref * _sp.jv(nu, psi) * psi ** (-nu)
    out = np.where(psi == 0.0, 1.0, out)
    return np.clip(out, -1.0, 1.0)


def _euler_accelerated(pieces, skip):
    """Accelerate the alternating cumulative sums by iterated averaging.

    Returns (value, error_estimate); the estimate is the change produced
    by the final averaging pass.
    """
    s = np.cumsum(pieces)[skip:]
    est = float(s[-1])
    err = abs(float(pieces[-1]))
    while len(s) > 1:
        s = 0.5 * (s[:-1] + s[1:])
        err = abs(float(s[-1]) - est)
        est = float(s[-1])
    return est, err


def _osc_bessel_integral(f, nu, nzeros=160, ngl=40, skip=24):
    """Integrate f over [0, inf) where f alternates sign between consecutive
    zeros of J_nu: per-interval Gauss-Legendre, then Euler acceleration of
    the conditionally convergent partial sums."""
    from .specfun import gauss_legendre

    zeros = bessel_zeros(nu, nzeros)
    x0, w0 = gauss_legendre(ngl)
    pts = np.concatenate([[0.0], zeros])
    a = pts[:-1][:, None]
    b = pts[1:][:, None]
    xm = 0.5 * (b - a) * x0[None, :] + 0.5 * (a + b)
    pieces = np.sum(0.5 * (b - a) * w0[None, :] * f(xm), axis=1)
    return _euler_accelerated(pieces, skip)


def cqd_constant(q, d, as_oracle=False):
    """Asymptotic moment constant c_{q;d}.

    q = 2 and (q, d) = (4, 2) admit closed forms (the latter is the
    coefficient of the logarithmic growth); otherwise the oscillatory
    Bessel integral int B_d(psi)^q psi^{d-1} dpsi is evaluated by
    zero-partitioned quadrature with series acceleration, which also
    handles the conditionally convergent cases (3, 2) and (3, 3).
    """
    if d < 2 or q < 2:
        raise ValueError("need q >= 2, d >= 2")
    if q == 2:
        val = math.factorial(d - 1) * sphere_volume(d) / (4.0 * sphere_volume(d - 1))
        return OracleValue(f"c_{q};{d}", val, "closed-form", 0.0) if as_oracle else val
    if (q, d) == (4, 2):
        val = 3.0 / (2.0 * math.pi ** 2)
        return OracleValue("c_4;2", val, "closed-form", 0.0) if as_oracle else val
    nu = d / 2.0 - 1.0
    val, err = _osc_bessel_integral(
        lambda x: bessel_kernel(d, x) ** q * x ** (d - 1), nu)
    return OracleValue(f"c_{q};{d}", val, "quadrature", err) if as_oracle else val


def c3d_closed_form(d):
    """Closed form of c_{3;d} (positive for every d >= 2)."""
    return ((2.0 ** (d / 2.0 - 1.0) * math.gamma(d / 2.0)) ** 3
            * 3.0 ** (d / 2.0 - 1.5)
            / (2.0 ** (3.0 * (d / 2.0 - 1.0) - 1.0) * math.sqrt(math.pi)
               * math.gamma(d / 2.0 - 0.5)))


# ---------------------------------------------------------------------------
# Defect variance constant C_d

def arcsine_taylor(k):
    """a_k in arcsin(t) - t = sum_k a_k t^{2k+1}."""
    return math.factorial(2 * k) / (4.0 ** k * math.factorial(k) ** 2 * (2 * k + 1))


def defect_variance_constant(d, method="integral", terms=60, as_oracle=False):
    """C_d with Var(D_ell) ~ C_d / ell^d along even degrees.

    method="integral": (4/pi) mu_d mu_{d-1} int psi^{d-1} (arcsin B_d - B_d).
    method="series":   same prefactor times sum_k a_k c_{2k+1;d} to `terms`,
    plus the Laplace-regime tail sum_{k>terms} a_k (1/2)Gamma(d/2)(2d/(2k+1))^{d/2}
    (the integrals concentrate at 0 for large order, B_d ~ exp(-psi^2/(2d))).
    """
    pref = 4.0 / math.pi * sphere_volume(d) * sphere_volume(d - 1)
    if method == "integral":
        nu = d / 2.0 - 1.0

        def f(x):
            b = bessel_kernel(d, x)
            return x ** (d - 1) * (np.arcsin(b) - b)

        val, err = _osc_bessel_integral(f, nu)
        out = OracleValue(f"C_{d}", pref * val, "quadrature", pref * err)
    elif method == "series":
        acc = 0.0
        for k in range(1, terms + 1):
            acc += arcsine_taylor(k) * cqd_constant(2 * k + 1, d)
        tail = 0.0
        k = terms + 1
        while True:
            t = arcsine_taylor(k) * 0.5 * math.gamma(d / 2.0) * (2.0 * d / (2 * k + 1)) ** (d / 2.0)
            tail += t
            if t < 1e-14 * (acc + tail) or k > terms + 200000:
                break
            k += 1
        out = OracleValue(f"C_{d}", pref * (acc + tail), "series", pref * tail * 0.05)
    else:
        raise ValueError(f"unknown method {method!r}")
    return out if as_oracle else out.value


def defect_variance_exact(ell, d=2, nodes=None):
    """Finite-degree defect variance (even ell):
    (4/pi) mu_d mu_{d-1} int_0^{pi/2} arcsin(G_{ell;d}(cos t)) sin^{d-1} t dt."""
    if ell % 2:
        return 0.0
    n = nodes or max(16 * ell, 512)
    t, w = gauss_legendre_ab(n, 0.0, math.pi / 2)
    g = np.clip(backend.gegenbauer_table(ell, d, np.cos(t)), -1.0, 1.0)
    val = float(np.dot(w, np.arcsin(g) * np.sin(t) ** (d - 1)))
    return 4.0 / math.pi * sphere_volume(d) * sphere_volume(d - 1) * val


# ---------------------------------------------------------------------------
# Expectations / variance laws for the sphere functionals

def expected_values(ell, d, z):
    """Expectations and leading variance laws for the sampled functionals.

    Length entries apply to d = 2 only.  The z = 0 variance law for the
    length is the logarithmic (nodal) regime and is returned under its own
    key; the generic-level law is meaningless there.
    """
    mu_d = sphere_volume(d)
    n_ell = eigenspace_dim(ell, d)
    out = {
        "area_mean": mu_d * (1.0 - gauss_cdf(z)),
        "area_var_leading": z * z * gauss_pdf(z) ** 2 * mu_d ** 2 / (2.0 * n_ell),
        "nodal_regime": z == 0.0,
    }
    if d == 2:
        scale = math.sqrt(ell * (ell + 1.0))
        out["length_mean"] = 4.0 * math.pi * math.exp(-z * z / 2.0) / (2.0 * math.sqrt(2.0)) * scale
        out["length_var_leading"] = (math.pi ** 2 / 2.0) * z ** 4 * math.exp(-z * z) * ell
        out["nodal_length_var_leading"] = math.log(ell) / 32.0
        out["second_chaos_var"] = (ell * (ell + 1.0) * (2.0 / (2 * ell + 1.0))
                                   * (math.pi ** 2 / 2.0) * math.exp(-z * z) * z ** 4)
    return out


# ---------------------------------------------------------------------------
# Torus oracles

def psi_of_eta(eta):
    """psi(eta) = (3 + eta)/8."""
    return (3.0 + eta) / 8.0


def sigma_matrix(psi):
    """Limiting covariance of the spectral quadratic-form vector."""
    return np.array([
        [1.0, 0.5, 0.5, 0.0],
        [0.5, psi, 0.5 - psi, 0.0],
        [0.5, 0.5 - psi, psi, 0.0],
        [0.0, 0.0, 0.0, 0.5 - psi],
    ])


def m_eta_ab(eta):
    """Coefficients of M_eta = a H_2(X1) + b H_2(X2)."""
    den = math.sqrt(4.0 * (1.0 + eta * eta))
    return -(1.0 + eta) / den, -(1.0 - eta) / den


def m_eta_cumulant(eta, p):
    """kappa_p(M_eta) = 2^{p-1} (p-1)! (a^p + b^p)."""
    a, b = m_eta_ab(eta)
    return 2.0 ** (p - 1) * math.factorial(p - 1) * (a ** p + b ** p)


def torus_oracles(lattice):
    """Variance constant, leading nodal-length variance, Sigma and the
    limit-law parameters for one lattice set."""
    m4 = lattice.mu_hat4
    eta = abs(m4)
    c_n = (1.0 + m4 * m4) / 512.0
    a, b = m_eta_ab(eta)
    return {
        "mu_hat4": m4,
        "c_n": c_n,
        "length_mean": math.sqrt(lattice.E_n) / (2.0 * math.sqrt(2.0)),
        "length_var_leading": c_n * lattice.E_n / lattice.N_n ** 2,
        "psi": psi_of_eta(m4),
        "sigma": sigma_matrix(psi_of_eta(m4)),
        "eta": eta,
        "a": a,
        "b": b,
        "kappa": lambda p: m_eta_cumulant(eta, p),
        "support_max": 1.0 / math.sqrt(1.0 + eta * eta),
    }


def quadratic_form_variance(psi):
    """Var(1 + Z1^2 - 2 Z2^2 - 2 Z3^2 - 4 Z4^2) = 2 tr((A Sigma)^2) for
    Z ~ N(0, Sigma(psi)), A = diag(1, -2, -2, -4)."""
    A = np.diag([1.0, -2.0, -2.0, -4.0])
    M = A @ sigma_matrix(psi)
    return 2.0 * float(np.trace(M @ M))


# ---------------------------------------------------------------------------
# Independent quadrature oracle for the norm-expansion coefficients

def alpha_quadrature(a, b, radial_nodes=400, angular_nodes=512, radius=15.0):
    """(1/2pi) int sqrt(y^2+z^2) H_a(y) H_b(z) exp(-(y^2+z^2)/2) dy dz by
    polar coordinates: Gauss-Legendre radially (the integrand is analytic
    there), trapezoid in the angle (periodic, spectrally accurate).

    Tensor Gauss-Hermite fails here: the integrand's conical point at the
    origin kills its convergence.
    """
    r, wr = gauss_legendre_ab(radial_nodes, 0.0, radius)
    t = np.linspace(0.0, 2.0 * math.pi, angular_nodes, endpoint=False)
    y = r[:, None] * np.cos(t)[None, :]
    z = r[:, None] * np.sin(t)[None, :]
    f = hermite(a, y) * hermite(b, z)
    radial = r ** 2 * np.exp(-r * r / 2.0) * wr
    return float(np.sum(radial[:, None] * f) * (2.0 * math.pi / angular_nodes) / (2.0 * math.pi))
