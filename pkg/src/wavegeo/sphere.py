"""Seeded synthesis of random degree-ell eigenfunctions on the 2-sphere.

Coefficients are drawn from counter-based streams keyed by
(seed, replicate, ell) so that results do not depend on scheduling.
Fields and their normalized first derivatives are evaluated on a
Gauss-Legendre (colatitude) x uniform (longitude) grid.
"""

import math
import struct
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from . import backend
from .specfun import gauss_legendre

_COEFF_STREAM_TAG = 0x5348  # domain separator for coefficient streams

_table_cache = {}


@dataclass(frozen=True)
class HarmonicCoeffs:
    """Real-basis coefficients of one replicate at degree ell.

    Layout of values: [m=0, cos-orders 1..ell, sin-orders 1..ell]; each
    entry is N(0, 4 pi/(2 ell + 1)).
    """
    ell: int
    values: np.ndarray
    seed: int
    replicate: int = 0


@dataclass(frozen=True)
class SphereGrid:
    """Sampled field (and optional normalized gradient) with quadrature."""
    ell: int
    theta: np.ndarray          # colatitude nodes, increasing
    w_theta: np.ndarray        # Gauss-Legendre weights in cos(theta)
    n_phi: int
    values: np.ndarray         # (n_theta, n_phi)
    grad1: np.ndarray | None = None   # d/dtheta, normalized
    grad2: np.ndarray | None = None   # (1/sin theta) d/dphi, normalized
    pole_values: tuple[float, float] = (0.0, 0.0)  # (north, south)
    meta: dict = field(default_factory=dict)

    @property
    def n_theta(self):
        return self.theta.shape[0]

    @property
    def d_phi(self):
        return 2.0 * math.pi / self.n_phi

    def quad_weights(self):
        """Full 2-d quadrature weights; sum to exactly 4 pi."""
        return self.w_theta[:, None] * (self.d_phi * np.ones(self.n_phi)[None, :])

    def integrate(self, integrand):
        return float(np.sum(self.w_theta[:, None] * integrand) * self.d_phi)

    def dump_binary(self, path):
        """Header (ell, n_theta, n_phi, seed as little-endian int64), then
        the row-major float64 field values."""
        seed = int(self.meta.get("seed", 0))
        with open(path, "wb") as f:
            f.write(struct.pack("<qqqq", self.ell, self.n_theta, self.n_phi, seed))
            f.write(self.values.astype("<f8").tobytes(order="C"))


def load_binary(path):
    """Read back a dump_binary file: (ell, n_theta, n_phi, seed, values)."""
    with open(path, "rb") as f:
        ell, n_theta, n_phi, seed = struct.unpack("<qqqq", f.read(32))
        vals = np.frombuffer(f.read(8 * n_theta * n_phi), dtype="<f8")
    return ell, n_theta, n_phi, seed, vals.reshape(n_theta, n_phi)


def coeff_sigma(ell):
    """Standard deviation sqrt(4 pi / (2 ell + 1)) of each coefficient."""
    return math.sqrt(4.0 * math.pi / (2 * ell + 1))


def coeff_rng(ell, seed, replicate):
    return Generator(Philox(SeedSequence([_COEFF_STREAM_TAG, int(seed),
                                          int(replicate), int(ell)])))


def sample_coeffs(ell, seed, replicate=0):
    """Draw the 2 ell + 1 i.i.d. Gaussian coefficients of one replicate."""
    if ell < 1:
        raise ValueError("degree ell must be >= 1 (constant field excluded)")
    rng = coeff_rng(ell, seed, replicate)
    vals = rng.standard_normal(2 * ell + 1) * coeff_sigma(ell)
    vals.setflags(write=False)
    return HarmonicCoeffs(ell=ell, values=vals, seed=int(seed), replicate=int(replicate))


def grid_sizes(ell, samples_per_wavelength=6):
    """Grid sizes: at least the anti-aliasing floor, at least the
    requested number of samples per wavelength 2 pi / sqrt(ell (ell+1))."""
    lam_inv = math.sqrt(ell * (ell + 1.0)) / (2.0 * math.pi)
    n_theta = max(int(math.ceil(samples_per_wavelength * math.pi * lam_inv)),
                  2 * (ell + 1))
    n_phi = max(2 * n_theta, 2 * (2 * ell + 1))
    return n_theta, n_phi


def basis_tables(ell, n_theta):
    """Cached (x, w, theta, sintheta, q, dq) for a degree/grid pair."""
    key = (ell, n_theta, backend.backend_name())
    hit = _table_cache.get(key)
    if hit is not None:
        return hit
    x, w = gauss_legendre(n_theta)
    x = x[::-1].copy()          # theta increasing from north pole
    w = w[::-1].copy()
    theta = np.arccos(x)
    sintheta = np.sqrt(1.0 - x * x)
    q, dq = backend.alf_degree_table(ell, x, sintheta)
    for arr in (x, w, theta, sintheta, q, dq):
        arr.setflags(write=False)
    _table_cache[key] = (x, w, theta, sintheta, q, dq)
    return _table_cache[key]


def _fourier_synthesis(A, B, n_phi):
    """f(theta_i, phi_j) = sum_m A[i,m] cos(m phi_j) + B[i,m] sin(m phi_j)."""
    nm = A.shape[1]
    spec = np.zeros((A.shape[0], n_phi // 2 + 1), dtype=complex)
    spec[:, :nm] = (A - 1j * B) * (n_phi / 2.0)
    spec[:, 0] *= 2.0
    return np.fft.irfft(spec, n=n_phi, axis=1)


def synthesize(coeffs, samples_per_wavelength=6, n_theta=None, n_phi=None,
               want_gradient=True):
    """Evaluate the field of `coeffs` (and its normalized gradient) on the grid.

    Raises ValueError if the requested grid is below the anti-aliasing floor.
    """
    ell = coeffs.ell
    auto_t, auto_p = grid_sizes(ell, samples_per_wavelength)
    n_theta = auto_t if n_theta is None else n_theta
    n_phi = auto_p if n_phi is None else n_phi
    if n_phi < 2 * (2 * ell + 1) or n_theta < 2 * (ell + 1):
        raise ValueError(
            f"grid {n_theta} x {n_phi} below the anti-aliasing floor "
            f"{2 * (ell + 1)} x {2 * (2 * ell + 1)} for ell={ell}")
    x, w, theta, sintheta, q, dq = basis_tables(ell, n_theta)

    a = coeffs.values
    A = np.empty((n_theta, ell + 1))
    B = np.zeros((n_theta, ell + 1))
    A[:, 0] = a[0] * q[0]
    if ell > 0:
        A[:, 1:] = math.sqrt(2.0) * a[1:ell + 1][None, :] * q[1:].T
        B[:, 1:] = math.sqrt(2.0) * a[ell + 1:][None, :] * q[1:].T
    values = _fourier_synthesis(A, B, n_phi)

    grad1 = grad2 = None
    if want_gradient:
        norm = math.sqrt(2.0 / (ell * (ell + 1.0)))
        Ad = np.empty_like(A)
        Bd = np.zeros_like(B)
        Ad[:, 0] = a[0] * dq[0]
        if ell > 0:
            Ad[:, 1:] = math.sqrt(2.0) * a[1:ell + 1][None, :] * dq[1:].T
            Bd[:, 1:] = math.sqrt(2.0) * a[ell + 1:][None, :] * dq[1:].T
        grad1 = norm * _fourier_synthesis(Ad, Bd, n_phi)
        m = np.arange(ell + 1, dtype=float)
        grad2 = norm * _fourier_synthesis(m * B, -m * A, n_phi) / sintheta[:, None]

    # poles: only the m=0 harmonic survives, P_ell(+-1) = (+-1)^ell
    q_pole = math.sqrt((2 * ell + 1) / (4.0 * math.pi))
    north = a[0] * q_pole
    south = a[0] * q_pole * (-1.0) ** ell
    return SphereGrid(ell=ell, theta=theta, w_theta=w, n_phi=n_phi,
                      values=values, grad1=grad1, grad2=grad2,
                      pole_values=(north, south),
                      meta={"seed": coeffs.seed, "replicate": coeffs.replicate,
                            "samples_per_wavelength": samples_per_wavelength})


def evaluate_point(coeffs, theta, phi):
    """Direct basis evaluation of the field at one point (test oracle)."""
    ell = coeffs.ell
    x = np.array([math.cos(theta)])
    s = np.array([math.sin(theta)])
    q, _ = backend.alf_degree_table(ell, x, np.maximum(s, 1e-300))
    a = coeffs.values
    val = a[0] * q[0, 0]
    for m in range(1, ell + 1):
        val += math.sqrt(2.0) * q[m, 0] * (a[m] * math.cos(m * phi)
                                           + a[ell + m] * math.sin(m * phi))
    return val
