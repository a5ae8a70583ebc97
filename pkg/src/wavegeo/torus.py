"""Arithmetic random waves on the unit 2-torus: lattice sets, field
synthesis, nodal length, the spectral quadratic-form vector, and the
non-Gaussian limit family M_eta.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from . import backend

_COEFF_STREAM_TAG = 0x544F  # domain separator for toral coefficient streams


class NotRepresentable(ValueError):
    """Raised when n is not a sum of two squares."""


@dataclass(frozen=True)
class LatticeSet:
    """Frequencies lambda with |lambda|^2 = n, plus cached spectral data."""
    n: int
    points: tuple            # all lattice points, sorted
    half: tuple              # half-plane representatives (l2>0 or l2=0, l1>0)
    mu_hat4_exact: Fraction  # fourth Fourier coefficient of the angle measure

    @property
    def N_n(self):
        return len(self.points)

    @property
    def mu_hat4(self):
        return float(self.mu_hat4_exact)

    @property
    def E_n(self):
        return 4.0 * math.pi ** 2 * self.n


def lattice_points(n):
    """Enumerate Lambda_n = {lambda in Z^2 : |lambda|^2 = n}.

    Raises NotRepresentable when the set is empty.
    """
    if n < 1:
        raise ValueError(f"energy index must be >= 1, got {n}")
    pts = set()
    a = 0
    while a * a <= n:
        b2 = n - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            for s1 in {a, -a}:
                for s2 in {b, -b}:
                    pts.add((s1, s2))
                    pts.add((s2, s1))
        a += 1
    if not pts:
        raise NotRepresentable(f"{n} is not a sum of two squares")
    points = tuple(sorted(pts))
    half = tuple(p for p in points if p[1] > 0 or (p[1] == 0 and p[0] > 0))
    # cos(4 theta) = (l1^4 + l2^4 - 6 l1^2 l2^2) / n^2, an exact rational
    mu4 = sum(Fraction(p[0] ** 4 + p[1] ** 4 - 6 * p[0] ** 2 * p[1] ** 2, n * n)
              for p in points) / len(points)
    return LatticeSet(n=n, points=points, half=half, mu_hat4_exact=mu4)


def mu_hat4(lattice: LatticeSet):
    """Fourth Fourier coefficient of the angular measure, as a float.

    Asserts that the conjugate-symmetric imaginary part vanishes.
    """
    ang = np.array([math.atan2(p[1], p[0]) for p in lattice.points])
    imag = float(np.mean(np.sin(4.0 * ang)))
    assert abs(imag) < 1e-12, "imaginary part of mu_hat(4) must vanish"
    return float(np.mean(np.cos(4.0 * ang)))


@dataclass(frozen=True)
class ToralCoeffs:
    """Half-plane complex Gaussian coefficients; a_{-lambda} = conj(a_lambda)."""
    n: int
    re: np.ndarray
    im: np.ndarray
    seed: int
    replicate: int = 0


@dataclass(frozen=True)
class ToralGrid:
    n: int
    N: int
    values: np.ndarray
    grad1: np.ndarray | None = None   # normalized d/dx1
    grad2: np.ndarray | None = None   # normalized d/dx2
    meta: dict = field(default_factory=dict)


def coeff_rng(n, seed, replicate):
    return Generator(Philox(SeedSequence([_COEFF_STREAM_TAG, int(seed),
                                          int(replicate), int(n)])))


def sample_coeffs(lattice: LatticeSet, seed, replicate=0):
    """Draw the half-plane coefficients: real/imag parts N(0, 1/2) i.i.d."""
    rng = coeff_rng(lattice.n, seed, replicate)
    k = len(lattice.half)
    sd = math.sqrt(0.5)
    re = rng.standard_normal(k) * sd
    im = rng.standard_normal(k) * sd
    re.setflags(write=False)
    im.setflags(write=False)
    return ToralCoeffs(n=lattice.n, re=re, im=im, seed=int(seed),
                       replicate=int(replicate))


def _ceil_sqrt(n):
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def min_grid(n):
    """Anti-aliasing floor: 4 samples per cycle of the highest frequency."""
    return 4 * _ceil_sqrt(n)


def _spectral_grid(lattice, coeffs, N, deriv=None):
    """Place conjugate-symmetric coefficients on the FFT grid; optional
    factor (2 pi i lambda_j) for derivatives."""
    spec = np.zeros((N, N), dtype=complex)
    for k, (l1, l2) in enumerate(lattice.half):
        a = coeffs.re[k] + 1j * coeffs.im[k]
        if deriv == 1:
            fac = 2j * math.pi * l1
        elif deriv == 2:
            fac = 2j * math.pi * l2
        else:
            fac = 1.0
        spec[l1 % N, l2 % N] += a * fac
        spec[(-l1) % N, (-l2) % N] += np.conj(a * fac)
    return spec


def synthesize_torus(lattice: LatticeSet, coeffs: ToralCoeffs, N=None,
                     samples_per_wavelength=8, want_gradient=False,
                     method="auto"):
    """Field values (and normalized gradient) on the uniform N x N grid.

    method: "fft" (default for large jobs), "direct" (trigonometric
    summation), or "auto" (direct only when N_n * N^2 is small).
    """
    if N is None:
        N = samples_per_wavelength * _ceil_sqrt(lattice.n)
    floor = min_grid(lattice.n)
    if N < floor:
        raise ValueError(f"grid N={N} below the anti-aliasing floor {floor} "
                         f"for n={lattice.n}")
    Nn = lattice.N_n
    if method == "auto":
        method = "direct" if Nn // 2 * N * N <= 2 * 10 ** 6 else "fft"
    if method == "direct":
        lam = np.array(lattice.half, dtype=np.int64)
        values = backend.torus_direct_sum(lam, coeffs.re, coeffs.im, N)
    elif method == "fft":
        spec = _spectral_grid(lattice, coeffs, N)
        cval = np.fft.ifft2(spec) * (N * N / math.sqrt(Nn))
        resid = float(np.max(np.abs(cval.imag)))
        if resid > 1e-10:
            raise AssertionError(f"synthesis not real: residual {resid:.2e}")
        values = np.ascontiguousarray(cval.real)
    else:
        raise ValueError(f"unknown method {method!r}")
    grad1 = grad2 = None
    if want_gradient:
        norm = math.sqrt(2.0 / lattice.E_n)
        g = []
        for j in (1, 2):
            spec = _spectral_grid(lattice, coeffs, N, deriv=j)
            gv = np.fft.ifft2(spec) * (N * N / math.sqrt(Nn))
            g.append(norm * np.ascontiguousarray(gv.real))
        grad1, grad2 = g
    return ToralGrid(n=lattice.n, N=N, values=values, grad1=grad1, grad2=grad2,
                     meta={"seed": coeffs.seed, "replicate": coeffs.replicate,
                           "method": method})


def nodal_length_torus(grid: ToralGrid, z=0.0):
    """Marching-squares length of the z-level set, periodic flat metric."""
    return backend.march_torus(grid.values, z)


def h_vector(coeffs: ToralCoeffs, lattice: LatticeSet):
    """Spectral quadratic-form vector H(n) over the half-plane frequencies:

    (n, l1^2, l2^2, l1 l2) weighted by |a_lambda|^2 - 1, normalized by
    n sqrt(N_n / 2).
    """
    lam = np.array(lattice.half, dtype=float)
    w = coeffs.re ** 2 + coeffs.im ** 2 - 1.0
    n = float(lattice.n)
    comps = np.array([
        np.sum(w) * n,
        np.sum(w * lam[:, 0] ** 2),
        np.sum(w * lam[:, 1] ** 2),
        np.sum(w * lam[:, 0] * lam[:, 1]),
    ])
    return comps / (n * math.sqrt(lattice.N_n / 2.0))


def sample_M_eta(eta, seed, count):
    """Draws of the limit law M_eta = (2 - (1+eta) X1^2 - (1-eta) X2^2) /
    (2 sqrt(1 + eta^2)) with X1, X2 i.i.d. standard Gaussian."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    rng = Generator(Philox(SeedSequence([0x4D45, int(seed)])))
    x1 = rng.standard_normal(count)
    x2 = rng.standard_normal(count)
    return (2.0 - (1.0 + eta) * x1 ** 2 - (1.0 - eta) * x2 ** 2) / (2.0 * math.sqrt(1.0 + eta ** 2))


def _r2_table(limit):
    """r_2(n) for 1 <= n <= limit by smallest-prime-factor sieve."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    r2 = np.zeros(limit + 1, dtype=np.int64)
    for n in range(1, limit + 1):
        m = n
        val = 4
        while m > 1:
            p = int(spf[m])
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            if p % 4 == 3 and a % 2 == 1:
                val = 0
                break
            if p % 4 == 1:
                val *= a + 1
        r2[n] = val
    return r2


def smallest_n_with_points(min_points, limit=10 ** 5):
    """Smallest n <= limit whose lattice has at least `min_points` points."""
    r2 = _r2_table(limit)
    for n in range(1, limit + 1):
        if r2[n] >= min_points:
            return lattice_points(n)
    raise ValueError(f"no n <= {limit} with N_n >= {min_points}")


def largest_lattice(limit=2 * 10 ** 5):
    """The n <= limit maximizing N_n (smallest such n on ties); used for
    limit-distribution checks where convergence needs many frequencies."""
    r2 = _r2_table(limit)
    n_best = int(np.argmax(r2))
    return lattice_points(n_best)
