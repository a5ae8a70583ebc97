"""Is the distance kernel of a compact homogeneous space restricted
negative definite (equivalently: is the associated Brownian-motion
covariance positive definite)?  Character expansions for SO(3) and SU(2),
zonal Legendre coefficients for the 2-sphere, and empirical Gram tests.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from .specfun import gauss_legendre_ab

EIGEN_TOL = 1e-10


# ---------------------------------------------------------------------------
# SO(3): rotation-angle law and character coefficients

def trace_density(y):
    """Density of tr(g) under Haar measure: (1/2pi) sqrt(3-y)/sqrt(y+1) on [-1, 3]."""
    y = np.asarray(y, dtype=float)
    inside = (y > -1.0) & (y < 3.0)
    out = np.zeros_like(y)
    out[inside] = np.sqrt(3.0 - y[inside]) / np.sqrt(y[inside] + 1.0) / (2.0 * math.pi)
    return out if out.ndim else float(out)


def angle_density(t):
    """Density of the rotation angle on [0, pi]: (1 - cos t) / pi."""
    t = np.asarray(t, dtype=float)
    out = np.where((t >= 0) & (t <= math.pi), (1.0 - np.cos(t)) / math.pi, 0.0)
    return out if out.ndim else float(out)


def angle_cdf(t):
    return (t - np.sin(t)) / math.pi


def so3_character(ell, t):
    """chi_ell(t) = 1 + 2 sum_{m<=ell} cos(m t); equals 2 ell + 1 at t = 0."""
    t = np.asarray(t, dtype=float)
    acc = np.ones_like(t)
    for m in range(1, ell + 1):
        acc = acc + 2.0 * np.cos(m * t)
    return acc if acc.ndim else float(acc)


def so3_alpha(ell, method="closed"):
    """Expansion coefficient of the rotation-angle distance on SO(3).

    closed: partial-fraction evaluation of int t chi_ell p_T dt
    (the pi^2 pieces of the m = 1 term cancel against the constant term).
    quadrature: direct Gauss-Legendre of the same integral.
    """
    if ell < 0:
        raise ValueError("ell must be >= 0")
    if method == "closed":
        if ell == 0:
            return math.pi / 2.0 + 2.0 / math.pi
        s1 = sum(((-1) ** m - 1.0) / m ** 2 for m in range(1, ell + 1))
        s2 = sum((m * m + 1.0) / (m * m - 1.0) ** 2 * ((-1) ** m + 1.0)
                 for m in range(2, ell + 1))
        return 2.0 / math.pi * (1.0 + s1 + s2)
    if method == "quadrature":
        t, w = gauss_legendre_ab(max(8 * ell + 64, 128), 0.0, math.pi)
        return float(np.dot(w, t * so3_character(ell, t) * angle_density(t)))
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# SU(2)

def su2_character(ell, t):
    """chi_ell(t) = sin((ell+1) t) / sin(t), continuously extended at 0, pi."""
    t = np.asarray(t, dtype=float)
    small = np.abs(np.sin(t)) < 1e-12
    out = np.empty_like(t)
    out[~small] = np.sin((ell + 1) * t[~small]) / np.sin(t[~small])
    out[small] = (ell + 1.0) * np.cos(t[small]) ** ell
    return out if out.ndim else float(out)


def su2_alpha(ell, method="closed"):
    """(1/pi) int_0^pi t sin((ell+1) t) sin t dt.

    Exact antiderivative: 0 for even ell and
    -(4/pi)(ell+1) / (ell^2 (ell+2)^2) for odd ell.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if method == "closed":
        if ell % 2 == 0:
            return 0.0
        return -4.0 / math.pi * (ell + 1.0) / (ell ** 2 * (ell + 2.0) ** 2)
    if method == "quadrature":
        t, w = gauss_legendre_ab(max(8 * ell + 64, 128), 0.0, math.pi)
        return float(np.dot(w, t * np.sin((ell + 1) * t) * np.sin(t))) / math.pi
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# 2-sphere zonal coefficients (Levy construction)

def arccos_legendre_coeff(ell):
    """c_ell = int_-1^1 arcsin(t) P_ell(t) dt:
    pi {3.5...(ell-2) / 2.4...(ell+1)}^2 for odd ell, 0 for even."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if ell % 2 == 0:
        return 0.0
    num = 1.0
    for k in range(3, ell - 1, 2):
        num *= k
    den = 1.0
    for k in range(2, ell + 2, 2):
        den *= k
    return math.pi * (num / den) ** 2


def halfsphere_coeff(ell):
    """Zonal coefficient of sqrt(pi) 1_{half-sphere} (normalized measure):
    (-1)^m (1/2) sqrt(2 ell + 1) sqrt(c_ell) for ell = 2m+1, 0 for even."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if ell % 2 == 0:
        return 0.0
    m = (ell - 1) // 2
    return (-1.0) ** m * 0.5 * math.sqrt(2 * ell + 1) * math.sqrt(arccos_legendre_coeff(ell))


def legendre_int01(ell):
    """int_0^1 P_ell(t) dt: (-1)^m (2m)! / (2^{2m+1} m! (m+1)!) for
    ell = 2m+1, 0 for even ell >= 2 (Rodrigues formula)."""
    if ell % 2 == 0:
        return 0.0
    m = (ell - 1) // 2
    return ((-1.0) ** m * math.factorial(2 * m)
            / (2.0 ** (2 * m + 1) * math.factorial(m) * math.factorial(m + 1)))


def s2_alpha(ell):
    """Zonal expansion coefficient of the geodesic distance on S^2:
    -(2 ell + 1) c_ell / 2 for ell >= 1 (never positive)."""
    return -(2 * ell + 1) / 2.0 * arccos_legendre_coeff(ell)


# ---------------------------------------------------------------------------
# Verdicts

@dataclass(frozen=True)
class KernelVerdict:
    space: str
    lmax: int
    alphas: tuple
    restricted_negative_definite: bool
    witness: str


_ALPHA_FAMILY = {"so3": so3_alpha, "su2": su2_alpha, "s2": s2_alpha}


def character_verdict(space, lmax):
    """Expand the distance in characters up to lmax; the kernel is
    restricted negative definite iff every coefficient at ell >= 1 is <= 0
    (beyond tolerance)."""
    fam = _ALPHA_FAMILY.get(space)
    if fam is None:
        raise ValueError(f"unknown space {space!r}; expected so3, su2 or s2")
    alphas = tuple(fam(ell) for ell in range(1, lmax + 1))
    for ell, a in enumerate(alphas, start=1):
        if a > EIGEN_TOL:
            return KernelVerdict(space, lmax, alphas, False,
                                 f"alpha_{ell} = {a:.12g} > 0")
    return KernelVerdict(space, lmax, alphas, True,
                         f"all alpha_ell <= 0 for 1 <= ell <= {lmax}")


@dataclass(frozen=True)
class GramResult:
    space: str
    n_points: int
    max_eigenvalue: float
    restricted_negative_definite: bool


def gram_restricted_nd_test(dist_matrix, space="custom"):
    """Project the distance matrix onto the zero-sum subspace and report
    the maximum eigenvalue; negative semidefinite there means the sample
    is consistent with a restricted negative definite kernel."""
    D = np.asarray(dist_matrix, dtype=float)
    n = D.shape[0]
    if n < 3:
        raise ValueError("need at least 3 points")
    if not np.allclose(D, D.T, atol=1e-12):
        raise ValueError("distance matrix must be symmetric")
    if np.min(D + np.eye(n)) < -1e-15:
        warnings.warn("negative distances in the Gram test input")
    if np.min(np.max(D, axis=1)) < 1e-12:
        warnings.warn("degenerate point multiset: repeated points")
    P = np.eye(n) - np.full((n, n), 1.0 / n)
    B = P @ D @ P
    B = 0.5 * (B + B.T)
    lam = np.linalg.eigvalsh(B)
    mx = float(lam[-1])
    return GramResult(space, n, mx, mx <= EIGEN_TOL)


# ---------------------------------------------------------------------------
# Sampling: uniform points on S^2, Haar rotations on SO(3)

def sample_s2_points(count, seed):
    rng = Generator(Philox(SeedSequence([0x5332, int(seed)])))
    v = rng.standard_normal((count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def s2_distance_matrix(points):
    g = np.clip(points @ points.T, -1.0, 1.0)
    return np.arccos(g)


def sample_rotation_angle(count, rng):
    """Rotation angles with density (1 - cos t)/pi via Newton inversion of
    the cdf (t - sin t)/pi."""
    u = rng.uniform(0.0, 1.0, count)
    t = np.full(count, math.pi / 2)
    for _ in range(60):
        f = (t - np.sin(t)) / math.pi - u
        df = (1.0 - np.cos(t)) / math.pi
        step = f / np.maximum(df, 1e-14)
        t = np.clip(t - step, 0.0, math.pi)
        if np.max(np.abs(step)) < 1e-14:
            break
    return t


def sample_so3(count, seed):
    """Haar-uniform rotation matrices: angle from the exact marginal law,
    axis uniform on the sphere, assembled by the Rodrigues formula."""
    rng = Generator(Philox(SeedSequence([0x534F, int(seed)])))
    angles = sample_rotation_angle(count, rng)
    axes = rng.standard_normal((count, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    mats = np.empty((count, 3, 3))
    for i in range(count):
        kx, ky, kz = axes[i]
        K = np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])
        t = angles[i]
        mats[i] = np.eye(3) + math.sin(t) * K + (1.0 - math.cos(t)) * (K @ K)
    return mats


def so3_distance_matrix(mats):
    """Bi-invariant distance: rotation angle of g h^{-1}."""
    n = mats.shape[0]
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            tr = float(np.trace(mats[i] @ mats[j].T))
            D[i, j] = D[j, i] = math.acos(min(1.0, max(-1.0, (tr - 1.0) / 2.0)))
    return D
