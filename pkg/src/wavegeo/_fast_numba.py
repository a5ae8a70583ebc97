"""JIT-compiled inner loops: Legendre tables, marching squares, trig sums."""

import numpy as np
from numba import njit

from math import sqrt, pi


@njit(cache=True)
def alf_degree_table(ell, x, sintheta):
    """Normalized associated Legendre values and theta-derivatives at degree ell.

    Returns q, dq of shape (ell+1, len(x)); q[m, i] is N_{ell,m} P_ell^m(x_i)
    with N chosen so that the real spherical harmonics built as
    q[0], sqrt(2) q[m] cos(m phi), sqrt(2) q[m] sin(m phi) are orthonormal
    on the sphere (surface measure, total mass 4 pi).
    dq[m, i] = d/dtheta of q[m](cos theta); requires sintheta > 0.
    """
    nth = x.shape[0]
    q = np.zeros((ell + 1, nth))
    dq = np.zeros((ell + 1, nth))
    # sectoral seed q_mm, ascended in m
    qmm = np.full(nth, sqrt(1.0 / (4.0 * pi)))
    for m in range(ell + 1):
        qlm = np.zeros(nth)
        qlm1 = np.zeros(nth)  # degree ell-1, same order
        if m == ell:
            qlm[:] = qmm
        elif m == ell - 1:
            qlm[:] = sqrt(2.0 * m + 3.0) * x * qmm
            qlm1[:] = qmm
        else:
            qnm2 = qmm.copy()
            qnm1 = sqrt(2.0 * m + 3.0) * x * qmm
            for n in range(m + 2, ell + 1):
                a = sqrt((4.0 * n * n - 1.0) / (n * n - m * m))
                b = sqrt(((n - 1.0) * (n - 1.0) - m * m) / (4.0 * (n - 1.0) * (n - 1.0) - 1.0))
                qnm = a * (x * qnm1 - b * qnm2)
                qnm2 = qnm1
                qnm1 = qnm
            qlm[:] = qnm1
            qlm1[:] = qnm2
        q[m] = qlm
        if ell > 0:
            c = sqrt((ell * ell - m * m) * (2.0 * ell + 1.0) / (2.0 * ell - 1.0))
            for i in range(nth):
                dq[m, i] = (ell * x[i] * qlm[i] - c * qlm1[i]) / sintheta[i]
        if m < ell:
            qmm = qmm * sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * sintheta
    return q, dq


@njit(cache=True, inline="always")
def _geo_dist(t0, p0, t1, p1):
    # great-circle distance via the chord
    st0 = np.sin(t0)
    st1 = np.sin(t1)
    x0 = st0 * np.cos(p0)
    y0 = st0 * np.sin(p0)
    z0 = np.cos(t0)
    x1 = st1 * np.cos(p1)
    y1 = st1 * np.sin(p1)
    z1 = np.cos(t1)
    dx = x0 - x1
    dy = y0 - y1
    dz = z0 - z1
    c = sqrt(dx * dx + dy * dy + dz * dz)
    if c > 2.0:
        c = 2.0
    return 2.0 * np.arcsin(0.5 * c)


@njit(cache=True)
def march_sphere(vals, theta, dphi, z):
    """Length of the z-level set on a colatitude/longitude grid.

    Cell edges are linearly interpolated; segment lengths are geodesic.
    Longitude is periodic; polar caps are handled by march_sphere_cap.
    """
    nth, nph = vals.shape
    total = 0.0
    xs = np.empty((4, 2))
    ok = np.empty(4, np.int64)
    for i in range(nth - 1):
        t0 = theta[i]
        t1 = theta[i + 1]
        for j in range(nph):
            jp = (j + 1) % nph
            p0 = j * dphi
            p1 = p0 + dphi
            f00 = vals[i, j] - z
            f01 = vals[i, jp] - z
            f10 = vals[i + 1, j] - z
            f11 = vals[i + 1, jp] - z
            idx = (1 if f00 > 0 else 0) | (2 if f01 > 0 else 0) | (4 if f11 > 0 else 0) | (8 if f10 > 0 else 0)
            if idx == 0 or idx == 15:
                continue
            for e in range(4):
                ok[e] = 0
            if (f00 > 0) != (f01 > 0):
                t = f00 / (f00 - f01)
                xs[0, 0] = t0
                xs[0, 1] = p0 + t * dphi
                ok[0] = 1
            if (f01 > 0) != (f11 > 0):
                t = f01 / (f01 - f11)
                xs[1, 0] = t0 + t * (t1 - t0)
                xs[1, 1] = p1
                ok[1] = 1
            if (f10 > 0) != (f11 > 0):
                t = f10 / (f10 - f11)
                xs[2, 0] = t1
                xs[2, 1] = p0 + t * dphi
                ok[2] = 1
            if (f00 > 0) != (f10 > 0):
                t = f00 / (f00 - f10)
                xs[3, 0] = t0 + t * (t1 - t0)
                xs[3, 1] = p0
                ok[3] = 1
            cnt = ok[0] + ok[1] + ok[2] + ok[3]
            if cnt == 2:
                e0 = -1
                e1 = -1
                for e in range(4):
                    if ok[e] == 1:
                        if e0 < 0:
                            e0 = e
                        else:
                            e1 = e
                total += _geo_dist(xs[e0, 0], xs[e0, 1], xs[e1, 0], xs[e1, 1])
            elif cnt == 4:
                # saddle: disambiguate with the cell-centre average
                c = 0.25 * (f00 + f01 + f10 + f11)
                if (c > 0) == (f00 > 0):
                    total += _geo_dist(xs[0, 0], xs[0, 1], xs[3, 0], xs[3, 1])
                    total += _geo_dist(xs[1, 0], xs[1, 1], xs[2, 0], xs[2, 1])
                else:
                    total += _geo_dist(xs[0, 0], xs[0, 1], xs[1, 0], xs[1, 1])
                    total += _geo_dist(xs[3, 0], xs[3, 1], xs[2, 0], xs[2, 1])
    return total


@njit(cache=True)
def march_sphere_cap(pole_value, ring, theta_ring, pole_theta, dphi, z):
    """Level-set length inside a polar cap, pole treated as a single vertex.

    Triangles (pole, ring_j, ring_{j+1}); each is marched like a 3-edge cell.
    """
    nph = ring.shape[0]
    fp = pole_value - z
    total = 0.0
    for j in range(nph):
        jp = (j + 1) % nph
        p0 = j * dphi
        p1 = p0 + dphi
        f0 = ring[j] - z
        f1 = ring[jp] - z
        npts = 0
        ta = 0.0
        pa = 0.0
        tb = 0.0
        pb = 0.0
        if (fp > 0) != (f0 > 0):
            t = fp / (fp - f0)
            ta = pole_theta + t * (theta_ring - pole_theta)
            pa = p0
            npts += 1
        if (fp > 0) != (f1 > 0):
            t = fp / (fp - f1)
            if npts == 0:
                ta = pole_theta + t * (theta_ring - pole_theta)
                pa = p1
            else:
                tb = pole_theta + t * (theta_ring - pole_theta)
                pb = p1
            npts += 1
        if (f0 > 0) != (f1 > 0):
            t = f0 / (f0 - f1)
            if npts == 1:
                tb = theta_ring
                pb = p0 + t * dphi
                npts += 1
        if npts == 2:
            total += _geo_dist(ta, pa, tb, pb)
    return total


@njit(cache=True)
def march_torus(vals, z):
    """Length of the z-level set of a field sampled on the unit 2-torus.

    Uniform N x N grid, periodic in both directions, flat metric.
    """
    N = vals.shape[0]
    h = 1.0 / N
    total = 0.0
    xs = np.empty((4, 2))
    ok = np.empty(4, np.int64)
    for i in range(N):
        ip = (i + 1) % N
        for j in range(N):
            jp = (j + 1) % N
            f00 = vals[i, j] - z
            f01 = vals[i, jp] - z
            f10 = vals[ip, j] - z
            f11 = vals[ip, jp] - z
            idx = (1 if f00 > 0 else 0) | (2 if f01 > 0 else 0) | (4 if f11 > 0 else 0) | (8 if f10 > 0 else 0)
            if idx == 0 or idx == 15:
                continue
            for e in range(4):
                ok[e] = 0
            if (f00 > 0) != (f01 > 0):
                t = f00 / (f00 - f01)
                xs[0, 0] = 0.0
                xs[0, 1] = t
                ok[0] = 1
            if (f01 > 0) != (f11 > 0):
                t = f01 / (f01 - f11)
                xs[1, 0] = t
                xs[1, 1] = 1.0
                ok[1] = 1
            if (f10 > 0) != (f11 > 0):
                t = f10 / (f10 - f11)
                xs[2, 0] = 1.0
                xs[2, 1] = t
                ok[2] = 1
            if (f00 > 0) != (f10 > 0):
                t = f00 / (f00 - f10)
                xs[3, 0] = t
                xs[3, 1] = 0.0
                ok[3] = 1
            cnt = ok[0] + ok[1] + ok[2] + ok[3]
            if cnt == 2:
                e0 = -1
                e1 = -1
                for e in range(4):
                    if ok[e] == 1:
                        if e0 < 0:
                            e0 = e
                        else:
                            e1 = e
                dx = (xs[e0, 0] - xs[e1, 0]) * h
                dy = (xs[e0, 1] - xs[e1, 1]) * h
                total += sqrt(dx * dx + dy * dy)
            elif cnt == 4:
                c = 0.25 * (f00 + f01 + f10 + f11)
                if (c > 0) == (f00 > 0):
                    dx = (xs[0, 0] - xs[3, 0]) * h
                    dy = (xs[0, 1] - xs[3, 1]) * h
                    total += sqrt(dx * dx + dy * dy)
                    dx = (xs[1, 0] - xs[2, 0]) * h
                    dy = (xs[1, 1] - xs[2, 1]) * h
                    total += sqrt(dx * dx + dy * dy)
                else:
                    dx = (xs[0, 0] - xs[1, 0]) * h
                    dy = (xs[0, 1] - xs[1, 1]) * h
                    total += sqrt(dx * dx + dy * dy)
                    dx = (xs[3, 0] - xs[2, 0]) * h
                    dy = (xs[3, 1] - xs[2, 1]) * h
                    total += sqrt(dx * dx + dy * dy)
    return total


@njit(cache=True)
def torus_direct_sum(lam, re, im, N):
    """Field values on an N x N grid by direct trigonometric summation.

    lam: (K, 2) half-plane frequency set; re/im: coefficient parts.
    Returns sqrt(2/N_n)-normalized real field (N_n = 2K).
    """
    K = lam.shape[0]
    out = np.zeros((N, N))
    scale = 2.0 / sqrt(2.0 * K)
    for k in range(K):
        l1 = lam[k, 0]
        l2 = lam[k, 1]
        for i in range(N):
            a1 = 2.0 * pi * l1 * i / N
            for j in range(N):
                ang = a1 + 2.0 * pi * l2 * j / N
                out[i, j] += scale * (re[k] * np.cos(ang) - im[k] * np.sin(ang))
    return out


@njit(cache=True)
def gegenbauer_table(ell, d, x):
    """Normalized Gegenbauer G_{ell;d} on an array, by the stable recurrence.

    G_0 = 1, G_1 = x, (n+d-2) G_n = (2n+d-3) x G_{n-1} - (n-1) G_{n-2};
    the normalization G(1) = 1 keeps every value in [-1, 1].
    """
    n = x.shape[0]
    gm = np.ones(n)
    if ell == 0:
        return gm
    g = x.copy()
    for k in range(2, ell + 1):
        gn = ((2.0 * k + d - 3.0) * x * g - (k - 1.0) * gm) / (k + d - 2.0)
        gm = g
        g = gn
    return g
