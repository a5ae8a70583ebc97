"""Pure-numpy fallback for the hot loops (same signatures as _fast_numba)."""

import numpy as np

from math import sqrt, pi


def alf_degree_table(ell, x, sintheta):
    nth = x.shape[0]
    q = np.zeros((ell + 1, nth))
    dq = np.zeros((ell + 1, nth))
    qmm = np.full(nth, sqrt(1.0 / (4.0 * pi)))
    for m in range(ell + 1):
        if m == ell:
            qlm = qmm.copy()
            qlm1 = np.zeros(nth)
        elif m == ell - 1:
            qlm = np.sqrt(2.0 * m + 3.0) * x * qmm
            qlm1 = qmm.copy()
        else:
            qnm2 = qmm.copy()
            qnm1 = np.sqrt(2.0 * m + 3.0) * x * qmm
            for n in range(m + 2, ell + 1):
                a = sqrt((4.0 * n * n - 1.0) / (n * n - m * m))
                b = sqrt(((n - 1.0) ** 2 - m * m) / (4.0 * (n - 1.0) ** 2 - 1.0))
                qnm = a * (x * qnm1 - b * qnm2)
                qnm2, qnm1 = qnm1, qnm
            qlm, qlm1 = qnm1, qnm2
        q[m] = qlm
        if ell > 0:
            c = sqrt((ell * ell - m * m) * (2.0 * ell + 1.0) / (2.0 * ell - 1.0))
            dq[m] = (ell * x * qlm - c * qlm1) / sintheta
        if m < ell:
            qmm = qmm * sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * sintheta
    return q, dq


def _geo_dist_arr(t0, p0, t1, p1):
    st0, st1 = np.sin(t0), np.sin(t1)
    dx = st0 * np.cos(p0) - st1 * np.cos(p1)
    dy = st0 * np.sin(p0) - st1 * np.sin(p1)
    dz = np.cos(t0) - np.cos(t1)
    c = np.minimum(np.sqrt(dx * dx + dy * dy + dz * dz), 2.0)
    return 2.0 * np.arcsin(0.5 * c)


def _march_cells(f00, f01, f10, f11, c00, c01, c10, c11, seglen):
    """Generic marching over a flat list of cells.

    f--: corner values (level already subtracted), c--: corner coordinate
    pairs (n, 2).  seglen(a, b) maps endpoint coordinate arrays to lengths.
    """
    s00, s01, s10, s11 = f00 > 0, f01 > 0, f10 > 0, f11 > 0
    ncross = ((s00 != s01).astype(np.int8) + (s01 != s11) + (s10 != s11) + (s00 != s10))
    active = ncross > 0
    total = 0.0

    # crossing point on each edge (parameterized between its two corners)
    def cross(fa, fb, ca, cb):
        with np.errstate(divide="ignore", invalid="ignore"):
            t = fa / (fa - fb)
        return ca + t[:, None] * (cb - ca)

    mask2 = active & (ncross == 2)
    if np.any(mask2):
        fa = [f00[mask2], f01[mask2], f10[mask2], f00[mask2]]
        fb = [f01[mask2], f11[mask2], f11[mask2], f10[mask2]]
        ca = [c00[mask2], c01[mask2], c10[mask2], c00[mask2]]
        cb = [c01[mask2], c11[mask2], c11[mask2], c10[mask2]]
        pts = np.stack([cross(fa[e], fb[e], ca[e], cb[e]) for e in range(4)])  # (4, n, 2)
        valid = np.stack([
            (f00[mask2] > 0) != (f01[mask2] > 0),
            (f01[mask2] > 0) != (f11[mask2] > 0),
            (f10[mask2] > 0) != (f11[mask2] > 0),
            (f00[mask2] > 0) != (f10[mask2] > 0),
        ])
        order = np.argsort(~valid, axis=0, kind="stable")
        n = pts.shape[1]
        cols = np.arange(n)
        p0 = pts[order[0], cols]
        p1 = pts[order[1], cols]
        total += float(np.sum(seglen(p0, p1)))

    mask4 = active & (ncross == 4)
    if np.any(mask4):
        fa = [f00[mask4], f01[mask4], f10[mask4], f00[mask4]]
        fb = [f01[mask4], f11[mask4], f11[mask4], f10[mask4]]
        ca = [c00[mask4], c01[mask4], c10[mask4], c00[mask4]]
        cb = [c01[mask4], c11[mask4], c11[mask4], c10[mask4]]
        pts = [cross(fa[e], fb[e], ca[e], cb[e]) for e in range(4)]
        centre = 0.25 * (f00[mask4] + f01[mask4] + f10[mask4] + f11[mask4])
        same = (centre > 0) == (f00[mask4] > 0)
        # same: connect (top,left)+(right,bottom); else (top,right)+(left,bottom)
        a0 = np.where(same[:, None], pts[0], pts[0])
        b0 = np.where(same[:, None], pts[3], pts[1])
        a1 = np.where(same[:, None], pts[1], pts[3])
        b1 = np.where(same[:, None], pts[2], pts[2])
        total += float(np.sum(seglen(a0, b0)) + np.sum(seglen(a1, b1)))
    return total


def march_sphere(vals, theta, dphi, z):
    nth, nph = vals.shape
    f = vals - z
    f00 = f[:-1, :].ravel()
    f01 = np.roll(f[:-1, :], -1, axis=1).ravel()
    f10 = f[1:, :].ravel()
    f11 = np.roll(f[1:, :], -1, axis=1).ravel()
    th0 = np.broadcast_to(theta[:-1, None], (nth - 1, nph)).ravel()
    th1 = np.broadcast_to(theta[1:, None], (nth - 1, nph)).ravel()
    ph0 = np.broadcast_to((np.arange(nph) * dphi)[None, :], (nth - 1, nph)).ravel()
    c00 = np.stack([th0, ph0], axis=1)
    c01 = np.stack([th0, ph0 + dphi], axis=1)
    c10 = np.stack([th1, ph0], axis=1)
    c11 = np.stack([th1, ph0 + dphi], axis=1)
    seglen = lambda a, b: _geo_dist_arr(a[:, 0], a[:, 1], b[:, 0], b[:, 1])
    return _march_cells(f00, f01, f10, f11, c00, c01, c10, c11, seglen)


def march_sphere_cap(pole_value, ring, theta_ring, pole_theta, dphi, z):
    nph = ring.shape[0]
    fp = pole_value - z
    f0 = ring - z
    f1 = np.roll(ring, -1) - z
    p0 = np.arange(nph) * dphi
    p1 = p0 + dphi
    total = 0.0
    pts_t = np.zeros((nph, 2))
    pts_p = np.zeros((nph, 2))
    count = np.zeros(nph, dtype=int)

    def add(mask, tvals, pvals):
        nonlocal pts_t, pts_p, count
        idx = np.where(mask)[0]
        for k in idx:
            pts_t[k, count[k]] = tvals[k]
            pts_p[k, count[k]] = pvals[k]
            count[k] += 1

    m = (fp > 0) != (f0 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = fp / (fp - f0)
    add(m, pole_theta + t * (theta_ring - pole_theta), p0)
    m = (fp > 0) != (f1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = fp / (fp - f1)
    add(m, pole_theta + t * (theta_ring - pole_theta), p1)
    m = (f0 > 0) != (f1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = f0 / (f0 - f1)
    add(m & (count < 2), np.full(nph, theta_ring), p0 + t * dphi)
    full = count == 2
    if np.any(full):
        total = float(np.sum(_geo_dist_arr(pts_t[full, 0], pts_p[full, 0],
                                           pts_t[full, 1], pts_p[full, 1])))
    return total


def march_torus(vals, z):
    N = vals.shape[0]
    h = 1.0 / N
    f = vals - z
    f00 = f.ravel()
    f01 = np.roll(f, -1, axis=1).ravel()
    f10 = np.roll(f, -1, axis=0).ravel()
    f11 = np.roll(np.roll(f, -1, axis=0), -1, axis=1).ravel()
    ii, jj = np.meshgrid(np.arange(N, dtype=float), np.arange(N, dtype=float), indexing="ij")
    ii = ii.ravel()
    jj = jj.ravel()
    zero = np.zeros_like(ii)
    one = np.ones_like(ii)
    c00 = np.stack([zero, zero], axis=1)
    c01 = np.stack([zero, one], axis=1)
    c10 = np.stack([one, zero], axis=1)
    c11 = np.stack([one, one], axis=1)
    seglen = lambda a, b: h * np.hypot(a[:, 0] - b[:, 0], a[:, 1] - b[:, 1])
    return _march_cells(f00, f01, f10, f11, c00, c01, c10, c11, seglen)


def torus_direct_sum(lam, re, im, N):
    K = lam.shape[0]
    grid = 2.0 * pi * np.arange(N) / N
    out = np.zeros((N, N))
    scale = 2.0 / sqrt(2.0 * K)
    for k in range(K):
        ang = lam[k, 0] * grid[:, None] + lam[k, 1] * grid[None, :]
        out += scale * (re[k] * np.cos(ang) - im[k] * np.sin(ang))
    return out


def gegenbauer_table(ell, d, x):
    gm = np.ones_like(x)
    if ell == 0:
        return gm
    g = x.copy()
    for k in range(2, ell + 1):
        gn = ((2.0 * k + d - 3.0) * x * g - (k - 1.0) * gm) / (k + d - 2.0)
        gm, g = g, gn
    return g
