# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled geometry kernels: coupled-rotor metric stacks and curvature from jets."""

import numpy as np

from libc.math cimport cos, fabs, sin, tan, NAN

cdef enum:
    MAXDIM = 8


cdef int _invert(double *a, double *out, int n) noexcept nogil:
    """Gauss-Jordan with partial pivoting; ``a`` (n*n) is destroyed. Returns 0 if singular."""
    cdef int i, j, k, piv
    cdef double best, t, f
    for i in range(n):
        for j in range(n):
            out[i * n + j] = 1.0 if i == j else 0.0
    for k in range(n):
        piv = k
        best = fabs(a[k * n + k])
        for i in range(k + 1, n):
            if fabs(a[i * n + k]) > best:
                best = fabs(a[i * n + k])
                piv = i
        if best == 0.0:
            return 0
        if piv != k:
            for j in range(n):
                t = a[k * n + j]; a[k * n + j] = a[piv * n + j]; a[piv * n + j] = t
                t = out[k * n + j]; out[k * n + j] = out[piv * n + j]; out[piv * n + j] = t
        f = 1.0 / a[k * n + k]
        for j in range(n):
            a[k * n + j] *= f
            out[k * n + j] *= f
        for i in range(n):
            if i != k:
                f = a[i * n + k]
                if f != 0.0:
                    for j in range(n):
                        a[i * n + j] -= f * a[k * n + j]
                        out[i * n + j] -= f * out[k * n + j]
    return 1


cdef void _coupled_inverse(double th, double ph, double thp, double php,
                           double I_L, double I_S, double lam, double *G) noexcept nogil:
    cdef double d = ph - php
    cdef double cot = 1.0 / tan(th)
    cdef double cotp = 1.0 / tan(thp)
    cdef double s = sin(th)
    cdef double sp = sin(thp)
    cdef int i
    for i in range(16):
        G[i] = 0.0
    G[0] = 1.0 / I_L
    G[5] = 1.0 / (I_L * s * s)
    G[10] = 1.0 / I_S
    G[15] = 1.0 / (I_S * sp * sp)
    G[2] = lam * cos(d)
    G[3] = lam * cotp * sin(d)
    G[6] = -lam * cot * sin(d)
    G[7] = lam * (cot * cotp * cos(d) + 1.0)
    G[8] = G[2]
    G[12] = G[3]
    G[9] = G[6]
    G[13] = G[7]


def coupled_inverse_metric_batch(points, double I_L, double I_S, double inv_I_LS):
    cdef double[:, ::1] p = np.ascontiguousarray(points, dtype=float)
    cdef Py_ssize_t n = p.shape[0], k
    out = np.empty((n, 4, 4))
    cdef double[:, :, ::1] o = out
    cdef double G[16]
    cdef int i
    with nogil:
        for k in range(n):
            _coupled_inverse(p[k, 0], p[k, 1], p[k, 2], p[k, 3], I_L, I_S, inv_I_LS, G)
            for i in range(16):
                o[k, i // 4, i % 4] = G[i]
    return out


def coupled_metric_batch(points, double I_L, double I_S, double inv_I_LS):
    cdef double[:, ::1] p = np.ascontiguousarray(points, dtype=float)
    cdef Py_ssize_t n = p.shape[0], k
    g_out = np.empty((n, 4, 4))
    G_out = np.empty((n, 4, 4))
    cdef double[:, :, ::1] go = g_out
    cdef double[:, :, ::1] Go = G_out
    cdef double G[16]
    cdef double work[16]
    cdef double inv[16]
    cdef int i, j
    with nogil:
        for k in range(n):
            _coupled_inverse(p[k, 0], p[k, 1], p[k, 2], p[k, 3], I_L, I_S, inv_I_LS, G)
            for i in range(16):
                work[i] = G[i]
                Go[k, i // 4, i % 4] = G[i]
            if _invert(work, inv, 4):
                for i in range(4):
                    for j in range(4):
                        go[k, i, j] = 0.5 * (inv[i * 4 + j] + inv[j * 4 + i])
            else:
                for i in range(16):
                    go[k, i // 4, i % 4] = NAN
    return g_out, G_out


def curvature_from_jets(g, dg, ddg):
    cdef double[:, ::1] gv = np.ascontiguousarray(g, dtype=float)
    cdef double[:, :, ::1] d1 = np.ascontiguousarray(dg, dtype=float)
    cdef double[:, :, :, ::1] d2 = np.ascontiguousarray(ddg, dtype=float)
    cdef int n = gv.shape[0]
    if n > MAXDIM:
        raise ValueError("dimension too large for the compiled kernel")
    cdef double work[MAXDIM * MAXDIM]
    cdef double gi[MAXDIM * MAXDIM]
    cdef int a, b, c, r, s, m, l
    cdef double acc, R
    for a in range(n):
        for b in range(n):
            work[a * n + b] = gv[a, b]
    if not _invert(work, gi, n):
        raise ZeroDivisionError("singular metric")
    for a in range(n):
        for b in range(a + 1, n):
            acc = 0.5 * (gi[a * n + b] + gi[b * n + a])
            gi[a * n + b] = acc
            gi[b * n + a] = acc

    Gl_arr = np.empty((n, n, n))
    Gu_arr = np.zeros((n, n, n))
    dgi_arr = np.zeros((n, n, n))
    dGu_arr = np.zeros((n, n, n, n))
    ricci_arr = np.zeros((n, n))
    cdef double[:, :, ::1] Gl = Gl_arr
    cdef double[:, :, ::1] Gu = Gu_arr
    cdef double[:, :, ::1] dgi = dgi_arr
    cdef double[:, :, :, ::1] dGu = dGu_arr
    cdef double[:, ::1] ric = ricci_arr

    with nogil:
        for a in range(n):
            for b in range(n):
                for c in range(b, n):
                    acc = 0.5 * (d1[b, a, c] + d1[c, a, b] - d1[a, b, c])
                    Gl[a, b, c] = acc
                    Gl[a, c, b] = acc
        for r in range(n):
            for b in range(n):
                for c in range(b, n):
                    acc = 0.0
                    for a in range(n):
                        acc = acc + gi[r * n + a] * Gl[a, b, c]
                    Gu[r, b, c] = acc
                    Gu[r, c, b] = acc
        # d_m g^rs = -g^ra (d_m g_ab) g^bs
        for m in range(n):
            for r in range(n):
                for s in range(n):
                    acc = 0.0
                    for a in range(n):
                        for b in range(n):
                            acc = acc + gi[r * n + a] * d1[m, a, b] * gi[b * n + s]
                    dgi[m, r, s] = -acc
        # d_m Gamma^r_bc
        for m in range(n):
            for r in range(n):
                for b in range(n):
                    for c in range(b, n):
                        acc = 0.0
                        for a in range(n):
                            acc = acc + dgi[m, r, a] * Gl[a, b, c] + gi[r * n + a] * 0.5 * (
                                d2[m, b, a, c] + d2[m, c, a, b] - d2[m, a, b, c])
                        dGu[m, r, b, c] = acc
                        dGu[m, r, c, b] = acc
        for s in range(n):
            for m in range(n):
                acc = 0.0
                for r in range(n):
                    acc = acc + dGu[r, r, m, s] - dGu[m, r, r, s]
                    for l in range(n):
                        acc = acc + Gu[r, r, l] * Gu[l, m, s] - Gu[r, m, l] * Gu[l, r, s]
                ric[s, m] = acc
        R = 0.0
        for s in range(n):
            for m in range(n):
                R = R + gi[s * n + m] * ric[s, m]
    return Gu_arr, ricci_arr, R
