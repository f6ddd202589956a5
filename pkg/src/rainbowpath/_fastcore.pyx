# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: batch densities and transfer line-search scans.

Mirrors the numpy fallback (_slowcore) contract for contract: flat layout
vectors with m pair coordinates (0-based colors pi[t], pj[t]), k private
coordinates, then the remainder coordinate.
"""

import numpy as np

cimport cython
from libc.math cimport fabs, sqrt


def densities_batch(W, int k, pi, pj):
    W = np.ascontiguousarray(W, dtype=np.float64)
    pi = np.ascontiguousarray(pi, dtype=np.int32)
    pj = np.ascontiguousarray(pj, dtype=np.int32)
    out = np.empty((W.shape[0], k), dtype=np.float64)
    _densities_batch(W, k, pi, pj, out)
    return out


def min_density_batch(W, int k, pi, pj):
    return densities_batch(W, k, pi, pj).min(axis=1)


cdef void _densities_batch(double[:, ::1] W, int k, int[::1] pi, int[::1] pj,
                           double[:, ::1] out) nogil:
    cdef Py_ssize_t n = W.shape[0]
    cdef int m = pi.shape[0]
    cdef int dim = W.shape[1]
    cdef Py_ssize_t r
    cdef int t, i
    cdef double w, x, ai
    for r in range(n):
        x = W[r, dim - 1]
        for i in range(k):
            out[r, i] = 0.0
        for t in range(m):
            w = W[r, t]
            out[r, pi[t]] += w * w
            out[r, pj[t]] += w * w
        # out currently holds bsq_row; fold in the a-dependent terms
        for i in range(k):
            ai = W[r, m + i]
            out[r, i] += ai * ai + 2.0 * ai * x
        for t in range(m):
            w = W[r, t]
            out[r, pi[t]] += 2.0 * W[r, m + pi[t]] * w
            out[r, pj[t]] += 2.0 * W[r, m + pj[t]] * w


def best_transfer(w, int k, pi, pj):
    """Best (src, dst, step, value) over all positive-source transfers."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    pi = np.ascontiguousarray(pi, dtype=np.int32)
    pj = np.ascontiguousarray(pj, dtype=np.int32)
    cdef int m = pi.shape[0]
    cdef int dim = w.shape[0]
    if dim != m + k + 1:
        raise ValueError("layout mismatch")
    ncand = 2 + k + k * (k - 1)
    grad = np.zeros((dim, k), dtype=np.float64)
    qdiag = np.zeros((dim, k), dtype=np.float64)
    isa_b = np.zeros((dim, k), dtype=np.float64)   # isb + isx per coordinate/color
    isa = np.zeros((dim, k), dtype=np.float64)
    d = np.zeros(k, dtype=np.float64)
    scratch = np.zeros(ncand, dtype=np.float64)
    beta = np.zeros(k, dtype=np.float64)
    gamma = np.zeros(k, dtype=np.float64)
    out = np.zeros(4, dtype=np.float64)
    _best_transfer(w, k, pi, pj, grad, qdiag, isa_b, isa, d, scratch, beta, gamma, out)
    return int(out[0]), int(out[1]), float(out[2]), float(out[3])


cdef void _best_transfer(double[::1] w, int k, int[::1] pi, int[::1] pj,
                         double[:, ::1] grad, double[:, ::1] qdiag,
                         double[:, ::1] cross_part, double[:, ::1] isa,
                         double[::1] d, double[::1] cand,
                         double[::1] beta, double[::1] gamma,
                         double[::1] out) nogil:
    cdef int m = pi.shape[0]
    cdef int dim = w.shape[0]
    cdef int t, i, j, src, dst, nc, ci, cj
    cdef double x = w[dim - 1]
    cdef double ai, cval, bw, smax, s, v, q, A, B, C, disc, sq, r1, r2
    cdef double best_val, best_step, pair_val, pair_step
    cdef int best_src = -1, best_dst = -1

    # per-color aggregates
    for i in range(k):
        d[i] = 0.0
    for t in range(m):
        bw = w[t]
        d[pi[t]] += bw * bw
        d[pj[t]] += bw * bw
    for i in range(k):
        ai = w[m + i]
        d[i] += ai * ai + 2.0 * ai * x
    for t in range(m):
        bw = w[t]
        d[pi[t]] += 2.0 * w[m + pi[t]] * bw
        d[pj[t]] += 2.0 * w[m + pj[t]] * bw

    # structure tables: gradient, quadratic diagonal, a-cross partners
    for t in range(dim):
        for i in range(k):
            grad[t, i] = 0.0
            qdiag[t, i] = 0.0
            cross_part[t, i] = 0.0
            isa[t, i] = 0.0
    for t in range(m):
        i = pi[t]
        grad[t, i] = 2.0 * (w[t] + w[m + i])
        qdiag[t, i] = 1.0
        cross_part[t, i] = 1.0
        i = pj[t]
        grad[t, i] = 2.0 * (w[t] + w[m + i])
        qdiag[t, i] = 1.0
        cross_part[t, i] = 1.0
    for i in range(k):
        # c_i = a_i + b_i + x
        cval = w[m + i] + x
        for t in range(m):
            if pi[t] == i or pj[t] == i:
                cval += w[t]
        grad[m + i, i] = 2.0 * cval
        qdiag[m + i, i] = 1.0
        isa[m + i, i] = 1.0
    for i in range(k):
        grad[dim - 1, i] = 2.0 * w[m + i]
        cross_part[dim - 1, i] = 1.0

    best_val = -1.0
    best_step = 0.0
    for src in range(dim):
        smax = w[src]
        if smax <= 1e-15:
            continue
        for dst in range(dim):
            if dst == src:
                continue
            for i in range(k):
                beta[i] = grad[dst, i] - grad[src, i]
                gamma[i] = qdiag[dst, i] + qdiag[src, i] \
                    - 2.0 * (isa[src, i] * cross_part[dst, i]
                             + isa[dst, i] * cross_part[src, i])
            # candidate steps
            nc = 0
            cand[nc] = 0.0; nc += 1
            cand[nc] = smax; nc += 1
            for i in range(k):
                if gamma[i] < -1e-300:
                    s = -beta[i] / (2.0 * gamma[i])
                    if s < 0.0: s = 0.0
                    if s > smax: s = smax
                    cand[nc] = s; nc += 1
            for ci in range(k):
                for cj in range(ci + 1, k):
                    A = gamma[ci] - gamma[cj]
                    B = beta[ci] - beta[cj]
                    C = d[ci] - d[cj]
                    if fabs(A) < 1e-14:
                        if fabs(B) > 1e-300:
                            s = -C / B
                            if s < 0.0: s = 0.0
                            if s > smax: s = smax
                            cand[nc] = s; nc += 1
                    else:
                        disc = B * B - 4.0 * A * C
                        if disc >= 0.0:
                            sq = sqrt(disc)
                            r1 = (-B - sq) / (2.0 * A)
                            r2 = (-B + sq) / (2.0 * A)
                            if r1 < 0.0: r1 = 0.0
                            if r1 > smax: r1 = smax
                            if r2 < 0.0: r2 = 0.0
                            if r2 > smax: r2 = smax
                            cand[nc] = r1; nc += 1
                            cand[nc] = r2; nc += 1
            # insertion sort ascending so ties resolve to the smallest step
            for i in range(1, nc):
                s = cand[i]
                j = i - 1
                while j >= 0 and cand[j] > s:
                    cand[j + 1] = cand[j]
                    j -= 1
                cand[j + 1] = s
            pair_val = -1.0
            pair_step = 0.0
            for t in range(nc):
                s = cand[t]
                v = d[0] + beta[0] * s + gamma[0] * s * s
                for i in range(1, k):
                    q = d[i] + beta[i] * s + gamma[i] * s * s
                    if q < v:
                        v = q
                if v > pair_val:
                    pair_val = v
                    pair_step = s
            if pair_val > best_val:
                best_val = pair_val
                best_step = pair_step
                best_src = src
                best_dst = dst
    out[0] = best_src
    out[1] = best_dst
    out[2] = best_step
    out[3] = best_val
