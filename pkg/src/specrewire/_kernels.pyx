# cython: language_level=3
"""Compiled hot loops: dense symmetric eigensolver and counter-based pair RNG.

Must stay numerically identical in structure to ``_pykernels``; both are
checked against each other in the test suite.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, hypot
from libc.stdint cimport uint64_t

cnp.import_array()

cdef double EPS = 2.220446049250313e-16


cdef void _tred2(double[:, ::1] V, double[::1] d, double[::1] e, bint want_vectors) noexcept nogil:
    cdef Py_ssize_t n = V.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double scale, h, f, g, hh

    for j in range(n):
        d[j] = V[n - 1, j]

    for i in range(n - 1, 0, -1):
        scale = 0.0
        h = 0.0
        for k in range(i):
            scale += fabs(d[k])
        if scale == 0.0:
            e[i] = d[i - 1]
            for j in range(i):
                d[j] = V[i - 1, j]
                V[i, j] = 0.0
                V[j, i] = 0.0
        else:
            for k in range(i):
                d[k] /= scale
                h += d[k] * d[k]
            f = d[i - 1]
            g = sqrt(h)
            if f > 0:
                g = -g
            e[i] = scale * g
            h = h - f * g
            d[i - 1] = f - g
            for j in range(i):
                e[j] = 0.0
            for j in range(i):
                f = d[j]
                V[j, i] = f
                g = e[j] + V[j, j] * f
                for k in range(j + 1, i):
                    g += V[k, j] * d[k]
                    e[k] += V[k, j] * f
                e[j] = g
            f = 0.0
            for j in range(i):
                e[j] /= h
                f += e[j] * d[j]
            hh = f / (h + h)
            for j in range(i):
                e[j] -= hh * d[j]
            for j in range(i):
                f = d[j]
                g = e[j]
                for k in range(j, i):
                    V[k, j] -= f * e[k] + g * d[k]
                d[j] = V[i - 1, j]
                V[i, j] = 0.0
        d[i] = h

    if not want_vectors:
        for j in range(n):
            d[j] = V[j, j]
        e[0] = 0.0
        return

    for i in range(n - 1):
        V[n - 1, i] = V[i, i]
        V[i, i] = 1.0
        h = d[i + 1]
        if h != 0.0:
            for k in range(i + 1):
                d[k] = V[k, i + 1] / h
            for j in range(i + 1):
                g = 0.0
                for k in range(i + 1):
                    g += V[k, i + 1] * V[k, j]
                for k in range(i + 1):
                    V[k, j] -= g * d[k]
        for k in range(i + 1):
            V[k, i + 1] = 0.0
    for j in range(n):
        d[j] = V[n - 1, j]
        V[n - 1, j] = 0.0
    V[n - 1, n - 1] = 1.0
    e[0] = 0.0


cdef int _tql2(double[:, ::1] V, double[::1] d, double[::1] e, bint want_vectors, int max_iter) noexcept nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t i, k, l, m
    cdef double f = 0.0, tst1 = 0.0
    cdef double g, p, r, dl1, h, c, c2, c3, el1, s, s2, t
    cdef int it

    for i in range(1, n):
        e[i - 1] = e[i]
    e[n - 1] = 0.0

    for l in range(n):
        t = fabs(d[l]) + fabs(e[l])
        if t > tst1:
            tst1 = t
        m = l
        while m < n:
            if fabs(e[m]) <= EPS * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > max_iter:
                    return -1
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h

                p = d[m]
                c = 1.0
                c2 = c
                c3 = c
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if want_vectors:
                        for k in range(n):
                            h = V[k, i + 1]
                            V[k, i + 1] = s * V[k, i] + c * h
                            V[k, i] = c * V[k, i] - s * h
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if not (fabs(e[l]) > EPS * tst1):
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return 0


def symmetric_eigen(a, bint want_vectors=True, int max_iter=60):
    """Eigen-decompose a dense symmetric matrix.

    Returns ``(w, V)`` with unsorted eigenvalues ``w`` and eigenvectors in the
    columns of ``V`` (``None`` when ``want_vectors`` is false), or raises
    ``ArithmeticError`` when the QL sweep fails to converge.
    """
    cdef double[:, ::1] V = np.array(a, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = V.shape[0]
    cdef double[::1] d = np.zeros(n)
    cdef double[::1] e = np.zeros(n)
    cdef int status
    if n == 0:
        return np.zeros(0), (np.zeros((0, 0)) if want_vectors else None)
    with nogil:
        _tred2(V, d, e, want_vectors)
        status = _tql2(V, d, e, want_vectors, max_iter)
    if status != 0:
        raise ArithmeticError("QL iteration did not converge")
    return np.asarray(d), (np.asarray(V) if want_vectors else None)


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


def pair_uniforms(Py_ssize_t n, uint64_t key):
    """Uniform [0, 1) draw for every unordered pair ``u < v`` in row-major order.

    Draw ``t`` is SplitMix64 output at counter ``t + 1`` of stream ``key``, so
    any pair's value depends only on ``(key, pair index)``.
    """
    cdef Py_ssize_t total = n * (n - 1) // 2
    out_arr = np.empty(total, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t t
    cdef uint64_t golden = <uint64_t>0x9E3779B97F4A7C15ULL
    with nogil:
        for t in range(total):
            out[t] = <double>(_mix(key + <uint64_t>(t + 1) * golden) >> 11) * (1.0 / 9007199254740992.0)
    return out_arr
