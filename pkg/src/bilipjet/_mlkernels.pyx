# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled contraction kernels: same contract as bilipjet._mlkernels_py.

Tensors arrive flattened to (out_dim, in_dim**arity) in C order, argument
tuples as (samples, arity, in_dim).  All inner loops run on raw C buffers;
sizes here are tiny (d, n <= 3ish, arity <= 8), so the win over NumPy comes
from skipping per-call dispatch overhead inside the ascent loop.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


cdef void _reduce_right(double* src, double* dst, Py_ssize_t rows, double* v, int n) noexcept nogil:
    # src viewed as (rows, n); dst[r] = sum_i src[r, i] * v[i]
    cdef Py_ssize_t r
    cdef int i
    cdef double acc
    for r in range(rows):
        acc = 0.0
        for i in range(n):
            acc += src[r * n + i] * v[i]
        dst[r] = acc


cdef void _reduce_front(double* src, double* dst, Py_ssize_t d, Py_ssize_t rest,
                        double* v, int n) noexcept nogil:
    # src viewed as (d, n, rest); dst[a, t] = sum_i src[a, i, t] * v[i]
    cdef Py_ssize_t a, t
    cdef int i
    cdef double acc
    for a in range(d):
        for t in range(rest):
            acc = 0.0
            for i in range(n):
                acc += src[(a * n + i) * rest + t] * v[i]
            dst[a * rest + t] = acc


cdef void _contract_full(double* T, Py_ssize_t d, int n, int k, double* v,
                         double* buf_a, double* buf_b, double* out) noexcept nogil:
    # out[a] = T(v_0, ..., v_{k-1}); buffers hold d * n**(k-1) doubles
    cdef Py_ssize_t size = d
    cdef int t
    for t in range(k):
        size *= n
    cdef double* src = T
    cdef double* dst = buf_a
    cdef double* tmp
    for t in range(k - 1, -1, -1):
        size //= n
        _reduce_right(src, dst, size, v + t * n, n)
        if t == k - 1:
            src = dst
            dst = buf_b
        else:
            tmp = src
            src = dst
            dst = tmp
    cdef Py_ssize_t a
    for a in range(d):
        out[a] = src[a]


cdef void _slot_matrix(double* T, Py_ssize_t d, int n, int k, double* v, int j,
                       double* buf_a, double* buf_b, double* B) noexcept nogil:
    # B[a, i] = T(v_0, .., v_{j-1}, e_i, v_{j+1}, .., v_{k-1})
    cdef Py_ssize_t size = d
    cdef int t
    for t in range(k):
        size *= n
    cdef double* src = T
    cdef double* dst = buf_a
    cdef double* tmp
    cdef bint first = True
    for t in range(k - 1, j, -1):
        size //= n
        _reduce_right(src, dst, size, v + t * n, n)
        if first:
            src = dst
            dst = buf_b
            first = False
        else:
            tmp = src
            src = dst
            dst = tmp
    # remaining axes: (d, slot_0, ..., slot_j); consume the front slots
    cdef Py_ssize_t rest = size // d // n
    for t in range(j):
        rest //= n
        _reduce_front(src, dst, d, rest * n, v + t * n, n)
        if first:
            src = dst
            dst = buf_b
            first = False
        else:
            tmp = src
            src = dst
            dst = tmp
    cdef Py_ssize_t a
    cdef int i
    for a in range(d):
        for i in range(n):
            B[a * n + i] = src[a * n + i]


def contract_batch(double[:, ::1] T2, int n, int k, double[:, :, ::1] args):
    """Evaluate the map on every argument tuple: returns (samples, out_dim)."""
    cdef Py_ssize_t d = T2.shape[0]
    cdef Py_ssize_t S = args.shape[0]
    cdef Py_ssize_t s, a, buf_size
    cdef int t
    out_arr = np.empty((S, d), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    if k == 0:
        for s in range(S):
            for a in range(d):
                out[s, a] = T2[a, 0]
        return out_arr
    buf_size = d * n
    for t in range(k - 2):
        buf_size *= n
    buf_a_arr = np.empty(buf_size, dtype=np.float64)
    buf_b_arr = np.empty(buf_size, dtype=np.float64)
    cdef double[::1] buf_a = buf_a_arr
    cdef double[::1] buf_b = buf_b_arr
    for s in range(S):
        _contract_full(&T2[0, 0], d, n, k, &args[s, 0, 0], &buf_a[0], &buf_b[0], &out[s, 0])
    return out_arr


def slot_matrix_batch(double[:, ::1] T2, int n, int k, double[:, :, ::1] args, int j):
    """Contract every slot except ``j``: returns (samples, out_dim, in_dim)."""
    cdef Py_ssize_t d = T2.shape[0]
    cdef Py_ssize_t S = args.shape[0]
    cdef Py_ssize_t s, buf_size
    cdef int t
    out_arr = np.empty((S, d, n), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    buf_size = d * n
    for t in range(k - 2):
        buf_size *= n
    buf_a_arr = np.empty(buf_size, dtype=np.float64)
    buf_b_arr = np.empty(buf_size, dtype=np.float64)
    cdef double[::1] buf_a = buf_a_arr
    cdef double[::1] buf_b = buf_b_arr
    for s in range(S):
        _slot_matrix(&T2[0, 0], d, n, k, &args[s, 0, 0], j, &buf_a[0], &buf_b[0], &out[s, 0, 0])
    return out_arr


def ascent_norm(double[:, ::1] T2, int n, int k, double[:, :, ::1] starts,
                int rounds, int power_iters):
    """Best lower bound on the injective norm over the given start tuples.

    Same alternating per-slot power-iteration ascent as the NumPy fallback;
    every evaluated tuple is feasible so the running maximum is a valid
    lower bound.
    """
    cdef Py_ssize_t d = T2.shape[0]
    cdef Py_ssize_t S = starts.shape[0]
    cdef Py_ssize_t a, s, buf_size
    cdef int i, i2, j, r, p, t
    cdef double best = 0.0, val, acc, nrm
    if k == 0:
        for a in range(d):
            best += T2[a, 0] * T2[a, 0]
        return sqrt(best)
    buf_size = d * n
    for t in range(k - 2):
        buf_size *= n
    buf_a_arr = np.empty(buf_size, dtype=np.float64)
    buf_b_arr = np.empty(buf_size, dtype=np.float64)
    v_arr = np.empty((k, n), dtype=np.float64)
    B_arr = np.empty((d, n), dtype=np.float64)
    M_arr = np.empty((n, n), dtype=np.float64)
    w_arr = np.empty(n, dtype=np.float64)
    w2_arr = np.empty(n, dtype=np.float64)
    outv_arr = np.empty(d, dtype=np.float64)
    cdef double[::1] buf_a = buf_a_arr, buf_b = buf_b_arr
    cdef double[:, ::1] v = v_arr, B = B_arr, M = M_arr
    cdef double[::1] w = w_arr, w2 = w2_arr, outv = outv_arr
    for s in range(S):
        for j in range(k):
            for i in range(n):
                v[j, i] = starts[s, j, i]
        _contract_full(&T2[0, 0], d, n, k, &v[0, 0], &buf_a[0], &buf_b[0], &outv[0])
        val = 0.0
        for a in range(d):
            val += outv[a] * outv[a]
        val = sqrt(val)
        if val > best:
            best = val
        for r in range(rounds):
            for j in range(k):
                _slot_matrix(&T2[0, 0], d, n, k, &v[0, 0], j, &buf_a[0], &buf_b[0], &B[0, 0])
                for i in range(n):
                    for i2 in range(n):
                        acc = 0.0
                        for a in range(d):
                            acc += B[a, i] * B[a, i2]
                        M[i, i2] = acc
                for i in range(n):
                    w[i] = v[j, i]
                for p in range(power_iters):
                    nrm = 0.0
                    for i in range(n):
                        acc = 0.0
                        for i2 in range(n):
                            acc += M[i, i2] * w[i2]
                        w2[i] = acc
                        nrm += acc * acc
                    nrm = sqrt(nrm)
                    if nrm > 0.0:
                        for i in range(n):
                            w[i] = w2[i] / nrm
                for i in range(n):
                    v[j, i] = w[i]
            _contract_full(&T2[0, 0], d, n, k, &v[0, 0], &buf_a[0], &buf_b[0], &outv[0])
            val = 0.0
            for a in range(d):
                val += outv[a] * outv[a]
            val = sqrt(val)
            if val > best:
                best = val
    return best
