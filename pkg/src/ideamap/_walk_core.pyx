# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled walk kernel: hot-loop twin of ideamap._walk_py.

Keep the arithmetic order in lockstep with the pure-Python kernel; the two
must produce bit-identical walks from the same uniform stream.
"""

from libc.stdlib cimport free, malloc


cdef inline bint _adjacent(const int[::1] indices, Py_ssize_t lo, Py_ssize_t hi, int x) noexcept nogil:
    cdef Py_ssize_t end = hi
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if indices[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < end and indices[lo] == x


def walk(const long long[::1] indptr,
         const int[::1] indices,
         const double[::1] weights,
         long long start,
         long long prev0,
         double p,
         double q,
         const double[::1] uniforms,
         long long[::1] out):
    """Fill `out` with a biased second-order walk of len(uniforms) steps.

    Same contract as the pure-Python kernel; see ideamap._walk_py.walk.
    """
    cdef double inv_p = 1.0 / p
    cdef double inv_q = 1.0 / q
    cdef Py_ssize_t steps = uniforms.shape[0]
    cdef Py_ssize_t prev = <Py_ssize_t>prev0
    cdef Py_ssize_t curr = <Py_ssize_t>start
    cdef Py_ssize_t lo, hi, plo, phi, deg, i, j
    cdef double total, target, cum, s, alpha
    cdef int x, nxt
    cdef double* scores = NULL
    cdef Py_ssize_t cap = 0

    out[0] = start
    with nogil:
        for i in range(steps):
            lo = <Py_ssize_t>indptr[curr]
            hi = <Py_ssize_t>indptr[curr + 1]
            deg = hi - lo
            if deg > cap:
                free(scores)
                scores = <double*>malloc(deg * sizeof(double))
                if scores == NULL:
                    with gil:
                        raise MemoryError()
                cap = deg
            total = 0.0
            if prev < 0:
                for j in range(deg):
                    s = weights[lo + j]
                    scores[j] = s
                    total += s
            else:
                plo = <Py_ssize_t>indptr[prev]
                phi = <Py_ssize_t>indptr[prev + 1]
                for j in range(deg):
                    x = indices[lo + j]
                    if x == prev:
                        alpha = inv_p
                    elif _adjacent(indices, plo, phi, x):
                        alpha = 1.0
                    else:
                        alpha = inv_q
                    s = weights[lo + j] * alpha
                    scores[j] = s
                    total += s
            target = uniforms[i] * total
            cum = 0.0
            nxt = indices[hi - 1]
            for j in range(deg):
                cum += scores[j]
                if cum > target:
                    nxt = indices[lo + j]
                    break
            out[i + 1] = nxt
            prev = curr
            curr = <Py_ssize_t>nxt
    free(scores)
