# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: population fitness and exhaustive enumeration.

Mirrors ``mtfp._pykernels`` exactly, including floating-point operation
order, so both backends return bit-identical results. Inputs are assumed
validated by ``mtfp.kernels``.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def population_fitness(const i64[:, ::1] groups,
                       const i64[:, ::1] socio,
                       const i64[::1] dept,
                       const i64[:, ::1] req):
    cdef Py_ssize_t n_p = groups.shape[0]
    cdef Py_ssize_t n_i = groups.shape[1]
    cdef Py_ssize_t n_j = req.shape[0]
    cdef Py_ssize_t n_k = req.shape[1]
    out = np.empty(n_p, dtype=np.float64)
    cdef double[::1] res = out
    cdef i64[::1] start = np.empty(n_k + 1, dtype=np.int64)
    cdef i64[::1] fill = np.empty(n_k, dtype=np.int64)
    cdef i64[::1] members = np.empty(max(n_i, 1), dtype=np.int64)
    cdef i64[:, ::1] got = np.empty((n_j, n_k), dtype=np.int64)
    cdef Py_ssize_t p, i, a, b, g, j, lo, hi
    cdef i64 pair, pen, diff, ii, jj

    with nogil:
        for p in range(n_p):
            for g in range(n_k + 1):
                start[g] = 0
            for j in range(n_j):
                for g in range(n_k):
                    got[j, g] = 0
            for i in range(n_i):
                g = groups[p, i]
                start[g + 1] += 1
                got[dept[i], g] += 1
            for g in range(n_k):
                start[g + 1] += start[g]
                fill[g] = start[g]
            for i in range(n_i):
                g = groups[p, i]
                members[fill[g]] = i
                fill[g] += 1

            pair = 0
            for g in range(n_k):
                lo = start[g]
                hi = start[g + 1]
                for a in range(lo, hi):
                    ii = members[a]
                    for b in range(a + 1, hi):
                        jj = members[b]
                        pair += socio[ii, jj] + socio[jj, ii]

            pen = 0
            for j in range(n_j):
                for g in range(n_k):
                    diff = got[j, g] - req[j, g]
                    pen += diff if diff >= 0 else -diff

            res[p] = <double>pair / <double>n_i - <double>pen
    return out


cdef struct Search:
    Py_ssize_t n_i
    Py_ssize_t n_k
    const i64* socio
    const i64* order
    const i64* dept
    i64* remaining
    i64* members      # n_k rows of n_i slots
    i64* size
    i64* current
    i64* best
    i64 best_pair
    i64 count
    bint found


cdef void _descend(Search* s, Py_ssize_t t, i64 pair) noexcept nogil:
    cdef Py_ssize_t g, m, n_i = s.n_i
    cdef i64 i, other, delta
    if t == n_i:
        s.count += 1
        if not s.found or pair > s.best_pair:
            s.found = True
            s.best_pair = pair
            for m in range(n_i):
                s.best[m] = s.current[m]
        return
    i = s.order[t]
    for g in range(s.n_k):
        if s.remaining[s.dept[i] * s.n_k + g] == 0:
            continue
        delta = 0
        for m in range(s.size[g]):
            other = s.members[g * n_i + m]
            delta += s.socio[i * n_i + other] + s.socio[other * n_i + i]
        s.remaining[s.dept[i] * s.n_k + g] -= 1
        s.members[g * n_i + s.size[g]] = i
        s.size[g] += 1
        s.current[i] = g
        _descend(s, t + 1, pair + delta)
        s.size[g] -= 1
        s.remaining[s.dept[i] * s.n_k + g] += 1


def exhaustive_search(const i64[:, ::1] socio,
                      const i64[::1] dept,
                      const i64[:, ::1] req,
                      const i64[::1] order):
    cdef Py_ssize_t n_i = socio.shape[0]
    cdef Py_ssize_t n_k = req.shape[1]
    cdef i64[:, ::1] remaining = np.array(req, dtype=np.int64, copy=True)
    cdef i64[::1] members = np.zeros(max(n_k * n_i, 1), dtype=np.int64)
    cdef i64[::1] size = np.zeros(n_k, dtype=np.int64)
    cdef i64[::1] current = np.zeros(max(n_i, 1), dtype=np.int64)
    best_arr = np.zeros(n_i, dtype=np.int64)
    cdef i64[::1] best = np.zeros(max(n_i, 1), dtype=np.int64)
    cdef Search s
    s.n_i = n_i
    s.n_k = n_k
    s.socio = &socio[0, 0]
    s.order = &order[0]
    s.dept = &dept[0]
    s.remaining = &remaining[0, 0]
    s.members = &members[0]
    s.size = &size[0]
    s.current = &current[0]
    s.best = &best[0]
    s.best_pair = 0
    s.count = 0
    s.found = False
    with nogil:
        _descend(&s, 0, 0)
    best_arr[:] = best[:n_i]
    return best_arr, int(s.best_pair), int(s.count)
