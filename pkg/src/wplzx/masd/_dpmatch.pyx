# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled subset-DP kernel; mirrors wplzx.masd._dp.solve_dense exactly."""

import numpy as np

cdef extern from "math.h":
    double INFINITY

RETIRE = 0xFFFFFFFF


def solve_dense(w_in, boundary_in):
    w_arr = np.ascontiguousarray(w_in, dtype=np.float64)
    b_arr = np.ascontiguousarray(boundary_in, dtype=np.float64)
    cdef double[:, ::1] w = w_arr
    cdef double[::1] boundary = b_arr
    cdef Py_ssize_t n = boundary.shape[0]
    cdef Py_ssize_t full = (<Py_ssize_t> 1) << n
    dp_arr = np.full(full, np.inf)
    choice_arr = np.full(full, -1, dtype=np.int64)
    cdef double[::1] dp = dp_arr
    cdef long long[::1] choice = choice_arr
    cdef long long retire = 0xFFFFFFFF
    cdef Py_ssize_t mask, nm, nm2, i, j
    cdef double cost, cand
    dp[0] = 0.0
    for mask in range(full - 1):
        cost = dp[mask]
        if cost == INFINITY:
            continue
        i = 0
        while (mask >> i) & 1:
            i += 1
        nm = mask | ((<Py_ssize_t> 1) << i)
        cand = cost + boundary[i]
        if cand < dp[nm]:
            dp[nm] = cand
            choice[nm] = ((<long long> i) << 32) | retire
        for j in range(i + 1, n):
            if (mask >> j) & 1:
                continue
            nm2 = nm | ((<Py_ssize_t> 1) << j)
            cand = cost + w[i, j]
            if cand < dp[nm2]:
                dp[nm2] = cand
                choice[nm2] = ((<long long> i) << 32) | (<long long> j)
    return float(dp[full - 1]), choice_arr
