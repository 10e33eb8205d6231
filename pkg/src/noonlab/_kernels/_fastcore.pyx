# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot kernels (see _purecore for contracts)."""

from libc.math cimport exp, lgamma, log, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()


def bs_block(int n_total, double transmissivity):
    cdef int N = n_total
    if N < 0:
        raise ValueError("n_total must be >= 0")
    cdef double T = transmissivity
    if T < 0.0 or T > 1.0:
        raise ValueError("transmissivity must lie in [0, 1]")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((N + 1, N + 1))
    cdef double[:, :] B = out
    cdef int k, n
    cdef double R = 1.0 - T
    cdef double lgT, lgR, sqrt_tr, scale, val
    if N == 0:
        B[0, 0] = 1.0
        return out
    if T == 1.0:
        out[:, :] = 0.0
        for k in range(N + 1):
            B[k, k] = -1.0 if (N - k) % 2 else 1.0
        return out
    if T == 0.0:
        out[:, :] = 0.0
        for k in range(N + 1):
            B[N - k, k] = 1.0
        return out
    lgT = log(T)
    lgR = log(R)
    sqrt_tr = sqrt(T * R)
    # column 0: input |0, N>, closed form, no cancellation
    for k in range(N + 1):
        val = exp(0.5 * (lgamma(N + 1) - lgamma(k + 1) - lgamma(N - k + 1))
                  + 0.5 * k * lgR + 0.5 * (N - k) * lgT)
        B[k, 0] = -val if (N - k) % 2 else val
    # ladder recurrence along input index n
    for n in range(N):
        scale = 1.0 / sqrt((n + 1.0) * (N - n))
        for k in range(N + 1):
            val = sqrt_tr * (2.0 * k - N) * B[k, n]
            if k > 0:
                val -= T * sqrt(k * (N - k + 1.0)) * B[k - 1, n]
            if k < N:
                val += R * sqrt((k + 1.0) * (N - k)) * B[k + 1, n]
            B[k, n + 1] = val * scale
    return out


def povm_matrix(int modules, double eta, int n_max):
    cdef int D = modules
    if D < 1:
        raise ValueError("modules must be >= 1")
    if eta < 0.0 or eta > 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((D + 1, n_max + 1))
    cdef double[:, :] P = out
    cdef int k, n, kmax
    P[0, 0] = 1.0
    for n in range(1, n_max + 1):
        kmax = n if n < D else D
        for k in range(kmax, -1, -1):
            P[k, n] = P[k, n - 1] * ((1.0 - eta) + eta * k / D)
            if k > 0:
                P[k, n] += P[k - 1, n - 1] * eta * (D - k + 1.0) / D
    return out
