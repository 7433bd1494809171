# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled DGT kernels: windowed fold into modulation residues and its
adjoint spread.  Semantics match `_kernels_np.py` bit for bit; see that
module for the index conventions."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef _c128(arr):
    # Contiguous, writable complex128 view or copy (memoryviews reject
    # read-only buffers, and window samples are stored immutable).
    out = np.ascontiguousarray(arr, dtype=np.complex128)
    if not out.flags.writeable:
        out = out.copy()
    return out


def fold(signal, window, Py_ssize_t center, Py_ssize_t a, Py_ssize_t M):
    sig = _c128(signal)
    wconj = np.conj(np.ascontiguousarray(window, dtype=np.complex128))
    cdef cnp.complex128_t[::1] f = sig
    cdef cnp.complex128_t[::1] w = wconj
    cdef Py_ssize_t L = f.shape[0]
    cdef Py_ssize_t W = w.shape[0]
    cdef Py_ssize_t n_frames = L // a
    Z = np.zeros((n_frames, M), dtype=np.complex128)
    cdef cnp.complex128_t[:, ::1] out = Z
    cdef Py_ssize_t k, i, t, m
    cdef Py_ssize_t base
    for k in range(n_frames):
        base = a * k - center
        for i in range(W):
            t = (base + i) % L
            if t < 0:
                t += L
            m = t % M
            out[k, m] = out[k, m] + f[t] * w[i]
    return Z


def spread(coeffs, window, Py_ssize_t center, Py_ssize_t a, Py_ssize_t L):
    C = _c128(coeffs)
    win = _c128(window)
    cdef cnp.complex128_t[:, ::1] B = C
    cdef cnp.complex128_t[::1] w = win
    cdef Py_ssize_t n_frames = B.shape[0]
    cdef Py_ssize_t M = B.shape[1]
    cdef Py_ssize_t W = w.shape[0]
    result = np.zeros(L, dtype=np.complex128)
    cdef cnp.complex128_t[::1] out = result
    cdef Py_ssize_t k, i, t, m
    cdef Py_ssize_t base
    for k in range(n_frames):
        base = a * k - center
        for i in range(W):
            t = (base + i) % L
            if t < 0:
                t += L
            m = t % M
            out[t] = out[t] + w[i] * B[k, m]
    return result
