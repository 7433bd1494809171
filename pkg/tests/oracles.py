"""Slow, independent reference implementations used only by the tests.

Everything here is written as plain loops over the defining sums, on
purpose: these must not share structure (folding, FFTs, vectorized
reshapes) with the code under test.
"""

import cmath

import numpy as np


def dgt_oracle(signal, window_samples, center, a, M):
    """Direct evaluation of values[j][k] = <f, g_{jk}>.

    g_{jk}[t] = w[t - a k] (embedded around its center) times the channel-j
    modulation; returns an (M, L/a) complex array.
    """
    f = [complex(x) for x in np.asarray(signal)]
    w = [complex(x) for x in np.asarray(window_samples)]
    L = len(f)
    W = len(w)
    n_frames = L // a
    out = np.zeros((M, n_frames), dtype=np.complex128)
    for j in range(M):
        for k in range(n_frames):
            acc = 0.0 + 0.0j
            for i in range(W):
                t = (a * k - center + i) % L
                atom = w[i] * cmath.exp(2j * cmath.pi * j * t / M)
                acc += f[t] * atom.conjugate()
            out[j, k] = acc
    return out


def painless_diagonal_oracle(window_samples, center, a, M, L):
    """Frame-operator diagonal by direct summation: M * sum_k |g[t-ak]|^2."""
    w = np.asarray(window_samples)
    diag = np.zeros(L)
    for k in range(L // a):
        for i in range(w.shape[0]):
            t = (a * k - center + i) % L
            diag[t] += abs(w[i]) ** 2
    return M * diag


def circular_conv_oracle(x, y):
    """Plain O(n^2) circular convolution."""
    x = np.asarray(x)
    y = np.asarray(y)
    n = x.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    for t in range(n):
        acc = 0.0 + 0.0j
        for i in range(n):
            acc += x[i] * y[(t - i) % n]
        out[t] = acc
    return out


def alias_mass_oracle(envelope, alpha):
    """Brute-force worst-case folded alias mass (see bounds.envelope_aliasing_eps).

    For every base bin of the subsampled spectrum, sums |DFT| over all
    aliases except the one nearest DC (wrapped distance, lower index wins
    ties exactly like argmin does).
    """
    env = np.asarray(envelope)
    L = env.shape[0]
    P = L // alpha
    spectrum = np.fft.fft(env)
    worst = 0.0
    for p in range(P):
        bins = [p + q * P for q in range(alpha)]
        dists = [min(b, L - b) for b in bins]
        keep = dists.index(min(dists))
        mass = sum(abs(spectrum[b]) for i, b in enumerate(bins) if i != keep)
        worst = max(worst, mass)
    return float(worst)
