"""Pure-numpy implementations of the hot DGT kernels.

These mirror `_kernels.pyx` exactly and are selected at import time when the
compiled extension is unavailable (or when GABORSCATTER_PURE=1).

The analysis kernel folds the windowed signal into modulation residues:

    Z[k, m] = sum over window taps i with (a k - c + i) == m (mod M)
              of signal[(a k - c + i) mod L] * conj(w[i])

after which one length-M FFT per frame finishes the transform.  The naive
scatter-add is slow in numpy, so we use an alignment trick: summing the
windowed segment over taps congruent mod M gives, for column m, the residue
(base_k + m) mod M — a per-row circular permutation.  That turns the fold
into a reshape-sum plus one fancy-index assignment with no collisions.

The synthesis (adjoint) kernel scatters frame data back onto the signal
grid; collisions across frames are real there, so it goes through
np.bincount on the flattened index, which is C-speed.
"""

import numpy as np


def fold(signal, window, center, a, M):
    """Fold a windowed signal into per-frame modulation residues.

    Args:
        signal: complex128 vector, length L (a and M must divide L).
        window: complex128 window taps, length W <= L.
        center: window center index (taps address t = a*k - center + i).
        a: hop size in samples.
        M: number of modulation residues (FFT length downstream).

    Returns:
        (L // a, M) complex128 matrix Z as described above.
    """
    signal = np.ascontiguousarray(signal, dtype=np.complex128)
    window = np.ascontiguousarray(window, dtype=np.complex128)
    L = signal.shape[0]
    W = window.shape[0]
    n_frames = L // a
    base = a * np.arange(n_frames, dtype=np.int64) - center
    taps = np.arange(W, dtype=np.int64)
    t = base[:, None] + taps[None, :]
    seg = signal[t % L] * np.conj(window)[None, :]
    n_blocks = -(-W // M)
    if n_blocks * M != W:
        pad = np.zeros((n_frames, n_blocks * M - W), dtype=np.complex128)
        seg = np.concatenate([seg, pad], axis=1)
    part = seg.reshape(n_frames, n_blocks, M).sum(axis=1)
    cols = (base[:, None] + np.arange(M, dtype=np.int64)[None, :]) % M
    Z = np.empty((n_frames, M), dtype=np.complex128)
    Z[np.arange(n_frames)[:, None], cols] = part
    return Z


def spread(coeffs, window, center, a, L):
    """Adjoint of fold: scatter per-frame residue data back to the signal grid.

    out[(a k - center + i) mod L] += w[i] * coeffs[k, (a k - center + i) mod M]

    Args:
        coeffs: (L // a, M) complex128 matrix.
        window: complex128 window taps (NOT conjugated here; this is the
            adjoint of fold, which conjugates).
        center: window center index.
        a: hop size in samples.
        L: output signal length.

    Returns:
        complex128 vector of length L.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    window = np.ascontiguousarray(window, dtype=np.complex128)
    n_frames, M = coeffs.shape
    W = window.shape[0]
    base = a * np.arange(n_frames, dtype=np.int64) - center
    taps = np.arange(W, dtype=np.int64)
    t = base[:, None] + taps[None, :]
    vals = window[None, :] * coeffs[np.arange(n_frames)[:, None], t % M]
    tl = (t % L).ravel()
    flat = vals.ravel()
    out = np.bincount(tl, weights=flat.real, minlength=L).astype(np.complex128)
    out += 1j * np.bincount(tl, weights=flat.imag, minlength=L)
    return out
