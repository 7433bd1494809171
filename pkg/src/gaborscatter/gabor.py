"""Discrete Gabor analysis on separable lattices.

The transform convention, used everywhere in this package:

    values[j][k] = sum_t signal[t] * conj(g[t - a k] * exp(2 pi i j t / M))

with all indices mod L (periodic boundaries).  Channel j covers normalized
frequency j/M cycles per sample, i.e. j * fs / M in Hz.  Time frames sit at
multiples of the hop a; there are L/a of them.

Implementation: for each frame the windowed segment is folded into the M
modulation residues (see `kernels`), after which a single length-M FFT per
frame produces all channels.  This is exactly the direct double loop, just
reassociated, and the test suite pins it against a naive inner-product
oracle at 1e-10.

The frame operator S f = sum_{j,k} <f, g_jk> g_jk reduces under the same
reassociation to  S f = M * spread(fold(f))  — the FFT and inverse FFT
cancel.  Bound estimation therefore never touches an FFT: the painless case
(window support <= M) reads the extremes of an explicitly computed diagonal,
and the general case runs power iteration with one fold+spread per step.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConvergenceError, InvalidArgument, NotAFrameError
from .windows import Window


@dataclass(frozen=True)
class GaborFrame:
    """A Gabor system: window + time hop ``a`` + channel count ``M`` at
    signal length ``signal_length``.

    Invariants checked at construction: a and M divide the signal length and
    the window fits inside it.
    """

    window: Window
    a: int
    M: int
    signal_length: int

    def __post_init__(self):
        L = self.signal_length
        if self.a < 1 or self.M < 1 or L < 1:
            raise InvalidArgument(
                f"lattice parameters must be positive, got a={self.a}, M={self.M}, L={L}"
            )
        if L % self.a != 0:
            raise InvalidArgument(f"time step a={self.a} must divide signal length L={L}")
        if L % self.M != 0:
            raise InvalidArgument(f"channel count M={self.M} must divide signal length L={L}")
        if self.window.length > L:
            raise InvalidArgument(
                f"window length {self.window.length} exceeds signal length {L}"
            )

    @property
    def n_frames(self) -> int:
        return self.signal_length // self.a

    def atom(self, channel: int, shift: int = 0) -> np.ndarray:
        """The frame element g_{channel, shift} as an explicit length-L vector.

        g[t] embedded at time offset a*shift (window center landing on
        index a*shift), modulated to the given channel.
        """
        if not 0 <= channel < self.M:
            raise InvalidArgument(f"channel {channel} out of range [0, {self.M})")
        L = self.signal_length
        w = self.window
        out = np.zeros(L, dtype=np.complex128)
        idx = (np.arange(w.length) - w.center + self.a * shift) % L
        out[idx] = w.samples
        t = np.arange(L)
        return out * np.exp(2j * np.pi * channel * t / self.M)


@dataclass(frozen=True)
class CoefficientGrid:
    """One layer's transform output: values[channel, frame]."""

    values: np.ndarray
    frame: GaborFrame
    layer: int = 0

    def __post_init__(self):
        expected = (self.frame.M, self.frame.n_frames)
        if self.values.shape != expected:
            raise InvalidArgument(
                f"coefficient grid shape {self.values.shape} does not match frame {expected}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def dgt(signal: np.ndarray, frame: GaborFrame, layer: int = 0) -> CoefficientGrid:
    """Discrete Gabor transform of a length-L signal.

    Returns a CoefficientGrid of shape (M, L/a) following the convention in
    the module docstring.

    Raises:
        InvalidArgument: signal length differs from frame.signal_length.
    """
    signal = np.asarray(signal)
    if signal.ndim != 1 or signal.shape[0] != frame.signal_length:
        raise InvalidArgument(
            f"signal length {signal.shape} does not match frame length {frame.signal_length}"
        )
    w = frame.window
    folded = kernels.fold(signal, w.samples, w.center, frame.a, frame.M)
    values = np.fft.fft(folded, axis=1).T.copy()
    return CoefficientGrid(values=values, frame=frame, layer=layer)


def frame_apply(signal: np.ndarray, frame: GaborFrame) -> np.ndarray:
    """Apply the frame operator S = sum_{j,k} <., g_jk> g_jk to a signal.

    Exact (to rounding) via S f = M * spread(fold(f)); no FFTs involved.
    """
    signal = np.asarray(signal, dtype=np.complex128)
    if signal.shape[0] != frame.signal_length:
        raise InvalidArgument(
            f"signal length {signal.shape[0]} does not match frame length {frame.signal_length}"
        )
    w = frame.window
    folded = kernels.fold(signal, w.samples, w.center, frame.a, frame.M)
    return frame.M * kernels.spread(folded, w.samples, w.center, frame.a, frame.signal_length)


def _painless_diagonal(frame: GaborFrame) -> np.ndarray | None:
    """The frame-operator diagonal per residue class mod a, when it applies.

    With window support <= M the operator is diagonal with a-periodic
    diagonal d[t] = M * sum_k |g[t - a k]|^2; the sum only depends on
    t mod a.  Returns the length-a residue vector, or None when the
    painless condition fails.
    """
    w = frame.window
    if w.length > frame.M:
        return None
    residues = (np.arange(w.length) - w.center) % frame.a
    d = np.zeros(frame.a, dtype=np.float64)
    np.add.at(d, residues, np.abs(w.samples) ** 2)
    return frame.M * d


def _power_iteration(apply_op, start, rtol, maxiter):
    """Rayleigh-quotient power iteration for a PSD operator.

    Returns (largest eigenvalue, final vector, iterations).  Convergence is
    declared once the quotient's relative change stays below ``rtol`` on two
    consecutive steps — a single small step can be a coincidence when
    eigenvalues cluster.
    """
    vec = start
    est = 0.0
    stable = 0
    for it in range(maxiter):
        y = apply_op(vec)
        norm_y = np.linalg.norm(y)
        if norm_y <= 1e-300:
            return 0.0, vec, it
        new_est = float(np.real(np.vdot(vec, y)))
        if abs(new_est - est) <= rtol * max(abs(new_est), 1e-300):
            stable += 1
            if stable >= 2:
                return new_est, y / norm_y, it
        else:
            stable = 0
        est = new_est
        vec = y / norm_y
    raise ConvergenceError(
        f"frame-bound power iteration did not converge in {maxiter} steps",
        upper=est,
        iterations=maxiter,
    )


def frame_upper_bound(frame: GaborFrame, rtol: float = 1e-8, maxiter: int = 10_000) -> float:
    """The upper frame bound B alone (cheaper than frame_bounds).

    Exact in the painless case; one power iteration otherwise.
    """
    diag = _painless_diagonal(frame)
    if diag is not None:
        return float(diag.max())
    L = frame.signal_length
    rng = np.random.default_rng(0xD161)
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    x /= np.linalg.norm(x)
    B, _, _ = _power_iteration(lambda v: frame_apply(v, frame), x, rtol, maxiter)
    return B


def frame_bounds(
    frame: GaborFrame, rtol: float = 1e-8, maxiter: int = 10_000
) -> tuple[float, float]:
    """Estimate the frame bounds (A, B) of a Gabor system.

    Painless case (window support <= M): exact extremes of the diagonal.
    Otherwise: power iteration on S for B, then on (B I - S) for A, with a
    deterministic start vector.  The Rayleigh quotient is declared converged
    when its relative change stays below ``rtol`` on consecutive steps.

    Raises:
        NotAFrameError: when the lower bound is numerically zero
            (A <= 1e-12 * B).
        ConvergenceError: iteration cap hit; partial estimates attached.
    """
    diag = _painless_diagonal(frame)
    if diag is not None:
        A = float(diag.min())
        B = float(diag.max())
        if A <= 1e-12 * B:
            raise NotAFrameError(
                f"lower frame bound {A:.3e} is numerically zero (upper {B:.3e}); "
                "the lattice leaves gaps the window does not cover"
            )
        return A, B

    L = frame.signal_length
    rng = np.random.default_rng(0xD161)
    x = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    x /= np.linalg.norm(x)
    B, _, _ = _power_iteration(lambda v: frame_apply(v, frame), x, rtol, maxiter)
    # Shifted iteration: largest eigenvalue of (B I - S) is B - A.
    shift_start = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    shift_start /= np.linalg.norm(shift_start)

    def shifted(v):
        return B * v - frame_apply(v, frame)

    # A tight frame makes the shifted operator numerically zero; detect that
    # before asking the iteration to extract eigenvectors of noise.
    probe = shifted(shift_start)
    if np.linalg.norm(probe) <= 1e-10 * B:
        return B, B
    try:
        gap, _, _ = _power_iteration(shifted, shift_start, rtol, maxiter)
    except ConvergenceError as exc:
        raise ConvergenceError(
            "lower-bound iteration did not converge",
            upper=B,
            lower=None if exc.upper is None else B - exc.upper,
            iterations=exc.iterations,
        ) from exc
    A = B - max(gap, 0.0)
    if A <= 1e-12 * B:
        raise NotAFrameError(
            f"lower frame bound {A:.3e} is numerically zero (upper {B:.3e}); "
            "the system is not a frame at this lattice"
        )
    return A, B


def periodization_check(signal: np.ndarray, alpha: int) -> float:
    """Self-test of the subsampling/aliasing convention.

    Computes max |DFT_P(signal[::alpha]) - (1/alpha) * alias-sum of
    DFT_L(signal)| where P = L/alpha and the alias sum folds the length-L
    spectrum onto the P-point grid.  Should be at rounding level (<= 1e-10)
    for every input; a systematic offset would indicate an inconsistent
    transform convention.

    Raises:
        InvalidArgument: alpha does not divide the signal length.
    """
    signal = np.asarray(signal, dtype=np.complex128)
    L = signal.shape[0]
    if alpha < 1 or L % alpha != 0:
        raise InvalidArgument(f"alpha={alpha} must divide the signal length {L}")
    sub = signal[::alpha]
    lhs = np.fft.fft(sub)
    folded = np.fft.fft(signal).reshape(alpha, L // alpha).sum(axis=0) / alpha
    return float(np.max(np.abs(lhs - folded)))
