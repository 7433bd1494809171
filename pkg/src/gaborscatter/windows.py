"""Analysis windows for Gabor frames.

Three families are provided:

``gaussian``
    g[t] = exp(-pi ((t - c) / p)**2) with width parameter ``p`` in samples.
    Excellent joint time-frequency decay; the default for all bound work
    because its transform-side decay beats any polynomial.
``hann``
    Raised cosine, w[t] = 0.5 (1 + cos(2 pi (t - c) / D)).  D = length - 1
    for odd lengths and D = length for even lengths, which keeps the window
    exactly symmetric about c = floor(length/2) for both parities.
``rectangular``
    All ones.  Mostly useful for oracle tests (its DGT reduces to a plain
    DFT when the window spans the whole signal).

Windows are immutable value objects; norms are computed once at
construction.  All sample vectors are stored as complex128 so downstream
kernels handle one dtype, but the shipped families are real-valued.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgument

WINDOW_KINDS = ("gaussian", "hann", "rectangular")


@dataclass(frozen=True)
class Window:
    """A sampled analysis window with cached norms.

    Attributes:
        samples: complex128 vector of window values.
        kind: one of WINDOW_KINDS, or "custom" for hand-built windows.
        shape_param: width parameter (samples) for gaussian; None otherwise.
        center: index the window is considered centered on,
            floor(length / 2).
        l1_norm, l2_norm: cached sum(|w|) and sqrt(sum(|w|^2)).
    """

    samples: np.ndarray
    kind: str
    shape_param: float | None = None
    center: int = field(init=False)
    l1_norm: float = field(init=False)
    l2_norm: float = field(init=False)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.size == 0:
            raise InvalidArgument("window samples must be a nonempty 1-D vector")
        if not np.any(samples):
            raise InvalidArgument("window samples must not be all zero")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "center", samples.size // 2)
        object.__setattr__(self, "l1_norm", float(np.sum(np.abs(samples))))
        object.__setattr__(self, "l2_norm", float(np.linalg.norm(samples)))

    @property
    def length(self) -> int:
        return self.samples.size

    def scaled(self, factor: float) -> "Window":
        """Return a copy with samples multiplied by ``factor``."""
        return Window(self.samples * factor, self.kind, self.shape_param)


def make_window(kind: str, length: int, shape_param: float | None = None) -> Window:
    """Construct a window of the given family.

    Args:
        kind: one of ``gaussian``, ``hann``, ``rectangular``.
        length: number of samples, >= 1.
        shape_param: gaussian width in samples (> 0); ignored by the other
            kinds.

    Returns:
        A Window with cached norms, centered on floor(length/2).

    Raises:
        InvalidArgument: unknown kind, non-positive length, or a gaussian
            without a positive shape_param.
    """
    if kind not in WINDOW_KINDS:
        raise InvalidArgument(
            f"unknown window kind {kind!r}; choose one of {', '.join(WINDOW_KINDS)}"
        )
    if not isinstance(length, (int, np.integer)) or length < 1:
        raise InvalidArgument(f"window length must be a positive integer, got {length!r}")
    center = length // 2
    t = np.arange(length, dtype=np.float64)
    if kind == "gaussian":
        if shape_param is None or shape_param <= 0:
            raise InvalidArgument(
                f"gaussian window needs shape_param > 0 (width in samples), got {shape_param!r}"
            )
        vals = np.exp(-np.pi * ((t - center) / float(shape_param)) ** 2)
    elif kind == "hann":
        if length == 1:
            vals = np.ones(1)
        else:
            # Denominator choice keeps w[center + k] == w[center - k] exactly
            # for both parities (odd: endpoints hit zero; even: no zero tap).
            denom = length - 1 if length % 2 == 1 else length
            vals = 0.5 * (1.0 + np.cos(2.0 * np.pi * (t - center) / denom))
        shape_param = None
    else:  # rectangular
        vals = np.ones(length)
        shape_param = None
    return Window(vals.astype(np.complex128), kind, shape_param)


def window_dtft(window: Window, freqs) -> np.ndarray:
    """Evaluate the window's transform at arbitrary normalized frequencies.

    Computes W(nu) = sum_i w[i] exp(-2 pi i nu (i - center)) for each nu in
    ``freqs`` (cycles per sample).  Centering the phase on ``window.center``
    makes W(nu) real and even for the real symmetric families, which is what
    every peak-gain evaluation in the bounds module relies on.
    """
    nu = np.atleast_1d(np.asarray(freqs, dtype=np.float64))
    offsets = np.arange(window.length, dtype=np.float64) - window.center
    phase = np.exp(-2j * np.pi * np.outer(nu, offsets))
    out = phase @ window.samples
    return out


def decay_constants(window: Window, s: float) -> tuple[float, float]:
    """Time- and frequency-side decay constants of a window.

    Args:
        window: the window to measure.
        s: polynomial decay exponent, > 1.

    Returns:
        ``(C_time, C_freq)`` where C_time = sum_t |t - center| |w[t]| and
        C_freq = max over the window's own DFT bins of |W(nu)| (1 + |nu|^s),
        with bin frequencies wrapped to (-1/2, 1/2] cycles per sample.

    The frequency constant is a grid maximum.  For gaussian windows it is
    also a valid off-grid envelope: exp(pi p^2 nu^2) >= 1 + pi p^2 nu^2
    >= 1 + |nu|^s whenever s >= 2, p >= 1, |nu| <= 1/2, so the peak value
    W(0) realizes the max and dominates everywhere.

    Raises:
        InvalidArgument: if s <= 1 (the tail sums downstream would diverge).
    """
    if s <= 1:
        raise InvalidArgument(f"decay exponent s must exceed 1, got {s}")
    offsets = np.abs(np.arange(window.length) - window.center)
    c_time = float(np.sum(offsets * np.abs(window.samples)))
    # |W| on the window's own bin grid: the centering phase is unimodular,
    # so the plain FFT modulus already equals |window_dtft| at k/length.
    mags = np.abs(np.fft.fft(window.samples))
    k = np.arange(window.length)
    nu = k / window.length
    nu = np.where(nu > 0.5, nu - 1.0, nu)
    c_freq = float(np.max(mags * (1.0 + np.abs(nu) ** s)))
    return c_time, c_freq


def normalize_for_contractivity(window: Window, a: int, M: int) -> Window:
    """Scale a window so its Gabor frame has upper bound B in [1 - 1e-6, 1].

    The frame is taken over the smallest signal length compatible with the
    lattice (a multiple of lcm(a, M) covering the window support); for the
    shipped window families B does not depend on that choice of length.
    Scaling by 1 / sqrt(B) maps B to 1 exactly up to the bound estimator's
    own tolerance.

    Raises:
        NotAFrameError: if the system is not a frame (propagated from
            frame_bounds).
    """
    from .gabor import GaborFrame, frame_bounds

    if a < 1 or M < 1:
        raise InvalidArgument(f"lattice parameters must be positive, got a={a}, M={M}")
    base = np.lcm(int(a), int(M))
    n_periods = max(1, -(-window.length // base))  # ceil div
    L = int(base * n_periods)
    frame = GaborFrame(window, a=a, M=M, signal_length=L)
    _, upper = frame_bounds(frame)
    scaled = window.scaled(1.0 / np.sqrt(upper))
    return scaled
