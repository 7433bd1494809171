"""Numerical verification of the package's approximation and stability bounds.

Every check produces a BoundReport with a measured quantity, the bound it
must respect, and pass/fail at a recorded tolerance.  The implemented
inequalities:

Layer 1 (`layer1_split` / `layer1_error_profile`).  For a harmonic tone and
channel j, the transform-modulus row splits into a peak term

    A_n0(a k / fs) * |G(j/M - n0 xi0/fs)|        (G = window transform)

plus a residual controlled by

    C_time * sum_n sup_{|t - a k| <= a} |A_n'(t)| / fs
      + 2 C_freq * sum_{r >= 1} (1 + (xi0/fs)^s (r - 1/2)^s)^-1.

The first term tracks envelope movement inside one hop (evaluated here from
per-sample derivative profiles and a circular sliding maximum); the second
collects all other harmonics' leakage through the window's polynomial
frequency decay, folded into a worst-case half-integer spacing grid.  The
tail is truncated once summands drop below 1e-12 and the remainder is
covered by an explicit integral estimate, so truncation never fakes a pass.

Layer 2 (`layer2_grid` / `layer2_split`).  Feeding channel j's modulus row
through the next transform, the main term is the envelope's alias-free
baseband at the layer-1 rate analyzed by the second frame; the residual is
bounded by an envelope-aliasing term plus the propagated layer-1 error:

    (eps / a1) * C_freq2 * |G1(delta0)| * (1/P) * sum_r (1 + |wrap(h/M2 - r/P)|^s)^-1
      + sup_k E1(k) * ||g2||_1

with eps the max out-of-band alias mass of the envelope's spectrum
(`envelope_aliasing_eps`) and P = L/a1.  The constants follow from the
discrete Plancherel identity <x, y> = (1/P) sum X Y*.

Smoothed outputs (`smoothed_outputs`).  Convolving node signals with the
next layer's output atom turns both decompositions into feature-level ones;
error vectors convolve with |phi| (pointwise) or multiply by ||phi||_1
(constant), never growing.

Deformations (`envelope_warp_bound`, `phase_mod_bound`):

    warp:   ||f - f_warped||  <=  D ||tau||_inf sum_n C_n,
            D^2 = 2 + (1 - ||tau||_inf)^-1 * integral (1 + |x|^s)^-2 dx,
            C_n = sup_t |A_n'(t)| (1 + |t|^s)   (calibrated on the grid);
    phase:  ||f - f_mod||  <=  eps * sum_n ||A_n||_2, admissible while every
            sup |tau_n| < arccos(1 - eps^2/2) / (2 pi).

Norm bridging: measured distances are discrete l2 scaled by 1/sqrt(fs) so
both sides of each inequality live in the same (seconds-based) units.

`contractivity_check` compares feature distances against raw signal
distances for normalized layer stacks, and `run_verification` drives the
whole battery from an experiment configuration.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.ndimage import maximum_filter1d

from .errors import InvalidArgument
from .gabor import GaborFrame, dgt
from .scattering import DEFAULT_NODE_BUDGET, TripletSequence, extract_features, feature_distance, layer_forward
from .signal_model import (
    Deformation,
    Tone,
    WARP_SUP_LIMIT,
    deform,
    envelope_derivative_profile,
    phase_mod_threshold,
    realized_envelope,
    synthesize,
    pad_to,
)
from .windows import decay_constants, window_dtft

TAIL_SUMMAND_FLOOR = 1e-12
MAX_TAIL_TERMS = 5_000_000


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one bound check: measured <= bound + tol iff passed."""

    name: str
    measured: float
    bound: float
    margin: float
    passed: bool
    tol: float
    context: dict = field(default_factory=dict)


def make_report(name: str, measured: float, bound: float, tol: float = 0.0, **context) -> BoundReport:
    measured = float(measured)
    bound = float(bound)
    return BoundReport(
        name=name,
        measured=measured,
        bound=bound,
        margin=bound - measured,
        passed=bool(measured <= bound + tol),
        tol=float(tol),
        context=context,
    )


def tone_signal(tone: Tone, length: int) -> np.ndarray:
    """Synthesize a tone and zero-pad it to an analysis length."""
    return pad_to(synthesize(tone), length)


def nearest_harmonic(tone: Tone, frame: GaborFrame, channel: int) -> int:
    """The harmonic whose frequency is closest to the channel's (ties -> lower)."""
    if not 0 <= channel < frame.M:
        raise InvalidArgument(f"channel {channel} out of range [0, {frame.M})")
    target = channel / frame.M
    n = np.arange(1, tone.n_harmonics + 1)
    dist = np.abs(target - n * (tone.xi0_hz / tone.fs))
    return int(n[np.argmin(dist)])


def channel_of_harmonic(tone: Tone, frame: GaborFrame, n: int) -> int:
    """The channel index nearest harmonic n's frequency."""
    return int(round(n * tone.xi0_hz * frame.M / tone.fs))


# --------------------------------------------------------------------------
# layer 1


@dataclass(frozen=True)
class Layer1Split:
    """Peak/residual decomposition of one transform-modulus row."""

    channel: int
    harmonic: int
    peak_gain: float
    main: np.ndarray
    residual: np.ndarray


def layer1_split(tone: Tone, frame: GaborFrame, channel: int) -> Layer1Split:
    """Split the layer-1 row at ``channel`` into envelope peak term + residual.

    The main term samples the nearest harmonic's envelope on the frame's
    time lattice and scales it by the window's transform modulus at the
    channel/harmonic frequency offset; the residual is the absolute
    difference against the actual modulus row.
    """
    signal = tone_signal(tone, frame.signal_length)
    row = layer_forward(signal, frame, layer=1).values[channel]
    n0 = nearest_harmonic(tone, frame, channel)
    delta = channel / frame.M - n0 * tone.xi0_hz / tone.fs
    peak_gain = float(np.abs(window_dtft(frame.window, delta)[0]))
    frame_times = frame.a * np.arange(frame.n_frames, dtype=np.float64) / tone.fs
    env = realized_envelope(tone, n0, frame_times)
    main = env * peak_gain
    residual = np.abs(row - main)
    return Layer1Split(
        channel=channel, harmonic=n0, peak_gain=peak_gain, main=main, residual=residual
    )


def tail_summand(xi0_norm: float, r: int, s: float) -> float:
    """One term of the harmonic-separation tail: (1 + xi0n^s (r - 1/2)^s)^-1."""
    if s <= 1:
        raise InvalidArgument(f"decay exponent s must exceed 1, got {s}")
    if r < 1:
        raise InvalidArgument(f"tail index r must be >= 1, got {r}")
    return float(1.0 / (1.0 + xi0_norm**s * (r - 0.5) ** s))


def harmonic_tail(xi0_norm: float, s: float, c_freq: float) -> float:
    """2 C_freq * sum_{r>=1} (1 + xi0n^s (r-1/2)^s)^-1, with a certified cap.

    Summation stops once terms fall below 1e-12 (or at a hard term cap); the
    remaining mass is covered by the integral comparison
    sum_{r>R} term_r <= (1/q) * (R-1)^(1-s) / (s-1) with q = xi0n^s, which
    is added to the result so the returned value always upper-bounds the
    full series.
    """
    if not 1 < s <= 64:
        raise InvalidArgument(
            f"decay exponent s must lie in (1, 64], got {s} (larger exponents "
            "underflow the tail arithmetic without tightening any bound here)"
        )
    if xi0_norm <= 0:
        raise InvalidArgument(f"normalized fundamental must be positive, got {xi0_norm}")
    q = xi0_norm**s
    if q < 1e-300:
        raise InvalidArgument(
            f"xi0_norm^s = {xi0_norm}^{s} underflows; use a smaller decay exponent"
        )
    # Last index whose summand still clears the floor.
    r_stop = int(math.floor(((1.0 / TAIL_SUMMAND_FLOOR - 1.0) / q) ** (1.0 / s) + 0.5))
    r_stop = max(1, min(r_stop, MAX_TAIL_TERMS))
    total = 0.0
    chunk = 1_000_000
    for start in range(1, r_stop + 1, chunk):
        rs = np.arange(start, min(start + chunk, r_stop + 1), dtype=np.float64)
        total += float(np.sum(1.0 / (1.0 + q * (rs - 0.5) ** s)))
    remainder = (1.0 / q) * max(r_stop - 1, 1) ** (1.0 - s) / (s - 1.0)
    return 2.0 * c_freq * (total + remainder)


def layer1_error_profile(tone: Tone, frame: GaborFrame, s: float = 3.0) -> np.ndarray:
    """Residual bound per time step (channel-independent).

    term1[k] = C_time * sum_n sup over |t - a k| <= a of |A_n'(t)| / fs,
    evaluated on per-sample derivative magnitude profiles (edge fades and
    the sharp attack's one-sample jump included) with a circular sliding
    maximum; plus the harmonic-separation tail.
    """
    c_time, c_freq = decay_constants(frame.window, s)
    L = frame.signal_length
    t = np.arange(L, dtype=np.float64) / tone.fs
    sup_sum = np.zeros(frame.n_frames, dtype=np.float64)
    size = 2 * frame.a + 1
    for n in range(1, tone.n_harmonics + 1):
        prof = envelope_derivative_profile(tone, n, t)
        sliding = maximum_filter1d(prof, size=size, mode="wrap")
        sup_sum += sliding[:: frame.a][: frame.n_frames]
    term1 = c_time * sup_sum / tone.fs
    tail = harmonic_tail(tone.xi0_hz / tone.fs, s, c_freq)
    return term1 + tail


def layer1_error_bound(
    tone: Tone, frame: GaborFrame, channel: int, k: int, s: float = 3.0
) -> float:
    """Scalar residual bound at one lattice point.

    The channel argument is validated but does not enter the value: the
    symmetrized tail already covers every channel's worst case.
    """
    if not 0 <= channel < frame.M:
        raise InvalidArgument(f"channel {channel} out of range [0, {frame.M})")
    if not 0 <= k < frame.n_frames:
        raise InvalidArgument(f"time step {k} out of range [0, {frame.n_frames})")
    return float(layer1_error_profile(tone, frame, s)[k])


# --------------------------------------------------------------------------
# layer 2


def envelope_aliasing_eps(envelope: np.ndarray, alpha: int) -> float:
    """Worst-case out-of-band alias mass of an envelope under subsampling.

    For each base bin r of the subsampled spectrum the alpha aliases
    {r + q L/alpha} fold together; the alias nearest DC (in wrapped
    distance) is the wanted baseband, the rest are pollution.  Returns the
    max over r of the polluting |DFT| mass (numpy's unnormalized DFT).
    """
    envelope = np.asarray(envelope)
    L = envelope.shape[0]
    if alpha < 1 or L % alpha != 0:
        raise InvalidArgument(f"alpha={alpha} must divide the envelope length {L}")
    if alpha == 1:
        return 0.0
    P = L // alpha
    spectrum = np.fft.fft(envelope)
    mags = np.abs(spectrum).reshape(alpha, P)
    idx = np.arange(L).reshape(alpha, P)
    wrapped = np.minimum(idx, L - idx)
    keep = np.argmin(wrapped, axis=0)
    col_totals = mags.sum(axis=0)
    kept = mags[keep, np.arange(P)]
    return float(np.max(col_totals - kept))


def subsampled_baseband(envelope: np.ndarray, alpha: int) -> np.ndarray:
    """The alias-free part of the subsampled envelope (length L/alpha).

    Keeps, for each subsampled bin, only the alias nearest DC of the
    full-rate spectrum (scaled by 1/alpha, matching the subsampling
    identity), and returns its inverse DFT.  Subtracting this from the
    plainly subsampled envelope leaves exactly the aliased mass that
    `envelope_aliasing_eps` bounds.
    """
    envelope = np.asarray(envelope)
    L = envelope.shape[0]
    if alpha < 1 or L % alpha != 0:
        raise InvalidArgument(f"alpha={alpha} must divide the envelope length {L}")
    P = L // alpha
    spectrum = np.fft.fft(envelope)
    idx = np.arange(L).reshape(alpha, P)
    wrapped = np.minimum(idx, L - idx)
    keep = np.argmin(wrapped, axis=0)
    base = spectrum[idx[keep, np.arange(P)]] / alpha
    return np.fft.ifft(base)


def _wrap_half(x: np.ndarray) -> np.ndarray:
    """Wrap frequencies to (-1/2, 1/2]."""
    return x - np.round(x)


@dataclass(frozen=True)
class Layer2Grid:
    """Full second-layer decomposition for one first-layer channel."""

    channel1: int
    harmonic: int
    peak_gain: float
    eps: float
    e1_sup: float
    values: np.ndarray  # measured |U2|, (M2, steps)
    main: np.ndarray  # main term, same shape
    residual: np.ndarray
    bound: np.ndarray  # per second-layer channel, (M2,)


def layer2_grid(tone: Tone, omega: TripletSequence, channel1: int, s: float = 3.0) -> Layer2Grid:
    """Decompose all second-layer channels fed by first-layer ``channel1``.

    Main term: the envelope's subsampled baseband analyzed by the second
    frame, scaled by the first window's peak gain.  The per-channel bound
    adds the aliasing term and the propagated first-layer error (see the
    module docstring for the exact constants).
    """
    if omega.depth_available < 2:
        raise InvalidArgument("second-layer decomposition needs at least two layers")
    f1 = omega.layers[0].frame
    f2 = omega.layers[1].frame
    signal = tone_signal(tone, f1.signal_length)
    u1 = layer_forward(signal, f1, layer=1).values
    if not 0 <= channel1 < f1.M:
        raise InvalidArgument(f"channel {channel1} out of range [0, {f1.M})")
    u2 = layer_forward(u1[channel1], f2, layer=2).values

    n0 = nearest_harmonic(tone, f1, channel1)
    delta = channel1 / f1.M - n0 * tone.xi0_hz / tone.fs
    peak_gain = float(np.abs(window_dtft(f1.window, delta)[0]))

    t_full = np.arange(f1.signal_length, dtype=np.float64) / tone.fs
    env_full = realized_envelope(tone, n0, t_full)
    eps = envelope_aliasing_eps(env_full, f1.a)
    env_base = subsampled_baseband(env_full, f1.a)
    main = peak_gain * np.abs(dgt(env_base, f2).values)
    residual = np.abs(u2 - main)

    e1_sup = float(np.max(layer1_error_profile(tone, f1, s)))
    _, c_freq2 = decay_constants(f2.window, s)
    P = f2.signal_length
    r_freqs = np.arange(P, dtype=np.float64) / P
    h_freqs = np.arange(f2.M, dtype=np.float64) / f2.M
    nu = _wrap_half(h_freqs[:, None] - r_freqs[None, :])
    alias_sums = np.sum(1.0 / (1.0 + np.abs(nu) ** s), axis=1) / P
    bound = (eps / f1.a) * c_freq2 * peak_gain * alias_sums + e1_sup * f2.window.l1_norm
    return Layer2Grid(
        channel1=channel1,
        harmonic=n0,
        peak_gain=peak_gain,
        eps=eps,
        e1_sup=e1_sup,
        values=u2,
        main=main,
        residual=residual,
        bound=bound,
    )


@dataclass(frozen=True)
class Layer2Split:
    """One (channel1, channel2) slice of the second-layer decomposition."""

    channel1: int
    channel2: int
    harmonic: int
    main: np.ndarray
    residual: np.ndarray
    bound: float
    eps: float


def layer2_split(
    tone: Tone, omega: TripletSequence, channel1: int, channel2: int, s: float = 3.0
) -> Layer2Split:
    grid = layer2_grid(tone, omega, channel1, s)
    f2 = omega.layers[1].frame
    if not 0 <= channel2 < f2.M:
        raise InvalidArgument(f"channel {channel2} out of range [0, {f2.M})")
    return Layer2Split(
        channel1=channel1,
        channel2=channel2,
        harmonic=grid.harmonic,
        main=grid.main[channel2],
        residual=grid.residual[channel2],
        bound=float(grid.bound[channel2]),
        eps=grid.eps,
    )


# --------------------------------------------------------------------------
# smoothed outputs


def _circular_conv(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.fft.ifft(np.fft.fft(x) * np.fft.fft(y))


@dataclass(frozen=True)
class SmoothedOutputs:
    """Feature-level decompositions with their error budgets."""

    smoothed1: np.ndarray  # (M1, steps1) measured smoothed layer-1 outputs
    main1: np.ndarray  # same shape, smoothed main terms
    eps1: np.ndarray  # (steps1,) pointwise error budget
    smoothed2: np.ndarray  # (M2, steps2) at the analyzed first-layer channel
    main2: np.ndarray
    eps2: np.ndarray  # (M2,) per-channel constant budgets
    channel1: int
    reports: tuple


def smoothed_outputs(
    tone: Tone, omega: TripletSequence, channel1: int | None = None, s: float = 3.0
) -> SmoothedOutputs:
    """Compare smoothed node outputs against smoothed main terms.

    Layer-1 outputs are smoothed by layer 2's output atom and checked
    against the smoothed envelope peak terms with the pointwise budget
    eps1 = (layer-1 error profile) circularly convolved with |phi1|;
    layer-2 outputs (at ``channel1``, default: the fundamental's channel)
    use the constant budget eps2 = layer-2 bound * ||phi2||_1.  Needs three
    configured layers (the third supplies phi2).
    """
    if omega.depth_available < 3:
        raise InvalidArgument(
            "smoothed-output checks need three configured layers "
            "(the third provides the second smoothing atom)"
        )
    f1 = omega.layers[0].frame
    layer2 = omega.layers[1]
    layer3 = omega.layers[2]
    f2 = layer2.frame
    f3 = layer3.frame
    signal = tone_signal(tone, f1.signal_length)
    u1 = layer_forward(signal, f1, layer=1).values

    phi1 = f2.atom(layer2.output_atom_channel, 0)
    hop1 = f2.a
    spec_phi1 = np.fft.fft(phi1)
    smoothed1 = np.abs(np.fft.ifft(np.fft.fft(u1, axis=1) * spec_phi1[None, :], axis=1))[:, ::hop1]

    frame_times = f1.a * np.arange(f1.n_frames, dtype=np.float64) / tone.fs
    env_smooth = {}
    for n in range(1, tone.n_harmonics + 1):
        env = realized_envelope(tone, n, frame_times)
        env_smooth[n] = _circular_conv(env, phi1)[::hop1]
    main1 = np.zeros_like(smoothed1)
    for j in range(f1.M):
        n0 = nearest_harmonic(tone, f1, j)
        delta = j / f1.M - n0 * tone.xi0_hz / tone.fs
        gain = float(np.abs(window_dtft(f1.window, delta)[0]))
        main1[j] = gain * np.abs(env_smooth[n0])

    profile = layer1_error_profile(tone, f1, s)
    eps1 = np.real(_circular_conv(profile, np.abs(phi1)))[::hop1]
    resid1 = np.abs(smoothed1 - main1)
    gap1 = resid1 - eps1[None, :]
    worst1 = np.unravel_index(int(np.argmax(gap1)), gap1.shape)
    report1 = make_report(
        "smoothed-layer1-dominance",
        measured=float(resid1[worst1]),
        bound=float(eps1[worst1[1]]),
        tol=1e-9 * max(1.0, float(np.max(eps1))),
        worst_channel=int(worst1[0]),
        worst_step=int(worst1[1]),
    )

    if channel1 is None:
        channel1 = channel_of_harmonic(tone, f1, 1)
    grid2 = layer2_grid(tone, omega, channel1, s)
    phi2 = f3.atom(layer3.output_atom_channel, 0)
    hop2 = f3.a
    spec_phi2 = np.fft.fft(phi2)
    smoothed2 = np.abs(
        np.fft.ifft(np.fft.fft(grid2.values, axis=1) * spec_phi2[None, :], axis=1)
    )[:, ::hop2]
    main2 = np.abs(
        np.fft.ifft(np.fft.fft(grid2.main, axis=1) * spec_phi2[None, :], axis=1)
    )[:, ::hop2]
    phi2_l1 = float(np.sum(np.abs(phi2)))
    eps2 = grid2.bound * phi2_l1
    resid2 = np.abs(smoothed2 - main2)
    gap2 = resid2 - eps2[:, None]
    worst2 = np.unravel_index(int(np.argmax(gap2)), gap2.shape)
    report2 = make_report(
        "smoothed-layer2-dominance",
        measured=float(resid2[worst2]),
        bound=float(eps2[worst2[0]]),
        tol=1e-9 * max(1.0, float(np.max(eps2))),
        channel1=int(channel1),
        worst_channel=int(worst2[0]),
        worst_step=int(worst2[1]),
    )
    return SmoothedOutputs(
        smoothed1=smoothed1,
        main1=main1,
        eps1=eps1,
        smoothed2=smoothed2,
        main2=main2,
        eps2=eps2,
        channel1=int(channel1),
        reports=(report1, report2),
    )


# --------------------------------------------------------------------------
# deformation stability


def decay_profile_constant(tone: Tone, n: int, s: float) -> float:
    """C_n = sup over the grid of |A_n'(t)| (1 + |t|^s), t in seconds.

    Calibrated from the realized derivative profile (edge fades included),
    so the polynomial-decay hypothesis |A_n'(t)| <= C_n (1 + |t|^s)^-1
    holds on the whole grid by construction.
    """
    t = tone.time_grid()
    prof = envelope_derivative_profile(tone, n, t)
    return float(np.max(prof * (1.0 + np.abs(t) ** s)))


def envelope_warp_bound(
    tone: Tone, tau: np.ndarray, cn_list=None, s: float = 2.0
) -> BoundReport:
    """Check the envelope-warp stability bound for one warp track.

    ``cn_list`` supplies the per-harmonic decay constants C_n; each is
    verified against the numerically calibrated profile constant before
    use (a too-small constant is rejected, not silently inflated).  When
    omitted the calibrated constants are used directly.

    Raises:
        InvalidArgument: warp sup over the admissible limit, an envelope
            without a finite derivative bound (sharp attack), or an
            undersized C_n.
    """
    for i, spec in enumerate(tone.envelopes, start=1):
        if not spec.differentiable:
            raise InvalidArgument(
                f"envelope {i} is a {spec.kind}; the warp-stability bound needs "
                "a finite derivative bound and does not apply"
            )
    tau = np.asarray(tau, dtype=np.float64)
    sup_tau = float(np.max(np.abs(tau))) if tau.size else 0.0
    if sup_tau > WARP_SUP_LIMIT:
        raise InvalidArgument(
            f"warp sup {sup_tau:.4g} s exceeds the admissible limit {WARP_SUP_LIMIT} s"
        )
    calibrated = [decay_profile_constant(tone, n, s) for n in range(1, tone.n_harmonics + 1)]
    if cn_list is None:
        cn = calibrated
    else:
        cn = [float(c) for c in cn_list]
        if len(cn) != tone.n_harmonics:
            raise InvalidArgument(
                f"{len(cn)} decay constants for {tone.n_harmonics} harmonics"
            )
        for n, (given, needed) in enumerate(zip(cn, calibrated), start=1):
            if given < needed * (1.0 - 1e-12):
                raise InvalidArgument(
                    f"C_{n} = {given:.6g} is below the numerically verified "
                    f"derivative-decay constant {needed:.6g}"
                )
    base = synthesize(tone)
    warped = deform(tone, Deformation("envelope_warp", tau=tau))
    measured = float(np.linalg.norm(base - warped)) / math.sqrt(tone.fs)

    integral, _ = quad(lambda x: (1.0 + abs(x) ** s) ** (-2), -np.inf, np.inf)
    d_const = math.sqrt(2.0 + integral / (1.0 - sup_tau))
    bound = d_const * sup_tau * float(np.sum(cn))

    # Cross-check the calibrated constants against plain finite differences.
    t = tone.time_grid()
    fd_ratio = 0.0
    for n in range(1, tone.n_harmonics + 1):
        env = realized_envelope(tone, n, t)
        fd = np.abs(np.diff(env)) * tone.fs
        weight = 1.0 + np.abs(t[:-1]) ** s
        if cn[n - 1] > 0:
            fd_ratio = max(fd_ratio, float(np.max(fd * weight)) / cn[n - 1])
    return make_report(
        "envelope-warp-stability",
        measured=measured,
        bound=bound,
        tol=1e-9 * max(1.0, bound),
        sup_tau=sup_tau,
        d_const=d_const,
        cn_sum=float(np.sum(cn)),
        fd_over_calibrated=fd_ratio,
    )


def phase_mod_bound(tone: Tone, tau_n, eps: float) -> BoundReport:
    """Check the phase-modulation stability bound for one set of tracks.

    Raises:
        InvalidArgument: any track's sup at or above the admissible
            threshold for ``eps``.
    """
    tracks = [np.asarray(x, dtype=np.float64) for x in tau_n]
    limit = phase_mod_threshold(eps)
    sups = [float(np.max(np.abs(x))) if x.size else 0.0 for x in tracks]
    for n, sup in enumerate(sups, start=1):
        if sup >= limit:
            raise InvalidArgument(
                f"phase track {n} sup {sup:.6g} cycles is not below the admissible "
                f"threshold {limit:.6g} for eps = {eps}"
            )
    base = synthesize(tone)
    modded = deform(tone, Deformation("frequency_mod", tau_n=tuple(tracks), eps=eps))
    measured = float(np.linalg.norm(base - modded)) / math.sqrt(tone.fs)
    t = tone.time_grid()
    env_norms = [
        float(np.linalg.norm(realized_envelope(tone, n, t)))
        for n in range(1, tone.n_harmonics + 1)
    ]
    bound = eps * float(np.sum(env_norms)) / math.sqrt(tone.fs)
    return make_report(
        "phase-mod-stability",
        measured=measured,
        bound=bound,
        tol=1e-9 * max(1.0, bound),
        eps=eps,
        max_track_sup=max(sups) if sups else 0.0,
        threshold=limit,
    )


def contractivity_check(
    f: np.ndarray,
    h: np.ndarray,
    omega: TripletSequence,
    depth: int,
    budget: int = DEFAULT_NODE_BUDGET,
) -> BoundReport:
    """Feature distance must not exceed signal distance (normalized stacks).

    Raises:
        InvalidArgument: the layer stack is not contractivity-normalized.
    """
    if not omega.normalized:
        raise InvalidArgument(
            "the layer stack is not contractivity-normalized "
            f"(upper bounds {tuple(round(b, 6) for b in omega.upper_bounds)}); "
            "scale the windows first"
        )
    fu = extract_features(np.asarray(f), omega, depth, budget)
    hu = extract_features(np.asarray(h), omega, depth, budget)
    measured = feature_distance(fu, hu)
    bound = float(np.linalg.norm(np.asarray(f) - np.asarray(h)))
    return make_report("contractivity", measured=measured, bound=bound, tol=1e-9, depth=depth)


# --------------------------------------------------------------------------
# report output


def write_reports_csv(reports, path) -> None:
    """Machine-readable dump: name, measured, bound, margin, passed, tol, context."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "measured", "bound", "margin", "passed", "tol", "context"])
        for r in reports:
            ctx = ";".join(f"{k}={v}" for k, v in sorted(r.context.items()))
            writer.writerow(
                [r.name, f"{r.measured:.17g}", f"{r.bound:.17g}", f"{r.margin:.17g}",
                 "pass" if r.passed else "FAIL", f"{r.tol:.3g}", ctx]
            )


def format_reports(reports) -> str:
    """Human-readable summary, one line per check."""
    lines = []
    width = max((len(r.name) for r in reports), default=10)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        lines.append(
            f"{status}  {r.name:<{width}}  measured={r.measured:.6g}  "
            f"bound={r.bound:.6g}  margin={r.margin:.6g}"
        )
    n_fail = sum(not r.passed for r in reports)
    lines.append(f"{len(reports)} checks, {len(reports) - n_fail} passed, {n_fail} failed")
    return "\n".join(lines)
