"""Harmonic tone model and deformation operators.

A tone is a finite sum of modulated envelopes

    f[t] = sum_{n=1..N} A_n(t / fs) * exp(2 pi i n xi0 t / fs)

with nonnegative envelopes A_n whose peaks are capped at 1/n.  Envelopes are
defined as functions of time in seconds (zero outside [0, duration]), so
deformations can re-evaluate them at warped times analytically instead of
resampling.

Envelope kinds
--------------
``constant``            A = 1 (before the harmonic cap).
``smooth_adsr``         piecewise-linear attack / decay / sustain / release.
``sharp_attack``        instant jump to full level, linear decay to the
                        sustain level, raised-cosine release.  The jump makes
                        it nondifferentiable by design.
``amplitude_modulated`` sinusoidal modulator at ``rate_hz``.  Mode
                        ``abs_sin`` uses depth*|sin| (nonnegative, but its
                        period halves: spectral content sits at 2*rate);
                        ``offset_sin`` uses depth*(0.5 + 0.5 sin), which
                        keeps a true spectral line at ``rate_hz``.

The harmonic cap is enforced by scale_n = min(1, (1/n) / peak(raw)), so an
envelope already below 1/n is left untouched.  Kinds that do not naturally
vanish at the segment edges (constant, amplitude_modulated) get a raised-
cosine edge fade (default 5 ms) to approximate compact support; the ramped
kinds start and end at zero on their own and the sharp attack's initial jump
is the modeled discontinuity, so neither is faded.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument

ENVELOPE_KINDS = ("constant", "smooth_adsr", "sharp_attack", "amplitude_modulated")
AM_MODES = ("abs_sin", "offset_sin")

# Admissible sup for time warps, in seconds.  "Much smaller than one" made
# testable; overridable per call where the API allows.
WARP_SUP_LIMIT = 0.1


@dataclass(frozen=True)
class EnvelopeSpec:
    """Parameters of one envelope, before harmonic capping.

    Times are in seconds.  Only the fields relevant to ``kind`` are used;
    validation rejects inconsistent combinations.
    """

    kind: str
    attack_s: float = 0.0
    decay_s: float = 0.0
    sustain_level: float = 1.0
    release_s: float = 0.0
    rate_hz: float = 0.0
    depth: float = 1.0
    mode: str = "abs_sin"

    def __post_init__(self):
        if self.kind not in ENVELOPE_KINDS:
            raise InvalidArgument(
                f"unknown envelope kind {self.kind!r}; choose one of {', '.join(ENVELOPE_KINDS)}"
            )
        if self.kind == "smooth_adsr":
            if self.attack_s <= 0:
                raise InvalidArgument("smooth_adsr requires attack_s > 0 (instant attacks are the sharp_attack kind)")
            if self.decay_s < 0 or self.release_s < 0:
                raise InvalidArgument("decay_s and release_s must be >= 0")
            if not 0.0 <= self.sustain_level <= 1.0:
                raise InvalidArgument(f"sustain_level must lie in [0, 1], got {self.sustain_level}")
            if self.sustain_level < 1.0 and self.decay_s == 0:
                raise InvalidArgument("smooth_adsr with sustain below 1 needs decay_s > 0 (no jumps in the smooth kind)")
            if self.sustain_level > 0.0 and self.release_s == 0:
                raise InvalidArgument("smooth_adsr with sustain above 0 needs release_s > 0 (no jumps in the smooth kind)")
        elif self.kind == "sharp_attack":
            if self.decay_s < 0 or self.release_s < 0:
                raise InvalidArgument("decay_s and release_s must be >= 0")
            if not 0.0 <= self.sustain_level <= 1.0:
                raise InvalidArgument(f"sustain_level must lie in [0, 1], got {self.sustain_level}")
            if self.decay_s == 0 and self.sustain_level != 1.0:
                raise InvalidArgument("sharp_attack jumps to full level; reaching a lower sustain needs decay_s > 0")
        elif self.kind == "amplitude_modulated":
            if self.rate_hz <= 0:
                raise InvalidArgument(f"amplitude_modulated requires rate_hz > 0, got {self.rate_hz}")
            if not 0.0 < self.depth <= 1.0:
                raise InvalidArgument(f"depth must lie in (0, 1], got {self.depth}")
            if self.mode not in AM_MODES:
                raise InvalidArgument(
                    f"unknown AM mode {self.mode!r}; choose one of {', '.join(AM_MODES)}"
                )

    # -- raw shape (pre-cap, pre-fade), defined for t inside [0, duration) --

    def raw_peak(self) -> float:
        return self.depth if self.kind == "amplitude_modulated" else 1.0

    def raw(self, t: np.ndarray, duration: float) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        if self.kind == "constant":
            out = np.ones_like(t)
        elif self.kind == "amplitude_modulated":
            phase = np.sin(2.0 * np.pi * self.rate_hz * t)
            if self.mode == "abs_sin":
                out = self.depth * np.abs(phase)
            else:
                out = self.depth * (0.5 + 0.5 * phase)
        elif self.kind == "smooth_adsr":
            at, dec, sus, rel = self.attack_s, self.decay_s, self.sustain_level, self.release_s
            t_rel = duration - rel
            out = np.where(t < at, t / at, 1.0)
            if dec > 0:
                out = np.where((t >= at) & (t < at + dec), 1.0 + (sus - 1.0) * (t - at) / dec, out)
            out = np.where((t >= at + dec) & (t < t_rel), sus, out)
            if rel > 0:
                out = np.where(t >= t_rel, sus * (duration - t) / rel, out)
        else:  # sharp_attack
            dec, sus, rel = self.decay_s, self.sustain_level, self.release_s
            t_rel = duration - rel
            if dec > 0:
                out = np.where(t < dec, 1.0 + (sus - 1.0) * t / dec, sus)
            else:
                out = np.full_like(t, sus)
            out = np.where((t >= dec) & (t < t_rel), sus, out)
            if rel > 0:
                out = np.where(
                    t >= t_rel, sus * 0.5 * (1.0 + np.cos(np.pi * (t - t_rel) / rel)), out
                )
        return np.where((t >= 0) & (t < duration), out, 0.0)

    def raw_derivative_mag(self, t: np.ndarray, duration: float) -> np.ndarray:
        """|d raw / dt| where defined (a.e.); the sharp attack's jump is NOT
        included here — grid profiles add it as a finite difference."""
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        if self.kind == "amplitude_modulated":
            scale = 2.0 if self.mode == "abs_sin" else 1.0
            out = scale * np.pi * self.rate_hz * self.depth * np.abs(
                np.cos(2.0 * np.pi * self.rate_hz * t)
            )
        elif self.kind == "smooth_adsr":
            at, dec, sus, rel = self.attack_s, self.decay_s, self.sustain_level, self.release_s
            t_rel = duration - rel
            out = np.where(t < at, 1.0 / at, 0.0)
            if dec > 0:
                out = np.where((t >= at) & (t < at + dec), (1.0 - sus) / dec, out)
            if rel > 0:
                out = np.where(t >= t_rel, sus / rel, out)
        elif self.kind == "sharp_attack":
            dec, sus, rel = self.decay_s, self.sustain_level, self.release_s
            t_rel = duration - rel
            if dec > 0:
                out = np.where(t < dec, (1.0 - sus) / dec, 0.0)
            if rel > 0:
                out = np.where(
                    t >= t_rel,
                    sus * np.pi / (2.0 * rel) * np.abs(np.sin(np.pi * (t - t_rel) / rel)),
                    out,
                )
        return np.where((t >= 0) & (t < duration), out, 0.0)

    @property
    def differentiable(self) -> bool:
        """Lipschitz off a finite knot set; False only for the sharp attack."""
        return self.kind != "sharp_attack"

    @property
    def faded(self) -> bool:
        return self.kind in ("constant", "amplitude_modulated")


@dataclass(frozen=True)
class DerivativeBound:
    value: float
    differentiable: bool


@dataclass(frozen=True)
class Tone:
    """A tone-model record: fundamental, harmonic count, envelopes, timing."""

    xi0_hz: float
    n_harmonics: int
    duration_s: float
    fs: float
    envelopes: tuple
    edge_fade_s: float = 0.005

    def __post_init__(self):
        if self.xi0_hz <= 0:
            raise InvalidArgument(f"fundamental must be positive, got {self.xi0_hz}")
        if self.n_harmonics < 1:
            raise InvalidArgument(f"need at least one harmonic, got {self.n_harmonics}")
        if self.fs <= 0 or self.duration_s <= 0:
            raise InvalidArgument("fs and duration_s must be positive")
        top = self.n_harmonics * self.xi0_hz
        if top >= self.fs / 2:
            raise InvalidArgument(
                f"tone exceeds Nyquist: N*xi0 = {top:g} Hz is not below fs/2 = {self.fs / 2:g} Hz"
            )
        envs = self.envelopes
        if isinstance(envs, EnvelopeSpec):
            envs = (envs,) * self.n_harmonics
        else:
            envs = tuple(envs)
            if len(envs) == 1:
                envs = envs * self.n_harmonics
        if len(envs) != self.n_harmonics:
            raise InvalidArgument(
                f"{len(envs)} envelope specs for {self.n_harmonics} harmonics"
            )
        for e in envs:
            if not isinstance(e, EnvelopeSpec):
                raise InvalidArgument("envelopes must be EnvelopeSpec instances")
            seg_time = e.attack_s + e.decay_s + e.release_s
            if e.kind in ("smooth_adsr", "sharp_attack") and seg_time > self.duration_s:
                raise InvalidArgument(
                    f"envelope segments total {seg_time} s but the tone lasts {self.duration_s} s"
                )
        if self.edge_fade_s < 0 or 2 * self.edge_fade_s > self.duration_s:
            raise InvalidArgument("edge fade must be nonnegative and fit the duration twice")
        object.__setattr__(self, "envelopes", envs)

    @property
    def n_samples(self) -> int:
        return int(round(self.fs * self.duration_s))

    def time_grid(self) -> np.ndarray:
        return np.arange(self.n_samples, dtype=np.float64) / self.fs

    def envelope_scale(self, n: int) -> float:
        """Harmonic cap factor: min(1, (1/n) / peak of the raw envelope)."""
        raw_peak = self.envelopes[n - 1].raw_peak()
        return min(1.0, (1.0 / n) / raw_peak)


def _edge_fade(t: np.ndarray, duration: float, fade: float) -> np.ndarray:
    """Raised-cosine fade-in/out over the first/last ``fade`` seconds."""
    if fade <= 0:
        return np.ones_like(t)
    up = np.clip(t / fade, 0.0, 1.0)
    down = np.clip((duration - t) / fade, 0.0, 1.0)
    return (0.5 - 0.5 * np.cos(np.pi * up)) * (0.5 - 0.5 * np.cos(np.pi * down))


def _edge_fade_derivative_mag(t: np.ndarray, duration: float, fade: float) -> np.ndarray:
    if fade <= 0:
        return np.zeros_like(t)
    out = np.zeros_like(t)
    rising = (t >= 0) & (t < fade)
    falling = (t > duration - fade) & (t <= duration)
    out[rising] = np.pi / (2 * fade) * np.abs(np.sin(np.pi * t[rising] / fade))
    out[falling] = np.pi / (2 * fade) * np.abs(
        np.sin(np.pi * (duration - t[falling]) / fade)
    )
    return out


def realized_envelope(tone: Tone, n: int, t: np.ndarray | None = None) -> np.ndarray:
    """A_n evaluated at times ``t`` (seconds; default: the tone's grid).

    Applies the harmonic cap and, for non-vanishing kinds, the edge fade.
    Zero outside [0, duration).
    """
    if not 1 <= n <= tone.n_harmonics:
        raise InvalidArgument(f"harmonic index {n} out of range [1, {tone.n_harmonics}]")
    if t is None:
        t = tone.time_grid()
    t = np.asarray(t, dtype=np.float64)
    spec = tone.envelopes[n - 1]
    vals = spec.raw(t, tone.duration_s) * tone.envelope_scale(n)
    if spec.faded:
        vals = vals * _edge_fade(t, tone.duration_s, tone.edge_fade_s)
    return vals


def envelope_derivative_profile(tone: Tone, n: int, t: np.ndarray | None = None) -> np.ndarray:
    """Pointwise upper bound on |A_n'(t)| (per second) on the given times.

    Product rule over (raw * fade): |raw'| * fade + raw * |fade'|, capped by
    the harmonic scale.  For the sharp attack the initial jump appears as a
    one-sample finite difference (scale * fs) at its onset sample, which is
    what any windowed sup over that region must see.
    """
    if t is None:
        t = tone.time_grid()
    t = np.asarray(t, dtype=np.float64)
    spec = tone.envelopes[n - 1]
    scale = tone.envelope_scale(n)
    dur = tone.duration_s
    prof = spec.raw_derivative_mag(t, dur) * scale
    if spec.faded:
        fade = _edge_fade(t, dur, tone.edge_fade_s)
        dfade = _edge_fade_derivative_mag(t, dur, tone.edge_fade_s)
        prof = spec.raw_derivative_mag(t, dur) * scale * fade + spec.raw(t, dur) * scale * dfade
    if spec.kind == "sharp_attack":
        onset = np.argmin(np.abs(t))  # the grid sample at t = 0
        if abs(t[onset]) < 1.0 / tone.fs:
            prof = prof.copy()
            prof[onset] = max(prof[onset], scale * tone.fs)
    return prof


def envelope_derivative_bound(tone: Tone, n: int) -> DerivativeBound:
    """The envelope's intrinsic derivative constant C_n (per second).

    Analytic per kind, before any edge fade (edge effects are handled
    pointwise where bounds need them):

    - constant: 0
    - smooth_adsr: scale * max segment slope
    - amplitude_modulated: scale * depth * 2 pi rate (abs_sin mode) or
      scale * depth * pi rate (offset_sin mode)
    - sharp_attack: the one-sample finite difference scale * fs, flagged
      nondifferentiable.
    """
    if not 1 <= n <= tone.n_harmonics:
        raise InvalidArgument(f"harmonic index {n} out of range [1, {tone.n_harmonics}]")
    spec = tone.envelopes[n - 1]
    scale = tone.envelope_scale(n)
    if spec.kind == "constant":
        return DerivativeBound(0.0, True)
    if spec.kind == "amplitude_modulated":
        factor = 2.0 if spec.mode == "abs_sin" else 1.0
        return DerivativeBound(scale * spec.depth * factor * np.pi * spec.rate_hz, True)
    if spec.kind == "smooth_adsr":
        slopes = [1.0 / spec.attack_s]
        if spec.decay_s > 0:
            slopes.append((1.0 - spec.sustain_level) / spec.decay_s)
        if spec.release_s > 0:
            slopes.append(spec.sustain_level / spec.release_s)
        return DerivativeBound(scale * max(slopes), True)
    # sharp_attack: the jump dominates every slope at audio rates.
    return DerivativeBound(scale * tone.fs, False)


def synthesize(tone: Tone) -> np.ndarray:
    """Render the tone on its sample grid as a complex vector."""
    t = tone.time_grid()
    out = np.zeros(tone.n_samples, dtype=np.complex128)
    for n in range(1, tone.n_harmonics + 1):
        env = realized_envelope(tone, n, t)
        out += env * np.exp(2j * np.pi * n * tone.xi0_hz * t)
    return out


def pad_to(signal: np.ndarray, length: int) -> np.ndarray:
    """Zero-pad a signal to ``length`` samples (error if it already exceeds it)."""
    signal = np.asarray(signal)
    if signal.shape[0] > length:
        raise InvalidArgument(
            f"signal of length {signal.shape[0]} does not fit target length {length}"
        )
    if signal.shape[0] == length:
        return signal
    return np.concatenate([signal, np.zeros(length - signal.shape[0], dtype=signal.dtype)])


@dataclass(frozen=True)
class Deformation:
    """A deformation request: either a time warp of the envelopes or a
    per-harmonic phase modulation.

    envelope_warp: ``tau`` holds tau(t) in seconds on the tone's sample grid.
    frequency_mod: ``tau_n`` holds one phase track per harmonic (in cycles)
    on the sample grid, admissible for the configured ``eps``.
    """

    kind: str
    tau: np.ndarray | None = None
    tau_n: tuple | None = None
    eps: float | None = None

    def __post_init__(self):
        if self.kind not in ("envelope_warp", "frequency_mod"):
            raise InvalidArgument(
                f"unknown deformation kind {self.kind!r}; "
                "choose envelope_warp or frequency_mod"
            )


def phase_mod_threshold(eps: float) -> float:
    """Max admissible sup |tau_n| (cycles) for a phase modulation of size eps.

    Inverts the pointwise identity |1 - e^{2 pi i x}|^2 = 2 (1 - cos 2 pi x):
    the per-sample deviation stays below eps exactly while
    |tau_n| < arccos(1 - eps^2 / 2) / (2 pi).
    """
    if not 0 < eps <= 2:
        raise InvalidArgument(f"eps must lie in (0, 2], got {eps}")
    return math.acos(1.0 - eps * eps / 2.0) / (2.0 * math.pi)


def phase_diameter(tau_sup: float) -> float:
    """sup over |x| <= tau_sup of |1 - e^{2 pi i x}| (monotone for tau <= 1/2)."""
    capped = min(abs(tau_sup), 0.5)
    return math.sqrt(max(0.0, 2.0 * (1.0 - math.cos(2.0 * math.pi * capped))))


def deform(tone: Tone, deformation: Deformation) -> np.ndarray:
    """Apply a deformation, re-synthesizing analytically.

    envelope_warp re-evaluates each envelope at t + tau(t); frequency_mod
    multiplies each harmonic by exp(2 pi i tau_n(t)).  A zero deformation
    reproduces synthesize(tone) bit for bit.

    Raises:
        InvalidArgument: warp sup beyond WARP_SUP_LIMIT seconds, or phase
            tracks beyond the arccos threshold for the configured eps.
    """
    t = tone.time_grid()
    if deformation.kind == "envelope_warp":
        if deformation.tau is None:
            raise InvalidArgument("envelope_warp needs a tau array (seconds per sample)")
        tau = np.asarray(deformation.tau, dtype=np.float64)
        if tau.shape != t.shape:
            raise InvalidArgument(
                f"tau has shape {tau.shape}, expected {t.shape} (one value per sample)"
            )
        sup = float(np.max(np.abs(tau))) if tau.size else 0.0
        if sup > WARP_SUP_LIMIT:
            raise InvalidArgument(
                f"warp sup {sup:.4g} s exceeds the admissible limit {WARP_SUP_LIMIT} s"
            )
        out = np.zeros(tone.n_samples, dtype=np.complex128)
        for n in range(1, tone.n_harmonics + 1):
            env = realized_envelope(tone, n, t + tau)
            out += env * np.exp(2j * np.pi * n * tone.xi0_hz * t)
        return out

    if deformation.tau_n is None or deformation.eps is None:
        raise InvalidArgument("frequency_mod needs tau_n phase tracks and an eps")
    tracks = [np.asarray(x, dtype=np.float64) for x in deformation.tau_n]
    if len(tracks) != tone.n_harmonics:
        raise InvalidArgument(
            f"{len(tracks)} phase tracks for {tone.n_harmonics} harmonics"
        )
    limit = phase_mod_threshold(deformation.eps)
    out = np.zeros(tone.n_samples, dtype=np.complex128)
    for n, track in enumerate(tracks, start=1):
        if track.shape != t.shape:
            raise InvalidArgument(
                f"phase track {n} has shape {track.shape}, expected {t.shape}"
            )
        sup = float(np.max(np.abs(track))) if track.size else 0.0
        if sup >= limit:
            raise InvalidArgument(
                f"phase track {n} sup {sup:.6g} cycles is not below the admissible "
                f"threshold {limit:.6g} for eps = {deformation.eps}"
            )
        env = realized_envelope(tone, n, t)
        # Keep the carrier phase expression identical to synthesize() so a
        # zero track reproduces it bit for bit; the track enters as a separate
        # exactly-zero summand in that case.
        out += env * np.exp(2j * np.pi * n * tone.xi0_hz * t + 2j * np.pi * track)
    return out
