"""Reference experiments: figure grids and their quantitative checks.

Three experiments, configured by the ``figures`` block of the experiment
config:

1. Envelope pair (sharp attack vs amplitude-modulated tone, equal pitch and
   matched post-onset mean level): first-layer grid, smoothed first-layer
   features, and the second-layer grid at the fundamental's channel.  The
   smoothed features of the two tones agree after onset exclusion while the
   raw signals differ strongly; the AM tone's second layer peaks at the
   modulation-rate channel.
2. Pitch pair (two smooth tones at different fundamentals): first-layer
   grids peak at each tone's harmonic channels.
3. Second-layer slices of the concatenated pitch pair at three fixed
   first-layer channels — each fundamental and the shared harmonic — showing
   pitch selectivity and the shared line lighting up for both tones.

Two different second-layer frames are used deliberately: a long window for
the AM-rate analysis (frequency resolution) and a short window for feature
smoothing and slices (time localization); one window cannot serve both the
modulation-margin and the onset-bleed requirements.

All thresholds live in the config, not in code.  `figure_reports` turns the
measured metrics into BoundReports; greater-than requirements are encoded
in shortfall form (measured = threshold - actual, bound 0), so "margin"
always means excess over the requirement.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bounds import BoundReport, make_report
from .gabor import GaborFrame
from .io import ExperimentConfig, frame_from_spec, write_grid_csv, write_pgm, write_spectrogram, spectrogram_pixels
from .scattering import layer_forward
from .signal_model import Tone, pad_to, synthesize


def smoothed_feature_matrix(u1_values: np.ndarray, frame2: GaborFrame, channel: int = 0) -> np.ndarray:
    """All first-layer rows convolved with frame2's output atom, subsampled.

    Matches the per-path smoothing used by feature extraction, vectorized
    over channels: |(row * phi)| at hops of frame2.a.
    """
    phi = frame2.atom(channel, 0)
    spec = np.fft.fft(phi)
    smoothed = np.fft.ifft(np.fft.fft(u1_values, axis=1) * spec[None, :], axis=1)
    return np.abs(smoothed)[:, :: frame2.a]


def _col_range(t0: float, t1: float, col_dt: float, n_cols: int):
    lo = int(math.ceil(t0 / col_dt - 1e-9))
    hi = int(math.floor(t1 / col_dt + 1e-9))
    lo = max(lo, 0)
    hi = min(hi, n_cols - 1)
    if hi < lo:
        raise ValueError(f"empty column window [{t0}, {t1}] s at {col_dt} s per column")
    return lo, hi


def fundamental_channel(xi0_hz: float, frame: GaborFrame, fs: float, n: int = 1) -> int:
    return int(round(n * xi0_hz * frame.M / fs))


@dataclass(frozen=True)
class EnvelopeExperiment:
    """Grids and metrics of the envelope-pair experiment."""

    u1_pair: np.ndarray  # first-layer grid of the concatenated pair
    features_pair: np.ndarray  # smoothed features of the pair
    u2_pair: np.ndarray  # second-layer grid at the fundamental channel
    metrics: dict


def run_envelope_experiment(config: ExperimentConfig) -> EnvelopeExperiment:
    fig = config.figures
    fs = float(fig["fs"])
    tone_a = config.tone(fig["envelope_pair"][0])
    tone_b = config.tone(fig["envelope_pair"][1])
    ls, lp = fig["single_length"], fig["pair_length"]
    a1 = fig["layer1"]["a"]

    sig_a = pad_to(synthesize(tone_a), ls)
    sig_b = pad_to(synthesize(tone_b), ls)
    raw_rel = float(np.linalg.norm(sig_a - sig_b) / np.linalg.norm(sig_a))

    frame1 = frame_from_spec(fig["layer1"], ls)
    u1_a = layer_forward(sig_a, frame1, layer=1).values
    u1_b = layer_forward(sig_b, frame1, layer=1).values

    smooth_frame = frame_from_spec(fig["layer2_features"], ls // a1)
    feats_a = smoothed_feature_matrix(u1_a, smooth_frame)
    feats_b = smoothed_feature_matrix(u1_b, smooth_frame)
    col_dt = a1 * smooth_frame.a / fs
    lo, hi = _col_range(fig["keep_window_s"][0], fig["keep_window_s"][1], col_dt, feats_a.shape[1])
    block_a = feats_a[:, lo : hi + 1]
    block_b = feats_b[:, lo : hi + 1]
    invariance_rel = float(np.linalg.norm(block_a - block_b) / np.linalg.norm(block_a))

    # AM-rate detection on the modulated tone's second layer.
    am_frame = frame_from_spec(fig["layer2_am"], ls // a1)
    ch0 = fundamental_channel(tone_b.xi0_hz, frame1, fs)
    u2_b = layer_forward(u1_b[ch0], am_frame, layer=2).values
    am_dt = a1 * am_frame.a / fs
    alo, ahi = _col_range(fig["am_window_s"][0], fig["am_window_s"][1], am_dt, u2_b.shape[1])
    energy = np.sum(u2_b[:, alo : ahi + 1] ** 2, axis=1)
    scan = np.arange(1, am_frame.M // 2)
    peak = int(scan[np.argmax(energy[scan])])
    expected = int(round(fig["am_rate_hz"] * a1 * am_frame.M / fs))
    neighbors = max(energy[peak - 1], energy[peak + 1])
    margin_db = float(10.0 * np.log10(energy[peak] / neighbors)) if neighbors > 0 else np.inf

    # Figure panels: the concatenated pair.
    sig_pair = pad_to(np.concatenate([synthesize(tone_a), synthesize(tone_b)]), lp)
    frame1p = frame_from_spec(fig["layer1"], lp)
    u1_pair = layer_forward(sig_pair, frame1p, layer=1).values
    smooth_p = frame_from_spec(fig["layer2_features"], lp // a1)
    features_pair = smoothed_feature_matrix(u1_pair, smooth_p)
    am_p = frame_from_spec(fig["layer2_am"], lp // a1)
    u2_pair = layer_forward(u1_pair[ch0], am_p, layer=2).values

    metrics = {
        "raw_rel_distance": raw_rel,
        "smoothed_rel_distance": invariance_rel,
        "keep_columns": [lo, hi],
        "am_channel1": ch0,
        "am_peak_channel": peak,
        "am_expected_channel": expected,
        "am_neighbor_margin_db": margin_db,
        "am_columns": [alo, ahi],
    }
    return EnvelopeExperiment(
        u1_pair=u1_pair, features_pair=features_pair, u2_pair=u2_pair, metrics=metrics
    )


def harmonic_argmax_mismatches(tone: Tone, u1: np.ndarray, frame: GaborFrame) -> dict:
    """Check per-harmonic: within each half-spacing band, the row-energy
    argmax channel must equal the nearest-bin harmonic channel."""
    fs = tone.fs
    spacing_bins = tone.xi0_hz * frame.M / fs
    row_energy = np.sum(u1**2, axis=1)
    expected, found = [], []
    for n in range(1, tone.n_harmonics + 1):
        center = n * spacing_bins
        lo = max(0, int(math.ceil(center - spacing_bins / 2)))
        hi = min(frame.M // 2 - 1, int(math.floor(center + spacing_bins / 2)))
        band = np.arange(lo, hi + 1)
        expected.append(int(round(center)))
        found.append(int(band[np.argmax(row_energy[band])]))
    mismatches = sum(e != f for e, f in zip(expected, found))
    return {"expected": expected, "found": found, "mismatches": mismatches}


@dataclass(frozen=True)
class PitchExperiment:
    """Grids and metrics of the pitch pair + slice experiments."""

    u1_pair: np.ndarray
    features_pair: np.ndarray
    slices: dict  # channel -> second-layer grid of the pair
    metrics: dict


def run_pitch_experiment(config: ExperimentConfig) -> PitchExperiment:
    fig = config.figures
    fs = float(fig["fs"])
    tone_1 = config.tone(fig["pitch_pair"][0])
    tone_2 = config.tone(fig["pitch_pair"][1])
    ls, lp = fig["single_length"], fig["pair_length"]
    a1 = fig["layer1"]["a"]

    frame1 = frame_from_spec(fig["layer1"], ls)
    u1_1 = layer_forward(pad_to(synthesize(tone_1), ls), frame1, layer=1).values
    u1_2 = layer_forward(pad_to(synthesize(tone_2), ls), frame1, layer=1).values
    argmax_1 = harmonic_argmax_mismatches(tone_1, u1_1, frame1)
    argmax_2 = harmonic_argmax_mismatches(tone_2, u1_2, frame1)

    sig_pair = pad_to(np.concatenate([synthesize(tone_1), synthesize(tone_2)]), lp)
    frame1p = frame_from_spec(fig["layer1"], lp)
    u1_pair = layer_forward(sig_pair, frame1p, layer=1).values
    smooth_p = frame_from_spec(fig["layer2_features"], lp // a1)
    features_pair = smoothed_feature_matrix(u1_pair, smooth_p)

    ch_1 = fundamental_channel(tone_1.xi0_hz, frame1p, fs)
    ch_2 = fundamental_channel(tone_2.xi0_hz, frame1p, fs)
    ch_shared = int(round(fig["shared_harmonic_hz"] * frame1p.M / fs))
    slice_frame = frame_from_spec(fig["layer2_features"], lp // a1)
    slices = {}
    for ch in (ch_1, ch_2, ch_shared):
        slices[ch] = layer_forward(u1_pair[ch], slice_frame, layer=2).values

    col_dt = a1 * slice_frame.a / fs
    n_cols = next(iter(slices.values())).shape[1]
    ex = float(fig["slice_exclude_s"])
    d1 = tone_1.duration_s
    lo1, hi1 = _col_range(ex, d1 - ex, col_dt, n_cols)
    lo2, hi2 = _col_range(d1 + ex, d1 + tone_2.duration_s - ex, col_dt, n_cols)

    def tone_energies(grid):
        e1 = float(np.sum(grid[:, lo1 : hi1 + 1] ** 2))
        e2 = float(np.sum(grid[:, lo2 : hi2 + 1] ** 2))
        return e1, e2

    e1_at_1, e2_at_1 = tone_energies(slices[ch_1])
    e1_at_2, e2_at_2 = tone_energies(slices[ch_2])
    e1_sh, e2_sh = tone_energies(slices[ch_shared])
    shared_max = max(e1_sh, e2_sh)

    metrics = {
        "argmax_tone1": argmax_1,
        "argmax_tone2": argmax_2,
        "slice_channels": [ch_1, ch_2, ch_shared],
        "tone_columns": [[lo1, hi1], [lo2, hi2]],
        "cross_energy_at_tone1_channel": e2_at_1 / e1_at_1 if e1_at_1 > 0 else np.inf,
        "cross_energy_at_tone2_channel": e1_at_2 / e2_at_2 if e2_at_2 > 0 else np.inf,
        "shared_presence_tone1": e1_sh / shared_max if shared_max > 0 else 0.0,
        "shared_presence_tone2": e2_sh / shared_max if shared_max > 0 else 0.0,
    }
    return PitchExperiment(
        u1_pair=u1_pair, features_pair=features_pair, slices=slices, metrics=metrics
    )


def figure_reports(config: ExperimentConfig, env=None, pitch=None) -> list:
    """BoundReports for every figure-level acceptance property."""
    fig = config.figures
    if env is None:
        env = run_envelope_experiment(config)
    if pitch is None:
        pitch = run_pitch_experiment(config)
    em, pm = env.metrics, pitch.metrics
    reports: list[BoundReport] = []
    reports.append(
        make_report(
            "figure-harmonic-argmax-tone1",
            measured=pm["argmax_tone1"]["mismatches"],
            bound=0,
            expected=pm["argmax_tone1"]["expected"],
            found=pm["argmax_tone1"]["found"],
        )
    )
    reports.append(
        make_report(
            "figure-harmonic-argmax-tone2",
            measured=pm["argmax_tone2"]["mismatches"],
            bound=0,
            expected=pm["argmax_tone2"]["expected"],
            found=pm["argmax_tone2"]["found"],
        )
    )
    reports.append(
        make_report(
            "figure-envelope-invariance",
            measured=em["smoothed_rel_distance"],
            bound=float(fig["invariance_max_rel"]),
            keep_columns=em["keep_columns"],
        )
    )
    reports.append(
        make_report(
            "figure-envelope-raw-distance",
            measured=float(fig["raw_min_rel"]) - em["raw_rel_distance"],
            bound=0.0,
            actual=em["raw_rel_distance"],
            required_min=float(fig["raw_min_rel"]),
        )
    )
    reports.append(
        make_report(
            "figure-am-peak-channel",
            measured=abs(em["am_peak_channel"] - em["am_expected_channel"]),
            bound=0,
            peak=em["am_peak_channel"],
            expected=em["am_expected_channel"],
        )
    )
    reports.append(
        make_report(
            "figure-am-neighbor-margin",
            measured=float(fig["am_margin_db"]) - em["am_neighbor_margin_db"],
            bound=0.0,
            actual_db=em["am_neighbor_margin_db"],
            required_min_db=float(fig["am_margin_db"]),
        )
    )
    reports.append(
        make_report(
            "figure-pitch-cross-tone1",
            measured=pm["cross_energy_at_tone1_channel"],
            bound=float(fig["cross_energy_max_rel"]),
        )
    )
    reports.append(
        make_report(
            "figure-pitch-cross-tone2",
            measured=pm["cross_energy_at_tone2_channel"],
            bound=float(fig["cross_energy_max_rel"]),
        )
    )
    shared_min = min(pm["shared_presence_tone1"], pm["shared_presence_tone2"])
    reports.append(
        make_report(
            "figure-shared-harmonic-presence",
            measured=float(fig["shared_min_rel"]) - shared_min,
            bound=0.0,
            tone1_presence=pm["shared_presence_tone1"],
            tone2_presence=pm["shared_presence_tone2"],
            required_min=float(fig["shared_min_rel"]),
        )
    )
    return reports


def write_figures(config: ExperimentConfig, out_dir) -> dict:
    """Run both experiments and emit the six figure images + metrics.json.

    Returns the metrics mapping (also written to disk).  Slice panels are
    stacked into one image, separated by black rows, ordered top-to-bottom
    as listed in metrics["slice_channels"].
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    env = run_envelope_experiment(config)
    pitch = run_pitch_experiment(config)

    write_spectrogram(env.u1_pair, out / "fig1_gabor.pgm")
    write_spectrogram(env.features_pair, out / "fig1_layer1.pgm")
    write_spectrogram(env.u2_pair, out / "fig1_layer2.pgm")
    write_spectrogram(pitch.u1_pair, out / "fig2_gabor.pgm")
    write_spectrogram(pitch.features_pair, out / "fig2_layer1.pgm")

    panels = [pitch.slices[ch] for ch in pitch.metrics["slice_channels"]]
    sep_pix = np.zeros((2, panels[0].shape[1]), dtype=np.uint8)
    pix_rows = []
    raw_rows = []
    sep_raw = np.zeros((2, panels[0].shape[1]))
    for i, panel in enumerate(panels):
        if i:
            pix_rows.append(sep_pix)
            raw_rows.append(sep_raw)
        pix_rows.append(spectrogram_pixels(panel, scale="db"))
        raw_rows.append(panel)
    write_pgm(np.vstack(pix_rows), out / "fig3_layer2_slices.pgm")
    write_grid_csv(np.vstack(raw_rows), out / "fig3_layer2_slices.csv")

    reports = figure_reports(config, env, pitch)
    metrics = {
        "envelope_experiment": env.metrics,
        "pitch_experiment": pitch.metrics,
        "checks": [
            {"name": r.name, "measured": r.measured, "bound": r.bound, "passed": r.passed}
            for r in reports
        ],
    }
    with open(out / "metrics.json", "w") as fh:
        json.dump(metrics, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return metrics
