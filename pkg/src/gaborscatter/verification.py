"""The default verification battery.

`run_verification(config)` evaluates every numerical guarantee the library
makes — frame-bound sandwiches, transform-vs-oracle agreement, the layer
decomposition dominances, deformation stability, contractivity, and the
figure-level properties — and returns one BoundReport per check.  The CLI's
``verify`` subcommand is a thin wrapper around it.

The oracle used here is the direct inner-product sum over explicit frame
atoms, deliberately sharing no code path with the production transform
(which folds into modulation residues and runs FFTs).
"""

import math

import numpy as np

from .bounds import (
    BoundReport,
    contractivity_check,
    envelope_warp_bound,
    layer1_error_profile,
    layer2_grid,
    make_report,
    nearest_harmonic,
    phase_mod_bound,
    smoothed_outputs,
    tail_summand,
    tone_signal,
)
from .gabor import GaborFrame, dgt, frame_bounds, periodization_check
from .figures import figure_reports
from .io import ExperimentConfig, envelope_from_spec, frame_from_spec, stack_from_specs
from .scattering import layer_forward, scatter
from .signal_model import Tone, phase_mod_threshold, realized_envelope
from .windows import make_window, window_dtft


def naive_dgt(signal: np.ndarray, frame: GaborFrame) -> np.ndarray:
    """Direct inner products against explicit atoms; no folding, no FFT."""
    signal = np.asarray(signal, dtype=np.complex128)
    L = frame.signal_length
    t = np.arange(L)
    phases = np.exp(-2j * np.pi * np.outer(np.arange(frame.M), t) / frame.M)
    values = np.empty((frame.M, frame.n_frames), dtype=np.complex128)
    for k in range(frame.n_frames):
        w = frame.window
        embedded = np.zeros(L, dtype=np.complex128)
        idx = (np.arange(w.length) - w.center + frame.a * k) % L
        embedded[idx] = w.samples
        values[:, k] = phases @ (signal * np.conj(embedded))
    return values


def _random_window(rng: np.random.Generator, max_len: int):
    kind = rng.choice(["gaussian", "hann", "rectangular"])
    length = int(rng.integers(4, max_len + 1))
    if kind == "gaussian":
        return make_window(kind, length, float(rng.uniform(length / 8, length / 3)))
    return make_window(kind, length)


def _random_frame(rng: np.random.Generator, max_l: int = 512) -> GaborFrame:
    L = int(rng.choice([128, 256, max_l]))
    a = int(rng.choice([2, 4, 8, 16]))
    M = int(rng.choice([8, 16, 32, 64]))
    window = _random_window(rng, min(L, 3 * M))
    return GaborFrame(window=window, a=a, M=M, signal_length=L)


def _frame_checks(config: ExperimentConfig, rng: np.random.Generator) -> list:
    reports = []
    omega = config.omega()
    n_signals = config.verification["random_signals"]
    for i, layer in enumerate(omega.layers, start=1):
        frame = layer.frame
        lower, upper = frame_bounds(frame)
        worst = -np.inf
        for _ in range(n_signals):
            sig = rng.standard_normal(frame.signal_length) + 1j * rng.standard_normal(
                frame.signal_length
            )
            coeff = dgt(sig, frame).values
            ratio = float(np.sum(np.abs(coeff) ** 2) / np.sum(np.abs(sig) ** 2))
            worst = max(worst, ratio - upper, lower - ratio)
        reports.append(
            make_report(
                f"frame-energy-sandwich-layer{i}",
                measured=worst,
                bound=0.0,
                tol=1e-8 * upper,
                lower=lower,
                upper=upper,
                signals=n_signals,
            )
        )
        # The shipped stack is normalized, so each upper bound must sit in
        # [1 - 1e-6, 1].
        reports.append(
            make_report(
                f"frame-normalized-upper-layer{i}",
                measured=max(upper - 1.0, (1.0 - 1e-6) - upper),
                bound=0.0,
                tol=1e-9,
                upper=upper,
            )
        )
    return reports


def _oracle_checks(config: ExperimentConfig, rng: np.random.Generator) -> list:
    reports = []
    worst = 0.0
    n_cases = config.verification["oracle_cases"]
    for _ in range(n_cases):
        frame = _random_frame(rng)
        sig = rng.standard_normal(frame.signal_length) + 1j * rng.standard_normal(
            frame.signal_length
        )
        fast = dgt(sig, frame).values
        slow = naive_dgt(sig, frame)
        worst = max(worst, float(np.max(np.abs(fast - slow)) / np.max(np.abs(slow))))
    reports.append(
        make_report("transform-oracle-agreement", measured=worst, bound=1e-10, cases=n_cases)
    )

    # Depth-2 scatter against the composed oracle on a small stack.
    worst2 = 0.0
    for _ in range(3):
        stack = stack_from_specs(
            [
                {"window": {"kind": "gaussian", "length": 15, "shape_param": 4.0}, "a": 4, "M": 8},
                {"window": {"kind": "gaussian", "length": 7, "shape_param": 2.0}, "a": 2, "M": 4},
            ],
            64,
        )
        sig = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        nodes = scatter(sig, stack, depth=2)
        u1 = np.abs(naive_dgt(sig, stack.layers[0].frame))
        scale = max(np.max(np.abs(v)) for v in nodes.values())
        for j in range(stack.layers[0].frame.M):
            u2 = np.abs(naive_dgt(u1[j], stack.layers[1].frame))
            err = np.max(np.abs(nodes[(j,)] - u1[j]))
            for h in range(stack.layers[1].frame.M):
                err = max(err, np.max(np.abs(nodes[(j, h)] - u2[h])))
            worst2 = max(worst2, float(err / scale))
    reports.append(make_report("scatter-composed-oracle", measured=worst2, bound=1e-10, cases=3))

    worst3 = 0.0
    for _ in range(20):
        sig = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        worst3 = max(worst3, periodization_check(sig, int(rng.choice([2, 4, 8]))))
    reports.append(
        make_report("subsampling-aliasing-identity", measured=worst3, bound=1e-10, cases=20)
    )
    return reports


def _tone_for_layer1(block: dict, xi0: float, env_spec: dict) -> Tone:
    fs = float(block["fs"])
    n = min(block["max_harmonics"], int(math.floor((fs / 2 - 1) / xi0)))
    return Tone(
        xi0_hz=xi0,
        n_harmonics=n,
        duration_s=float(block["duration_s"]),
        fs=fs,
        envelopes=(envelope_from_spec(env_spec),),
    )


def _layer1_checks(config: ExperimentConfig) -> list:
    reports = []
    block = config.verification["layer1"]
    frame = frame_from_spec(block["frame"], block["signal_length"])
    s = float(block["s"])
    steady = block["steady_window_s"]
    fs = float(block["fs"])
    k_lo = int(math.ceil(steady[0] * fs / frame.a))
    k_hi = int(math.floor(steady[1] * fs / frame.a))
    steady_means = {}

    for env_spec in block["envelopes"]:
        kind = env_spec["kind"]
        for xi0 in block["xi0_list"]:
            tone = _tone_for_layer1(block, float(xi0), env_spec)
            profile = layer1_error_profile(tone, frame, s)
            u1 = layer_forward(tone_signal(tone, frame.signal_length), frame, layer=1).values
            # Main terms for all channels at once (grouped by nearest harmonic).
            frame_times = frame.a * np.arange(frame.n_frames) / tone.fs
            env_cache = {
                n: realized_envelope(tone, n, frame_times)
                for n in range(1, tone.n_harmonics + 1)
            }
            worst = -np.inf
            residual = np.empty_like(u1, dtype=np.float64)
            for j in range(frame.M):
                n0 = nearest_harmonic(tone, frame, j)
                delta = j / frame.M - n0 * tone.xi0_hz / tone.fs
                gain = float(np.abs(window_dtft(frame.window, delta)[0]))
                residual[j] = np.abs(u1[j] - gain * env_cache[n0])
                worst = max(worst, float(np.max(residual[j] - profile)))
            reports.append(
                make_report(
                    f"layer1-dominance-{int(xi0)}hz-{kind}",
                    measured=worst,
                    bound=0.0,
                    tol=1e-9 * float(np.max(profile)),
                    xi0_hz=float(xi0),
                    envelope=kind,
                )
            )
            if kind != "sharp_attack":
                steady_means[float(xi0)] = float(np.mean(residual[:, k_lo : k_hi + 1]))

    xs = sorted(steady_means)
    worst_rise = max(
        (steady_means[b] - steady_means[a] for a, b in zip(xs, xs[1:])), default=-np.inf
    )
    reports.append(
        make_report(
            "layer1-residual-monotonicity",
            measured=worst_rise,
            bound=0.0,
            tol=1e-12 * max(steady_means.values()),
            means={str(int(x)): steady_means[x] for x in xs},
        )
    )

    reports.append(
        make_report("tail-summand-at-48", measured=tail_summand(1.0, 48, 3.0), bound=1e-5)
    )

    spike = config.verification["onset_spike"]
    sp_frame = frame_from_spec(spike["frame"], spike["signal_length"])
    sp_tone = Tone(
        xi0_hz=float(spike["xi0_hz"]),
        n_harmonics=spike["n_harmonics"],
        duration_s=float(spike["duration_s"]),
        fs=float(spike["fs"]),
        envelopes=(envelope_from_spec(spike["envelope"]),),
    )
    sp_profile = layer1_error_profile(sp_tone, sp_frame, float(spike["s"]))
    k_steady = int(round(0.5 * spike["duration_s"] * spike["fs"] / sp_frame.a))
    ratio = float(sp_profile[0] / sp_profile[k_steady])
    reports.append(
        make_report(
            "layer1-onset-bound-spike",
            measured=float(spike["min_ratio"]) - ratio,
            bound=0.0,
            ratio=ratio,
            required_min=float(spike["min_ratio"]),
        )
    )
    return reports


def _layer2_checks(config: ExperimentConfig) -> list:
    reports = []
    block = config.verification["layer2"]
    stack = stack_from_specs(block["layers"], block["signal_length"])
    tone = Tone(
        xi0_hz=float(block["xi0_hz"]),
        n_harmonics=block["n_harmonics"],
        duration_s=float(block["duration_s"]),
        fs=float(block["fs"]),
        envelopes=(envelope_from_spec(block["envelope"]),),
    )
    s = float(block["s"])
    for ch in block["channels"]:
        grid = layer2_grid(tone, stack, int(ch), s)
        worst = float(np.max(grid.residual - grid.bound[:, None]))
        reports.append(
            make_report(
                f"layer2-dominance-ch{ch}",
                measured=worst,
                bound=0.0,
                tol=1e-9 * float(np.max(grid.bound)),
                channel1=int(ch),
                harmonic=grid.harmonic,
                aliasing_eps=grid.eps,
            )
        )
    sm = smoothed_outputs(tone, stack, s=s)
    reports.extend(sm.reports)
    return reports


def _deformation_checks(config: ExperimentConfig, rng: np.random.Generator) -> list:
    reports = []
    block = config.verification["deformation"]
    trials = config.verification["deformation_trials"]
    fs = float(block["fs"])
    duration = float(block["duration_s"])

    def random_tone() -> Tone:
        xi0 = float(rng.uniform(*block["xi0_range"]))
        n_max = min(block["max_harmonics"], int((fs / 2 - 1) / xi0))
        n = int(rng.integers(1, n_max + 1))
        kind = rng.choice(["constant", "smooth_adsr", "amplitude_modulated"])
        if kind == "constant":
            env = envelope_from_spec({"kind": "constant"})
        elif kind == "smooth_adsr":
            env = envelope_from_spec(
                {
                    "kind": "smooth_adsr",
                    "attack_s": float(rng.uniform(0.01, 0.05)),
                    "decay_s": float(rng.uniform(0.01, 0.05)),
                    "sustain_level": float(rng.uniform(0.3, 0.9)),
                    "release_s": float(rng.uniform(0.01, 0.05)),
                }
            )
        else:
            env = envelope_from_spec(
                {
                    "kind": "amplitude_modulated",
                    "rate_hz": float(rng.uniform(4.0, 24.0)),
                    "depth": float(rng.uniform(0.3, 1.0)),
                    "mode": "offset_sin",
                }
            )
        return Tone(xi0_hz=xi0, n_harmonics=n, duration_s=duration, fs=fs, envelopes=(env,))

    t = np.arange(int(round(fs * duration))) / fs
    worst_warp = -np.inf
    for _ in range(trials):
        tone = random_tone()
        amp = float(rng.uniform(*block["warp_sup_range"]))
        rate = float(rng.uniform(0.5, 4.0))
        phase = float(rng.uniform(0, 2 * np.pi))
        tau = amp * np.sin(2 * np.pi * rate * t + phase)
        rep = envelope_warp_bound(tone, tau)
        worst_warp = max(worst_warp, rep.measured - rep.bound)
    reports.append(
        make_report(
            "warp-stability-trials", measured=worst_warp, bound=0.0, tol=1e-9, trials=trials
        )
    )

    worst_mod = -np.inf
    for _ in range(trials):
        tone = random_tone()
        eps = float(rng.uniform(*block["eps_range"]))
        limit = phase_mod_threshold(eps)
        tracks = []
        for _ in range(tone.n_harmonics):
            amp = float(rng.uniform(0.1, 0.95)) * limit
            rate = float(rng.uniform(1.0, 8.0))
            phase = float(rng.uniform(0, 2 * np.pi))
            tracks.append(amp * np.sin(2 * np.pi * rate * t + phase))
        rep = phase_mod_bound(tone, tracks, eps)
        worst_mod = max(worst_mod, rep.measured - rep.bound)
    reports.append(
        make_report(
            "phase-mod-stability-trials", measured=worst_mod, bound=0.0, tol=1e-9, trials=trials
        )
    )

    eps_grid = np.concatenate([[1e-6, 1e-3], np.linspace(0.01, 1.999, 40)])
    worst_inv = max(
        abs(2.0 * (1.0 - math.cos(2 * math.pi * phase_mod_threshold(e))) - e * e)
        for e in eps_grid
    )
    reports.append(
        make_report("phase-threshold-inversion", measured=worst_inv, bound=1e-12)
    )

    taus = rng.uniform(-1.0, 1.0, size=200)
    ident = np.abs(1.0 - np.exp(2j * np.pi * taus)) ** 2 - 2.0 * (1.0 - np.cos(2 * np.pi * taus))
    reports.append(
        make_report("phase-identity-pointwise", measured=float(np.max(np.abs(ident))), bound=1e-12)
    )
    return reports


def _contractivity_checks(config: ExperimentConfig, rng: np.random.Generator) -> list:
    omega = config.omega()
    L = config.signal_length
    pairs = config.verification["contractivity_pairs"]
    worst_pair = -np.inf
    for _ in range(pairs):
        f = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        h = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        rep = contractivity_check(f, h, omega, depth=config.depth)
        worst_pair = max(worst_pair, rep.measured - rep.bound)
    reports = [
        make_report(
            "contractivity-pairs", measured=worst_pair, bound=0.0, tol=1e-9, pairs=pairs
        )
    ]
    worst_norm = -np.inf
    zero = np.zeros(L)
    for _ in range(50):
        f = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        rep = contractivity_check(f, zero, omega, depth=config.depth)
        worst_norm = max(worst_norm, rep.measured - rep.bound)
    reports.append(
        make_report(
            "feature-norm-boundedness", measured=worst_norm, bound=0.0, tol=1e-9, signals=50
        )
    )
    return reports


def run_verification(config: ExperimentConfig) -> list:
    """Run the full battery; returns one BoundReport per check."""
    rng = np.random.default_rng(config.seed)
    reports: list[BoundReport] = []
    reports.extend(_frame_checks(config, rng))
    reports.extend(_oracle_checks(config, rng))
    reports.extend(_layer1_checks(config))
    reports.extend(_layer2_checks(config))
    reports.extend(_deformation_checks(config, rng))
    reports.extend(_contractivity_checks(config, rng))
    reports.extend(figure_reports(config))
    return reports
