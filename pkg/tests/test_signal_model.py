import numpy as np
import pytest

from gaborscatter.errors import InvalidArgument
from gaborscatter.gabor import GaborFrame, dgt
from gaborscatter.signal_model import (
    WARP_SUP_LIMIT,
    Deformation,
    EnvelopeSpec,
    Tone,
    deform,
    envelope_derivative_bound,
    pad_to,
    phase_diameter,
    phase_mod_threshold,
    realized_envelope,
    synthesize,
)
from gaborscatter.windows import make_window


def smooth_spec():
    return EnvelopeSpec(kind="smooth_adsr", attack_s=0.01, decay_s=0.1,
                        sustain_level=0.9, release_s=0.1)


def am_spec(mode="abs_sin"):
    return EnvelopeSpec(kind="amplitude_modulated", rate_hz=20.0, depth=1.0, mode=mode)


ALL_SPECS = [
    EnvelopeSpec(kind="constant"),
    smooth_spec(),
    EnvelopeSpec(kind="sharp_attack", decay_s=0.08, sustain_level=0.5, release_s=0.1),
    am_spec(),
]


@pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.kind)
def test_harmonic_cap(spec):
    tone = Tone(xi0_hz=100.0, n_harmonics=5, duration_s=0.5, fs=8000.0, envelopes=spec)
    for n in range(1, 6):
        env = realized_envelope(tone, n)
        assert np.max(np.abs(env)) <= 1.0 / n + 1e-12


def test_superposition_against_trig_oracle():
    tone = Tone(xi0_hz=200.0, n_harmonics=4, duration_s=0.25, fs=8000.0,
                envelopes=[EnvelopeSpec(kind="constant"), smooth_spec(),
                           am_spec(), am_spec("offset_sin")])
    t = tone.time_grid()
    ref = np.zeros(tone.n_samples, dtype=np.complex128)
    for n in range(1, 5):
        env = realized_envelope(tone, n, t)
        arg = 2.0 * np.pi * n * tone.xi0_hz * t
        ref += env * (np.cos(arg) + 1j * np.sin(arg))
    got = synthesize(tone)
    assert np.max(np.abs(got - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_constant_derivative_zero():
    tone = Tone(xi0_hz=100.0, n_harmonics=3, duration_s=0.5, fs=8000.0,
                envelopes=EnvelopeSpec(kind="constant"))
    for n in range(1, 4):
        b = envelope_derivative_bound(tone, n)
        assert b.value == 0.0
        assert b.differentiable


@pytest.mark.parametrize("mode,factor", [("abs_sin", 2.0), ("offset_sin", 1.0)])
def test_am_derivative_closed_form(mode, factor):
    tone = Tone(xi0_hz=100.0, n_harmonics=3, duration_s=0.5, fs=8000.0,
                envelopes=am_spec(mode), edge_fade_s=0.0)
    for n in range(1, 4):
        b = envelope_derivative_bound(tone, n)
        assert b.value == pytest.approx((1.0 / n) * factor * np.pi * 20.0, rel=1e-12)
    # Dense finite differences over the interior reach the bound.
    t = np.linspace(1e-4, tone.duration_s - 1e-3, 200_001)
    env = realized_envelope(tone, 1, t)
    fd = np.max(np.abs(np.diff(env))) / (t[1] - t[0])
    bound = envelope_derivative_bound(tone, 1).value
    assert fd <= bound * (1 + 1e-6)
    assert fd >= bound * 0.99


def test_adsr_attack_slope_vs_finite_differences():
    tone = Tone(xi0_hz=100.0, n_harmonics=2, duration_s=0.5, fs=8000.0,
                envelopes=smooth_spec())
    for n in (1, 2):
        b = envelope_derivative_bound(tone, n)
        assert b.value == pytest.approx((1.0 / n) / 0.01, rel=1e-12)
    t = np.linspace(1e-5, tone.duration_s - 1e-4, 400_001)
    env = realized_envelope(tone, 1, t)
    fd = np.max(np.abs(np.diff(env))) / (t[1] - t[0])
    assert abs(fd - 100.0) <= 1.0  # within 1%


def test_sharp_attack_flagged_nondifferentiable():
    spec = EnvelopeSpec(kind="sharp_attack", decay_s=0.08, sustain_level=0.5,
                        release_s=0.1)
    tone = Tone(xi0_hz=100.0, n_harmonics=2, duration_s=0.5, fs=8000.0, envelopes=spec)
    b = envelope_derivative_bound(tone, 1)
    assert not b.differentiable
    assert b.value == pytest.approx(tone.fs, rel=1e-12)  # scale 1 at n = 1


def test_derivative_bounds_nonincreasing_in_harmonic():
    tone = Tone(xi0_hz=100.0, n_harmonics=6, duration_s=0.5, fs=8000.0,
                envelopes=am_spec())
    values = [envelope_derivative_bound(tone, n).value for n in range(1, 7)]
    assert all(values[i + 1] <= values[i] + 1e-15 for i in range(5))


def test_single_harmonic_concentrates_at_expected_channel():
    fs = 4096.0
    tone = Tone(xi0_hz=fs / 8.0, n_harmonics=1, duration_s=0.0625, fs=fs,
                envelopes=EnvelopeSpec(kind="constant"), edge_fade_s=0.005)
    sig = synthesize(tone)
    frame = GaborFrame(window=make_window("gaussian", 65, 16.0), a=4, M=64,
                       signal_length=sig.shape[0])
    grid = dgt(sig, frame)
    row_energy = np.sum(np.abs(grid.values) ** 2, axis=1)
    assert int(np.argmax(row_energy)) == 8  # M/8 for xi0 = fs/8
    assert row_energy[6:11].sum() >= 0.97 * row_energy.sum()
    far = row_energy[np.abs(np.arange(64) - 8) > 3]
    assert far.max() <= 0.01 * row_energy[8]


def test_desk_scale_tone_synthesizes():
    tone = Tone(xi0_hz=800.0, n_harmonics=15, duration_s=2.0, fs=44100.0,
                envelopes=smooth_spec())
    sig = synthesize(tone)
    assert sig.shape == (88200,)
    assert np.all(np.isfinite(sig))
    assert np.max(np.abs(sig)) > 0.5


def test_nyquist_rejection_message():
    with pytest.raises(InvalidArgument, match=r"N\*xi0 = 24000 Hz is not below fs/2 = 22050 Hz"):
        Tone(xi0_hz=800.0, n_harmonics=30, duration_s=1.0, fs=44100.0,
             envelopes=EnvelopeSpec(kind="constant"))


def test_segments_must_fit_duration():
    spec = EnvelopeSpec(kind="smooth_adsr", attack_s=0.25, decay_s=0.125,
                        sustain_level=0.5, release_s=0.125)
    with pytest.raises(InvalidArgument, match=r"0\.5 s but the tone lasts 0\.25 s"):
        Tone(xi0_hz=100.0, n_harmonics=1, duration_s=0.25, fs=8000.0, envelopes=spec)


def test_envelope_count_mismatch():
    with pytest.raises(InvalidArgument, match="2 envelope specs for 3 harmonics"):
        Tone(xi0_hz=100.0, n_harmonics=3, duration_s=0.5, fs=8000.0,
             envelopes=[smooth_spec(), smooth_spec()])


def test_zero_deformations_are_bit_identical():
    tone = Tone(xi0_hz=200.0, n_harmonics=3, duration_s=0.25, fs=8000.0,
                envelopes=smooth_spec())
    base = synthesize(tone)
    zeros = np.zeros(tone.n_samples)
    warped = deform(tone, Deformation(kind="envelope_warp", tau=zeros))
    assert np.array_equal(base, warped)
    modded = deform(tone, Deformation(kind="frequency_mod",
                                      tau_n=(zeros, zeros, zeros), eps=0.5))
    assert np.array_equal(base, modded)


def test_constant_phase_offset_pointwise_identity():
    # One harmonic, tau_1 == c: |f - deformed| = |A_1| * sqrt(2 (1 - cos 2 pi c))
    # at every sample.
    tone = Tone(xi0_hz=300.0, n_harmonics=1, duration_s=0.25, fs=8000.0,
                envelopes=am_spec())
    c = 0.01
    base = synthesize(tone)
    modded = deform(tone, Deformation(kind="frequency_mod",
                                      tau_n=(np.full(tone.n_samples, c),), eps=0.5))
    env = np.abs(realized_envelope(tone, 1))
    expected = env * np.sqrt(2.0 * (1.0 - np.cos(2.0 * np.pi * c)))
    assert np.max(np.abs(np.abs(base - modded) - expected)) <= 1e-12


def test_warp_sup_rejection():
    tone = Tone(xi0_hz=200.0, n_harmonics=2, duration_s=0.25, fs=8000.0,
                envelopes=smooth_spec())
    t = tone.time_grid()
    tau = 2.0 * WARP_SUP_LIMIT * np.sin(2.0 * np.pi * t)
    with pytest.raises(InvalidArgument, match="exceeds the admissible limit"):
        deform(tone, Deformation(kind="envelope_warp", tau=tau))


def test_phase_track_at_threshold_rejected():
    tone = Tone(xi0_hz=200.0, n_harmonics=1, duration_s=0.25, fs=8000.0,
                envelopes=EnvelopeSpec(kind="constant"))
    eps = 0.3
    limit = phase_mod_threshold(eps)
    track = np.full(tone.n_samples, limit)  # sup == limit: not strictly below
    with pytest.raises(InvalidArgument, match="threshold"):
        deform(tone, Deformation(kind="frequency_mod", tau_n=(track,), eps=eps))


def test_phase_mod_threshold_domain_and_endpoints():
    with pytest.raises(InvalidArgument):
        phase_mod_threshold(0.0)
    with pytest.raises(InvalidArgument):
        phase_mod_threshold(2.0000001)
    assert phase_mod_threshold(2.0) == pytest.approx(0.5, rel=1e-15)
    for eps in (0.01, 0.5, 1.0, 1.999):
        assert phase_diameter(phase_mod_threshold(eps)) == pytest.approx(eps, rel=1e-9)
    # Near zero the 1 - cos term loses half the mantissa; the round trip is
    # still good to square-root precision.
    assert phase_diameter(phase_mod_threshold(1e-6)) == pytest.approx(1e-6, rel=1e-4)


def test_edge_fade_shapes_constant_envelope():
    tone = Tone(xi0_hz=200.0, n_harmonics=1, duration_s=0.1, fs=8000.0,
                envelopes=EnvelopeSpec(kind="constant"), edge_fade_s=0.005)
    env = realized_envelope(tone, 1, np.array([0.0, 0.0025, 0.05]))
    assert env[0] == 0.0
    assert env[1] == pytest.approx(0.5, rel=1e-12)
    assert env[2] == pytest.approx(1.0, rel=1e-12)


def test_deformation_validation():
    tone = Tone(xi0_hz=200.0, n_harmonics=2, duration_s=0.1, fs=8000.0,
                envelopes=EnvelopeSpec(kind="constant"))
    with pytest.raises(InvalidArgument, match="unknown deformation kind"):
        Deformation(kind="nonsense")
    with pytest.raises(InvalidArgument, match="needs a tau array"):
        deform(tone, Deformation(kind="envelope_warp"))
    with pytest.raises(InvalidArgument, match="one value per sample"):
        deform(tone, Deformation(kind="envelope_warp", tau=np.zeros(7)))
    with pytest.raises(InvalidArgument, match="phase tracks"):
        deform(tone, Deformation(kind="frequency_mod"))
    with pytest.raises(InvalidArgument, match="1 phase tracks for 2 harmonics"):
        deform(tone, Deformation(kind="frequency_mod",
                                 tau_n=(np.zeros(tone.n_samples),), eps=0.5))


def test_envelope_spec_validation():
    with pytest.raises(InvalidArgument, match="unknown envelope kind"):
        EnvelopeSpec(kind="triangle")
    with pytest.raises(InvalidArgument, match="attack_s > 0"):
        EnvelopeSpec(kind="smooth_adsr", attack_s=0.0)
    with pytest.raises(InvalidArgument, match="rate_hz > 0"):
        EnvelopeSpec(kind="amplitude_modulated", rate_hz=0.0)
    with pytest.raises(InvalidArgument, match="depth"):
        EnvelopeSpec(kind="amplitude_modulated", rate_hz=5.0, depth=1.5)
    with pytest.raises(InvalidArgument, match="unknown AM mode"):
        EnvelopeSpec(kind="amplitude_modulated", rate_hz=5.0, mode="square")
    with pytest.raises(InvalidArgument, match="decay_s > 0"):
        EnvelopeSpec(kind="sharp_attack", decay_s=0.0, sustain_level=0.5)


def test_pad_to():
    sig = np.arange(5, dtype=np.complex128)
    padded = pad_to(sig, 8)
    assert padded.shape == (8,)
    assert np.array_equal(padded[:5], sig)
    assert np.all(padded[5:] == 0)
    assert pad_to(sig, 5) is sig
    with pytest.raises(InvalidArgument, match="does not fit"):
        pad_to(sig, 4)
