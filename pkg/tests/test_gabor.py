import numpy as np
import pytest

from gaborscatter.errors import ConvergenceError, InvalidArgument, NotAFrameError
from gaborscatter.gabor import CoefficientGrid, GaborFrame, dgt, frame_bounds, periodization_check
from gaborscatter.windows import make_window

from oracles import dgt_oracle, painless_diagonal_oracle


def rel_err(got, ref):
    return float(np.max(np.abs(got - ref)) / max(np.max(np.abs(ref)), 1e-300))


def test_zero_signal_zero_grid():
    frame = GaborFrame(window=make_window("hann", 16), a=4, M=8, signal_length=64)
    grid = dgt(np.zeros(64, dtype=complex), frame)
    assert np.all(grid.values == 0)
    assert grid.shape == (8, 16)


def test_single_channel_exponential_full_window():
    L, M, j0 = 64, 8, 3
    t = np.arange(L)
    sig = np.exp(2j * np.pi * j0 * t / M)
    frame = GaborFrame(window=make_window("rectangular", L), a=L, M=M, signal_length=L)
    vals = dgt(sig, frame).values
    assert vals.shape == (M, 1)
    assert abs(vals[j0, 0]) == pytest.approx(L, rel=1e-12)
    others = np.abs(np.delete(vals[:, 0], j0))
    assert np.max(others) <= 1e-9 * L


@pytest.mark.parametrize(
    "kind,W,shape,a,M,L",
    [
        ("hann", 17, None, 8, 16, 128),
        ("gaussian", 65, 16.0, 16, 64, 512),
        ("rectangular", 24, None, 4, 8, 96),
    ],
)
def test_dgt_against_triple_loop_oracle(kind, W, shape, a, M, L):
    rng = np.random.default_rng(21)
    window = make_window(kind, W, shape)
    frame = GaborFrame(window=window, a=a, M=M, signal_length=L)
    sig = rng.standard_normal(L) + 1j * rng.standard_normal(L)
    got = dgt(sig, frame).values
    ref = dgt_oracle(sig, window.samples, window.center, a, M)
    assert rel_err(got, ref) <= 1e-10


def test_tight_frame_unit_lattice():
    # Hop 1 with all L channels is always tight: A = B = L * ||g||^2.
    L = 48
    w = make_window("gaussian", 15, 4.0)
    frame = GaborFrame(window=w, a=1, M=L, signal_length=L)
    A, B = frame_bounds(frame)
    assert A == pytest.approx(B, rel=1e-12)
    assert B == pytest.approx(L * w.l2_norm**2, rel=1e-12)
    rng = np.random.default_rng(22)
    for _ in range(5):
        f = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        ratio = np.sum(np.abs(dgt(f, frame).values) ** 2) / np.sum(np.abs(f) ** 2)
        assert ratio == pytest.approx(B, rel=1e-10)


def test_bounds_scale_quadratically():
    w = make_window("hann", 32)
    frame = GaborFrame(window=w, a=8, M=32, signal_length=128)
    A1, B1 = frame_bounds(frame)
    from gaborscatter.windows import Window

    scaled = Window(samples=np.asarray(w.samples) * 3.0, kind="custom")
    A2, B2 = frame_bounds(GaborFrame(window=scaled, a=8, M=32, signal_length=128))
    assert A2 == pytest.approx(9.0 * A1, rel=1e-10)
    assert B2 == pytest.approx(9.0 * B1, rel=1e-10)


def test_painless_bounds_match_diagonal_oracle():
    w = make_window("hann", 64)
    frame = GaborFrame(window=w, a=16, M=64, signal_length=256)
    A, B = frame_bounds(frame)
    diag = painless_diagonal_oracle(w.samples, w.center, 16, 64, 256)
    assert A == pytest.approx(float(diag.min()), rel=1e-12)
    assert B == pytest.approx(float(diag.max()), rel=1e-12)


def test_power_iteration_matches_matrix_eigs():
    # Window support 17 > M 16 leaves the painless path; the iterative
    # estimates must agree with dense eigenvalues of the frame operator.
    w = make_window("gaussian", 17, 4.0)
    frame = GaborFrame(window=w, a=4, M=16, signal_length=64)
    A, B = frame_bounds(frame)
    S = np.zeros((64, 64), dtype=np.complex128)
    for j in range(frame.M):
        for k in range(frame.n_frames):
            g = frame.atom(j, k)
            S += np.outer(g, np.conj(g))
    eigs = np.linalg.eigvalsh(S)
    assert B == pytest.approx(float(eigs.max()), rel=1e-6)
    assert A == pytest.approx(float(eigs.min()), rel=1e-5)


def test_energy_sandwich_random_signals():
    w = make_window("gaussian", 33, 8.0)
    frame = GaborFrame(window=w, a=8, M=32, signal_length=256)
    A, B = frame_bounds(frame)
    rng = np.random.default_rng(23)
    for _ in range(20):
        f = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        ratio = float(np.sum(np.abs(dgt(f, frame).values) ** 2) / np.sum(np.abs(f) ** 2))
        assert A - 1e-8 * B <= ratio <= B + 1e-8 * B


def test_time_covariance():
    w = make_window("gaussian", 33, 8.0)
    frame = GaborFrame(window=w, a=8, M=32, signal_length=256)
    rng = np.random.default_rng(24)
    f = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    m = 5
    shifted = np.roll(f, frame.a * m)
    base = dgt(f, frame).values
    moved = dgt(shifted, frame).values
    rolled = np.roll(base, m, axis=1)
    # Moduli shift exactly; complex entries agree up to unimodular phase.
    assert np.max(np.abs(np.abs(moved) - np.abs(rolled))) <= 1e-10 * np.max(np.abs(base))
    mask = np.abs(rolled) > 1e-9 * np.max(np.abs(base))
    phases = np.abs(moved[mask] / rolled[mask])
    assert np.max(np.abs(phases - 1.0)) <= 1e-9


def test_periodization_identity():
    assert periodization_check(np.ones(64, dtype=complex), 8) <= 1e-12
    rng = np.random.default_rng(25)
    sig = rng.standard_normal(256) + 1j * rng.standard_normal(256)
    assert periodization_check(sig, 4) <= 1e-10
    assert periodization_check(sig, 1) <= 1e-12
    with pytest.raises(InvalidArgument):
        periodization_check(sig, 3)


def test_frame_validation_errors():
    w = make_window("hann", 16)
    with pytest.raises(InvalidArgument):
        GaborFrame(window=w, a=5, M=8, signal_length=64)  # a does not divide L
    with pytest.raises(InvalidArgument):
        GaborFrame(window=w, a=4, M=5, signal_length=64)  # M does not divide L
    with pytest.raises(InvalidArgument):
        GaborFrame(window=w, a=4, M=8, signal_length=8)  # window longer than L
    with pytest.raises(InvalidArgument):
        frame = GaborFrame(window=w, a=4, M=8, signal_length=64)
        dgt(np.zeros(32, dtype=complex), frame)


def test_gappy_lattice_not_a_frame():
    w = make_window("rectangular", 2)
    frame = GaborFrame(window=w, a=8, M=8, signal_length=64)
    with pytest.raises(NotAFrameError):
        frame_bounds(frame)


def test_convergence_error_carries_partials():
    w = make_window("gaussian", 17, 4.0)
    frame = GaborFrame(window=w, a=4, M=16, signal_length=64)
    with pytest.raises(ConvergenceError) as exc:
        frame_bounds(frame, rtol=1e-300, maxiter=3)
    assert exc.value.iterations == 3
    assert exc.value.upper is None or exc.value.upper > 0


def test_grid_shape_validation():
    w = make_window("hann", 16)
    frame = GaborFrame(window=w, a=4, M=8, signal_length=64)
    with pytest.raises(InvalidArgument):
        CoefficientGrid(values=np.zeros((8, 15)), frame=frame)


def test_atom_channel_range():
    w = make_window("hann", 16)
    frame = GaborFrame(window=w, a=4, M=8, signal_length=64)
    with pytest.raises(InvalidArgument):
        frame.atom(8)
