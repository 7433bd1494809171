import os
import subprocess
import sys

import numpy as np
import pytest

from gaborscatter import _kernels_np, kernels

try:
    from gaborscatter import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = [("numpy", _kernels_np)] + ([("compiled", _compiled)] if _compiled else [])


def cases(rng):
    for L, W, a, M in [(64, 9, 4, 8), (128, 17, 8, 16), (256, 300, 16, 32), (96, 96, 8, 12)]:
        sig = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        win = rng.standard_normal(W) + 1j * rng.standard_normal(W)
        yield sig, win, W // 2, a, M, L


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_fold_matches_direct_sum(name, mod):
    rng = np.random.default_rng(11)
    for sig, win, center, a, M, L in cases(rng):
        Z = mod.fold(sig, win, center, a, M)
        n_frames = L // a
        ref = np.zeros((n_frames, M), dtype=np.complex128)
        for k in range(n_frames):
            for i in range(win.shape[0]):
                t = (a * k - center + i) % L
                ref[k, t % M] += sig[t] * np.conj(win[i])
        assert np.max(np.abs(Z - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_spread_matches_direct_sum(name, mod):
    rng = np.random.default_rng(12)
    for sig, win, center, a, M, L in cases(rng):
        C = rng.standard_normal((L // a, M)) + 1j * rng.standard_normal((L // a, M))
        out = mod.spread(C, win, center, a, L)
        ref = np.zeros(L, dtype=np.complex128)
        for k in range(L // a):
            for i in range(win.shape[0]):
                t = (a * k - center + i) % L
                ref[t] += win[i] * C[k, t % M]
        assert np.max(np.abs(out - ref)) <= 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_backends_agree():
    if _compiled is None:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(13)
    for sig, win, center, a, M, L in cases(rng):
        Za = _kernels_np.fold(sig, win, center, a, M)
        Zb = _compiled.fold(sig, win, center, a, M)
        assert np.max(np.abs(Za - Zb)) <= 1e-13 * max(1.0, np.max(np.abs(Za)))
        sa = _kernels_np.spread(Za, win, center, a, L)
        sb = _compiled.spread(Zb, win, center, a, L)
        assert np.max(np.abs(sa - sb)) <= 1e-13 * max(1.0, np.max(np.abs(sa)))


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_adjointness(name, mod):
    # <fold(f), C> must equal <f, spread(C)> — fold and spread are adjoints.
    rng = np.random.default_rng(14)
    for sig, win, center, a, M, L in cases(rng):
        C = rng.standard_normal((L // a, M)) + 1j * rng.standard_normal((L // a, M))
        lhs = np.vdot(C, mod.fold(sig, win, center, a, M))
        rhs = np.vdot(mod.spread(C, win, center, a, L), sig)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@pytest.mark.parametrize("name,mod", BACKENDS)
def test_read_only_inputs_accepted(name, mod):
    rng = np.random.default_rng(15)
    sig = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    win = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    sig.setflags(write=False)
    win.setflags(write=False)
    Z = mod.fold(sig, win, 4, 4, 8)
    Z.setflags(write=False)
    out = mod.spread(Z, win, 4, 4, 64)
    assert np.all(np.isfinite(out))


def test_dispatcher_env_var_forces_numpy():
    code = (
        "import gaborscatter.kernels as k; "
        "print(k.fold.__module__)"
    )
    env = dict(os.environ, GABORSCATTER_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert out.returncode == 0, out.stderr
    assert "_kernels_np" in out.stdout


def test_dispatcher_default_prefers_compiled():
    if _compiled is None:
        pytest.skip("compiled extension not built")
    if os.environ.get("GABORSCATTER_PURE"):
        pytest.skip("pure-numpy backend forced by environment")
    assert "gaborscatter._kernels" == kernels.fold.__module__
