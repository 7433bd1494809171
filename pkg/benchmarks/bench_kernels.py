"""Timing comparison of the compiled kernels against the numpy fallback.

Runs fold / spread / full transform at a few realistic sizes and prints a
table of best-of-N wall times plus the speedup factor.  Usage:

    python3 benchmarks/bench_kernels.py [--repeats 7]

The compiled extension is used when it was built; GABORSCATTER_PURE=1 in
the environment forces the fallback, so running this script both ways (or
letting it import both backends directly, the default) shows the gap.
"""

import argparse
import time

import numpy as np

from gaborscatter import _kernels_np
from gaborscatter.gabor import GaborFrame, dgt
from gaborscatter.windows import make_window

try:
    from gaborscatter import _kernels as _compiled
except ImportError:
    _compiled = None

CASES = [
    # (L, W, sigma, a, M)
    (8192, 255, 64.0, 64, 256),
    (65536, 1023, 256.0, 128, 1024),
    (262144, 1023, 256.0, 256, 1024),
]


def best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    if _compiled is None:
        print("compiled extension not built; timing the numpy backend only")

    rng = np.random.default_rng(7)
    header = f"{'case':>24} {'numpy':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for L, W, sigma, a, M in CASES:
        window = make_window("gaussian", W, sigma)
        frame = GaborFrame(window=window, a=a, M=M, signal_length=L)
        signal = rng.standard_normal(L) + 1j * rng.standard_normal(L)
        w = window.samples.astype(np.complex128)

        t_np = best_of(
            lambda: _kernels_np.fold(signal, w, window.center, a, M), args.repeats
        )
        folded = _kernels_np.fold(signal, w, window.center, a, M)
        t_np_sp = best_of(
            lambda: _kernels_np.spread(folded, w, window.center, a, L), args.repeats
        )
        if _compiled is not None:
            t_c = best_of(
                lambda: _compiled.fold(signal, w, window.center, a, M), args.repeats
            )
            t_c_sp = best_of(
                lambda: _compiled.spread(folded, w, window.center, a, L), args.repeats
            )
        else:
            t_c = t_c_sp = float("nan")

        t_dgt = best_of(lambda: dgt(signal, frame), args.repeats)

        case = f"L={L} W={W} a={a} M={M}"
        print(f"{case:>24} {t_np * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms {t_np / t_c:>8.2f}x  fold")
        print(
            f"{'':>24} {t_np_sp * 1e3:>10.3f}ms {t_c_sp * 1e3:>10.3f}ms "
            f"{t_np_sp / t_c_sp:>8.2f}x  spread"
        )
        print(f"{'':>24} {'':>12} {t_dgt * 1e3:>10.3f}ms {'':>9}  dgt (active backend)")
    print()
    print("active backend for dgt:", "compiled" if _compiled is not None else "numpy")


if __name__ == "__main__":
    main()
