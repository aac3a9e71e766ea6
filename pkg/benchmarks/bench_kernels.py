"""Benchmark the compiled symbol kernels against the NumPy reference.

Usage: python benchmarks/bench_kernels.py [size ...]

Sizes are grid edge lengths; each benchmark runs the per-mode symbol
application over the flattened size x size frequency grid, which is the hot
loop of every filter evaluation. An FFT of the same size is timed alongside
for context (one evolve costs four FFTs plus one symbol application).
"""

import sys
import time

import numpy as np

from crossdiff._kernels import _ref
from crossdiff.matrices import exponent_branch, validate_matrix

try:
    from crossdiff._kernels import _fast
except ImportError:
    _fast = None


def _time(fn, repeats=7):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench(size: int) -> None:
    rng = np.random.default_rng(7)
    n = size * size
    xi = rng.uniform(0.0, 60.0, size=n)
    uhat = rng.normal(size=n) + 1j * rng.normal(size=n)
    vhat = rng.normal(size=n) + 1j * rng.normal(size=n)
    d = validate_matrix(1, 0.9, 1, 1)
    branch, m = exponent_branch(d)
    args = (2.0, 0.8, d.q, d.r, d.d12, d.d21, branch, m)

    ref_s = _time(lambda: _ref.apply_symbol(uhat, vhat, xi, *args))
    fft_s = _time(lambda: np.fft.fft2(uhat.reshape(size, size)))
    line = f"{size:5d}^2 | python {ref_s * 1e3:8.2f} ms"
    if _fast is not None:
        fast_s = _time(lambda: _fast.apply_symbol(uhat, vhat, xi, *args))
        line += f" | compiled {fast_s * 1e3:8.2f} ms | speedup {ref_s / fast_s:5.2f}x"
    else:
        line += " | compiled      n/a"
    line += f" | (one fft2: {fft_s * 1e3:.2f} ms)"
    print(line)


def main() -> int:
    sizes = [int(a) for a in sys.argv[1:]] or [256, 512, 1024]
    if _fast is None:
        print("compiled kernels not built; showing the NumPy reference only")
    print("apply_symbol over the full frequency grid (best of 7):")
    for size in sizes:
        bench(size)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
