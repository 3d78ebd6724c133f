"""Time the compiled and numpy kernels on representative workloads.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from mlqi import _backend
from mlqi.multilevel import RunConfig, multilevel_sampled, multilevel_spectral
from mlqi.spectral import DEFAULT_SPEC
from mlqi.targets import expcos


def workloads():
    rng = np.random.default_rng(0)
    freqs = np.arange(4096, dtype=np.int64)
    coeffs = rng.normal(size=freqs.size)
    values = rng.normal(size=256)
    u = rng.uniform(0, 256, size=8192)
    target = expcos()
    t_max = DEFAULT_SPEC.t_max

    def scatter():
        out = np.zeros(8192)
        _backend.kernels.spectral_scatter(freqs, coeffs, 64, t_max, 1e-40, out)

    def window():
        _backend.kernels.window_sum(values, u, 14.0)

    def spectral_run():
        multilevel_spectral(target.series, RunConfig(ell0=1, levels=10))

    def sampled_run():
        multilevel_sampled(target.func, RunConfig(ell0=1, levels=8, mode="sampled"))

    return {
        "spectral_scatter (4096 freqs, n=64)": scatter,
        "window_sum (8192 points)": window,
        "multilevel spectral expcos, 10 levels": spectral_run,
        "multilevel sampled expcos, 8 levels": sampled_run,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    names = _backend.available()
    jobs = workloads()
    results = {}
    for name in names:
        previous = _backend.use(name)
        try:
            for label, fn in jobs.items():
                fn()  # warm up
                best = min(timeit.repeat(fn, number=1, repeat=args.repeat))
                results[(label, name)] = best
        finally:
            _backend.use(previous)
    width = max(len(label) for label in jobs)
    header = f"{'workload':<{width}}  " + "  ".join(f"{n:>10}" for n in names)
    if "cython" in names:
        header += "  speedup"
    print(header)
    for label in jobs:
        row = f"{label:<{width}}  " + "  ".join(f"{results[(label, n)] * 1e3:>8.2f}ms" for n in names)
        if "cython" in names:
            row += f"  {results[(label, 'python')] / results[(label, 'cython')]:>6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
