"""Compare the compiled kernels with the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--n 5000] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from sbmeme import _pykernels

try:
    from sbmeme import _ckernels
except ImportError:
    _ckernels = None


def cases(n, rng):
    v = np.ascontiguousarray(rng.poisson(20, n).astype(float))
    peak = n // 2
    return {
        "spike_scores(k=5)": lambda m: m.spike_scores(v, 5),
        "chord_argmax": lambda m: m.chord_argmax(v, 0, peak, 0, peak - 1, True),
        "beauty_sum": lambda m: m.beauty_sum(v, 0, peak, n - 1),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5000, help="series length")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    print(f"series length {args.n}, best of {args.repeat}")
    print(f"{'kernel':<20}{'python (us)':>14}{'cython (us)':>14}{'speed-up':>10}")
    for name, call in cases(args.n, rng).items():
        py = min(timeit.repeat(lambda: call(_pykernels), number=10, repeat=args.repeat)) / 10
        if _ckernels is None:
            print(f"{name:<20}{py * 1e6:>14.1f}{'n/a':>14}{'':>10}")
            continue
        cy = min(timeit.repeat(lambda: call(_ckernels), number=10, repeat=args.repeat)) / 10
        print(f"{name:<20}{py * 1e6:>14.1f}{cy * 1e6:>14.1f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
