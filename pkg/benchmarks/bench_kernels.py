"""Time the compiled kernels against the pure-Python/numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best-of-N time for each backend and
the speed-up.  Both backends must agree on every output before timing.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from hanyin import _kernels_py

try:
    from hanyin import _kernels
except ImportError:  # extension not built
    _kernels = None


def _cases():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(44100)
    curves = np.abs(rng.standard_normal((64, 2048)))
    levels = np.abs(np.sin(np.linspace(0, 40, 20000))) * 0.05
    f0 = 150 + rng.standard_normal(5000)
    return {
        "lcg_uniform(1 s of noise)": lambda k: k.lcg_uniform(12345, 44100),
        "resonate(1 s)": lambda k: k.resonate(x, 0.05, 1.9, -0.95),
        "eac_enhance(64 x 2048)": lambda k: k.eac_enhance(curves),
        "hysteresis(20k frames)": lambda k: k.hysteresis(levels, 0.02, 0.01, 6),
        "median3(5k)": lambda k: k.median3(f0),
    }


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return list(a) == list(b)


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; build with `pip install -e .`")
    print(f"{'kernel':28s} {'python ms':>10s} {'cython ms':>10s} {'speed-up':>9s}")
    for name, call in _cases().items():
        t_py = min(timeit.repeat(lambda: call(_kernels_py), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:28s} {t_py * 1e3:10.3f} {'-':>10s} {'-':>9s}")
            continue
        if not _same(call(_kernels_py), call(_kernels)):
            raise SystemExit(f"backends disagree on {name}")
        t_cy = min(timeit.repeat(lambda: call(_kernels), number=1, repeat=args.repeat))
        print(f"{name:28s} {t_py * 1e3:10.3f} {t_cy * 1e3:10.3f} {t_py / t_cy:8.1f}x")


if __name__ == "__main__":
    main()
