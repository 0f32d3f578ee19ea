"""Compare the compiled special-function kernels with the pure-Python lane.

Runs the hot per-point operations (CDF special functions, histogram
counting and the L1 error reduction) through both implementations and
prints a timing table. Invoke from the repository root:

    python3 benchmarks/bench_kernels.py [--points 2000] [--repeat 3]
"""

import argparse
import time

import numpy as np

from pdfcube import _kernels_py

try:
    from pdfcube import _speckernel
except ImportError:
    _speckernel = None


def _bench(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def _workload(mod, points, rng):
    xs = rng.uniform(-4, 4, size=points)
    a_s = rng.uniform(0.5, 10, size=points)
    g_x = rng.uniform(0.0, 20, size=points)
    b_x = rng.uniform(0.0, 1.0, size=points)
    values = rng.normal(size=2048)
    freqs = np.asarray(
        mod.histogram_counts(values, float(values.min()),
                             float(values.max()), 100),
        dtype=np.float64,
    )
    probs = rng.dirichlet(np.ones(100))

    return {
        "erf": lambda: [mod.erf(float(x)) for x in xs],
        "gammainc_lower": lambda: [
            mod.gammainc_lower(float(a), float(x)) for a, x in zip(a_s, g_x)
        ],
        "betainc_reg": lambda: [
            mod.betainc_reg(float(a), float(a) + 1.0, float(x))
            for a, x in zip(a_s, b_x)
        ],
        "histogram_counts": lambda: [
            mod.histogram_counts(values, float(values.min()),
                                 float(values.max()), 100)
            for _ in range(200)
        ],
        "l1_prob_error": lambda: [
            mod.l1_prob_error(freqs, 2048.0, probs) for _ in range(2000)
        ],
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=2000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    lanes = [("pure", _kernels_py)]
    if _speckernel is not None:
        lanes.append(("compiled", _speckernel))
    else:
        print("compiled lane unavailable; benchmarking the pure lane only")

    rng = np.random.default_rng(0)
    names = list(_workload(_kernels_py, 1, rng))
    timings = {}
    for lane_name, mod in lanes:
        work = _workload(mod, args.points, np.random.default_rng(0))
        for op in names:
            timings[(lane_name, op)] = _bench(work[op], args.repeat)

    width = max(len(n) for n in names)
    header = f"{'operation':<{width}}  {'pure (s)':>10}"
    if _speckernel is not None:
        header += f"  {'compiled (s)':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for op in names:
        line = f"{op:<{width}}  {timings[('pure', op)]:>10.4f}"
        if _speckernel is not None:
            c = timings[("compiled", op)]
            line += f"  {c:>12.4f}  {timings[('pure', op)] / c:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
