"""Benchmark the compiled contraction kernels against the NumPy reference.

Runs the three kernel entry points (batched evaluation, single-slot
contraction, alternating-ascent norm bound) on representative shapes and
prints per-kernel timings plus the speedup of the compiled module.  The
pure-Python module always runs; the compiled one is skipped with a note if
the extension was not built.

    python3 benchmarks/bench_kernels.py [--repeats N] [--samples S]
"""

import argparse
import time

import numpy as np

from bilipjet import _mlkernels_py as py_kernels

try:
    from bilipjet import _mlkernels as c_kernels
except ImportError:
    c_kernels = None

SHAPES = [
    # (in_dim n, arity k, out_dim d)
    (1, 3, 1),
    (2, 2, 2),
    (2, 4, 2),
    (3, 3, 3),
    (5, 2, 5),
]


def _inputs(n, k, d, samples, rng):
    T2 = rng.standard_normal((d, n ** k))
    args = rng.standard_normal((samples, max(k, 1), n))
    args /= np.maximum(np.linalg.norm(args, axis=2, keepdims=True), 1e-12)
    return T2, args


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=7,
                    help="timing repetitions per case (best-of)")
    ap.add_argument("--samples", type=int, default=4096,
                    help="argument tuples per batch")
    ap.add_argument("--rounds", type=int, default=4,
                    help="ascent rounds for the norm kernel")
    opts = ap.parse_args()

    rng = np.random.default_rng(0)
    if c_kernels is None:
        print("compiled extension bilipjet._mlkernels not available; "
              "showing the NumPy reference only")
    header = f"{'kernel':<18}{'(n,k,d)':<12}{'python':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))

    geo_num, geo_den = 0.0, 0
    for n, k, d in SHAPES:
        T2, args = _inputs(n, k, d, opts.samples, rng)
        starts = args[:64].copy()
        cases = [
            ("contract_batch", lambda m: m.contract_batch(T2, n, k, args)),
            ("slot_matrix", lambda m: m.slot_matrix_batch(T2, n, k, args, 0)),
            ("ascent_norm", lambda m: m.ascent_norm(T2, n, k, starts,
                                                    opts.rounds, 10)),
        ]
        for label, call in cases:
            t_py, out_py = _time(lambda: call(py_kernels), opts.repeats)
            if c_kernels is None:
                print(f"{label:<18}{f'({n},{k},{d})':<12}{t_py * 1e3:>10.3f}ms"
                      f"{'—':>12}{'—':>10}")
                continue
            t_c, out_c = _time(lambda: call(c_kernels), opts.repeats)
            agree = np.allclose(np.asarray(out_py), np.asarray(out_c),
                                rtol=1e-9, atol=1e-12)
            ratio = t_py / t_c if t_c > 0 else float("inf")
            geo_num += np.log(ratio)
            geo_den += 1
            mark = "" if agree else "  !! MISMATCH"
            print(f"{label:<18}{f'({n},{k},{d})':<12}{t_py * 1e3:>10.3f}ms"
                  f"{t_c * 1e3:>10.3f}ms{ratio:>9.1f}x{mark}")

    if geo_den:
        print("-" * len(header))
        print(f"geometric-mean speedup: {np.exp(geo_num / geo_den):.1f}x "
              f"over {geo_den} cases (samples={opts.samples}, "
              f"best of {opts.repeats})")


if __name__ == "__main__":
    main()
