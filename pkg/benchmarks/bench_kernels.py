"""Benchmark: compiled kernel vs pure-Python fallback on the hot paths.

Run:  python benchmarks/bench_kernels.py [--full]

Covers the three kernel entry points: prime sieving, elliptic-curve
traces (the inner loop of the empirical density tables), and the
supersingular j-invariant scan over F_(l^2).
"""

import argparse
import time

import bpx._eckernel_py as pure

try:
    import bpx._eckernel as compiled
except ImportError:
    compiled = None

A11, B11 = -27 * 496, -54 * 20008  # short model of the level 11 curve


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t0, out


def row(name, pure_fn, comp_fn, *args):
    tp, want = timed(pure_fn, *args)
    if comp_fn is None:
        print(f"{name:<42} pure {tp:9.3f}s   compiled      n/a")
        return
    tc, got = timed(comp_fn, *args)
    assert got == want, f"backend disagreement in {name}"
    print(f"{name:<42} pure {tp:9.3f}s   compiled {tc:8.3f}s   x{tp / tc:6.1f}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--full", action="store_true",
                    help="benchmark the full X = 10^6 trace workload")
    args = ap.parse_args()

    print(f"compiled kernel available: {compiled is not None}\n")
    c = compiled
    row("primes_below(10^7)", pure.primes_below,
        c.primes_below if c else None, 10 ** 7)

    primes = [p for p in pure.primes_below(10 ** 6)
              if p >= 5 and p != 11]
    band = primes[-400:]
    row("ec_traces, 400 primes near 10^6 (BSGS)", pure.ec_traces,
        c.ec_traces if c else None, A11, B11, band)

    small = [p for p in primes if p < 10000][-300:]
    row("ec_traces, 300 primes < 10^4 (naive)", pure.ec_traces,
        c.ec_traces if c else None, A11, B11, small)

    row("supersingular_js_fq2(47)", pure.supersingular_js_fq2,
        c.supersingular_js_fq2 if c else None, 47, 5)

    if args.full:
        row(f"ec_traces, all {len(primes)} primes < 10^6", pure.ec_traces,
            c.ec_traces if c else None, A11, B11, primes)


if __name__ == "__main__":
    main()
