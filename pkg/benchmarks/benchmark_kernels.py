#!/usr/bin/env python3
"""Throughput comparison of the compiled Viterbi kernel against the
pure-Python fallback on representative decoding workloads.

Usage: python benchmarks/benchmark_kernels.py [--frames N]
"""

import argparse
import time

import numpy as np

from cnecc import _kernels
from cnecc._kernels import viterbi_py
from cnecc.convcode import build_trellis
from cnecc.fixtures import load_builtin_code


def bench(fn, tr, received, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(tr.next_state, tr.outputs, received, 0)
        best = min(best, time.perf_counter() - t0)
    frames, steps, _ = received.shape
    return frames * steps / best  # trellis steps per second


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--frames", type=int, default=64)
    parser.add_argument("--blocks", type=int, default=60)
    args = parser.parse_args()

    try:
        from cnecc._kernels import _viterbi as compiled
    except ImportError:
        compiled = None
        print("compiled kernel not built; showing pure-Python numbers only")

    rng = np.random.default_rng(7)
    print(f"workload: {args.frames} frames x {args.blocks} blocks, best of 3")
    print(f"{'code':<10} {'states':>7} {'python blk/s':>14} {'compiled blk/s':>15} {'speedup':>9}")
    for name in ("c1", "c2", "c3", "ternary9"):
        gen = load_builtin_code(name)
        tr = build_trellis(gen)
        received = rng.integers(
            0, gen.field.q, size=(args.frames, args.blocks, gen.n)
        ).astype(np.uint8)
        py_rate = bench(viterbi_py.viterbi_frames, tr, received)
        if compiled is not None:
            c_rate = bench(compiled.viterbi_frames, tr, received)
            print(
                f"{name:<10} {tr.num_states:>7} {py_rate:>14.0f} {c_rate:>15.0f} "
                f"{c_rate / py_rate:>8.1f}x"
            )
        else:
            print(f"{name:<10} {tr.num_states:>7} {py_rate:>14.0f} {'-':>15} {'-':>9}")
    print(f"active backend at import: {_kernels.backend_name()}")


if __name__ == "__main__":
    main()
