"""Benchmark the compiled determinant kernels against the pure-Python
fallback.  Both backends must return bit-identical results; this script
verifies agreement while timing three workloads:

  det       batches of random sign-matrix determinants, orders 4..12
  scan      all five-run deletions of a 2^4 model (C(16,5) = 4368 subsets)
  spectrum  full normalized enumeration of order-n sign determinants

Usage: python3 benchmarks/bench_kernels.py [--batch 2000] [--slow]
--slow adds the order-6 spectrum on the pure backend (about a minute).
"""
import argparse
import time

import numpy as np

from satdes.kernels import (
    available_backends,
    det_sign_matrix,
    set_backend,
    spectrum_raw,
    subset_abs_dets,
)
from satdes.model import ModelSpec, all_runs, sign_of


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def bench_dets(batch: int, seed: int):
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(batch):
        n = int(rng.integers(4, 13))
        cases.append(rng.choice([-1, 1], size=(n, n)).astype(np.int64))
    results = {}
    for name in available_backends():
        prev = set_backend(name)
        try:
            dets, elapsed = _timed(lambda: [det_sign_matrix(m) for m in cases])
        finally:
            set_backend(prev)
        results[name] = (dets, elapsed)
    return results


def bench_scan():
    spec = ModelSpec.from_labels(4, ["F123", "F124", "F134", "F234", "F1234"])
    block = np.array(
        [[sign_of(r, e) for e in spec.negligible] for r in all_runs(4)],
        dtype=np.int8,
    )
    results = {}
    for name in available_backends():
        prev = set_backend(name)
        try:
            dets, elapsed = _timed(lambda: subset_abs_dets(block, 5))
        finally:
            set_backend(prev)
        results[name] = (dets, elapsed)
    return results


def bench_spectrum(order: int, backends):
    results = {}
    for name in backends:
        prev = set_backend(name)
        try:
            vals, elapsed = _timed(lambda: spectrum_raw(order))
        finally:
            set_backend(prev)
        results[name] = (vals, elapsed)
    return results


def _report(title: str, results):
    print(f"\n{title}")
    baseline = None
    for name in sorted(results):
        _, elapsed = results[name]
        if baseline is None or elapsed < baseline:
            baseline = elapsed
    for name in sorted(results):
        _, elapsed = results[name]
        ratio = elapsed / baseline if baseline else 1.0
        print(f"  {name:10s} {elapsed * 1000:10.2f} ms   ({ratio:.1f}x)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--batch", type=int, default=2000,
                        help="random determinants per backend")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--slow", action="store_true",
                        help="include the order-6 spectrum on every backend")
    args = parser.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    if len(backends) == 1:
        print("compiled extension not built; timing the fallback only")

    det_results = bench_dets(args.batch, args.seed)
    values = {name: dets for name, (dets, _) in det_results.items()}
    assert len({tuple(v) for v in values.values()}) == 1, "backend mismatch"
    _report(f"det: {args.batch} random sign matrices, orders 4..12",
            det_results)

    scan_results = bench_scan()
    arrays = [dets for dets, _ in scan_results.values()]
    for other in arrays[1:]:
        assert np.array_equal(arrays[0], other), "backend mismatch"
    _report("scan: 4368 five-run deletions of a 2^4 model", scan_results)

    spec_results = bench_spectrum(5, backends)
    for v, _ in spec_results.values():
        assert tuple(v.tolist()) == (0, 16, 32, 48), "backend mismatch"
    _report("spectrum: order 5 (2^16 normalized matrices)", spec_results)

    six_backends = backends if args.slow else tuple(
        b for b in backends if b == "compiled"
    )
    if six_backends:
        spec6 = bench_spectrum(6, six_backends)
        for v, _ in spec6.values():
            assert tuple(v.tolist()) == (0, 32, 64, 96, 128, 160)
        _report("spectrum: order 6 (2^25 normalized matrices)", spec6)
    else:
        print("\nspectrum order 6 skipped (pure backend only; pass --slow)")

    print("\nall backends agreed bit for bit")


if __name__ == "__main__":
    main()
